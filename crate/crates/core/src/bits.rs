//! Basis-label conventions.
//!
//! Qubit 0 is the least significant bit of a basis index. Labels are
//! rendered `q_{n-1} ... q_0`, so the leftmost character belongs to the
//! highest qubit index.

use crate::error::{Error, Result};

/// Render basis index `index` of an `n`-qubit register as a display label.
pub fn label(index: usize, n: usize) -> String {
    (0..n)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parse a display label back to its basis index.
pub fn parse_label(label: &str, n: usize) -> Result<usize> {
    if label.len() != n {
        return Err(Error::invalid(format!(
            "label {label:?} has {} characters, expected {n}",
            label.len()
        )));
    }
    label.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::invalid(format!(
            "label {label:?} contains {c:?}; only '0' and '1' are allowed"
        ))),
    })
}

/// All `2^n` labels in ascending index order.
pub fn all_labels(n: usize) -> Vec<String> {
    (0..1usize << n).map(|i| label(i, n)).collect()
}
