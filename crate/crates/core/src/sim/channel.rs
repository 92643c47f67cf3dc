use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for the completeness relation `sum K^dag K = I`.
pub const TRACE_PRESERVING_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map given by Kraus operators on
/// `arity` qubits. Operators are row-major `2^arity` square matrices in the
/// local basis (bit `j` of the local index is the `j`-th target).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    arity: usize,
    ops: Vec<Vec<C64>>,
}

impl KrausChannel {
    pub fn new(arity: usize, ops: Vec<Vec<C64>>) -> Result<Self> {
        let dim = 1usize << arity;
        if arity == 0 || ops.is_empty() {
            return Err(Error::invalid("a channel needs at least one operator on at least one qubit"));
        }
        if let Some(op) = ops.iter().find(|op| op.len() != dim * dim) {
            return Err(Error::invalid(format!(
                "Kraus operator has {} entries, expected {}",
                op.len(),
                dim * dim
            )));
        }
        let ch = KrausChannel { arity, ops };
        let err = ch.completeness_error();
        if err > TRACE_PRESERVING_TOL {
            return Err(Error::invalid(format!(
                "operators are not trace preserving (deviation {err:e})"
            )));
        }
        Ok(ch)
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1usize << arity;
        let mut id = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            id[i * dim + i] = C64::new(1.0, 0.0);
        }
        KrausChannel { arity, ops: vec![id] }
    }

    /// Unitary conjugation as a one-operator channel.
    pub fn unitary(arity: usize, u: Vec<C64>) -> Result<Self> {
        Self::new(arity, vec![u])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn operators(&self) -> &[Vec<C64>] {
        &self.ops
    }

    /// Max-entry deviation of `sum K^dag K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let dim = 1usize << self.arity;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let mut s = C64::new(0.0, 0.0);
                for k in &self.ops {
                    for r in 0..dim {
                        s += k[r * dim + i].conj() * k[r * dim + j];
                    }
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - expect).norm());
            }
        }
        worst
    }

    /// Channel that applies `first` and then `second` on the same qubits.
    pub fn then(&self, second: &KrausChannel) -> Result<KrausChannel> {
        if self.arity != second.arity {
            return Err(Error::invalid("cannot compose channels of different arity"));
        }
        let dim = 1usize << self.arity;
        let mut ops = Vec::with_capacity(self.ops.len() * second.ops.len());
        for b in &second.ops {
            for a in &self.ops {
                let mut prod = vec![C64::new(0.0, 0.0); dim * dim];
                for i in 0..dim {
                    for k in 0..dim {
                        let bik = b[i * dim + k];
                        if bik == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for j in 0..dim {
                            prod[i * dim + j] += bik * a[k * dim + j];
                        }
                    }
                }
                if prod.iter().any(|z| z.norm() > 0.0) {
                    ops.push(prod);
                }
            }
        }
        KrausChannel::new(self.arity, ops)
    }
}

/// Apply a dense `2^m` square matrix on `qubits` of an amplitude array.
pub(crate) fn apply_dense(amps: &mut [C64], qubits: &[usize], matrix: &[C64]) {
    let m = qubits.len();
    let dim = 1usize << m;
    let mask = qubits.iter().fold(0usize, |acc, &q| acc | 1 << q);
    let offsets: Vec<usize> = (0..dim)
        .map(|j| {
            qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (b, &q)| acc | (j >> b & 1) << q)
        })
        .collect();
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (j, off) in offsets.iter().enumerate() {
            buf[j] = amps[base | off];
        }
        for (i, off) in offsets.iter().enumerate() {
            let row = &matrix[i * dim..(i + 1) * dim];
            amps[base | off] = row.iter().zip(&buf).map(|(u, v)| u * v).sum();
        }
    }
}
