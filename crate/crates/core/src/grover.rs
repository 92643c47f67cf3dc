//! Grover oracles, diffusion and full search circuits, plus the closed-form
//! success predictions used to check them.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::sim::{Circuit, StateVector};

/// The eight single-marked oracles of the 3-qubit study, in table order.
pub const SINGLE_MARKED: [&str; 8] = ["000", "001", "010", "011", "100", "101", "110", "111"];

/// The nine two-marked oracles of the 3-qubit study, in table order.
pub const MARKED_PAIRS: [[&str; 2]; 9] = [
    ["000", "111"],
    ["001", "100"],
    ["011", "100"],
    ["010", "111"],
    ["000", "110"],
    ["010", "101"],
    ["101", "110"],
    ["101", "111"],
    ["100", "111"],
];

/// Marked sets characterized by state tomography.
pub const TOMOGRAPHY_CASES: [&[&str]; 5] = [
    &["010"],
    &["101"],
    &["000", "111"],
    &["101", "110"],
    &["101", "111"],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OracleStyle {
    /// Sign flip on marked states directly.
    #[default]
    Phase,
    /// Bit flip onto an ancilla held in `|->`; the sign appears by kickback.
    Boolean,
}

/// Search space of `2^n` labels with a nonempty proper subset marked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawOracleSpec")]
pub struct OracleSpec {
    n: usize,
    marked: Vec<String>,
    style: OracleStyle,
}

#[derive(Deserialize)]
struct RawOracleSpec {
    n: usize,
    marked: Vec<String>,
    #[serde(default)]
    style: OracleStyle,
}

impl TryFrom<RawOracleSpec> for OracleSpec {
    type Error = Error;

    fn try_from(raw: RawOracleSpec) -> Result<Self> {
        OracleSpec::new(raw.n, raw.marked, raw.style)
    }
}

impl OracleSpec {
    pub fn new<S: AsRef<str>>(n: usize, marked: impl IntoIterator<Item = S>, style: OracleStyle) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("search register needs at least one qubit"));
        }
        let marked: Vec<String> = marked.into_iter().map(|s| s.as_ref().to_string()).collect();
        if marked.is_empty() {
            return Err(Error::invalid("marked set is empty"));
        }
        for (i, m) in marked.iter().enumerate() {
            bits::parse_label(m, n)?;
            if marked[..i].contains(m) {
                return Err(Error::invalid(format!("label {m} is marked twice")));
            }
        }
        if marked.len() >= 1 << n {
            return Err(Error::invalid(format!(
                "{} marked labels leave nothing unmarked in a space of {}",
                marked.len(),
                1usize << n
            )));
        }
        Ok(OracleSpec { n, marked, style })
    }

    pub fn phase<S: AsRef<str>>(n: usize, marked: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(n, marked, OracleStyle::Phase)
    }

    pub fn boolean<S: AsRef<str>>(n: usize, marked: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(n, marked, OracleStyle::Boolean)
    }

    /// Parse `"000,111"` style lists; the width is taken from the labels.
    pub fn parse_list(list: &str, style: OracleStyle) -> Result<Self> {
        let labels: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let n = labels.first().map(|l| l.len()).unwrap_or(0);
        Self::new(n, labels, style)
    }

    pub fn with_style(&self, style: OracleStyle) -> Self {
        OracleSpec { style, ..self.clone() }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn search_space(&self) -> usize {
        1 << self.n
    }

    pub fn marked(&self) -> &[String] {
        &self.marked
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    pub fn marked_indices(&self) -> Vec<usize> {
        self.marked
            .iter()
            .map(|m| bits::parse_label(m, self.n).expect("validated on construction"))
            .collect()
    }

    pub fn style(&self) -> OracleStyle {
        self.style
    }

    /// The search predicate.
    pub fn is_marked(&self, index: usize) -> bool {
        self.marked_indices().contains(&index)
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.marked.join(","))
    }
}

/// A search run: oracle, Grover-operator applications, and how many times
/// the whole experiment is repeated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroverPlan {
    pub oracle: OracleSpec,
    pub iterations: usize,
    pub repetitions: usize,
}

impl GroverPlan {
    /// One Grover iteration, one repetition.
    pub fn new(oracle: OracleSpec) -> Self {
        GroverPlan { oracle, iterations: 1, repetitions: 1 }
    }

    pub fn iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn repetitions(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }

    /// Total register width including the ancilla of a boolean oracle.
    pub fn width(&self) -> usize {
        match self.oracle.style {
            OracleStyle::Phase => self.oracle.n,
            OracleStyle::Boolean => self.oracle.n + 1,
        }
    }
}

/// X on every qubit whose bit in `index` is zero.
fn flip_zero_bits(circ: &mut Circuit, index: usize, n: usize) -> Result<()> {
    for q in (0..n).filter(|q| index >> q & 1 == 0) {
        circ.x(q)?;
    }
    Ok(())
}

/// Phase oracle `|x> -> (-1)^f(x) |x>` as one conjugated MCZ block per
/// marked label.
pub fn phase_oracle(spec: &OracleSpec) -> Result<Circuit> {
    if spec.style != OracleStyle::Phase {
        return Err(Error::invalid("phase_oracle needs a phase-style spec"));
    }
    let n = spec.n;
    let all: Vec<usize> = (0..n).collect();
    let mut circ = Circuit::new(n);
    for idx in spec.marked_indices() {
        flip_zero_bits(&mut circ, idx, n)?;
        circ.mcz(&all)?;
        flip_zero_bits(&mut circ, idx, n)?;
    }
    Ok(circ)
}

/// Boolean oracle on `n + 1` qubits: per marked label, an MCX from the work
/// register onto ancilla qubit `n`. With the ancilla in `|->` this acts as
/// the phase oracle on the work register.
///
/// The ancilla preparation (X then H) is not included; [`ancilla_preparation`]
/// supplies it and [`grover_circuit`] places it in the initialization layer.
pub fn boolean_oracle(spec: &OracleSpec) -> Result<Circuit> {
    if spec.style != OracleStyle::Boolean {
        return Err(Error::invalid("boolean_oracle needs a boolean-style spec"));
    }
    let n = spec.n;
    let controls: Vec<usize> = (0..n).collect();
    let mut circ = Circuit::new(n + 1);
    for idx in spec.marked_indices() {
        flip_zero_bits(&mut circ, idx, n)?;
        circ.mcx(&controls, n)?;
        flip_zero_bits(&mut circ, idx, n)?;
    }
    Ok(circ)
}

/// X then H on the ancilla (qubit `n`), taking `|0>` to `|->`.
pub fn ancilla_preparation(n: usize) -> Result<Circuit> {
    let mut circ = Circuit::new(n + 1);
    circ.x(n)?.h(n)?;
    Ok(circ)
}

pub fn oracle(spec: &OracleSpec) -> Result<Circuit> {
    match spec.style {
        OracleStyle::Phase => phase_oracle(spec),
        OracleStyle::Boolean => boolean_oracle(spec),
    }
}

/// Reflection about the uniform state: `H X MCZ X H` on every qubit. This
/// equals `-(2|s><s| - I)`.
pub fn diffusion(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::invalid("diffusion needs at least one qubit"));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut circ = Circuit::new(n);
    for &q in &all {
        circ.h(q)?;
    }
    for &q in &all {
        circ.x(q)?;
    }
    circ.mcz(&all)?;
    for &q in &all {
        circ.x(q)?;
    }
    for &q in &all {
        circ.h(q)?;
    }
    Ok(circ)
}

/// Initialization followed by `plan.iterations` rounds of oracle and
/// diffusion. Measurement is left to the caller.
pub fn grover_circuit(plan: &GroverPlan) -> Result<Circuit> {
    let n = plan.oracle.n;
    let mut circ = Circuit::new(plan.width());
    if plan.oracle.style == OracleStyle::Boolean {
        circ.append(&ancilla_preparation(n)?)?;
    }
    for q in 0..n {
        circ.h(q)?;
    }
    let oracle = oracle(&plan.oracle)?;
    let diffusion = diffusion(n)?;
    for _ in 0..plan.iterations {
        circ.append(&oracle)?;
        circ.append(&diffusion)?;
    }
    Ok(circ)
}

/// Work-register state after one Grover iteration, from the amplitude
/// arithmetic of reflection about the mean.
pub fn expected_state(spec: &OracleSpec) -> Result<StateVector> {
    let size = spec.search_space();
    let k = spec.marked_count();
    if k >= size {
        return Err(Error::invalid("every label is marked"));
    }
    let amp = 1.0 / (size as f64).sqrt();
    // mean amplitude after the oracle flips k signs
    let mean = (size as f64 - 2.0 * k as f64) * amp / size as f64;
    let marked_amp = 2.0 * mean + amp;
    let unmarked_amp = 2.0 * mean - amp;
    let marked = spec.marked_indices();
    let amps = (0..size)
        .map(|i| C64::new(if marked.contains(&i) { marked_amp } else { unmarked_amp }, 0.0))
        .collect();
    StateVector::from_amplitudes(amps)
}

fn check_counts(k: usize, space: usize) -> Result<()> {
    if k == 0 || k >= space {
        return Err(Error::invalid(format!("need 1 <= k < {space}, got k = {k}")));
    }
    Ok(())
}

/// Probability of measuring one of `k` marked labels out of `space` after a
/// single Grover iteration.
pub fn theoretical_success(k: usize, space: usize) -> Result<f64> {
    check_counts(k, space)?;
    if !space.is_power_of_two() {
        return Err(Error::invalid(format!("search space {space} is not a power of two")));
    }
    // [(L - 2k)/L + 2(L - k)/L] / sqrt(L), squared, kept over a common
    // denominator so dyadic cases come out exact
    let (k, l) = (k as f64, space as f64);
    let bracket = (l - 2.0 * k) + 2.0 * (l - k);
    Ok(k * bracket * bracket / (l * l * l))
}

/// Best classical strategy with one query: query once, guess among the rest
/// on failure.
pub fn classical_baseline(k: usize, space: usize) -> Result<f64> {
    check_counts(k, space)?;
    let (k, l) = (k as f64, space as f64);
    Ok(k / l + (1.0 - k / l) * k / (l - 1.0))
}
