//! Success probability (ASP) and squared statistical overlap (SSO).

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::grover::{expected_state, OracleSpec};
use crate::sim::{CountsHistogram, Distribution};

/// Expected or measured population over the `2^n` outcomes.
pub type PopulationDistribution = Distribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub marked: Vec<String>,
    pub asp: f64,
    pub sso: f64,
    /// `None` for analytic (infinite-shot) distributions.
    pub shots: Option<u64>,
    pub backend: String,
}

/// Fraction of shots landing on any marked label.
pub fn asp<S: AsRef<str>>(counts: &CountsHistogram, marked: &[S]) -> Result<f64> {
    if marked.is_empty() {
        return Err(Error::invalid("marked set is empty"));
    }
    let mut hits = 0u64;
    for m in marked {
        bits::parse_label(m.as_ref(), counts.n)?;
        hits += counts.count(m.as_ref());
    }
    Ok(hits as f64 / counts.shots as f64)
}

/// Total mass on the marked labels.
pub fn asp_of_distribution<S: AsRef<str>>(dist: &Distribution, marked: &[S]) -> Result<f64> {
    if marked.is_empty() {
        return Err(Error::invalid("marked set is empty"));
    }
    marked.iter().map(|m| dist.prob_of(m.as_ref())).sum()
}

/// `(sum_m sqrt(expected_m * measured_m))^2`.
pub fn sso(expected: &PopulationDistribution, measured: &PopulationDistribution) -> Result<f64> {
    if expected.num_qubits() != measured.num_qubits() {
        return Err(Error::invalid(format!(
            "population widths differ ({} vs {})",
            expected.num_qubits(),
            measured.num_qubits()
        )));
    }
    let overlap: f64 = expected
        .probs()
        .iter()
        .zip(measured.probs())
        .map(|(e, m)| (e.max(0.0) * m.max(0.0)).sqrt())
        .sum();
    Ok(overlap * overlap)
}

/// Expected population after one Grover iteration for `spec`.
pub fn expected_population(spec: &OracleSpec) -> Result<PopulationDistribution> {
    Ok(expected_state(spec)?.probabilities())
}

pub fn metrics_report(counts: &CountsHistogram, spec: &OracleSpec, backend: &str) -> Result<MetricsReport> {
    if counts.n != spec.num_qubits() {
        return Err(Error::invalid("histogram width does not match the oracle"));
    }
    Ok(MetricsReport {
        marked: spec.marked().to_vec(),
        asp: asp(counts, spec.marked())?,
        sso: sso(&expected_population(spec)?, &counts.to_distribution())?,
        shots: Some(counts.shots),
        backend: backend.to_string(),
    })
}

/// Report for an exact outcome distribution.
pub fn metrics_report_analytic(dist: &Distribution, spec: &OracleSpec, backend: &str) -> Result<MetricsReport> {
    if dist.num_qubits() != spec.num_qubits() {
        return Err(Error::invalid("distribution width does not match the oracle"));
    }
    Ok(MetricsReport {
        marked: spec.marked().to_vec(),
        asp: asp_of_distribution(dist, spec.marked())?,
        sso: sso(&expected_population(spec)?, dist)?,
        shots: None,
        backend: backend.to_string(),
    })
}
