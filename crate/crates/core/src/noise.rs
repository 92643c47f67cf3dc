//! Calibrated noise: depolarizing and thermal-relaxation channels attached to
//! every gate, followed by per-qubit readout confusion.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::calibration::{
    load_device_report, parse_calibration, summarize_calibration, CalibrationSummary, DeviceReport,
};
use crate::error::{Error, Result};
use crate::grover::{grover_circuit, GroverPlan};
use crate::sim::{
    sample_counts, Circuit, CountsHistogram, DensityMatrix, Distribution, KrausChannel, PauliString, StateVector,
};

const SHERBROOK_CSV: &str = include_str!("../data/ibm_sherbrook.csv");
const SHERBROOK_DEVICE: &str = include_str!("../data/ibm_sherbrook.device.json");

/// Relative slack allowed on `T2 <= 2 T1` before it counts as a violation.
const T2_SLACK: f64 = 1e-9;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {p} is outside [0, 1]")))
    }
}

/// `(1 - p) rho + p I / 2^m` as a uniform mixture of the `4^m` Paulis.
pub fn depolarizing_channel(p: f64, m: usize) -> Result<KrausChannel> {
    check_probability("depolarizing probability", p)?;
    if m == 0 {
        return Err(Error::invalid("depolarizing channel needs at least one qubit"));
    }
    if p == 0.0 {
        return Ok(KrausChannel::identity(m));
    }
    let per = p / 4f64.powi(m as i32);
    let ops = PauliString::all(m)
        .into_iter()
        .map(|ps| {
            let w = if ps.is_identity() { 1.0 - p + per } else { per };
            let mut mat = pauli_matrix(&ps);
            mat.iter_mut().for_each(|z| *z *= w.sqrt());
            mat
        })
        .collect();
    KrausChannel::new(m, ops)
}

/// Dense matrix of a Pauli string in the local basis of its qubits.
fn pauli_matrix(ps: &PauliString) -> Vec<C64> {
    let dim = 1usize << ps.len();
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    for x in 0..dim {
        let (y, phase) = ps.apply_to_basis(x);
        m[y * dim + x] = phase;
    }
    m
}

/// Amplitude damping with `gamma = 1 - exp(-d/T1)` followed by dephasing that
/// brings the coherence decay to `exp(-d/T2)`. Infinite times disable the
/// corresponding process.
pub fn thermal_relaxation_channel(t1_us: f64, t2_us: f64, duration_ns: f64) -> Result<KrausChannel> {
    if !(t1_us > 0.0) || !(t2_us > 0.0) {
        return Err(Error::invalid(format!("T1 = {t1_us} and T2 = {t2_us} must be positive")));
    }
    if !(duration_ns >= 0.0) {
        return Err(Error::invalid(format!("duration {duration_ns} ns is negative")));
    }
    if t2_us > 2.0 * t1_us * (1.0 + T2_SLACK) {
        return Err(Error::invalid(format!("T2 = {t2_us} exceeds 2 T1 = {}", 2.0 * t1_us)));
    }
    let d = duration_ns * 1e-3;
    let gamma = 1.0 - (-d / t1_us).exp();
    // coherence already lost to damping is exp(-d / 2T1)
    let f = (-d * (1.0 / t2_us - 0.5 / t1_us)).exp().min(1.0);
    let q = 0.5 * (1.0 - f);
    let c = |re: f64| C64::new(re, 0.0);
    let z = c(0.0);
    let damping = KrausChannel::new(
        1,
        vec![vec![c(1.0), z, z, c((1.0 - gamma).sqrt())], vec![z, c(gamma.sqrt()), z, z]],
    )?;
    let dephasing = KrausChannel::new(
        1,
        vec![
            vec![c((1.0 - q).sqrt()), z, z, c((1.0 - q).sqrt())],
            vec![c(q.sqrt()), z, z, c(-q.sqrt())],
        ],
    )?;
    damping.then(&dephasing)
}

/// Column-stochastic 2x2 matrix `m[read][prepared]`.
pub fn readout_confusion(p10: f64, p01: f64) -> Result<[[f64; 2]; 2]> {
    check_probability("P(read 1 | prep 0)", p10)?;
    check_probability("P(read 0 | prep 1)", p01)?;
    Ok([[1.0 - p10, p01], [p10, 1.0 - p01]])
}

/// Push `dist` through one confusion matrix per qubit (index = qubit).
pub fn apply_readout(dist: &Distribution, confusion: &[[[f64; 2]; 2]]) -> Result<Distribution> {
    let n = dist.num_qubits();
    if confusion.len() != n {
        return Err(Error::invalid(format!(
            "{} confusion matrices for {n} qubits",
            confusion.len()
        )));
    }
    let mut probs = dist.probs().to_vec();
    for (q, m) in confusion.iter().enumerate() {
        let bit = 1usize << q;
        for i in (0..probs.len()).filter(|i| i & bit == 0) {
            let (p0, p1) = (probs[i], probs[i | bit]);
            probs[i] = m[0][0] * p0 + m[0][1] * p1;
            probs[i | bit] = m[1][0] * p0 + m[1][1] * p1;
        }
    }
    Distribution::new(n, probs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitNoise {
    /// Absent means no amplitude damping.
    pub t1_us: Option<f64>,
    /// Absent means no dephasing beyond what T1 implies.
    pub t2_us: Option<f64>,
    /// P(read 1 | prepared 0).
    pub p_m1p0: f64,
    /// P(read 0 | prepared 1).
    pub p_m0p1: f64,
}

impl QubitNoise {
    pub const NOISELESS: QubitNoise = QubitNoise { t1_us: None, t2_us: None, p_m1p0: 0.0, p_m0p1: 0.0 };

    fn validated(mut self, who: &str) -> Result<Self> {
        check_probability("p_m1p0", self.p_m1p0)?;
        check_probability("p_m0p1", self.p_m0p1)?;
        for t in [self.t1_us, self.t2_us].into_iter().flatten() {
            if !(t > 0.0) {
                return Err(Error::invalid(format!("{who}: coherence time {t} must be positive")));
            }
        }
        if self.t2_us.is_some() && self.t1_us.is_none() {
            return Err(Error::invalid(format!("{who}: T2 given without T1")));
        }
        if let (Some(t1), Some(t2)) = (self.t1_us, self.t2_us) {
            if t2 > 2.0 * t1 {
                log::warn!("{who}: T2 = {t2} us exceeds 2 T1, clamped to {}", 2.0 * t1);
                self.t2_us = Some(2.0 * t1);
            }
        }
        Ok(self)
    }

    fn relaxation(&self, duration_ns: f64) -> Result<Option<KrausChannel>> {
        let Some(t1) = self.t1_us else { return Ok(None) };
        if duration_ns == 0.0 {
            return Ok(None);
        }
        let t2 = self.t2_us.unwrap_or(2.0 * t1);
        thermal_relaxation_channel(t1, t2, duration_ns).map(Some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Durations {
    pub single_qubit_ns: f64,
    /// Any gate on two or more qubits.
    pub multi_qubit_ns: f64,
    /// Taken from the calibration `t_readout` when absent.
    pub readout_ns: Option<f64>,
}

impl Default for Durations {
    fn default() -> Self {
        Durations { single_qubit_ns: 60.0, multi_qubit_ns: 660.0, readout_ns: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub depolarizing_1q: f64,
    /// Applied to gates on two or more qubits.
    pub depolarizing_2q: f64,
    pub default_qubit: QubitNoise,
    /// Per-qubit overrides of `default_qubit`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub qubits: BTreeMap<usize, QubitNoise>,
    pub durations: Durations,
    /// Relax qubits not touched by a gate for its duration, and all qubits
    /// for the readout duration before measurement.
    #[serde(default)]
    pub idle_noise: bool,
}

impl NoiseModel {
    /// No noise at all.
    pub fn ideal() -> Self {
        NoiseModel {
            depolarizing_1q: 0.0,
            depolarizing_2q: 0.0,
            default_qubit: QubitNoise::NOISELESS,
            qubits: BTreeMap::new(),
            durations: Durations::default(),
            idle_noise: false,
        }
    }

    /// Medians of the bundled `ibm_sherbrook` sample applied to every qubit.
    pub fn default_calibrated() -> Self {
        let records = parse_calibration(SHERBROOK_CSV).expect("bundled calibration parses");
        let device: DeviceReport =
            serde_json::from_str(SHERBROOK_DEVICE).expect("bundled device report parses");
        let summary = summarize_calibration(&records).expect("bundled calibration is non-empty");
        from_calibration(&summary.with_device(device), &Durations::default())
            .expect("bundled calibration is complete")
    }

    /// Check ranges and clamp `T2` to `2 T1`.
    pub fn validated(mut self) -> Result<Self> {
        check_probability("depolarizing_1q", self.depolarizing_1q)?;
        check_probability("depolarizing_2q", self.depolarizing_2q)?;
        let d = self.durations;
        for t in [Some(d.single_qubit_ns), Some(d.multi_qubit_ns), d.readout_ns].into_iter().flatten() {
            if !(t >= 0.0) {
                return Err(Error::invalid(format!("duration {t} ns is negative")));
            }
        }
        self.default_qubit = self.default_qubit.validated("default qubit")?;
        for (q, noise) in self.qubits.iter_mut() {
            *noise = noise.validated(&format!("qubit {q}"))?;
        }
        Ok(self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let model: NoiseModel = serde_json::from_str(&std::fs::read_to_string(path.as_ref())?)?;
        model.validated()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn qubit(&self, q: usize) -> &QubitNoise {
        self.qubits.get(&q).unwrap_or(&self.default_qubit)
    }

    /// Both depolarizing rates multiplied by `factor`, capped at 1.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.depolarizing_1q = (self.depolarizing_1q * factor).min(1.0);
        out.depolarizing_2q = (self.depolarizing_2q * factor).min(1.0);
        out
    }

    pub fn confusion(&self, n: usize) -> Result<Vec<[[f64; 2]; 2]>> {
        (0..n)
            .map(|q| {
                let qn = self.qubit(q);
                readout_confusion(qn.p_m1p0, qn.p_m0p1)
            })
            .collect()
    }

    fn gate_duration(&self, arity: usize) -> f64 {
        if arity == 1 {
            self.durations.single_qubit_ns
        } else {
            self.durations.multi_qubit_ns
        }
    }
}

/// Uniform model from calibration medians. A device report, when attached,
/// supplies T1, T2 and the gate errors; readout probabilities always come
/// from the per-qubit medians. Gate errors are used directly as
/// depolarizing probabilities.
pub fn from_calibration(cal: &CalibrationSummary, durations: &Durations) -> Result<NoiseModel> {
    let (t1, t2, p1, p2) = match &cal.device {
        Some(dev) => (dev.t1_us, dev.t2_us, dev.sx_error, dev.ecr_error),
        None => {
            let ecr = cal.ecr_error.ok_or_else(|| Error::Schema("ecr_error".into()))?;
            (cal.t1_us.median, cal.t2_us.median, cal.sx_error.median, ecr.median)
        }
    };
    let mut durations = *durations;
    durations.readout_ns.get_or_insert(cal.t_readout_ns.median);
    NoiseModel {
        depolarizing_1q: p1,
        depolarizing_2q: p2,
        default_qubit: QubitNoise {
            t1_us: Some(t1),
            t2_us: Some(t2),
            p_m1p0: cal.p_m1p0.median,
            p_m0p1: cal.p_m0p1.median,
        },
        qubits: BTreeMap::new(),
        durations,
        idle_noise: false,
    }
    .validated()
}

/// Load a calibration CSV (plus sidecar) and build its model.
pub fn from_calibration_file(path: impl AsRef<Path>, durations: &Durations) -> Result<NoiseModel> {
    let path = path.as_ref();
    let mut summary = summarize_calibration(&crate::calibration::load_calibration(path)?)?;
    let sidecar = crate::calibration::device_report_path(path);
    if sidecar.exists() {
        summary = summary.with_device(load_device_report(sidecar)?);
    }
    from_calibration(&summary, durations)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyRunResult {
    pub density: DensityMatrix,
    pub pre_readout: Distribution,
    pub post_readout: Distribution,
    pub counts: CountsHistogram,
}

/// Apply `circuit` to `rho` with each gate followed by depolarizing noise on
/// its qubits and then thermal relaxation.
pub fn apply_noisy(rho: &mut DensityMatrix, circuit: &Circuit, model: &NoiseModel) -> Result<()> {
    let n = rho.num_qubits();
    if circuit.width() != n {
        return Err(Error::invalid(format!(
            "circuit width {} does not match state width {n}",
            circuit.width()
        )));
    }
    let mut cache: BTreeMap<(usize, u64), Option<KrausChannel>> = BTreeMap::new();
    for op in circuit.ops() {
        rho.apply_gate(op);
        let targets = op.targets();
        let p = if targets.len() == 1 { model.depolarizing_1q } else { model.depolarizing_2q };
        rho.depolarize_in_place(targets, p);
        let d = model.gate_duration(targets.len());
        for q in (0..n).filter(|q| targets.contains(q) || model.idle_noise) {
            relax(rho, model, &mut cache, q, d)?;
        }
    }
    Ok(())
}

fn relax(
    rho: &mut DensityMatrix,
    model: &NoiseModel,
    cache: &mut BTreeMap<(usize, u64), Option<KrausChannel>>,
    q: usize,
    duration_ns: f64,
) -> Result<()> {
    let key = (q, duration_ns.to_bits());
    if !cache.contains_key(&key) {
        cache.insert(key, model.qubit(q).relaxation(duration_ns)?);
    }
    if let Some(ch) = &cache[&key] {
        rho.apply_channel_in_place(ch, &[q])?;
    }
    Ok(())
}

/// Outcome distribution of measuring every qubit of `rho`: relaxation over
/// the readout window (idle noise only), then readout confusion.
pub fn measured_distribution(rho: &DensityMatrix, model: &NoiseModel) -> Result<Distribution> {
    let n = rho.num_qubits();
    let diag = match model.durations.readout_ns {
        Some(d) if model.idle_noise => {
            let mut rho = rho.clone();
            let mut cache = BTreeMap::new();
            for q in 0..n {
                relax(&mut rho, model, &mut cache, q, d)?;
            }
            rho.diagonal()
        }
        _ => rho.diagonal(),
    };
    apply_readout(&diag, &model.confusion(n)?)
}

/// Noisy evolution of `circuit` from `|0..0>`.
pub fn evolve_noisy(circuit: &Circuit, model: &NoiseModel) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::zero(circuit.width())?;
    apply_noisy(&mut rho, circuit, model)?;
    Ok(rho)
}

/// Noisy evolution, readout on the final state, and `shots` samples drawn
/// from the result.
pub fn run_noisy(circuit: &Circuit, model: &NoiseModel, shots: u64, seed: u64) -> Result<NoisyRunResult> {
    let density = evolve_noisy(circuit, model)?;
    let pre_readout = density.diagonal();
    let post_readout = measured_distribution(&density, model)?;
    let counts = sample_counts(&post_readout, shots, seed)?;
    Ok(NoisyRunResult { density, pre_readout, post_readout, counts })
}

/// Outcome distribution after noise and readout, without sampling.
pub fn noisy_distribution(circuit: &Circuit, model: &NoiseModel) -> Result<Distribution> {
    measured_distribution(&evolve_noisy(circuit, model)?, model)
}

/// Outcome distribution of a Grover run on its search qubits, exact
/// (`model = None`) or under noise. An ancilla, if any, is traced out.
pub fn search_distribution(plan: &GroverPlan, model: Option<&NoiseModel>) -> Result<Distribution> {
    let circuit = grover_circuit(plan)?;
    let full = match model {
        None => StateVector::zero(circuit.width())?.apply_circuit(&circuit)?.probabilities(),
        Some(m) => noisy_distribution(&circuit, m)?,
    };
    let n = plan.oracle.num_qubits();
    Ok(if full.num_qubits() > n {
        full.marginal(&(0..n).collect::<Vec<_>>())
    } else {
        full
    })
}
