//! Full state tomography over Pauli bases: setting schedule, parity
//! estimates, linear inversion, projection onto physical states, fidelity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grover::{expected_state, grover_circuit, GroverPlan};
use crate::noise::{apply_noisy, measured_distribution, NoiseModel};
use crate::sim::{
    hermitian_eigen, sample_counts_stream, Circuit, CountsHistogram, DensityMatrix, Distribution,
    Pauli, PauliString, StateVector,
};

/// Shot counts used in the reference experiments. Both 7779 and 7797 appear
/// there for the same runs, so both are kept.
pub const SHOT_PRESETS: [u64; 3] = [1024, 7779, 7797];

/// Raw reconstructions whose trace is further than this from 1 are rejected.
pub const TRACE_QUALITY_TOL: f64 = 0.1;

/// One measurement axis per qubit, in display order (first entry is the
/// highest qubit).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisSetting(Vec<Pauli>);

impl BasisSetting {
    pub fn new(axes: Vec<Pauli>) -> Result<Self> {
        if axes.is_empty() || axes.contains(&Pauli::I) {
            return Err(Error::invalid("a basis setting needs one X, Y or Z axis per qubit"));
        }
        Ok(BasisSetting(axes))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn axes(&self) -> &[Pauli] {
        &self.0
    }

    /// Axis measured on `qubit`.
    pub fn axis(&self, qubit: usize) -> Pauli {
        self.0[self.0.len() - 1 - qubit]
    }

    /// Whether measuring in this setting yields the parity of `p`.
    pub fn is_compatible(&self, p: &PauliString) -> bool {
        p.len() == self.len() && p.ops().iter().zip(&self.0).all(|(a, b)| *a == Pauli::I || a == b)
    }
}

impl fmt::Display for BasisSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

impl FromStr for BasisSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisSetting::new(s.chars().map(Pauli::from_char).collect::<Result<_>>()?)
    }
}

/// All `3^n` settings, lexicographic with X < Y < Z.
pub fn basis_settings(n: usize) -> Vec<BasisSetting> {
    const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    (0..3usize.pow(n as u32))
        .map(|mut k| {
            let mut axes = vec![Pauli::Z; n];
            for slot in axes.iter_mut().rev() {
                *slot = AXES[k % 3];
                k /= 3;
            }
            BasisSetting(axes)
        })
        .collect()
}

/// `base` followed by the rotation that maps each axis onto Z: H for X,
/// S-dagger then H for Y. Only the low `setting.len()` qubits are rotated.
pub fn measurement_circuit(base: &Circuit, setting: &BasisSetting) -> Result<Circuit> {
    if setting.len() > base.width() {
        return Err(Error::invalid(format!(
            "setting {setting} is wider than the {}-qubit circuit",
            base.width()
        )));
    }
    let mut c = base.clone();
    c.append(&rotation(base.width(), setting)?)?;
    Ok(c)
}

fn rotation(width: usize, setting: &BasisSetting) -> Result<Circuit> {
    let mut c = Circuit::new(width);
    for q in 0..setting.len() {
        match setting.axis(q) {
            Pauli::X => {
                c.h(q)?;
            }
            Pauli::Y => {
                c.sdg(q)?.h(q)?;
            }
            _ => {}
        }
    }
    Ok(c)
}

/// Pauli string (display form) to estimated expectation value.
pub type Expectations = BTreeMap<String, f64>;

/// Parity estimates from measured counts; see `estimate_from_distributions`.
pub fn estimate_expectations(data: &BTreeMap<BasisSetting, CountsHistogram>, n: usize) -> Result<Expectations> {
    let dists = data.iter().map(|(s, c)| (s.clone(), c.to_distribution())).collect();
    estimate_from_distributions(&dists, n)
}

/// Every Pauli string's expectation, each averaged over all settings that
/// measure it. Exact distributions give exact expectations.
pub fn estimate_from_distributions(data: &BTreeMap<BasisSetting, Distribution>, n: usize) -> Result<Expectations> {
    let settings = basis_settings(n);
    for s in &settings {
        match data.get(s) {
            None => return Err(Error::IncompleteData(format!("no data for basis setting {s}"))),
            Some(d) if d.num_qubits() != n => {
                return Err(Error::invalid(format!(
                    "setting {s} has {}-qubit outcomes, expected {n}",
                    d.num_qubits()
                )))
            }
            _ => {}
        }
    }
    let mut out = Expectations::new();
    for p in PauliString::all(n) {
        let mask = p
            .ops()
            .iter()
            .enumerate()
            .filter(|(_, op)| **op != Pauli::I)
            .fold(0usize, |m, (pos, _)| m | 1 << (n - 1 - pos));
        let (mut sum, mut count) = (0.0, 0usize);
        for s in settings.iter().filter(|s| s.is_compatible(&p)) {
            sum += parity(&data[s], mask);
            count += 1;
        }
        out.insert(p.to_string(), sum / count as f64);
    }
    Ok(out)
}

fn parity(d: &Distribution, mask: usize) -> f64 {
    d.probs()
        .iter()
        .enumerate()
        .map(|(x, p)| if (x & mask).count_ones() % 2 == 0 { *p } else { -*p })
        .sum()
}

/// `(1/2^n) sum_P <P> P`.
pub fn linear_inversion(expectations: &Expectations, n: usize) -> Result<DMatrix<C64>> {
    let dim = 1usize << n;
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for p in PauliString::all(n) {
        let label = p.to_string();
        let v = *expectations
            .get(&label)
            .ok_or_else(|| Error::IncompleteData(format!("no expectation for {label}")))?;
        for x in 0..dim {
            let (y, phase) = p.apply_to_basis(x);
            rho[(y, x)] += phase * v;
        }
    }
    Ok(rho / C64::new(dim as f64, 0.0))
}

/// Nearest physical state: hermitize, normalize the trace, then zero the
/// most negative eigenvalues one at a time, spreading their weight evenly
/// over the rest until none is negative.
pub fn project_physical(raw: &DMatrix<C64>) -> Result<DensityMatrix> {
    let dim = raw.nrows();
    if dim != raw.ncols() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::invalid(format!("{}x{} is not a qubit density matrix", raw.nrows(), raw.ncols())));
    }
    let herm = (raw + raw.adjoint()) * C64::new(0.5, 0.0);
    let trace = herm.trace().re;
    if (trace - 1.0).abs() > TRACE_QUALITY_TOL {
        return Err(Error::DataQuality(format!("reconstruction has trace {trace}")));
    }
    let (mut vals, vecs) = hermitian_eigen(&(herm / C64::new(trace, 0.0)));
    // ascending order: walk up from the smallest
    let mut carry = 0.0;
    for i in 0..dim {
        let remaining = (dim - i) as f64;
        if vals[i] + carry / remaining < 0.0 {
            carry += vals[i];
            vals[i] = 0.0;
        } else {
            for v in &mut vals[i..] {
                *v += carry / remaining;
            }
            break;
        }
    }
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        vals.iter().map(|v| C64::new(*v, 0.0)),
    ));
    let rho = &vecs * diag * vecs.adjoint();
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::from_matrix(&rho)
}

/// `<psi|rho|psi>`, clamped to [0, 1].
pub fn state_fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    if rho.num_qubits() != target.num_qubits() {
        return Err(Error::invalid(format!(
            "state has {} qubits, target has {}",
            rho.num_qubits(),
            target.num_qubits()
        )));
    }
    let a = target.amplitudes();
    let mut f = C64::new(0.0, 0.0);
    for (r, ar) in a.iter().enumerate() {
        for (c, ac) in a.iter().enumerate() {
            f += ar.conj() * rho.get(r, c) * ac;
        }
    }
    Ok(f.re.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum QstBackend {
    Ideal,
    Noisy(NoiseModel),
}

impl QstBackend {
    pub fn tag(&self) -> &'static str {
        match self {
            QstBackend::Ideal => "ideal",
            QstBackend::Noisy(_) => "noisy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    PerSetting(u64),
    /// Exact outcome distributions, no sampling.
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    pub raw: DMatrix<C64>,
    pub physical: DensityMatrix,
    pub fidelity: f64,
    /// `None` in analytic mode.
    pub shots_per_setting: Option<u64>,
    pub backend: String,
    pub expectations: Expectations,
}

struct MatrixJson<'a>(&'a DMatrix<C64>);

impl Serialize for MatrixJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..self.0.nrows()).map(|r| (0..self.0.ncols()).map(|c| f(&self.0[(r, c)])).collect()).collect()
        };
        let mut st = s.serialize_struct("Matrix", 2)?;
        st.serialize_field("real", &rows(|z| z.re))?;
        st.serialize_field("imag", &rows(|z| z.im))?;
        st.end()
    }
}

impl Serialize for TomographyResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TomographyResult", 7)?;
        st.serialize_field("n", &self.physical.num_qubits())?;
        st.serialize_field("backend", &self.backend)?;
        st.serialize_field("shots_per_setting", &self.shots_per_setting)?;
        st.serialize_field("fidelity", &self.fidelity)?;
        st.serialize_field("expectations", &self.expectations)?;
        st.serialize_field("raw", &MatrixJson(&self.raw))?;
        st.serialize_field("rho", &MatrixJson(&self.physical.to_matrix()))?;
        st.end()
    }
}

/// Tomography of the low `target.num_qubits()` qubits of `base`'s output.
/// Settings run in parallel; setting `i` in `basis_settings` order samples
/// from stream `i` of `seed`.
pub fn run_qst(
    base: &Circuit,
    target: &StateVector,
    backend: &QstBackend,
    shots: Shots,
    seed: u64,
) -> Result<TomographyResult> {
    let n = target.num_qubits();
    if n > base.width() {
        return Err(Error::invalid(format!(
            "target has {n} qubits, circuit only {}",
            base.width()
        )));
    }
    let keep: Vec<usize> = (0..n).collect();
    let settings = basis_settings(n);

    enum Prepared {
        Pure(StateVector),
        Mixed(DensityMatrix, NoiseModel),
    }
    let prepared = match backend {
        QstBackend::Ideal => Prepared::Pure(StateVector::zero(base.width())?.apply_circuit(base)?),
        QstBackend::Noisy(model) => {
            let mut rho = DensityMatrix::zero(base.width())?;
            apply_noisy(&mut rho, base, model)?;
            Prepared::Mixed(rho, model.clone())
        }
    };

    let measured: Vec<Distribution> = settings
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let rot = rotation(base.width(), s)?;
            let full = match &prepared {
                Prepared::Pure(psi) => psi.apply_circuit(&rot)?.probabilities(),
                Prepared::Mixed(rho, model) => {
                    let mut rho = rho.clone();
                    apply_noisy(&mut rho, &rot, model)?;
                    measured_distribution(&rho, model)?
                }
            };
            let dist = full.marginal(&keep);
            match shots {
                Shots::Analytic => Ok(dist),
                Shots::PerSetting(k) => Ok(sample_counts_stream(&dist, k, seed, i as u64)?.to_distribution()),
            }
        })
        .collect::<Result<_>>()?;

    let data: BTreeMap<BasisSetting, Distribution> = settings.into_iter().zip(measured).collect();
    let expectations = estimate_from_distributions(&data, n)?;
    let raw = linear_inversion(&expectations, n)?;
    let physical = project_physical(&raw)?;
    let fidelity = state_fidelity(&physical, target)?;
    Ok(TomographyResult {
        raw,
        physical,
        fidelity,
        shots_per_setting: match shots {
            Shots::PerSetting(k) => Some(k),
            Shots::Analytic => None,
        },
        backend: backend.tag().to_string(),
        expectations,
    })
}

/// Tomography of a Grover run against its ideal output: the closed-form
/// expected state for one iteration, otherwise the noiseless simulation.
pub fn run_qst_for_plan(plan: &GroverPlan, backend: &QstBackend, shots: Shots, seed: u64) -> Result<TomographyResult> {
    let n = plan.oracle.num_qubits();
    let target = if plan.iterations == 1 {
        expected_state(&plan.oracle)?
    } else {
        let phase = GroverPlan { oracle: plan.oracle.with_style(Default::default()), ..plan.clone() };
        StateVector::zero(n)?.apply_circuit(&grover_circuit(&phase)?)?
    };
    run_qst(&grover_circuit(plan)?, &target, backend, shots, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::{OracleSpec, MARKED_PAIRS, SINGLE_MARKED, TOMOGRAPHY_CASES};
    use crate::sim::state::random_circuit_for_tests;
    use proptest::prelude::*;

    fn c1(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn settings_order() {
        let s1: Vec<String> = basis_settings(1).iter().map(|s| s.to_string()).collect();
        assert_eq!(s1, ["X", "Y", "Z"]);
        assert_eq!(basis_settings(3).len(), 27);
        let s2 = basis_settings(2);
        assert_eq!(s2[0].to_string(), "XX");
        assert_eq!(s2[8].to_string(), "ZZ");
        assert_eq!(s2[1].to_string(), "XY");
        assert_eq!("YZ".parse::<BasisSetting>().unwrap(), s2[5]);
    }

    #[test]
    fn rotations() {
        let mut plus = Circuit::new(1);
        plus.h(0).unwrap();
        let all_z = measurement_circuit(&plus, &"Z".parse().unwrap()).unwrap();
        assert_eq!(all_z, plus);
        let c = measurement_circuit(&plus, &"X".parse().unwrap()).unwrap();
        let d = StateVector::zero(1).unwrap().apply_circuit(&c).unwrap().probabilities();
        assert!((d.prob(0) - 1.0).abs() < 1e-12);

        let plus_i = StateVector::normalized(vec![c1(1.0, 0.0), c1(0.0, 1.0)]).unwrap();
        let d = plus_i.apply_circuit(&rotation(1, &"Y".parse().unwrap()).unwrap()).unwrap().probabilities();
        assert!((d.prob(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_state_estimates() {
        let psi = StateVector::zero(3).unwrap();
        let data: BTreeMap<_, _> = basis_settings(3)
            .into_iter()
            .map(|s| {
                let d = psi.apply_circuit(&rotation(3, &s).unwrap()).unwrap().probabilities();
                (s, sample_counts_stream(&d, 100, 1, 0).unwrap())
            })
            .collect();
        let e = estimate_expectations(&data, 3).unwrap();
        assert_eq!(e["III"], 1.0);
        assert_eq!(e["ZII"], 1.0);
        assert_eq!(e["IZI"], 1.0);
        assert_eq!(e["ZZI"], 1.0);
        assert_eq!(basis_settings(3).iter().filter(|s| s.is_compatible(&PauliString::parse("IZI").unwrap())).count(), 9);

        let mut partial = data.clone();
        partial.remove(&"XYZ".parse().unwrap());
        match estimate_expectations(&partial, 3) {
            Err(Error::IncompleteData(msg)) => assert!(msg.contains("XYZ")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn analytic_estimates_match_expectations() {
        let c = random_circuit_for_tests(3, &[(0, 0), (4, 1), (6, 2), (1, 1), (7, 0), (2, 2)]);
        let psi = StateVector::zero(3).unwrap().apply_circuit(&c).unwrap();
        let data = basis_settings(3)
            .into_iter()
            .map(|s| {
                let d = psi.apply_circuit(&rotation(3, &s).unwrap()).unwrap().probabilities();
                (s, d)
            })
            .collect();
        let e = estimate_from_distributions(&data, 3).unwrap();
        for (label, v) in &e {
            assert!((v - psi.pauli_expectation(label).unwrap()).abs() < 1e-12, "{label}");
        }
        let rho = project_physical(&linear_inversion(&e, 3).unwrap()).unwrap();
        assert!((state_fidelity(&rho, &psi).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_qubit_inversion() {
        let mut e = Expectations::from([("I".into(), 1.0), ("X".into(), 0.0), ("Y".into(), 0.0), ("Z".into(), 1.0)]);
        let m = linear_inversion(&e, 1).unwrap();
        assert!((m[(0, 0)] - c1(1.0, 0.0)).norm() < 1e-15 && m[(1, 1)].norm() < 1e-15);
        e.insert("Z".into(), 0.0);
        let m = linear_inversion(&e, 1).unwrap();
        assert!((m[(0, 0)] - c1(0.5, 0.0)).norm() < 1e-15 && (m[(1, 1)] - c1(0.5, 0.0)).norm() < 1e-15);
        e.remove("Y");
        assert!(matches!(linear_inversion(&e, 1), Err(Error::IncompleteData(_))));
    }

    #[test]
    fn projection() {
        let raw = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c1(1.1, 0.0), c1(-0.1, 0.0)]));
        let rho = project_physical(&raw).unwrap();
        assert!((rho.get(0, 0).re - 1.0).abs() < 1e-12 && rho.get(1, 1).norm() < 1e-12);

        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c1(0.7, 0.0), c1(0.1, 0.0)]));
        assert!(matches!(project_physical(&bad), Err(Error::DataQuality(_))));

        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let again = project_physical(&mixed.to_matrix()).unwrap();
        assert!((again.to_matrix() - mixed.to_matrix()).norm() < 1e-10);
    }

    #[test]
    fn fidelity_values() {
        let psi = expected_state(&OracleSpec::phase(3, &["010"]).unwrap()).unwrap();
        let pure = DensityMatrix::from_pure(&psi).unwrap();
        assert!((state_fidelity(&pure, &psi).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((state_fidelity(&mixed, &psi).unwrap() - 0.125).abs() < 1e-12);
        let zero = DensityMatrix::zero(3).unwrap();
        let one = StateVector::zero(3).unwrap().apply_circuit(Circuit::new(3).x(0).unwrap()).unwrap();
        assert_eq!(state_fidelity(&zero, &one).unwrap(), 0.0);
        assert!(state_fidelity(&zero, &StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn analytic_round_trip_all_oracles() {
        let mut specs: Vec<_> = SINGLE_MARKED.iter().map(|m| OracleSpec::phase(3, &[m]).unwrap()).collect();
        specs.extend(MARKED_PAIRS.iter().map(|p| OracleSpec::phase(3, p).unwrap()));
        for spec in specs {
            for spec in [spec.clone(), spec.with_style(crate::grover::OracleStyle::Boolean)] {
                let r = run_qst_for_plan(&GroverPlan::new(spec.clone()), &QstBackend::Ideal, Shots::Analytic, 0).unwrap();
                assert!((r.fidelity - 1.0).abs() < 1e-10, "{spec}");
            }
        }
    }

    #[test]
    fn finite_shot_ideal_cases() {
        for case in TOMOGRAPHY_CASES {
            let plan = GroverPlan::new(OracleSpec::phase(3, case).unwrap());
            let r = run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::PerSetting(4096), 3).unwrap();
            // single draws scatter around 0.992 with sd about 0.004
            assert!(r.fidelity >= 0.975, "{case:?}: {}", r.fidelity);
            assert!(r.physical.physicality().is_physical());
        }
    }

    #[test]
    fn noisy_between_ideal_and_floor() {
        let model = NoiseModel::default_calibrated();
        let plan = GroverPlan::new(OracleSpec::phase(3, &["101", "111"]).unwrap());
        let ideal = run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::PerSetting(4096), 9).unwrap();
        let noisy = run_qst_for_plan(&plan, &QstBackend::Noisy(model), Shots::PerSetting(4096), 9).unwrap();
        assert!(noisy.fidelity < ideal.fidelity && noisy.fidelity > 0.125);
        assert!(noisy.physical.physicality().is_physical());
    }

    #[test]
    fn more_shots_help_on_average() {
        let plan = GroverPlan::new(OracleSpec::phase(3, &["011"]).unwrap());
        let mean = |k| {
            (0..10)
                .map(|seed| run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::PerSetting(k), seed).unwrap().fidelity)
                .sum::<f64>()
                / 10.0
        };
        assert!(mean(256) < mean(16384));
    }

    #[test]
    fn deterministic_json() {
        let plan = GroverPlan::new(OracleSpec::phase(3, &["000", "111"]).unwrap());
        let a = run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::PerSetting(1024), 42).unwrap();
        let b = run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::PerSetting(1024), 42).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let v: serde_json::Value = serde_json::to_value(&a).unwrap();
        assert_eq!(v["rho"]["real"].as_array().unwrap().len(), 8);
        assert_eq!(v["backend"], "ideal");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn projection_is_physical_and_idempotent(entries in proptest::collection::vec(-0.3f64..0.3, 32)) {
            let psi = expected_state(&OracleSpec::phase(2, &["01"]).unwrap()).unwrap();
            let mut raw = DensityMatrix::from_pure(&psi).unwrap().to_matrix();
            for r in 0..4 {
                for c in 0..4 {
                    let z = c1(entries[r * 4 + c], entries[16 + ((r * 4 + c) % 16)]) * 0.5;
                    raw[(r, c)] += z;
                    raw[(c, r)] += z.conj();
                }
            }
            for i in 0..4 {
                raw[(i, i)] = c1(raw[(i, i)].re, 0.0);
            }
            let t = raw.trace().re;
            prop_assume!((t - 1.0).abs() <= TRACE_QUALITY_TOL);
            let rho = project_physical(&raw).unwrap();
            prop_assert!(rho.eigenvalues()[0] >= -1e-12);
            let again = project_physical(&rho.to_matrix()).unwrap();
            prop_assert!((again.to_matrix() - rho.to_matrix()).norm() < 1e-10);
        }
    }
}
