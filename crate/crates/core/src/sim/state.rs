use num_complex::Complex64 as C64;

use super::distribution::Distribution;
use super::gate::Circuit;
use super::pauli::PauliString;
use crate::error::{Error, Result};

/// Default largest statevector width.
pub const DEFAULT_MAX_STATEVECTOR_QUBITS: usize = 24;
/// Default largest density-matrix width.
pub const DEFAULT_MAX_DENSITY_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-10;

/// Simulation width caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_statevector_qubits: usize,
    pub max_density_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_statevector_qubits: DEFAULT_MAX_STATEVECTOR_QUBITS,
            max_density_qubits: DEFAULT_MAX_DENSITY_QUBITS,
        }
    }
}

/// Pure state of `n` qubits as `2^n` amplitudes, qubit 0 least significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>` under the default width cap.
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_limits(n, &Limits::default())
    }

    pub fn zero_with_limits(n: usize, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a register needs at least one qubit"));
        }
        if n > limits.max_statevector_qubits {
            return Err(Error::invalid(format!(
                "{n} qubits exceeds the statevector cap of {}",
                limits.max_statevector_qubits
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Build from explicit amplitudes; the length must be a power of two and
    /// the vector normalized.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("state norm^2 is {norm}, expected 1")));
        }
        Ok(StateVector { n: len.trailing_zeros() as usize, amps })
    }

    /// Normalize arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero vector"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_circuit_in_place(circuit)?;
        Ok(out)
    }

    pub fn apply_circuit_in_place(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.n {
            return Err(Error::invalid(format!(
                "circuit width {} does not match state width {}",
                circuit.width(),
                self.n
            )));
        }
        for op in circuit.ops() {
            op.action().apply(&mut self.amps);
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Distribution {
        Distribution::from_probs_unchecked(self.n, self.amps.iter().map(|a| a.norm_sqr()).collect())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::invalid("inner product of states with different widths"));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Largest amplitude difference after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let ov = self.inner(other)?;
        let phase = if ov.norm() > 1e-12 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max))
    }

    /// `<psi|P|psi>` for a display-order Pauli string such as `"XIZ"`.
    pub fn pauli_expectation(&self, pauli: &str) -> Result<f64> {
        let p = PauliString::parse(pauli)?;
        if p.len() != self.n {
            return Err(Error::invalid(format!(
                "Pauli string {pauli:?} has length {}, state has {} qubits",
                p.len(),
                self.n
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (x, a) in self.amps.iter().enumerate() {
            let (y, phase) = p.apply_to_basis(x);
            acc += self.amps[y].conj() * phase * a;
        }
        Ok(acc.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gate::GateKind;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn zero_state_examples() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);
        let s = StateVector::zero(3).unwrap();
        assert_eq!(s.amplitude(0), c(1.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0)));
    }

    #[test]
    fn zero_state_rejects_bad_widths() {
        assert!(StateVector::zero(0).is_err());
        assert!(StateVector::zero(25).is_err());
        let limits = Limits { max_statevector_qubits: 4, ..Limits::default() };
        assert!(StateVector::zero_with_limits(5, &limits).is_err());
    }

    #[test]
    fn hadamard_layer_is_uniform() {
        let mut circ = Circuit::new(3);
        for q in 0..3 {
            circ.h(q).unwrap();
        }
        let s = StateVector::zero(3).unwrap().apply_circuit(&circ).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(1.0 / 8f64.sqrt())).norm() < 1e-12);
        }
        for p in s.probabilities().probs() {
            assert!((p - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn x_flips_one_qubit() {
        let mut circ = Circuit::new(1);
        circ.x(0).unwrap();
        let s = StateVector::zero(1).unwrap().apply_circuit(&circ).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn mcz_on_plus_state_negates_only_all_ones() {
        let mut circ = Circuit::new(3);
        for q in 0..3 {
            circ.h(q).unwrap();
        }
        let plus = StateVector::zero(3).unwrap().apply_circuit(&circ).unwrap();
        let mut mcz = Circuit::new(3);
        mcz.mcz(&[0, 1, 2]).unwrap();
        let out = plus.apply_circuit(&mcz).unwrap();
        // oracle: explicit 8x8 diag(1,..,1,-1) product
        for i in 0..8 {
            let expect = if i == 7 { -plus.amplitude(i) } else { plus.amplitude(i) };
            assert!((out.amplitude(i) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let s = StateVector::zero(2).unwrap();
        assert!(s.apply_circuit(&Circuit::new(3)).is_err());
    }

    #[test]
    fn pauli_expectation_examples() {
        let s = StateVector::zero(3).unwrap();
        assert!((s.pauli_expectation("ZZZ").unwrap() - 1.0).abs() < 1e-15);
        assert!(s.pauli_expectation("XII").unwrap().abs() < 1e-15);
        let r = 0.5f64.sqrt();
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(r);
        amps[7] = c(r);
        let ghz = StateVector::from_amplitudes(amps).unwrap();
        assert!((ghz.pauli_expectation("XXX").unwrap() - 1.0).abs() < 1e-12);
        assert!(ghz.pauli_expectation("XQX").is_err());
        assert!(ghz.pauli_expectation("XX").is_err());
    }

    fn random_circuit(n: usize, spec: &[(u8, u64)]) -> Circuit {
        let mut circ = Circuit::new(n);
        for &(k, seed) in spec {
            let kind = GateKind::ALL[k as usize % GateKind::ALL.len()];
            let mut qs: Vec<usize> = (0..n).collect();
            // deterministic shuffle from seed
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                qs.swap(i, (s >> 33) as usize % (i + 1));
            }
            let arity = match kind {
                k if k.is_single_qubit() => 1,
                GateKind::CX | GateKind::CZ => 2,
                _ => 1 + (seed as usize % n),
            };
            if arity > n {
                continue;
            }
            circ.gate(kind, &qs[..arity]).unwrap();
        }
        circ
    }

    proptest! {
        #[test]
        fn random_circuits_preserve_norm(
            n in 2usize..=5,
            spec in proptest::collection::vec((any::<u8>(), any::<u64>()), 0..100),
        ) {
            let circ = random_circuit(n, &spec);
            let s = StateVector::zero(n).unwrap().apply_circuit(&circ).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    pub(crate) fn random_circuit_for_tests(n: usize, spec: &[(u8, u64)]) -> Circuit {
        random_circuit(n, spec)
    }
}

#[cfg(test)]
pub(crate) use tests::random_circuit_for_tests;
