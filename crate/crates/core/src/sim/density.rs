use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::channel::{apply_dense, KrausChannel};
use super::distribution::Distribution;
use super::gate::{Circuit, GateOp};
use super::pauli::PauliString;
use super::state::{Limits, StateVector};
use crate::error::{Error, Result};

/// Tolerances a density matrix must meet.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const MIN_EIGENVALUE_TOL: f64 = -1e-9;

/// Mixed state of `n` qubits, stored row-major with index `(row << n) | col`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<C64>,
}

/// Measured deviations from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn is_physical(&self) -> bool {
        self.hermiticity_error <= HERMITIAN_TOL
            && self.trace_error <= TRACE_TOL
            && self.min_eigenvalue >= MIN_EIGENVALUE_TOL
    }
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        Self::from_pure_with_limits(state, &Limits::default())
    }

    pub fn from_pure_with_limits(state: &StateVector, limits: &Limits) -> Result<Self> {
        let n = state.num_qubits();
        check_width(n, limits)?;
        let a = state.amplitudes();
        let d = a.len();
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(a[r] * a[c].conj());
            }
        }
        Ok(DensityMatrix { n, data })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_pure(&StateVector::zero(n)?)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a register needs at least one qubit"));
        }
        check_width(n, &Limits::default())?;
        let d = 1usize << n;
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            data[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Ok(DensityMatrix { n, data })
    }

    /// Validated constructor from a square matrix.
    pub fn from_matrix(m: &DMatrix<C64>) -> Result<Self> {
        let dm = Self::from_matrix_unchecked(m)?;
        let report = dm.physicality();
        if !report.is_physical() {
            return Err(Error::invalid(format!("matrix is not a valid density matrix: {report:?}")));
        }
        Ok(dm)
    }

    pub(crate) fn from_matrix_unchecked(m: &DMatrix<C64>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || d < 2 || !d.is_power_of_two() {
            return Err(Error::invalid(format!(
                "{}x{} is not a qubit-register matrix",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = d.trailing_zeros() as usize;
        let data = (0..d * d).map(|k| m[(k / d, k % d)]).collect();
        Ok(DensityMatrix { n, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row << self.n | col]
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| self.get(r, c))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<DensityMatrix> {
        let mut out = self.clone();
        if circuit.width() != self.n {
            return Err(Error::invalid(format!(
                "circuit width {} does not match state width {}",
                circuit.width(),
                self.n
            )));
        }
        for op in circuit.ops() {
            out.apply_gate(op);
        }
        Ok(out)
    }

    pub(crate) fn apply_gate(&mut self, op: &GateOp) {
        let action = op.action();
        action.shifted(self.n).apply(&mut self.data);
        action.conjugated().apply(&mut self.data);
    }

    /// `rho -> sum_k K rho K^dag` with the channel acting on `targets`.
    pub fn apply_channel(&self, ch: &KrausChannel, targets: &[usize]) -> Result<DensityMatrix> {
        let mut out = self.clone();
        out.apply_channel_in_place(ch, targets)?;
        Ok(out)
    }

    pub fn apply_channel_in_place(&mut self, ch: &KrausChannel, targets: &[usize]) -> Result<()> {
        if ch.arity() != targets.len() {
            return Err(Error::invalid(format!(
                "channel acts on {} qubits but {} targets were given",
                ch.arity(),
                targets.len()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n || targets[..i].contains(&t) {
                return Err(Error::invalid(format!("invalid channel target {t}")));
            }
        }
        let ops = ch.operators();
        if ops.len() == 1 {
            let k = &ops[0];
            self.conjugate_by(k, targets);
            return Ok(());
        }
        let mut acc = vec![C64::new(0.0, 0.0); self.data.len()];
        for k in ops {
            let mut term = self.data.clone();
            sandwich(&mut term, self.n, k, targets);
            acc.iter_mut().zip(&term).for_each(|(a, t)| *a += t);
        }
        self.data = acc;
        Ok(())
    }

    /// `rho -> (1 - p) rho + p Tr_T(rho) (x) I / 2^m` on the targets `T`.
    /// Equal to the uniform Pauli-mixture channel without the `4^m` terms.
    pub(crate) fn depolarize_in_place(&mut self, targets: &[usize], p: f64) {
        if p == 0.0 {
            return;
        }
        let n = self.n;
        let dim = 1usize << n;
        let tmask = targets.iter().fold(0usize, |m, &t| m | (1 << t));
        let mut reduced = vec![C64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                if r & tmask == c & tmask {
                    reduced[((r & !tmask) << n) | (c & !tmask)] += self.data[(r << n) | c];
                }
            }
        }
        let w = p / (1usize << targets.len()) as f64;
        for r in 0..dim {
            for c in 0..dim {
                let z = &mut self.data[(r << n) | c];
                *z *= 1.0 - p;
                if r & tmask == c & tmask {
                    *z += reduced[((r & !tmask) << n) | (c & !tmask)] * w;
                }
            }
        }
    }

    fn conjugate_by(&mut self, k: &[C64], targets: &[usize]) {
        sandwich(&mut self.data, self.n, k, targets);
    }

    /// Diagonal as an outcome distribution (tiny negative values clipped).
    pub fn diagonal(&self) -> Distribution {
        let probs: Vec<f64> = (0..self.dim()).map(|i| self.get(i, i).re.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        Distribution::from_probs_unchecked(self.n, probs.into_iter().map(|p| p / total).collect())
    }

    /// Reduced state on `keep`; `keep[j]` becomes qubit `j` of the result.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() || keep.iter().any(|&q| q >= self.n) {
            return Err(Error::invalid("partial trace needs valid qubits to keep"));
        }
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let dk = 1usize << k;
        let spread = |a: usize, b: usize| {
            let mut idx = 0usize;
            for (j, &q) in keep.iter().enumerate() {
                idx |= (a >> j & 1) << q;
            }
            for (j, &q) in traced.iter().enumerate() {
                idx |= (b >> j & 1) << q;
            }
            idx
        };
        let mut data = vec![C64::new(0.0, 0.0); dk * dk];
        for r in 0..dk {
            for c in 0..dk {
                data[r * dk + c] = (0..1usize << traced.len())
                    .map(|b| self.get(spread(r, b), spread(c, b)))
                    .sum();
            }
        }
        Ok(DensityMatrix { n: k, data })
    }

    /// `Tr(rho P)` for a display-order Pauli string.
    pub fn pauli_expectation(&self, pauli: &str) -> Result<f64> {
        let p = PauliString::parse(pauli)?;
        if p.len() != self.n {
            return Err(Error::invalid(format!(
                "Pauli string {pauli:?} has length {}, state has {} qubits",
                p.len(),
                self.n
            )));
        }
        Ok(self.pauli_expectation_of(&p))
    }

    pub(crate) fn pauli_expectation_of(&self, p: &PauliString) -> f64 {
        (0..self.dim())
            .map(|x| {
                let (y, phase) = p.apply_to_basis(x);
                (phase * self.get(x, y)).re
            })
            .sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.to_matrix()).0
    }

    pub fn physicality(&self) -> Physicality {
        let d = self.dim();
        let mut herm = 0.0f64;
        for r in 0..d {
            for c in r..d {
                herm = herm.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        let tr = self.trace();
        let trace_error = (tr - 1.0).norm();
        let min_eigenvalue = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        Physicality { hermiticity_error: herm, trace_error, min_eigenvalue }
    }
}

fn check_width(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_density_qubits {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the density-matrix cap of {}; use trajectory sampling for wider circuits",
            limits.max_density_qubits
        )));
    }
    Ok(())
}

/// `rho -> K rho K^dag` in place on the vectorized matrix.
fn sandwich(data: &mut [C64], n: usize, k: &[C64], targets: &[usize]) {
    let rows: Vec<usize> = targets.iter().map(|t| t + n).collect();
    apply_dense(data, &rows, k);
    let kc: Vec<C64> = k.iter().map(|z| z.conj()).collect();
    apply_dense(data, targets, &kc);
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part
/// of `m`.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}
