//! Gate set and circuit container.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    /// Targets are `[control, target]`.
    CX,
    CZ,
    /// Targets are `[controls.., target]`.
    MCX,
    /// Phase flip of the all-ones pattern over every target; symmetric in its targets.
    MCZ,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::CX,
        GateKind::CZ,
        GateKind::MCX,
        GateKind::MCZ,
    ];

    pub fn is_single_qubit(self) -> bool {
        matches!(
            self,
            GateKind::H | GateKind::X | GateKind::Y | GateKind::Z | GateKind::S | GateKind::Sdg
        )
    }

    fn arity_ok(self, arity: usize) -> bool {
        match self {
            k if k.is_single_qubit() => arity == 1,
            GateKind::CX | GateKind::CZ => arity == 2,
            _ => arity >= 1,
        }
    }

    /// 2x2 matrix for single-qubit kinds, row-major.
    pub(crate) fn single_qubit_matrix(self) -> Option<[C64; 4]> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| C64::new(re, im);
        Some(match self {
            GateKind::H => [c(r, 0.), c(r, 0.), c(r, 0.), c(-r, 0.)],
            GateKind::X => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
            GateKind::Y => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
            GateKind::Z => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
            GateKind::S => [c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)],
            GateKind::Sdg => [c(1., 0.), c(0., 0.), c(0., 0.), c(0., -1.)],
            _ => return None,
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::MCX => "mcx",
            GateKind::MCZ => "mcz",
        };
        f.write_str(s)
    }
}

/// How a gate acts on a basis-indexed amplitude array.
#[derive(Debug, Clone)]
pub(crate) enum Action {
    /// 2x2 matrix on one qubit.
    Single { qubit: usize, matrix: [C64; 4] },
    /// Flip `target` where every bit in `controls` is set.
    ControlledX { controls: usize, target: usize },
    /// Negate amplitudes where every bit in `mask` is set.
    PhaseFlip { mask: usize },
}

impl Action {
    /// Same action with qubit indices shifted up by `offset`.
    pub(crate) fn shifted(&self, offset: usize) -> Action {
        match *self {
            Action::Single { qubit, matrix } => Action::Single { qubit: qubit + offset, matrix },
            Action::ControlledX { controls, target } => Action::ControlledX {
                controls: controls << offset,
                target: target + offset,
            },
            Action::PhaseFlip { mask } => Action::PhaseFlip { mask: mask << offset },
        }
    }

    /// Elementwise complex conjugate of the gate matrix.
    pub(crate) fn conjugated(&self) -> Action {
        match *self {
            Action::Single { qubit, matrix } => Action::Single {
                qubit,
                matrix: matrix.map(|z| z.conj()),
            },
            ref other => other.clone(),
        }
    }

    pub(crate) fn apply(&self, amps: &mut [C64]) {
        match *self {
            Action::Single { qubit, matrix } => {
                let bit = 1usize << qubit;
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        let a0 = amps[i];
                        let a1 = amps[i | bit];
                        amps[i] = matrix[0] * a0 + matrix[1] * a1;
                        amps[i | bit] = matrix[2] * a0 + matrix[3] * a1;
                    }
                }
            }
            Action::ControlledX { controls, target } => {
                let bit = 1usize << target;
                for i in 0..amps.len() {
                    if i & bit == 0 && i & controls == controls {
                        amps.swap(i, i | bit);
                    }
                }
            }
            Action::PhaseFlip { mask } => {
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
        }
    }
}

/// One gate applied to an ordered list of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateOp {
    kind: GateKind,
    targets: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        if !kind.arity_ok(targets.len()) {
            return Err(Error::invalid(format!(
                "gate {kind} cannot act on {} qubits",
                targets.len()
            )));
        }
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::invalid(format!("gate {kind} repeats qubit {t}")));
            }
        }
        Ok(GateOp { kind, targets })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub(crate) fn action(&self) -> Action {
        let mask_of = |qs: &[usize]| qs.iter().fold(0usize, |m, &q| m | 1 << q);
        match self.kind {
            k if k.is_single_qubit() => Action::Single {
                qubit: self.targets[0],
                matrix: k.single_qubit_matrix().unwrap(),
            },
            GateKind::CX | GateKind::MCX => {
                let (target, controls) = self.targets.split_last().unwrap();
                Action::ControlledX { controls: mask_of(controls), target: *target }
            }
            _ => Action::PhaseFlip { mask: mask_of(&self.targets) },
        }
    }

    /// Dense unitary in the gate's local basis, where bit `j` of the local
    /// index corresponds to `targets()[j]`. Row-major, side `2^arity`.
    pub fn matrix(&self) -> Vec<C64> {
        let local = GateOp {
            kind: self.kind,
            targets: (0..self.arity()).collect(),
        };
        let action = local.action();
        let dim = 1usize << self.arity();
        let mut out = vec![C64::new(0.0, 0.0); dim * dim];
        let mut column = vec![C64::new(0.0, 0.0); dim];
        for j in 0..dim {
            column.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            column[j] = C64::new(1.0, 0.0);
            action.apply(&mut column);
            for i in 0..dim {
                out[i * dim + j] = column[i];
            }
        }
        out
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for t in &self.targets {
            write!(f, " q{t}")?;
        }
        Ok(())
    }
}

/// Ordered gate program over `width` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit { width, ops: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        if let Some(&q) = op.targets.iter().find(|&&q| q >= self.width) {
            return Err(Error::invalid(format!(
                "gate {op} touches qubit {q} outside a {}-qubit circuit",
                self.width
            )));
        }
        self.ops.push(op);
        Ok(self)
    }

    pub fn gate(&mut self, kind: GateKind, targets: &[usize]) -> Result<&mut Self> {
        self.push(GateOp::new(kind, targets.to_vec())?)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.gate(GateKind::H, &[q])
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.gate(GateKind::X, &[q])
    }

    pub fn sdg(&mut self, q: usize) -> Result<&mut Self> {
        self.gate(GateKind::Sdg, &[q])
    }

    pub fn mcz(&mut self, qubits: &[usize]) -> Result<&mut Self> {
        self.gate(GateKind::MCZ, qubits)
    }

    pub fn mcx(&mut self, controls: &[usize], target: usize) -> Result<&mut Self> {
        let mut t = controls.to_vec();
        t.push(target);
        self.gate(GateKind::MCX, &t)
    }

    /// Append every op of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width > self.width {
            return Err(Error::invalid(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.width, self.width
            )));
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit width={}", self.width)?;
        for op in &self.ops {
            writeln!(f, "  {op}")?;
        }
        Ok(())
    }
}
