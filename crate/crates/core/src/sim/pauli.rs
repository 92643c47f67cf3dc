use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::invalid(format!("{c:?} is not a Pauli character (I, X, Y, Z)"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of Paulis written in display order: the first character
/// acts on the highest-index qubit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
    x_mask: usize,
    z_mask: usize,
    y_count: u32,
}

impl PauliString {
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::invalid("empty Pauli string"));
        }
        let ops = s.chars().map(Pauli::from_char).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_ops(ops))
    }

    /// `ops[0]` acts on qubit `n-1`.
    pub fn from_ops(ops: Vec<Pauli>) -> Self {
        let n = ops.len();
        let (mut x_mask, mut z_mask, mut y_count) = (0, 0, 0);
        for (pos, p) in ops.iter().enumerate() {
            let bit = 1usize << (n - 1 - pos);
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= bit,
                Pauli::Z => z_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
            }
        }
        PauliString { ops, x_mask, z_mask, y_count }
    }

    /// All `4^n` strings in lexicographic I < X < Y < Z order.
    pub fn all(n: usize) -> Vec<PauliString> {
        const P: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        (0..4usize.pow(n as u32))
            .map(|mut k| {
                let mut ops = vec![Pauli::I; n];
                for slot in ops.iter_mut().rev() {
                    *slot = P[k % 4];
                    k /= 4;
                }
                PauliString::from_ops(ops)
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|p| *p == Pauli::I)
    }

    /// `P|x> = phase |y>`; returns `(y, phase)`.
    pub fn apply_to_basis(&self, x: usize) -> (usize, C64) {
        // Y = iXZ: Z acts first, contributing (-1)^bit, then X flips.
        let sign = if (x & self.z_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        let i_pow = match self.y_count % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        (x ^ self.x_mask, i_pow * sign)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}
