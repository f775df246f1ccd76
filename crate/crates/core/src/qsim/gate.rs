use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use super::C64;
use crate::error::{Error, Result};

/// Rotation axis for [`Gate::rotation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

/// A one- or two-qubit unitary stored as a row-major matrix.
///
/// For two-qubit gates the row/column index is `2*b0 + b1` where `b0` is the
/// bit of the first target and `b1` the bit of the second.
#[derive(Clone, PartialEq)]
pub struct Gate {
    arity: usize,
    matrix: Vec<C64>,
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

impl Gate {
    /// Builds a gate from a row-major matrix, checking shape and unitarity.
    pub fn from_matrix(arity: usize, matrix: Vec<C64>) -> Result<Self> {
        let dim = match arity {
            1 => 2,
            2 => 4,
            _ => return Err(Error::InvalidArgument(format!("unsupported arity {arity}"))),
        };
        if matrix.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} matrix entries, got {}",
                dim * dim,
                matrix.len()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("gate matrix entry".into()));
        }
        let gate = Gate { arity, matrix };
        let err = gate.unitarity_error();
        if err > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary (max deviation {err:e})"
            )));
        }
        Ok(gate)
    }

    fn single(m: [C64; 4]) -> Self {
        Gate { arity: 1, matrix: m.to_vec() }
    }

    pub fn identity() -> Self {
        Self::single([ONE, ZERO, ZERO, ONE])
    }

    pub fn h() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::single([h, h, h, -h])
    }

    pub fn x() -> Self {
        Self::single([ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> Self {
        Self::single([ZERO, -I, I, ZERO])
    }

    pub fn z() -> Self {
        Self::single([ONE, ZERO, ZERO, -ONE])
    }

    pub fn s() -> Self {
        Self::single([ONE, ZERO, ZERO, I])
    }

    pub fn t() -> Self {
        Self::single([ONE, ZERO, ZERO, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])
    }

    /// `diag(1, e^{iλ})`.
    pub fn phase(lambda: f64) -> Self {
        Self::single([ONE, ZERO, ZERO, C64::from_polar(1.0, lambda)])
    }

    /// `R_axis(θ) = cos(θ/2)·I − i·sin(θ/2)·P_axis`.
    pub fn rotation(axis: Axis, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite(format!("rotation angle {theta}")));
        }
        let c = C64::new((theta / 2.0).cos(), 0.0);
        let s = (theta / 2.0).sin();
        let m = match axis {
            Axis::X => [c, C64::new(0.0, -s), C64::new(0.0, -s), c],
            Axis::Y => [c, C64::new(-s, 0.0), C64::new(s, 0.0), c],
            Axis::Z => [
                C64::from_polar(1.0, -theta / 2.0),
                ZERO,
                ZERO,
                C64::from_polar(1.0, theta / 2.0),
            ],
        };
        Ok(Self::single(m))
    }

    pub fn ry(theta: f64) -> Result<Self> {
        Self::rotation(Axis::Y, theta)
    }

    fn two(diag_or_full: [C64; 16]) -> Self {
        Gate { arity: 2, matrix: diag_or_full.to_vec() }
    }

    /// Controlled-NOT with the first target as control.
    pub fn cnot() -> Self {
        let mut m = [ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[11] = ONE;
        m[14] = ONE;
        Self::two(m)
    }

    pub fn cz() -> Self {
        Self::controlled_phase(std::f64::consts::PI)
    }

    /// `diag(1, 1, 1, e^{iλ})`.
    pub fn controlled_phase(lambda: f64) -> Self {
        let mut m = [ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        m[10] = ONE;
        m[15] = C64::from_polar(1.0, lambda);
        Self::two(m)
    }

    pub fn swap() -> Self {
        let mut m = [ZERO; 16];
        m[0] = ONE;
        m[6] = ONE;
        m[9] = ONE;
        m[15] = ONE;
        Self::two(m)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dim() + col]
    }

    /// `max |(U·U†) − I|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entry(r, k) * self.entry(c, k).conj();
                }
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    /// Multiplies every entry by a scalar; used for mutation tests and
    /// global-phase bookkeeping.
    pub fn scaled(&self, factor: C64) -> Self {
        Gate {
            arity: self.arity,
            matrix: self.matrix.iter().map(|z| z * factor).collect(),
        }
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        writeln!(f, "Gate(arity={})", self.arity)?;
        for r in 0..d {
            let row: Vec<String> = (0..d)
                .map(|c| {
                    let z = self.entry(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &Gate, b: &Gate, tol: f64) -> bool {
        a.matrix.iter().zip(&b.matrix).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn rz_zero_is_identity() {
        assert!(close(&Gate::rotation(Axis::Z, 0.0).unwrap(), &Gate::identity(), 1e-15));
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let expect = Gate::x().scaled(-I);
        assert!(close(&Gate::rotation(Axis::X, PI).unwrap(), &expect, 1e-15));
    }

    #[test]
    fn non_finite_angle_rejected() {
        assert!(matches!(Gate::rotation(Axis::Y, f64::NAN), Err(Error::NonFinite(_))));
        assert!(Gate::rotation(Axis::X, f64::INFINITY).is_err());
    }

    #[test]
    fn standard_gates_are_unitary() {
        let gates = [
            Gate::identity(),
            Gate::h(),
            Gate::x(),
            Gate::y(),
            Gate::z(),
            Gate::s(),
            Gate::t(),
            Gate::cnot(),
            Gate::cz(),
            Gate::swap(),
            Gate::controlled_phase(0.3),
            Gate::phase(1.7),
        ];
        for g in &gates {
            assert!(g.unitarity_error() < 1e-10, "{g:?}");
        }
    }

    #[test]
    fn from_matrix_rejects_non_unitary() {
        let m = vec![ONE, ONE, ZERO, ONE];
        assert!(Gate::from_matrix(1, m).is_err());
        assert!(Gate::from_matrix(3, vec![]).is_err());
    }
}
