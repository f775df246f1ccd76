use super::{check_cap, Gate, C64};
use crate::error::{Error, Result};

/// Maximum allowed deviation of `Σ|a|²` from 1 for a state accepted from
/// outside the simulator (e.g. a parsed dump).
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Normalized amplitude vector over `2^n_qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a register needs at least one qubit".into()));
        }
        check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    /// Accepts an amplitude vector whose squared norm is within
    /// [`NORM_TOLERANCE`] of 1 and rescales it to unit norm.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_cap(n_qubits)?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitude".into()));
        }
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sqr} deviates from 1 by more than {NORM_TOLERANCE}"
            )));
        }
        let mut state = Statevector { n_qubits, amps };
        // leave near-unit vectors untouched so dumps round-trip bit-exactly
        if (norm_sqr - 1.0).abs() > 1e-12 {
            let scale = norm_sqr.sqrt().recip();
            state.amps.iter_mut().for_each(|z| *z *= scale);
        }
        Ok(state)
    }

    /// Normalizes an arbitrary non-zero vector of power-of-two length.
    pub(crate) fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Index of the largest-magnitude amplitude (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        let mut best_p = -1.0;
        for (i, z) in self.amps.iter().enumerate() {
            let p = z.norm_sqr();
            if p > best_p + 1e-15 {
                best = i;
                best_p = p;
            }
        }
        best
    }

    /// Returns `Some(i)` when the state is (up to 1e-12) the basis state `|i⟩`.
    pub fn as_basis_state(&self) -> Option<usize> {
        let i = self.argmax();
        ((self.amps[i].norm_sqr() - 1.0).abs() < 1e-12).then_some(i)
    }

    /// Bit mask of `qubit` within a basis index.
    #[inline]
    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_targets(&self, targets: &[usize], arity: usize) -> Result<()> {
        if targets.len() != arity {
            return Err(Error::BadTargets(format!(
                "gate of arity {arity} given {} target(s)",
                targets.len()
            )));
        }
        if let Some(&q) = targets.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::BadTargets(format!(
                "qubit {q} out of range for {} qubit(s)",
                self.n_qubits
            )));
        }
        if arity == 2 && targets[0] == targets[1] {
            return Err(Error::BadTargets(format!("repeated target {}", targets[0])));
        }
        Ok(())
    }

    /// Applies `gate` to `targets` (identity on every other qubit).
    pub fn apply(mut self, gate: &Gate, targets: &[usize]) -> Result<Self> {
        self.apply_in_place(gate, targets)?;
        Ok(self)
    }

    pub(crate) fn apply_in_place(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        self.check_targets(targets, gate.arity())?;
        match gate.arity() {
            1 => self.apply_single(gate, targets[0]),
            _ => self.apply_double(gate, targets[0], targets[1]),
        }
        Ok(())
    }

    fn apply_single(&mut self, gate: &Gate, q: usize) {
        let m = gate.matrix();
        let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
        let mask = self.mask(q);
        for i0 in 0..self.amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let i1 = i0 | mask;
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = m00 * a0 + m01 * a1;
            self.amps[i1] = m10 * a0 + m11 * a1;
        }
    }

    fn apply_double(&mut self, gate: &Gate, qa: usize, qb: usize) {
        let m = gate.matrix();
        let ma = self.mask(qa);
        let mb = self.mask(qb);
        for base in 0..self.amps.len() {
            if base & (ma | mb) != 0 {
                continue;
            }
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let v = idx.map(|i| self.amps[i]);
            for (r, &i) in idx.iter().enumerate() {
                let row = &m[r * 4..r * 4 + 4];
                self.amps[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            }
        }
    }

    /// Applies `RY(angles[p])` to `target` for every pattern `p` of the more
    /// significant qubits `0..target` (a uniformly controlled rotation).
    pub(crate) fn apply_uniformly_controlled_ry(&mut self, target: usize, angles: &[f64]) {
        debug_assert_eq!(angles.len(), 1 << target);
        let mask = self.mask(target);
        let shift = self.n_qubits - target;
        let rot: Vec<(f64, f64)> = angles.iter().map(|t| ((t / 2.0).cos(), (t / 2.0).sin())).collect();
        for i0 in 0..self.amps.len() {
            if i0 & mask != 0 {
                continue;
            }
            let (c, s) = rot[i0 >> shift];
            let i1 = i0 | mask;
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = a0 * c - a1 * s;
            self.amps[i1] = a0 * s + a1 * c;
        }
    }

    /// Kronecker product with `self`'s qubits more significant.
    pub fn tensor(&self, other: &Statevector) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_cap(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Statevector { n_qubits: n, amps })
    }

    /// Multiplies every amplitude by `e^{iφ}`.
    pub fn with_global_phase(mut self, phi: f64) -> Self {
        let f = C64::from_polar(1.0, phi);
        self.amps.iter_mut().for_each(|z| *z *= f);
        self
    }

    /// Largest per-amplitude distance to `other`.
    pub fn max_abs_diff(&self, other: &Statevector) -> f64 {
        if self.amps.len() != other.amps.len() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn assert_amps(s: &Statevector, expect: &[C64]) {
        assert_eq!(s.dim(), expect.len());
        for (a, b) in s.amplitudes().iter().zip(expect) {
            assert!((a - b).norm() < 1e-12, "{:?} vs {:?}", s.amplitudes(), expect);
        }
    }

    #[test]
    fn basis_states() {
        assert_amps(&Statevector::basis(1, 0).unwrap(), &[c(1.0), c(0.0)]);
        assert_amps(&Statevector::basis(2, 3).unwrap(), &[c(0.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(
            Statevector::basis(3, 8),
            Err(Error::IndexOutOfRange { index: 8, n_qubits: 3 })
        );
    }

    #[test]
    fn cap_is_enforced_before_allocation() {
        let err = Statevector::zero(super::super::HARD_QUBIT_CEILING + 5).unwrap_err();
        assert!(matches!(err, Error::QubitCapExceeded { .. }));
    }

    #[test]
    fn hadamard_on_zero() {
        let s = Statevector::zero(1).unwrap().apply(&Gate::h(), &[0]).unwrap();
        assert_amps(&s, &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
    }

    #[test]
    fn x_on_second_qubit_is_big_endian() {
        let s = Statevector::zero(2).unwrap().apply(&Gate::x(), &[1]).unwrap();
        assert_eq!(s.as_basis_state(), Some(0b01));
    }

    #[test]
    fn cnot_truth_table() {
        let s = Statevector::basis(2, 0b10).unwrap().apply(&Gate::cnot(), &[0, 1]).unwrap();
        assert_eq!(s.as_basis_state(), Some(0b11));
        let s = Statevector::basis(2, 0b01).unwrap().apply(&Gate::cnot(), &[1, 0]).unwrap();
        assert_eq!(s.as_basis_state(), Some(0b11));
        let s = Statevector::basis(2, 0b01).unwrap().apply(&Gate::cnot(), &[0, 1]).unwrap();
        assert_eq!(s.as_basis_state(), Some(0b01));
    }

    #[test]
    fn ry_pi_flips_zero() {
        let s = Statevector::zero(1).unwrap().apply(&Gate::ry(std::f64::consts::PI).unwrap(), &[0]).unwrap();
        assert_eq!(s.as_basis_state(), Some(1));
    }

    #[test]
    fn bad_targets() {
        let s = Statevector::zero(2).unwrap();
        assert!(matches!(s.clone().apply(&Gate::h(), &[2]), Err(Error::BadTargets(_))));
        assert!(matches!(s.clone().apply(&Gate::cnot(), &[1, 1]), Err(Error::BadTargets(_))));
        assert!(matches!(s.apply(&Gate::cnot(), &[0]), Err(Error::BadTargets(_))));
    }

    #[test]
    fn tensor_products() {
        let zero = Statevector::basis(1, 0).unwrap();
        let one = Statevector::basis(1, 1).unwrap();
        assert_eq!(zero.tensor(&one).unwrap().as_basis_state(), Some(0b01));

        let plus = zero.clone().apply(&Gate::h(), &[0]).unwrap();
        let h = FRAC_1_SQRT_2;
        assert_amps(&plus.tensor(&zero).unwrap(), &[c(h), c(0.0), c(h), c(0.0)]);

        let minus = one.apply(&Gate::h(), &[0]).unwrap();
        assert_amps(&plus.tensor(&minus).unwrap(), &[c(0.5), c(-0.5), c(0.5), c(-0.5)]);
    }

    #[test]
    fn from_amplitudes_checks_norm_and_shape() {
        assert!(Statevector::from_amplitudes(vec![c(1.0)]).is_err());
        assert!(Statevector::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]).is_err());
        assert!(Statevector::from_amplitudes(vec![c(0.5), c(0.5)]).is_err());
        let s = Statevector::from_amplitudes(vec![c(0.6), c(0.8 + 1e-8)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
