use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::infomath::base_distribution;
use crate::qsim::{check_cap, Gate, Statevector, C64};
use crate::seqio::{base_bits, encode_bits, BaseScheme, DnaSequence};

/// Classical input vector for amplitude encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
    normalized: bool,
}

impl FeatureVector {
    pub fn raw(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty feature vector".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature value {v}")));
        }
        Ok(FeatureVector { values, normalized: false })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Zero-pads to the next power of two (at least 2) and scales to unit
    /// Euclidean norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Degenerate("zero vector cannot be amplitude encoded".into()));
        }
        let dim = self.values.len().next_power_of_two().max(2);
        let mut values: Vec<f64> = self.values.iter().map(|v| v / norm).collect();
        values.resize(dim, 0.0);
        Ok(FeatureVector { values, normalized: true })
    }
}

/// Rotation angles for each level of the uniformly controlled RY cascade.
/// `angles[s][p]` rotates qubit `s` when qubits `0..s` read the pattern `p`.
fn cascade_angles(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len().trailing_zeros() as usize;
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let block = 1usize << (n - s);
        let half = block / 2;
        let level = (0..1usize << s)
            .map(|p| {
                let chunk = &v[p * block..(p + 1) * block];
                if s + 1 == n {
                    // leaf pair: keep signs so cos/sin reproduce them
                    2.0 * chunk[1].atan2(chunk[0])
                } else {
                    let l = chunk[..half].iter().map(|x| x * x).sum::<f64>().sqrt();
                    let r = chunk[half..].iter().map(|x| x * x).sum::<f64>().sqrt();
                    2.0 * r.atan2(l)
                }
            })
            .collect();
        out.push(level);
    }
    out
}

/// Loads a real vector as state amplitudes via a cascade of uniformly
/// controlled Y rotations, one level per qubit from most to least
/// significant.
pub fn amplitude_encode(vec: &FeatureVector) -> Result<Statevector> {
    let v = if vec.is_normalized() { vec.clone() } else { vec.normalized()? };
    let n = v.values().len().trailing_zeros() as usize;
    check_cap(n)?;
    let mut state = Statevector::zero(n)?;
    for (s, angles) in cascade_angles(v.values()).iter().enumerate() {
        state.apply_uniformly_controlled_ry(s, angles);
    }
    Ok(state)
}

/// Amplitude encoding of `√p(b)` over `|A⟩, |C⟩, |G⟩, |T⟩`, so measurement
/// frequencies reproduce the base composition.
pub fn amplitude_encode_sequence(seq: &DnaSequence) -> Result<Statevector> {
    let p = base_distribution(seq).values();
    amplitude_encode(&FeatureVector::raw(p.iter().map(|x| x.sqrt()).collect())?)
}

/// Parameters for the second-order Pauli (ZZ) feature map.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMapConfig {
    /// One angle per qubit.
    pub x: Vec<f64>,
    /// Largest interaction subset size (1 or 2).
    pub k: usize,
    pub reps: usize,
}

impl FeatureMapConfig {
    pub fn new(x: Vec<f64>) -> Self {
        FeatureMapConfig { x, k: 2, reps: 2 }
    }

    /// `x_i = (two-bit value of base i)·π/2`.
    pub fn from_sequence(seq: &DnaSequence) -> Self {
        let x = seq
            .bases()
            .iter()
            .map(|&b| {
                let bits = base_bits(b, BaseScheme::TwoBit);
                (2 * bits[0] + bits[1]) as f64 * FRAC_PI_2
            })
            .collect();
        Self::new(x)
    }

    fn validate(&self) -> Result<()> {
        if self.x.is_empty() {
            return Err(Error::InvalidArgument("feature map needs at least one angle".into()));
        }
        if !(1..=2).contains(&self.k) {
            return Err(Error::InvalidArgument(format!("k must be 1 or 2, got {}", self.k)));
        }
        if self.reps == 0 {
            return Err(Error::InvalidArgument("reps must be at least 1".into()));
        }
        if let Some(v) = self.x.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature angle {v}")));
        }
        check_cap(self.x.len())
    }
}

/// `φ_{ij}(x) = (π − x_i)(π − x_j)`.
pub fn pair_phase(xi: f64, xj: f64) -> f64 {
    (PI - xi) * (PI - xj)
}

/// `[U_Φ(x)·H^⊗n]^reps |0…0⟩` with
/// `U_Φ(x) = exp(i Σ_S φ_S(x) Π_{i∈S} Z_i)`.
///
/// Singletons use `φ_i = x_i`; when `k = 2` every pair adds `φ_{ij}`.
/// `exp(iφZ)` is applied as `RZ(−2φ)` and `exp(iφ Z⊗Z)` as
/// `CNOT · RZ(−2φ) on the target · CNOT`.
pub fn pauli_feature_map(config: &FeatureMapConfig) -> Result<Statevector> {
    config.validate()?;
    let n = config.x.len();
    let mut state = Statevector::zero(n)?;
    let h = Gate::h();
    let cnot = Gate::cnot();
    for _ in 0..config.reps {
        for q in 0..n {
            state.apply_in_place(&h, &[q])?;
        }
        for (q, &xq) in config.x.iter().enumerate() {
            state.apply_in_place(&Gate::rotation(crate::qsim::Axis::Z, -2.0 * xq)?, &[q])?;
        }
        if config.k == 2 {
            for i in 0..n {
                for j in (i + 1)..n {
                    let phi = pair_phase(config.x[i], config.x[j]);
                    state.apply_in_place(&cnot, &[i, j])?;
                    state.apply_in_place(&Gate::rotation(crate::qsim::Axis::Z, -2.0 * phi)?, &[j])?;
                    state.apply_in_place(&cnot, &[i, j])?;
                }
            }
        }
    }
    Ok(state)
}

/// One qubit per base, `RY(m(b)·π)` with the high-bit map (`A,C → 0`,
/// `G,T → 1`); `A` and `C` therefore collide. With `entangle`, a CNOT chain
/// `(i, i+1)` follows the rotations.
pub fn angle_embed(seq: &DnaSequence, entangle: bool) -> Result<Statevector> {
    let n = seq.len();
    check_cap(n)?;
    let mut state = Statevector::zero(n)?;
    for (q, bit) in encode_bits(seq, BaseScheme::HighBit).into_iter().enumerate() {
        state.apply_in_place(&Gate::ry(bit as f64 * PI)?, &[q])?;
    }
    if entangle {
        let cnot = Gate::cnot();
        for q in 0..n.saturating_sub(1) {
            state.apply_in_place(&cnot, &[q, q + 1])?;
        }
    }
    Ok(state)
}

/// Dense reference for [`pauli_feature_map`]: builds the diagonal of
/// `U_Φ` from the Z eigenvalues of each basis index and multiplies it with an
/// explicit Walsh–Hadamard matrix.
pub fn pauli_feature_map_dense(config: &FeatureMapConfig) -> Result<Vec<C64>> {
    config.validate()?;
    let n = config.x.len();
    let dim = 1usize << n;
    let z = |idx: usize, q: usize| if idx >> (n - 1 - q) & 1 == 1 { -1.0 } else { 1.0 };
    let diag: Vec<C64> = (0..dim)
        .map(|idx| {
            let mut phase = 0.0;
            for q in 0..n {
                phase += config.x[q] * z(idx, q);
            }
            if config.k == 2 {
                for i in 0..n {
                    for j in (i + 1)..n {
                        phase += pair_phase(config.x[i], config.x[j]) * z(idx, i) * z(idx, j);
                    }
                }
            }
            C64::from_polar(1.0, phase)
        })
        .collect();
    let scale = (dim as f64).sqrt().recip();
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[0] = C64::new(1.0, 0.0);
    for _ in 0..config.reps {
        let hv: Vec<C64> = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let sign = if (r & c).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                        v[c] * sign * scale
                    })
                    .sum()
            })
            .collect();
        v = hv.iter().zip(&diag).map(|(a, d)| a * d).collect();
    }
    Ok(v)
}
