//! Discrete information measures over the four-letter alphabet.
//!
//! Entropy and Jensen–Shannon use log base 2; KL and Bhattacharyya use the
//! natural log.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seqio::{Base, DnaSequence};

/// Smoothing constant used when smoothing is requested without a value.
pub const DEFAULT_SMOOTHING: f64 = 1e-9;

const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Probability distribution over `A, C, G, T` (in that order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbDist4([f64; 4]);

impl ProbDist4 {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite() || *x < 0.0 || *x > 1.0) {
            return Err(Error::InvalidDistribution(format!("entries must lie in [0, 1]: {p:?}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(ProbDist4(p))
    }

    pub fn from_counts(counts: [usize; 4]) -> Result<Self> {
        let n: usize = counts.iter().sum();
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(ProbDist4(counts.map(|c| c as f64 / n as f64)))
    }

    pub fn uniform() -> Self {
        ProbDist4([0.25; 4])
    }

    pub fn delta(base: Base) -> Self {
        let mut p = [0.0; 4];
        p[base.index()] = 1.0;
        ProbDist4(p)
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, base: Base) -> f64 {
        self.0[base.index()]
    }

    /// `(p + ε) / (1 + 4ε)`.
    pub fn smoothed(&self, eps: f64) -> Self {
        ProbDist4(self.0.map(|x| (x + eps) / (1.0 + 4.0 * eps)))
    }
}

/// `p(b) = count(b) / N`.
pub fn base_distribution(seq: &DnaSequence) -> ProbDist4 {
    ProbDist4::from_counts(seq.counts()).expect("sequences are non-empty")
}

fn xlogx_terms(p: &ProbDist4, log: fn(f64) -> f64) -> f64 {
    p.0.iter().filter(|&&x| x > 0.0).map(|&x| x * log(x)).sum()
}

/// `−Σ p log₂ p` in bits, with `0·log 0 = 0`.
pub fn shannon_entropy(p: &ProbDist4) -> f64 {
    let h = -xlogx_terms(p, f64::log2);
    // -0.0 for deltas looks odd in reports
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

fn kl_raw(p: &[f64; 4], q: &[f64; 4], log: fn(f64) -> f64) -> Option<f64> {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return None;
        }
        acc += pi * log(pi / qi);
    }
    Some(acc)
}

/// `Σ p ln(p/q)` in nats. With `smoothing = Some(ε)` both inputs are first
/// mapped to `(x + ε)/(1 + 4ε)`.
pub fn kl_divergence(p: &ProbDist4, q: &ProbDist4, smoothing: Option<f64>) -> Result<f64> {
    let (p, q) = match smoothing {
        Some(eps) => {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidArgument(format!("smoothing must be positive, got {eps}")));
            }
            (p.smoothed(eps), q.smoothed(eps))
        }
        None => (*p, *q),
    };
    kl_raw(&p.0, &q.0, f64::ln)
        .map(|d| d.max(0.0))
        .ok_or_else(|| Error::InfiniteDivergence("q is zero where p is positive".into()))
}

/// `½[KL₂(p‖m) + KL₂(q‖m)]` with `m = (p+q)/2`; lies in `[0, 1]`.
pub fn js_divergence(p: &ProbDist4, q: &ProbDist4) -> f64 {
    let m: [f64; 4] = std::array::from_fn(|i| 0.5 * (p.0[i] + q.0[i]));
    let a = kl_raw(&p.0, &m, f64::log2).expect("m covers p");
    let b = kl_raw(&q.0, &m, f64::log2).expect("m covers q");
    (0.5 * (a + b)).clamp(0.0, 1.0)
}

/// Bhattacharyya coefficient `Σ √(p·q)`.
pub fn bhattacharyya_coefficient(p: &ProbDist4, q: &ProbDist4) -> f64 {
    p.0.iter().zip(&q.0).map(|(a, b)| (a * b).sqrt()).sum()
}

/// `−ln Σ √(p·q)`.
pub fn bhattacharyya(p: &ProbDist4, q: &ProbDist4) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let bc = bhattacharyya_coefficient(p, q);
    if bc <= 0.0 {
        return Err(Error::InfiniteDivergence("distributions have disjoint support".into()));
    }
    Ok((-bc.min(1.0).ln()).max(0.0))
}

/// `√(½ Σ (√p − √q)²)`.
pub fn hellinger(p: &ProbDist4, q: &ProbDist4) -> f64 {
    let s: f64 = p.0.iter().zip(&q.0).map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum();
    (0.5 * s).sqrt().min(1.0)
}

/// Earth mover's distance under the 0/1 ground metric, which is the total
/// variation distance `½ Σ |p − q|`.
pub fn tv_wasserstein(p: &ProbDist4, q: &ProbDist4) -> f64 {
    (0.5 * p.0.iter().zip(&q.0).map(|(a, b)| (a - b).abs()).sum::<f64>()).min(1.0)
}

/// Diagonal Fisher–Rao coefficients `1 / (p(b)·q(b))`, in `A, C, G, T` order.
pub fn fisher_rao_diag(p: &ProbDist4, q: &ProbDist4) -> Result<[f64; 4]> {
    for b in Base::ALL {
        if p.get(b) <= 0.0 || q.get(b) <= 0.0 {
            return Err(Error::ZeroProbability(b.to_char()));
        }
    }
    Ok(std::array::from_fn(|i| 1.0 / (p.0[i] * q.0[i])))
}

/// Number of mismatching positions.
pub fn hamming(s: &DnaSequence, t: &DnaSequence) -> Result<usize> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: t.len() });
    }
    Ok(s.bases().iter().zip(t.bases()).filter(|(a, b)| a != b).count())
}

/// Selector for [`divergence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceKind {
    Kl,
    Js,
    Bhattacharyya,
    Hellinger,
    Tv,
}

impl std::str::FromStr for DivergenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kl" => Ok(DivergenceKind::Kl),
            "js" => Ok(DivergenceKind::Js),
            "bhatt" | "bhattacharyya" => Ok(DivergenceKind::Bhattacharyya),
            "hellinger" => Ok(DivergenceKind::Hellinger),
            "tv" | "wasserstein" => Ok(DivergenceKind::Tv),
            other => Err(Error::InvalidArgument(format!("unknown divergence '{other}'"))),
        }
    }
}

impl DivergenceKind {
    pub fn name(self) -> &'static str {
        match self {
            DivergenceKind::Kl => "kl",
            DivergenceKind::Js => "js",
            DivergenceKind::Bhattacharyya => "bhatt",
            DivergenceKind::Hellinger => "hellinger",
            DivergenceKind::Tv => "tv",
        }
    }
}

pub fn divergence(
    kind: DivergenceKind,
    p: &ProbDist4,
    q: &ProbDist4,
    smoothing: Option<f64>,
) -> Result<f64> {
    match kind {
        DivergenceKind::Kl => kl_divergence(p, q, smoothing),
        DivergenceKind::Js => Ok(js_divergence(p, q)),
        DivergenceKind::Bhattacharyya => bhattacharyya(p, q),
        DivergenceKind::Hellinger => Ok(hellinger(p, q)),
        DivergenceKind::Tv => Ok(tv_wasserstein(p, q)),
    }
}
