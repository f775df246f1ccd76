use std::str::FromStr;

use serde::Serialize;

use super::baseline::{amplitude_encode, FeatureVector};
use crate::error::{Error, Result};
use crate::infomath::{
    base_distribution, bhattacharyya, fisher_rao_diag, kl_divergence, shannon_entropy, ProbDist4,
};
use crate::qsim::{check_cap, Gate, Statevector, C64};
use crate::seqio::{Base, DnaSequence};

/// One SEncode segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub position: usize,
    pub bases: String,
    pub distribution: [f64; 4],
    pub entropy: f64,
    pub normalized_entropy: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentReport {
    /// Segment size.
    pub k: usize,
    /// Segment count.
    pub m: usize,
    /// Qubits per segment register.
    pub register_qubits: usize,
    pub segments: Vec<Segment>,
}

fn ceil_log2(x: usize) -> usize {
    x.next_power_of_two().trailing_zeros() as usize
}

/// Splits `seq` into segments of size `K = max(1, ⌈log₂ N⌉)` (last one may
/// be short), ranks them by entropy scaled by the largest segment entropy,
/// ties by position, and returns the segment table.
pub fn segment_report(seq: &DnaSequence) -> SegmentReport {
    let n = seq.len();
    let k = ceil_log2(n).max(1);
    let chunks: Vec<&[Base]> = seq.bases().chunks(k).collect();
    let m = chunks.len();
    let entropies: Vec<(ProbDist4, f64)> = chunks
        .iter()
        .map(|c| {
            let p = base_distribution(&DnaSequence::from_bases(c.to_vec()).expect("non-empty chunk"));
            let h = shannon_entropy(&p);
            (p, h)
        })
        .collect();
    let h_max = entropies.iter().fold(0.0f64, |a, (_, h)| a.max(*h));
    let normalized: Vec<f64> = entropies
        .iter()
        .map(|(_, h)| if h_max > 0.0 { h / h_max } else { 0.0 })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| normalized[a].total_cmp(&normalized[b]));
    let mut rank = vec![0; m];
    for (r, &pos) in order.iter().enumerate() {
        rank[pos] = r;
    }
    let segments = chunks
        .iter()
        .zip(&entropies)
        .enumerate()
        .map(|(pos, (c, (p, h)))| Segment {
            position: pos,
            bases: c.iter().map(|b| b.to_char()).collect(),
            distribution: p.values(),
            entropy: *h,
            normalized_entropy: normalized[pos],
            rank: rank[pos],
        })
        .collect();
    SegmentReport { k, m, register_qubits: ceil_log2(m.max(2)), segments }
}

/// `H^⊗k′|r⟩` for each rank `r = 0…M−1`, tensored with rank 0 most
/// significant.
pub fn sencode(seq: &DnaSequence) -> Result<(SegmentReport, Statevector)> {
    let report = segment_report(seq);
    let width = report.register_qubits;
    check_cap(report.m * width)?;
    let h = Gate::h();
    let mut state: Option<Statevector> = None;
    for r in 0..report.m {
        let mut reg = Statevector::basis(width, r)?;
        for q in 0..width {
            reg.apply_in_place(&h, &[q])?;
        }
        state = Some(match state {
            None => reg,
            Some(s) => s.tensor(&reg)?,
        });
    }
    Ok((report, state.expect("at least one segment")))
}

/// Qubit budget derived from a divergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncodeBudget {
    pub divergence: f64,
    pub alpha: f64,
    pub n: usize,
}

impl EncodeBudget {
    /// `n = max(1, round(α·⌈D⌉))`.
    pub fn new(divergence: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        if !divergence.is_finite() || divergence < 0.0 {
            return Err(Error::InvalidArgument(format!("bad divergence {divergence}")));
        }
        let n = ((alpha * divergence.ceil()).round() as usize).max(1);
        Ok(EncodeBudget { divergence, alpha, n })
    }
}

fn check_lengths(seq: &DnaSequence, reference: &DnaSequence) -> Result<()> {
    if seq.len() != reference.len() {
        return Err(Error::LengthMismatch { left: seq.len(), right: reference.len() });
    }
    Ok(())
}

/// Product of `RY(2·asin √f_j)|0⟩`.
fn fraction_product(fractions: &[f64]) -> Result<Statevector> {
    let mut state = Statevector::zero(fractions.len())?;
    for (q, f) in fractions.iter().enumerate() {
        state.apply_in_place(&Gate::ry(2.0 * f.sqrt().asin())?, &[q])?;
    }
    Ok(state)
}

/// Mismatch fraction of each of `n` chunks of the position-wise comparison.
/// The last chunk absorbs the remainder; if `n` exceeds the length, the
/// surplus chunks are empty and get 0.
pub fn mismatch_fractions(seq: &DnaSequence, reference: &DnaSequence, n: usize) -> Result<Vec<f64>> {
    check_lengths(seq, reference)?;
    let flags: Vec<bool> = seq.bases().iter().zip(reference.bases()).map(|(a, b)| a != b).collect();
    let len = flags.len();
    let size = len / n;
    Ok((0..n)
        .map(|j| {
            let (lo, hi) = if size == 0 {
                (j.min(len), (j + 1).min(len))
            } else if j + 1 == n {
                (j * size, len)
            } else {
                (j * size, (j + 1) * size)
            };
            if hi == lo {
                0.0
            } else {
                flags[lo..hi].iter().filter(|&&f| f).count() as f64 / (hi - lo) as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nz22 {
    pub budget: EncodeBudget,
    pub fractions: Vec<f64>,
    pub state: Statevector,
}

/// Budget from the KL divergence of the base distributions, one qubit per
/// chunk with `|1⟩` probability equal to the chunk's mismatch fraction.
pub fn nz22(seq: &DnaSequence, reference: &DnaSequence, alpha: f64, smoothing: Option<f64>) -> Result<Nz22> {
    check_lengths(seq, reference)?;
    let d = kl_divergence(&base_distribution(seq), &base_distribution(reference), smoothing)?;
    let budget = EncodeBudget::new(d, alpha)?;
    check_cap(budget.n)?;
    let fractions = mismatch_fractions(seq, reference, budget.n)?;
    let state = fraction_product(&fractions)?;
    Ok(Nz22 { budget, fractions, state })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nz23 {
    pub budget: EncodeBudget,
    /// First base of the sequence, used when `n = 1`.
    pub pivot: Base,
    pub state: Statevector,
}

/// Budget from the Bhattacharyya distance. One qubit carries
/// `√(1−P(b*))|0⟩ + √P(b*)|1⟩` for the first base `b*`; wider budgets
/// amplitude-load `√P` on the two least significant qubits.
pub fn nz23(seq: &DnaSequence, reference: &DnaSequence, alpha: f64) -> Result<Nz23> {
    check_lengths(seq, reference)?;
    let p = base_distribution(seq);
    let d = bhattacharyya(&p, &base_distribution(reference))?;
    let budget = EncodeBudget::new(d, alpha)?;
    check_cap(budget.n)?;
    let pivot = seq.first();
    let state = if budget.n == 1 {
        fraction_product(&[p.get(pivot)])?
    } else {
        let core = amplitude_encode(&FeatureVector::raw(p.values().iter().map(|x| x.sqrt()).collect())?)?;
        Statevector::zero(budget.n - 2)
            .map(|pad| pad.tensor(&core))
            .unwrap_or(Ok(core))?
    };
    Ok(Nz23 { budget, pivot, state })
}

/// Diagonal metric used by QuantIG.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IgMetric {
    FisherRao,
    Hellinger,
    Tv,
}

impl IgMetric {
    pub fn name(self) -> &'static str {
        match self {
            IgMetric::FisherRao => "fisher-rao",
            IgMetric::Hellinger => "hellinger",
            IgMetric::Tv => "tv",
        }
    }

    /// `g(x, x)` in `A, C, G, T` order.
    pub fn diagonal(self, p: &ProbDist4, q: &ProbDist4) -> Result<[f64; 4]> {
        let (pv, qv) = (p.values(), q.values());
        Ok(match self {
            IgMetric::FisherRao => fisher_rao_diag(p, q)?,
            IgMetric::Hellinger => std::array::from_fn(|i| (pv[i].sqrt() - qv[i].sqrt()).powi(2)),
            IgMetric::Tv => std::array::from_fn(|i| (pv[i] - qv[i]).abs()),
        })
    }
}

impl FromStr for IgMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fisher-rao" | "fisher" => Ok(IgMetric::FisherRao),
            "hellinger" => Ok(IgMetric::Hellinger),
            "tv" => Ok(IgMetric::Tv),
            _ => Err(Error::InvalidArgument(format!(
                "unknown metric '{s}' (expected fisher-rao, hellinger or tv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantIg {
    pub metric: IgMetric,
    pub diagonal: [f64; 4],
    pub state: Statevector,
}

/// `normalize(ℒ^{-1/2} 𝒢 ℒ^{-1/2} H^⊗2|00⟩)` with `ℒ = diag(√p)` and `𝒢`
/// the chosen diagonal metric, over `|A⟩, |C⟩, |G⟩, |T⟩`.
///
/// Every base must have non-zero probability in both sequences unless a
/// smoothing constant is given.
pub fn quantig(
    seq: &DnaSequence,
    reference: &DnaSequence,
    metric: IgMetric,
    smoothing: Option<f64>,
) -> Result<QuantIg> {
    check_lengths(seq, reference)?;
    let (mut p, mut q) = (base_distribution(seq), base_distribution(reference));
    if let Some(eps) = smoothing {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("smoothing must be positive, got {eps}")));
        }
        p = p.smoothed(eps);
        q = q.smoothed(eps);
    }
    for (i, b) in Base::ALL.iter().enumerate() {
        if p.values()[i] == 0.0 || q.values()[i] == 0.0 {
            return Err(Error::ZeroProbability(b.to_char()));
        }
    }
    let diagonal = metric.diagonal(&p, &q)?;
    // ℒ^{-1/2} 𝒢 ℒ^{-1/2} acting on amplitudes ½
    let amps: Vec<C64> = (0..4)
        .map(|i| C64::new(0.5 * diagonal[i] / p.values()[i].sqrt(), 0.0))
        .collect();
    if amps.iter().all(|a| a.norm() == 0.0) {
        return Err(Error::Degenerate(format!(
            "metric '{}' vanishes on every base",
            metric.name()
        )));
    }
    let state = Statevector::normalized(amps)?;
    Ok(QuantIg { metric, diagonal, state })
}
