//! Energy-based harness for encoded sequences.
//!
//! Sequences are written as two-bit codes, split into equal segments, and
//! each segment is treated as a spin configuration `σ ∈ {0,1}^n` of an open
//! chain with layered pairwise couplings. Partition function and moments are
//! computed by exhaustive enumeration, so `n` is limited to [`MAX_SPINS`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqio::{encode_bits, BaseScheme, DnaSequence};

pub const MAX_SPINS: usize = 20;

/// Two-bit code of every base, concatenated.
pub fn bin_encode_seq(seq: &DnaSequence) -> String {
    encode_bits(seq, BaseScheme::TwoBit)
        .into_iter()
        .map(|b| if b == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segmentation {
    pub segments: Vec<String>,
    /// Trailing bits that did not fit into a segment.
    pub leftover: usize,
}

/// Splits `bits` into `count` segments of `⌊len/count⌋` bits; the remainder
/// is reported as left over.
pub fn segment_bits(bits: &str, count: usize) -> Result<Segmentation> {
    if count == 0 {
        return Err(Error::InvalidArgument("segment count must be at least 1".into()));
    }
    let size = bits.len() / count;
    if size == 0 {
        return Err(Error::InvalidArgument(format!(
            "{} bits cannot fill {count} segments",
            bits.len()
        )));
    }
    let segments = (0..count).map(|k| bits[k * size..(k + 1) * size].to_string()).collect();
    Ok(Segmentation { segments, leftover: bits.len() - count * size })
}

/// A spin configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinSample(Vec<u8>);

impl SpinSample {
    pub fn new(spins: Vec<u8>) -> Result<Self> {
        if spins.iter().any(|&s| s > 1) {
            return Err(Error::InvalidArgument("spins must be 0 or 1".into()));
        }
        Ok(SpinSample(spins))
    }

    pub fn from_bits(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!("not a bit: '{other}'"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(SpinSample)
    }

    /// Spins of basis index `index`, spin 0 most significant.
    fn from_index(index: usize, n: usize) -> Self {
        SpinSample((0..n).map(|i| (index >> (n - 1 - i) & 1) as u8).collect())
    }

    pub fn spins(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Layered open-chain model. `w0`, `w1`, `w2` are `layers × (n−1)`; only
/// their sum over arrays and layers affects the energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    pub n: usize,
    pub layers: usize,
    pub w0: Vec<Vec<f64>>,
    pub w1: Vec<Vec<f64>>,
    pub w2: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub biases: Vec<f64>,
}

impl EnergyModel {
    pub fn zeros(n: usize, layers: usize) -> Result<Self> {
        if n == 0 || layers == 0 {
            return Err(Error::InvalidArgument("model needs at least one spin and one layer".into()));
        }
        let w = vec![vec![0.0; n - 1]; layers];
        Ok(EnergyModel { n, layers, w0: w.clone(), w1: w.clone(), w2: w, biases: vec![0.0; n] })
    }

    /// Couplings drawn from `U(−scale, scale)` in `w0, w1, w2` order, biases 0.
    pub fn random<R: Rng>(n: usize, layers: usize, scale: f64, rng: &mut R) -> Result<Self> {
        let mut m = Self::zeros(n, layers)?;
        for w in [&mut m.w0, &mut m.w1, &mut m.w2] {
            for row in w.iter_mut() {
                for x in row.iter_mut() {
                    *x = rng.random_range(-scale..=scale);
                }
            }
        }
        Ok(m)
    }

    /// `Σ_L (w0 + w1 + w2)(L, i)` for each bond `i`.
    pub fn bond_couplings(&self) -> Vec<f64> {
        (0..self.n - 1)
            .map(|i| (0..self.layers).map(|l| self.w0[l][i] + self.w1[l][i] + self.w2[l][i]).sum())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let shape_ok = |w: &Vec<Vec<f64>>| {
            w.len() == self.layers && w.iter().all(|r| r.len() + 1 == self.n)
        };
        if self.n == 0 || self.biases.len() != self.n || ![&self.w0, &self.w1, &self.w2].into_iter().all(shape_ok) {
            return Err(Error::InvalidArgument("model arrays do not match n and layers".into()));
        }
        let finite = [&self.w0, &self.w1, &self.w2]
            .iter()
            .flat_map(|w| w.iter().flatten())
            .chain(&self.biases)
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite("model parameter".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: EnergyModel = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }
}

fn energy_with(spins: &[u8], bonds: &[f64], biases: &[f64]) -> f64 {
    let pair: f64 = bonds
        .iter()
        .enumerate()
        .filter(|(i, _)| spins[*i] == 1 && spins[i + 1] == 1)
        .map(|(_, w)| w)
        .sum();
    let field: f64 = biases.iter().zip(spins).filter(|(_, s)| **s == 1).map(|(b, _)| b).sum();
    pair - field
}

/// `E(σ) = Σ_L Σ_i (w0+w1+w2)(L,i) σ_i σ_{i+1} − Σ_i B_i σ_i`.
pub fn energy(sample: &SpinSample, model: &EnergyModel) -> Result<f64> {
    if sample.len() != model.n {
        return Err(Error::LengthMismatch { left: sample.len(), right: model.n });
    }
    Ok(energy_with(sample.spins(), &model.bond_couplings(), &model.biases))
}

fn check_spins(n: usize) -> Result<()> {
    if n > MAX_SPINS {
        Err(Error::TooManySpins { n, max: MAX_SPINS })
    } else {
        Ok(())
    }
}

/// Model statistics from one pass over all `2^n` configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub log_z: f64,
    /// `⟨σ_i σ_{i+1}⟩` under the model.
    pub pair: Vec<f64>,
    /// `⟨σ_i⟩` under the model.
    pub single: Vec<f64>,
}

pub fn moments(model: &EnergyModel) -> Result<Moments> {
    check_spins(model.n)?;
    let n = model.n;
    let bonds = model.bond_couplings();
    let energies: Vec<f64> = (0..1usize << n)
        .map(|idx| energy_with(SpinSample::from_index(idx, n).spins(), &bonds, &model.biases))
        .collect();
    let shift = energies.iter().fold(f64::INFINITY, |m, &e| m.min(e));
    let mut z = 0.0;
    let mut pair = vec![0.0; n.saturating_sub(1)];
    let mut single = vec![0.0; n];
    for (idx, e) in energies.iter().enumerate() {
        let w = (shift - e).exp();
        z += w;
        let s = SpinSample::from_index(idx, n);
        for i in 0..n {
            if s.0[i] == 1 {
                single[i] += w;
                if i + 1 < n && s.0[i + 1] == 1 {
                    pair[i] += w;
                }
            }
        }
    }
    pair.iter_mut().chain(single.iter_mut()).for_each(|x| *x /= z);
    Ok(Moments { log_z: z.ln() - shift, pair, single })
}

/// `ln Z`, evaluated with a log-sum-exp shift.
pub fn log_partition(model: &EnergyModel) -> Result<f64> {
    Ok(moments(model)?.log_z)
}

/// `Z = Σ_σ exp(−E(σ))` over all `2^n` configurations.
pub fn partition(model: &EnergyModel) -> Result<f64> {
    Ok(log_partition(model)?.exp())
}

fn check_data(data: &[SpinSample], model: &EnergyModel) -> Result<()> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if let Some(s) = data.iter().find(|s| s.len() != model.n) {
        return Err(Error::LengthMismatch { left: s.len(), right: model.n });
    }
    Ok(())
}

/// `J = mean E(σ) + ln Z`.
pub fn nll_cost(data: &[SpinSample], model: &EnergyModel) -> Result<f64> {
    check_data(data, model)?;
    let bonds = model.bond_couplings();
    let mean_e = data.iter().map(|s| energy_with(s.spins(), &bonds, &model.biases)).sum::<f64>()
        / data.len() as f64;
    Ok(mean_e + log_partition(model)?)
}

/// Derivatives of `J`. Every coupling on bond `i` (any array, any layer)
/// shares `pair[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub pair: Vec<f64>,
    pub bias: Vec<f64>,
}

/// `∂J/∂W(L,i) = mean σ_iσ_{i+1} − ⟨σ_iσ_{i+1}⟩`,
/// `∂J/∂B_i = −mean σ_i + ⟨σ_i⟩`.
pub fn gradient(data: &[SpinSample], model: &EnergyModel) -> Result<Gradient> {
    check_data(data, model)?;
    let m = moments(model)?;
    let n = model.n;
    let count = data.len() as f64;
    let mut pair = vec![0.0; n - 1];
    let mut single = vec![0.0; n];
    for s in data {
        for i in 0..n {
            single[i] += s.0[i] as f64;
            if i + 1 < n {
                pair[i] += (s.0[i] * s.0[i + 1]) as f64;
            }
        }
    }
    Ok(Gradient {
        pair: pair.iter().zip(&m.pair).map(|(d, e)| d / count - e).collect(),
        bias: single.iter().zip(&m.single).map(|(d, e)| e - d / count).collect(),
    })
}

fn apply_step(model: &mut EnergyModel, grad: &Gradient, lr: f64) {
    for w in [&mut model.w0, &mut model.w1, &mut model.w2] {
        for row in w.iter_mut() {
            for (x, g) in row.iter_mut().zip(&grad.pair) {
                *x -= lr * g;
            }
        }
    }
    for (b, g) in model.biases.iter_mut().zip(&grad.bias) {
        *b -= lr * g;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Segments per sequence.
    pub segments: usize,
    pub layers: usize,
    pub steps: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub split: f64,
    pub seed: u64,
    pub init_scale: f64,
    pub early_stop_tol: f64,
    pub early_stop_window: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            segments: 2,
            layers: 2,
            steps: 100,
            learning_rate: 0.01,
            batch_size: 16,
            split: 0.8,
            seed: 0,
            init_scale: 0.01,
            early_stop_tol: 1e-9,
            early_stop_window: 10,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.segments == 0 || self.layers == 0 || self.steps == 0 || self.batch_size == 0 {
            return bad("segments, layers, steps and batch size must be positive".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad(format!("learning rate must lie in (0, 1], got {}", self.learning_rate));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return bad(format!("split fraction must lie in (0, 1), got {}", self.split));
        }
        if !(0.0..=1.0e6).contains(&self.init_scale) {
            return bad(format!("bad init scale {}", self.init_scale));
        }
        Ok(())
    }
}

/// One row of the loss trace. `val_j` is set at step 0 and at the end of
/// every pass over the training set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub train_j: f64,
    pub val_j: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub model: EnergyModel,
    pub trace: Vec<TraceRow>,
    pub train_size: usize,
    pub val_size: usize,
    pub stopped_early: bool,
}

impl TrainOutcome {
    /// `step,train_J,val_J`; empty `val_J` between epochs.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("step,train_J,val_J\n");
        for r in &self.trace {
            let val = r.val_j.map(crate::qsim::format_f64).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", r.step, crate::qsim::format_f64(r.train_j), val));
        }
        out
    }
}

/// Spin samples of a corpus: every sequence is bit-encoded and cut into
/// `segments` pieces; all pieces must share one length.
pub fn corpus_samples(sequences: &[DnaSequence], segments: usize) -> Result<Vec<SpinSample>> {
    let mut out = Vec::new();
    let mut width = None;
    for seq in sequences {
        for seg in segment_bits(&bin_encode_seq(seq), segments)?.segments {
            match width {
                None => width = Some(seg.len()),
                Some(w) if w != seg.len() => {
                    return Err(Error::InvalidArgument(format!(
                        "segments of different widths ({w} and {}); use equal-length sequences",
                        seg.len()
                    )))
                }
                _ => {}
            }
            out.push(SpinSample::from_bits(&seg)?);
        }
    }
    Ok(out)
}

fn finite_or_diverged(j: f64, step: usize, what: &str) -> Result<f64> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(Error::Diverged { step, detail: format!("{what} cost is {j}") })
    }
}

/// Seeded shuffle, train/validation split, then mini-batch gradient descent
/// for at most `steps` updates. Stops early once the training cost moves by
/// less than `early_stop_tol` over `early_stop_window` steps.
pub fn train(sequences: &[DnaSequence], config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let mut samples = corpus_samples(sequences, config.segments)?;
    if samples.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "{} samples cannot be split into training and validation sets",
            samples.len()
        )));
    }
    let n = samples[0].len();
    check_spins(n)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    samples.shuffle(&mut rng);
    let train_size = ((config.split * samples.len() as f64).round() as usize).clamp(1, samples.len() - 1);
    let val = samples.split_off(train_size);
    let train_set = samples;

    let mut model = EnergyModel::random(n, config.layers, config.init_scale, &mut rng)?;
    let j0 = finite_or_diverged(nll_cost(&train_set, &model)?, 0, "training")?;
    let v0 = finite_or_diverged(nll_cost(&val, &model)?, 0, "validation")?;
    let mut trace = vec![TraceRow { step: 0, train_j: j0, val_j: Some(v0) }];

    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut cursor = order.len();
    let mut stopped_early = false;
    for step in 1..=config.steps {
        if cursor >= order.len() {
            order.shuffle(&mut rng);
            cursor = 0;
        }
        let end = (cursor + config.batch_size).min(order.len());
        let batch: Vec<SpinSample> = order[cursor..end].iter().map(|&i| train_set[i].clone()).collect();
        cursor = end;

        let grad = gradient(&batch, &model)?;
        apply_step(&mut model, &grad, config.learning_rate);
        model.validate().map_err(|e| Error::Diverged { step, detail: e.to_string() })?;

        let j = finite_or_diverged(nll_cost(&train_set, &model)?, step, "training")?;
        let val_j = if cursor >= order.len() {
            Some(finite_or_diverged(nll_cost(&val, &model)?, step, "validation")?)
        } else {
            None
        };
        trace.push(TraceRow { step, train_j: j, val_j });

        let w = config.early_stop_window;
        if w > 0 && step >= w && (j - trace[step - w].train_j).abs() < config.early_stop_tol {
            stopped_early = true;
            break;
        }
    }
    Ok(TrainOutcome { model, trace, train_size, val_size: val.len(), stopped_early })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> DnaSequence {
        DnaSequence::parse(s).unwrap()
    }

    fn bits(s: &str) -> SpinSample {
        SpinSample::from_bits(s).unwrap()
    }

    #[test]
    fn bin_encoding() {
        assert_eq!(bin_encode_seq(&seq("AAGT")), "00001011");
        assert_eq!(bin_encode_seq(&seq("A")), "00");
        assert_eq!(bin_encode_seq(&seq("T")), "11");
    }

    #[test]
    fn segmentation() {
        let s = segment_bits("00001011", 2).unwrap();
        assert_eq!(s.segments, vec!["0000", "1011"]);
        assert_eq!(s.leftover, 0);
        let s = segment_bits("0000010", 2).unwrap();
        assert_eq!(s.segments, vec!["000", "001"]);
        assert_eq!(s.leftover, 1);
        assert!(segment_bits("0101", 0).is_err());
        assert!(segment_bits("01", 3).is_err());
    }

    #[test]
    fn energy_examples() {
        let mut m = EnergyModel::zeros(3, 2).unwrap();
        assert_eq!(energy(&bits("000"), &m).unwrap(), 0.0);
        m.w0[0][0] = 0.5;
        m.w2[1][0] = 0.25;
        m.biases = vec![1.0, 2.0, 4.0];
        assert_eq!(energy(&bits("110"), &m).unwrap(), 0.75 - 3.0);
        assert!(energy(&bits("11"), &m).is_err());

        let mut one = EnergyModel::zeros(1, 1).unwrap();
        one.biases[0] = 0.7;
        assert_eq!(energy(&bits("1"), &one).unwrap(), -0.7);
    }

    #[test]
    fn partition_examples() {
        let z = EnergyModel::zeros(5, 2).unwrap();
        assert!((partition(&z).unwrap() - 32.0).abs() < 1e-12);
        let mut one = EnergyModel::zeros(1, 1).unwrap();
        one.biases[0] = 0.3;
        assert!((partition(&one).unwrap() - (1.0 + 0.3f64.exp())).abs() < 1e-12);
        let big = EnergyModel::zeros(21, 1).unwrap();
        assert!(matches!(partition(&big), Err(Error::TooManySpins { n: 21, .. })));
    }

    #[test]
    fn cost_examples() {
        let z = EnergyModel::zeros(4, 2).unwrap();
        let j = nll_cost(&[bits("0110"), bits("1111")], &z).unwrap();
        assert!((j - 4.0 * 2f64.ln()).abs() < 1e-12);
        assert!(nll_cost(&[], &z).is_err());
    }

    #[test]
    fn matched_moments_give_zero_gradient() {
        // all 4 configurations once: empirical moments equal the uniform model's
        let z = EnergyModel::zeros(2, 1).unwrap();
        let data = [bits("00"), bits("01"), bits("10"), bits("11")];
        let g = gradient(&data, &z).unwrap();
        assert!(g.pair.iter().chain(&g.bias).all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn single_spin_bias_gradient() {
        let mut m = EnergyModel::zeros(1, 1).unwrap();
        m.biases[0] = -0.4;
        let data = [bits("1"), bits("0"), bits("1")];
        let g = gradient(&data, &m).unwrap();
        let b = -0.4f64;
        let expect = -2.0 / 3.0 + b.exp() / (1.0 + b.exp());
        assert!((g.bias[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn aagt_training_lowers_cost() {
        let corpus = vec![seq("AAGT"); 8];
        let out = train(&corpus, &TrainConfig { seed: 5, ..TrainConfig::default() }).unwrap();
        assert_eq!(out.model.n, 4);
        let first = out.trace.first().unwrap().train_j;
        let last = out.trace.last().unwrap().train_j;
        assert!(last < first, "{first} -> {last}");
        let again = train(&corpus, &TrainConfig { seed: 5, ..TrainConfig::default() }).unwrap();
        assert_eq!(out.trace, again.trace);
    }

    #[test]
    fn training_errors() {
        let cfg = TrainConfig::default();
        assert!(train(&[seq("AAGT")], &TrainConfig { segments: 1, ..cfg.clone() }).is_err());
        assert!(train(&[seq("AAGT"), seq("AAGTA")], &cfg).is_err());
        assert!(train(&[seq("AAGT")], &TrainConfig { learning_rate: 0.0, ..cfg.clone() }).is_err());
        assert!(train(&[seq("AAGT")], &TrainConfig { split: 1.0, ..cfg }).is_err());
    }

    #[test]
    fn divergence_is_reported() {
        assert!(matches!(finite_or_diverged(f64::NAN, 7, "training"), Err(Error::Diverged { step: 7, .. })));
        assert_eq!(finite_or_diverged(1.5, 7, "training"), Ok(1.5));
        let cfg = TrainConfig { init_scale: 1e308, ..TrainConfig::default() };
        assert!(train(&[seq("AAGT"), seq("TTTT")], &cfg).is_err());
    }

    #[test]
    fn model_json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = EnergyModel::random(3, 2, 0.5, &mut rng).unwrap();
        let text = m.to_json();
        assert!(text.contains("\"B\""));
        assert_eq!(EnergyModel::from_json(&text).unwrap(), m);
    }
}
