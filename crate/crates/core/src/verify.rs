//! Runtime self-checks of the fast code paths against slow, independent
//! reference computations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::encoders::compress::{bwt, ibwt, BwtResult};
use crate::encoders::spectral::{dct2d, dct2d_naive, GrayImage};
use crate::error::Result;
use crate::qoltz::{gradient, log_partition, nll_cost, EnergyModel, SpinSample};
use crate::qsim::{dft_matrix_apply, Statevector, C64};
use crate::seqio::{Base, DnaSequence};

pub const GROUPS: [&str; 5] = ["qft", "dct", "bwt", "partition", "gradient"];

/// Signature of a QFT implementation under test.
pub type QftFn = fn(Statevector) -> Statevector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub group: String,
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Restrict to one group of [`GROUPS`].
    pub only: Option<String>,
    pub seed: u64,
    pub qft: QftFn,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { only: None, seed: 0, qft: Statevector::qft }
    }
}

fn check(group: &str, name: String, max_error: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        group: group.to_string(),
        name,
        // NaN never passes
        passed: max_error <= tolerance,
        max_error,
        tolerance,
    }
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> Statevector {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Statevector::from_amplitudes(amps.into_iter().map(|z| z / norm).collect()).expect("normalized")
}

pub fn random_sequence<R: Rng>(len: usize, rng: &mut R) -> DnaSequence {
    DnaSequence::from_bases((0..len).map(|_| Base::ALL[rng.random_range(0..4)]).collect())
        .expect("non-empty")
}

/// BWT by sorting every rotation of `seq$` explicitly.
pub fn bwt_rotation_oracle(seq: &DnaSequence) -> BwtResult {
    let mut text: Vec<u8> = seq.bases().iter().map(|b| b.to_char() as u8).collect();
    text.push(b'$');
    let n = text.len();
    // '$' (0x24) already sorts below the base letters
    let mut rows: Vec<(Vec<u8>, usize)> = (0..n)
        .map(|r| (text[r..].iter().chain(&text[..r]).copied().collect(), r))
        .collect();
    rows.sort();
    BwtResult {
        transformed: rows.iter().map(|(rot, _)| rot[n - 1] as char).collect(),
        primary_index: rows.iter().position(|(_, r)| *r == 0).expect("row 0 present"),
    }
}

/// `Z` of an open chain by a 2×2 transfer-matrix sweep.
pub fn partition_transfer_matrix(model: &EnergyModel) -> f64 {
    let bonds = model.bond_couplings();
    // v[s] = summed weight of prefixes ending in spin value s
    let mut v = [1.0, model.biases[0].exp()];
    for i in 1..model.n {
        let field = model.biases[i].exp();
        let w = (-bonds[i - 1]).exp();
        v = [v[0] + v[1], (v[0] + v[1] * w) * field];
    }
    v[0] + v[1]
}

fn qft_checks(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    (1..=8)
        .map(|n| {
            let mut worst = 0.0f64;
            for _ in 0..4 {
                let s = random_state(n, rng);
                let expect = dft_matrix_apply(s.amplitudes());
                let got = (opts.qft)(s);
                let err = got.amplitudes().iter().zip(&expect).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                worst = worst.max(err);
            }
            check("qft", format!("qft vs dense DFT, n={n}"), worst, 1e-10)
        })
        .collect()
}

fn dct_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = [(1, 1), (2, 3), (5, 4), (8, 8), (16, 16)]
        .into_iter()
        .map(|(w, h)| {
            let px = (0..w * h).map(|_| rng.random_range(0.0..=255.0)).collect();
            let img = GrayImage::new(w, h, px).expect("in range");
            let a = dct2d(&img);
            let b = dct2d_naive(&img);
            let err = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            check("dct", format!("dct2d vs naive, {w}x{h}"), err, 1e-9)
        })
        .collect();
    let one = GrayImage::new(1, 1, vec![200.0]).expect("in range");
    out.push(check("dct", "1x1 scale is 1/8".into(), (dct2d(&one).get(0, 0) - 25.0).abs(), 0.0));
    out
}

fn bwt_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut oracle_miss = 0;
    let mut roundtrip_miss = 0;
    for _ in 0..200 {
        let len = rng.random_range(1..=64);
        let s = random_sequence(len, rng);
        let t = bwt(&s);
        oracle_miss += (t != bwt_rotation_oracle(&s)) as usize;
        roundtrip_miss += (ibwt(&t).ok().as_ref() != Some(&s)) as usize;
    }
    vec![
        check("bwt", "bwt vs rotation sort (200 seqs)".into(), oracle_miss as f64, 0.0),
        check("bwt", "ibwt(bwt(s)) = s (200 seqs)".into(), roundtrip_miss as f64, 0.0),
    ]
}

fn random_model(rng: &mut ChaCha8Rng, n: usize, layers: usize) -> EnergyModel {
    let mut m = EnergyModel::random(n, layers, 0.8, rng).expect("valid shape");
    m.biases.iter_mut().for_each(|b| *b = rng.random_range(-1.0..1.0));
    m
}

fn partition_checks(rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    (1..=10)
        .map(|n| {
            let m = random_model(rng, n, 2);
            let fast = log_partition(&m)?.exp();
            let slow = partition_transfer_matrix(&m);
            let rel = ((fast - slow) / slow).abs();
            Ok(check("partition", format!("Z vs transfer matrix, n={n}"), rel, 1e-12))
        })
        .collect()
}

/// Central differences of `J` against the analytic gradient, scaled by
/// `max(1, |g|)`.
fn gradient_checks(rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let h = 1e-5;
    let mut out = Vec::new();
    for case in 0..10 {
        let n = rng.random_range(2..=6);
        let layers = rng.random_range(1..=3);
        let m = random_model(rng, n, layers);
        let data: Vec<SpinSample> = (0..rng.random_range(1..=8))
            .map(|_| SpinSample::new((0..n).map(|_| rng.random_range(0..=1)).collect()).expect("bits"))
            .collect();
        let g = gradient(&data, &m)?;
        let mut worst = 0.0f64;
        let mut probe = |analytic: f64, set: &dyn Fn(&mut EnergyModel, f64)| -> Result<()> {
            let (mut plus, mut minus) = (m.clone(), m.clone());
            set(&mut plus, h);
            set(&mut minus, -h);
            let fd = (nll_cost(&data, &plus)? - nll_cost(&data, &minus)?) / (2.0 * h);
            worst = worst.max((fd - analytic).abs() / analytic.abs().max(1.0));
            Ok(())
        };
        for i in 0..n - 1 {
            let l = case % layers;
            probe(g.pair[i], &|m, d| m.w0[l][i] += d)?;
            probe(g.pair[i], &|m, d| m.w1[l][i] += d)?;
            probe(g.pair[i], &|m, d| m.w2[l][i] += d)?;
        }
        for i in 0..n {
            probe(g.bias[i], &|m, d| m.biases[i] += d)?;
        }
        out.push(check("gradient", format!("gradient vs finite differences, case {case} (n={n})"), worst, 1e-6));
    }
    Ok(out)
}

/// Runs the selected groups. An unknown `only` group yields no checks.
pub fn run(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let wanted = |g: &str| opts.only.as_deref().is_none_or(|o| o.eq_ignore_ascii_case(g));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    if wanted("qft") {
        out.extend(qft_checks(opts, &mut rng));
    }
    if wanted("dct") {
        out.extend(dct_checks(&mut rng));
    }
    if wanted("bwt") {
        out.extend(bwt_checks(&mut rng));
    }
    if wanted("partition") {
        out.extend(partition_checks(&mut rng)?);
    }
    if wanted("gradient") {
        out.extend(gradient_checks(&mut rng)?);
    }
    Ok(out)
}

/// Fixed-width text table, one row per check.
pub fn render_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:<10} {:<width$} {:<6} {:>12} {:>9}\n", "group", "check", "status", "max_error", "tol");
    for r in results {
        out.push_str(&format!(
            "{:<10} {:<width$} {:<6} {:>12.3e} {:>9.0e}\n",
            r.group,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.max_error,
            r.tolerance
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pristine_build_passes() {
        let results = run(&VerifyOptions::default()).unwrap();
        assert!(results.iter().all(|r| r.passed), "{}", render_table(&results));
        for g in GROUPS {
            assert!(results.iter().any(|r| r.group == g));
        }
    }

    #[test]
    fn sign_flipped_qft_is_caught() {
        fn inverse_qft(s: Statevector) -> Statevector {
            let conj: Vec<C64> = s.amplitudes().iter().map(|z| z.conj()).collect();
            let out = Statevector::from_amplitudes(conj).unwrap().qft();
            Statevector::from_amplitudes(out.amplitudes().iter().map(|z| z.conj()).collect()).unwrap()
        }
        let opts = VerifyOptions { only: Some("qft".into()), qft: inverse_qft, ..Default::default() };
        let results = run(&opts).unwrap();
        assert!(results.iter().all(|r| r.group == "qft"));
        assert!(results.iter().any(|r| !r.passed));
    }

    #[test]
    fn only_filter() {
        let opts = VerifyOptions { only: Some("bwt".into()), ..Default::default() };
        let results = run(&opts).unwrap();
        assert_eq!(results.len(), 2);
        assert!(results.iter().all(|r| r.group == "bwt"));
    }

    #[test]
    fn transfer_matrix_matches_closed_forms() {
        let mut m = EnergyModel::zeros(1, 1).unwrap();
        m.biases[0] = 0.3;
        assert!((partition_transfer_matrix(&m) - (1.0 + 0.3f64.exp())).abs() < 1e-15);
        assert_eq!(partition_transfer_matrix(&EnergyModel::zeros(6, 2).unwrap()), 64.0);
    }
}
