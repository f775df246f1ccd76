use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Statevector;
use crate::error::{Error, Result};

/// Measurement histogram keyed by big-endian bitstring.
pub type Counts = BTreeMap<String, u64>;

/// Renders `index` as an `n`-character bitstring, qubit 0 first.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| if index >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl Statevector {
    /// Draws `shots` computational-basis measurements.
    ///
    /// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`;
    /// each shot consumes one uniform `f64` in `[0, 1)` and is resolved by
    /// inverse-CDF lookup over the probabilities in index order. Identical
    /// `(state, shots, seed)` always give identical counts.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<Counts> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let mut cdf = Vec::with_capacity(self.dim());
        let mut acc = 0.0;
        for p in self.probabilities() {
            acc += p;
            cdf.push(acc);
        }
        // guard the top end against accumulated rounding
        let total = acc;
        let last_nonzero = self
            .probabilities()
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(0);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            *tally.entry(idx).or_default() += 1;
        }
        let n = self.n_qubits();
        Ok(tally.into_iter().map(|(i, c)| (bitstring(i, n), c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    #[test]
    fn bitstrings_are_big_endian() {
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(4, 3), "100");
        assert_eq!(bitstring(3, 2), "11");
    }

    #[test]
    fn deterministic_state_gives_one_key() {
        let s = Statevector::basis(2, 3).unwrap();
        let counts = s.sample_counts(1024, 0).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts["11"], 1024);
    }

    #[test]
    fn zero_shots_rejected() {
        let s = Statevector::zero(1).unwrap();
        assert_eq!(s.sample_counts(0, 1), Err(Error::ZeroShots));
    }

    #[test]
    fn hadamard_counts_golden() {
        let s = Statevector::zero(1).unwrap().apply(&Gate::h(), &[0]).unwrap();
        let counts = s.sample_counts(1024, 7).unwrap();
        assert_eq!(counts.values().sum::<u64>(), 1024);
        assert_eq!(counts.len(), 2);
        for v in counts.values() {
            assert!((*v as i64 - 512).abs() <= 48, "{counts:?}");
        }
        assert_eq!(counts, s.sample_counts(1024, 7).unwrap());
        // frozen: ChaCha8 stream for seed 7
        assert_eq!(counts["0"], 530);
        assert_eq!(counts["1"], 494);
    }

    #[test]
    fn zero_probability_outcomes_never_drawn() {
        let s = Statevector::basis(3, 5).unwrap();
        let counts = s.sample_counts(500, 99).unwrap();
        assert_eq!(counts.keys().collect::<Vec<_>>(), vec!["101"]);
    }
}
