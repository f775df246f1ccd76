use std::f64::consts::PI;

use super::{Gate, Statevector, C64};

impl Statevector {
    /// Quantum Fourier transform on the whole register.
    ///
    /// Circuit form: Hadamard plus a controlled-phase ladder on each qubit,
    /// followed by reversing the qubit order. With qubit 0 as the most
    /// significant bit this realizes `F[p][q] = e^{2πi·pq/2^n} / √(2^n)`.
    pub fn qft(mut self) -> Self {
        let n = self.n_qubits();
        let h = Gate::h();
        for j in 0..n {
            self.apply_in_place(&h, &[j]).expect("valid target");
            for k in (j + 1)..n {
                let lambda = 2.0 * PI / (1u64 << (k - j + 1)) as f64;
                self.apply_in_place(&Gate::controlled_phase(lambda), &[k, j])
                    .expect("valid targets");
            }
        }
        let swap = Gate::swap();
        for j in 0..n / 2 {
            self.apply_in_place(&swap, &[j, n - 1 - j]).expect("valid targets");
        }
        self
    }
}

/// Dense `F·a` with `F[p][q] = e^{2πi·pq/N}/√N`, computed entry by entry.
///
/// This is O(N²) and exists as an independent reference for the circuit.
pub fn dft_matrix_apply(amps: &[C64]) -> Vec<C64> {
    let dim = amps.len();
    let scale = (dim as f64).sqrt().recip();
    (0..dim)
        .map(|p| {
            let mut acc = C64::new(0.0, 0.0);
            for (q, a) in amps.iter().enumerate() {
                // reduce pq mod N before the float conversion to keep the phase exact
                let k = ((p as u128 * q as u128) % dim as u128) as f64;
                acc += C64::from_polar(1.0, 2.0 * PI * k / dim as f64) * a;
            }
            acc * scale
        })
        .collect()
}
