//! Dense statevector simulator.
//!
//! Amplitudes are stored in index order with a big-endian qubit convention:
//! qubit 0 is the most significant bit of the basis index, so for three
//! qubits the index of `|q0 q1 q2⟩` is `4*q0 + 2*q1 + q2`.

mod dump;
mod gate;
mod qft;
mod sampling;
mod state;

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub use dump::{format_f64, StateDump, CONVENTION};
pub use gate::{Axis, Gate};
pub use qft::dft_matrix_apply;
pub use sampling::{bitstring, Counts};
pub use state::{Statevector, NORM_TOLERANCE};

pub type C64 = num_complex::Complex64;

/// Default upper bound on register width (2^24 amplitudes, 256 MiB).
pub const DEFAULT_QUBIT_CAP: usize = 24;
/// The cap can never be raised above this.
pub const HARD_QUBIT_CEILING: usize = 28;

static QUBIT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_QUBIT_CAP);

/// Current process-wide qubit cap.
pub fn qubit_cap() -> usize {
    QUBIT_CAP.load(Ordering::Relaxed)
}

/// Sets the process-wide qubit cap. Values above [`HARD_QUBIT_CEILING`] or
/// below 1 are rejected.
pub fn set_qubit_cap(cap: usize) -> Result<()> {
    if cap == 0 || cap > HARD_QUBIT_CEILING {
        return Err(Error::InvalidArgument(format!(
            "qubit cap must be in 1..={HARD_QUBIT_CEILING}, got {cap}"
        )));
    }
    QUBIT_CAP.store(cap, Ordering::Relaxed);
    Ok(())
}

pub(crate) fn check_cap(requested: usize) -> Result<()> {
    let cap = qubit_cap();
    if requested > cap {
        Err(Error::QubitCapExceeded { requested, cap })
    } else {
        Ok(())
    }
}
