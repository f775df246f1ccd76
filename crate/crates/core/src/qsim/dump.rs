//! JSON state dump:
//! `{ "n_qubits": n, "convention": "big-endian", "amplitudes": [[re, im], …] }`.
//!
//! Floats are written with 17 significant digits so a dump round-trips
//! bit-exactly. An optional `"metadata"` object carries scheme details.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Statevector, C64};
use crate::error::{Error, Result};

pub const CONVENTION: &str = "big-endian";

/// Parsed form of a state dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub n_qubits: usize,
    pub convention: String,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

/// 17-significant-digit scientific notation, valid as a JSON number.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // normalize -0.0 so dumps don't differ on sign of zero
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

impl StateDump {
    pub fn from_state(state: &Statevector, metadata: Option<Value>) -> Self {
        StateDump {
            n_qubits: state.n_qubits(),
            convention: CONVENTION.to_string(),
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            metadata,
        }
    }

    /// Serializes with the fixed float format. Output is deterministic.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(64 + self.amplitudes.len() * 48);
        out.push_str("{\n  \"n_qubits\": ");
        out.push_str(&self.n_qubits.to_string());
        out.push_str(",\n  \"convention\": ");
        out.push_str(&serde_json::to_string(&self.convention).expect("string"));
        out.push_str(",\n  \"amplitudes\": [");
        for (i, [re, im]) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    [");
            out.push_str(&format_f64(*re));
            out.push_str(", ");
            out.push_str(&format_f64(*im));
            out.push(']');
        }
        out.push_str("\n  ]");
        if let Some(meta) = &self.metadata {
            out.push_str(",\n  \"metadata\": ");
            out.push_str(&serde_json::to_string(meta).expect("json value"));
        }
        out.push_str("\n}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates the dump and rebuilds the state. Rejects a wrong
    /// convention, a length that disagrees with `n_qubits`, or a squared
    /// norm off by more than [`super::NORM_TOLERANCE`].
    pub fn to_state(&self) -> Result<Statevector> {
        if self.convention != CONVENTION {
            return Err(Error::InvalidState(format!(
                "unsupported convention '{}'",
                self.convention
            )));
        }
        if self.n_qubits == 0 || self.n_qubits >= usize::BITS as usize {
            return Err(Error::InvalidState(format!("bad n_qubits {}", self.n_qubits)));
        }
        if self.amplitudes.len() != 1usize << self.n_qubits {
            return Err(Error::InvalidState(format!(
                "{} amplitudes for {} qubits",
                self.amplitudes.len(),
                self.n_qubits
            )));
        }
        let amps = self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Statevector::from_amplitudes(amps)
    }
}

impl Statevector {
    pub fn to_dump_json(&self) -> String {
        StateDump::from_state(self, None).to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    #[test]
    fn dump_roundtrip_is_exact() {
        let s = Statevector::zero(3)
            .unwrap()
            .apply(&Gate::h(), &[0])
            .unwrap()
            .apply(&Gate::t(), &[0])
            .unwrap()
            .apply(&Gate::rotation(crate::qsim::Axis::X, 0.123).unwrap(), &[2])
            .unwrap();
        let text = s.to_dump_json();
        let back = StateDump::parse(&text).unwrap().to_state().unwrap();
        assert_eq!(back, s);
        assert!(text.contains("\"convention\": \"big-endian\""));
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(format_f64(-0.0), "0.0000000000000000e0");
        let v: f64 = format_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(v, std::f64::consts::PI);
    }

    #[test]
    fn tampered_norm_rejected() {
        let mut d = StateDump::from_state(&Statevector::basis(2, 1).unwrap(), None);
        d.amplitudes[1] = [0.5_f64.sqrt(), 0.0];
        assert!(matches!(d.to_state(), Err(Error::InvalidState(_))));
    }

    #[test]
    fn wrong_length_rejected() {
        let mut d = StateDump::from_state(&Statevector::basis(2, 1).unwrap(), None);
        d.n_qubits = 3;
        assert!(d.to_state().is_err());
    }
}
