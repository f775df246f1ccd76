use std::fmt;
use std::str::FromStr;

use super::{Base, DnaSequence};
use crate::error::{Error, Result};

/// Registered base→bit maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseScheme {
    /// `A=00, C=01, G=10, T=11`.
    TwoBit,
    /// High bit of the two-bit code: `A,C → 0`, `G,T → 1`.
    HighBit,
    /// Cosine-encoding initialisation: `A,G → 0`, `C,T → 1`.
    Cosine,
}

impl BaseScheme {
    pub fn name(self) -> &'static str {
        match self {
            BaseScheme::TwoBit => "two-bit",
            BaseScheme::HighBit => "high-bit",
            BaseScheme::Cosine => "cosine",
        }
    }
}

impl FromStr for BaseScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-bit" => Ok(BaseScheme::TwoBit),
            "high-bit" => Ok(BaseScheme::HighBit),
            "cosine" => Ok(BaseScheme::Cosine),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

impl fmt::Display for BaseScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bits for one base under `scheme`, most significant first.
pub fn base_bits(base: Base, scheme: BaseScheme) -> &'static [u8] {
    match scheme {
        BaseScheme::TwoBit => match base {
            Base::A => &[0, 0],
            Base::C => &[0, 1],
            Base::G => &[1, 0],
            Base::T => &[1, 1],
        },
        BaseScheme::HighBit => match base {
            Base::A | Base::C => &[0],
            Base::G | Base::T => &[1],
        },
        BaseScheme::Cosine => match base {
            Base::A | Base::G => &[0],
            Base::C | Base::T => &[1],
        },
    }
}

/// Concatenated bits of a whole sequence.
pub fn encode_bits(seq: &DnaSequence, scheme: BaseScheme) -> Vec<u8> {
    seq.bases()
        .iter()
        .flat_map(|&b| base_bits(b, scheme).iter().copied())
        .collect()
}
