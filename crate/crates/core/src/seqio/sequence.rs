use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A nucleotide. Ordering is alphabetical, `A < C < G < T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Base {
    A,
    C,
    G,
    T,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::T];

    /// Position in `A, C, G, T` order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Base> {
        Self::ALL.get(i).copied()
    }

    pub fn from_char(c: char) -> Option<Base> {
        match c {
            'A' | 'a' => Some(Base::A),
            'C' | 'c' => Some(Base::C),
            'G' | 'g' => Some(Base::G),
            'T' | 't' => Some(Base::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        ['A', 'C', 'G', 'T'][self.index()]
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A non-empty sequence over `{A, C, G, T}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DnaSequence(Vec<Base>);

impl DnaSequence {
    /// Parses text, dropping whitespace and folding lowercase. Anything
    /// outside `ACGTacgt` (including IUPAC ambiguity codes) is rejected with
    /// its 0-based position among the non-whitespace characters.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bases = Vec::with_capacity(text.len());
        for (position, ch) in text.chars().filter(|c| !c.is_whitespace()).enumerate() {
            match Base::from_char(ch) {
                Some(b) => bases.push(b),
                None => return Err(Error::InvalidBase { ch, position }),
            }
        }
        Self::from_bases(bases)
    }

    pub fn from_bases(bases: Vec<Base>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(DnaSequence(bases))
    }

    pub fn bases(&self) -> &[Base] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Occurrences of each base in `A, C, G, T` order.
    pub fn counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for b in &self.0 {
            c[b.index()] += 1;
        }
        c
    }

    pub fn first(&self) -> Base {
        self.0[0]
    }
}

impl FromStr for DnaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|b| b.to_char()).collect();
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_upper_and_lower() {
        let s = DnaSequence::parse("ATCG").unwrap();
        assert_eq!(s.bases(), &[Base::A, Base::T, Base::C, Base::G]);
        assert_eq!(DnaSequence::parse("atcg").unwrap(), s);
        assert_eq!(DnaSequence::parse(" AT\nCG\t").unwrap(), s);
    }

    #[test]
    fn rejects_invalid_base_with_position() {
        assert_eq!(
            DnaSequence::parse("AXC"),
            Err(Error::InvalidBase { ch: 'X', position: 1 })
        );
        assert!(matches!(DnaSequence::parse("ANG"), Err(Error::InvalidBase { ch: 'N', .. })));
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(DnaSequence::parse(""), Err(Error::EmptySequence));
        assert_eq!(DnaSequence::parse("  \n"), Err(Error::EmptySequence));
    }

    #[test]
    fn counts_in_acgt_order() {
        let s = DnaSequence::parse("CAGGAAACAGCTATGACC").unwrap();
        assert_eq!(s.counts(), [7, 5, 4, 2]);
    }

    proptest! {
        #[test]
        fn parse_render_identity(text in "[ACGT]{1,200}") {
            let seq = DnaSequence::parse(&text).unwrap();
            prop_assert_eq!(seq.to_string(), text);
        }
    }
}
