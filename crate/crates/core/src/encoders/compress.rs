use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qsim::{qubit_cap, Counts, Gate, Statevector};
use crate::seqio::{Base, DnaSequence};

/// Binary code tree. Left edges read `0`, right edges `1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HuffmanTree {
    Leaf { base: Base, count: usize },
    Node { weight: usize, left: Box<HuffmanTree>, right: Box<HuffmanTree> },
}

impl HuffmanTree {
    pub fn weight(&self) -> usize {
        match self {
            HuffmanTree::Leaf { count, .. } => *count,
            HuffmanTree::Node { weight, .. } => *weight,
        }
    }

    fn min_base(&self) -> Base {
        match self {
            HuffmanTree::Leaf { base, .. } => *base,
            HuffmanTree::Node { left, right, .. } => left.min_base().min(right.min_base()),
        }
    }

    fn join(left: HuffmanTree, right: HuffmanTree) -> HuffmanTree {
        HuffmanTree::Node {
            weight: left.weight() + right.weight(),
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn collect_codes(&self, prefix: &mut String, out: &mut BTreeMap<Base, String>) {
        match self {
            HuffmanTree::Leaf { base, .. } => {
                // a lone leaf still needs one bit
                let code = if prefix.is_empty() { "0".to_string() } else { prefix.clone() };
                out.insert(*base, code);
            }
            HuffmanTree::Node { left, right, .. } => {
                prefix.push('0');
                left.collect_codes(prefix, out);
                prefix.pop();
                prefix.push('1');
                right.collect_codes(prefix, out);
                prefix.pop();
            }
        }
    }
}

/// Per-base prefix codes with the tree they were read from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HuffmanCodebook {
    pub codes: BTreeMap<Base, String>,
    pub counts: BTreeMap<Base, usize>,
    pub total_bits: usize,
    pub tree: HuffmanTree,
}

impl HuffmanCodebook {
    fn from_tree(tree: HuffmanTree, seq: &DnaSequence) -> Self {
        let mut codes = BTreeMap::new();
        tree.collect_codes(&mut String::new(), &mut codes);
        let counts = present_counts(seq);
        let total_bits = counts.iter().map(|(b, c)| c * codes[b].len()).sum();
        HuffmanCodebook { codes, counts, total_bits, tree }
    }

    pub fn code(&self, base: Base) -> Option<&str> {
        self.codes.get(&base).map(String::as_str)
    }

    pub fn is_prefix_free(&self) -> bool {
        let codes: Vec<&String> = self.codes.values().collect();
        codes.iter().enumerate().all(|(i, a)| {
            codes.iter().enumerate().all(|(j, b)| i == j || !b.starts_with(a.as_str()))
        })
    }

    /// Concatenated code of `seq`. Bases missing from the codebook are an error.
    pub fn encode(&self, seq: &DnaSequence) -> Result<String> {
        let mut out = String::new();
        for (i, b) in seq.bases().iter().enumerate() {
            let code = self
                .codes
                .get(b)
                .ok_or(Error::InvalidBase { ch: b.to_char(), position: i })?;
            out.push_str(code);
        }
        Ok(out)
    }

    /// `{"codes": [{"base", "count", "code", "bits"}, …], "total_bits"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .codes
            .iter()
            .map(|(b, code)| {
                let count = self.counts[b];
                serde_json::json!({
                    "base": b.to_char().to_string(),
                    "count": count,
                    "code": code,
                    "bits": count * code.len(),
                })
            })
            .collect();
        serde_json::json!({ "codes": rows, "total_bits": self.total_bits })
    }
}

fn present_counts(seq: &DnaSequence) -> BTreeMap<Base, usize> {
    let counts = seq.counts();
    Base::ALL
        .iter()
        .zip(counts)
        .filter(|(_, c)| *c > 0)
        .map(|(b, c)| (*b, c))
        .collect()
}

/// Leaves ordered by ascending count, ties alphabetical.
fn ranked_leaves(seq: &DnaSequence) -> Vec<HuffmanTree> {
    let mut leaves: Vec<HuffmanTree> = present_counts(seq)
        .into_iter()
        .map(|(base, count)| HuffmanTree::Leaf { base, count })
        .collect();
    // stable sort keeps alphabetical order among equal counts
    leaves.sort_by_key(HuffmanTree::weight);
    leaves
}

/// Rank-paired tree: neighbours are joined left to right one level at a
/// time, an unpaired node at the end of a level moves up unchanged.
pub fn cascade_tree(seq: &DnaSequence) -> HuffmanTree {
    let mut level = ranked_leaves(seq);
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(left) = it.next() {
            match it.next() {
                Some(right) => next.push(HuffmanTree::join(left, right)),
                None => next.push(left),
            }
        }
        level = next;
    }
    level.pop().expect("valid sequences are non-empty")
}

/// Result of QuantHuff. `state` is `None` when the code length exceeds the
/// qubit cap.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantHuff {
    pub codebook: HuffmanCodebook,
    pub bits: String,
    pub state: Option<Statevector>,
}

/// Codes each base from the rank-paired tree and prepares the basis state
/// of the concatenated code, one qubit per bit.
pub fn quanthuff(seq: &DnaSequence) -> Result<QuantHuff> {
    let codebook = HuffmanCodebook::from_tree(cascade_tree(seq), seq);
    let bits = codebook.encode(seq)?;
    let state = if bits.len() <= qubit_cap() {
        let index = usize::from_str_radix(&bits, 2).expect("binary digits");
        Some(Statevector::basis(bits.len(), index)?)
    } else {
        None
    };
    Ok(QuantHuff { codebook, bits, state })
}

/// Textbook greedy Huffman: repeatedly merge the two lightest subtrees
/// (ties by alphabetically least contained base), first popped on the left.
pub fn classic_huffman(seq: &DnaSequence) -> HuffmanCodebook {
    let mut heap: BinaryHeap<Reverse<(usize, Base, usize)>> = BinaryHeap::new();
    let mut pool: Vec<Option<HuffmanTree>> = Vec::new();
    for leaf in ranked_leaves(seq) {
        heap.push(Reverse((leaf.weight(), leaf.min_base(), pool.len())));
        pool.push(Some(leaf));
    }
    while heap.len() > 1 {
        let Reverse((_, _, a)) = heap.pop().expect("len > 1");
        let Reverse((_, _, b)) = heap.pop().expect("len > 1");
        let left = pool[a].take().expect("each id popped once");
        let right = pool[b].take().expect("each id popped once");
        let node = HuffmanTree::join(left, right);
        heap.push(Reverse((node.weight(), node.min_base(), pool.len())));
        pool.push(Some(node));
    }
    let Reverse((_, _, root)) = heap.pop().expect("valid sequences are non-empty");
    let tree = pool[root].take().expect("root present");
    HuffmanCodebook::from_tree(tree, seq)
}

pub const SENTINEL: char = '$';

/// Burrows–Wheeler transform of `seq$`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BwtResult {
    /// Last column of the sorted rotation matrix, over `ACGT$`.
    pub transformed: String,
    /// Row of the sorted matrix holding the original string.
    pub primary_index: usize,
}

fn symbol_rank(c: u8) -> u32 {
    match c {
        b'$' => 0,
        b'A' => 1,
        b'C' => 2,
        b'G' => 3,
        b'T' => 4,
        _ => unreachable!("validated alphabet"),
    }
}

/// Suffix array of `text` (which must end with the unique smallest symbol)
/// by prefix doubling.
fn suffix_array(text: &[u8]) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<u32> = text.iter().map(|&c| symbol_rank(c)).collect();
    let mut tmp = vec![0u32; n];
    let mut k = 1;
    loop {
        let key = |i: usize, rank: &[u32]| (rank[i], if i + k < n { rank[i + k] as i64 } else { -1 });
        sa.sort_unstable_by_key(|&i| key(i, &rank));
        tmp[sa[0]] = 0;
        for w in 1..n {
            let bump = (key(sa[w - 1], &rank) < key(sa[w], &rank)) as u32;
            tmp[sa[w]] = tmp[sa[w - 1]] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] as usize == n - 1 || k >= n {
            break;
        }
        k *= 2;
    }
    sa
}

/// Appends `$` and returns the last column of the sorted rotations. Since
/// `$` is unique and smallest, sorting suffixes orders the rotations.
pub fn bwt(seq: &DnaSequence) -> BwtResult {
    let mut text: Vec<u8> = seq.bases().iter().map(|b| b.to_char() as u8).collect();
    text.push(SENTINEL as u8);
    let n = text.len();
    let sa = suffix_array(&text);
    let mut transformed = String::with_capacity(n);
    let mut primary_index = 0;
    for (row, &start) in sa.iter().enumerate() {
        if start == 0 {
            primary_index = row;
        }
        transformed.push(text[(start + n - 1) % n] as char);
    }
    BwtResult { transformed, primary_index }
}

/// Inverts [`bwt`] by LF-mapping from the `$`-first row.
pub fn ibwt(result: &BwtResult) -> Result<DnaSequence> {
    let last = result.transformed.as_bytes();
    let n = last.len();
    let mut sentinels = 0;
    for (i, &c) in last.iter().enumerate() {
        match c {
            b'$' => sentinels += 1,
            b'A' | b'C' | b'G' | b'T' => {}
            _ => {
                return Err(Error::MalformedBwt(format!(
                    "unexpected symbol '{}' at {i}",
                    result.transformed[i..].chars().next().unwrap_or('?')
                )))
            }
        }
    }
    if sentinels != 1 {
        return Err(Error::MalformedBwt(format!("expected exactly one '$', found {sentinels}")));
    }
    if n < 2 {
        return Err(Error::MalformedBwt("nothing to invert".into()));
    }
    if result.primary_index >= n || last[result.primary_index] != b'$' {
        return Err(Error::MalformedBwt(format!(
            "primary index {} does not point at the sentinel",
            result.primary_index
        )));
    }

    let mut totals = [0usize; 5];
    let mut occ = Vec::with_capacity(n);
    for &c in last {
        let r = symbol_rank(c) as usize;
        occ.push(totals[r]);
        totals[r] += 1;
    }
    let mut first = [0usize; 5];
    for r in 1..5 {
        first[r] = first[r - 1] + totals[r - 1];
    }

    let mut out = Vec::with_capacity(n - 1);
    let mut row = 0;
    for _ in 0..n - 1 {
        let c = last[row];
        if c == b'$' {
            return Err(Error::MalformedBwt("cycle closes before all symbols were used".into()));
        }
        out.push(c);
        row = first[symbol_rank(c) as usize] + occ[row];
    }
    if row != result.primary_index {
        return Err(Error::MalformedBwt("inconsistent permutation".into()));
    }
    out.reverse();
    DnaSequence::parse(std::str::from_utf8(&out).expect("ascii"))
}

/// Output of QBWT.
#[derive(Debug, Clone, PartialEq)]
pub struct Qbwt {
    pub bwt: BwtResult,
    /// `RY` angle for each qubit, in transformed order.
    pub angles: Vec<f64>,
    /// Sum of the per-position scalar phases, reduced mod 2π. Not applied to
    /// `state` unless requested.
    pub global_phase: f64,
    pub state: Statevector,
    pub counts: Counts,
}

/// BWT without the sentinel, then `RY(2π·count(b_i)/n)` on qubit `i`.
pub fn qbwt_state(seq: &DnaSequence, apply_phase: bool) -> Result<(BwtResult, Vec<f64>, f64, Statevector)> {
    let n = seq.len();
    crate::qsim::check_cap(n)?;
    let t = bwt(seq);
    let counts = seq.counts();
    let angles: Vec<f64> = t
        .transformed
        .chars()
        .filter(|&c| c != SENTINEL)
        .map(|c| {
            let b = Base::from_char(c).expect("bwt alphabet");
            TAU * counts[b.index()] as f64 / n as f64
        })
        .collect();
    let global_phase = angles.iter().sum::<f64>().rem_euclid(TAU);
    let mut state = Statevector::zero(n)?;
    for (q, &theta) in angles.iter().enumerate() {
        state.apply_in_place(&Gate::ry(theta)?, &[q])?;
    }
    if apply_phase {
        state = state.with_global_phase(global_phase);
    }
    Ok((t, angles, global_phase, state))
}

pub fn qbwt_encode(seq: &DnaSequence, shots: u64, seed: u64) -> Result<Qbwt> {
    let (bwt, angles, global_phase, state) = qbwt_state(seq, false)?;
    let counts = state.sample_counts(shots, seed)?;
    Ok(Qbwt { bwt, angles, global_phase, state, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    const M13: &str = "CAGGAAACAGCTATGACC";

    fn seq(s: &str) -> DnaSequence {
        DnaSequence::parse(s).unwrap()
    }

    fn rotation_oracle(s: &str) -> BwtResult {
        let text: Vec<char> = format!("{s}$").chars().collect();
        let n = text.len();
        let key = |c: char| if c == '$' { '\0' } else { c };
        let mut rows: Vec<(Vec<char>, usize)> = (0..n)
            .map(|r| ((0..n).map(|i| key(text[(r + i) % n])).collect(), r))
            .collect();
        rows.sort();
        let transformed = rows.iter().map(|(rot, _)| if rot[n - 1] == '\0' { '$' } else { rot[n - 1] }).collect();
        let primary_index = rows.iter().position(|(_, r)| *r == 0).unwrap();
        BwtResult { transformed, primary_index }
    }

    #[test]
    fn m13_codebook() {
        let q = quanthuff(&seq(M13)).unwrap();
        let cb = &q.codebook;
        let c = |b: Base| cb.code(b).unwrap();
        assert_eq!(cb.counts.values().copied().collect::<Vec<_>>(), vec![7, 5, 4, 2]);
        assert_eq!((c(Base::C), c(Base::A), c(Base::G), c(Base::T)), ("10", "11", "01", "00"));
        assert_eq!(cb.total_bits, 36);
        assert_eq!(q.bits.len(), 36);
        // 36 qubits is over the default cap
        assert!(q.state.is_none());
        assert!(cb.is_prefix_free());
    }

    #[test]
    fn degenerate_trees() {
        let q = quanthuff(&seq("AAAA")).unwrap();
        assert_eq!(q.codebook.code(Base::A), Some("0"));
        assert_eq!(q.codebook.total_bits, 4);
        assert_eq!(q.state.unwrap().as_basis_state(), Some(0));

        let q = quanthuff(&seq("AATT")).unwrap();
        assert_eq!(q.codebook.code(Base::A), Some("0"));
        assert_eq!(q.codebook.code(Base::T), Some("1"));
        assert_eq!(q.codebook.total_bits, 4);
        assert_eq!(q.state.unwrap().as_basis_state(), Some(0b0011));
    }

    #[test]
    fn three_symbols_carry_the_leftover() {
        // ranks: T1 G2 A3 → (T,G) then with A
        let q = quanthuff(&seq("AAAGGT")).unwrap();
        assert_eq!(q.codebook.code(Base::T), Some("00"));
        assert_eq!(q.codebook.code(Base::G), Some("01"));
        assert_eq!(q.codebook.code(Base::A), Some("1"));
    }

    #[test]
    fn classic_beats_cascade_on_m13() {
        let cb = classic_huffman(&seq(M13));
        assert_eq!(cb.total_bits, 35);
        assert_eq!(cb.code(Base::A), Some("0"));
        assert_eq!(cb.code(Base::C), Some("10"));
        assert!(cb.is_prefix_free());
        assert_eq!(classic_huffman(&seq("AAAA")).total_bits, 4);
        let uniform = classic_huffman(&seq("ACGTACGT"));
        assert!(uniform.codes.values().all(|c| c.len() == 2));
        assert_eq!(uniform.total_bits, quanthuff(&seq("ACGTACGT")).unwrap().codebook.total_bits);
    }

    #[test]
    fn bwt_matches_rotation_oracle() {
        for s in ["AAAA", "ACTGACGTAGC", "A", "GATTACA", "TTTTTTTA", M13] {
            assert_eq!(bwt(&seq(s)), rotation_oracle(s), "{s}");
            assert_eq!(ibwt(&bwt(&seq(s))).unwrap().to_string(), s);
        }
        assert_eq!(bwt(&seq("AAAA")).transformed, "AAAA$");
    }

    #[test]
    fn ibwt_rejects_malformed() {
        let bad = |t: &str, p: usize| ibwt(&BwtResult { transformed: t.into(), primary_index: p });
        assert!(matches!(bad("AAAA", 0), Err(Error::MalformedBwt(_))));
        assert!(matches!(bad("A$A$", 1), Err(Error::MalformedBwt(_))));
        assert!(matches!(bad("AN$", 2), Err(Error::MalformedBwt(_))));
        assert!(matches!(bad("AA$", 0), Err(Error::MalformedBwt(_))));
    }

    #[test]
    fn qbwt_full_rotations() {
        let out = qbwt_encode(&seq("AAAA"), 256, 3).unwrap();
        assert!(out.angles.iter().all(|t| (t - TAU).abs() < 1e-12));
        // (−I)^⊗4 = +I
        assert!((out.state.amplitude(0).re - 1.0).abs() < 1e-12);
        assert_eq!(out.counts.len(), 1);
        assert_eq!(out.counts["0000"], 256);
    }

    #[test]
    fn qbwt_phase_is_invisible_to_sampling() {
        let s = seq("ACTGACGTAGC");
        let (_, _, _, plain) = qbwt_state(&s, false).unwrap();
        let (_, _, _, phased) = qbwt_state(&s, true).unwrap();
        assert_eq!(plain.sample_counts(1024, 11).unwrap(), phased.sample_counts(1024, 11).unwrap());
    }
}
