#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use genoq_core::infomath::ProbDist4;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_dist<R: Rng>(rng: &mut R) -> ProbDist4 {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0f64));
    let total: f64 = raw.iter().sum();
    let mut p = raw.map(|x| x / total);
    // absorb rounding so the sum is 1 to within the constructor tolerance
    p[3] = 1.0 - p[0] - p[1] - p[2];
    ProbDist4::new(p).unwrap()
}

/// Minimum-cost transport between two 4-point distributions by enumerating
/// every basic feasible solution (spanning trees of the 4+4 bipartite
/// graph with 7 cells) and keeping the cheapest feasible one.
pub fn transport_lp(p: &[f64; 4], q: &[f64; 4], cost: &[[f64; 4]; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << 16 {
        if mask.count_ones() != 7 {
            continue;
        }
        if let Some(flow) = tree_flow(mask, p, q) {
            let c: f64 = (0..16).filter(|k| mask >> k & 1 == 1).map(|k| flow[k] * cost[k / 4][k % 4]).sum();
            best = best.min(c);
        }
    }
    best
}

/// Flows on the cells of `mask` if they form a spanning tree with a
/// non-negative solution.
fn tree_flow(mask: u32, p: &[f64; 4], q: &[f64; 4]) -> Option<[f64; 16]> {
    let mut cells: Vec<usize> = (0..16).filter(|k| mask >> k & 1 == 1).collect();
    let mut supply = *p;
    let mut demand = *q;
    let mut flow = [0.0; 16];
    let mut row_done = [false; 4];
    let mut col_done = [false; 4];
    while !cells.is_empty() {
        let degree = |is_row: bool, idx: usize, cells: &[usize]| {
            cells.iter().filter(|&&k| if is_row { k / 4 == idx } else { k % 4 == idx }).count()
        };
        // peel a leaf: a live row or column touched by exactly one cell
        let leaf = (0..4)
            .filter(|&r| !row_done[r])
            .find(|&r| degree(true, r, &cells) == 1)
            .map(|r| (true, r))
            .or_else(|| (0..4).filter(|&c| !col_done[c]).find(|&c| degree(false, c, &cells) == 1).map(|c| (false, c)))?;
        let (is_row, idx) = leaf;
        let pos = cells.iter().position(|&k| if is_row { k / 4 == idx } else { k % 4 == idx })?;
        let k = cells.remove(pos);
        let (r, c) = (k / 4, k % 4);
        let amount = if is_row { supply[r] } else { demand[c] };
        if amount < -1e-12 {
            return None;
        }
        flow[k] = amount;
        supply[r] -= amount;
        demand[c] -= amount;
        if is_row {
            row_done[r] = true;
        } else {
            col_done[c] = true;
        }
    }
    // a spanning tree leaves nothing unbalanced and touches every node
    let balanced = supply.iter().chain(&demand).all(|x| x.abs() < 1e-12);
    let covered = (0..4).all(|i| (0..16).any(|k| mask >> k & 1 == 1 && k / 4 == i))
        && (0..4).all(|i| (0..16).any(|k| mask >> k & 1 == 1 && k % 4 == i));
    (balanced && covered && flow.iter().all(|f| *f >= -1e-12)).then_some(flow)
}

pub const TRAIN_NEG: usize = 12355;
pub const TRAIN_POS: usize = 14742;
pub const TEST_NEG: usize = 4119;
pub const TEST_POS: usize = 4915;

/// Writes a coordinates-only promoter table of 251-base intervals and the
/// matching `id,split,class` label table, rows in seeded random order.
pub fn write_promoter_fixture(dir: &Path, seed: u64) -> (PathBuf, PathBuf) {
    let mut labels: Vec<(&str, &str)> = Vec::new();
    for (split, class, n) in [
        ("train", "negative", TRAIN_NEG),
        ("train", "positive", TRAIN_POS),
        ("test", "negative", TEST_NEG),
        ("test", "positive", TEST_POS),
    ] {
        labels.extend(std::iter::repeat_n((split, class), n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.shuffle(&mut rng);

    let mut table = String::from("id,region,start,end,strand\n");
    let mut label_csv = String::from("id,split,class\n");
    for (i, (split, class)) in labels.iter().enumerate() {
        let chrom = rng.random_range(1..=22);
        let start: u64 = rng.random_range(10_000..200_000_000);
        let strand = if rng.random_bool(0.5) { '+' } else { '-' };
        table.push_str(&format!("seq{i:05},chr{chrom},{start},{},{strand}\n", start + 251));
        label_csv.push_str(&format!("seq{i:05},{split},{class}\n"));
    }
    let table_path = dir.join("promoters.csv");
    let label_path = dir.join("labels.csv");
    fs::write(&table_path, table).unwrap();
    fs::write(&label_path, label_csv).unwrap();
    (table_path, label_path)
}
