//! Distinct-rows questions for correspondences and for every form at once.

use rayon::prelude::*;

use crate::error::{DavError, Result};
use crate::strategy::{argmax_difference, argmax_sum, enumerate_strategies, CandidateSet, Strategy};
use crate::tableau::generate_correspondence;

/// Default bound on `|X|^2 * |Y|` argmax evaluations for the direct checks.
pub const DEFAULT_DIRECT_GUARD: u128 = 1_000_000;

/// The column strategies `y` for which `x + y` and `x2 + y` have disjoint
/// winner sets. Any form must then differ between rows `x` and `x2` at `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentiatingSet {
    pub x: Strategy,
    pub x2: Strategy,
    pub members: Vec<Strategy>,
}

impl DifferentiatingSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Recompute the disjointness predicate for every member.
    pub fn verify(&self) -> bool {
        self.members.iter().all(|y| !argmax_sum(&self.x, y).intersects(argmax_sum(&self.x2, y)))
    }
}

fn check_pair(x: &Strategy, x2: &Strategy, p: usize) -> Result<()> {
    if x.candidates() != p || x2.candidates() != p {
        return Err(DavError::LengthMismatch { expected: p, found: x.candidates().min(x2.candidates()) });
    }
    if x.weight() != x2.weight() {
        return Err(DavError::InvalidParameters(format!("strategies {x} and {x2} have different weights")));
    }
    if x == x2 {
        return Err(DavError::EqualStrategies);
    }
    Ok(())
}

pub fn differentiating_set(x: &Strategy, x2: &Strategy, p: usize, beta: u32) -> Result<DifferentiatingSet> {
    check_pair(x, x2, p)?;
    let members = enumerate_strategies(p, beta)?
        .into_iter()
        .filter(|y| !argmax_sum(x, y).intersects(argmax_sum(x2, y)))
        .collect();
    Ok(DifferentiatingSet { x: x.clone(), x2: x2.clone(), members })
}

/// Rows of the correspondence are pairwise distinct iff `beta >= alpha - 2`.
/// With a single card every row is a unit strategy and the rows differ.
pub fn correspondence_rows_distinct(p: usize, alpha: u32, beta: u32) -> Result<bool> {
    crate::strategy::check_candidates(p)?;
    check_weights(alpha, beta)?;
    Ok(alpha == 1 || beta + 2 >= alpha)
}

/// Generate the correspondence and compare rows.
pub fn correspondence_rows_distinct_direct(p: usize, alpha: u32, beta: u32) -> Result<bool> {
    Ok(generate_correspondence(p, alpha, beta)?.rows_pairwise_distinct())
}

pub fn correspondence_cols_distinct(p: usize, alpha: u32, beta: u32) -> Result<bool> {
    correspondence_rows_distinct(p, beta, alpha)
}

/// Whether every DAV form for the parameters has pairwise distinct rows.
pub fn all_forms_rows_distinct(p: usize, alpha: u32, beta: u32) -> Result<bool> {
    crate::strategy::check_candidates(p)?;
    check_weights(alpha, beta)?;
    let (a, b) = (alpha as i64, beta as i64);
    Ok(match p {
        2 => b >= a - 1 && (a + b) % 2 == 1,
        3 => b >= 2 * a || b == 2 * a - 2,
        _ => (a, b) != (1, 1) && b >= 2 * a - 2,
    })
}

pub fn all_forms_cols_distinct(p: usize, alpha: u32, beta: u32) -> Result<bool> {
    all_forms_rows_distinct(p, beta, alpha)
}

fn check_weights(alpha: u32, beta: u32) -> Result<()> {
    if alpha == 0 || beta == 0 {
        return Err(DavError::InvalidParameters(format!(
            "card counts must be positive, got alpha={alpha}, beta={beta}"
        )));
    }
    Ok(())
}

/// Which row pairs the direct check inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairScope {
    AllPairs,
    /// Only pairs one card move apart. Enough, because moving a card of `x`
    /// towards `x2` yields a neighbor whose differentiating set is contained
    /// in that of `(x, x2)`.
    Neighbors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectReport {
    pub distinct: bool,
    /// Unordered pairs `(x, x2)` with empty differentiating set.
    pub empty_pairs: Vec<(Strategy, Strategy)>,
    pub pairs_checked: usize,
}

fn winner_table(xs: &[Strategy], ys: &[Strategy]) -> Vec<Vec<CandidateSet>> {
    xs.iter().map(|x| ys.iter().map(|y| argmax_sum(x, y)).collect()).collect()
}

/// All forms have distinct rows iff every pair of rows has a non-empty
/// differentiating set: with an empty one, picking a common winner in every
/// column builds a form whose two rows coincide.
pub fn all_forms_rows_distinct_direct(
    p: usize,
    alpha: u32,
    beta: u32,
    scope: PairScope,
    guard: u128,
) -> Result<DirectReport> {
    check_weights(alpha, beta)?;
    let xs = enumerate_strategies(p, alpha)?;
    let ys = enumerate_strategies(p, beta)?;
    let work = (xs.len() as u128).pow(2) * ys.len() as u128;
    if work > guard {
        return Err(DavError::SizeGuard { what: "direct distinct-rows check", required: work, guard });
    }
    let table = winner_table(&xs, &ys);
    let pairs: Vec<(usize, usize)> = match scope {
        PairScope::AllPairs => (0..xs.len()).flat_map(|i| (i + 1..xs.len()).map(move |j| (i, j))).collect(),
        PairScope::Neighbors => neighbor_pairs(&xs),
    };
    let mut empty: Vec<(usize, usize)> = pairs
        .par_iter()
        .copied()
        .filter(|&(i, j)| table[i].iter().zip(&table[j]).all(|(s, t)| s.intersects(*t)))
        .collect();
    empty.sort_unstable();
    Ok(DirectReport {
        distinct: empty.is_empty(),
        empty_pairs: empty.into_iter().map(|(i, j)| (xs[i].clone(), xs[j].clone())).collect(),
        pairs_checked: pairs.len(),
    })
}

pub fn all_forms_cols_distinct_direct(
    p: usize,
    alpha: u32,
    beta: u32,
    scope: PairScope,
    guard: u128,
) -> Result<DirectReport> {
    all_forms_rows_distinct_direct(p, beta, alpha, scope, guard)
}

/// Index pairs `(i, j)`, `i < j`, whose strategies differ by one card move.
fn neighbor_pairs(xs: &[Strategy]) -> Vec<(usize, usize)> {
    let index: std::collections::HashMap<&[u32], usize> =
        xs.iter().enumerate().map(|(n, x)| (x.counts(), n)).collect();
    let mut out = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for (a, b) in card_moves(x) {
            let moved = move_card(x, a, b);
            let j = index[moved.as_slice()];
            if i < j {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn card_moves(x: &Strategy) -> impl Iterator<Item = (usize, usize)> + '_ {
    let p = x.candidates();
    (0..p).flat_map(move |a| (0..p).filter(move |&b| b != a && x.counts()[a] > 0).map(move |b| (a, b)))
}

fn move_card(x: &Strategy, from: usize, to: usize) -> Vec<u32> {
    let mut v = x.counts().to_vec();
    v[from] -= 1;
    v[to] += 1;
    v
}

/// Counterexamples found by [`neighbor_reduction_check`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionReport {
    pub containment_checked: usize,
    pub containment_failures: Vec<(Strategy, Strategy, Strategy)>,
    pub singleton_checked: usize,
    pub singleton_failures: Vec<(Strategy, Strategy, Strategy)>,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.containment_failures.is_empty() && self.singleton_failures.is_empty()
    }
}

/// Check the card-move containment on every ordered pair and every choice of
/// the moved card, and for `p >= 3` that each `y` separating two neighbors
/// makes both winners unique: the candidate losing the card wins in the
/// first row and the one gaining it wins in the second.
pub fn neighbor_reduction_check(p: usize, alpha: u32, beta: u32) -> Result<ReductionReport> {
    check_weights(alpha, beta)?;
    let xs = enumerate_strategies(p, alpha)?;
    let ys = enumerate_strategies(p, beta)?;
    let table = winner_table(&xs, &ys);
    let index: std::collections::HashMap<&[u32], usize> =
        xs.iter().enumerate().map(|(n, x)| (x.counts(), n)).collect();
    let separated = |i: usize, j: usize| -> Vec<bool> {
        table[i].iter().zip(&table[j]).map(|(s, t)| !s.intersects(*t)).collect()
    };

    let per_x: Vec<ReductionReport> = (0..xs.len())
        .into_par_iter()
        .map(|i| {
            let mut r = ReductionReport::default();
            for j in 0..xs.len() {
                if i == j {
                    continue;
                }
                let d = separated(i, j);
                let gains = argmax_difference(&xs[i], &xs[j]);
                let losses = argmax_difference(&xs[j], &xs[i]);
                for a in gains.iter() {
                    for b in losses.iter() {
                        let k = index[move_card(&xs[i], a.0, b.0).as_slice()];
                        r.containment_checked += 1;
                        if k == i {
                            continue;
                        }
                        let d2 = separated(i, k);
                        if d2.iter().zip(&d).any(|(&in2, &in1)| in2 && !in1) {
                            r.containment_failures.push((xs[i].clone(), xs[j].clone(), xs[k].clone()));
                        }
                    }
                }
            }
            if p >= 3 {
                for (a, b) in card_moves(&xs[i]) {
                    let k = index[move_card(&xs[i], a, b).as_slice()];
                    let (ca, cb) = (crate::strategy::Candidate(a), crate::strategy::Candidate(b));
                    for (m, y) in ys.iter().enumerate() {
                        if table[i][m].intersects(table[k][m]) {
                            continue;
                        }
                        r.singleton_checked += 1;
                        if table[i][m] != CandidateSet::singleton(ca) || table[k][m] != CandidateSet::singleton(cb) {
                            r.singleton_failures.push((xs[i].clone(), xs[k].clone(), y.clone()));
                        }
                    }
                }
            }
            r
        })
        .collect();

    let mut out = ReductionReport::default();
    for r in per_x {
        out.containment_checked += r.containment_checked;
        out.containment_failures.extend(r.containment_failures);
        out.singleton_checked += r.singleton_checked;
        out.singleton_failures.extend(r.singleton_failures);
    }
    Ok(out)
}
