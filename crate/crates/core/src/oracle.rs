//! Exhaustive recognizer for small tableaux.
//!
//! Rows are assigned strategies by backtracking, most constrained row first.
//! Each assignment narrows the strategies every column may still take; a
//! column left with none prunes the branch. Once all rows are placed the
//! columns are matched to strategies by a second backtracking search, cut
//! whenever the unassigned columns admit no perfect matching.

use crate::error::{DavError, Result};
use crate::matching::maximum_matching;
use crate::strategy::{argmax_sum, enumerate_strategies, CandidateSet, Strategy};
use crate::tableau::{Cell, Labeling, Tableau};

/// Default bound on `rows * cols`.
pub const DEFAULT_GUARD: usize = 64;
/// Default bound on counted labelings.
pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub is_dav: bool,
    /// Number of full labelings found, stopping at the cap.
    pub labelings_found: usize,
    pub one_labeling: Option<Labeling>,
    pub nodes_explored: u64,
}

impl OracleReport {
    fn not_dav() -> Self {
        OracleReport { is_dav: false, labelings_found: 0, one_labeling: None, nodes_explored: 0 }
    }
}

pub fn oracle_recognize<T: Cell>(t: &Tableau<T>, cap: usize) -> Result<OracleReport> {
    oracle_recognize_with(t, cap, DEFAULT_GUARD)
}

/// Search every row and column labeling of `t`, stopping after `cap` are
/// found. Fails when `rows * cols` exceeds `guard`.
pub fn oracle_recognize_with<T: Cell>(t: &Tableau<T>, cap: usize, guard: usize) -> Result<OracleReport> {
    let cells = t.rows() * t.cols();
    if cells > guard {
        return Err(DavError::SizeGuard { what: "oracle search", required: cells as u128, guard: guard as u128 });
    }
    let p = t.candidates();
    if t.present() != CandidateSet::full(p) {
        return Ok(OracleReport::not_dav());
    }
    let Ok((alpha, beta)) = t.infer_parameters() else {
        return Ok(OracleReport::not_dav());
    };
    let xs = enumerate_strategies(p, alpha)?;
    let ys = enumerate_strategies(p, beta)?;
    let winners: Vec<Vec<CandidateSet>> = xs.iter().map(|x| ys.iter().map(|y| argmax_sum(x, y)).collect()).collect();

    // For each x and candidate: how many y force it to be the sole winner,
    // and how many let it win.
    let forced_and_possible: Vec<Vec<(usize, usize)>> = winners
        .iter()
        .map(|row| {
            (0..p)
                .map(|c| {
                    let c = crate::strategy::Candidate(c);
                    let forced = row.iter().filter(|w| **w == CandidateSet::singleton(c)).count();
                    let possible = row.iter().filter(|w| w.contains(c)).count();
                    (forced, possible)
                })
                .collect()
        })
        .collect();

    let mut feasible: Vec<Vec<usize>> = Vec::with_capacity(t.rows());
    for i in 0..t.rows() {
        let sig = t.row_signature(i);
        let fits: Vec<usize> = (0..xs.len())
            .filter(|&n| {
                forced_and_possible[n].iter().zip(sig.counts()).all(|(&(lo, hi), &s)| {
                    if T::EXACT {
                        s == hi
                    } else {
                        lo <= s && s <= hi
                    }
                })
            })
            .collect();
        feasible.push(fits);
    }
    let mut order: Vec<usize> = (0..t.rows()).collect();
    order.sort_by_key(|&i| (feasible[i].len(), i));

    let mut search = Search {
        t,
        winners: &winners,
        feasible: &feasible,
        order: &order,
        cap: cap.max(1),
        row_choice: vec![usize::MAX; t.rows()],
        x_used: vec![false; xs.len()],
        found: 0,
        first: None,
        nodes: 0,
    };
    let all_columns = vec![vec![true; ys.len()]; t.cols()];
    search.rows(0, all_columns);

    let one_labeling = search.first.map(|(r, c)| Labeling {
        rows: r.into_iter().map(|n| xs[n].clone()).collect(),
        cols: c.into_iter().map(|n| ys[n].clone()).collect(),
    });
    Ok(OracleReport {
        is_dav: search.found > 0,
        labelings_found: search.found,
        one_labeling,
        nodes_explored: search.nodes,
    })
}

struct Search<'a, T> {
    t: &'a Tableau<T>,
    winners: &'a [Vec<CandidateSet>],
    feasible: &'a [Vec<usize>],
    order: &'a [usize],
    cap: usize,
    row_choice: Vec<usize>,
    x_used: Vec<bool>,
    found: usize,
    first: Option<(Vec<usize>, Vec<usize>)>,
    nodes: u64,
}

impl<T: Cell> Search<'_, T> {
    fn rows(&mut self, depth: usize, columns: Vec<Vec<bool>>) {
        if self.found >= self.cap {
            return;
        }
        self.nodes += 1;
        if depth == self.order.len() {
            self.columns(columns);
            return;
        }
        let i = self.order[depth];
        for &n in &self.feasible[i] {
            if self.x_used[n] {
                continue;
            }
            let mut narrowed = columns.clone();
            let mut dead = false;
            for (j, allowed) in narrowed.iter_mut().enumerate() {
                let cell = self.t.get(i, j);
                for (m, ok) in allowed.iter_mut().enumerate() {
                    *ok = *ok && cell.admits(self.winners[n][m]);
                }
                if !allowed.iter().any(|&ok| ok) {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            self.x_used[n] = true;
            self.row_choice[i] = n;
            self.rows(depth + 1, narrowed);
            self.x_used[n] = false;
            if self.found >= self.cap {
                return;
            }
        }
    }

    fn columns(&mut self, allowed: Vec<Vec<bool>>) {
        let mut order: Vec<usize> = (0..allowed.len()).collect();
        order.sort_by_key(|&j| (allowed[j].iter().filter(|&&ok| ok).count(), j));
        let ys = allowed.first().map_or(0, Vec::len);
        let mut choice = vec![usize::MAX; allowed.len()];
        let mut used = vec![false; ys];
        self.assign_column(0, &order, &allowed, &mut choice, &mut used);
    }

    fn assign_column(
        &mut self,
        depth: usize,
        order: &[usize],
        allowed: &[Vec<bool>],
        choice: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) {
        if self.found >= self.cap {
            return;
        }
        self.nodes += 1;
        if depth == order.len() {
            self.found += 1;
            if self.first.is_none() {
                self.first = Some((self.row_choice.clone(), choice.clone()));
            }
            return;
        }
        if !remaining_matchable(&order[depth..], allowed, used) {
            return;
        }
        let j = order[depth];
        for m in 0..used.len() {
            if allowed[j][m] && !used[m] {
                used[m] = true;
                choice[j] = m;
                self.assign_column(depth + 1, order, allowed, choice, used);
                used[m] = false;
            }
        }
    }
}

/// Whether the unassigned columns can still take distinct unused strategies.
/// Without this cut a column set violating Hall's condition is only found
/// after trying every partial assignment.
fn remaining_matchable(columns: &[usize], allowed: &[Vec<bool>], used: &[bool]) -> bool {
    let adjacency: Vec<Vec<usize>> = columns
        .iter()
        .map(|&j| (0..used.len()).filter(|&m| allowed[j][m] && !used[m]).collect())
        .collect();
    maximum_matching(&adjacency, used.len()).size() == columns.len()
}

/// Number of distinct DAV forms for `(p, alpha, beta)`: the product of the
/// tie-set sizes, since different choices give different matrices.
pub fn oracle_count_forms(p: usize, alpha: u32, beta: u32) -> Result<u128> {
    const MAX_TIES: usize = 20;
    let h = crate::tableau::generate_correspondence(p, alpha, beta)?;
    let ties = h.tie_cells();
    if ties > MAX_TIES {
        return Err(DavError::SizeGuard { what: "form counting", required: ties as u128, guard: MAX_TIES as u128 });
    }
    Ok(h.form_count())
}

/// Strategies with their indices, for callers holding oracle labelings.
pub fn strategy_index(xs: &[Strategy], x: &Strategy) -> Option<usize> {
    xs.iter().position(|s| s == x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::Candidate;
    use crate::tableau::{generate_correspondence, Form};

    fn form(rows: &[&str]) -> Form {
        let cells: Vec<Vec<Candidate>> =
            rows.iter().map(|r| r.bytes().map(|b| Candidate((b - b'a') as usize)).collect()).collect();
        let p = cells.iter().flatten().map(|c| c.0 + 1).max().unwrap();
        Form::from_rows(p, cells).unwrap()
    }

    #[test]
    fn figures() {
        let h = generate_correspondence(2, 3, 3).unwrap();
        let r = oracle_recognize(&h, 10).unwrap();
        assert!(r.is_dav);
        assert!(h.regenerates(r.one_labeling.as_ref().unwrap()));
        for g in [form(&["aaaa", "aabb", "abbb", "bbbb"]), form(&["aaab", "aabb", "aabb", "abbb"])] {
            let r = oracle_recognize(&g, 10).unwrap();
            assert!(r.is_dav);
            assert!(g.regenerates(r.one_labeling.as_ref().unwrap()));
        }
    }

    #[test]
    fn forbidden_examples() {
        for g in [form(&["abb", "cab", "cca"]), form(&["aaa", "aab", "aac"]), form(&["aabb", "accb", "acdb", "addb"])] {
            let r = oracle_recognize(&g, 10).unwrap();
            assert!(!r.is_dav && r.one_labeling.is_none() && r.labelings_found == 0);
        }
    }

    #[test]
    fn identical_rows_give_several_labelings() {
        // p = 2, alpha = 4, beta = 1: rows (4,0) and (3,1) coincide
        let h = generate_correspondence(2, 4, 1).unwrap();
        let r = oracle_recognize(&h, 10).unwrap();
        assert!(r.is_dav);
        assert!(r.labelings_found >= 2);
    }

    #[test]
    fn guard() {
        let h = generate_correspondence(3, 3, 3).unwrap();
        assert!(matches!(oracle_recognize(&h, 1), Err(DavError::SizeGuard { .. })));
        assert!(oracle_recognize_with(&h, 1, 100).unwrap().is_dav);
    }

    #[test]
    fn form_counts() {
        assert_eq!(oracle_count_forms(2, 3, 3).unwrap(), 16);
        assert_eq!(oracle_count_forms(2, 1, 2).unwrap(), 1);
        assert_eq!(oracle_count_forms(2, 1, 1).unwrap(), 4);
    }
}
