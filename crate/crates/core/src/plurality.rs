//! Plurality forms (`alpha = beta = 1`): a `p x p` form is DAV exactly when
//! it contains none of the three forbidden submatrices
//!
//! ```text
//! m1 = a b     m2 = a a     m3 = a a b b
//!      c a          a a
//! ```
//!
//! with `a` distinct from `b` and `c` (`b = c` allowed). Submatrices are
//! taken up to row and column order, and `m3` may lie in a row or a column.

use serde::Serialize;

use crate::error::{DavError, Result};
use crate::recognizer::{Method, RecognitionResult};
use crate::strategy::{Candidate, CandidateSet, Strategy};
use crate::tableau::{Form, Labeling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    M1,
    M2,
    M3,
}

impl Pattern {
    pub fn name(self) -> &'static str {
        match self {
            Pattern::M1 => "m1",
            Pattern::M2 => "m2",
            Pattern::M3 => "m3",
        }
    }
}

/// An embedding of a forbidden pattern. Reading the form at
/// `rows x cols` (in the listed order) reproduces the pattern; for an `m3`
/// lying in a column the pattern reads top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenWitness {
    pub pattern: Pattern,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// The candidates playing `a, b, c` (m1), `a` (m2) or `a, b` (m3).
    pub symbols: Vec<Candidate>,
}

impl ForbiddenWitness {
    /// Re-read the witness from `g`.
    pub fn holds_in(&self, g: &Form) -> bool {
        let at = |i: usize, j: usize| g.get(self.rows[i], self.cols[j]);
        match self.pattern {
            Pattern::M1 => {
                let [a, b, c] = self.symbols[..] else { return false };
                self.rows.len() == 2
                    && self.cols.len() == 2
                    && self.rows[0] != self.rows[1]
                    && self.cols[0] != self.cols[1]
                    && a != b
                    && a != c
                    && at(0, 0) == a
                    && at(0, 1) == b
                    && at(1, 0) == c
                    && at(1, 1) == a
            }
            Pattern::M2 => {
                let [a] = self.symbols[..] else { return false };
                self.rows.len() == 2
                    && self.cols.len() == 2
                    && self.rows[0] != self.rows[1]
                    && self.cols[0] != self.cols[1]
                    && (0..2).all(|i| (0..2).all(|j| at(i, j) == a))
            }
            Pattern::M3 => {
                let [a, b] = self.symbols[..] else { return false };
                let line: Vec<Candidate> = if self.rows.len() == 1 && self.cols.len() == 4 {
                    (0..4).map(|j| at(0, j)).collect()
                } else if self.rows.len() == 4 && self.cols.len() == 1 {
                    (0..4).map(|i| at(i, 0)).collect()
                } else {
                    return false;
                };
                let mut idx = if self.rows.len() == 1 { self.cols.clone() } else { self.rows.clone() };
                idx.sort();
                idx.dedup();
                a != b && idx.len() == 4 && line == [a, a, b, b]
            }
        }
    }
}

/// Labels from the greedy assignment: a line gets every candidate it
/// contains at least twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    pub rows: Vec<CandidateSet>,
    pub cols: Vec<CandidateSet>,
}

impl PartialAssignment {
    /// At most one label per line and no label used twice on a side.
    pub fn is_partial_permutation(&self) -> bool {
        let injective = |labels: &[CandidateSet]| {
            let mut used = CandidateSet::EMPTY;
            labels.iter().all(|&l| {
                let ok = l.len() <= 1 && !l.intersects(used);
                used = used.union(l);
                ok
            })
        };
        injective(&self.rows) && injective(&self.cols)
    }
}

fn check_square(g: &Form) -> Result<()> {
    if g.rows() != g.cols() {
        return Err(DavError::NonSquare { rows: g.rows(), cols: g.cols() });
    }
    Ok(())
}

/// The greedy assignment of a square form.
pub fn greedy_assignment(g: &Form) -> Result<PartialAssignment> {
    check_square(g)?;
    let n = g.rows();
    let p = g.candidates();
    let repeated = |cells: &mut dyn Iterator<Item = Candidate>| {
        let mut counts = vec![0u32; p];
        for c in cells {
            counts[c.0] += 1;
        }
        counts.iter().enumerate().filter(|(_, &k)| k >= 2).map(|(c, _)| Candidate(c)).collect()
    };
    let rows = (0..n).map(|i| repeated(&mut (0..n).map(|j| g.get(i, j)))).collect();
    let cols = (0..n).map(|j| repeated(&mut (0..n).map(|i| g.get(i, j)))).collect();
    Ok(PartialAssignment { rows, cols })
}

/// Some forbidden submatrix of `g`, searching `m2`, then `m1`, then `m3`;
/// within a pattern the lexicographically least embedding (rows, then
/// columns) is returned.
pub fn find_forbidden_submatrix(g: &Form) -> Result<Option<ForbiddenWitness>> {
    check_square(g)?;
    Ok([Pattern::M2, Pattern::M1, Pattern::M3].into_iter().find_map(|pat| find_pattern(g, pat)))
}

/// The least embedding of one pattern. `O(p^4)` for `m1`/`m2`, `O(p^2)` for
/// `m3`.
pub fn find_pattern(g: &Form, pattern: Pattern) -> Option<ForbiddenWitness> {
    let (r, c) = (g.rows(), g.cols());
    match pattern {
        Pattern::M1 | Pattern::M2 => {
            for i in 0..r {
                for i2 in i + 1..r {
                    for j in 0..c {
                        for j2 in j + 1..c {
                            let (tl, tr, bl, br) = (g.get(i, j), g.get(i, j2), g.get(i2, j), g.get(i2, j2));
                            let w = match pattern {
                                Pattern::M2 if tl == tr && tl == bl && tl == br => {
                                    Some((vec![j, j2], vec![tl]))
                                }
                                Pattern::M1 if tl == br && tr != tl && bl != tl => {
                                    Some((vec![j, j2], vec![tl, tr, bl]))
                                }
                                Pattern::M1 if tr == bl && tl != tr && br != tr => {
                                    Some((vec![j2, j], vec![tr, tl, br]))
                                }
                                _ => None,
                            };
                            if let Some((cols, symbols)) = w {
                                return Some(ForbiddenWitness { pattern, rows: vec![i, i2], cols, symbols });
                            }
                        }
                    }
                }
            }
            None
        }
        Pattern::M3 => {
            for i in 0..r {
                let line: Vec<Candidate> = (0..c).map(|j| g.get(i, j)).collect();
                if let Some((idx, symbols)) = two_pairs(&line) {
                    return Some(ForbiddenWitness { pattern, rows: vec![i], cols: idx, symbols });
                }
            }
            for j in 0..c {
                let line: Vec<Candidate> = (0..r).map(|i| g.get(i, j)).collect();
                if let Some((idx, symbols)) = two_pairs(&line) {
                    return Some(ForbiddenWitness { pattern, rows: idx, cols: vec![j], symbols });
                }
            }
            None
        }
    }
}

/// Positions `a a b b` in a line where two different candidates repeat.
fn two_pairs(line: &[Candidate]) -> Option<(Vec<usize>, Vec<Candidate>)> {
    let mut first: Vec<(Candidate, usize, Option<usize>)> = Vec::new();
    for (pos, &c) in line.iter().enumerate() {
        match first.iter_mut().find(|(d, _, _)| *d == c) {
            Some(entry) if entry.2.is_none() => entry.2 = Some(pos),
            Some(_) => {}
            None => first.push((c, pos, None)),
        }
    }
    let mut pairs = first.into_iter().filter_map(|(c, a, b)| b.map(|b| (c, a, b)));
    let (a, a1, a2) = pairs.next()?;
    let (b, b1, b2) = pairs.next()?;
    Some((vec![a1, a2, b1, b2], vec![a, b]))
}

/// Decide whether a `p x p` form over `p` candidates is a plurality DAV form.
///
/// The greedy assignment is extended to full permutations: unused labels go
/// in candidate order to unlabeled lines in line order, except that a single
/// uncovered entry `x` labels both its row and its column. If the extension
/// covers every cell the form is accepted; otherwise a forbidden submatrix is
/// reported.
pub fn recognize_plurality_form(g: &Form) -> RecognitionResult {
    let method = Method::Plurality;
    let p = g.candidates();
    if g.rows() != g.cols() || g.rows() != p {
        return RecognitionResult::rejected(
            method,
            format!("a plurality form over {p} candidates is {p}x{p}, got {}x{}", g.rows(), g.cols()),
        );
    }
    if let Some((rows, cols)) = extend_greedy(g) {
        let unit = |c: Candidate| {
            let mut v = vec![0u32; p];
            v[c.0] = 1;
            Strategy::new(v).expect("unit vector")
        };
        return RecognitionResult::accepted(
            method,
            Labeling { rows: rows.into_iter().map(unit).collect(), cols: cols.into_iter().map(unit).collect() },
        );
    }
    match find_forbidden_submatrix(g).expect("square") {
        Some(w) => {
            let mut r = RecognitionResult::rejected(method, format!("contains {}", w.pattern.name()));
            r.forbidden = Some(w);
            r
        }
        None => RecognitionResult::rejected(method, "greedy assignment cannot be extended to a covering labeling"),
    }
}

/// Row and column permutations of the candidates covering every cell, built
/// from the greedy assignment; `None` when the assignment is not a partial
/// permutation or the extension leaves a cell uncovered.
fn extend_greedy(g: &Form) -> Option<(Vec<Candidate>, Vec<Candidate>)> {
    let n = g.rows();
    let ga = greedy_assignment(g).ok()?;
    if !ga.is_partial_permutation() {
        return None;
    }
    let mut rows: Vec<Option<Candidate>> = ga.rows.iter().map(|s| s.first()).collect();
    let mut cols: Vec<Option<Candidate>> = ga.cols.iter().map(|s| s.first()).collect();
    let uncovered: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| rows[i] != Some(g.get(i, j)) && cols[j] != Some(g.get(i, j)))
        .collect();
    match uncovered[..] {
        [] => {}
        [(i, j)] if rows[i].is_none() && cols[j].is_none() => {
            let x = g.get(i, j);
            if rows.contains(&Some(x)) || cols.contains(&Some(x)) {
                return None;
            }
            rows[i] = Some(x);
            cols[j] = Some(x);
        }
        _ => return None,
    }
    let complete = |labels: Vec<Option<Candidate>>| -> Vec<Candidate> {
        let used: CandidateSet = labels.iter().flatten().copied().collect();
        let mut free = (0..n).map(Candidate).filter(|c| !used.contains(*c));
        labels.into_iter().map(|l| l.unwrap_or_else(|| free.next().expect("counts match"))).collect()
    };
    let rows = complete(rows);
    let cols = complete(cols);
    let covered = (0..n).all(|i| (0..n).all(|j| g.get(i, j) == rows[i] || g.get(i, j) == cols[j]));
    covered.then_some((rows, cols))
}
