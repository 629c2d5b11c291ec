//! Recognition of DAV correspondences and forms.
//!
//! Correspondences are recognized for every parameter choice: rows are
//! labeled by their signatures and columns by a perfect matching. Forms are
//! dispatched by regime, see [`recognize_form_with`].

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{DavError, Result};
use crate::matching::{count_perfect_matchings, maximum_matching};
use crate::oracle::oracle_recognize_with;
use crate::plurality::{recognize_plurality_form, ForbiddenWitness};
use crate::special::{recognize_form_2_2, recognize_two_candidate_form};
use crate::strategy::{argmax_sum, enumerate_strategies, Candidate, CandidateSet, Strategy};
use crate::tableau::{signature_against, Cell, Correspondence, Form, Labeling, Signature, Tableau};

/// Default bound on `rows * cols` for the exhaustive fallback.
pub const DEFAULT_ORACLE_GUARD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SignatureMatching,
    LuCounting,
    Plurality,
    CountingIntervals,
    TwoCandidate,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionResult {
    pub verdict: Verdict,
    pub method: Method,
    pub labeling: Option<Labeling>,
    /// For n-voter tableaux: per axis, the strategy value `z` of each plane.
    pub plane_labels: Option<Vec<Vec<u32>>>,
    pub witness: Option<String>,
    pub forbidden: Option<ForbiddenWitness>,
}

impl RecognitionResult {
    pub fn accepted(method: Method, labeling: Labeling) -> Self {
        RecognitionResult {
            verdict: Verdict::Accepted,
            method,
            labeling: Some(labeling),
            plane_labels: None,
            witness: None,
            forbidden: None,
        }
    }

    pub fn rejected(method: Method, witness: impl Into<String>) -> Self {
        RecognitionResult {
            verdict: Verdict::Rejected,
            method,
            labeling: None,
            plane_labels: None,
            witness: Some(witness.into()),
            forbidden: None,
        }
    }

    pub fn undecided(method: Method, witness: impl Into<String>) -> Self {
        RecognitionResult { verdict: Verdict::Undecided, ..RecognitionResult::rejected(method, witness) }
    }

    pub fn is_accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    /// Same result for the transposed input.
    fn transposed(mut self) -> Self {
        self.labeling = self.labeling.map(Labeling::transposed);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecognizeOptions {
    /// Largest `rows * cols` handed to the exhaustive oracle.
    pub oracle_guard: usize,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions { oracle_guard: DEFAULT_ORACLE_GUARD }
    }
}

/// Render a candidate set for witnesses; candidates are written `#i`.
pub(crate) fn show_set(set: CandidateSet) -> String {
    let items: Vec<String> = set.iter().map(|c| format!("#{}", c.0)).collect();
    format!("{{{}}}", items.join(","))
}

/// Checks shared by every recognizer: all candidates occur and the
/// dimensions fit some `(alpha, beta)`.
pub(crate) fn precheck<T: Cell>(t: &Tableau<T>) -> std::result::Result<(u32, u32), String> {
    let p = t.candidates();
    let missing = CandidateSet::full(p).intersection(CandidateSet::from_bits(!t.present().bits()));
    if let Some(c) = missing.first() {
        return Err(format!("candidate #{} never occurs; a DAV tableau contains every candidate", c.0));
    }
    t.infer_parameters().map_err(|e| format!("dimensions {}x{} fit no DAV parameters: {e}", t.rows(), t.cols()))
}

/// Decide whether `h` is a DAV correspondence and recover a labeling.
pub fn recognize_correspondence(h: &Correspondence) -> RecognitionResult {
    let method = Method::SignatureMatching;
    let (alpha, beta) = match precheck(h) {
        Ok(v) => v,
        Err(w) => return RecognitionResult::rejected(method, w),
    };
    if h.cols() < h.rows() {
        // signatures separate rows only when beta >= alpha - 1
        return recognize_correspondence(&h.transpose()).transposed();
    }
    let p = h.candidates();
    let xs = enumerate_strategies(p, alpha).expect("inferred parameters are valid");
    let ys = enumerate_strategies(p, beta).expect("inferred parameters are valid");

    let mut by_signature: HashMap<Signature, Vec<usize>> = HashMap::with_capacity(xs.len());
    for (n, x) in xs.iter().enumerate() {
        by_signature.entry(signature_against(x, &ys)).or_default().push(n);
    }
    let mut owner: Vec<Option<usize>> = vec![None; xs.len()];
    let mut rows = Vec::with_capacity(h.rows());
    for i in 0..h.rows() {
        let sig = h.row_signature(i);
        let n = match by_signature.get(&sig).map(Vec::as_slice) {
            Some([n]) => *n,
            Some(_) => {
                return RecognitionResult::rejected(method, format!("row {i}: signature {:?} is not unique", sig.0))
            }
            None => {
                return RecognitionResult::rejected(
                    method,
                    format!("row {i}: signature {:?} matches no strategy", sig.0),
                )
            }
        };
        if let Some(prev) = owner[n] {
            return RecognitionResult::rejected(
                method,
                format!("rows {prev} and {i} both carry the signature of strategy {}", xs[n]),
            );
        }
        owner[n] = Some(i);
        rows.push(xs[n].clone());
    }

    match bipartite_column_matching(h, &rows) {
        Ok(cols) => finish(h, method, Labeling { rows, cols }),
        Err(w) => RecognitionResult::rejected(method, w),
    }
}

pub(crate) fn finish<T: Cell>(t: &Tableau<T>, method: Method, labeling: Labeling) -> RecognitionResult {
    if t.regenerates(&labeling) {
        RecognitionResult::accepted(method, labeling)
    } else {
        RecognitionResult::rejected(method, "recovered labeling does not regenerate the input")
    }
}

/// Edges of the column graph: column `j` may carry strategy `ys[n]` when
/// every cell of the column admits the winners under the row labels.
pub fn column_edges<T: Cell>(t: &Tableau<T>, row_labels: &[Strategy], ys: &[Strategy]) -> Vec<Vec<usize>> {
    let winners: Vec<Vec<CandidateSet>> =
        row_labels.iter().map(|x| ys.iter().map(|y| argmax_sum(x, y)).collect()).collect();
    (0..t.cols())
        .map(|j| {
            (0..ys.len())
                .filter(|&n| (0..t.rows()).all(|i| t.get(i, j).admits(winners[i][n])))
                .collect()
        })
        .collect()
}

/// Label the columns of `t` given row labels, by a perfect matching between
/// columns and the column strategies. Set cells need equality, single
/// candidates membership.
pub fn bipartite_column_matching<T: Cell>(
    t: &Tableau<T>,
    row_labels: &[Strategy],
) -> std::result::Result<Vec<Strategy>, String> {
    let beta = crate::tableau::infer_weight(t.cols(), t.candidates()).map_err(|e| e.to_string())?;
    if row_labels.len() != t.rows() {
        return Err(format!("{} row labels for {} rows", row_labels.len(), t.rows()));
    }
    let ys = enumerate_strategies(t.candidates(), beta).map_err(|e| e.to_string())?;
    let edges = column_edges(t, row_labels, &ys);
    if let Some(j) = edges.iter().position(Vec::is_empty) {
        return Err(format!("no perfect matching: column {j} fits no strategy"));
    }
    let m = maximum_matching(&edges, ys.len());
    if !m.is_perfect() {
        return Err(format!("no perfect matching: maximum matching covers {} of {} columns", m.size(), t.cols()));
    }
    Ok(m.left.into_iter().map(|n| ys[n.expect("perfect")].clone()).collect())
}

/// How many column labelings are compatible with `row_labels`, counting up
/// to `cap`.
pub fn count_column_labelings<T: Cell>(t: &Tableau<T>, row_labels: &[Strategy], cap: usize) -> Result<usize> {
    let beta = crate::tableau::infer_weight(t.cols(), t.candidates())?;
    let ys = enumerate_strategies(t.candidates(), beta)?;
    Ok(count_perfect_matchings(&column_edges(t, row_labels, &ys), ys.len(), cap))
}

/// `B(x, x')`: candidates where `x` puts strictly more cards than `x'`.
pub fn b_set(x: &Strategy, x2: &Strategy) -> Result<CandidateSet> {
    if x.candidates() != x2.candidates() {
        return Err(DavError::LengthMismatch { expected: x.candidates(), found: x2.candidates() });
    }
    if x.weight() != x2.weight() {
        return Err(DavError::InvalidParameters("strategies have different weights".into()));
    }
    if x == x2 {
        return Err(DavError::EqualStrategies);
    }
    Ok(x
        .counts()
        .iter()
        .zip(x2.counts())
        .enumerate()
        .filter(|(_, (a, b))| a > b)
        .map(|(c, _)| Candidate(c))
        .collect())
}

/// The deduplicated family `{B(x, x') : x != x'}` over a strategy set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSetFamily {
    pub sets: Vec<CandidateSet>,
}

impl BSetFamily {
    pub fn new(xs: &[Strategy]) -> Self {
        let mut sets = Vec::new();
        for x in xs {
            for x2 in xs {
                if x != x2 {
                    sets.push(b_set(x, x2).expect("same weight, distinct"));
                }
            }
        }
        sets.sort();
        sets.dedup();
        BSetFamily { sets }
    }
}

/// `(|L(x,B)|, |U(x,B)|)`: column strategies forcing, resp. permitting, a
/// winner from `set`.
pub fn lu_counts(x: &Strategy, set: CandidateSet, p: usize, beta: u32) -> Result<(usize, usize)> {
    if set.is_empty() {
        return Err(DavError::InvalidParameters("B must be non-empty".into()));
    }
    if x.candidates() != p {
        return Err(DavError::LengthMismatch { expected: p, found: x.candidates() });
    }
    Ok(lu_against(x, set, &enumerate_strategies(p, beta)?))
}

pub(crate) fn lu_against(x: &Strategy, set: CandidateSet, ys: &[Strategy]) -> (usize, usize) {
    let mut low = 0;
    let mut high = 0;
    for y in ys {
        let w = argmax_sum(x, y);
        if w.is_subset(set) {
            low += 1;
        }
        if w.intersects(set) {
            high += 1;
        }
    }
    (low, high)
}

/// Decide whether `g` is a DAV form with default options.
pub fn recognize_form(g: &Form) -> RecognitionResult {
    recognize_form_with(g, RecognizeOptions::default())
}

/// Decide whether `g` is a DAV form, choosing the algorithm by regime:
///
/// - `p >= 3, beta >= 2 alpha`: L/U counting over the B-set family, then
///   membership matching for columns; `alpha >= 2 beta` is the transpose.
/// - `alpha = beta = 1`: forbidden submatrices and greedy assignment.
/// - `alpha = beta = 2, p >= 3`: counting intervals.
/// - `p = 2`: odd `alpha + beta` has a unique form, recognized as a
///   correspondence; otherwise the oracle, or the two-candidate plane
///   recognizer above the oracle guard.
/// - anything else: the oracle within its guard, else undecided.
pub fn recognize_form_with(g: &Form, options: RecognizeOptions) -> RecognitionResult {
    let (alpha, beta) = match precheck(g) {
        Ok(v) => v,
        Err(w) => return RecognitionResult::rejected(Method::LuCounting, w),
    };
    let p = g.candidates();
    let cells = g.rows() * g.cols();
    if p >= 3 && beta >= 2 * alpha {
        recognize_form_lu(g)
    } else if p >= 3 && alpha >= 2 * beta {
        recognize_form_lu(&g.transpose()).transposed()
    } else if alpha == 1 && beta == 1 {
        recognize_plurality_form(g)
    } else if p >= 3 && alpha <= 2 && beta <= 2 {
        recognize_form_2_2(g)
    } else if p == 2 && (alpha + beta) % 2 == 1 {
        let mut r = recognize_correspondence(&g.as_singletons());
        if r.is_accepted() && !g.regenerates(r.labeling.as_ref().expect("accepted")) {
            r = RecognitionResult::rejected(Method::SignatureMatching, "labeling does not regenerate the form");
        }
        r
    } else if cells <= options.oracle_guard {
        by_oracle(g, options.oracle_guard)
    } else if p == 2 {
        recognize_two_candidate_form(g)
    } else {
        RecognitionResult::undecided(
            Method::Oracle,
            format!(
                "p={p}, alpha={alpha}, beta={beta} is outside every polynomial regime and {cells} cells exceed the oracle guard of {}",
                options.oracle_guard
            ),
        )
    }
}

fn by_oracle(g: &Form, guard: usize) -> RecognitionResult {
    match oracle_recognize_with(g, 1, guard) {
        Ok(report) => match report.one_labeling {
            Some(labeling) => RecognitionResult::accepted(Method::Oracle, labeling),
            None => RecognitionResult::rejected(Method::Oracle, "exhaustive search found no labeling"),
        },
        Err(e) => RecognitionResult::undecided(Method::Oracle, e.to_string()),
    }
}

/// The L/U counting recognizer; valid when `p >= 3` and `beta >= 2 alpha`,
/// where at most one strategy fits each row.
pub fn recognize_form_lu(g: &Form) -> RecognitionResult {
    let method = Method::LuCounting;
    let (alpha, beta) = match precheck(g) {
        Ok(v) => v,
        Err(w) => return RecognitionResult::rejected(method, w),
    };
    let p = g.candidates();
    let xs = enumerate_strategies(p, alpha).expect("inferred parameters are valid");
    let ys = enumerate_strategies(p, beta).expect("inferred parameters are valid");
    let family = BSetFamily::new(&xs);
    let bounds: Vec<Vec<(usize, usize)>> =
        xs.iter().map(|x| family.sets.iter().map(|&b| lu_against(x, b, &ys)).collect()).collect();

    let mut owner: Vec<Option<usize>> = vec![None; xs.len()];
    let mut rows = Vec::with_capacity(g.rows());
    for i in 0..g.rows() {
        let counts: Vec<usize> =
            family.sets.iter().map(|&b| g.row(i).iter().filter(|&&c| b.contains(c)).count()).collect();
        let fits: Vec<usize> = (0..xs.len())
            .filter(|&n| bounds[n].iter().zip(&counts).all(|(&(lo, hi), &s)| lo <= s && s <= hi))
            .collect();
        let n = match fits.as_slice() {
            [n] => *n,
            [] => return RecognitionResult::rejected(method, lu_violation(i, &xs, &family, &bounds, &counts)),
            _ => {
                return RecognitionResult::rejected(
                    method,
                    format!("row {i}: {} strategies satisfy every L/U inequality", fits.len()),
                )
            }
        };
        if let Some(prev) = owner[n] {
            return RecognitionResult::rejected(method, format!("rows {prev} and {i} both fit strategy {}", xs[n]));
        }
        owner[n] = Some(i);
        rows.push(xs[n].clone());
    }

    match bipartite_column_matching(g, &rows) {
        Ok(cols) => finish(g, method, Labeling { rows, cols }),
        Err(w) => RecognitionResult::rejected(method, w),
    }
}

/// Witness for a row no strategy fits: the strategy violating the fewest
/// inequalities and its first violated one.
fn lu_violation(
    row: usize,
    xs: &[Strategy],
    family: &BSetFamily,
    bounds: &[Vec<(usize, usize)>],
    counts: &[usize],
) -> String {
    let violated = |n: usize| {
        bounds[n]
            .iter()
            .zip(counts)
            .enumerate()
            .filter(|(_, (&(lo, hi), &s))| s < lo || s > hi)
            .map(|(b, _)| b)
            .collect::<Vec<_>>()
    };
    let best = (0..xs.len()).min_by_key(|&n| violated(n).len()).expect("X is non-empty");
    let b = violated(best)[0];
    let (lo, hi) = bounds[best][b];
    format!(
        "row {row}: no strategy fits; closest is {} which needs {lo} <= s(B) <= {hi} for B = {} but s(B) = {}",
        xs[best],
        show_set(family.sets[b]),
        counts[b]
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{generate_correspondence, generate_form, TieRule};

    fn c(i: usize) -> Candidate {
        Candidate(i)
    }

    fn figure_two_second() -> Form {
        let (a, b) = (c(0), c(1));
        Form::from_rows(2, vec![vec![a, a, a, b], vec![a, a, b, b], vec![a, a, b, b], vec![a, b, b, b]]).unwrap()
    }

    #[test]
    fn figure_one_identity() {
        let h = generate_correspondence(2, 3, 3).unwrap();
        let r = recognize_correspondence(&h);
        assert!(r.is_accepted());
        let xs = enumerate_strategies(2, 3).unwrap();
        assert_eq!(r.labeling.unwrap().rows, xs);
        // identity columns are one valid answer
        assert!(bipartite_column_matching(&h, &xs).is_ok());
        assert!(h.regenerates(&Labeling { rows: xs.clone(), cols: xs }));
    }

    #[test]
    fn figure_one_perturbed() {
        let mut h = generate_correspondence(2, 3, 3).unwrap();
        h.set(0, 0, CandidateSet::singleton(c(1)));
        assert_eq!(recognize_correspondence(&h).verdict, Verdict::Rejected);
    }

    #[test]
    fn missing_candidate_rejected() {
        let h = Correspondence::from_rows(2, vec![vec![CandidateSet::singleton(c(0))]]).unwrap();
        let r = recognize_correspondence(&h);
        assert_eq!(r.verdict, Verdict::Rejected);
        assert!(r.witness.unwrap().contains("never occurs"));
    }

    #[test]
    fn column_without_edges_fails() {
        let mut h = generate_correspondence(2, 1, 1).unwrap();
        let xs = enumerate_strategies(2, 1).unwrap();
        h.set(0, 1, CandidateSet::singleton(c(1)));
        let err = bipartite_column_matching(&h, &xs).unwrap_err();
        assert!(err.contains("no perfect matching"));
    }

    #[test]
    fn second_figure_two_form_membership_matching() {
        let g = figure_two_second();
        let xs = enumerate_strategies(2, 3).unwrap();
        let cols = bipartite_column_matching(&g, &xs).unwrap();
        assert!(g.regenerates(&Labeling { rows: xs, cols }));
    }

    #[test]
    fn b_sets() {
        let s = |v: Vec<u32>| Strategy::new(v).unwrap();
        assert_eq!(b_set(&s(vec![2, 1, 0]), &s(vec![1, 1, 1])).unwrap(), CandidateSet::singleton(c(0)));
        assert_eq!(b_set(&s(vec![3, 0]), &s(vec![0, 3])).unwrap(), CandidateSet::singleton(c(0)));
        assert_eq!(b_set(&s(vec![0, 3]), &s(vec![3, 0])).unwrap(), CandidateSet::singleton(c(1)));
        assert_eq!(b_set(&s(vec![1, 2]), &s(vec![1, 2])), Err(DavError::EqualStrategies));
        let xs = enumerate_strategies(3, 3).unwrap();
        for x in &xs {
            for x2 in &xs {
                if x != x2 {
                    let (b1, b2) = (b_set(x, x2).unwrap(), b_set(x2, x).unwrap());
                    assert!(!b1.is_empty() && !b1.intersects(b2));
                }
            }
        }
    }

    #[test]
    fn lu_full_set() {
        let x = Strategy::new(vec![1, 0, 1]).unwrap();
        assert_eq!(lu_counts(&x, CandidateSet::full(3), 3, 3).unwrap(), (10, 10));
        assert!(lu_counts(&x, CandidateSet::EMPTY, 3, 3).is_err());
    }

    #[test]
    fn lu_lemma_fails_below_threshold() {
        // p = 3, beta = 2 alpha - 1: the strict inequality breaks for this pair
        let x = Strategy::new(vec![1, 0, 1]).unwrap();
        let x2 = Strategy::new(vec![0, 1, 1]).unwrap();
        let b = b_set(&x, &x2).unwrap();
        let (low, _) = lu_counts(&x, b, 3, 3).unwrap();
        let (_, high) = lu_counts(&x2, b, 3, 3).unwrap();
        assert!(high >= low, "U(x',B) = {high}, L(x,B) = {low}");
    }

    #[test]
    fn lu_regime_round_trip() {
        let g = generate_form(3, 1, 2, TieRule::MinIndex).unwrap();
        let g = g.permuted(&[2, 0, 1], &[5, 3, 1, 0, 2, 4]);
        let r = recognize_form(&g);
        assert_eq!(r.method, Method::LuCounting);
        assert!(r.is_accepted());
        let rows: Vec<Vec<u32>> = r.labeling.unwrap().rows.iter().map(|s| s.counts().to_vec()).collect();
        assert_eq!(rows, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn transposed_regime() {
        let g = generate_form(3, 2, 1, TieRule::MaxIndex).unwrap();
        let r = recognize_form(&g);
        assert_eq!(r.method, Method::LuCounting);
        assert!(r.is_accepted());
        assert!(g.regenerates(&r.labeling.unwrap()));
    }

    #[test]
    fn figure_two_via_oracle() {
        let (a, b) = (c(0), c(1));
        let first =
            Form::from_rows(2, vec![vec![a, a, a, a], vec![a, a, b, b], vec![a, b, b, b], vec![b, b, b, b]]).unwrap();
        for g in [first, figure_two_second()] {
            let r = recognize_form(&g);
            assert_eq!(r.method, Method::Oracle);
            assert!(r.is_accepted());
        }
    }

    #[test]
    fn out_of_regime_is_undecided() {
        // p = 3, alpha = 3, beta = 4: 10 x 15 cells, above the default guard
        let g = generate_form(3, 3, 4, TieRule::MinIndex).unwrap();
        let r = recognize_form(&g);
        assert_eq!(r.verdict, Verdict::Undecided);
        let r = recognize_form_with(&g, RecognizeOptions { oracle_guard: 150 });
        assert!(r.is_accepted());
    }

    #[test]
    fn odd_two_candidate_form() {
        let g = generate_form(2, 2, 5, TieRule::MinIndex).unwrap();
        assert!(recognize_form(&g).is_accepted());
        let mut bad = g.clone();
        bad.set(0, 0, c(1));
        assert_eq!(recognize_form(&bad).verdict, Verdict::Rejected);
    }

    #[test]
    fn large_even_two_candidate_form() {
        let g = generate_form(2, 8, 8, TieRule::MaxIndex).unwrap();
        let r = recognize_form(&g);
        assert_eq!(r.method, Method::TwoCandidate);
        assert!(r.is_accepted());
        assert!(g.regenerates(&r.labeling.unwrap()));
    }
}
