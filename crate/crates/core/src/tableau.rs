//! Correspondences, forms, signatures and the generators for both.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::error::{DavError, Result};
use crate::strategy::{
    argmax_sum, check_candidates, enumerate_strategies, strategy_count, Candidate, CandidateSet, Strategy,
};

/// A tableau cell: either a set of tied winners or a single elected candidate.
pub trait Cell: Copy + Eq + Ord + Hash + Debug + Send + Sync {
    /// Candidates named by the cell.
    fn support(&self) -> CandidateSet;

    /// Whether the cell may stand at a position whose argmax set is `winners`.
    /// Sets must be equal; a single candidate must be a member.
    fn admits(&self, winners: CandidateSet) -> bool;

    /// True when `admits` is equality rather than membership.
    const EXACT: bool;

    fn contains(&self, c: Candidate) -> bool {
        self.support().contains(c)
    }
}

impl Cell for CandidateSet {
    const EXACT: bool = true;

    fn support(&self) -> CandidateSet {
        *self
    }

    fn admits(&self, winners: CandidateSet) -> bool {
        *self == winners
    }
}

impl Cell for Candidate {
    const EXACT: bool = false;

    fn support(&self) -> CandidateSet {
        CandidateSet::singleton(*self)
    }

    fn admits(&self, winners: CandidateSet) -> bool {
        winners.contains(*self)
    }

    fn contains(&self, c: Candidate) -> bool {
        *self == c
    }
}

/// A `rows x cols` matrix of cells over the candidates `0..p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau<T> {
    p: usize,
    rows: usize,
    cols: usize,
    cells: Vec<T>,
}

pub type Correspondence = Tableau<CandidateSet>;
pub type Form = Tableau<Candidate>;

/// Per-candidate occurrence counts of a row (or column, or plane).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(pub Vec<usize>);

impl Signature {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, c: Candidate) -> usize {
        self.0[c.0]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Row and column labels by strategies, listed in row/column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub rows: Vec<Strategy>,
    pub cols: Vec<Strategy>,
}

impl Labeling {
    /// Labels of the transposed tableau.
    pub fn transposed(self) -> Labeling {
        Labeling { rows: self.cols, cols: self.rows }
    }
}

impl<T: Cell> Tableau<T> {
    pub fn new(p: usize, rows: usize, cols: usize, cells: Vec<T>) -> Result<Self> {
        check_candidates(p)?;
        if rows == 0 || cols == 0 {
            return Err(DavError::Malformed("tableau must have at least one row and column".into()));
        }
        if cells.len() != rows * cols {
            return Err(DavError::Malformed(format!(
                "expected {} cells for {rows}x{cols}, got {}",
                rows * cols,
                cells.len()
            )));
        }
        let full = CandidateSet::full(p);
        for (idx, cell) in cells.iter().enumerate() {
            let s = cell.support();
            if s.is_empty() || !s.is_subset(full) {
                return Err(DavError::Malformed(format!(
                    "cell ({}, {}) is empty or names a candidate outside 0..{p}",
                    idx / cols,
                    idx % cols
                )));
            }
        }
        Ok(Tableau { p, rows, cols, cells })
    }

    pub fn from_rows(p: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(DavError::Malformed("rows have different lengths".into()));
        }
        Tableau::new(p, r, c, rows.into_iter().flatten().collect())
    }

    pub fn candidates(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.cells[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.cells.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Tableau<T> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                cells.push(self.get(i, j));
            }
        }
        Tableau { p: self.p, rows: self.cols, cols: self.rows, cells }
    }

    /// New tableau whose row `r` is old row `row_perm[r]` and column `c` is
    /// old column `col_perm[c]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Tableau<T> {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        let mut cells = Vec::with_capacity(self.cells.len());
        for &r in row_perm {
            for &c in col_perm {
                cells.push(self.get(r, c));
            }
        }
        Tableau { p: self.p, rows: self.rows, cols: self.cols, cells }
    }

    /// Candidates occurring somewhere in the tableau.
    pub fn present(&self) -> CandidateSet {
        self.cells.iter().fold(CandidateSet::EMPTY, |acc, c| acc.union(c.support()))
    }

    pub fn row_signature(&self, i: usize) -> Signature {
        let mut counts = vec![0; self.p];
        for cell in self.row(i) {
            for c in cell.support().iter() {
                counts[c.0] += 1;
            }
        }
        Signature(counts)
    }

    pub fn row_distinct(&self, i: usize, i2: usize) -> bool {
        self.row(i) != self.row(i2)
    }

    /// Whether all rows are pairwise different.
    pub fn rows_pairwise_distinct(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.rows);
        (0..self.rows).all(|i| seen.insert(self.row(i)))
    }

    /// The `(alpha, beta)` matching the dimensions, if any.
    pub fn infer_parameters(&self) -> Result<(u32, u32)> {
        infer_parameters(self.rows, self.cols, self.p)
    }

    /// Whether `labeling` is a pair of bijections onto the strategy sets of
    /// `(alpha, beta)` under which every cell admits its argmax set.
    pub fn regenerates(&self, labeling: &Labeling) -> bool {
        let (alpha, beta) = match self.infer_parameters() {
            Ok(v) => v,
            Err(_) => return false,
        };
        if !is_strategy_bijection(&labeling.rows, self.rows, self.p, alpha)
            || !is_strategy_bijection(&labeling.cols, self.cols, self.p, beta)
        {
            return false;
        }
        labeling.rows.iter().enumerate().all(|(i, x)| {
            labeling.cols.iter().enumerate().all(|(j, y)| self.get(i, j).admits(argmax_sum(x, y)))
        })
    }
}

fn is_strategy_bijection(labels: &[Strategy], n: usize, p: usize, weight: u32) -> bool {
    if labels.len() != n || strategy_count(p, weight) != n as u128 {
        return false;
    }
    if labels.iter().any(|s| s.candidates() != p || s.weight() != weight) {
        return false;
    }
    let mut sorted: Vec<&Strategy> = labels.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| w[0] != w[1])
}

impl Form {
    /// The correspondence whose cells are the singletons of this form.
    pub fn as_singletons(&self) -> Correspondence {
        Tableau {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|&c| CandidateSet::singleton(c)).collect(),
        }
    }
}

impl Correspondence {
    /// Product over cells of the cell size: how many forms refine this
    /// correspondence.
    pub fn form_count(&self) -> u128 {
        self.cells
            .iter()
            .map(|c| c.len() as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .unwrap_or(u128::MAX)
    }

    pub fn tie_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.len() > 1).count()
    }

    pub fn resolve(&self, rule: TieRule) -> Form {
        let cells = self
            .cells
            .iter()
            .map(|s| match rule {
                TieRule::MinIndex => s.first(),
                TieRule::MaxIndex => s.last(),
            })
            .map(|c| c.expect("cells are non-empty"))
            .collect();
        Tableau { p: self.p, rows: self.rows, cols: self.cols, cells }
    }

    /// Resolve every tie uniformly at random.
    pub fn resolve_random<R: Rng + ?Sized>(&self, rng: &mut R) -> Form {
        let cells = self
            .cells
            .iter()
            .map(|s| {
                let members: Vec<Candidate> = s.iter().collect();
                members[rng.gen_range(0..members.len())]
            })
            .collect();
        Tableau { p: self.p, rows: self.rows, cols: self.cols, cells }
    }
}

/// How `generate_form` picks a winner from a tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    MinIndex,
    MaxIndex,
}

fn check_weights(alpha: u32, beta: u32) -> Result<()> {
    if alpha < 1 || beta < 1 {
        return Err(DavError::InvalidParameters(format!(
            "card counts must be positive, got alpha={alpha}, beta={beta}"
        )));
    }
    Ok(())
}

/// The DAV correspondence of `(p, alpha, beta)`, rows and columns in
/// strategy enumeration order.
pub fn generate_correspondence(p: usize, alpha: u32, beta: u32) -> Result<Correspondence> {
    check_weights(alpha, beta)?;
    let xs = enumerate_strategies(p, alpha)?;
    let ys = enumerate_strategies(p, beta)?;
    Ok(correspondence_for(p, &xs, &ys))
}

pub(crate) fn correspondence_for(p: usize, xs: &[Strategy], ys: &[Strategy]) -> Correspondence {
    let mut cells = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            cells.push(argmax_sum(x, y));
        }
    }
    Tableau { p, rows: xs.len(), cols: ys.len(), cells }
}

pub fn generate_form(p: usize, alpha: u32, beta: u32, rule: TieRule) -> Result<Form> {
    Ok(generate_correspondence(p, alpha, beta)?.resolve(rule))
}

/// Every form refining the correspondence of `(p, alpha, beta)`; fails if
/// there are more than `cap` of them.
pub fn enumerate_all_forms(p: usize, alpha: u32, beta: u32, cap: u128) -> Result<Vec<Form>> {
    let corr = generate_correspondence(p, alpha, beta)?;
    let count = corr.form_count();
    if count > cap {
        return Err(DavError::CapExceeded { what: "form enumeration", count, cap });
    }
    let ties: Vec<(usize, Vec<Candidate>)> = corr
        .cells
        .iter()
        .enumerate()
        .filter(|(_, s)| s.len() > 1)
        .map(|(idx, s)| (idx, s.iter().collect()))
        .collect();
    let base = corr.resolve(TieRule::MinIndex);
    let mut out = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; ties.len()];
    loop {
        let mut form = base.clone();
        for ((idx, members), &pick) in ties.iter().zip(&choice) {
            form.cells[*idx] = members[pick];
        }
        out.push(form);
        // odometer increment over the tie cells
        let mut pos = 0;
        loop {
            if pos == ties.len() {
                return Ok(out);
            }
            choice[pos] += 1;
            if choice[pos] < ties[pos].1.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// `s(x, a)`: for each candidate, the number of `beta`-strategies `y` with
/// the candidate among the winners of `x + y`.
pub fn signature_of_strategy(x: &Strategy, p: usize, beta: u32) -> Result<Signature> {
    if x.candidates() != p {
        return Err(DavError::LengthMismatch { expected: p, found: x.candidates() });
    }
    let ys = enumerate_strategies(p, beta)?;
    Ok(signature_against(x, &ys))
}

pub(crate) fn signature_against(x: &Strategy, ys: &[Strategy]) -> Signature {
    let mut counts = vec![0; x.candidates()];
    for y in ys {
        for c in argmax_sum(x, y).iter() {
            counts[c.0] += 1;
        }
    }
    Signature(counts)
}

/// The unique `w >= 1` with `C(w + p - 1, p - 1) = count`.
pub fn infer_weight(count: usize, p: usize) -> Result<u32> {
    check_candidates(p)?;
    let target = count as u128;
    let mut w = 1u32;
    loop {
        let c = strategy_count(p, w);
        if c == target {
            return Ok(w);
        }
        if c > target {
            return Err(DavError::NoParameters { target: count, p });
        }
        w += 1;
    }
}

/// Recover `(alpha, beta)` from the dimensions `k x l` of a tableau over `p`
/// candidates.
pub fn infer_parameters(k: usize, l: usize, p: usize) -> Result<(u32, u32)> {
    Ok((infer_weight(k, p)?, infer_weight(l, p)?))
}
