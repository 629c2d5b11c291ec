//! Two candidates `a = #0`, `b = #1` and `n` voters. Voter `i` with weight
//! `alpha_i` plays `z_i` in `0..=alpha_i`, meaning `z_i` cards for `a` and the
//! rest for `b`. The winners depend only on the sum: `a` wins when
//! `2 * sum(z) > sigma`, `b` when it is smaller, both on equality, where
//! `sigma` is the total weight.

use crate::error::{DavError, Result};
use crate::recognizer::{precheck, show_set, Method, RecognitionResult, Verdict};
use crate::strategy::{Candidate, CandidateSet, Strategy};
use crate::tableau::{Cell, Form, Labeling, Tableau, TieRule};

/// An `(alpha_1 + 1) x ... x (alpha_n + 1)` array of cells, row-major with
/// the last axis fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NTableau<T> {
    weights: Vec<u32>,
    cells: Vec<T>,
}

pub type NCorrespondence = NTableau<CandidateSet>;
pub type NForm = NTableau<Candidate>;

const A: Candidate = Candidate(0);
const B: Candidate = Candidate(1);

fn check_n_weights(weights: &[u32]) -> Result<()> {
    if weights.is_empty() {
        return Err(DavError::InvalidParameters("need at least one voter".into()));
    }
    if weights.iter().any(|&w| w == 0) {
        return Err(DavError::InvalidParameters("voter weights must be positive".into()));
    }
    Ok(())
}

/// Winners when the `a`-cards total `sum` out of `sigma`.
pub fn threshold_winners(sum: u64, sigma: u64) -> CandidateSet {
    match (2 * sum).cmp(&sigma) {
        std::cmp::Ordering::Greater => CandidateSet::singleton(A),
        std::cmp::Ordering::Equal => CandidateSet::full(2),
        std::cmp::Ordering::Less => CandidateSet::singleton(B),
    }
}

impl<T: Cell> NTableau<T> {
    pub fn new(weights: Vec<u32>, cells: Vec<T>) -> Result<Self> {
        check_n_weights(&weights)?;
        let size = weights.iter().try_fold(1usize, |acc, &w| acc.checked_mul(w as usize + 1));
        if size != Some(cells.len()) {
            return Err(DavError::Malformed(format!(
                "{} cells do not fill dimensions {:?}",
                cells.len(),
                weights.iter().map(|w| w + 1).collect::<Vec<_>>()
            )));
        }
        let ab = CandidateSet::full(2);
        if cells.iter().any(|c| c.support().is_empty() || !c.support().is_subset(ab)) {
            return Err(DavError::Malformed("n-voter cells must name only a and b".into()));
        }
        Ok(NTableau { weights, cells })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(|&w| w as usize + 1).collect()
    }

    pub fn voters(&self) -> usize {
        self.weights.len()
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        strides
    }

    pub fn get(&self, index: &[usize]) -> T {
        let flat: usize = index.iter().zip(self.strides()).map(|(i, s)| i * s).sum();
        self.cells[flat]
    }

    /// Calls `f(index, cell)` for every cell in storage order.
    fn for_each_cell(&self, mut f: impl FnMut(&[usize], T)) {
        let dims = self.dims();
        let mut idx = vec![0usize; dims.len()];
        for &cell in &self.cells {
            f(&idx, cell);
            for axis in (0..dims.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < dims[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }

    /// New tableau whose plane `r` on axis `i` is old plane `perms[i][r]`.
    pub fn permuted(&self, perms: &[Vec<usize>]) -> NTableau<T> {
        assert_eq!(perms.len(), self.voters());
        let strides = self.strides();
        // old offset contributed by each plane of each axis
        let offsets: Vec<Vec<usize>> = perms.iter().zip(&strides).map(|(perm, &s)| perm.iter().map(|&r| r * s).collect()).collect();
        let mut cells = Vec::with_capacity(self.cells.len());
        self.for_each_cell(|idx, _| {
            let old: usize = idx.iter().zip(&offsets).map(|(&r, o)| o[r]).sum();
            cells.push(self.cells[old]);
        });
        NTableau { weights: self.weights.clone(), cells }
    }

    /// Plane signatures `(count of a, count of b)` on every axis.
    fn plane_counts(&self) -> Vec<Vec<(usize, usize)>> {
        let mut counts: Vec<Vec<(usize, usize)>> = self.dims().into_iter().map(|d| vec![(0, 0); d]).collect();
        self.for_each_cell(|idx, cell| {
            let (has_a, has_b) = (cell.contains(A) as usize, cell.contains(B) as usize);
            for (axis, &z) in idx.iter().enumerate() {
                counts[axis][z].0 += has_a;
                counts[axis][z].1 += has_b;
            }
        });
        counts
    }
}

impl<T: Cell> NTableau<T> {
    /// A 2-voter tableau read off a two-candidate matrix, row index as the
    /// first coordinate.
    pub fn from_tableau(t: &Tableau<T>) -> Result<Self> {
        if t.candidates() != 2 {
            return Err(DavError::InvalidParameters("n-voter tableaux have exactly two candidates".into()));
        }
        NTableau::new(vec![t.rows() as u32 - 1, t.cols() as u32 - 1], t.cells().to_vec())
            .map_err(|_| DavError::Malformed("tableau needs at least two rows and columns".into()))
    }
}

fn generate<T>(weights: &[u32], cell: impl Fn(CandidateSet) -> T) -> Result<NTableau<T>> {
    check_n_weights(weights)?;
    let sigma: u64 = weights.iter().map(|&w| w as u64).sum();
    let dims: Vec<usize> = weights.iter().map(|&w| w as usize + 1).collect();
    let size = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    let size = size.ok_or_else(|| DavError::InvalidParameters("tableau too large".into()))?;
    let mut cells = Vec::with_capacity(size);
    let mut idx = vec![0usize; dims.len()];
    for _ in 0..size {
        let sum: u64 = idx.iter().map(|&z| z as u64).sum();
        cells.push(cell(threshold_winners(sum, sigma)));
        for axis in (0..dims.len()).rev() {
            idx[axis] += 1;
            if idx[axis] < dims[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
    Ok(NTableau { weights: weights.to_vec(), cells })
}

pub fn generate_n_correspondence(weights: &[u32]) -> Result<NCorrespondence> {
    generate(weights, |w| w)
}

pub fn generate_n_form(weights: &[u32], rule: TieRule) -> Result<NForm> {
    generate(weights, |w| match rule {
        TieRule::MinIndex => w.first().expect("non-empty"),
        TieRule::MaxIndex => w.last().expect("non-empty"),
    })
}

/// Occurrences of `c` in the plane `z` of axis `voter`.
pub fn plane_signature<T: Cell>(f: &NTableau<T>, voter: usize, z: usize, c: Candidate) -> usize {
    assert!(voter < f.voters() && z <= f.weights[voter] as usize && c.0 < 2);
    let (stride, dim) = (f.strides()[voter], f.weights[voter] as usize + 1);
    f.cells.iter().enumerate().filter(|&(flat, cell)| (flat / stride) % dim == z && cell.contains(c)).count()
}

/// Recognize a two-candidate tableau: sort each axis's planes by their
/// count of `a` (descending; ties by ascending count of `b`, then by index)
/// and give the `r`-th plane the value `alpha_i - r`, then check every cell
/// against the threshold rule.
/// Set cells must equal the winners; single cells must lie in them.
pub fn recognize_n_tableau<T: Cell>(f: &NTableau<T>) -> RecognitionResult {
    let method = Method::TwoCandidate;
    let sigma: u64 = f.weights.iter().map(|&w| w as u64).sum();
    let counts = f.plane_counts();
    let labels: Vec<Vec<u32>> = counts
        .iter()
        .zip(&f.weights)
        .map(|(planes, &w)| {
            let mut order: Vec<usize> = (0..planes.len()).collect();
            order.sort_by_key(|&z| (std::cmp::Reverse(planes[z].0), planes[z].1, z));
            let mut label = vec![0u32; planes.len()];
            for (rank, &z) in order.iter().enumerate() {
                label[z] = w - rank as u32;
            }
            label
        })
        .collect();
    let mut bad = None;
    f.for_each_cell(|idx, cell| {
        if bad.is_some() {
            return;
        }
        let sum: u64 = idx.iter().zip(&labels).map(|(&z, l)| l[z] as u64).sum();
        let winners = threshold_winners(sum, sigma);
        if !cell.admits(winners) {
            bad = Some(format!(
                "cell {idx:?}: relabeled coordinates sum to {sum} of {sigma}, winners {} but cell is {}",
                show_set(winners),
                show_set(cell.support())
            ));
        }
    });
    if let Some(witness) = bad {
        return RecognitionResult::rejected(method, witness);
    }
    RecognitionResult {
        verdict: Verdict::Accepted,
        method,
        labeling: None,
        plane_labels: Some(labels),
        witness: None,
        forbidden: None,
    }
}

/// A two-candidate form of any size, through the plane recognizer.
pub fn recognize_two_candidate_form(g: &Form) -> RecognitionResult {
    let method = Method::TwoCandidate;
    let (alpha, beta) = match precheck(g) {
        Ok(v) if g.candidates() == 2 => v,
        Ok(_) => return RecognitionResult::rejected(method, "the plane recognizer needs exactly two candidates"),
        Err(w) => return RecognitionResult::rejected(method, w),
    };
    let f = NTableau::from_tableau(g).expect("p = 2 and dimensions inferred");
    let mut r = recognize_n_tableau(&f);
    if let Some(labels) = r.plane_labels.clone() {
        let strategy = |z: u32, w: u32| Strategy::new(vec![z, w - z]).expect("weight >= 1");
        let labeling = Labeling {
            rows: labels[0].iter().map(|&z| strategy(z, alpha)).collect(),
            cols: labels[1].iter().map(|&z| strategy(z, beta)).collect(),
        };
        if !g.regenerates(&labeling) {
            return RecognitionResult::rejected(method, "plane labels do not regenerate the form");
        }
        r.labeling = Some(labeling);
    }
    r
}
