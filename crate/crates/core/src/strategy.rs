//! Voting strategies, candidate sets and the argmax rule.
//!
//! A strategy is a composition of a voter's card count into `p` non-negative
//! parts. Candidates are dense indices `0..p`; sets of candidates are stored
//! as a bitmask, which caps `p` at [`MAX_CANDIDATES`].

use std::fmt;

use crate::error::{DavError, Result};

/// Largest supported number of candidates.
pub const MAX_CANDIDATES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate(pub usize);

impl Candidate {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A subset of the candidates `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CandidateSet(u64);

impl CandidateSet {
    pub const EMPTY: CandidateSet = CandidateSet(0);

    pub fn singleton(c: Candidate) -> Self {
        CandidateSet(1u64 << c.0)
    }

    /// All of `0..p`.
    pub fn full(p: usize) -> Self {
        if p >= 64 {
            CandidateSet(u64::MAX)
        } else {
            CandidateSet((1u64 << p) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        CandidateSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, c: Candidate) {
        self.0 |= 1u64 << c.0;
    }

    pub fn contains(self, c: Candidate) -> bool {
        c.0 < 64 && self.0 >> c.0 & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: CandidateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: CandidateSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn intersection(self, other: CandidateSet) -> CandidateSet {
        CandidateSet(self.0 & other.0)
    }

    pub fn union(self, other: CandidateSet) -> CandidateSet {
        CandidateSet(self.0 | other.0)
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<Candidate> {
        (self.0 != 0).then(|| Candidate(self.0.trailing_zeros() as usize))
    }

    /// Largest member, if any.
    pub fn last(self) -> Option<Candidate> {
        (self.0 != 0).then(|| Candidate(63 - self.0.leading_zeros() as usize))
    }

    pub fn iter(self) -> impl Iterator<Item = Candidate> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Candidate(c))
        })
    }
}

impl FromIterator<Candidate> for CandidateSet {
    fn from_iter<I: IntoIterator<Item = Candidate>>(iter: I) -> Self {
        let mut set = CandidateSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

/// How one voter distributes their cards among the candidates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Strategy {
    counts: Vec<u32>,
}

impl Strategy {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(DavError::InvalidParameters(format!(
                "a strategy needs at least 2 candidates, got {}",
                counts.len()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(DavError::InvalidParameters("strategy weight must be positive".into()));
        }
        Ok(Strategy { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.counts
    }

    pub fn weight(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn candidates(&self) -> usize {
        self.counts.len()
    }

    /// Cards given to candidate `c`.
    pub fn get(&self, c: Candidate) -> u32 {
        self.counts[c.0]
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_candidates(p: usize) -> Result<()> {
    if p < 2 {
        return Err(DavError::InvalidParameters(format!("need at least 2 candidates, got {p}")));
    }
    if p > MAX_CANDIDATES {
        return Err(DavError::InvalidParameters(format!(
            "at most {MAX_CANDIDATES} candidates are supported, got {p}"
        )));
    }
    Ok(())
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of strategies for `p` candidates and `w` cards.
pub fn strategy_count(p: usize, w: u32) -> u128 {
    binomial(w as u64 + p as u64 - 1, p as u64 - 1)
}

/// All compositions of `w` into `p` parts, in reverse-lexicographic order
/// (the first one is `(w, 0, ..., 0)`).
pub fn enumerate_strategies(p: usize, w: u32) -> Result<Vec<Strategy>> {
    check_candidates(p)?;
    if w < 1 {
        return Err(DavError::InvalidParameters("card count must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(strategy_count(p, w).min(1 << 24) as usize);
    let mut current = vec![0u32; p];
    fill(&mut current, 0, w, &mut out);
    Ok(out)
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Strategy>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Strategy { counts: current.clone() });
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        fill(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

/// Candidates attaining the maximum of `z`. Never empty for non-empty `z`.
pub fn argmax_set(z: &[u32]) -> CandidateSet {
    let max = z.iter().copied().max().unwrap_or(0);
    z.iter()
        .enumerate()
        .filter(|&(_, &v)| v == max)
        .map(|(i, _)| Candidate(i))
        .collect()
}

/// `argmax_set` with an explicit length check against `p`.
pub fn argmax_checked(z: &[u32], p: usize) -> Result<CandidateSet> {
    if z.len() != p {
        return Err(DavError::LengthMismatch { expected: p, found: z.len() });
    }
    Ok(argmax_set(z))
}

/// Winners of the combined vote `x + y`.
pub fn argmax_sum(x: &Strategy, y: &Strategy) -> CandidateSet {
    debug_assert_eq!(x.counts.len(), y.counts.len());
    let mut max = 0;
    let mut set = 0u64;
    for (i, (a, b)) in x.counts.iter().zip(&y.counts).enumerate() {
        let v = a + b;
        if v > max || i == 0 {
            max = v;
            set = 1 << i;
        } else if v == max {
            set |= 1 << i;
        }
    }
    CandidateSet(set)
}

/// Candidates attaining the maximum of the signed difference `x - y`.
pub fn argmax_difference(x: &Strategy, y: &Strategy) -> CandidateSet {
    let diffs: Vec<i64> = x.counts.iter().zip(&y.counts).map(|(&a, &b)| a as i64 - b as i64).collect();
    let max = diffs.iter().copied().max().unwrap_or(0);
    diffs
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d == max)
        .map(|(i, _)| Candidate(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(v: &[Strategy]) -> Vec<Vec<u32>> {
        v.iter().map(|s| s.counts().to_vec()).collect()
    }

    #[test]
    fn two_candidates_three_cards() {
        let x = enumerate_strategies(2, 3).unwrap();
        assert_eq!(counts(&x), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
    }

    #[test]
    fn unit_vectors() {
        let x = enumerate_strategies(2, 1).unwrap();
        assert_eq!(counts(&x), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn three_candidates_two_cards() {
        let x = enumerate_strategies(3, 2).unwrap();
        assert_eq!(x.len(), 6);
        assert_eq!(x[0].counts(), &[2, 0, 0]);
        assert_eq!(x[5].counts(), &[0, 0, 2]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(enumerate_strategies(1, 3).is_err());
        assert!(enumerate_strategies(3, 0).is_err());
        assert!(enumerate_strategies(65, 1).is_err());
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax_set(&[3, 3]), [Candidate(0), Candidate(1)].into_iter().collect());
        assert_eq!(argmax_set(&[2, 2, 2]), CandidateSet::full(3));
        assert_eq!(argmax_set(&[5, 1]), CandidateSet::singleton(Candidate(0)));
        assert!(argmax_checked(&[1, 2, 3], 2).is_err());
    }

    #[test]
    fn argmax_sum_matches_argmax_set() {
        for x in enumerate_strategies(3, 3).unwrap() {
            for y in enumerate_strategies(3, 2).unwrap() {
                let z: Vec<u32> = x.counts().iter().zip(y.counts()).map(|(a, b)| a + b).collect();
                assert_eq!(argmax_sum(&x, &y), argmax_set(&z));
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(strategy_count(2, 60), 61);
    }

    #[test]
    fn set_ops() {
        let s: CandidateSet = [Candidate(1), Candidate(4)].into_iter().collect();
        assert_eq!(s.len(), 2);
        assert_eq!(s.first(), Some(Candidate(1)));
        assert_eq!(s.last(), Some(Candidate(4)));
        assert!(s.contains(Candidate(4)) && !s.contains(Candidate(0)));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![Candidate(1), Candidate(4)]);
        assert!(CandidateSet::singleton(Candidate(1)).is_subset(s));
    }
}
