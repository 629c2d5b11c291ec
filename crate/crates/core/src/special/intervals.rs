use std::collections::HashMap;

use crate::recognizer::{bipartite_column_matching, finish, precheck, Method, RecognitionResult};
use crate::strategy::Strategy;
use crate::tableau::{Form, Labeling};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalRole {
    /// A candidate outside the row's pair.
    Outsider,
    /// One of the two candidates of an `ab` row.
    PairMember,
    /// The candidate of an `aa` row.
    SamePair,
}

/// Closed range of occurrence counts a candidate may have in a row of an
/// `alpha = beta = 2` DAV form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountInterval {
    pub low: usize,
    pub high: usize,
    pub role: IntervalRole,
}

impl CountInterval {
    pub fn contains(&self, n: usize) -> bool {
        self.low <= n && n <= self.high
    }
}

/// The outsider, pair-member and same-pair intervals for `p >= 3`
/// candidates, in that order. They are pairwise disjoint.
pub fn count_intervals(p: usize) -> [CountInterval; 3] {
    assert!(p >= 3, "count intervals need p >= 3");
    [
        CountInterval { low: 1, high: p - 2, role: IntervalRole::Outsider },
        CountInterval { low: p - 1, high: (p * p - 3 * p + 6) / 2, role: IntervalRole::PairMember },
        CountInterval { low: (p * p - p + 2) / 2, high: p * (p + 1) / 2, role: IntervalRole::SamePair },
    ]
}

fn show(iv: &CountInterval) -> String {
    format!("[{}, {}]", iv.low, iv.high)
}

/// Recognize an `alpha = beta = 2` form over `p >= 3` candidates by
/// classifying each row from its occurrence counts, then labeling columns by
/// a membership matching.
pub fn recognize_form_2_2(g: &Form) -> RecognitionResult {
    let method = Method::CountingIntervals;
    let p = g.candidates();
    match precheck(g) {
        Ok((2, 2)) if p >= 3 => {}
        Ok((alpha, beta)) => {
            return RecognitionResult::rejected(
                method,
                format!("counting intervals need alpha = beta = 2 and p >= 3, got p={p}, alpha={alpha}, beta={beta}"),
            )
        }
        Err(w) => return RecognitionResult::rejected(method, w),
    }
    let [outsider, member, same] = count_intervals(p);

    let mut owner: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut rows = Vec::with_capacity(g.rows());
    for i in 0..g.rows() {
        let sig = g.row_signature(i);
        let counts = sig.counts();
        let top = (0..p).max_by_key(|&c| (counts[c], std::cmp::Reverse(c))).expect("p >= 3");
        let m = counts[top];
        let mut label = vec![0u32; p];
        if same.contains(m) {
            if let Some(c) = (0..p).find(|&c| c != top && counts[c] > 1) {
                return RecognitionResult::rejected(
                    method,
                    format!("row {i}: #{top} occurs {m} times (pair aa) but #{c} occurs {} > 1 times", counts[c]),
                );
            }
            label[top] = 2;
        } else if member.contains(m) {
            let pair: Vec<usize> = (0..p).filter(|&c| member.contains(counts[c])).collect();
            if pair.len() != 2 {
                return RecognitionResult::rejected(
                    method,
                    format!("row {i}: {} candidates have counts in {}, expected 2", pair.len(), show(&member)),
                );
            }
            if let Some(c) = (0..p).find(|&c| !pair.contains(&c) && !outsider.contains(counts[c])) {
                return RecognitionResult::rejected(
                    method,
                    format!("row {i}: #{c} occurs {} times, outside {}", counts[c], show(&outsider)),
                );
            }
            label[pair[0]] = 1;
            label[pair[1]] = 1;
        } else {
            return RecognitionResult::rejected(
                method,
                format!(
                    "row {i}: most frequent candidate #{} occurs {m} times, outside {} and {}",
                    top,
                    show(&member),
                    show(&same)
                ),
            );
        }
        if let Some(prev) = owner.insert(label.clone(), i) {
            return RecognitionResult::rejected(
                method,
                format!("rows {prev} and {i} get the same label; labels must be used exactly once"),
            );
        }
        rows.push(Strategy::new(label).expect("weight 2"));
    }

    match bipartite_column_matching(g, &rows) {
        Ok(cols) => finish(g, method, Labeling { rows, cols }),
        Err(w) => RecognitionResult::rejected(method, w),
    }
}
