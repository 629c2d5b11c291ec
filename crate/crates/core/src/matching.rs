//! Maximum bipartite matching by repeated augmenting paths.
//!
//! Left vertices are `0..adjacency.len()`, right vertices `0..right`. Each
//! phase searches one augmenting path from a free left vertex, so the whole
//! run is `O(V * E)`; for the dense `l x l` graphs built by the recognizers
//! that is `O(l^3)`.

/// A matching: `left[u]` is the right partner of `u`, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }

    /// Whether every left and every right vertex is matched.
    pub fn is_perfect(&self) -> bool {
        self.left.len() == self.right.len() && self.left.iter().all(Option::is_some)
    }
}

/// A maximum matching. Deterministic: left vertices are processed in order
/// and edges are tried in adjacency order.
pub fn maximum_matching(adjacency: &[Vec<usize>], right: usize) -> Matching {
    let mut left_match = vec![None; adjacency.len()];
    let mut right_match: Vec<Option<usize>> = vec![None; right];
    let mut visited = vec![0usize; right];
    for u in 0..adjacency.len() {
        // stamp u + 1 marks right vertices visited during this phase
        augment(u, u + 1, adjacency, &mut left_match, &mut right_match, &mut visited);
    }
    Matching { left: left_match, right: right_match }
}

fn augment(
    root: usize,
    stamp: usize,
    adjacency: &[Vec<usize>],
    left_match: &mut [Option<usize>],
    right_match: &mut [Option<usize>],
    visited: &mut [usize],
) -> bool {
    // Iterative DFS over alternating paths; `stack` holds (left vertex, next edge).
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    let mut via: Vec<usize> = Vec::new();
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        if *next == adjacency[u].len() {
            stack.pop();
            via.pop();
            continue;
        }
        let v = adjacency[u][*next];
        *next += 1;
        if visited[v] == stamp {
            continue;
        }
        visited[v] = stamp;
        via.push(v);
        match right_match[v] {
            None => {
                // flip the path
                for (&(l, _), &r) in stack.iter().zip(&via) {
                    left_match[l] = Some(r);
                    right_match[r] = Some(l);
                }
                return true;
            }
            Some(w) => stack.push((w, 0)),
        }
    }
    false
}

/// Number of perfect matchings, counting stops at `cap`. Exhaustive; meant
/// for small graphs.
pub fn count_perfect_matchings(adjacency: &[Vec<usize>], right: usize, cap: usize) -> usize {
    if adjacency.len() != right {
        return 0;
    }
    let mut used = vec![false; right];
    let mut count = 0;
    count_from(0, adjacency, &mut used, &mut count, cap);
    count
}

fn count_from(u: usize, adjacency: &[Vec<usize>], used: &mut [bool], count: &mut usize, cap: usize) {
    if *count >= cap {
        return;
    }
    if u == adjacency.len() {
        *count += 1;
        return;
    }
    for &v in &adjacency[u] {
        if !used[v] {
            used[v] = true;
            count_from(u + 1, adjacency, used, count, cap);
            used[v] = false;
        }
    }
}
