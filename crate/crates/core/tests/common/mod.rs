// Naive reference implementations. Nothing here calls the library's
// enumeration, argmax or search code.
#![allow(dead_code)]

use dav::tableau::Cell;
use dav::Tableau;

/// All compositions of `w` into `p` parts, largest first lexicographically.
pub fn compositions(p: usize, w: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; p];
    loop {
        if v.iter().sum::<u32>() == w {
            out.push(v.clone());
        }
        let mut i = 0;
        while i < p && v[i] == w {
            v[i] = 0;
            i += 1;
        }
        if i == p {
            break;
        }
        v[i] += 1;
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn argmax(z: &[u32]) -> Vec<usize> {
    let m = *z.iter().max().unwrap();
    (0..z.len()).filter(|&i| z[i] == m).collect()
}

pub fn winners(x: &[u32], y: &[u32]) -> Vec<usize> {
    let z: Vec<u32> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    argmax(&z)
}

pub fn weight_for(count: usize, p: usize) -> Option<u32> {
    (1..=200u32).find(|&w| compositions_count(p, w) == count as u128)
}

pub fn compositions_count(p: usize, w: u32) -> u128 {
    // C(w + p - 1, p - 1) by Pascal's rule
    let n = w as usize + p - 1;
    let k = p - 1;
    let mut row = vec![1u128; 1];
    for i in 1..=n {
        let mut next = vec![1u128; i + 1];
        for j in 1..i {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    row[k]
}

/// Cells of `t` as sorted candidate lists.
pub fn cell_lists<T: Cell>(t: &Tableau<T>) -> Vec<Vec<Vec<usize>>> {
    (0..t.rows()).map(|i| (0..t.cols()).map(|j| t.get(i, j).support().iter().map(|c| c.0).collect()).collect()).collect()
}

fn fits(cell: &[usize], w: &[usize], exact: bool) -> bool {
    if exact {
        cell == w
    } else {
        cell.len() == 1 && w.contains(&cell[0])
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Brute-force DAV test: every row permutation of the strategies, then a
/// plain backtracking search for the columns. Only for tiny tableaux.
pub fn brute_force_dav(cells: &[Vec<Vec<usize>>], p: usize, exact: bool) -> bool {
    let k = cells.len();
    let l = cells[0].len();
    let present: std::collections::BTreeSet<usize> = cells.iter().flatten().flatten().copied().collect();
    if present.len() != p {
        return false;
    }
    let (Some(alpha), Some(beta)) = (weight_for(k, p), weight_for(l, p)) else { return false };
    let xs = compositions(p, alpha);
    let ys = compositions(p, beta);
    let table: Vec<Vec<Vec<usize>>> = xs.iter().map(|x| ys.iter().map(|y| winners(x, y)).collect()).collect();
    for perm in permutations(k) {
        // column j may take y when every row agrees
        let allowed: Vec<Vec<usize>> = (0..l)
            .map(|j| (0..ys.len()).filter(|&m| (0..k).all(|i| fits(&cells[i][j], &table[perm[i]][m], exact))).collect())
            .collect();
        if assign(&allowed, 0, &mut vec![false; ys.len()]) {
            return true;
        }
    }
    false
}

fn assign(allowed: &[Vec<usize>], j: usize, used: &mut Vec<bool>) -> bool {
    if j == allowed.len() {
        return true;
    }
    for &m in &allowed[j] {
        if !used[m] {
            used[m] = true;
            if assign(allowed, j + 1, used) {
                return true;
            }
            used[m] = false;
        }
    }
    false
}

/// Does the labeling (given as plain count vectors) reproduce `cells`?
pub fn regenerates(cells: &[Vec<Vec<usize>>], rows: &[Vec<u32>], cols: &[Vec<u32>], exact: bool) -> bool {
    let mut r = rows.to_vec();
    r.sort();
    r.dedup();
    let mut c = cols.to_vec();
    c.sort();
    c.dedup();
    let p = cells[0][0].iter().max().map_or(0, |_| rows[0].len());
    let uniform = |v: &[Vec<u32>]| v.iter().all(|x| x.len() == p && x.iter().sum::<u32>() == v[0].iter().sum::<u32>());
    uniform(rows)
        && uniform(cols)
        && r.len() == rows.len()
        && c.len() == cols.len()
        && compositions_count(p, rows[0].iter().sum()) == rows.len() as u128
        && compositions_count(p, cols[0].iter().sum()) == cols.len() as u128
        && cells.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, cell)| fits(cell, &winners(&rows[i], &cols[j]), exact)))
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn permutation<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
