//! Lemma checkers and the parameter-grid sweep behind `dav validate-grid`.

use rayon::prelude::*;
use serde::Serialize;

use crate::distinctness::{
    all_forms_rows_distinct, all_forms_rows_distinct_direct, correspondence_rows_distinct,
    correspondence_rows_distinct_direct, neighbor_reduction_check, PairScope, DEFAULT_DIRECT_GUARD,
};
use crate::error::{DavError, Result};
use crate::recognizer::{b_set, recognize_correspondence};
use crate::strategy::{argmax_sum, binomial, enumerate_strategies, strategy_count, Strategy};
use crate::tableau::{generate_correspondence, signature_against};

/// Pairs of distinct strategies sharing a signature against weight-`beta`
/// columns. Empty whenever `beta >= alpha - 1`.
pub fn signature_collisions(p: usize, alpha: u32, beta: u32) -> Result<Vec<(Strategy, Strategy)>> {
    let xs = enumerate_strategies(p, alpha)?;
    let ys = enumerate_strategies(p, beta)?;
    let sigs: Vec<_> = xs.iter().map(|x| signature_against(x, &ys)).collect();
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if sigs[i] == sigs[j] {
                out.push((xs[i].clone(), xs[j].clone()));
            }
        }
    }
    Ok(out)
}

/// Outcome of the U/L comparison for one ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlViolation {
    pub x: Strategy,
    pub x2: Strategy,
    pub upper: usize,
    pub lower: usize,
    pub contained: bool,
}

/// For every ordered pair `x != x2` with `B = B(x, x2)`, compare
/// `U(x2, B)` against `L(x, B)`. Reports pairs where `|U| >= |L|` or
/// `U` is not contained in `L`.
pub fn ul_violations(p: usize, alpha: u32, beta: u32) -> Result<Vec<UlViolation>> {
    let xs = enumerate_strategies(p, alpha)?;
    let ys = enumerate_strategies(p, beta)?;
    let winners: Vec<Vec<_>> = xs.iter().map(|x| ys.iter().map(|y| argmax_sum(x, y)).collect()).collect();
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if i == j {
                continue;
            }
            let b = b_set(&xs[i], &xs[j])?;
            let in_l: Vec<bool> = winners[i].iter().map(|w| w.is_subset(b)).collect();
            let in_u: Vec<bool> = winners[j].iter().map(|w| w.intersects(b)).collect();
            let lower = in_l.iter().filter(|&&v| v).count();
            let upper = in_u.iter().filter(|&&v| v).count();
            let contained = in_u.iter().zip(&in_l).all(|(&u, &l)| !u || l);
            if upper >= lower || !contained {
                out.push(UlViolation { x: xs[i].clone(), x2: xs[j].clone(), upper, lower, contained });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub cases: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GridReport {
    pub pmax: usize,
    pub wmax: u32,
    pub checks: Vec<CheckSummary>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn outcome(ok: Result<bool>, describe: impl FnOnce() -> String) -> Outcome {
    match ok {
        Ok(true) => Outcome::Pass,
        Ok(false) => Outcome::Fail(describe()),
        Err(DavError::SizeGuard { .. }) => Outcome::Skip,
        Err(e) => Outcome::Fail(format!("{}: {e}", describe())),
    }
}

type Point = (usize, u32, u32);

fn sweep(name: &'static str, points: &[Point], check: impl Fn(Point) -> Outcome + Sync) -> CheckSummary {
    let results: Vec<Outcome> = points.par_iter().map(|&pt| check(pt)).collect();
    let mut s = CheckSummary { name, cases: 0, skipped: 0, failures: Vec::new() };
    for r in results {
        match r {
            Outcome::Pass => s.cases += 1,
            Outcome::Skip => s.skipped += 1,
            Outcome::Fail(m) => {
                s.cases += 1;
                s.failures.push(m);
            }
        }
    }
    s
}

/// Run every invariant over `p in 2..=pmax`, `alpha, beta in 1..=wmax`.
/// Points whose direct computation exceeds the size guard are skipped.
pub fn validate_grid(pmax: usize, wmax: u32) -> Result<GridReport> {
    if pmax < 2 || wmax < 1 {
        return Err(DavError::InvalidParameters(format!("need pmax >= 2 and wmax >= 1, got {pmax}, {wmax}")));
    }
    crate::strategy::check_candidates(pmax)?;
    let points: Vec<Point> =
        (2..=pmax).flat_map(|p| (1..=wmax).flat_map(move |a| (1..=wmax).map(move |b| (p, a, b)))).collect();
    let small = |&(p, a, b): &Point| {
        let k = strategy_count(p, a);
        k * k * strategy_count(p, b) <= DEFAULT_DIRECT_GUARD
    };
    let guarded: Vec<Point> = points.iter().copied().filter(small).collect();
    let describe = |(p, a, b): Point| format!("p={p} alpha={a} beta={b}");
    let mut checks = Vec::new();

    checks.push(sweep("strategy-count", &points, |(p, a, _)| {
        let n = strategy_count(p, a);
        let ok = enumerate_strategies(p, a).map(|xs| {
            xs.len() as u128 == n
                && n == binomial(a as u64 + p as u64 - 1, p as u64 - 1)
                && xs.iter().all(|x| x.weight() == a)
                && xs.windows(2).all(|w| w[0].counts() > w[1].counts())
        });
        outcome(ok, || describe((p, a, 0)))
    }));

    checks.push(sweep("correspondence-signatures", &guarded, |(p, a, b)| {
        let ok = (|| {
            let h = generate_correspondence(p, a, b)?;
            let xs = enumerate_strategies(p, a)?;
            let ys = enumerate_strategies(p, b)?;
            Ok(xs.iter().enumerate().all(|(i, x)| h.row_signature(i) == signature_against(x, &ys)))
        })();
        outcome(ok, || describe((p, a, b)))
    }));

    checks.push(sweep("distinct-signatures", &guarded, |(p, a, b)| {
        if b + 1 < a {
            return Outcome::Pass;
        }
        outcome(signature_collisions(p, a, b).map(|c| c.is_empty()), || describe((p, a, b)))
    }));

    checks.push(sweep("correspondence-distinct-rows", &guarded, |(p, a, b)| {
        let ok = correspondence_rows_distinct(p, a, b)
            .and_then(|c| correspondence_rows_distinct_direct(p, a, b).map(|d| c == d));
        outcome(ok, || describe((p, a, b)))
    }));

    checks.push(sweep("forms-distinct-rows", &guarded, |(p, a, b)| {
        let ok = (|| {
            let closed = all_forms_rows_distinct(p, a, b)?;
            let all = all_forms_rows_distinct_direct(p, a, b, PairScope::AllPairs, DEFAULT_DIRECT_GUARD)?;
            let near = all_forms_rows_distinct_direct(p, a, b, PairScope::Neighbors, DEFAULT_DIRECT_GUARD)?;
            Ok(closed == all.distinct && all.distinct == near.distinct)
        })();
        outcome(ok, || describe((p, a, b)))
    }));

    checks.push(sweep("card-move-reduction", &guarded, |(p, a, b)| {
        outcome(neighbor_reduction_check(p, a, b).map(|r| r.holds()), || describe((p, a, b)))
    }));

    let ul_points: Vec<Point> =
        guarded.iter().copied().filter(|&(p, a, b)| p >= 3 && b == 2 * a).collect();
    checks.push(sweep("u-below-l", &ul_points, |(p, a, b)| {
        outcome(ul_violations(p, a, b).map(|v| v.is_empty()), || describe((p, a, b)))
    }));

    let round_trip: Vec<Point> = guarded
        .iter()
        .copied()
        .filter(|&(p, a, b)| strategy_count(p, a) * strategy_count(p, b) <= 4000)
        .collect();
    checks.push(sweep("correspondence-round-trip", &round_trip, |(p, a, b)| {
        let ok = generate_correspondence(p, a, b).map(|h| {
            let r = recognize_correspondence(&h);
            r.is_accepted() && r.labeling.as_ref().is_some_and(|l| h.regenerates(l))
        });
        outcome(ok, || describe((p, a, b)))
    }));

    Ok(GridReport { pmax, wmax, checks })
}
