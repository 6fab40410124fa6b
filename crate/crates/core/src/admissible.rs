//! Admissibility of directed graphs, witness functions and genericity.
//!
//! A directed edge set `E` is admissible when some 1-Lipschitz function `f`
//! satisfies `f(x) - f(y) = rho(x, y)` on every edge. That is a system of
//! difference constraints, decided here by Bellman-Ford over exact
//! rationals: `f(b) <= f(a) + rho(a, b)` for every ordered pair and
//! `f(y) <= f(x) - rho(x, y)` for every edge.

use num_traits::Zero;
use serde::Serialize;

use crate::assignment::min_cost_assignment;
use crate::error::{Error, Result, TieWitness};
use crate::graph::DirectedEdgeSet;
use crate::metric::MetricSpace;
use crate::parallel;
use crate::rational::Rational;

/// Largest point count for which genericity is certified by enumeration.
pub const GENERICITY_POINT_LIMIT: usize = 10;

/// A function on the points, zero at `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessFunction {
    #[serde(serialize_with = "crate::io::serialize_rationals")]
    pub values: Vec<Rational>,
    #[serde(skip)]
    pub base: usize,
}

impl WitnessFunction {
    /// Lipschitz constant at most 1 and tight on every edge of `g`.
    pub fn certifies(&self, ms: &MetricSpace, g: &DirectedEdgeSet) -> bool {
        let k = ms.n_points();
        let lipschitz = (0..k)
            .all(|x| (0..k).all(|y| x == y || &self.values[x] - &self.values[y] <= *ms.dist(x, y)));
        let tight = g
            .iter()
            .all(|(x, y)| &self.values[x] - &self.values[y] == *ms.dist(x, y));
        lipschitz && tight && self.values[self.base].is_zero()
    }
}

/// Shortest-path potentials for the constraint system, or `None` on a
/// negative cycle.
fn potentials(ms: &MetricSpace, g: &DirectedEdgeSet) -> Option<Vec<Rational>> {
    let k = ms.n_points();
    let mut arcs: Vec<(usize, usize, Rational)> = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in (0..k).filter(|&b| b != a) {
            let w = if g.contains(a, b) {
                -ms.dist(a, b).clone()
            } else {
                ms.dist(a, b).clone()
            };
            arcs.push((a, b, w));
        }
    }
    let mut d = vec![Rational::zero(); k];
    for round in 0..=k {
        let mut changed = false;
        for (a, b, w) in &arcs {
            let cand = &d[*a] + w;
            if cand < d[*b] {
                d[*b] = cand;
                changed = true;
            }
        }
        if !changed {
            return Some(d);
        }
        if round == k {
            break;
        }
    }
    None
}

pub fn is_admissible(ms: &MetricSpace, g: &DirectedEdgeSet) -> Result<bool> {
    g.check_points(ms.n_points())?;
    Ok(potentials(ms, g).is_some())
}

/// A 1-Lipschitz function, zero at `base`, tight on every edge of `g`.
///
/// For a spanning tree this is the unique such function.
pub fn witness_function(
    ms: &MetricSpace,
    g: &DirectedEdgeSet,
    base: usize,
) -> Result<WitnessFunction> {
    g.check_points(ms.n_points())?;
    if base >= ms.n_points() {
        return Err(Error::UnknownPoint(base));
    }
    let d = potentials(ms, g).ok_or(Error::NotAdmissible)?;
    let shift = d[base].clone();
    Ok(WitnessFunction {
        values: d.into_iter().map(|v| v - &shift).collect(),
        base,
    })
}

fn check_tree_shape(ms: &MetricSpace, t: &DirectedEdgeSet) -> Result<()> {
    let k = ms.n_points();
    t.check_points(k)?;
    if let Some(p) = t.orientation_conflict(k) {
        return Err(Error::BadOrientation(p));
    }
    if !t.is_forest() {
        return Err(Error::NotATree("the undirected view has a cycle".into()));
    }
    let mut support: Vec<usize> = t.iter().flat_map(|(x, y)| [x, y]).collect();
    support.sort_unstable();
    support.dedup();
    if !t.is_empty() && t.len() + 1 != support.len() {
        return Err(Error::NotATree(
            "the undirected view is disconnected".into(),
        ));
    }
    Ok(())
}

/// Path criterion for properly oriented trees.
///
/// For every simple tree path `y1 x1 y2 x2 ... yk xk` from a head to a tail
/// the alternating sum of tree edges must not exceed the closing pair:
/// `sum rho(xi, yi) - sum_{i<k} rho(xi, y_{i+1}) <= rho(xk, y1)`.
pub fn tree_admissible_fast(ms: &MetricSpace, t: &DirectedEdgeSet) -> Result<bool> {
    check_tree_shape(ms, t)?;
    let k = ms.n_points();
    let adj = t.neighbors(k);
    let heads = t.indegrees(k);
    for start in (0..k).filter(|&p| heads[p] > 0) {
        // (vertex, parent, signed sum so far, steps taken)
        let mut stack: Vec<(usize, usize, Rational, usize)> =
            vec![(start, usize::MAX, Rational::zero(), 0)];
        while let Some((v, parent, acc, steps)) = stack.pop() {
            if steps % 2 == 1 && acc > *ms.dist(v, start) {
                return Ok(false);
            }
            for &w in adj[v].iter().filter(|&&w| w != parent) {
                let len = ms.dist(v, w);
                let next = if steps % 2 == 0 {
                    &acc + len
                } else {
                    &acc - len
                };
                stack.push((w, v, next, steps + 1));
            }
        }
    }
    Ok(true)
}

/// Outcome of the genericity enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    /// First tied configuration in lexicographic order, if any.
    pub tie: Option<TieWitness>,
    pub configurations_checked: usize,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.tie.is_none()
    }
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in k_subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Unordered pairs of disjoint `k`-subsets, `2 <= k`, `2k <= n_points`, in
/// lexicographic order with the smaller minimum first.
pub(crate) fn disjoint_configurations(n_points: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let all: Vec<usize> = (0..n_points).collect();
    let mut out = Vec::new();
    for k in 2..=n_points / 2 {
        for a in k_subsets(&all, k) {
            let rest: Vec<usize> = all
                .iter()
                .copied()
                .filter(|p| !a.contains(p) && *p > a[0])
                .collect();
            for b in k_subsets(&rest, k) {
                out.push((a.clone(), b));
            }
        }
    }
    out
}

pub(crate) fn compute_genericity(ms: &MetricSpace) -> Result<GenericityReport> {
    if !ms.is_strict() {
        return Err(Error::NotStrict);
    }
    if ms.n_points() > GENERICITY_POINT_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "genericity is certified by enumeration only up to {GENERICITY_POINT_LIMIT} points"
        )));
    }
    let configs = disjoint_configurations(ms.n_points());
    let tie = parallel::par_find_first(&configs, |(a, b)| {
        let cost: Vec<Vec<Rational>> = a
            .iter()
            .map(|&x| b.iter().map(|&y| ms.dist(x, y).clone()).collect())
            .collect();
        let r = min_cost_assignment(&cost).expect("square matrix");
        r.tie_witness.map(|other| TieWitness {
            first: a.iter().zip(&r.optimal).map(|(&x, &j)| (x, b[j])).collect(),
            second: a.iter().zip(&other).map(|(&x, &j)| (x, b[j])).collect(),
        })
    });
    Ok(GenericityReport {
        tie,
        configurations_checked: configs.len(),
    })
}

/// Exact genericity certificate for a strict metric (cached on the metric).
pub fn is_generic(ms: &MetricSpace) -> Result<GenericityReport> {
    ms.genericity().cloned()
}
