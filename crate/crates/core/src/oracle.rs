//! Brute-force ground truth for tests.
//!
//! Nothing here calls the fast paths: admissibility is checked through the
//! cyclic inequality on every array of edges, faces come from exhaustive
//! forest enumeration, and transport from exhaustive unit plans. Every
//! routine has a hard size budget.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::DirectedEdgeSet;
use crate::metric::MetricSpace;
use crate::norms::SignedMeasure;
use crate::rational::Rational;

pub const ADMISSIBLE_POINT_BUDGET: usize = 7;
pub const FACES_POINT_BUDGET: usize = 5;
pub const TRANSPORT_UNIT_BUDGET: usize = 8;

/// Verdicts of the cyclic inequality under two readings of which arrays count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteAdmissibility {
    /// Tails pairwise distinct and heads pairwise distinct; a tail may
    /// coincide with a head.
    pub overlapping: bool,
    /// All `2k` endpoints mutually distinct.
    pub disjoint: bool,
}

impl BruteAdmissibility {
    pub fn readings_agree(&self) -> bool {
        self.overlapping == self.disjoint
    }
}

struct CyclicSearch<'a> {
    ms: &'a MetricSpace,
    edges: Vec<(usize, usize)>,
    disjoint: bool,
}

impl CyclicSearch<'_> {
    /// True if some array violates `sum rho(x_i, y_i) <= sum rho(x_i, y_{i+1})`.
    fn violated(&self) -> bool {
        let k = self.ms.n_points();
        let mut used_tail = vec![false; k];
        let mut used_head = vec![false; k];
        let mut used_any = vec![false; k];
        (0..self.edges.len()).any(|first| {
            let (x, y) = self.edges[first];
            used_tail[x] = true;
            used_head[y] = true;
            used_any[x] = true;
            used_any[y] = true;
            let hit = self.extend(
                first,
                first,
                self.ms.dist(x, y).clone(),
                Rational::zero(),
                &mut used_tail,
                &mut used_head,
                &mut used_any,
            );
            used_tail[x] = false;
            used_head[y] = false;
            used_any[x] = false;
            used_any[y] = false;
            hit
        })
    }

    /// `first` is the smallest edge index in the array (fixes the rotation),
    /// `last` the most recent one; `direct` is `sum rho(x_i, y_i)` and
    /// `shifted` is `sum_{i<k} rho(x_i, y_{i+1})` so far.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        first: usize,
        last: usize,
        direct: Rational,
        shifted: Rational,
        used_tail: &mut [bool],
        used_head: &mut [bool],
        used_any: &mut [bool],
    ) -> bool {
        let (x_last, _) = self.edges[last];
        let (_, y_first) = self.edges[first];
        if direct > &shifted + self.ms.dist(x_last, y_first) {
            return true;
        }
        for next in first + 1..self.edges.len() {
            let (x, y) = self.edges[next];
            let clash = if self.disjoint {
                used_any[x] || used_any[y]
            } else {
                used_tail[x] || used_head[y]
            };
            if clash {
                continue;
            }
            used_tail[x] = true;
            used_head[y] = true;
            used_any[x] = true;
            used_any[y] = true;
            let hit = self.extend(
                first,
                next,
                &direct + self.ms.dist(x, y),
                &shifted + self.ms.dist(x_last, y),
                used_tail,
                used_head,
                used_any,
            );
            used_tail[x] = false;
            used_head[y] = false;
            used_any[x] = false;
            used_any[y] = false;
            if hit {
                return true;
            }
        }
        false
    }
}

fn check_budget(ms: &MetricSpace, g: &DirectedEdgeSet) -> Result<()> {
    if ms.n_points() > ADMISSIBLE_POINT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "brute admissibility is limited to {ADMISSIBLE_POINT_BUDGET} points"
        )));
    }
    g.check_points(ms.n_points())
}

/// Both readings of the cyclic-inequality criterion.
pub fn brute_admissible_report(
    ms: &MetricSpace,
    g: &DirectedEdgeSet,
) -> Result<BruteAdmissibility> {
    check_budget(ms, g)?;
    let edges: Vec<(usize, usize)> = g.iter().collect();
    let overlapping = !CyclicSearch {
        ms,
        edges: edges.clone(),
        disjoint: false,
    }
    .violated();
    let disjoint = !CyclicSearch {
        ms,
        edges,
        disjoint: true,
    }
    .violated();
    Ok(BruteAdmissibility {
        overlapping,
        disjoint,
    })
}

/// Admissibility by the cyclic inequality over arrays with distinct tails and
/// distinct heads (a tail may also be a head).
pub fn brute_admissible(ms: &MetricSpace, g: &DirectedEdgeSet) -> Result<bool> {
    Ok(brute_admissible_report(ms, g)?.overlapping)
}

/// Faces found by exhaustive search, keyed by dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BruteFaces {
    pub by_dim: BTreeMap<i64, Vec<DirectedEdgeSet>>,
}

impl BruteFaces {
    /// Counts for dimensions `0..n`.
    pub fn counts(&self, n: usize) -> Vec<usize> {
        (0..n as i64)
            .map(|d| self.by_dim.get(&d).map_or(0, Vec::len))
            .collect()
    }

    pub fn facets(&self, n: usize) -> Vec<DirectedEdgeSet> {
        self.by_dim
            .get(&(n as i64 - 1))
            .cloned()
            .unwrap_or_default()
    }
}

fn own_components(n_points: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n_points];
    let mut next = 0;
    for start in 0..n_points {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = next;
        while let Some(v) = stack.pop() {
            for &(a, b) in edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// Every properly oriented forest that passes [`brute_admissible`].
pub fn brute_faces(ms: &MetricSpace) -> Result<BruteFaces> {
    let k = ms.n_points();
    if k > FACES_POINT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "brute faces are limited to {FACES_POINT_BUDGET} points"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect();
    let mut out = BruteFaces::default();
    for subset in 0u64..(1 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let label = own_components(k, &chosen);
        let components = label.iter().max().map_or(0, |m| m + 1);
        if chosen.len() + components != k {
            continue; // has a cycle
        }
        // Two-colour each vertex by parity of its distance to the component root.
        let mut colour = vec![usize::MAX; k];
        for root in 0..k {
            if colour[root] != usize::MAX {
                continue;
            }
            colour[root] = 0;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(a, b) in &chosen {
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if colour[w] == usize::MAX {
                        colour[w] = 1 - colour[v];
                        stack.push(w);
                    }
                }
            }
        }
        // Each non-trivial component points colour 0 -> 1 or 1 -> 0.
        let nontrivial: Vec<usize> = {
            let mut c: Vec<usize> = chosen.iter().map(|&(a, _)| label[a]).collect();
            c.sort_unstable();
            c.dedup();
            c
        };
        for flips in 0u32..(1 << nontrivial.len()) {
            let mut g = DirectedEdgeSet::new();
            for &(a, b) in &chosen {
                let comp = nontrivial
                    .iter()
                    .position(|&c| c == label[a])
                    .expect("listed");
                let flip = flips >> comp & 1 == 1;
                let a_is_tail = (colour[a] == 0) != flip;
                let (x, y) = if a_is_tail { (a, b) } else { (b, a) };
                g.insert(x, y)?;
            }
            if brute_admissible(ms, &g)? {
                let dim = (k - 1) as i64 - components as i64;
                out.by_dim.entry(dim).or_default().push(g);
            }
        }
    }
    for faces in out.by_dim.values_mut() {
        faces.sort();
    }
    Ok(out)
}

/// Minimum cost over every matching of unit masses.
pub fn brute_transport(ms: &MetricSpace, mu: &SignedMeasure) -> Result<Rational> {
    let coeffs = mu.coeffs();
    if coeffs.len() != ms.n_points() {
        return Err(Error::DimensionMismatch {
            expected: ms.n_points(),
            found: coeffs.len(),
        });
    }
    let lcd = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut supply = Vec::new();
    let mut demand = Vec::new();
    for (p, c) in coeffs.iter().enumerate() {
        let units = (c * Rational::from_integer(lcd.clone())).to_integer();
        let count = units.abs().to_usize().unwrap_or(usize::MAX);
        if count > TRANSPORT_UNIT_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "brute transport is limited to {TRANSPORT_UNIT_BUDGET} units"
            )));
        }
        let side = if units.is_positive() {
            &mut supply
        } else {
            &mut demand
        };
        side.extend(std::iter::repeat_n(p, count));
    }
    if supply.len() != demand.len() {
        return Err(Error::NotBalanced(
            coeffs.iter().fold(Rational::zero(), |a, c| a + c),
        ));
    }
    if supply.len() > TRANSPORT_UNIT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "brute transport is limited to {TRANSPORT_UNIT_BUDGET} units"
        )));
    }
    let mut best: Option<Rational> = None;
    let mut order = demand.clone();
    permute(&mut order, 0, &mut |perm| {
        let cost = supply
            .iter()
            .zip(perm)
            .fold(Rational::zero(), |acc, (&a, &b)| {
                if a == b {
                    acc
                } else {
                    acc + ms.dist(a, b)
                }
            });
        if best.as_ref().is_none_or(|b| cost < *b) {
            best = Some(cost);
        }
    });
    Ok(best.unwrap_or_else(Rational::zero) / Rational::from_integer(lcd))
}

fn permute(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}
