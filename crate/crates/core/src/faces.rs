//! Facets, faces and f-vectors of the Kantorovich-Rubinstein polytope.
//!
//! For a generic metric each facet corresponds to one outdegree sequence
//! `p` with `sum p = n`: the points with `p_i > 0` are white, the rest
//! black, and the facet graph is the unique admissible spanning tree
//! oriented white to black with those outdegrees. It is assembled as the
//! union, over white `u`, of the cheapest constellation in which `u` sends
//! `p_u` edges and every other white `x` sends `p_x - 1`.
//!
//! Generic polytopes are simplicial, so every subset of a facet's edge set
//! is a face and faces are identified with their edge sets.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::admissible::{tree_admissible_fast, witness_function, WitnessFunction};
use crate::assignment::min_cost_transportation;
use crate::error::{Error, Result, TieWitness};
use crate::graph::DirectedEdgeSet;
use crate::metric::MetricSpace;
use crate::parallel;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OutdegreeSequence(pub Vec<usize>);

impl OutdegreeSequence {
    pub fn m(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn whites(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub tree: DirectedEdgeSet,
    pub outdeg: OutdegreeSequence,
    /// The vertex of the Lipschitz polytope supporting this facet, zero at the last point.
    pub witness: WitnessFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub edges: DirectedEdgeSet,
    pub dim: i64,
}

/// A star forest with its total length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constellation {
    pub edges: DirectedEdgeSet,
    pub cost: Rational,
}

/// `n - c`, `c` the number of components of the undirected view counted over
/// all points. The empty set has dimension `-1`.
pub fn face_dimension(ms: &MetricSpace, g: &DirectedEdgeSet) -> Result<i64> {
    if !crate::admissible::is_admissible(ms, g)? {
        return Err(Error::NotAdmissible);
    }
    Ok(ms.dim() as i64 - g.component_count(ms.n_points()) as i64)
}

/// The cheapest graph in which white `whites[i]` sends `p[i]` edges and every
/// other point receives exactly one.
pub fn min_constellation(ms: &MetricSpace, whites: &[usize], p: &[usize]) -> Result<Constellation> {
    let k = ms.n_points();
    if whites.len() != p.len() {
        return Err(Error::ArityMismatch(format!(
            "{} white points but {} supplies",
            whites.len(),
            p.len()
        )));
    }
    if whites.len() + p.iter().sum::<usize>() != k {
        return Err(Error::ArityMismatch(format!(
            "{} white points plus {} edges must equal {} points",
            whites.len(),
            p.iter().sum::<usize>(),
            k
        )));
    }
    let mut is_white = vec![false; k];
    for &w in whites {
        if w >= k {
            return Err(Error::UnknownPoint(w));
        }
        if is_white[w] {
            return Err(Error::ArityMismatch(format!(
                "point {} listed twice",
                w + 1
            )));
        }
        is_white[w] = true;
    }
    let blacks: Vec<usize> = (0..k).filter(|&x| !is_white[x]).collect();
    let cost: Vec<Vec<Rational>> = whites
        .iter()
        .map(|&w| blacks.iter().map(|&b| ms.dist(w, b).clone()).collect())
        .collect();
    let r = min_cost_transportation(&cost, p)?;
    let to_edges = |plan: &[usize]| -> Vec<(usize, usize)> {
        plan.iter()
            .enumerate()
            .map(|(sink, &src)| (whites[src], blacks[sink]))
            .collect()
    };
    if let Some(other) = &r.tie_witness {
        return Err(Error::NotGeneric(TieWitness {
            first: to_edges(&r.plan),
            second: to_edges(other),
        }));
    }
    Ok(Constellation {
        edges: to_edges(&r.plan).into_iter().collect(),
        cost: r.value,
    })
}

/// The unique admissible spanning tree with outdegrees `p` (`sum p = n`).
pub fn build_facet_tree(ms: &MetricSpace, p: &OutdegreeSequence) -> Result<Facet> {
    let k = ms.n_points();
    if p.0.len() != k {
        return Err(Error::ArityMismatch(format!(
            "outdegree sequence has {} entries for {} points",
            p.0.len(),
            k
        )));
    }
    if p.m() != ms.dim() {
        return Err(Error::ArityMismatch(format!(
            "outdegrees sum to {} but a facet needs {}",
            p.m(),
            ms.dim()
        )));
    }
    if !ms.is_strict() {
        return Err(Error::NotStrict);
    }
    let whites = p.whites();
    let mut tree = DirectedEdgeSet::new();
    for &u in &whites {
        let supplies: Vec<usize> = whites
            .iter()
            .map(|&x| if x == u { p.0[x] } else { p.0[x] - 1 })
            .collect();
        tree = tree.union(&min_constellation(ms, &whites, &supplies)?.edges);
    }
    if tree.len() != ms.dim() || !tree.is_forest() || tree.outdegrees(k) != p.0 {
        return Err(Error::InternalContradiction(format!(
            "constellations for outdegrees {:?} do not form a tree: {tree}",
            p.0
        )));
    }
    if !tree_admissible_fast(ms, &tree)? {
        return Err(Error::InternalContradiction(format!(
            "tree {tree} fails the path criterion"
        )));
    }
    let witness = witness_function(ms, &tree, k - 1)?;
    Ok(Facet {
        tree,
        outdeg: p.clone(),
        witness,
    })
}

/// Compositions of `total` into `parts` non-negative parts, lexicographically ascending.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Every facet, one per outdegree sequence, sorted by outdegree sequence.
pub fn enumerate_facets(ms: &MetricSpace) -> Result<Vec<Facet>> {
    ms.require_generic()?;
    let seqs: Vec<OutdegreeSequence> = compositions(ms.dim(), ms.n_points())
        .into_iter()
        .map(OutdegreeSequence)
        .collect();
    parallel::try_par_map(&seqs, |p| build_facet_tree(ms, p))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// `(n+m)! / (m! m! (n-m)!)`, the face count of a generic polytope.
pub fn multinomial(n: u64, m: u64) -> BigUint {
    assert!(m <= n);
    binomial(n + m, m) * binomial(n, m)
}

/// All faces of the polytope, grouped by number of edges.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    n_points: usize,
    /// `by_edges[m]` holds the faces with `m` edges (dimension `m - 1`), sorted.
    pub by_edges: Vec<Vec<DirectedEdgeSet>>,
}

impl FaceLattice {
    /// Entry `m` counts faces with `m` edges. Entry 0 is the empty edge set,
    /// i.e. the whole Lipschitz polytope.
    pub fn f_vector(&self) -> Vec<u64> {
        self.by_edges.iter().map(|v| v.len() as u64).collect()
    }

    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.by_edges.iter().enumerate().flat_map(|(m, faces)| {
            faces.iter().map(move |e| Face {
                edges: e.clone(),
                dim: m as i64 - 1,
            })
        })
    }

    pub fn with_outdegrees(&self, p: &OutdegreeSequence) -> Vec<DirectedEdgeSet> {
        self.by_edges
            .get(p.m())
            .map(|faces| {
                faces
                    .iter()
                    .filter(|e| e.outdegrees(self.n_points) == p.0)
                    .cloned()
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Builds the face lattice from the facets.
pub fn face_lattice(ms: &MetricSpace) -> Result<FaceLattice> {
    let facets = enumerate_facets(ms)?;
    Ok(face_lattice_from_facets(ms.n_points(), &facets))
}

pub fn face_lattice_from_facets(n_points: usize, facets: &[Facet]) -> FaceLattice {
    let mut seen: HashSet<u128> = HashSet::new();
    for facet in facets {
        let edges: Vec<u128> = facet
            .tree
            .iter()
            .map(|(x, y)| 1u128 << (x * n_points + y))
            .collect();
        for subset in 0u32..(1 << edges.len()) {
            let mask = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| subset >> i & 1 == 1)
                .fold(0u128, |m, (_, b)| m | b);
            seen.insert(mask);
        }
    }
    let mut by_edges: Vec<Vec<DirectedEdgeSet>> = vec![Vec::new(); n_points];
    for mask in seen {
        by_edges[mask.count_ones() as usize].push(DirectedEdgeSet::from_mask(mask, n_points));
    }
    for faces in &mut by_edges {
        faces.sort();
    }
    FaceLattice { n_points, by_edges }
}

/// Measured f-vector, checked against `(n+m)! / (m! m! (n-m)!)`.
pub fn f_vector(ms: &MetricSpace) -> Result<Vec<u64>> {
    let counts = face_lattice(ms)?.f_vector();
    check_f_vector(ms.dim(), &counts)?;
    Ok(counts)
}

pub(crate) fn check_f_vector(n: usize, counts: &[u64]) -> Result<()> {
    for (m, &c) in counts.iter().enumerate() {
        let expected = multinomial(n as u64, m as u64);
        if expected.to_u64() != Some(c) {
            return Err(Error::FormulaMismatch(format!(
                "{c} faces with {m} edges, expected {expected}"
            )));
        }
    }
    Ok(())
}

/// Admissible graphs with the given outdegrees; there are exactly `C(n, m)`.
pub fn faces_with_outdegrees(
    ms: &MetricSpace,
    p: &OutdegreeSequence,
) -> Result<Vec<DirectedEdgeSet>> {
    let lattice = face_lattice(ms)?;
    faces_with_outdegrees_in(&lattice, ms, p)
}

pub fn faces_with_outdegrees_in(
    lattice: &FaceLattice,
    ms: &MetricSpace,
    p: &OutdegreeSequence,
) -> Result<Vec<DirectedEdgeSet>> {
    if p.0.len() != ms.n_points() || p.m() > ms.dim() {
        return Err(Error::ArityMismatch(format!(
            "outdegrees {:?} need {} entries summing to at most {}",
            p.0,
            ms.n_points(),
            ms.dim()
        )));
    }
    let found = lattice.with_outdegrees(p);
    let expected = binomial(ms.dim() as u64, p.m() as u64);
    if expected.to_usize() != Some(found.len()) {
        return Err(Error::FormulaMismatch(format!(
            "{} graphs with outdegrees {:?}, expected {expected}",
            found.len(),
            p.0
        )));
    }
    Ok(found)
}

/// The constellation `H(T, u)` of edges `x -> y` with `x` white whose tree
/// path from `u` to `x` avoids the edge, and its total length.
pub fn phi_functional(ms: &MetricSpace, tree: &DirectedEdgeSet, u: usize) -> Result<Constellation> {
    let k = ms.n_points();
    tree.check_points(k)?;
    if tree.outdegrees(k)[u] == 0 {
        return Err(Error::NotWhite(u));
    }
    let adj = tree.neighbors(k);
    let mut parent = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    if tree.iter().any(|(x, y)| !seen[x] || !seen[y]) {
        return Err(Error::NotATree("edges outside the component of u".into()));
    }
    let edges: DirectedEdgeSet = tree.iter().filter(|&(x, y)| parent[x] != y).collect();
    let cost = edges
        .iter()
        .fold(Rational::zero(), |acc, (x, y)| acc + ms.dist(x, y));
    Ok(Constellation { edges, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{rearrangement_metric, uniform_metric};
    use crate::rational::{integer, ratio};

    fn g(s: &str) -> DirectedEdgeSet {
        s.parse().unwrap()
    }

    fn seq(p: &[usize]) -> OutdegreeSequence {
        OutdegreeSequence(p.to_vec())
    }

    #[test]
    fn dimensions() {
        let ms = rearrangement_metric(3);
        assert_eq!(face_dimension(&ms, &g("1>3,2>4")).unwrap(), 1);
        assert_eq!(face_dimension(&ms, &DirectedEdgeSet::new()).unwrap(), -1);
        assert_eq!(face_dimension(&ms, &g("1>3,1>4,2>4")).unwrap(), 2);
        assert_eq!(
            face_dimension(&ms, &g("1>4,2>3")),
            Err(Error::NotAdmissible)
        );
    }

    #[test]
    fn constellations() {
        let ms = rearrangement_metric(3);
        let c = min_constellation(&ms, &[0, 1], &[1, 1]).unwrap();
        assert_eq!(c.edges, g("1>3,2>4"));
        assert_eq!(c.cost, ratio(17, 6));
        let star = min_constellation(&ms, &[0], &[3]).unwrap();
        assert_eq!(star.edges, g("1>2,1>3,1>4"));
        assert!(matches!(
            min_constellation(&ms, &[0, 1], &[1, 2]),
            Err(Error::ArityMismatch(_))
        ));
        let flat = uniform_metric(4, integer(1)).unwrap();
        assert!(matches!(
            min_constellation(&flat, &[0, 1], &[1, 1]),
            Err(Error::NotGeneric(_))
        ));
    }

    #[test]
    fn facet_trees() {
        let ms = rearrangement_metric(3);
        assert_eq!(
            build_facet_tree(&ms, &seq(&[2, 1, 0, 0])).unwrap().tree,
            g("1>3,1>4,2>4")
        );
        assert_eq!(
            build_facet_tree(&ms, &seq(&[3, 0, 0, 0])).unwrap().tree,
            g("1>2,1>3,1>4")
        );
        assert_eq!(
            build_facet_tree(&ms, &seq(&[0, 0, 1, 2])).unwrap().tree,
            g("3>1,4>1,4>2")
        );
        assert!(matches!(
            build_facet_tree(&ms, &seq(&[1, 1, 0, 0])),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn facet_witness_is_the_vertex() {
        let ms = rearrangement_metric(3);
        let f = build_facet_tree(&ms, &seq(&[2, 1, 0, 0])).unwrap();
        assert_eq!(
            f.witness.values,
            vec![ratio(5, 4), ratio(3, 2), ratio(-1, 12), integer(0)]
        );
    }

    #[test]
    fn facet_counts_small() {
        let eq = uniform_metric(3, integer(1)).unwrap();
        assert_eq!(enumerate_facets(&eq).unwrap().len(), 6);
        let facets = enumerate_facets(&rearrangement_metric(3)).unwrap();
        assert_eq!(facets.len(), 20);
        assert!(facets.iter().any(|f| f.tree == g("1>3,1>4,2>4")));
        let mut trees: Vec<_> = facets.iter().map(|f| f.tree.clone()).collect();
        trees.sort();
        trees.dedup();
        assert_eq!(trees.len(), 20);
        assert!(facets.windows(2).all(|w| w[0].outdeg < w[1].outdeg));
    }

    #[test]
    fn f_vectors() {
        let eq = uniform_metric(3, integer(1)).unwrap();
        assert_eq!(f_vector(&eq).unwrap(), vec![1, 6, 6]);
        assert_eq!(
            f_vector(&rearrangement_metric(3)).unwrap(),
            vec![1, 12, 30, 20]
        );
        assert_eq!(
            f_vector(&rearrangement_metric(4)).unwrap(),
            vec![1, 20, 90, 140, 70]
        );
    }

    #[test]
    fn formula_values() {
        let row: Vec<u64> = (0..=4)
            .map(|m| multinomial(4, m).to_u64().unwrap())
            .collect();
        assert_eq!(row, vec![1, 20, 90, 140, 70]);
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert!(matches!(
            check_f_vector(3, &[1, 12, 30, 19]),
            Err(Error::FormulaMismatch(_))
        ));
    }

    #[test]
    fn non_generic_refused() {
        let flat = uniform_metric(4, integer(1)).unwrap();
        assert!(matches!(enumerate_facets(&flat), Err(Error::NotGeneric(_))));
        assert!(matches!(f_vector(&flat), Err(Error::NotGeneric(_))));
    }

    #[test]
    fn outdegree_classes() {
        let ms = rearrangement_metric(3);
        let found = faces_with_outdegrees(&ms, &seq(&[1, 1, 0, 0])).unwrap();
        assert_eq!(found, vec![g("1>3,2>3"), g("1>3,2>4"), g("1>4,2>4")]);
        assert_eq!(
            faces_with_outdegrees(&ms, &seq(&[0, 0, 0, 0])).unwrap(),
            vec![DirectedEdgeSet::new()]
        );
        assert_eq!(
            faces_with_outdegrees(&ms, &seq(&[3, 0, 0, 0])).unwrap(),
            vec![g("1>2,1>3,1>4")]
        );
    }

    #[test]
    fn phi_examples() {
        let ms = rearrangement_metric(3);
        let t = g("1>3,1>4,2>4");
        let h1 = phi_functional(&ms, &t, 0).unwrap();
        assert_eq!((h1.edges, h1.cost), (g("1>3,1>4"), ratio(31, 12)));
        let h2 = phi_functional(&ms, &t, 1).unwrap();
        assert_eq!((h2.edges, h2.cost), (g("1>3,2>4"), ratio(17, 6)));
        let star = g("1>2,1>3,1>4");
        assert_eq!(phi_functional(&ms, &star, 0).unwrap().edges, star);
        assert_eq!(phi_functional(&ms, &t, 2), Err(Error::NotWhite(2)));
    }

    #[test]
    fn composition_order() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(3, 4).len(), 20);
    }
}
