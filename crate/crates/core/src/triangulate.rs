//! Triangulations of the root polytope induced by a generic metric.
//!
//! Projecting the facets of the Kantorovich-Rubinstein polytope centrally
//! onto the root polytope (the same polytope for the metric that is 1
//! everywhere) and coning with the origin gives one lattice simplex per
//! facet tree. Lattice vectors are written in the basis
//! `u_i = delta_i - delta_{n+1}`, so `delta_x - delta_y = u_x - u_y` with
//! `u_{n+1} = 0`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::faces::{
    binomial, build_facet_tree, compositions, enumerate_facets, Facet, OutdegreeSequence,
};
use crate::graph::DirectedEdgeSet;
use crate::metric::MetricSpace;
use crate::parallel;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSimplex {
    pub tree: DirectedEdgeSet,
    /// One integer vector per tree edge, in edge order.
    pub vectors: Vec<Vec<i64>>,
    pub det: i64,
}

impl LatticeSimplex {
    pub fn from_tree(tree: DirectedEdgeSet, n_points: usize) -> Self {
        let vectors = lattice_vectors(&tree, n_points);
        let det = determinant(&vectors);
        Self { tree, vectors, det }
    }
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub simplices: Vec<LatticeSimplex>,
    pub source_metric: MetricSpace,
}

/// `delta_x - delta_y` for each edge, in the basis `delta_i - delta_{n+1}`.
pub fn lattice_vectors(tree: &DirectedEdgeSet, n_points: usize) -> Vec<Vec<i64>> {
    let n = n_points - 1;
    tree.iter()
        .map(|(x, y)| {
            let mut v = vec![0i64; n];
            if x < n {
                v[x] += 1;
            }
            if y < n {
                v[y] -= 1;
            }
            v
        })
        .collect()
}

/// Fraction-free Gaussian elimination (Bareiss). Non-square input gives 0.
pub fn determinant(rows: &[Vec<i64>]) -> i64 {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return 0;
    }
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// One origin-coned simplex per facet tree.
pub fn triangulate_root_polytope(ms: &MetricSpace) -> Result<Triangulation> {
    let facets = enumerate_facets(ms)?;
    let k = ms.n_points();
    let simplices = parallel::par_map(&facets, |f| LatticeSimplex::from_tree(f.tree.clone(), k));
    Ok(Triangulation {
        simplices,
        source_metric: ms.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnimodularityReport {
    pub unimodular: bool,
    pub count: usize,
    pub expected_count: usize,
    /// `(simplex index, determinant)` for every determinant other than +-1.
    pub violations: Vec<(usize, i64)>,
    pub distinct_trees: bool,
}

pub fn check_unimodular(t: &Triangulation) -> UnimodularityReport {
    let n = t.source_metric.dim() as u64;
    let expected_count = binomial(2 * n, n).try_into().unwrap_or(usize::MAX);
    let violations: Vec<(usize, i64)> = t
        .simplices
        .iter()
        .enumerate()
        .filter(|(_, s)| s.det.abs() != 1)
        .map(|(i, s)| (i, s.det))
        .collect();
    let mut trees: Vec<&DirectedEdgeSet> = t.simplices.iter().map(|s| &s.tree).collect();
    trees.sort();
    trees.dedup();
    let distinct_trees = trees.len() == t.simplices.len();
    UnimodularityReport {
        unimodular: violations.is_empty() && t.simplices.len() == expected_count && distinct_trees,
        count: t.simplices.len(),
        expected_count,
        violations,
        distinct_trees,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityCertificate {
    /// Smallest `1 - <e_{x,y}, f>` over ordered pairs that are not tree edges.
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub margin: Rational,
    #[serde(skip)]
    pub slacks: Vec<((usize, usize), Rational)>,
}

impl RegularityCertificate {
    pub fn slack(&self, x: usize, y: usize) -> Option<&Rational> {
        self.slacks
            .iter()
            .find(|(p, _)| *p == (x, y))
            .map(|(_, s)| s)
    }
}

/// The facet's witness pairs to exactly 1 with its own vertices and to
/// strictly less with every other `e_{x,y}`.
pub fn regularity_certificate(ms: &MetricSpace, facet: &Facet) -> Result<RegularityCertificate> {
    ms.require_generic()?;
    let k = ms.n_points();
    let f = &facet.witness.values;
    let one = Rational::one();
    let mut slacks = Vec::with_capacity(k * (k - 1));
    for x in 0..k {
        for y in (0..k).filter(|&y| y != x) {
            let pairing = (&f[x] - &f[y]) / ms.dist(x, y);
            if facet.tree.contains(x, y) {
                if pairing != one {
                    return Err(Error::RegularityViolation(x, y, pairing));
                }
            } else if pairing >= one {
                return Err(Error::RegularityViolation(x, y, pairing));
            } else {
                slacks.push(((x, y), &one - pairing));
            }
        }
    }
    let margin = slacks
        .iter()
        .map(|(_, s)| s)
        .min()
        .cloned()
        .unwrap_or_else(Rational::zero);
    Ok(RegularityCertificate { margin, slacks })
}

/// Maximal cells of the induced triangulation of the root polytope facet
/// `Delta^{k-1} x Delta^{n-k}` for the bipartition `plus | complement`.
pub fn product_triangulation(ms: &MetricSpace, plus: &[usize]) -> Result<Vec<DirectedEdgeSet>> {
    let n_points = ms.n_points();
    let mut in_plus = vec![false; n_points];
    for &p in plus {
        if p >= n_points {
            return Err(Error::UnknownPoint(p));
        }
        in_plus[p] = true;
    }
    let k = in_plus.iter().filter(|&&b| b).count();
    if k == 0 || k == n_points {
        return Err(Error::EmptyPart);
    }
    ms.require_generic()?;
    let n = ms.dim();
    let positive: Vec<OutdegreeSequence> = compositions(n - k, k)
        .into_iter()
        .map(|extra| {
            let mut p = vec![0; n_points];
            for (slot, point) in (0..n_points).filter(|&i| in_plus[i]).enumerate() {
                p[point] = extra[slot] + 1;
            }
            OutdegreeSequence(p)
        })
        .collect();
    let cells = parallel::try_par_map(&positive, |p| build_facet_tree(ms, p).map(|f| f.tree))?;
    let expected = binomial(n as u64 - 1, k as u64 - 1);
    if expected != cells.len().into() {
        return Err(Error::FormulaMismatch(format!(
            "{} cells, expected {expected}",
            cells.len()
        )));
    }
    Ok(cells)
}

/// Solves `a x = b` exactly; `None` for a singular matrix.
#[allow(clippy::needless_range_loop)] // row operations read one row while writing another
fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in (0..n).filter(|&r| r != col) {
            let factor = m[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..=n {
                let delta = &factor * &m[col][j];
                m[r][j] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// True when `point` lies in the closed simplex `conv(0, v_1, ..., v_n)`.
pub fn simplex_contains(simplex: &LatticeSimplex, point: &[Rational]) -> bool {
    let n = point.len();
    // Columns are the simplex vectors.
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            simplex
                .vectors
                .iter()
                .map(|v| Rational::from_integer(v[i].into()))
                .collect()
        })
        .collect();
    match solve(&a, point) {
        Some(lambda) => {
            lambda.iter().all(|l| !l.is_negative())
                && lambda.iter().fold(Rational::zero(), |acc, l| acc + l) <= Rational::one()
        }
        None => false,
    }
}

/// Barycenter test: no simplex's barycenter lies in any other simplex.
pub fn interiors_pairwise_disjoint(t: &Triangulation) -> bool {
    let barycenters: Vec<Vec<Rational>> = t
        .simplices
        .iter()
        .map(|s| {
            let n = s.vectors.len();
            let denom = Rational::from_integer((n as i64 + 1).into());
            (0..n)
                .map(|i| {
                    Rational::from_integer(s.vectors.iter().map(|v| v[i]).sum::<i64>().into())
                        / &denom
                })
                .collect()
        })
        .collect();
    t.simplices.iter().enumerate().all(|(i, _)| {
        t.simplices
            .iter()
            .enumerate()
            .all(|(j, other)| i == j || !simplex_contains(other, &barycenters[i]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::build_facet_tree;
    use crate::metric::{rearrangement_metric, uniform_metric};
    use crate::rational::{integer, ratio};

    fn g(s: &str) -> DirectedEdgeSet {
        s.parse().unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            -3
        );
        assert_eq!(determinant(&[vec![1, 1], vec![1, 1]]), 0);
    }

    #[test]
    fn hexagon() {
        let ms = uniform_metric(3, integer(1)).unwrap();
        let t = triangulate_root_polytope(&ms).unwrap();
        assert_eq!(t.simplices.len(), 6);
        assert!(t.simplices.iter().all(|s| s.det.abs() == 1));
        let r = check_unimodular(&t);
        assert!(r.unimodular && r.count == 6 && r.expected_count == 6);
        assert!(interiors_pairwise_disjoint(&t));
    }

    #[test]
    fn repeated_vector_is_flagged() {
        let ms = rearrangement_metric(2);
        let mut t = triangulate_root_polytope(&ms).unwrap();
        t.simplices[0] = LatticeSimplex {
            tree: g("1>3,2>3"),
            vectors: vec![vec![1, 0], vec![1, 0]],
            det: determinant(&[vec![1, 0], vec![1, 0]]),
        };
        let r = check_unimodular(&t);
        assert!(!r.unimodular);
        assert_eq!(r.violations, vec![(0, 0)]);
    }

    #[test]
    fn regularity_margin_example() {
        let ms = rearrangement_metric(3);
        let facet = build_facet_tree(&ms, &OutdegreeSequence(vec![2, 1, 0, 0])).unwrap();
        let cert = regularity_certificate(&ms, &facet).unwrap();
        assert_eq!(cert.slack(1, 2), Some(&ratio(1, 20)));
        assert!(cert.margin.is_positive());
        assert!(cert.slack(0, 2).is_none());
    }

    #[test]
    fn regularity_needs_generic() {
        let flat = uniform_metric(4, integer(1)).unwrap();
        let star = build_facet_tree(&flat, &OutdegreeSequence(vec![3, 0, 0, 0])).unwrap();
        assert!(matches!(
            regularity_certificate(&flat, &star),
            Err(Error::NotGeneric(_))
        ));
    }

    #[test]
    fn square_cells() {
        let ms = rearrangement_metric(3);
        let cells = product_triangulation(&ms, &[0, 1]).unwrap();
        assert_eq!(cells, vec![g("1>3,2>3,2>4"), g("1>3,1>4,2>4")]);
        assert_eq!(
            product_triangulation(&ms, &[0]).unwrap(),
            vec![g("1>2,1>3,1>4")]
        );
        assert_eq!(product_triangulation(&ms, &[]), Err(Error::EmptyPart));
        assert_eq!(
            product_triangulation(&ms, &[0, 1, 2, 3]),
            Err(Error::EmptyPart)
        );
        assert_eq!(
            product_triangulation(&rearrangement_metric(4), &[1, 3])
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn containment() {
        let s = LatticeSimplex::from_tree(g("1>3,2>3"), 3);
        assert!(simplex_contains(&s, &[ratio(1, 3), ratio(1, 3)]));
        assert!(!simplex_contains(&s, &[ratio(2, 3), ratio(2, 3)]));
        assert!(!simplex_contains(&s, &[ratio(-1, 3), ratio(1, 3)]));
    }
}
