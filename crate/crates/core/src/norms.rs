//! Lipschitz seminorm and the Kantorovich-Rubinstein norm.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::faces::enumerate_facets;
use crate::metric::MetricSpace;
use crate::parallel;
use crate::rational::{common_denominator, sum, Rational};

/// Rational coefficients on the points, summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMeasure {
    coeffs: Vec<Rational>,
}

impl SignedMeasure {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        let total = sum(&coeffs);
        if !total.is_zero() {
            return Err(Error::NotBalanced(total));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(n_points: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); n_points],
        }
    }

    /// `delta_x - delta_y`.
    pub fn dipole(n_points: usize, x: usize, y: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n_points];
        coeffs[x] += Rational::from_integer(1.into());
        coeffs[y] -= Rational::from_integer(1.into());
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `<mu, f> = sum c_x f(x)`.
    pub fn pair(&self, f: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(f)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }
}

/// A function on the points; additive constants are irrelevant to the seminorm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFunction(pub Vec<Rational>);

/// `max (f(y) - f(x)) / rho(x, y)` over ordered pairs; zero for constants.
pub fn lip_norm(ms: &MetricSpace, f: &PointFunction) -> Result<Rational> {
    let k = ms.n_points();
    if f.0.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: f.0.len(),
        });
    }
    let mut best = Rational::zero();
    for x in 0..k {
        for y in (0..k).filter(|&y| y != x) {
            let r = (&f.0[y] - &f.0[x]) / ms.dist(x, y);
            if r > best {
                best = r;
            }
        }
    }
    Ok(best)
}

/// `e_{x,y} = (delta_x - delta_y) / rho(x, y)`.
pub fn vertex_measure(ms: &MetricSpace, x: usize, y: usize) -> Result<SignedMeasure> {
    let k = ms.n_points();
    for p in [x, y] {
        if p >= k {
            return Err(Error::UnknownPoint(p));
        }
    }
    if x == y {
        return Err(Error::SamePoint(x));
    }
    Ok(SignedMeasure::dipole(k, x, y).scale(&ms.dist(x, y).recip()))
}

fn check_measure(ms: &MetricSpace, mu: &SignedMeasure) -> Result<()> {
    if mu.coeffs.len() != ms.n_points() {
        return Err(Error::DimensionMismatch {
            expected: ms.n_points(),
            found: mu.coeffs.len(),
        });
    }
    let total = sum(&mu.coeffs);
    if !total.is_zero() {
        return Err(Error::NotBalanced(total));
    }
    Ok(())
}

struct Arc {
    to: usize,
    cap: BigInt,
    cost: Rational,
}

/// Successive shortest paths on integer capacities and rational costs.
struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: BigInt, cost: Rational) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc {
            to,
            cap,
            cost: cost.clone(),
        });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc {
            to: from,
            cap: BigInt::zero(),
            cost: -cost,
        });
    }

    /// Pushes all possible flow from `s` to `t` at minimum cost.
    fn min_cost_max_flow(&mut self, s: usize, t: usize) -> (BigInt, Rational) {
        let nodes = self.out.len();
        let mut flow = BigInt::zero();
        let mut cost = Rational::zero();
        loop {
            // Bellman-Ford; residual graphs of successive shortest paths have no negative cycles.
            let mut dist: Vec<Option<Rational>> = vec![None; nodes];
            let mut via: Vec<Option<usize>> = vec![None; nodes];
            dist[s] = Some(Rational::zero());
            for _ in 0..nodes {
                let mut changed = false;
                for v in 0..nodes {
                    let Some(dv) = dist[v].clone() else { continue };
                    for &a in &self.out[v] {
                        let arc = &self.arcs[a];
                        if !arc.cap.is_positive() {
                            continue;
                        }
                        let cand = &dv + &arc.cost;
                        if dist[arc.to].as_ref().is_none_or(|d| cand < *d) {
                            dist[arc.to] = Some(cand);
                            via[arc.to] = Some(a);
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            if dist[t].is_none() {
                return (flow, cost);
            }
            let mut path = Vec::new();
            let mut v = t;
            while v != s {
                let a = via[v].expect("path back to source");
                path.push(a);
                v = self.arcs[a ^ 1].to;
            }
            let push = path
                .iter()
                .map(|&a| self.arcs[a].cap.clone())
                .min()
                .expect("non-empty path");
            for &a in &path {
                self.arcs[a].cap -= &push;
                self.arcs[a ^ 1].cap += &push;
                cost += &self.arcs[a].cost * Rational::from_integer(push.clone());
            }
            flow += push;
        }
    }
}

/// Optimal transport cost between the positive and negative parts of `mu`.
///
/// Masses are cleared to integers by their least common denominator and
/// moved by min-cost flow; the cost is scaled back at the end.
pub fn kr_norm(ms: &MetricSpace, mu: &SignedMeasure) -> Result<Rational> {
    check_measure(ms, mu)?;
    let scale = common_denominator(&mu.coeffs);
    let units: Vec<BigInt> = mu
        .coeffs
        .iter()
        .map(|c| c.numer() * (&scale / c.denom()))
        .collect();
    let sources: Vec<usize> = (0..units.len())
        .filter(|&p| units[p].is_positive())
        .collect();
    let sinks: Vec<usize> = (0..units.len())
        .filter(|&p| units[p].is_negative())
        .collect();
    if sources.is_empty() {
        return Ok(Rational::zero());
    }
    let total: BigInt = sources.iter().map(|&p| units[p].clone()).sum();
    let (s, t) = (0, 1 + sources.len() + sinks.len());
    let mut net = FlowNetwork::new(t + 1);
    for (i, &p) in sources.iter().enumerate() {
        net.add_arc(s, 1 + i, units[p].clone(), Rational::zero());
        for (j, &q) in sinks.iter().enumerate() {
            net.add_arc(
                1 + i,
                1 + sources.len() + j,
                total.clone(),
                ms.dist(p, q).clone(),
            );
        }
    }
    for (j, &q) in sinks.iter().enumerate() {
        net.add_arc(
            1 + sources.len() + j,
            t,
            -units[q].clone(),
            Rational::zero(),
        );
    }
    let (flow, cost) = net.min_cost_max_flow(s, t);
    debug_assert_eq!(flow, total);
    Ok(cost / Rational::from_integer(scale))
}

/// `max <mu, f>` over the vertices of the Lipschitz polytope (facet witnesses).
pub fn kr_norm_dual(ms: &MetricSpace, mu: &SignedMeasure) -> Result<Rational> {
    check_measure(ms, mu)?;
    let facets = enumerate_facets(ms)?;
    kr_norm_dual_over(&facets, mu)
}

/// Dual evaluation against an already enumerated facet list.
pub fn kr_norm_dual_over(facets: &[crate::faces::Facet], mu: &SignedMeasure) -> Result<Rational> {
    let values = parallel::par_map(facets, |f| mu.pair(&f.witness.values));
    Ok(values.into_iter().max().unwrap_or_else(Rational::zero))
}
