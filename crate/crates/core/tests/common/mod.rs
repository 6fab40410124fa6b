#![allow(dead_code)]

use lipkr::graph::DirectedEdgeSet;
use lipkr::metric::{pairs, sign_family_metric, MetricSpace};
use lipkr::norms::SignedMeasure;
use lipkr::rational::{integer, ratio};
use lipkr::Rational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `f(pair k) = 1 / q_k` with `q_k` the `k`-th prime from 11 on.
///
/// Every signed sum of distinct unit fractions with prime denominators is
/// non-zero, so every sign choice is generic.
pub fn unit_fraction_perturbation(n_points: usize) -> Vec<Vec<Rational>> {
    let primes = [
        11i64, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    ];
    let mut f = vec![vec![Rational::zero(); n_points]; n_points];
    for (&(i, j), &q) in pairs(n_points).iter().zip(&primes) {
        f[i][j] = ratio(1, q);
        f[j][i] = ratio(1, q);
    }
    f
}

/// Sign bits of `mask` in pair order; bit `k` set means `3 + f`.
pub fn signs_of(mask: u32, n_pairs: usize) -> Vec<bool> {
    (0..n_pairs).map(|k| mask >> k & 1 == 1).collect()
}

/// All `2^6` sign-family metrics on four points.
pub fn sign_family_n3() -> Vec<MetricSpace> {
    let f = unit_fraction_perturbation(4);
    (0..64u32)
        .map(|mask| sign_family_metric(&f, &signs_of(mask, 6)).unwrap())
        .collect()
}

/// Index of pair `(a, b)`, `a < b`, in [`pairs`] order.
pub fn pair_index(n_points: usize, a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    pairs(n_points).iter().position(|&p| p == (a, b)).unwrap()
}

/// Balanced measure with small rational coefficients.
pub fn random_measure(n_points: usize, rng: &mut ChaCha8Rng) -> SignedMeasure {
    let mut coeffs: Vec<Rational> = (0..n_points - 1)
        .map(|_| ratio(rng.random_range(-6..=6), rng.random_range(1..=4)))
        .collect();
    let total = coeffs.iter().fold(Rational::zero(), |a, c| a + c);
    coeffs.push(-total);
    SignedMeasure::new(coeffs).unwrap()
}

/// Measure with integer coefficients and total unit mass at most `units`.
pub fn random_integer_measure(n_points: usize, units: i64, rng: &mut ChaCha8Rng) -> SignedMeasure {
    let mut coeffs = vec![0i64; n_points];
    for _ in 0..rng.random_range(1..=units) {
        let a = rng.random_range(0..n_points);
        let b = rng.random_range(0..n_points);
        coeffs[a] += 1;
        coeffs[b] -= 1;
    }
    SignedMeasure::new(coeffs.into_iter().map(integer).collect()).unwrap()
}

/// Digraph with each ordered pair present with probability `p`.
pub fn random_digraph(n_points: usize, p: f64, rng: &mut ChaCha8Rng) -> DirectedEdgeSet {
    let mut g = DirectedEdgeSet::new();
    for x in 0..n_points {
        for y in (0..n_points).filter(|&y| y != x) {
            if rng.random_bool(p) {
                g.insert(x, y).unwrap();
            }
        }
    }
    g
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labelled trees on `n_points` vertices from Prüfer codes, as undirected pairs.
pub fn labelled_trees(n_points: usize) -> Vec<Vec<(usize, usize)>> {
    if n_points < 2 {
        return vec![Vec::new()];
    }
    if n_points == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n_points - 2;
    let total = n_points.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let d = code % n_points;
                    code /= n_points;
                    d
                })
                .collect();
            let mut degree = vec![1usize; n_points];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut edges = Vec::with_capacity(n_points - 1);
            for &s in &seq {
                let leaf = (0..n_points).find(|&v| degree[v] == 1).unwrap();
                edges.push((leaf, s));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..n_points).filter(|&v| degree[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            edges
        })
        .collect()
}

/// `(n + m)! / (m! m! (n - m)!)` by direct factorials.
pub fn face_count_formula(n: u64, m: u64) -> u128 {
    let fact = |k: u64| (1..=k as u128).product::<u128>();
    fact(n + m) / (fact(m) * fact(m) * fact(n - m))
}

pub fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}
