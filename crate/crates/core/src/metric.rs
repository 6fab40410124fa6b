//! Finite metric spaces with exact rational distances.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admissible::{self, GenericityReport};
use crate::error::{Error, Result};
use crate::rational::{integer, ratio, Rational};

/// Attempts made by [`random_generic_metric`] before giving up.
pub const RANDOM_RETRY_BUDGET: usize = 32;

/// A metric on the points `0..n_points` (labelled `1..=n_points` in files).
pub struct MetricSpace {
    n_points: usize,
    dist: Vec<Rational>,
    strict: bool,
    genericity: OnceLock<Result<GenericityReport>>,
}

impl MetricSpace {
    /// Number of points, `n + 1`.
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Dimension `n` of the polytopes, one less than the number of points.
    pub fn dim(&self) -> usize {
        self.n_points - 1
    }

    pub fn dist(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x * self.n_points + y]
    }

    /// Every triangle inequality with a distinct middle point is strict.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.n_points).map(<[_]>::to_vec).collect()
    }

    /// Genericity report, computed once and cached.
    pub fn genericity(&self) -> Result<&GenericityReport> {
        self.genericity
            .get_or_init(|| admissible::compute_genericity(self))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `Ok` when the metric is strict and generic, else the error naming why.
    pub fn require_generic(&self) -> Result<()> {
        let report = self.genericity()?;
        match &report.tie {
            None => Ok(()),
            Some(tie) => Err(Error::NotGeneric(tie.clone())),
        }
    }

    /// Relabels points: point `p` of `self` becomes point `perm[p]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<MetricSpace> {
        let k = self.n_points;
        let mut m = vec![vec![Rational::zero(); k]; k];
        for x in 0..k {
            for y in 0..k {
                m[perm[x]][perm[y]] = self.dist(x, y).clone();
            }
        }
        validate_metric(&m)
    }
}

impl Clone for MetricSpace {
    fn clone(&self) -> Self {
        Self {
            n_points: self.n_points,
            dist: self.dist.clone(),
            strict: self.strict,
            genericity: self.genericity.clone(),
        }
    }
}

impl PartialEq for MetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.n_points == other.n_points && self.dist == other.dist
    }
}

impl Eq for MetricSpace {}

impl fmt::Debug for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpace")
            .field("n_points", &self.n_points)
            .field("strict", &self.strict)
            .field(
                "dist",
                &self
                    .matrix()
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Unordered pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn pairs(n_points: usize) -> Vec<(usize, usize)> {
    (0..n_points)
        .flat_map(|i| (i + 1..n_points).map(move |j| (i, j)))
        .collect()
}

/// Checks a full distance matrix and builds the metric space.
#[allow(clippy::needless_range_loop)] // symmetric access to dist[x][y] and dist[y][x]
pub fn validate_metric(dist: &[Vec<Rational>]) -> Result<MetricSpace> {
    let k = dist.len();
    if k < 2 {
        return Err(Error::TooFewPoints(k));
    }
    for row in dist {
        if row.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: row.len(),
            });
        }
    }
    for x in 0..k {
        if !dist[x][x].is_zero() {
            return Err(Error::NonZeroDiagonal(x));
        }
        for y in x + 1..k {
            if dist[x][y] != dist[y][x] {
                return Err(Error::NotSymmetric(x, y));
            }
            if !dist[x][y].is_positive() {
                return Err(Error::NonPositiveDistance(x, y));
            }
        }
    }
    let mut strict = true;
    for x in 0..k {
        for z in x + 1..k {
            for y in (0..k).filter(|&y| y != x && y != z) {
                let detour = &dist[x][y] + &dist[y][z];
                if dist[x][z] > detour {
                    return Err(Error::TriangleViolation(x, y, z));
                }
                if dist[x][z] == detour {
                    strict = false;
                }
            }
        }
    }
    Ok(MetricSpace {
        n_points: k,
        dist: dist.iter().flatten().cloned().collect(),
        strict,
        genericity: OnceLock::new(),
    })
}

/// Builds a metric from its upper triangle, listed in [`pairs`] order.
pub fn from_pair_distances(n_points: usize, values: &[Rational]) -> Result<MetricSpace> {
    let all = pairs(n_points);
    if values.len() != all.len() {
        return Err(Error::DimensionMismatch {
            expected: all.len(),
            found: values.len(),
        });
    }
    let mut m = vec![vec![Rational::zero(); n_points]; n_points];
    for (&(i, j), v) in all.iter().zip(values) {
        m[i][j] = v.clone();
        m[j][i] = v.clone();
    }
    validate_metric(&m)
}

/// `rho(i, j) = 1 + i/j` for one-based labels `i < j` on `n + 1` points.
pub fn rearrangement_metric(n: usize) -> MetricSpace {
    assert!(n >= 1, "rearrangement metric needs n >= 1");
    let values: Vec<Rational> = pairs(n + 1)
        .into_iter()
        .map(|(i, j)| integer(1) + ratio(i as i64 + 1, j as i64 + 1))
        .collect();
    from_pair_distances(n + 1, &values).expect("rearrangement metric is a metric")
}

/// The uniform metric `rho = value` on `n_points` points.
pub fn uniform_metric(n_points: usize, value: Rational) -> Result<MetricSpace> {
    from_pair_distances(n_points, &vec![value; n_points * (n_points - 1) / 2])
}

/// `rho(x, y) = 3 + f(x, y)` where the pair's sign is `true`, `3 - f(x, y)` otherwise.
///
/// `signs` is indexed in [`pairs`] order. Every output is a strict metric
/// because all distances lie in `(2, 4)`.
pub fn sign_family_metric(f: &[Vec<Rational>], signs: &[bool]) -> Result<MetricSpace> {
    let k = f.len();
    let all = pairs(k);
    if signs.len() != all.len() {
        return Err(Error::DimensionMismatch {
            expected: all.len(),
            found: signs.len(),
        });
    }
    let (zero, one, three) = (Rational::zero(), Rational::one(), integer(3));
    let mut values = Vec::with_capacity(all.len());
    for (&(i, j), &plus) in all.iter().zip(signs) {
        if f[i].len() != k || f[j].len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: f[i].len().min(f[j].len()),
            });
        }
        if f[i][j] != f[j][i] {
            return Err(Error::NotSymmetric(i, j));
        }
        let v = &f[i][j];
        if *v <= zero || *v >= one {
            return Err(Error::EntryOutOfRange(i, j, v.clone()));
        }
        values.push(if plus { &three + v } else { &three - v });
    }
    from_pair_distances(k, &values)
}

/// First `count` primes not below `from`.
fn primes_from(from: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = from.max(2);
    while out.len() < count {
        if (2..)
            .take_while(|d| d * d <= c)
            .all(|d| !c.is_multiple_of(d))
        {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Smallest denominator in the random metric schedule; pair `k` uses the
/// `k`-th prime from here on.
pub const RANDOM_DENOMINATOR_START: u64 = 11;

/// Draws the perturbation matrix `f` used by [`random_generic_metric`].
///
/// The pair with index `k` in [`pairs`] order gets `a / q_k`, `q_k` the
/// `k`-th prime at or above [`RANDOM_DENOMINATOR_START`] and `a` uniform in
/// `1..q_k`. Distinct prime denominators keep the values rationally
/// independent enough that no assignment tie survives.
pub fn random_perturbation(n_points: usize, rng: &mut impl Rng) -> Vec<Vec<Rational>> {
    let all = pairs(n_points);
    let primes = primes_from(RANDOM_DENOMINATOR_START, all.len());
    let mut f = vec![vec![Rational::zero(); n_points]; n_points];
    for (&(i, j), &q) in all.iter().zip(&primes) {
        let a = rng.random_range(1..q);
        let v = Rational::new(BigInt::from(a), BigInt::from(q));
        f[i][j] = v.clone();
        f[j][i] = v;
    }
    f
}

/// Seeded generic metric on `n + 1` points.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`; each attempt
/// draws [`random_perturbation`] and then one sign bit per pair, and the first
/// attempt whose metric is certified generic is returned.
pub fn random_generic_metric(n: usize, seed: u64) -> Result<MetricSpace> {
    if n == 0 {
        return Err(Error::TooFewPoints(1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRY_BUDGET {
        let f = random_perturbation(n + 1, &mut rng);
        let signs: Vec<bool> = (0..pairs(n + 1).len()).map(|_| rng.random()).collect();
        let ms = sign_family_metric(&f, &signs)?;
        if ms.genericity()?.is_generic() {
            return Ok(ms);
        }
    }
    Err(Error::RetryLimitExceeded(RANDOM_RETRY_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: Rational, b: Rational, c: Rational) -> Vec<Vec<Rational>> {
        // a = rho(1,2), b = rho(2,3), c = rho(1,3)
        let z = Rational::zero();
        vec![
            vec![z.clone(), a.clone(), c.clone()],
            vec![a, z.clone(), b.clone()],
            vec![c, b, z],
        ]
    }

    #[test]
    fn equilateral_is_strict() {
        let ms = validate_metric(&tri(integer(1), integer(1), integer(1))).unwrap();
        assert!(ms.is_strict());
    }

    #[test]
    fn degenerate_triangle_is_valid_but_not_strict() {
        let ms = validate_metric(&tri(integer(1), integer(2), integer(3))).unwrap();
        assert!(!ms.is_strict());
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let err = validate_metric(&tri(integer(1), integer(1), integer(3))).unwrap_err();
        assert_eq!(err, Error::TriangleViolation(0, 1, 2));
        assert_eq!(
            err.to_string(),
            "TriangleViolation: rho(1,3) > rho(1,2) + rho(2,3)"
        );
    }

    #[test]
    fn malformed_matrices_rejected() {
        let mut m = tri(integer(1), integer(1), integer(1));
        m[0][1] = integer(2);
        assert_eq!(validate_metric(&m).unwrap_err(), Error::NotSymmetric(0, 1));
        let m = tri(integer(0), integer(1), integer(1));
        assert_eq!(
            validate_metric(&m).unwrap_err(),
            Error::NonPositiveDistance(0, 1)
        );
        let mut m = tri(integer(1), integer(1), integer(1));
        m[2][2] = integer(1);
        assert_eq!(validate_metric(&m).unwrap_err(), Error::NonZeroDiagonal(2));
        assert_eq!(
            validate_metric(&[vec![integer(0)]]).unwrap_err(),
            Error::TooFewPoints(1)
        );
    }

    #[test]
    fn rearrangement_values() {
        let ms = rearrangement_metric(3);
        let expect = [
            (0, 1, ratio(3, 2)),
            (0, 2, ratio(4, 3)),
            (0, 3, ratio(5, 4)),
            (1, 2, ratio(5, 3)),
            (1, 3, ratio(3, 2)),
            (2, 3, ratio(7, 4)),
        ];
        for (x, y, v) in expect {
            assert_eq!(ms.dist(x, y), &v);
            assert_eq!(ms.dist(y, x), &v);
        }
        assert!(ms.is_strict());
        let one = rearrangement_metric(1);
        assert_eq!(one.n_points(), 2);
        assert_eq!(one.dist(0, 1), &ratio(3, 2));
    }

    #[test]
    fn sign_family_constant_half() {
        let k = 4;
        let f = vec![vec![ratio(1, 2); k]; k]
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row[i] = Rational::zero();
                row
            })
            .collect::<Vec<_>>();
        let ms = sign_family_metric(&f, &[true; 6]).unwrap();
        assert!(ms.is_strict());
        for (x, y) in pairs(k) {
            assert_eq!(ms.dist(x, y), &ratio(7, 2));
        }
    }

    #[test]
    fn sign_flip_moves_one_distance_by_twice_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_perturbation(4, &mut rng);
        let base = sign_family_metric(&f, &[true; 6]).unwrap();
        let mut signs = [true; 6];
        signs[2] = false;
        let flipped = sign_family_metric(&f, &signs).unwrap();
        for (idx, (x, y)) in pairs(4).into_iter().enumerate() {
            let diff = base.dist(x, y) - flipped.dist(x, y);
            if idx == 2 {
                assert_eq!(diff, integer(2) * &f[x][y]);
            } else {
                assert!(diff.is_zero());
            }
        }
    }

    #[test]
    fn sign_family_rejects_out_of_range() {
        let mut f = vec![vec![ratio(1, 3); 3]; 3];
        for (i, row) in f.iter_mut().enumerate() {
            row[i] = Rational::zero();
        }
        f[0][1] = integer(1);
        f[1][0] = integer(1);
        assert!(matches!(
            sign_family_metric(&f, &[true; 3]),
            Err(Error::EntryOutOfRange(0, 1, _))
        ));
    }

    #[test]
    fn random_metric_is_deterministic_and_generic() {
        let a = random_generic_metric(3, 1).unwrap();
        let b = random_generic_metric(3, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_generic_metric(3, 2).unwrap());
        let m = random_generic_metric(4, 7).unwrap();
        assert!(m.genericity().unwrap().is_generic());
    }

    #[test]
    fn primes_schedule() {
        assert_eq!(primes_from(11, 5), vec![11, 13, 17, 19, 23]);
    }
}
