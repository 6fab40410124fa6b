//! Lipschitz combinatorial equivalence of metrics on the same labelled set.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::faces::enumerate_facets;
use crate::graph::DirectedEdgeSet;
use crate::metric::MetricSpace;
use crate::parallel;
use crate::rational::Rational;

/// Sorted list of facet edge sets; it determines every lower face.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombinatorialStructure {
    pub n: usize,
    pub facet_trees: Vec<DirectedEdgeSet>,
}

impl CombinatorialStructure {
    fn from_trees(n: usize, mut facet_trees: Vec<DirectedEdgeSet>) -> Self {
        facet_trees.sort();
        Self { n, facet_trees }
    }

    /// One line per facet in `x>y` form.
    pub fn canonical_text(&self) -> String {
        self.facet_trees.iter().map(|t| format!("{t}\n")).collect()
    }

    /// Hex SHA-256 of [`Self::canonical_text`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The same structure after moving point `p` to `perm[p]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let trees = self
            .facet_trees
            .iter()
            .map(|t| t.iter().map(|(x, y)| (perm[x], perm[y])).collect())
            .collect();
        Self::from_trees(self.n, trees)
    }
}

/// `k` distinct tails and `k` distinct heads, all `2k` points distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleConfig {
    x: Vec<usize>,
    y: Vec<usize>,
}

impl CycleConfig {
    pub fn new(x: Vec<usize>, y: Vec<usize>) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::ArityMismatch(format!(
                "{} tails vs {} heads",
                x.len(),
                y.len()
            )));
        }
        let mut all: Vec<usize> = x.iter().chain(&y).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != 2 * x.len() {
            return Err(Error::ArityMismatch(
                "cycle points must be mutually distinct".into(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn tails(&self) -> &[usize] {
        &self.x
    }

    pub fn heads(&self) -> &[usize] {
        &self.y
    }
}

pub fn combinatorial_structure(ms: &MetricSpace) -> Result<CombinatorialStructure> {
    let trees = enumerate_facets(ms)?.into_iter().map(|f| f.tree).collect();
    Ok(CombinatorialStructure::from_trees(ms.dim(), trees))
}

pub fn equivalent(m1: &MetricSpace, m2: &MetricSpace) -> Result<bool> {
    if m1.n_points() != m2.n_points() {
        return Err(Error::SizeMismatch(m1.n_points(), m2.n_points()));
    }
    Ok(combinatorial_structure(m1)? == combinatorial_structure(m2)?)
}

/// `sum rho(x_i, y_i) - sum rho(x_i, y_{i+1})` with `y_{k+1} = y_1`.
///
/// Negative means the identity pairing is cheaper than the cyclic shift;
/// zero means the metric sits on the exceptional plane of this configuration.
pub fn cycle_functional(ms: &MetricSpace, c: &CycleConfig) -> Result<Rational> {
    let k = c.x.len();
    if let Some(&p) = c.x.iter().chain(&c.y).find(|&&p| p >= ms.n_points()) {
        return Err(Error::UnknownPoint(p));
    }
    let mut total = Rational::from_integer(0.into());
    for i in 0..k {
        total += ms.dist(c.x[i], c.y[i]);
        total -= ms.dist(c.x[i], c.y[(i + 1) % k]);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    /// Index in the input family of the first member.
    pub representative: usize,
    pub size: usize,
    pub structure_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub classes: Vec<ClassSummary>,
    /// `class_of[i]` is the class index of family member `i`.
    pub class_of: Vec<usize>,
}

impl ClassReport {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.representative).collect()
    }
}

fn group(structures: Vec<CombinatorialStructure>) -> ClassReport {
    let mut keys: Vec<CombinatorialStructure> = Vec::new();
    let mut classes: Vec<ClassSummary> = Vec::new();
    let mut class_of = Vec::with_capacity(structures.len());
    for (i, s) in structures.into_iter().enumerate() {
        match keys.iter().position(|k| *k == s) {
            Some(c) => {
                classes[c].size += 1;
                class_of.push(c);
            }
            None => {
                classes.push(ClassSummary {
                    representative: i,
                    size: 1,
                    structure_hash: s.hash(),
                });
                class_of.push(keys.len());
                keys.push(s);
            }
        }
    }
    ClassReport { classes, class_of }
}

fn check_family(family: &[MetricSpace]) -> Result<()> {
    if let Some(first) = family.first() {
        if let Some(m) = family.iter().find(|m| m.n_points() != first.n_points()) {
            return Err(Error::SizeMismatch(first.n_points(), m.n_points()));
        }
    }
    Ok(())
}

/// Partitions a family by labelled structure; classes are listed in order of
/// first appearance.
pub fn count_classes(family: &[MetricSpace]) -> Result<ClassReport> {
    check_family(family)?;
    let structures = parallel::try_par_map(family, combinatorial_structure)?;
    Ok(group(structures))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest relabelling of the structure under all point permutations.
pub fn canonical_up_to_relabeling(s: &CombinatorialStructure) -> CombinatorialStructure {
    permutations(s.n + 1)
        .iter()
        .map(|perm| s.relabel(perm))
        .min()
        .expect("at least the identity")
}

/// Extension: classes up to renaming the points. The labelled
/// [`count_classes`] is the equivalence proper; this coarser grouping
/// identifies metrics whose structures differ only by a permutation.
pub fn count_classes_up_to_relabeling(family: &[MetricSpace]) -> Result<ClassReport> {
    check_family(family)?;
    let structures = parallel::try_par_map(family, |m| {
        combinatorial_structure(m).map(|s| canonical_up_to_relabeling(&s))
    })?;
    Ok(group(structures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{random_generic_metric, rearrangement_metric, uniform_metric};
    use crate::rational::{integer, ratio};

    #[test]
    fn three_points_single_structure() {
        let a = combinatorial_structure(&uniform_metric(3, integer(1)).unwrap()).unwrap();
        let b = combinatorial_structure(&rearrangement_metric(2)).unwrap();
        assert_eq!(a.facet_trees.len(), 6);
        assert_eq!(a, b);
        assert!(equivalent(
            &random_generic_metric(2, 5).unwrap(),
            &rearrangement_metric(2)
        )
        .unwrap());
    }

    #[test]
    fn structure_is_canonical() {
        let ms = rearrangement_metric(3);
        let s = combinatorial_structure(&ms).unwrap();
        assert!(s.facet_trees.windows(2).all(|w| w[0] < w[1]));
        assert!(s.facet_trees.contains(&"1>3,1>4,2>4".parse().unwrap()));
        assert_eq!(s, combinatorial_structure(&ms).unwrap());
        assert_eq!(s.hash().len(), 64);
        assert!(equivalent(&ms, &ms).unwrap());
    }

    #[test]
    fn size_mismatch() {
        assert_eq!(
            equivalent(&rearrangement_metric(2), &rearrangement_metric(3)),
            Err(Error::SizeMismatch(3, 4))
        );
    }

    #[test]
    fn cycle_functional_examples() {
        let c = CycleConfig::new(vec![0, 1], vec![2, 3]).unwrap();
        assert_eq!(
            cycle_functional(&rearrangement_metric(3), &c).unwrap(),
            ratio(-1, 12)
        );
        assert_eq!(
            cycle_functional(&uniform_metric(4, integer(1)).unwrap(), &c).unwrap(),
            integer(0)
        );
        assert!(CycleConfig::new(vec![0, 1], vec![1, 2]).is_err());
    }

    #[test]
    fn count_and_representatives() {
        let fam = vec![
            rearrangement_metric(2),
            uniform_metric(3, integer(2)).unwrap(),
        ];
        let r = count_classes(&fam).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(r.representatives(), vec![0]);
        assert_eq!(r.classes[0].size, 2);
        let single = count_classes(&[rearrangement_metric(3)]).unwrap();
        assert_eq!(single.count(), 1);
    }

    #[test]
    fn relabeling_merges_mirror_images() {
        let ms = rearrangement_metric(3);
        let mirrored = ms.relabel(&[3, 2, 1, 0]).unwrap();
        let fam = vec![ms, mirrored];
        let labelled = count_classes(&fam).unwrap().count();
        let unlabelled = count_classes_up_to_relabeling(&fam).unwrap().count();
        assert!(unlabelled <= labelled);
        assert_eq!(unlabelled, 1);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
    }
}
