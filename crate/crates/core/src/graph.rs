//! Directed edge sets over the points of a metric space.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A set of ordered pairs `(tail, head)` with no self-loops.
///
/// Points are zero-based. Text and DOT renderings are one-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdgeSet {
    edges: BTreeSet<(usize, usize)>,
}

impl DirectedEdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = Self::new();
        for (x, y) in pairs {
            set.insert(x, y)?;
        }
        Ok(set)
    }

    /// Builds from one-based pairs as they appear in files and on the command line.
    pub fn from_one_based(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = Self::new();
        for (x, y) in pairs {
            if x == 0 || y == 0 {
                return Err(Error::Parse("point labels start at 1".into()));
            }
            set.insert(x - 1, y - 1)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, tail: usize, head: usize) -> Result<bool> {
        if tail == head {
            return Err(Error::SelfLoop(tail));
        }
        Ok(self.edges.insert((tail, head)))
    }

    pub fn remove(&mut self, tail: usize, head: usize) -> bool {
        self.edges.remove(&(tail, head))
    }

    pub fn contains(&self, tail: usize, head: usize) -> bool {
        self.edges.contains(&(tail, head))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.edges.is_subset(&other.edges)
    }

    /// Largest point index mentioned plus one.
    pub fn support_bound(&self) -> usize {
        self.iter().map(|(x, y)| x.max(y) + 1).max().unwrap_or(0)
    }

    pub fn check_points(&self, n_points: usize) -> Result<()> {
        match self
            .iter()
            .flat_map(|(x, y)| [x, y])
            .find(|&p| p >= n_points)
        {
            Some(p) => Err(Error::UnknownPoint(p)),
            None => Ok(()),
        }
    }

    pub fn outdegrees(&self, n_points: usize) -> Vec<usize> {
        let mut deg = vec![0; n_points];
        for (x, _) in self.iter() {
            deg[x] += 1;
        }
        deg
    }

    pub fn indegrees(&self, n_points: usize) -> Vec<usize> {
        let mut deg = vec![0; n_points];
        for (_, y) in self.iter() {
            deg[y] += 1;
        }
        deg
    }

    /// First point with both incoming and outgoing edges, if any.
    pub fn orientation_conflict(&self, n_points: usize) -> Option<usize> {
        let out = self.outdegrees(n_points);
        let inc = self.indegrees(n_points);
        (0..n_points).find(|&p| out[p] > 0 && inc[p] > 0)
    }

    /// Connected components of the undirected view over `n_points` vertices,
    /// isolated vertices included.
    pub fn component_count(&self, n_points: usize) -> usize {
        let mut dsu = Dsu::new(n_points);
        let mut count = n_points;
        for (x, y) in self.iter() {
            if dsu.union(x, y) {
                count -= 1;
            }
        }
        count
    }

    /// True when the undirected view has no cycle; antiparallel pairs count as a cycle.
    pub fn is_forest(&self) -> bool {
        let mut dsu = Dsu::new(self.support_bound());
        self.iter().all(|(x, y)| dsu.union(x, y))
    }

    /// Undirected adjacency lists.
    pub fn neighbors(&self, n_points: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n_points];
        for (x, y) in self.iter() {
            adj[x].push(y);
            adj[y].push(x);
        }
        adj
    }

    /// Bit `tail * n_points + head` per edge; a compact canonical key.
    pub fn mask(&self, n_points: usize) -> u128 {
        debug_assert!(n_points * n_points <= 128);
        self.iter()
            .fold(0u128, |m, (x, y)| m | (1u128 << (x * n_points + y)))
    }

    pub fn from_mask(mask: u128, n_points: usize) -> Self {
        let edges = (0..n_points * n_points)
            .filter(|bit| mask >> bit & 1 == 1)
            .map(|bit| (bit / n_points, bit % n_points))
            .collect();
        Self { edges }
    }

    /// One-based `[x, y]` pairs.
    pub fn to_one_based(&self) -> Vec<[usize; 2]> {
        self.iter().map(|(x, y)| [x + 1, y + 1]).collect()
    }

    pub fn to_dot(&self, n_points: usize, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n");
        for p in 0..n_points {
            out.push_str(&format!("  {} [label=\"{}\"];\n", p + 1, p + 1));
        }
        for (x, y) in self.iter() {
            out.push_str(&format!("  {} -> {};\n", x + 1, y + 1));
        }
        out.push_str("}\n");
        out
    }
}

/// Comma separated one-based `x>y` list.
impl fmt::Display for DirectedEdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(x, y)| format!("{}>{}", x + 1, y + 1))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for DirectedEdgeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (x, y) = part
                .split_once('>')
                .ok_or_else(|| Error::Parse(format!("edge {part:?} is not of the form x>y")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad point label in {part:?}")))
            };
            pairs.push((parse(x)?, parse(y)?));
        }
        Self::from_one_based(pairs)
    }
}

impl FromIterator<(usize, usize)> for DirectedEdgeSet {
    /// Panics on a self-loop; use [`DirectedEdgeSet::from_pairs`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Self::from_pairs(iter).expect("self-loop in edge list")
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
