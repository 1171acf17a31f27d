//! Finite partial orders stored as up-set and down-set bit rows.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderViolation {
    NotReflexive { point: usize },
    NotAntisymmetric { x: usize, y: usize },
    NotTransitive { x: usize, y: usize, z: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// `up[i]` holds every `j` with `i <= j`.
    up: Vec<FixedBitSet>,
    /// `down[i]` holds every `j` with `j <= i`.
    down: Vec<FixedBitSet>,
}

impl Poset {
    /// Builds a poset from a full relation, rejecting non-orders.
    pub fn from_relation(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> std::result::Result<Self, OrderViolation> {
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    row.insert(j);
                }
            }
        }
        let p = Self::from_up_sets(labels, up);
        p.check_order()?;
        Ok(p)
    }

    /// Reflexive-transitive closure of the given pairs `(x, y)` meaning
    /// `x <= y`. Fails if the closure is not antisymmetric.
    pub fn from_generators(
        labels: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> std::result::Result<Self, OrderViolation> {
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for &(x, y) in pairs {
            up[x].insert(y);
        }
        // Warshall
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let p = Self::from_up_sets(labels, up);
        p.check_order()?;
        Ok(p)
    }

    pub(crate) fn from_up_sets(labels: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].insert(i);
            }
        }
        Poset { labels, up, down }
    }

    /// The antichain on `n` points.
    pub fn discrete(n: usize) -> Self {
        Self::from_generators((0..n).map(|i| format!("p{i}")).collect(), &[]).unwrap()
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_generators((0..n).map(|i| format!("p{i}")).collect(), &pairs).unwrap()
    }

    pub fn check_order(&self) -> std::result::Result<(), OrderViolation> {
        let n = self.len();
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(OrderViolation::NotReflexive { point: i });
            }
        }
        for i in 0..n {
            for j in self.up[i].ones() {
                if j != i && self.leq(j, i) {
                    return Err(OrderViolation::NotAntisymmetric { x: i, y: j });
                }
                for k in self.up[j].ones() {
                    if !self.leq(i, k) {
                        return Err(OrderViolation::NotTransitive { x: i, y: j, z: k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn check_point(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::BadPoint(i))
        }
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Larger of two comparable points.
    pub fn max_of(&self, x: usize, y: usize) -> Option<usize> {
        if self.leq(x, y) {
            Some(y)
        } else if self.leq(y, x) {
            Some(x)
        } else {
            None
        }
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// First incomparable pair `(x, y)` with `x < y` as indices, if any.
    pub fn incomparable_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.comparable(i, j))
    }

    pub fn is_linear(&self) -> bool {
        self.incomparable_pair().is_none()
    }

    /// Points with no strict upper bound.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.up[i].count_ones(..) == 1)
            .collect()
    }

    /// Cover relation: `x < y` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].ones().filter(|&y| y != x) {
                let between = self.up[x]
                    .ones()
                    .any(|z| z != x && z != y && self.lt(z, y));
                if !between {
                    edges.push((x, y));
                }
            }
        }
        edges
    }

    /// Every strict down-set is a chain.
    pub fn is_forest(&self) -> bool {
        (0..self.len()).all(|x| {
            let below: Vec<usize> = self.down[x].ones().filter(|&y| y != x).collect();
            below
                .iter()
                .enumerate()
                .all(|(i, &p)| below[i + 1..].iter().all(|&q| self.comparable(p, q)))
        })
    }

    /// Graphviz rendering of the Hasse diagram, smaller elements at the bottom.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{}\" {{\n  rankdir=BT;\n", name.replace('"', "'"));
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{}\"];\n", l.replace('"', "'")));
        }
        for (x, y) in self.hasse_edges() {
            s.push_str(&format!("  n{x} -> n{y};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// All pairs `(x, y)` with `x <= y`.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.up[x].ones().map(move |y| (x, y)))
            .collect()
    }
}
