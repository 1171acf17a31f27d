//! Finite monoids stored as dense multiplication tables.
//!
//! Elements are indices `0..size`; `table[a][b]` is the product `ab` (row is
//! the left factor). Labels are display metadata only.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element in its monoid.
pub type Elem = usize;

/// The JSON form of a monoid. Entries are signed so that negative values in
/// hand-written files surface as range violations instead of parse errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidJson {
    pub name: String,
    pub size: usize,
    pub identity: i64,
    pub table: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyMonoid,
    IdentityOutOfRange { identity: i64 },
    RowCount { expected: usize, found: usize },
    RaggedRow { row: usize, len: usize },
    OutOfRange { left: usize, right: usize, value: i64 },
    LeftIdentity { element: usize, product: usize },
    RightIdentity { element: usize, product: usize },
    NotAssociative { a: usize, b: usize, c: usize },
    LabelCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyMonoid => write!(f, "size is zero"),
            Violation::IdentityOutOfRange { identity } => {
                write!(f, "identity {identity} out of range")
            }
            Violation::RowCount { expected, found } => {
                write!(f, "expected {expected} rows, found {found}")
            }
            Violation::RaggedRow { row, len } => write!(f, "row {row} has length {len}"),
            Violation::OutOfRange { left, right, value } => {
                write!(f, "entry ({left},{right}) = {value} out of range")
            }
            Violation::LeftIdentity { element, product } => {
                write!(f, "1*{element} = {product}")
            }
            Violation::RightIdentity { element, product } => {
                write!(f, "{element}*1 = {product}")
            }
            Violation::NotAssociative { a, b, c } => {
                write!(f, "({a}{b}){c} != {a}({b}{c})")
            }
            Violation::LabelCount { expected, found } => {
                write!(f, "expected {expected} labels, found {found}")
            }
        }
    }
}

/// Every violated invariant of a candidate table; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a raw table against the monoid axioms and reports all violations.
/// Associativity is only examined once the table is rectangular and in range.
pub fn validate(raw: &MonoidJson) -> ValidationReport {
    let mut violations = Vec::new();
    let n = raw.size;
    if n == 0 {
        violations.push(Violation::EmptyMonoid);
    }
    let identity_ok = raw.identity >= 0 && (raw.identity as usize) < n;
    if !identity_ok {
        violations.push(Violation::IdentityOutOfRange {
            identity: raw.identity,
        });
    }
    if raw.table.len() != n {
        violations.push(Violation::RowCount {
            expected: n,
            found: raw.table.len(),
        });
    }
    let mut well_formed = raw.table.len() == n && n > 0;
    for (r, row) in raw.table.iter().enumerate() {
        if row.len() != n {
            violations.push(Violation::RaggedRow {
                row: r,
                len: row.len(),
            });
            well_formed = false;
        }
        for (c, &v) in row.iter().enumerate() {
            if v < 0 || v as usize >= n {
                violations.push(Violation::OutOfRange {
                    left: r,
                    right: c,
                    value: v,
                });
                well_formed = false;
            }
        }
    }
    if let Some(labels) = &raw.labels {
        if labels.len() != n {
            violations.push(Violation::LabelCount {
                expected: n,
                found: labels.len(),
            });
        }
    }
    if well_formed {
        let t = |a: usize, b: usize| raw.table[a][b] as usize;
        if identity_ok {
            let e = raw.identity as usize;
            for j in 0..n {
                if t(e, j) != j {
                    violations.push(Violation::LeftIdentity {
                        element: j,
                        product: t(e, j),
                    });
                }
                if t(j, e) != j {
                    violations.push(Violation::RightIdentity {
                        element: j,
                        product: t(j, e),
                    });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = t(a, b);
                for c in 0..n {
                    if t(ab, c) != t(a, t(b, c)) {
                        violations.push(Violation::NotAssociative { a, b, c });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A finite monoid. Immutable once built; every constructor validates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    name: String,
    size: usize,
    identity: Elem,
    table: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl Monoid {
    /// Builds a monoid from a full table, checking every axiom.
    pub fn from_table(
        name: impl Into<String>,
        identity: Elem,
        table: Vec<Vec<Elem>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let raw = MonoidJson {
            name: name.into(),
            size: table.len(),
            identity: identity as i64,
            table: table
                .iter()
                .map(|r| r.iter().map(|&v| v as i64).collect())
                .collect(),
            labels,
        };
        Self::from_json(raw)
    }

    pub fn from_json(raw: MonoidJson) -> Result<Self> {
        let report = validate(&raw);
        if !report.is_valid() {
            return Err(Error::InvalidMonoid(report));
        }
        let n = raw.size;
        let table = raw
            .table
            .iter()
            .flat_map(|r| r.iter().map(|&v| v as usize))
            .collect();
        Ok(Monoid {
            name: raw.name,
            size: n,
            identity: raw.identity as usize,
            table,
            labels: raw.labels,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MonoidJson =
            serde_json::from_str(s).map_err(|e| Error::Input(format!("monoid JSON: {e}")))?;
        Self::from_json(raw)
    }

    pub fn to_json(&self) -> MonoidJson {
        MonoidJson {
            name: self.name.clone(),
            size: self.size,
            identity: self.identity as i64,
            table: (0..self.size)
                .map(|a| (0..self.size).map(|b| self.mul(a, b) as i64).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("monoid serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element; falls back to its index.
    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    /// Element carrying the given label, if any.
    pub fn find(&self, label: &str) -> Option<Elem> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse().ok().filter(|&i: &usize| i < self.size),
        }
    }

    /// Table lookup for `ab`. Panics on out-of-range indices.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.size + b]
    }

    /// Checked product.
    pub fn multiply(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Left-to-right product of a sequence; the empty product is the identity.
    pub fn product(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems
            .into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn check(&self, a: Elem) -> Result<()> {
        if a < self.size {
            Ok(())
        } else {
            Err(Error::BadElement {
                element: a,
                size: self.size,
            })
        }
    }

    /// Re-runs the full axiom check on this table.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_json())
    }

    /// The principal right ideal `aM`, sorted.
    pub fn principal_right_ideal(&self, a: Elem) -> Vec<Elem> {
        let mut seen = vec![false; self.size];
        for m in self.elements() {
            seen[self.mul(a, m)] = true;
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    }

    /// True iff `a` lies in `bM`.
    pub fn in_right_ideal(&self, a: Elem, b: Elem) -> bool {
        self.elements().any(|m| self.mul(b, m) == a)
    }

    /// Partition into R-classes, blocks ordered by their least element.
    pub fn r_classes(&self) -> Vec<Vec<Elem>> {
        let mut by_ideal: BTreeMap<Vec<Elem>, Vec<Elem>> = BTreeMap::new();
        let mut order = Vec::new();
        for a in self.elements() {
            let ideal = self.principal_right_ideal(a);
            let block = by_ideal.entry(ideal.clone()).or_default();
            if block.is_empty() {
                order.push(ideal);
            }
            block.push(a);
        }
        order
            .into_iter()
            .map(|k| by_ideal.remove(&k).unwrap())
            .collect()
    }

    pub fn is_r_trivial(&self) -> bool {
        self.r_classes().iter().all(|b| b.len() == 1)
    }

    /// Every element with a non-singleton R-class is fixed by all left
    /// multiplications.
    pub fn is_almost_r_trivial(&self) -> bool {
        self.r_classes()
            .iter()
            .filter(|b| b.len() > 1)
            .flatten()
            .all(|&b| self.elements().all(|a| self.mul(a, b) == b))
    }

    /// The submonoid on `subset`, reindexed in increasing order of the
    /// original indices. Returns the monoid and the original index of each
    /// new element.
    pub fn submonoid(&self, subset: &[Elem]) -> Result<(Monoid, Vec<Elem>)> {
        let mut members: Vec<Elem> = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            self.check(m)?;
        }
        if !members.contains(&self.identity) {
            return Err(Error::MissingIdentity);
        }
        let mut new_index = vec![usize::MAX; self.size];
        for (i, &m) in members.iter().enumerate() {
            new_index[m] = i;
        }
        let mut table = Vec::with_capacity(members.len());
        for &a in &members {
            let mut row = Vec::with_capacity(members.len());
            for &b in &members {
                let p = self.mul(a, b);
                if new_index[p] == usize::MAX {
                    return Err(Error::NotClosed {
                        left: a,
                        right: b,
                        product: p,
                    });
                }
                row.push(new_index[p]);
            }
            table.push(row);
        }
        let labels = Some(members.iter().map(|&m| self.label(m)).collect());
        let sub = Monoid::from_table(
            format!("{}|sub", self.name),
            new_index[self.identity],
            table,
            labels,
        )?;
        Ok((sub, members))
    }

    /// True iff `f` preserves products and the identity.
    pub fn is_endomorphism(&self, f: &[Elem]) -> bool {
        if f.len() != self.size || f.iter().any(|&x| x >= self.size) {
            return false;
        }
        if f[self.identity] != self.identity {
            return false;
        }
        self.elements()
            .all(|a| self.elements().all(|b| f[self.mul(a, b)] == self.mul(f[a], f[b])))
    }

    /// Checks that `iso` is a product-preserving bijection onto `other`.
    /// Returns the first offending pair on failure.
    pub fn check_isomorphism(&self, other: &Monoid, iso: &[Elem]) -> std::result::Result<(), (Elem, Elem)> {
        if iso.len() != self.size || other.size != self.size {
            return Err((usize::MAX, usize::MAX));
        }
        let mut hit = vec![false; other.size];
        for (a, &x) in iso.iter().enumerate() {
            if x >= other.size || hit[x] {
                return Err((a, a));
            }
            hit[x] = true;
        }
        for a in self.elements() {
            for b in self.elements() {
                if iso[self.mul(a, b)] != other.mul(iso[a], iso[b]) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn raw(size: usize, identity: i64, table: Vec<Vec<i64>>) -> MonoidJson {
        MonoidJson {
            name: "t".into(),
            size,
            identity,
            table,
            labels: None,
        }
    }

    #[test]
    fn trivial_and_gowers_validate() {
        assert!(validate(&raw(1, 0, vec![vec![0]])).is_valid());
        assert!(families::gowers(3).unwrap().validate().is_valid());
    }

    #[test]
    fn out_of_range_entry_reported_with_witness() {
        let r = validate(&raw(2, 0, vec![vec![0, 1], vec![1, 2]]));
        assert_eq!(
            r.violations,
            vec![Violation::OutOfRange {
                left: 1,
                right: 1,
                value: 2
            }]
        );
    }

    #[test]
    fn ragged_rows_do_not_panic() {
        let r = validate(&raw(2, 0, vec![vec![0, 1], vec![1]]));
        assert!(r
            .violations
            .contains(&Violation::RaggedRow { row: 1, len: 1 }));
        let r = validate(&raw(3, 5, vec![vec![0]]));
        assert!(r.violations.len() >= 3);
    }

    #[test]
    fn all_associativity_failures_reported() {
        // identity 0; 1*1 = 2, 2*2 = 1, 1*2 = 1, 2*1 = 2 is not associative
        let r = validate(&raw(
            3,
            0,
            vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 1]],
        ));
        let count = r
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::NotAssociative { .. }))
            .count();
        assert!(count > 1);
    }

    #[test]
    fn multiply_checks_range() {
        let g = families::gowers(3).unwrap();
        assert_eq!(g.multiply(1, 2).unwrap(), 2);
        assert!(g.multiply(3, 0).is_err());
    }

    #[test]
    fn left_zeros_are_r_trivial_right_zeros_are_not() {
        let labels = Some(vec!["1".into(), "x".into(), "y".into()]);
        // xy = x, yx = y: xM = {x}
        let lz = Monoid::from_table(
            "lz",
            0,
            vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            labels.clone(),
        )
        .unwrap();
        assert!(lz.is_r_trivial());
        // xy = y, yx = x: xM = yM = {x, y}, and every a fixes x and y from the left
        let rz = Monoid::from_table(
            "rz",
            0,
            vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]],
            labels,
        )
        .unwrap();
        assert_eq!(rz.r_classes(), vec![vec![0], vec![1, 2]]);
        assert!(!rz.is_r_trivial());
        assert!(rz.is_almost_r_trivial());
    }

    #[test]
    fn cyclic_group_is_not_almost_r_trivial() {
        let z2 = Monoid::from_table("Z_2", 0, vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(z2.r_classes(), vec![vec![0, 1]]);
        assert!(!z2.is_almost_r_trivial());
    }

    #[test]
    fn submonoid_errors() {
        let g = families::gowers(3).unwrap();
        assert!(matches!(g.submonoid(&[1, 2]), Err(Error::MissingIdentity)));
        assert!(matches!(
            g.submonoid(&[0, 1]),
            Err(Error::NotClosed { left: 1, right: 1, product: 2 })
        ));
        let (s, idx) = g.submonoid(&[0, 2]).unwrap();
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(s.mul(1, 1), 1);
        let (t, _) = g.submonoid(&[0]).unwrap();
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn endomorphism_checks() {
        let g2 = families::gowers(2).unwrap();
        assert!(g2.is_endomorphism(&[0, 1]));
        assert!(!g2.is_endomorphism(&[1, 0]));
        let g3 = families::gowers(3).unwrap();
        // collapsing everything to the identity is a homomorphism
        assert!(g3.is_endomorphism(&[0, 0, 0]));
        assert!(!g3.is_endomorphism(&[0, 2, 1]));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let j = families::family_j(&["a1", "a2"], &["b"]).unwrap();
        let s = j.to_json_string();
        let back = Monoid::from_json_str(&s).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_json_string(), s);
        let plain = r#"{"name":"g","size":2,"identity":0,"table":[[0,1],[1,1]]}"#;
        assert_eq!(Monoid::from_json_str(plain).unwrap().to_json_string(), plain);
    }
}
