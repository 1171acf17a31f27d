//! M-partial orders: `X(M)`, the chain forest `Fr`, `Y(M) = Fr(X(M))`, and the
//! Ramsey decision procedure built on linearity of `X(M)`.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::{Elem, Monoid};
use crate::poset::Poset;

/// Largest base poset `fr` accepts unless the guard is lifted.
pub const FR_GUARD: usize = 20;

/// What the points of an acted poset stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// Principal right ideals; members are the elements of each R-class.
    RClasses,
    /// Nonempty chains of a base poset; members are sorted base points.
    Chains,
    /// Anything else; members are empty.
    Plain,
}

/// A finite partial order with an order-preserving monoid action.
#[derive(Clone, Debug)]
pub struct ActedPoset {
    monoid: Arc<Monoid>,
    poset: Poset,
    /// `action[a * n + x]` is `a·x`.
    action: Vec<usize>,
    kind: PointKind,
    members: Vec<Vec<usize>>,
    base: Option<Arc<ActedPoset>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionViolation {
    Order(crate::poset::OrderViolation),
    IdentityMoves { point: usize },
    NotAnAction { a: Elem, b: Elem, point: usize },
    NotMonotone { a: Elem, x: usize, y: usize },
    BadTable,
}

impl ActedPoset {
    /// Wraps a poset and an action table (`action[a][x]`), checking the
    /// action laws and monotonicity.
    pub fn new(
        monoid: Arc<Monoid>,
        poset: Poset,
        action: Vec<Vec<usize>>,
    ) -> std::result::Result<Self, ActionViolation> {
        let n = poset.len();
        if action.len() != monoid.size() || action.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(ActionViolation::BadTable);
        }
        let p = ActedPoset {
            monoid,
            poset,
            action: action.into_iter().flatten().collect(),
            kind: PointKind::Plain,
            members: vec![Vec::new(); n],
            base: None,
        };
        p.check_axioms()?;
        Ok(p)
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn kind(&self) -> &PointKind {
        &self.kind
    }

    /// Descriptor of a point: R-class elements or chain members.
    pub fn members(&self, x: usize) -> &[usize] {
        &self.members[x]
    }

    /// The poset this one was built from by `fr`, if any.
    pub fn base(&self) -> Option<&Arc<ActedPoset>> {
        self.base.as_ref()
    }

    #[inline]
    pub fn act(&self, a: Elem, x: usize) -> usize {
        self.action[a * self.len() + x]
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn label(&self, x: usize) -> &str {
        self.poset.label(x)
    }

    /// Point containing monoid element `a`, for `X(M)`.
    pub fn class_of(&self, a: Elem) -> Option<usize> {
        if self.kind != PointKind::RClasses {
            return None;
        }
        self.members.iter().position(|m| m.contains(&a))
    }

    /// Verifies order axioms, the action laws and monotonicity.
    pub fn check_axioms(&self) -> std::result::Result<(), ActionViolation> {
        self.poset.check_order().map_err(ActionViolation::Order)?;
        let m = &self.monoid;
        let n = self.len();
        for x in 0..n {
            if self.act(m.identity(), x) != x {
                return Err(ActionViolation::IdentityMoves { point: x });
            }
        }
        for a in m.elements() {
            for b in m.elements() {
                let ab = m.mul(a, b);
                for x in 0..n {
                    if self.act(ab, x) != self.act(a, self.act(b, x)) {
                        return Err(ActionViolation::NotAnAction { a, b, point: x });
                    }
                }
            }
        }
        for a in m.elements() {
            for (x, y) in self.poset.relation_pairs() {
                if !self.leq(self.act(a, x), self.act(a, y)) {
                    return Err(ActionViolation::NotMonotone { a, x, y });
                }
            }
        }
        Ok(())
    }

    /// First `(y, a)` where `{a·x : x <= y} != {x : x <= a·y}`, if any.
    pub fn strong_witness(&self) -> Option<(usize, Elem)> {
        let n = self.len();
        let m = &self.monoid;
        (0..n)
            .into_par_iter()
            .find_map_first(|y| {
                let below = self.poset.down_set(y);
                m.elements().find_map(|a| {
                    let mut image = FixedBitSet::with_capacity(n);
                    for x in below.ones() {
                        image.insert(self.act(a, x));
                    }
                    (&image != self.poset.down_set(self.act(a, y))).then_some((y, a))
                })
            })
    }

    pub fn is_strong(&self) -> bool {
        self.strong_witness().is_none()
    }

    /// First incomparable pair, if the order is not total.
    pub fn linearity_witness(&self) -> Option<(usize, usize)> {
        self.poset.incomparable_pair()
    }

    pub fn is_linear(&self) -> bool {
        self.poset.is_linear()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        self.poset.maximal_elements()
    }

    /// The first longest maximal point: for `Y(M)` a maximal chain of
    /// `X(M)` of greatest length, above the class of the identity.
    pub fn top_chain(&self) -> usize {
        let max = self.maximal_elements();
        let best = max.iter().map(|&p| self.members[p].len()).max().unwrap_or(0);
        *max.iter()
            .find(|&&p| self.members[p].len() == best)
            .expect("finite posets have maximal points")
    }

    /// Point with the given sorted member list.
    pub fn find_point(&self, members: &[usize]) -> Option<usize> {
        self.members.iter().position(|m| m == members)
    }

    /// JSON export: labels, cover relation and action table.
    pub fn export(&self) -> PosetExport {
        let n = self.len();
        let points = (0..n)
            .map(|x| match self.kind {
                PointKind::RClasses => self.members[x].iter().map(|&e| self.monoid.label(e)).collect(),
                PointKind::Chains => {
                    let base = self.base.as_ref().expect("chains have a base");
                    self.members[x].iter().map(|&p| base.label(p).to_string()).collect()
                }
                PointKind::Plain => vec![self.label(x).to_string()],
            })
            .collect();
        PosetExport {
            points,
            labels: self.poset.labels().to_vec(),
            covers: self.poset.hasse_edges(),
            action: self
                .monoid
                .elements()
                .map(|a| (0..n).map(|x| self.act(a, x)).collect())
                .collect(),
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.poset.to_dot(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetExport {
    pub points: Vec<Vec<String>>,
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    pub action: Vec<Vec<usize>>,
}

/// `X(M)`: principal right ideals under inclusion, `M` acting by left
/// translation. Points are ordered by their least element.
pub fn x_of(monoid: &Arc<Monoid>) -> ActedPoset {
    let m = monoid.as_ref();
    let classes = m.r_classes();
    let ideals: Vec<FixedBitSet> = classes
        .iter()
        .map(|c| {
            let mut s = FixedBitSet::with_capacity(m.size());
            s.extend(m.principal_right_ideal(c[0]));
            s
        })
        .collect();
    let mut class_of = vec![0; m.size()];
    for (i, c) in classes.iter().enumerate() {
        for &e in c {
            class_of[e] = i;
        }
    }
    let n = classes.len();
    let labels = classes.iter().map(|c| format!("[{}]", m.label(c[0]))).collect();
    let up = (0..n)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n);
            for j in 0..n {
                if ideals[i].is_subset(&ideals[j]) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let poset = Poset::from_up_sets(labels, up);
    let mut action = Vec::with_capacity(m.size() * n);
    for a in m.elements() {
        for c in &classes {
            action.push(class_of[m.mul(a, c[0])]);
        }
    }
    ActedPoset {
        monoid: monoid.clone(),
        poset,
        action,
        kind: PointKind::RClasses,
        members: classes,
        base: None,
    }
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit && !crate::guard_lifted() {
        return Err(Error::GuardExceeded { what, size, limit });
    }
    Ok(())
}

/// `Fr(P)`: all nonempty chains of `P` ordered by end-extension, with the
/// pointwise action. Points are sorted member lists in lexicographic order.
pub fn fr(base: &Arc<ActedPoset>) -> Result<ActedPoset> {
    let n = base.len();
    guard("fr base poset", n, FR_GUARD)?;
    if n > 64 {
        return Err(Error::GuardExceeded {
            what: "fr base poset (hard limit)",
            size: n,
            limit: 64,
        });
    }
    let bp = base.poset();
    let mask_of = |s: &FixedBitSet| s.ones().fold(0u64, |acc, i| acc | (1 << i));
    let strict_up: Vec<u64> = (0..n).map(|i| mask_of(bp.up_set(i)) & !(1 << i)).collect();
    let comparable: Vec<u64> = (0..n)
        .map(|i| mask_of(bp.up_set(i)) | mask_of(bp.down_set(i)))
        .collect();

    // Depth-first extension by increasing index yields lexicographic order.
    let mut chains: Vec<u64> = Vec::new();
    let mut stack: Vec<(u64, usize, u64)> = (0..n).rev().map(|i| (1u64 << i, i, comparable[i])).collect();
    while let Some((mask, last, allowed)) = stack.pop() {
        chains.push(mask);
        for j in (last + 1..n).rev() {
            if allowed & (1 << j) != 0 {
                stack.push((mask | (1 << j), j, allowed & comparable[j]));
            }
        }
    }
    let count = chains.len();
    let index: HashMap<u64, usize> = chains.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let members: Vec<Vec<usize>> = chains
        .iter()
        .map(|&c| (0..n).filter(|&i| c & (1 << i) != 0).collect())
        .collect();
    let top: Vec<usize> = members
        .iter()
        .map(|ms| {
            *ms.iter()
                .find(|&&i| ms.iter().all(|&j| bp.leq(j, i)))
                .expect("chain has a maximum")
        })
        .collect();

    let up: Vec<FixedBitSet> = (0..count)
        .into_par_iter()
        .map(|x| {
            let cx = chains[x];
            let above = strict_up[top[x]];
            let mut row = FixedBitSet::with_capacity(count);
            for (y, &cy) in chains.iter().enumerate() {
                if cx & !cy == 0 && (cy & !cx) & !above == 0 {
                    row.insert(y);
                }
            }
            row
        })
        .collect();
    let labels = members
        .iter()
        .map(|ms| {
            let inner: Vec<&str> = ms.iter().map(|&i| base.label(i)).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    let poset = Poset::from_up_sets(labels, up);

    let m = base.monoid();
    let mut action = Vec::with_capacity(m.size() * count);
    for a in m.elements() {
        for &c in &chains {
            let image = (0..n)
                .filter(|&i| c & (1 << i) != 0)
                .fold(0u64, |acc, i| acc | (1 << base.act(a, i)));
            action.push(index[&image]);
        }
    }
    Ok(ActedPoset {
        monoid: m.clone(),
        poset,
        action,
        kind: PointKind::Chains,
        members,
        base: Some(base.clone()),
    })
}

/// `Y(M) = Fr(X(M))`.
pub fn y_of(monoid: &Arc<Monoid>) -> Result<ActedPoset> {
    fr(&Arc::new(x_of(monoid)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpimorphismFailure {
    NotFromFr,
    NotOnto { point: usize },
    NotEquivariant { a: Elem, chain: usize },
    OrderMissing { x: usize, y: usize },
    OrderExtra { x: usize, y: usize },
}

/// `π(x) = max x` from `Fr(P)` onto `P`, verified to be an epimorphism:
/// onto, equivariant, and carrying `<=` onto `<=`.
pub fn pi_max(forest: &ActedPoset, base: &ActedPoset) -> std::result::Result<Vec<usize>, EpimorphismFailure> {
    if forest.kind != PointKind::Chains || forest.base.as_ref().map(|b| b.len()) != Some(base.len()) {
        return Err(EpimorphismFailure::NotFromFr);
    }
    let bp = base.poset();
    let pi: Vec<usize> = forest
        .members
        .iter()
        .map(|ms| {
            *ms.iter()
                .find(|&&i| ms.iter().all(|&j| bp.leq(j, i)))
                .expect("chain has a maximum")
        })
        .collect();
    let mut hit = vec![false; base.len()];
    for &p in &pi {
        hit[p] = true;
    }
    if let Some(point) = hit.iter().position(|h| !h) {
        return Err(EpimorphismFailure::NotOnto { point });
    }
    for a in forest.monoid.elements() {
        for x in 0..forest.len() {
            if pi[forest.act(a, x)] != base.act(a, pi[x]) {
                return Err(EpimorphismFailure::NotEquivariant { a, chain: x });
            }
        }
    }
    let n = base.len();
    let mut image = vec![FixedBitSet::with_capacity(n); n];
    for x in 0..forest.len() {
        for y in forest.poset.up_set(x).ones() {
            image[pi[x]].insert(pi[y]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            match (bp.leq(x, y), image[x].contains(y)) {
                (true, false) => return Err(EpimorphismFailure::OrderMissing { x, y }),
                (false, true) => return Err(EpimorphismFailure::OrderExtra { x, y }),
                _ => {}
            }
        }
    }
    Ok(pi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrLawReport {
    pub chains: usize,
    /// `(chain members, a)` where `a` maps the initial segments of the chain
    /// onto something other than the initial segments of its image.
    pub strong_failure: Option<(Vec<usize>, Elem)>,
    pub pi_failure: Option<EpimorphismFailure>,
}

impl FrLawReport {
    pub fn passed(&self) -> bool {
        self.strong_failure.is_none() && self.pi_failure.is_none()
    }
}

/// Strongness of `Fr(P)` and the epimorphism `π(x) = max x`, checked on
/// chain bitmasks without building the order. Below a chain under
/// end-extension lie exactly its nonempty initial segments.
pub fn fr_laws_implicit(base: &ActedPoset) -> Result<FrLawReport> {
    let n = base.len();
    if n > 64 {
        return Err(Error::GuardExceeded {
            what: "fr base poset (hard limit)",
            size: n,
            limit: 64,
        });
    }
    let bp = base.poset();
    let bit = |i: usize| 1u64 << i;
    let mask_of = |s: &FixedBitSet| s.ones().fold(0u64, |acc, i| acc | bit(i));
    let comparable: Vec<u64> = (0..n).map(|i| mask_of(bp.up_set(i)) | mask_of(bp.down_set(i))).collect();
    let height: Vec<usize> = (0..n).map(|i| bp.down_set(i).count_ones(..)).collect();

    let mut chains: Vec<u64> = Vec::new();
    let mut stack: Vec<(u64, usize, u64)> = (0..n).map(|i| (bit(i), i, comparable[i])).collect();
    while let Some((mask, last, allowed)) = stack.pop() {
        chains.push(mask);
        for j in last + 1..n {
            if allowed & bit(j) != 0 {
                stack.push((mask | bit(j), j, allowed & comparable[j]));
            }
        }
    }
    chains.sort_unstable();
    // points by height: a chain listed in this order is listed bottom-up
    let mut by_height: Vec<usize> = (0..n).collect();
    by_height.sort_by_key(|&i| height[i]);
    let ones = |c: u64| {
        let mut c = c;
        std::iter::from_fn(move || {
            (c != 0).then(|| {
                let i = c.trailing_zeros() as usize;
                c &= c - 1;
                i
            })
        })
    };
    let ascending = |c: u64| -> Vec<usize> { by_height.iter().copied().filter(|&i| c & bit(i) != 0).collect() };
    let prefixes = |c: u64| -> Vec<u64> {
        let mut acc = 0u64;
        by_height
            .iter()
            .filter(|&&i| c & bit(i) != 0)
            .map(|&i| {
                acc |= bit(i);
                acc
            })
            .collect()
    };
    let m = base.monoid();
    let image = |a: Elem, c: u64| ones(c).fold(0u64, |acc, i| acc | bit(base.act(a, i)));
    let top = |c: u64| *by_height.iter().rev().find(|&&i| c & bit(i) != 0).expect("nonempty chain");

    let failures: Vec<(Option<(Vec<usize>, Elem)>, Option<EpimorphismFailure>, Vec<(usize, usize)>)> = chains
        .par_iter()
        .map(|&c| {
            let below = prefixes(c);
            let mut strong = None;
            let mut pi = None;
            let (mut lhs, mut rhs) = (Vec::with_capacity(below.len()), Vec::with_capacity(below.len()));
            for a in m.elements() {
                let ac = image(a, c);
                lhs.clear();
                lhs.extend(below.iter().map(|&d| image(a, d)));
                lhs.sort_unstable();
                lhs.dedup();
                rhs.clear();
                let mut acc = 0u64;
                rhs.extend(by_height.iter().filter(|&&i| ac & bit(i) != 0).map(|&i| {
                    acc |= bit(i);
                    acc
                }));
                rhs.sort_unstable();
                if strong.is_none() && lhs != rhs {
                    strong = Some((ascending(c), a));
                }
                if pi.is_none() && top(ac) != base.act(a, top(c)) {
                    pi = Some(EpimorphismFailure::NotEquivariant { a, chain: 0 });
                }
            }
            let pairs = below.iter().map(|&d| (top(d), top(c))).collect();
            (strong, pi, pairs)
        })
        .collect();
    let mut strong_failure = None;
    let mut pi_failure = None;
    let mut related = vec![FixedBitSet::with_capacity(n); n];
    for (idx, (s, p, pairs)) in failures.into_iter().enumerate() {
        strong_failure = strong_failure.or(s);
        if pi_failure.is_none() {
            pi_failure = p.map(|f| match f {
                EpimorphismFailure::NotEquivariant { a, .. } => EpimorphismFailure::NotEquivariant { a, chain: idx },
                other => other,
            });
        }
        for (x, y) in pairs {
            related[x].insert(y);
        }
    }
    if pi_failure.is_none() {
        'order: for x in 0..n {
            for y in 0..n {
                match (bp.leq(x, y), related[x].contains(y)) {
                    (true, false) => {
                        pi_failure = Some(EpimorphismFailure::OrderMissing { x, y });
                        break 'order;
                    }
                    (false, true) => {
                        pi_failure = Some(EpimorphismFailure::OrderExtra { x, y });
                        break 'order;
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(FrLawReport {
        chains: chains.len(),
        strong_failure,
        pi_failure,
    })
}

/// Outcome of the Ramsey decision procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RamseyVerdict {
    /// `X(M)` is linear and `M` is almost R-trivial.
    Ramsey,
    /// `X(M)` has incomparable classes `[a]` and `[b]`.
    NotRamsey {
        a: Elem,
        b: Elem,
        class_a: usize,
        class_b: usize,
    },
    /// `X(M)` is linear but `M` is not almost R-trivial.
    Undetermined,
}

impl RamseyVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            RamseyVerdict::Ramsey => "Ramsey",
            RamseyVerdict::NotRamsey { .. } => "NotRamsey",
            RamseyVerdict::Undetermined => "Undetermined",
        }
    }
}

/// Decides whether `M` is Ramsey from the shape of `X(M)`.
pub fn decide_ramsey(monoid: &Arc<Monoid>) -> RamseyVerdict {
    decide_with_x(&x_of(monoid))
}

pub fn decide_with_x(x: &ActedPoset) -> RamseyVerdict {
    match x.linearity_witness() {
        Some((p, q)) => RamseyVerdict::NotRamsey {
            a: x.members(p)[0],
            b: x.members(q)[0],
            class_a: p,
            class_b: q,
        },
        None if x.monoid().is_almost_r_trivial() => RamseyVerdict::Ramsey,
        None => RamseyVerdict::Undetermined,
    }
}
