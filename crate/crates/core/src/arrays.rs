//! Function arrays: indexed families of partial maps from a base set into a
//! partial semigroup, and their tensor product.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::join::{JoinSemigroup, NormalWord};
use crate::monoid::{Elem, Monoid};

pub trait PartialSemigroup: PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

impl PartialSemigroup for JoinSemigroup {
    type Elem = NormalWord;

    fn product(&self, a: &NormalWord, b: &NormalWord) -> Option<NormalWord> {
        self.join(a, b).ok()
    }
}

/// Index of a function in an array. Tensor products tag indices by side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexLabel {
    Atom(String),
    Left(Box<IndexLabel>),
    Right(Box<IndexLabel>),
    Pair(Box<IndexLabel>, Box<IndexLabel>),
}

impl fmt::Display for IndexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexLabel::Atom(s) => write!(f, "{s}"),
            IndexLabel::Left(l) => write!(f, "L({l})"),
            IndexLabel::Right(r) => write!(f, "R({r})"),
            IndexLabel::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

type MapFn<X, E> = Arc<dyn Fn(&X) -> Option<E> + Send + Sync>;

/// The base of an array: an explicit finite set or a countable enumeration.
#[derive(Clone)]
pub enum BaseSet<X> {
    Finite(Vec<X>),
    Enumerated(Arc<dyn Fn(usize) -> X + Send + Sync>),
}

impl<X: Clone> BaseSet<X> {
    fn candidate(&self, i: usize) -> Option<X> {
        match self {
            BaseSet::Finite(v) => v.get(i).cloned(),
            BaseSet::Enumerated(f) => Some(f(i)),
        }
    }

    fn finite_len(&self) -> Option<usize> {
        match self {
            BaseSet::Finite(v) => Some(v.len()),
            BaseSet::Enumerated(_) => None,
        }
    }
}

/// Inverse Cantor pairing.
fn unpair(n: usize) -> (usize, usize) {
    let w = (((8 * n + 1) as f64).sqrt() as usize - 1) / 2;
    let mut w = w;
    while (w + 1) * (w + 2) / 2 <= n {
        w += 1;
    }
    while w * (w + 1) / 2 > n {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let j = n - t;
    (w - j, j)
}

fn product_base<X0, X1>(b0: &BaseSet<X0>, b1: &BaseSet<X1>) -> BaseSet<(X0, X1)>
where
    X0: Clone + Send + Sync + 'static,
    X1: Clone + Send + Sync + 'static,
{
    match (b0, b1) {
        (BaseSet::Finite(v0), BaseSet::Finite(v1)) => BaseSet::Finite(
            v0.iter()
                .flat_map(|x0| v1.iter().map(move |x1| (x0.clone(), x1.clone())))
                .collect(),
        ),
        (BaseSet::Finite(v0), BaseSet::Enumerated(f1)) => {
            let v0 = v0.clone();
            let f1 = f1.clone();
            let len = v0.len().max(1);
            BaseSet::Enumerated(Arc::new(move |n| (v0[n % len].clone(), f1(n / len))))
        }
        (BaseSet::Enumerated(f0), BaseSet::Finite(v1)) => {
            let v1 = v1.clone();
            let f0 = f0.clone();
            let len = v1.len().max(1);
            BaseSet::Enumerated(Arc::new(move |n| (f0(n / len), v1[n % len].clone())))
        }
        (BaseSet::Enumerated(f0), BaseSet::Enumerated(f1)) => {
            let f0 = f0.clone();
            let f1 = f1.clone();
            BaseSet::Enumerated(Arc::new(move |n| {
                let (i, j) = unpair(n);
                (f0(i), f1(j))
            }))
        }
    }
}

pub struct FunctionArray<S: PartialSemigroup, X> {
    semigroup: Arc<S>,
    indices: Vec<IndexLabel>,
    maps: Vec<MapFn<X, S::Elem>>,
    base: BaseSet<X>,
}

impl<S: PartialSemigroup, X> Clone for FunctionArray<S, X>
where
    X: Clone,
{
    fn clone(&self) -> Self {
        FunctionArray {
            semigroup: self.semigroup.clone(),
            indices: self.indices.clone(),
            maps: self.maps.clone(),
            base: self.base.clone(),
        }
    }
}

/// Result of searching for a base point that satisfies joint definedness.
#[derive(Clone, Debug, PartialEq)]
pub enum DedeOutcome<X> {
    /// Least base point (in enumeration order) that works.
    Witness { index: usize, point: X },
    /// The finite base was searched completely and nothing works.
    Fails,
    /// No witness among the first `searched` candidates of an infinite base.
    BoundExhausted { searched: usize },
}

impl<S, X> FunctionArray<S, X>
where
    S: PartialSemigroup + 'static,
    X: Clone + Send + Sync + 'static,
{
    pub fn new(
        semigroup: Arc<S>,
        entries: Vec<(IndexLabel, MapFn<X, S::Elem>)>,
        base: BaseSet<X>,
    ) -> Self {
        let (indices, maps) = entries.into_iter().unzip();
        FunctionArray {
            semigroup,
            indices,
            maps,
            base,
        }
    }

    pub fn semigroup(&self) -> &Arc<S> {
        &self.semigroup
    }

    pub fn indices(&self) -> &[IndexLabel] {
        &self.indices
    }

    pub fn base(&self) -> &BaseSet<X> {
        &self.base
    }

    pub fn is_point_based(&self) -> bool {
        self.base.finite_len() == Some(1)
    }

    pub fn position(&self, label: &IndexLabel) -> Option<usize> {
        self.indices.iter().position(|l| l == label)
    }

    /// `λ(x)` for the index at position `i`.
    pub fn eval(&self, i: usize, x: &X) -> Option<S::Elem> {
        (self.maps[i])(x)
    }

    pub fn eval_label(&self, label: &IndexLabel, x: &X) -> Option<S::Elem> {
        self.position(label).and_then(|i| self.eval(i, x))
    }

    /// Searches the base for `x` with every `s·λ(x)` defined, scanning at most
    /// `bound` candidates of an enumerated base.
    pub fn check_dede(&self, sample: &[S::Elem], bound: usize) -> DedeOutcome<X> {
        let limit = self.base.finite_len().unwrap_or(bound);
        for index in 0..limit {
            let point = self.base.candidate(index).expect("in range");
            let ok = self.maps.iter().all(|lam| match lam(&point) {
                Some(v) => sample.iter().all(|s| self.semigroup.product(s, &v).is_some()),
                None => false,
            });
            if ok {
                return DedeOutcome::Witness { index, point };
            }
        }
        match self.base.finite_len() {
            Some(_) => DedeOutcome::Fails,
            None => DedeOutcome::BoundExhausted { searched: limit },
        }
    }

    /// `A0 ⊗ A1`, indexed by `Λ0 ⋆ Λ1 = Λ0 ⊔ Λ1 ⊔ (Λ0 × Λ1)` and based on
    /// `X0 × X1`.
    pub fn tensor<Y>(&self, other: &FunctionArray<S, Y>) -> Result<FunctionArray<S, (X, Y)>>
    where
        Y: Clone + Send + Sync + 'static,
    {
        if *self.semigroup != *other.semigroup {
            return Err(Error::SemigroupMismatch);
        }
        let mut entries: Vec<(IndexLabel, MapFn<(X, Y), S::Elem>)> = Vec::new();
        for (l, m) in self.indices.iter().zip(&self.maps) {
            let m = m.clone();
            entries.push((
                IndexLabel::Left(Box::new(l.clone())),
                Arc::new(move |(x0, _): &(X, Y)| m(x0)),
            ));
        }
        for (l, m) in other.indices.iter().zip(&other.maps) {
            let m = m.clone();
            entries.push((
                IndexLabel::Right(Box::new(l.clone())),
                Arc::new(move |(_, x1): &(X, Y)| m(x1)),
            ));
        }
        for (l0, m0) in self.indices.iter().zip(&self.maps) {
            for (l1, m1) in other.indices.iter().zip(&other.maps) {
                let (m0, m1) = (m0.clone(), m1.clone());
                let sg = self.semigroup.clone();
                entries.push((
                    IndexLabel::Pair(Box::new(l0.clone()), Box::new(l1.clone())),
                    Arc::new(move |(x0, x1): &(X, Y)| {
                        let v0 = m0(x0)?;
                        let v1 = m1(x1)?;
                        sg.product(&v0, &v1)
                    }),
                ));
            }
        }
        Ok(FunctionArray::new(
            self.semigroup.clone(),
            entries,
            product_base(&self.base, &other.base),
        ))
    }
}

/// `S(α)`: indexed by `M`, based on the given base, `λ_a(s) = α(a, s)`.
pub fn array_from_action<S, F>(
    monoid: &Monoid,
    semigroup: Arc<S>,
    action: F,
    base: BaseSet<S::Elem>,
) -> FunctionArray<S, S::Elem>
where
    S: PartialSemigroup + 'static,
    F: Fn(Elem, &S::Elem) -> S::Elem + Send + Sync + 'static,
{
    let action = Arc::new(action);
    let entries = monoid
        .elements()
        .map(|a| {
            let act = action.clone();
            let f: MapFn<S::Elem, S::Elem> = Arc::new(move |s: &S::Elem| Some(act(a, s)));
            (IndexLabel::Atom(monoid.label(a)), f)
        })
        .collect();
    FunctionArray::new(semigroup, entries, base)
}

/// `S(α)_s`: point based, `a(•) = α(a, s)`.
pub fn array_point_based<S, F>(
    monoid: &Monoid,
    semigroup: Arc<S>,
    action: F,
    s: S::Elem,
) -> FunctionArray<S, ()>
where
    S: PartialSemigroup + 'static,
    F: Fn(Elem, &S::Elem) -> S::Elem,
{
    let entries = monoid
        .elements()
        .map(|a| {
            let v = action(a, &s);
            let f: MapFn<(), S::Elem> = Arc::new(move |_: &()| Some(v.clone()));
            (IndexLabel::Atom(monoid.label(a)), f)
        })
        .collect();
    FunctionArray::new(semigroup, entries, BaseSet::Finite(vec![()]))
}
