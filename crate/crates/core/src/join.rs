//! The semigroup `<P>` generated by a poset modulo `p ∨ q = q ∨ p = q` for
//! `p <= q`. Elements are kept in normal form: adjacent letters incomparable.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::Elem;
use crate::order::ActedPoset;
use crate::poset::Poset;

/// A normal-form element of `<P>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalWord {
    poset: u64,
    letters: Vec<usize>,
}

impl NormalWord {
    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// JSON form: the point labels of the letters, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalWordJson(pub Vec<String>);

fn fingerprint(poset: &Poset) -> u64 {
    let mut h = DefaultHasher::new();
    poset.labels().hash(&mut h);
    for x in 0..poset.len() {
        poset.up_set(x).ones().collect::<Vec<_>>().hash(&mut h);
    }
    h.finish()
}

#[derive(Clone, Debug)]
pub struct JoinSemigroup {
    poset: Arc<Poset>,
    acted: Option<Arc<ActedPoset>>,
    id: u64,
}

impl PartialEq for JoinSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && *self.poset == *other.poset
    }
}

impl JoinSemigroup {
    pub fn new(poset: Poset) -> Self {
        let id = fingerprint(&poset);
        JoinSemigroup {
            poset: Arc::new(poset),
            acted: None,
            id,
        }
    }

    /// `<P>` for an acted poset, with the induced action available via `act`.
    pub fn of_acted(p: Arc<ActedPoset>) -> Self {
        let poset = Arc::new(p.poset().clone());
        let id = fingerprint(&poset);
        JoinSemigroup {
            poset,
            acted: Some(p),
            id,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn acted(&self) -> Option<&Arc<ActedPoset>> {
        self.acted.as_ref()
    }

    fn owns(&self, w: &NormalWord) -> Result<()> {
        if w.poset == self.id {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    /// Rewrites the leftmost comparable adjacent pair to its maximum until
    /// none remains. A stack makes this a single pass: after a merge the only
    /// pair that can become comparable is the one to its left.
    pub fn normalize(&self, seq: &[usize]) -> Result<NormalWord> {
        if seq.is_empty() {
            return Err(Error::EmptyProduct);
        }
        for &p in seq {
            self.poset.check_point(p)?;
        }
        let mut letters = Vec::with_capacity(seq.len());
        self.push_all(&mut letters, seq.iter().copied());
        Ok(NormalWord {
            poset: self.id,
            letters,
        })
    }

    fn push_all(&self, stack: &mut Vec<usize>, seq: impl IntoIterator<Item = usize>) {
        for mut p in seq {
            while let Some(&top) = stack.last() {
                match self.poset.max_of(top, p) {
                    Some(m) => {
                        stack.pop();
                        p = m;
                    }
                    None => break,
                }
            }
            stack.push(p);
        }
    }

    /// The single-letter word `(p)`.
    pub fn letter(&self, p: usize) -> Result<NormalWord> {
        self.normalize(&[p])
    }

    pub fn join(&self, u: &NormalWord, v: &NormalWord) -> Result<NormalWord> {
        self.owns(u)?;
        self.owns(v)?;
        let mut letters = u.letters.clone();
        self.push_all(&mut letters, v.letters.iter().copied());
        Ok(NormalWord {
            poset: self.id,
            letters,
        })
    }

    /// `a(p_0 ∨ .. ∨ p_n) = a(p_0) ∨ .. ∨ a(p_n)`.
    pub fn act(&self, a: Elem, w: &NormalWord) -> Result<NormalWord> {
        self.owns(w)?;
        let acted = self
            .acted
            .as_ref()
            .ok_or_else(|| Error::Input("poset carries no monoid action".into()))?;
        acted.monoid().check(a)?;
        let image: Vec<usize> = w.letters.iter().map(|&p| acted.act(a, p)).collect();
        self.normalize(&image)
    }

    /// The type `a_0(y) ∨ .. ∨ a_k(y)`.
    pub fn type_of(&self, elems: &[Elem], y: usize) -> Result<NormalWord> {
        if elems.is_empty() {
            return Err(Error::EmptyProduct);
        }
        let acted = self
            .acted
            .as_ref()
            .ok_or_else(|| Error::Input("poset carries no monoid action".into()))?;
        self.poset.check_point(y)?;
        for &a in elems {
            acted.monoid().check(a)?;
        }
        let image: Vec<usize> = elems.iter().map(|&a| acted.act(a, y)).collect();
        self.normalize(&image)
    }

    /// Unchecked `type_of` for hot loops over valid inputs.
    pub(crate) fn type_unchecked(&self, elems: impl IntoIterator<Item = Elem>, y: usize) -> NormalWord {
        let acted = self.acted.as_ref().expect("acted poset");
        let mut letters = Vec::new();
        self.push_all(&mut letters, elems.into_iter().map(|a| acted.act(a, y)));
        NormalWord {
            poset: self.id,
            letters,
        }
    }

    /// Every normal form reachable by some complete rewrite order. `<P>` is
    /// well defined exactly when this is a single word for every input.
    pub fn all_normal_forms(&self, seq: &[usize]) -> Result<BTreeSet<Vec<usize>>> {
        if seq.is_empty() {
            return Err(Error::EmptyProduct);
        }
        for &p in seq {
            self.poset.check_point(p)?;
        }
        let mut finals = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut stack = vec![seq.to_vec()];
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            let mut reducible = false;
            for i in 0..w.len().saturating_sub(1) {
                if let Some(m) = self.poset.max_of(w[i], w[i + 1]) {
                    reducible = true;
                    let mut next = Vec::with_capacity(w.len() - 1);
                    next.extend_from_slice(&w[..i]);
                    next.push(m);
                    next.extend_from_slice(&w[i + 2..]);
                    stack.push(next);
                }
            }
            if !reducible {
                finals.insert(w);
            }
        }
        Ok(finals)
    }

    pub fn to_json(&self, w: &NormalWord) -> NormalWordJson {
        NormalWordJson(
            w.letters
                .iter()
                .map(|&p| self.poset.label(p).to_string())
                .collect(),
        )
    }

    pub fn from_json(&self, j: &NormalWordJson) -> Result<NormalWord> {
        let seq = j
            .0
            .iter()
            .map(|l| {
                self.poset
                    .labels()
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| Error::Input(format!("unknown point label {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.normalize(&seq)
    }

    /// Label rendering such as `{[b]} ∨ {[b],[a1]}`.
    pub fn render(&self, w: &NormalWord) -> String {
        self.to_json(w).0.join(" ∨ ")
    }
}
