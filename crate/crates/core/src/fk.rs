//! Reduced strings as types over `J(A, B)`, substitution checks for
//! variable words, and the left-variable transform of double sequences.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coloring::{reduced_string, Coloring};
use crate::error::{Error, Result};
use crate::families::family_j;
use crate::join::{JoinSemigroup, NormalWord};
use crate::monoid::{Elem, Monoid};
use crate::order::y_of;
use crate::tame::{MixedProduct, TameReport, TameViolation};
use crate::words::{is_basic, LocatedWord, PointedMSet, WordFamily};

/// `J(A, B)` with its designated chain `{[b], [a_0], [1]}` in `Y`.
#[derive(Clone, Debug)]
pub struct FkSetup {
    pub monoid: Arc<Monoid>,
    pub semigroup: JoinSemigroup,
    pub y: usize,
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
}

impl FkSetup {
    pub fn new<S: AsRef<str>>(a: &[S], b: &[S]) -> Result<Self> {
        let m = Arc::new(family_j(a, b)?);
        let a_elems: Vec<Elem> = (1..=a.len()).collect();
        let b_elems: Vec<Elem> = (a.len() + 1..m.size()).collect();
        let y = Arc::new(y_of(&m)?);
        let x = y.base().unwrap().clone();
        let mut chain = Vec::new();
        if let Some(&b0) = b_elems.first() {
            chain.push(x.class_of(b0).unwrap());
        }
        if let Some(&a0) = a_elems.first() {
            chain.push(x.class_of(a0).unwrap());
        }
        chain.push(x.class_of(m.identity()).unwrap());
        chain.sort_unstable();
        let point = y
            .find_point(&chain)
            .ok_or_else(|| Error::Input("designated chain missing from Y".into()))?;
        Ok(FkSetup {
            monoid: m,
            semigroup: JoinSemigroup::of_acted(y),
            y: point,
            a: a_elems,
            b: b_elems,
        })
    }

    pub fn letters(&self) -> Vec<Elem> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// `c_0(y) ∨ .. ∨ c_k(y)`.
    pub fn type_of(&self, cs: &[Elem]) -> NormalWord {
        self.semigroup.type_unchecked(cs.iter().copied(), self.y)
    }

    /// Pointed sets `X_n = J(A, B)` by left multiplication; the identity
    /// plays the variable.
    pub fn family(&self) -> WordFamily {
        WordFamily::constant(PointedMSet::left_regular(&self.monoid))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub passed: bool,
    pub sequences: usize,
    pub reduced_strings: usize,
    /// Two sequences with equal reduced string and different types.
    pub not_factoring: Option<(Vec<String>, Vec<String>)>,
    /// Two reduced strings with the same type.
    pub not_injective: Option<(Vec<String>, Vec<String>)>,
}

/// Over every sequence in `A ∪ B` of length `1..=max_len`, checks that the
/// type depends only on the reduced string and that distinct reduced strings
/// have distinct types.
pub fn reduced_string_embedding_check<S: AsRef<str>>(a: &[S], b: &[S], max_len: usize) -> Result<EmbeddingReport> {
    let setup = FkSetup::new(a, b)?;
    let letters = setup.letters();
    let m = &setup.monoid;
    let render = |cs: &[Elem]| -> Vec<String> { cs.iter().map(|&c| m.label(c)).collect() };
    let mut by_reduced: HashMap<Vec<Elem>, (NormalWord, Vec<Elem>)> = HashMap::new();
    let mut sequences = 0;
    let mut not_factoring = None;
    let mut frontier: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for s in &frontier {
            for &c in &letters {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        for cs in &next {
            sequences += 1;
            let r = reduced_string(cs, &setup.a);
            let t = setup.type_of(cs);
            match by_reduced.get(&r) {
                Some((t0, first)) if *t0 != t => {
                    not_factoring.get_or_insert_with(|| (render(first), render(cs)));
                }
                Some(_) => {}
                None => {
                    by_reduced.insert(r, (t, cs.clone()));
                }
            }
        }
        frontier = next;
    }
    let mut by_type: HashMap<&NormalWord, &Vec<Elem>> = HashMap::new();
    let mut not_injective = None;
    let mut keys: Vec<&Vec<Elem>> = by_reduced.keys().collect();
    keys.sort();
    for r in keys {
        let t = &by_reduced[r].0;
        if let Some(other) = by_type.insert(t, r) {
            not_injective.get_or_insert_with(|| (render(other), render(r)));
        }
    }
    Ok(EmbeddingReport {
        passed: not_factoring.is_none() && not_injective.is_none(),
        sequences,
        reduced_strings: by_reduced.len(),
        not_factoring,
        not_injective,
    })
}

/// Checks that the color of `w_{n_0}[c_0] .. w_{n_k}[c_k]`, for at most
/// `max_terms` words and `c_i ∈ A ∪ B`, depends only on the reduced string
/// of `c_0 .. c_k` whenever that string lies in `filter` (all if `None`).
pub fn fk_check(
    setup: &FkSetup,
    coloring: &Coloring,
    ws: &[LocatedWord],
    max_terms: usize,
    filter: Option<&[Vec<Elem>]>,
) -> Result<TameReport> {
    let family = setup.family();
    let var = setup.monoid.identity();
    for (i, w) in ws.iter().enumerate() {
        family.check(w)?;
        if !w.contains_letter(var) {
            return Err(Error::WordPrecondition {
                index: i,
                reason: "the variable does not occur".into(),
            });
        }
    }
    if !is_basic(ws) {
        let i = ws.windows(2).position(|p| !is_basic(p)).unwrap();
        return Err(Error::NotBasic(i + 1));
    }
    let letters = setup.letters();
    let m = &setup.monoid;
    let mut seen: HashMap<Vec<Elem>, MixedProduct> = HashMap::new();
    let mut checked = 0;
    for r in 1..=max_terms.min(ws.len()) {
        let mut indices: Vec<usize> = (0..r).collect();
        loop {
            let mut digits = vec![0usize; r];
            'tuples: loop {
                let cs: Vec<Elem> = digits.iter().map(|&d| letters[d]).collect();
                let key = reduced_string(&cs, &setup.a);
                if filter.is_none_or(|f| f.contains(&key)) {
                    checked += 1;
                    let parts: Vec<LocatedWord> = indices.iter().zip(&cs).map(|(&i, &c)| ws[i].substitute(var, c)).collect();
                    let word = LocatedWord::product_all(&parts).unwrap();
                    let color = coloring.color(&family, &word);
                    let product = MixedProduct {
                        indices: indices.clone(),
                        elems: cs.clone(),
                        labels: cs.iter().map(|&c| m.label(c)).collect(),
                        word: family.to_json(&word),
                        color,
                    };
                    match seen.get(&key) {
                        Some(p) if p.color != color => {
                            return Ok(TameReport {
                                verdict: false,
                                products_checked: checked,
                                groups: seen.len(),
                                violation: Some(TameViolation {
                                    key: key.iter().map(|&c| m.label(c)).collect(),
                                    first: p.clone(),
                                    second: product,
                                }),
                            });
                        }
                        Some(_) => {}
                        None => {
                            seen.insert(key, product);
                        }
                    }
                }
                let mut i = r;
                loop {
                    if i == 0 {
                        break 'tuples;
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < letters.len() {
                        break;
                    }
                    digits[i] = 0;
                }
            }
            // next increasing index tuple
            let n = ws.len();
            let mut i = r;
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if indices[i] < n - r + i {
                    indices[i] += 1;
                    for j in i + 1..r {
                        indices[j] = indices[j - 1] + 1;
                    }
                    break true;
                }
            };
            if !advanced {
                break;
            }
        }
    }
    Ok(TameReport {
        verdict: true,
        products_checked: checked,
        groups: seen.len(),
        violation: None,
    })
}

/// `w_0 = v_0[b]` and `w_i = v'_{i-1} v_i`. Each `v_i` must contain the
/// variable, each `v'_i` must start with it, and `v_0, v'_0, v_1, ..` must
/// be basic.
pub fn hj_transform(vs: &[(LocatedWord, LocatedWord)], variable: usize, b: usize) -> Result<Vec<LocatedWord>> {
    for (i, (v, v2)) in vs.iter().enumerate() {
        if !v.contains_letter(variable) {
            return Err(Error::WordPrecondition {
                index: i,
                reason: "the variable does not occur in v_i".into(),
            });
        }
        if v2.entries()[0].1 != variable {
            return Err(Error::WordPrecondition {
                index: i,
                reason: "v'_i is not left-variable".into(),
            });
        }
    }
    let interleaved: Vec<LocatedWord> = vs.iter().flat_map(|(v, v2)| [v.clone(), v2.clone()]).collect();
    if let Some(i) = interleaved.windows(2).position(|p| !is_basic(p)) {
        return Err(Error::NotBasic(i + 1));
    }
    let mut out = Vec::with_capacity(vs.len());
    if let Some((v0, _)) = vs.first() {
        out.push(v0.substitute(variable, b));
    }
    for i in 1..vs.len() {
        out.push(vs[i - 1].1.product(&vs[i].0).unwrap());
    }
    Ok(out)
}
