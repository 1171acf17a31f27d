//! Bounded tameness checks for colorings of basic sequences, a backtracking
//! witness search, and the first-occurrence coloring used against monoids
//! whose `X(M)` is not linear.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::join::{JoinSemigroup, NormalWord};
use crate::monoid::{Elem, Monoid};
use crate::order::{x_of, y_of, ActedPoset};
use crate::words::{is_basic, words_within, LocatedWord, LocatedWordJson, PointedMSet, WordFamily};

/// Where types live: `<P>` for an acted poset `P` and a maximal point `y`.
/// The type of `a_0, .., a_k` is `a_0(y) ∨ .. ∨ a_k(y)`.
#[derive(Clone, Debug)]
pub struct TypeSpace {
    semigroup: JoinSemigroup,
    y: usize,
}

impl TypeSpace {
    pub fn new(acted: Arc<ActedPoset>, y: usize) -> Result<Self> {
        acted.poset().check_point(y)?;
        if !acted.maximal_elements().contains(&y) {
            return Err(Error::Input(format!("{} is not maximal", acted.label(y))));
        }
        Ok(TypeSpace {
            semigroup: JoinSemigroup::of_acted(acted),
            y,
        })
    }

    /// `Y(M)` with its longest maximal chain.
    pub fn of_y(m: &Arc<Monoid>) -> Result<Self> {
        let y = Arc::new(y_of(m)?);
        let top = y.top_chain();
        Self::new(y, top)
    }

    /// `X(M)` with the class of the identity. Every tuple containing the
    /// identity has the one-letter type `[1]`, so tameness on `{[1]}` is the
    /// Ramsey property.
    pub fn of_x(m: &Arc<Monoid>) -> Self {
        let x = Arc::new(x_of(m));
        let top = x.class_of(m.identity()).unwrap();
        Self::new(x, top).expect("the identity class is the top of X(M)")
    }

    pub fn semigroup(&self) -> &JoinSemigroup {
        &self.semigroup
    }

    pub fn acted(&self) -> &Arc<ActedPoset> {
        self.semigroup.acted().unwrap()
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        self.acted().monoid()
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn type_of(&self, elems: &[Elem]) -> NormalWord {
        self.semigroup.type_unchecked(elems.iter().copied(), self.y)
    }

    /// `1(y)`, the single-letter type of `y` itself.
    pub fn identity_type(&self) -> NormalWord {
        self.type_of(&[self.monoid().identity()])
    }

    pub fn labels(&self, t: &NormalWord) -> Vec<String> {
        self.semigroup.to_json(t).0
    }
}

/// The set `F` of types a tameness check constrains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeFilter {
    All,
    Only(HashSet<NormalWord>),
}

impl TypeFilter {
    pub fn contains(&self, t: &NormalWord) -> bool {
        match self {
            TypeFilter::All => true,
            TypeFilter::Only(set) => set.contains(t),
        }
    }

    /// Adds every suffix type `z_k ∨ .. ∨ z_l` of tuples of at most
    /// `max_terms` elements whose full type lies in the filter.
    pub fn suffix_closed(&self, space: &TypeSpace, max_terms: usize) -> TypeFilter {
        let TypeFilter::Only(set) = self else {
            return TypeFilter::All;
        };
        let mut closed = set.clone();
        let n = space.monoid().size();
        for len in 1..=max_terms {
            for_each_tuple(n, len, |elems| {
                if set.contains(&space.type_of(elems)) {
                    for k in 1..elems.len() {
                        closed.insert(space.type_of(&elems[k..]));
                    }
                }
            });
        }
        TypeFilter::Only(closed)
    }
}

/// Calls `f` on every tuple in `0..n` of length `len`, lexicographically.
fn for_each_tuple(n: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0; len];
    loop {
        f(&t);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Calls `f` on every increasing `r`-subset of `0..n`.
fn for_each_subset(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        f(&c);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < n - r + i {
                c[i] += 1;
                for j in i + 1..r {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// One mixed product `a_0(w_{i_0}) .. a_k(w_{i_k})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedProduct {
    pub indices: Vec<usize>,
    pub elems: Vec<Elem>,
    pub labels: Vec<String>,
    pub word: LocatedWordJson,
    pub color: usize,
}

/// Two products with the same key (type or reduced string) and different colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameViolation {
    pub key: Vec<String>,
    pub first: MixedProduct,
    pub second: MixedProduct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameReport {
    pub verdict: bool,
    pub products_checked: usize,
    pub groups: usize,
    pub violation: Option<TameViolation>,
}

fn mixed_product(family: &WordFamily, m: &Monoid, indices: &[usize], elems: &[Elem], word: &LocatedWord, color: usize) -> MixedProduct {
    MixedProduct {
        indices: indices.to_vec(),
        elems: elems.to_vec(),
        labels: elems.iter().map(|&e| m.label(e)).collect(),
        word: family.to_json(word),
        color,
    }
}

/// Incremental state shared by `check_tame` and `search_tame`: the color
/// seen for each constrained type, with an undo log.
struct Tamer<'a> {
    space: &'a TypeSpace,
    family: &'a WordFamily,
    coloring: &'a Coloring,
    filter: &'a TypeFilter,
    max_terms: usize,
    acted: Vec<Vec<LocatedWord>>,
    seen: HashMap<NormalWord, (usize, Vec<usize>, Vec<Elem>)>,
    log: Vec<NormalWord>,
    checked: usize,
}

impl<'a> Tamer<'a> {
    fn new(space: &'a TypeSpace, family: &'a WordFamily, coloring: &'a Coloring, filter: &'a TypeFilter, max_terms: usize) -> Self {
        Tamer {
            space,
            family,
            coloring,
            filter,
            max_terms,
            acted: Vec::new(),
            seen: HashMap::new(),
            log: Vec::new(),
            checked: 0,
        }
    }

    fn product(&self, indices: &[usize], elems: &[Elem]) -> LocatedWord {
        LocatedWord::product_all(indices.iter().zip(elems).map(|(&i, &a)| &self.acted[i][a])).expect("basic sequence")
    }

    /// Pushes a word and checks every new product, whose last index is the
    /// new word's. Returns the first conflict.
    fn push(&mut self, w: &LocatedWord) -> Option<TameViolation> {
        let m = self.space.monoid().clone();
        self.acted.push(m.elements().map(|a| self.family.act_word(a, w)).collect());
        let j = self.acted.len() - 1;
        let mut conflict = None;
        for r in 0..self.max_terms.min(j + 1) {
            for_each_subset(j, r, |sub| {
                if conflict.is_some() {
                    return;
                }
                let mut indices = sub.to_vec();
                indices.push(j);
                for_each_tuple(m.size(), r + 1, |elems| {
                    if conflict.is_some() {
                        return;
                    }
                    let t = self.space.type_of(elems);
                    if !self.filter.contains(&t) {
                        return;
                    }
                    self.checked += 1;
                    let word = self.product(&indices, elems);
                    let color = self.coloring.color(self.family, &word);
                    match self.seen.get(&t) {
                        Some((c, _, _)) if *c == color => {}
                        Some((c, idx, el)) => {
                            let first_word = self.product(idx, el);
                            conflict = Some(TameViolation {
                                key: self.space.labels(&t),
                                first: mixed_product(self.family, &m, idx, el, &first_word, *c),
                                second: mixed_product(self.family, &m, &indices, elems, &word, color),
                            });
                        }
                        None => {
                            self.seen.insert(t.clone(), (color, indices.clone(), elems.to_vec()));
                            self.log.push(t);
                        }
                    }
                });
            });
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn pop(&mut self, mark: usize) {
        for t in self.log.drain(mark..) {
            self.seen.remove(&t);
        }
        self.acted.pop();
    }
}

fn check_inputs(space: &TypeSpace, family: &WordFamily, ws: &[LocatedWord]) -> Result<()> {
    if family.monoid() != space.monoid() {
        return Err(Error::Input("word family and type space use different monoids".into()));
    }
    for w in ws {
        family.check(w)?;
    }
    if let Some(i) = ws.windows(2).position(|p| !is_basic(p)) {
        return Err(Error::NotBasic(i + 1));
    }
    Ok(())
}

/// Checks that among all products `a_0(w_{i_0}) .. a_k(w_{i_k})` with
/// `i_0 < .. < i_k` and at most `max_terms` factors, those whose type lies
/// in `filter` have a color depending only on the type.
pub fn check_tame(
    space: &TypeSpace,
    family: &WordFamily,
    coloring: &Coloring,
    ws: &[LocatedWord],
    max_terms: usize,
    filter: &TypeFilter,
) -> Result<TameReport> {
    check_inputs(space, family, ws)?;
    if max_terms == 0 {
        return Err(Error::BoundsTooSmall("products need at least one factor".into()));
    }
    let mut tamer = Tamer::new(space, family, coloring, filter, max_terms);
    for w in ws {
        if let Some(v) = tamer.push(w) {
            return Ok(TameReport {
                verdict: false,
                products_checked: tamer.checked,
                groups: tamer.seen.len(),
                violation: Some(v),
            });
        }
    }
    Ok(TameReport {
        verdict: true,
        products_checked: tamer.checked,
        groups: tamer.seen.len(),
        violation: None,
    })
}

impl TameViolation {
    /// Recomputes both products, colors and types from scratch.
    pub fn recheck(&self, space: &TypeSpace, family: &WordFamily, coloring: &Coloring, ws: &[LocatedWord]) -> bool {
        let eval = |p: &MixedProduct| -> Option<(Vec<String>, usize)> {
            if p.indices.len() != p.elems.len() || p.indices.iter().any(|&i| i >= ws.len()) || p.elems.iter().any(|&a| a >= space.monoid().size()) {
                return None;
            }
            let acted: Vec<LocatedWord> = p.indices.iter().zip(&p.elems).map(|(&i, &a)| family.act_word(a, &ws[i])).collect();
            let word = LocatedWord::product_all(&acted)?;
            let t = space.semigroup().type_of(&p.elems, space.y()).ok()?;
            Some((space.labels(&t), coloring.color(family, &word)))
        };
        match (eval(&self.first), eval(&self.second)) {
            (Some((t1, c1)), Some((t2, c2))) => t1 == self.key && t2 == self.key && c1 == self.first.color && c2 == self.second.color && c1 != c2,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Number of words in the sequence.
    pub seq_len: usize,
    /// Largest slot a word may use.
    pub max_slot: usize,
    /// Most entries in a single word.
    pub max_len: usize,
    /// Most factors in a checked product.
    pub max_terms: usize,
}

impl SearchBounds {
    pub fn new(seq_len: usize, max_slot: usize, max_len: usize) -> Self {
        SearchBounds {
            seq_len,
            max_slot,
            max_len,
            max_terms: seq_len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The least tame sequence in candidate order.
    Witness { words: Vec<LocatedWord>, nodes: usize },
    /// No candidate within the bounds is tame. This says nothing beyond the bounds.
    Exhausted { bounds: SearchBounds, candidates: usize, nodes: usize },
}

/// Backtracking search for a tame basic sequence of `seq_len` words, each
/// containing a distinguished point. Candidates are visited in
/// lexicographic order of the word sequence; the first tame one is returned.
pub fn search_tame(
    space: &TypeSpace,
    family: &WordFamily,
    coloring: &Coloring,
    filter: &TypeFilter,
    bounds: SearchBounds,
) -> Result<SearchOutcome> {
    check_inputs(space, family, &[])?;
    if bounds.seq_len == 0 || bounds.max_len == 0 || bounds.max_terms == 0 {
        return Err(Error::BoundsTooSmall("lengths must be positive".into()));
    }
    if bounds.seq_len > bounds.max_slot + 1 {
        return Err(Error::BoundsTooSmall(format!(
            "{} words need at least {} slots, only {} available",
            bounds.seq_len,
            bounds.seq_len,
            bounds.max_slot + 1
        )));
    }
    let candidates = words_within(family, 0, bounds.max_slot, bounds.max_len, true);
    let counts: Vec<AtomicUsize> = candidates.iter().map(|_| AtomicUsize::new(0)).collect();
    let found = candidates
        .par_iter()
        .enumerate()
        .find_map_first(|(i, w0)| {
            let mut tamer = Tamer::new(space, family, coloring, filter, bounds.max_terms);
            let mut chosen = Vec::with_capacity(bounds.seq_len);
            let mut nodes = 0;
            let hit = extend(&mut tamer, &candidates, w0, &mut chosen, bounds, &mut nodes);
            counts[i].store(nodes, Ordering::Relaxed);
            hit.then_some((i, chosen))
        });
    Ok(match found {
        Some((i, words)) => SearchOutcome::Witness {
            words,
            nodes: counts[..=i].iter().map(|c| c.load(Ordering::Relaxed)).sum(),
        },
        None => SearchOutcome::Exhausted {
            bounds,
            candidates: candidates.len(),
            nodes: counts.iter().map(|c| c.load(Ordering::Relaxed)).sum(),
        },
    })
}

fn extend(
    tamer: &mut Tamer,
    candidates: &[LocatedWord],
    w: &LocatedWord,
    chosen: &mut Vec<LocatedWord>,
    bounds: SearchBounds,
    nodes: &mut usize,
) -> bool {
    // remaining words each need a slot after this one
    let remaining = bounds.seq_len - chosen.len() - 1;
    if w.max_slot() + remaining > bounds.max_slot {
        return false;
    }
    *nodes += 1;
    let mark = tamer.mark();
    if tamer.push(w).is_some() {
        tamer.pop(mark);
        return false;
    }
    chosen.push(w.clone());
    if chosen.len() == bounds.seq_len {
        return true;
    }
    let start = candidates.partition_point(|c| c.min_slot() <= w.max_slot());
    for next in &candidates[start..] {
        if extend(tamer, candidates, next, chosen, bounds, nodes) {
            return true;
        }
    }
    chosen.pop();
    tamer.pop(mark);
    false
}

/// Pointed `M`-sets `X_n = X(M)`, distinguished point the identity class.
pub fn x_family(m: &Arc<Monoid>) -> WordFamily {
    WordFamily::constant(PointedMSet::of_x(m))
}

/// Color 0 iff `[a]` occurs and its first occurrence precedes every `[b]`,
/// on words over `x_family(m)`.
pub fn counterexample_coloring(m: &Arc<Monoid>, a: Elem, b: Elem) -> Result<Coloring> {
    m.check(a)?;
    m.check(b)?;
    let x = x_of(m);
    let (ca, cb) = (x.class_of(a).unwrap(), x.class_of(b).unwrap());
    if x.poset().comparable(ca, cb) {
        return Err(Error::Comparable(a, b));
    }
    Ok(Coloring::FirstOccurrence { a: ca, b: cb })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure {
    pub w0: LocatedWordJson,
    pub w1: LocatedWordJson,
    pub color_a: usize,
    pub color_b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotRamseyEvidence {
    pub a: String,
    pub b: String,
    pub class_a: String,
    pub class_b: String,
    /// `[a]` is not in `bX(M)` and `[b]` is not in `aX(M)`.
    pub orbits_separate: bool,
    pub max_slot: usize,
    pub max_len: usize,
    pub words: usize,
    pub pairs_checked: usize,
    pub failure: Option<PairFailure>,
}

impl NotRamseyEvidence {
    pub fn passed(&self) -> bool {
        self.orbits_separate && self.failure.is_none()
    }
}

/// Confirms over every basic pair `(w_0, w_1)` within the bounds, each word
/// containing `[1]`, that the first-occurrence coloring gives `a(w_0) w_1`
/// color 0 and `b(w_0) w_1` color 1.
pub fn verify_not_ramsey(m: &Arc<Monoid>, a: Elem, b: Elem, max_slot: usize, max_len: usize) -> Result<NotRamseyEvidence> {
    let coloring = counterexample_coloring(m, a, b)?;
    let Coloring::FirstOccurrence { a: ca, b: cb } = coloring else {
        unreachable!()
    };
    let x = x_of(m);
    let orbit = |e: Elem| -> HashSet<usize> { (0..x.len()).map(|p| x.act(e, p)).collect() };
    let orbits_separate = !orbit(b).contains(&ca) && !orbit(a).contains(&cb);

    let family = x_family(m);
    let words = words_within(&family, 0, max_slot, max_len, true);
    let results: Vec<(usize, Option<PairFailure>)> = words
        .par_iter()
        .map(|w0| {
            let aw = family.act_word(a, w0);
            let bw = family.act_word(b, w0);
            let start = words.partition_point(|c| c.min_slot() <= w0.max_slot());
            let mut n = 0;
            for w1 in &words[start..] {
                n += 1;
                let color_a = coloring.color(&family, &aw.product(w1).unwrap());
                let color_b = coloring.color(&family, &bw.product(w1).unwrap());
                if color_a != 0 || color_b != 1 {
                    return (
                        n,
                        Some(PairFailure {
                            w0: family.to_json(w0),
                            w1: family.to_json(w1),
                            color_a,
                            color_b,
                        }),
                    );
                }
            }
            (n, None)
        })
        .collect();
    let pairs_checked = results.iter().map(|r| r.0).sum();
    let failure = results.into_iter().find_map(|r| r.1);
    Ok(NotRamseyEvidence {
        a: m.label(a),
        b: m.label(b),
        class_a: x.label(ca).to_string(),
        class_b: x.label(cb).to_string(),
        orbits_separate,
        max_slot,
        max_len,
        words: words.len(),
        pairs_checked,
        failure,
    })
}
