//! Located words over a sequence of pointed M-sets, forming the partial
//! semigroup `<(X_n)>`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::{Elem, Monoid};
use crate::order::x_of;

/// An M-set with a point whose orbit is the whole carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedMSet {
    monoid: Arc<Monoid>,
    labels: Vec<String>,
    action: Vec<usize>,
    distinguished: usize,
}

impl PointedMSet {
    /// `action[a][x]` is `a·x`.
    pub fn new(
        monoid: Arc<Monoid>,
        labels: Vec<String>,
        action: Vec<Vec<usize>>,
        distinguished: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if distinguished >= n {
            return Err(Error::BadPoint(distinguished));
        }
        if action.len() != monoid.size() || action.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::Input("action table has the wrong shape".into()));
        }
        let set = PointedMSet {
            monoid,
            labels,
            action: action.into_iter().flatten().collect(),
            distinguished,
        };
        let m = &set.monoid;
        for x in 0..n {
            if set.act(m.identity(), x) != x {
                return Err(Error::Input(format!("identity moves point {x}")));
            }
            for a in m.elements() {
                for b in m.elements() {
                    if set.act(m.mul(a, b), x) != set.act(a, set.act(b, x)) {
                        return Err(Error::Input(format!("action law fails at ({a},{b},{x})")));
                    }
                }
            }
        }
        let mut reached = vec![false; n];
        for a in m.elements() {
            reached[set.act(a, distinguished)] = true;
        }
        if reached.iter().any(|r| !r) {
            return Err(Error::Input("distinguished point does not generate the set".into()));
        }
        Ok(set)
    }

    /// `M` acting on itself from the left, distinguished point the identity.
    pub fn left_regular(monoid: &Arc<Monoid>) -> Self {
        let m = monoid.as_ref();
        PointedMSet {
            monoid: monoid.clone(),
            labels: m.elements().map(|e| m.label(e)).collect(),
            action: m.elements().flat_map(|a| m.elements().map(move |x| m.mul(a, x))).collect(),
            distinguished: m.identity(),
        }
    }

    /// `X(M)` with the canonical action, distinguished point the class of 1.
    pub fn of_x(monoid: &Arc<Monoid>) -> Self {
        let x = x_of(monoid);
        let n = x.len();
        PointedMSet {
            monoid: monoid.clone(),
            labels: (0..n).map(|p| x.label(p).to_string()).collect(),
            action: monoid
                .elements()
                .flat_map(|a| (0..n).map(move |p| (a, p)))
                .map(|(a, p)| x.act(a, p))
                .collect(),
            distinguished: x.class_of(monoid.identity()).unwrap(),
        }
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
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

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    #[inline]
    pub fn act(&self, a: Elem, x: usize) -> usize {
        self.action[a * self.labels.len() + x]
    }
}

/// A sequence of pointed M-sets; slot `n` uses `sets[n]`, and the last set
/// repeats for every later slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordFamily {
    sets: Vec<PointedMSet>,
}

impl WordFamily {
    pub fn constant(set: PointedMSet) -> Self {
        WordFamily { sets: vec![set] }
    }

    pub fn new(sets: Vec<PointedMSet>) -> Result<Self> {
        let first = sets
            .first()
            .ok_or_else(|| Error::Input("empty family".into()))?;
        if sets.iter().any(|s| s.monoid != first.monoid) {
            return Err(Error::Input("pointed sets act by different monoids".into()));
        }
        Ok(WordFamily { sets })
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.sets[0].monoid
    }

    pub fn set_at(&self, slot: usize) -> &PointedMSet {
        &self.sets[slot.min(self.sets.len() - 1)]
    }

    /// Checks every letter against its slot's carrier.
    pub fn check(&self, w: &LocatedWord) -> Result<()> {
        for &(slot, letter) in &w.entries {
            if letter >= self.set_at(slot).len() {
                return Err(Error::BadWord(format!("letter {letter} invalid at slot {slot}")));
            }
        }
        Ok(())
    }

    /// `a(w)`: letterwise action, slots unchanged.
    pub fn act_word(&self, a: Elem, w: &LocatedWord) -> LocatedWord {
        LocatedWord {
            entries: w
                .entries
                .iter()
                .map(|&(s, l)| (s, self.set_at(s).act(a, l)))
                .collect(),
        }
    }

    /// True iff some entry is the distinguished point of its slot.
    pub fn contains_distinguished(&self, w: &LocatedWord) -> bool {
        w.entries
            .iter()
            .any(|&(s, l)| self.set_at(s).distinguished() == l)
    }

    pub fn to_json(&self, w: &LocatedWord) -> LocatedWordJson {
        LocatedWordJson(
            w.entries
                .iter()
                .map(|&(s, l)| (s, self.set_at(s).labels()[l].clone()))
                .collect(),
        )
    }

    pub fn from_json(&self, j: &LocatedWordJson) -> Result<LocatedWord> {
        let entries = j
            .0
            .iter()
            .map(|(s, label)| {
                self.set_at(*s)
                    .labels()
                    .iter()
                    .position(|x| x == label)
                    .map(|l| (*s, l))
                    .ok_or_else(|| Error::BadWord(format!("unknown letter {label:?} at slot {s}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LocatedWord::new(entries)
    }

    pub fn render(&self, w: &LocatedWord) -> String {
        w.entries
            .iter()
            .map(|&(s, l)| format!("{s}:{}", self.set_at(s).labels()[l]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `[[slot, letter-label], ..]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocatedWordJson(pub Vec<(usize, String)>);

/// A nonempty sequence of `(slot, letter)` with strictly increasing slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocatedWord {
    entries: Vec<(usize, usize)>,
}

impl LocatedWord {
    pub fn new(entries: Vec<(usize, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadWord("located words are nonempty".into()));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::BadWord("slots must strictly increase".into()));
        }
        Ok(LocatedWord { entries })
    }

    /// Word with the given letters on consecutive slots starting at `start`.
    pub fn contiguous(start: usize, letters: &[usize]) -> Result<Self> {
        Self::new(letters.iter().enumerate().map(|(i, &l)| (start + i, l)).collect())
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_slot(&self) -> usize {
        self.entries[0].0
    }

    pub fn max_slot(&self) -> usize {
        self.entries[self.entries.len() - 1].0
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    /// `w1 w2`, defined iff every slot of `w1` precedes every slot of `w2`.
    pub fn product(&self, other: &LocatedWord) -> Option<LocatedWord> {
        (self.max_slot() < other.min_slot()).then(|| {
            let mut entries = self.entries.clone();
            entries.extend_from_slice(&other.entries);
            LocatedWord { entries }
        })
    }

    /// Product of a sequence, `None` if any step is undefined.
    pub fn product_all<'a>(words: impl IntoIterator<Item = &'a LocatedWord>) -> Option<LocatedWord> {
        let mut iter = words.into_iter();
        let mut acc = iter.next()?.clone();
        for w in iter {
            if acc.max_slot() >= w.min_slot() {
                return None;
            }
            acc.entries.extend_from_slice(&w.entries);
        }
        Some(acc)
    }

    /// Replaces each occurrence of `variable` by `c`.
    pub fn substitute(&self, variable: usize, c: usize) -> LocatedWord {
        LocatedWord {
            entries: self
                .entries
                .iter()
                .map(|&(s, l)| (s, if l == variable { c } else { l }))
                .collect(),
        }
    }

    pub fn contains_letter(&self, letter: usize) -> bool {
        self.letters().any(|l| l == letter)
    }

    /// Same letters, slots moved up by `offset`.
    pub fn shifted(&self, offset: usize) -> LocatedWord {
        LocatedWord {
            entries: self.entries.iter().map(|&(s, l)| (s + offset, l)).collect(),
        }
    }
}

impl fmt::Display for LocatedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(s, l)| format!("{s}:{l}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// True iff every increasing-index product is defined; for located words
/// this reduces to consecutive slot blocks being strictly increasing.
pub fn is_basic(ws: &[LocatedWord]) -> bool {
    ws.windows(2).all(|p| p[0].max_slot() < p[1].min_slot())
}

/// All words with slots in `min_slot..=max_slot` and at most `max_len`
/// entries, in lexicographic `(slot, letter)` order with a prefix before its
/// extensions. With `distinguished` set, only words containing a
/// distinguished point are kept.
pub fn words_within(
    family: &WordFamily,
    min_slot: usize,
    max_slot: usize,
    max_len: usize,
    distinguished: bool,
) -> Vec<LocatedWord> {
    #[allow(clippy::too_many_arguments)]
    fn extend(
        family: &WordFamily,
        prefix: &mut Vec<(usize, usize)>,
        has_point: bool,
        from: usize,
        max_slot: usize,
        max_len: usize,
        distinguished: bool,
        out: &mut Vec<LocatedWord>,
    ) {
        if prefix.len() == max_len {
            return;
        }
        for slot in from..=max_slot {
            let set = family.set_at(slot);
            for letter in 0..set.len() {
                prefix.push((slot, letter));
                let hit = has_point || letter == set.distinguished();
                if hit || !distinguished {
                    out.push(LocatedWord {
                        entries: prefix.clone(),
                    });
                }
                extend(family, prefix, hit, slot + 1, max_slot, max_len, distinguished, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if min_slot <= max_slot {
        extend(family, &mut Vec::new(), false, min_slot, max_slot, max_len, distinguished, &mut out);
    }
    out
}

/// The partial semigroup of located words over a family.
#[derive(Clone, Debug, PartialEq)]
pub struct LocatedWords {
    pub family: Arc<WordFamily>,
}

impl crate::arrays::PartialSemigroup for LocatedWords {
    type Elem = LocatedWord;

    fn product(&self, a: &LocatedWord, b: &LocatedWord) -> Option<LocatedWord> {
        a.product(b)
    }
}
