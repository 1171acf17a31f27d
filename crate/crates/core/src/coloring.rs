//! Finite colorings of located words, as a registry of named built-ins.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::words::{LocatedWord, WordFamily};

/// Type-erased coloring supplied from code.
#[derive(Clone)]
pub struct CustomColoring {
    pub name: String,
    pub colors: usize,
    pub program: Arc<dyn Fn(&WordFamily, &LocatedWord) -> usize + Send + Sync>,
}

impl fmt::Debug for CustomColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomColoring({}, {} colors)", self.name, self.colors)
    }
}

/// A deterministic map from words to `0..colors()`.
///
/// Letters are indices into the carrier of their slot. `FirstOccurrence`
/// and `ReducedString` refer to letters by index as well.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coloring {
    Constant {
        colors: usize,
    },
    /// Number of letters other than the slot's distinguished point, mod 2.
    Parity,
    /// 0 iff `a` occurs and its first occurrence precedes every `b`.
    FirstOccurrence {
        a: usize,
        b: usize,
    },
    /// Index of the reduced string over `alphabet` among all reduced strings
    /// of length at most `max_len`; longer strings share one extra color.
    ReducedString {
        alphabet: Vec<usize>,
        max_len: usize,
    },
    /// The first letter of the word, with `letters` colors.
    FirstLetter {
        letters: usize,
    },
    /// `sum(weights[letter]) mod modulus`; letters past the end weigh 0.
    Linear {
        weights: Vec<usize>,
        modulus: usize,
    },
    #[serde(skip)]
    Custom(CustomColoring),
}

impl Coloring {
    pub fn custom(
        name: impl Into<String>,
        colors: usize,
        program: impl Fn(&WordFamily, &LocatedWord) -> usize + Send + Sync + 'static,
    ) -> Self {
        Coloring::Custom(CustomColoring {
            name: name.into(),
            colors,
            program: Arc::new(program),
        })
    }

    pub fn colors(&self) -> usize {
        match self {
            Coloring::Constant { colors } => *colors,
            Coloring::Parity | Coloring::FirstOccurrence { .. } => 2,
            Coloring::ReducedString { alphabet, max_len } => reduced_string_count(alphabet.len(), *max_len) + 1,
            Coloring::FirstLetter { letters } => *letters,
            Coloring::Linear { modulus, .. } => *modulus,
            Coloring::Custom(c) => c.colors,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Coloring::Constant { colors } => format!("constant:{colors}"),
            Coloring::Parity => "parity".into(),
            Coloring::FirstOccurrence { a, b } => format!("first-occurrence:{a}:{b}"),
            Coloring::ReducedString { max_len, .. } => format!("reduced-string:{max_len}"),
            Coloring::FirstLetter { .. } => "first-letter".into(),
            Coloring::Linear { weights, modulus } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                format!("linear:{modulus}:{}", w.join(","))
            }
            Coloring::Custom(c) => c.name.clone(),
        }
    }

    pub fn color(&self, family: &WordFamily, w: &LocatedWord) -> usize {
        match self {
            Coloring::Constant { .. } => 0,
            Coloring::Parity => {
                w.entries()
                    .iter()
                    .filter(|&&(s, l)| family.set_at(s).distinguished() != l)
                    .count()
                    % 2
            }
            Coloring::FirstOccurrence { a, b } => first_occurrence_color(w, *a, *b),
            Coloring::ReducedString { alphabet, max_len } => {
                let letters: Vec<usize> = w.letters().collect();
                let r = reduced_string(&letters, alphabet);
                reduced_string_rank(&r, alphabet, *max_len)
            }
            Coloring::FirstLetter { letters } => w.entries()[0].1.min(letters.saturating_sub(1)),
            Coloring::Linear { weights, modulus } => {
                w.letters().map(|l| weights.get(l).copied().unwrap_or(0)).sum::<usize>() % modulus
            }
            Coloring::Custom(c) => (c.program)(family, w),
        }
    }

    /// Parses `constant[:k]`, `parity`, `first-occurrence:<a>:<b>`,
    /// `reduced-string[:<max_len>]`, `first-letter` and
    /// `linear:<modulus>:<w0>,<w1>,..`. Letter names are resolved against the
    /// labels of the family's first carrier; monoid element labels are
    /// accepted for `first-occurrence` on `X(M)` families.
    pub fn parse(spec: &str, family: &WordFamily, alphabet: &[usize]) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::Input(format!("malformed coloring {spec:?}"));
        let letter = |name: &str| -> Result<usize> {
            let labels = family.set_at(0).labels();
            if let Some(p) = labels.iter().position(|l| l == name) {
                return Ok(p);
            }
            let bracketed = format!("[{name}]");
            if let Some(p) = labels.iter().position(|l| *l == bracketed) {
                return Ok(p);
            }
            name.parse::<usize>()
                .ok()
                .filter(|&i| i < labels.len())
                .ok_or_else(|| Error::Input(format!("unknown letter {name:?}")))
        };
        let c = match parts.as_slice() {
            ["constant"] => Coloring::Constant { colors: 1 },
            ["constant", k] => Coloring::Constant {
                colors: k.parse().map_err(|_| bad())?,
            },
            ["parity"] => Coloring::Parity,
            ["first-occurrence", a, b] => Coloring::FirstOccurrence {
                a: letter(a)?,
                b: letter(b)?,
            },
            ["reduced-string"] => Coloring::ReducedString {
                alphabet: alphabet.to_vec(),
                max_len: 4,
            },
            ["reduced-string", n] => Coloring::ReducedString {
                alphabet: alphabet.to_vec(),
                max_len: n.parse().map_err(|_| bad())?,
            },
            ["first-letter"] => Coloring::FirstLetter {
                letters: family.set_at(0).len(),
            },
            ["linear", k, ws] => Coloring::Linear {
                modulus: k.parse().map_err(|_| bad())?,
                weights: ws
                    .split(',')
                    .map(|w| w.parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?,
            },
            _ => return Err(bad()),
        };
        if c.colors() == 0 {
            return Err(Error::Input("a coloring needs at least one color".into()));
        }
        Ok(c)
    }
}

fn first_occurrence_color(w: &LocatedWord, a: usize, b: usize) -> usize {
    for l in w.letters() {
        if l == a {
            return 0;
        }
        if l == b {
            return 1;
        }
    }
    1
}

/// Deletes letters outside `alphabet` and collapses runs.
pub fn reduced_string<T: PartialEq + Copy>(cs: &[T], alphabet: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for &c in cs {
        if alphabet.contains(&c) && out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}

/// Number of reduced strings of length at most `max_len` over `k` letters.
pub fn reduced_string_count(k: usize, max_len: usize) -> usize {
    let mut total = 1;
    let mut level = 1;
    for len in 1..=max_len {
        level = if len == 1 { k } else { level * k.saturating_sub(1) };
        total += level;
        if level == 0 {
            break;
        }
    }
    total
}

/// Rank among reduced strings ordered by length, then lexicographically by
/// alphabet position. Strings longer than `max_len` get the overflow rank.
fn reduced_string_rank(r: &[usize], alphabet: &[usize], max_len: usize) -> usize {
    let k = alphabet.len();
    if r.len() > max_len {
        return reduced_string_count(k, max_len);
    }
    if r.is_empty() {
        return 0;
    }
    let mut rank = reduced_string_count(k, r.len() - 1);
    let pos = |c: usize| alphabet.iter().position(|&x| x == c).unwrap();
    let mut within = pos(r[0]);
    for w in r.windows(2) {
        let p = pos(w[1]);
        let q = pos(w[0]);
        within = within * (k - 1) + if p > q { p - 1 } else { p };
    }
    rank += within;
    rank
}

/// Resolves a comma-separated list of element labels of `m`.
pub fn parse_elements(m: &Monoid, list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            m.find(s)
                .ok_or_else(|| Error::Input(format!("{} has no element {s:?}", m.name())))
        })
        .collect()
}
