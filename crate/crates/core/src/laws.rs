//! Sampled and exhaustive checks of the `<P>` algebra: confluence of the
//! rewriting, associativity of the join, and the induced action.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::join::JoinSemigroup;
use crate::monoid::Monoid;
use crate::order::{x_of, y_of, ActedPoset};
use crate::poset::Poset;

/// Random order on `n` points: each pair `i < j` related with probability
/// `density`, then closed.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_generators((0..n).map(|i| format!("p{i}")).collect(), &pairs).unwrap()
}

/// Every order on `0..n` contained in the natural order, up to equality.
/// Each order on `n` points is isomorphic to one of these.
pub fn natural_posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let gens: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &p)| p)
            .collect();
        let p = Poset::from_generators((0..n).map(|i| format!("p{i}")).collect(), &gens).unwrap();
        if seen.insert(p.relation_pairs()) {
            out.push(p);
        }
    }
    out
}

/// Sequences of length `1..=max_len` with adjacent letters incomparable.
pub fn normal_sequences(p: &Poset, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..p.len()).map(|i| vec![i]).collect();
    for _ in 0..max_len {
        out.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for s in &frontier {
            let last = *s.last().unwrap();
            for q in 0..p.len() {
                if !p.comparable(last, q) {
                    let mut t = s.clone();
                    t.push(q);
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfluenceReport {
    pub seed: u64,
    pub words: usize,
    pub max_points: usize,
    /// `(relation pairs, input, distinct normal forms)` of the first failure.
    pub failure: Option<(Vec<(usize, usize)>, Vec<usize>, usize)>,
}

/// Draws `words` random sequences over random posets of up to `max_points`
/// points and checks that every rewrite order ends in the same word, equal
/// to `normalize`.
pub fn confluence_sample(seed: u64, words: usize, max_points: usize, max_len: usize) -> ConfluenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failure = None;
    for _ in 0..words {
        let n = rng.gen_range(1..=max_points);
        let density = rng.gen_range(0.1..0.7);
        let p = random_poset(&mut rng, n, density);
        let len = rng.gen_range(1..=max_len);
        let seq: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        if failure.is_some() {
            continue;
        }
        let pairs = p.relation_pairs();
        let s = JoinSemigroup::new(p);
        let forms = s.all_normal_forms(&seq).unwrap();
        let nf = s.normalize(&seq).unwrap();
        if forms.len() != 1 || forms.iter().next().unwrap().as_slice() != nf.letters() {
            failure = Some((pairs, seq, forms.len()));
        }
    }
    ConfluenceReport {
        seed,
        words,
        max_points,
        failure,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityReport {
    pub posets: usize,
    pub triples: usize,
    pub failure: Option<(Vec<(usize, usize)>, [Vec<usize>; 3])>,
}

/// `(uv)w = u(vw)` for all normal words of length at most `max_len` over
/// every order on at most `max_points` points.
pub fn associativity_exhaustive(max_points: usize, max_len: usize) -> AssociativityReport {
    let posets: Vec<Poset> = (1..=max_points).flat_map(natural_posets).collect();
    let results: Vec<(usize, Option<(Vec<(usize, usize)>, [Vec<usize>; 3])>)> = posets
        .par_iter()
        .map(|p| {
            let s = JoinSemigroup::new(p.clone());
            let words: Vec<_> = normal_sequences(p, max_len)
                .iter()
                .map(|q| s.normalize(q).unwrap())
                .collect();
            let mut n = 0;
            for u in &words {
                for v in &words {
                    let uv = s.join(u, v).unwrap();
                    for w in &words {
                        n += 1;
                        let left = s.join(&uv, w).unwrap();
                        let right = s.join(u, &s.join(v, w).unwrap()).unwrap();
                        if left != right {
                            let trip = [u.letters().to_vec(), v.letters().to_vec(), w.letters().to_vec()];
                            return (n, Some((p.relation_pairs(), trip)));
                        }
                    }
                }
            }
            (n, None)
        })
        .collect();
    AssociativityReport {
        posets: posets.len(),
        triples: results.iter().map(|r| r.0).sum(),
        failure: results.into_iter().find_map(|r| r.1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndomorphismReport {
    pub seed: u64,
    pub cases: usize,
    /// `(poset name, a, u, v)` where `a(u ∨ v) != a(u) ∨ a(v)` or the action
    /// law fails.
    pub failure: Option<(String, usize, Vec<usize>, Vec<usize>)>,
}

/// Samples pairs of words over each acted poset and checks
/// `a(u ∨ v) = a(u) ∨ a(v)` and `(ab)(u) = a(b(u))` for all `a, b`.
pub fn act_endomorphism_sample(posets: &[(String, Arc<ActedPoset>)], seed: u64, samples: usize, max_len: usize) -> EndomorphismReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    for (name, p) in posets {
        let s = JoinSemigroup::of_acted(p.clone());
        let m = p.monoid();
        for _ in 0..samples {
            let mut draw = || -> Vec<usize> {
                let len = rng.gen_range(1..=max_len);
                (0..len).map(|_| rng.gen_range(0..p.len())).collect()
            };
            let (us, vs) = (draw(), draw());
            let u = s.normalize(&us).unwrap();
            let v = s.normalize(&vs).unwrap();
            let uv = s.join(&u, &v).unwrap();
            for a in m.elements() {
                cases += 1;
                let lhs = s.act(a, &uv).unwrap();
                let rhs = s.join(&s.act(a, &u).unwrap(), &s.act(a, &v).unwrap()).unwrap();
                let law = m.elements().all(|b| s.act(m.mul(a, b), &u).unwrap() == s.act(a, &s.act(b, &u).unwrap()).unwrap());
                if lhs != rhs || !law {
                    return EndomorphismReport {
                        seed,
                        cases,
                        failure: Some((name.clone(), a, us, vs)),
                    };
                }
            }
        }
    }
    EndomorphismReport { seed, cases, failure: None }
}

/// `X(M)` and, when it fits, `Y(M)` of each monoid.
pub fn acted_posets_of(monoids: &[Arc<Monoid>]) -> Vec<(String, Arc<ActedPoset>)> {
    let mut out = Vec::new();
    for m in monoids {
        out.push((format!("X({})", m.name()), Arc::new(x_of(m))));
        if let Ok(y) = y_of(m) {
            out.push((format!("Y({})", m.name()), Arc::new(y)));
        }
    }
    out
}
