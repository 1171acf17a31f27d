//! The doubling extension `(M, t, f) -> (N, τ, φ)`, the tower `M_k` built
//! from the trivial monoid, and checks relating it to the concrete `I_k`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{compose, embed_function, f_function, family_i, function_label, i_functions, t_function};
use crate::monoid::{Elem, Monoid};
use crate::order::{decide_ramsey, x_of, RamseyVerdict};
use crate::poset::Poset;

/// Largest tower level built unless the guard is lifted.
pub const MU_GUARD: usize = 8;

/// A monoid with an endomorphism `f` and an element `t` with `st = tf(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuTriple {
    monoid: Arc<Monoid>,
    t: Elem,
    f: Vec<Elem>,
    /// Size of `M` when this triple is `mu(M, ..)`: elements below it are
    /// the plain ones, the rest are `τs`.
    base: Option<usize>,
}

impl MuTriple {
    pub fn new(monoid: Arc<Monoid>, t: Elem, f: Vec<Elem>) -> Result<Self> {
        monoid.check(t)?;
        if !monoid.is_endomorphism(&f) {
            return Err(Error::MuInvariant("f is not an endomorphism".into()));
        }
        if let Some(s) = monoid.elements().find(|&s| monoid.mul(s, t) != monoid.mul(t, f[s])) {
            return Err(Error::MuInvariant(format!("st != tf(s) for s = {}", monoid.label(s))));
        }
        Ok(MuTriple { monoid, t, f, base: None })
    }

    /// The one-element monoid with its unique element and endomorphism.
    pub fn trivial() -> Self {
        let m = Monoid::from_table("M_1", 0, vec![vec![0]], Some(vec!["1".into()])).unwrap();
        MuTriple {
            monoid: Arc::new(m),
            t: 0,
            f: vec![0],
            base: None,
        }
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn t(&self) -> Elem {
        self.t
    }

    pub fn f(&self) -> &[Elem] {
        &self.f
    }

    pub fn base_size(&self) -> Option<usize> {
        self.base
    }
}

/// `mu` with `τ` labelled `tau`; `τs` is labelled `tau·s`.
pub fn mu_named(tr: &MuTriple, name: &str, tau: &str) -> Result<MuTriple> {
    let m = &tr.monoid;
    let n = m.size();
    let one = m.identity();
    let phi = |e: usize, s: Elem| if e == 0 { tr.f[s] } else { m.mul(tr.t, tr.f[s]) };
    let index = |e: usize, s: Elem| e * n + s;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for e1 in 0..2 {
        for s1 in m.elements() {
            for e2 in 0..2 {
                for s2 in m.elements() {
                    table[index(e1, s1)][index(e2, s2)] = if e2 == 0 {
                        index(e1, m.mul(s1, s2))
                    } else {
                        index(1, m.mul(phi(e1, s1), s2))
                    };
                }
            }
        }
    }
    let labels = (0..2)
        .flat_map(|e| {
            m.elements().map(move |s| match (e, s == one) {
                (0, _) => m.label(s),
                (_, true) => tau.to_string(),
                _ => format!("{tau}·{}", m.label(s)),
            })
        })
        .collect();
    let big = Monoid::from_table(name, index(0, one), table, Some(labels))
        .map_err(|e| Error::MuInvariant(format!("product table is not a monoid: {e}")))?;
    let phi_table = (0..2).flat_map(|e| m.elements().map(move |s| phi(e, s))).collect();
    let mut out = MuTriple::new(Arc::new(big), index(1, one), phi_table)?;
    out.base = Some(n);
    Ok(out)
}

/// `mu` with `τ` labelled `τ`.
pub fn mu(tr: &MuTriple) -> Result<MuTriple> {
    mu_named(tr, &format!("mu({})", tr.monoid.name()), "τ")
}

/// `M_k`: the trivial monoid extended `k - 1` times; `τ` at level `j` is `t{j}`.
pub fn tower(k: usize) -> Result<MuTriple> {
    if k == 0 {
        return Err(Error::BadParameter("tower levels start at 1".into()));
    }
    if k > MU_GUARD && !crate::guard_lifted() {
        return Err(Error::GuardExceeded {
            what: "tower level",
            size: k,
            limit: MU_GUARD,
        });
    }
    let mut tr = MuTriple::trivial();
    for j in 2..=k {
        tr = mu_named(&tr, &format!("M_{j}"), &format!("t{j}"))?;
    }
    Ok(tr)
}

/// Value sequences of the elements of `tower(k)` under the identification
/// with `I_k`: `s -> s'` and `τs -> t_k s'`.
fn tower_functions(k: usize) -> Vec<Vec<u8>> {
    let mut funcs = vec![vec![0u8]];
    for j in 2..=k {
        let t = t_function(j);
        let plain: Vec<Vec<u8>> = funcs.iter().map(|s| embed_function(s)).collect();
        let shifted: Vec<Vec<u8>> = plain.iter().map(|s| compose(&t, s)).collect();
        funcs = plain.into_iter().chain(shifted).collect();
    }
    funcs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoFailure {
    NotBijective { element: String },
    Product { left: String, right: String },
    TMismatch,
    FMismatch { element: String },
    /// `f_k(s') != f_{k-1}(s)'` for `s` in `I_{k-1}`.
    FRestriction { element: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoOutcome {
    pub k: usize,
    /// `map[i]` is the index in `family_i(k)` of tower element `i`.
    pub map: Vec<Elem>,
    pub failure: Option<IsoFailure>,
}

impl IsoOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Builds the bijection `tower(k) -> I_k` and verifies it preserves
/// products and carries `(t_k, f_k)` to the concrete `t_k` and `f_k`.
pub fn iso_to_concrete(k: usize) -> Result<IsoOutcome> {
    let tr = tower(k)?;
    let m = tr.monoid();
    let ik = family_i(k)?;
    let all = i_functions(k);
    let funcs = tower_functions(k);
    let position = |f: &[u8]| all.iter().position(|g| g == f);
    let mut map = Vec::with_capacity(funcs.len());
    let fail = |map: Vec<Elem>, failure| Ok(IsoOutcome { k, map, failure: Some(failure) });
    for (i, f) in funcs.iter().enumerate() {
        match position(f) {
            Some(p) if !map.contains(&p) => map.push(p),
            _ => {
                return fail(map, IsoFailure::NotBijective { element: m.label(i) });
            }
        }
    }
    if map.len() != ik.size() {
        return fail(map, IsoFailure::NotBijective { element: String::new() });
    }
    if let Err((a, b)) = m.check_isomorphism(&ik, &map) {
        return fail(
            map,
            IsoFailure::Product {
                left: m.label(a),
                right: m.label(b),
            },
        );
    }
    if all[map[tr.t()]] != t_function(k) {
        return fail(map, IsoFailure::TMismatch);
    }
    for s in m.elements() {
        if all[map[tr.f()[s]]] != f_function(&all[map[s]]) {
            return fail(map, IsoFailure::FMismatch { element: m.label(s) });
        }
    }
    if k > 1 {
        for s in i_functions(k - 1) {
            if f_function(&embed_function(&s)) != embed_function(&f_function(&s)) {
                return fail(map, IsoFailure::FRestriction { element: function_label(&s) });
            }
        }
    }
    Ok(IsoOutcome { k, map, failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionOutcome {
    pub n: usize,
    pub pairs: usize,
    /// `(x, y, direct, recursive)` for the first disagreement.
    pub mismatch: Option<(String, String, bool, bool)>,
    /// `≤` on `I_{n+1}` restricted to the embedded `I_n` equals `≤` on `I_n`.
    pub restriction_holds: bool,
}

impl RecursionOutcome {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && self.restriction_holds
    }
}

/// Divisibility order `s_1 ∈ s_2 I_m` on `I_m`, indexed like `family_i(m)`.
fn direct_order(m: usize) -> Result<Vec<Vec<bool>>> {
    let im = Arc::new(family_i(m)?);
    let x = x_of(&im);
    let class: Vec<usize> = im.elements().map(|e| x.class_of(e).unwrap()).collect();
    Ok(im
        .elements()
        .map(|a| im.elements().map(|b| x.leq(class[a], class[b])).collect())
        .collect())
}

/// Compares the divisibility order on `I_{n+1}` with the recursive one:
/// `t^{e_1} s_1 <= t^{e_2} s_2` iff `e_2 <= e_1` and `s_1 <= f^{e_1 - e_2}(s_2)`.
pub fn order_recursion_check(n: usize) -> Result<RecursionOutcome> {
    if n == 0 {
        return Err(Error::BadParameter("order recursion starts at n = 1".into()));
    }
    if n + 1 > MU_GUARD && !crate::guard_lifted() {
        return Err(Error::GuardExceeded {
            what: "order recursion level",
            size: n + 1,
            limit: MU_GUARD,
        });
    }
    // recursive order on I_m, built up from I_1
    let mut order = vec![vec![true]];
    for m in 1..=n {
        let small = i_functions(m);
        let big = i_functions(m + 1);
        let t = t_function(m + 1);
        let pos = |f: &[u8]| small.iter().position(|g| g == f).unwrap();
        let decompose = |sigma: &[u8]| -> (usize, usize) {
            for (i, s) in small.iter().enumerate() {
                let e = embed_function(s);
                if e == sigma {
                    return (0, i);
                }
                if compose(&t, &e) == sigma {
                    return (1, i);
                }
            }
            unreachable!("every element is s' or t s'")
        };
        let parts: Vec<(usize, usize)> = big.iter().map(|f| decompose(f)).collect();
        let f_of: Vec<usize> = small.iter().map(|s| pos(&f_function(s))).collect();
        let next: Vec<Vec<bool>> = parts
            .iter()
            .map(|&(e1, s1)| {
                parts
                    .iter()
                    .map(|&(e2, s2)| e2 <= e1 && order[s1][if e1 > e2 { f_of[s2] } else { s2 }])
                    .collect()
            })
            .collect();
        order = next;
    }
    let direct = direct_order(n + 1)?;
    let labels: Vec<String> = i_functions(n + 1).iter().map(|f| function_label(f)).collect();
    let size = direct.len();
    let mut mismatch = None;
    'outer: for a in 0..size {
        for b in 0..size {
            if direct[a][b] != order[a][b] {
                mismatch = Some((labels[a].clone(), labels[b].clone(), direct[a][b], order[a][b]));
                break 'outer;
            }
        }
    }
    let small = direct_order(n)?;
    let big = i_functions(n + 1);
    let embedded: Vec<usize> = i_functions(n)
        .iter()
        .map(|s| {
            let e = embed_function(s);
            big.iter().position(|g| *g == e).unwrap()
        })
        .collect();
    let restriction_holds = (0..embedded.len())
        .all(|a| (0..embedded.len()).all(|b| small[a][b] == direct[embedded[a]][embedded[b]]));
    Ok(RecursionOutcome {
        n,
        pairs: size * size,
        mismatch,
        restriction_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseOutcome {
    /// Names used: `a3 < a2 < a1 < 1` from `I_3`, and `t4`.
    pub names: Vec<(String, String)>,
    /// Pairs in the closure of the listed relations but not in `≤_{I_4}`.
    pub missing: Vec<(String, String)>,
    /// Pairs in `≤_{I_4}` but not in the closure.
    pub extra: Vec<(String, String)>,
    pub t4_below_a1: bool,
    pub t4_a2_incomparable: bool,
    pub m1_ramsey: bool,
    pub m2_ramsey: bool,
}

impl HasseOutcome {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.t4_below_a1 && self.t4_a2_incomparable && self.m1_ramsey && self.m2_ramsey
    }
}

/// Compares `≤_{I_4}` with the closure of
/// `a3 < a2 < a1 < 1`, `t4a3 < t4a2 < t4a1 < t4`, `t4 < a1`, `t4a1 < a3`,
/// and checks that `I_4 - {t4}` and `I_4 - {a2, a3}` are Ramsey submonoids.
pub fn i4_hasse_check() -> Result<HasseOutcome> {
    let i3 = direct_order(3)?;
    let f3 = i_functions(3);
    // I_3 is a chain; sort by the number of elements below
    let mut chain: Vec<usize> = (0..f3.len()).collect();
    chain.sort_by_key(|&a| (0..f3.len()).filter(|&b| i3[b][a]).count());
    let [a3, a2, a1, one] = [chain[0], chain[1], chain[2], chain[3]];

    let f4 = i_functions(4);
    let t4 = t_function(4);
    let idx = |f: &[u8]| f4.iter().position(|g| g == f).unwrap();
    let plain = |s: usize| idx(&embed_function(&f3[s]));
    let shifted = |s: usize| idx(&compose(&t4, &embed_function(&f3[s])));
    let mut gens = Vec::new();
    for w in [a3, a2, a1, one].windows(2) {
        gens.push((plain(w[0]), plain(w[1])));
        gens.push((shifted(w[0]), shifted(w[1])));
    }
    gens.push((shifted(one), plain(a1)));
    gens.push((shifted(a1), plain(a3)));
    let labels: Vec<String> = f4.iter().map(|f| function_label(f)).collect();
    let closure = Poset::from_generators(labels.clone(), &gens).map_err(|v| Error::Input(format!("listed relations are not an order: {v:?}")))?;
    let direct = direct_order(4)?;
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    for a in 0..f4.len() {
        for b in 0..f4.len() {
            match (closure.leq(a, b), direct[a][b]) {
                (true, false) => missing.push((labels[a].clone(), labels[b].clone())),
                (false, true) => extra.push((labels[a].clone(), labels[b].clone())),
                _ => {}
            }
        }
    }
    let t = shifted(one);
    let (p1, p2, p3) = (plain(a1), plain(a2), plain(a3));
    let i4 = family_i(4)?;
    let ramsey_without = |drop: &[usize]| -> Result<bool> {
        let keep: Vec<usize> = i4.elements().filter(|e| !drop.contains(e)).collect();
        let (sub, _) = i4.submonoid(&keep)?;
        Ok(decide_ramsey(&Arc::new(sub)) == RamseyVerdict::Ramsey)
    };
    let names = [("a3", p3), ("a2", p2), ("a1", p1), ("1", plain(one)), ("t4", t)]
        .iter()
        .map(|(n, i)| (n.to_string(), labels[*i].clone()))
        .collect();
    Ok(HasseOutcome {
        names,
        missing,
        extra,
        t4_below_a1: direct[t][p1],
        t4_a2_incomparable: !direct[t][p2] && !direct[p2][t],
        m1_ramsey: ramsey_without(&[t])?,
        m2_ramsey: ramsey_without(&[p2, p3])?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TechOutcome {
    pub checked: usize,
    /// `(s, σ)` with no `s'` such that `τsσ = τss'`.
    pub failure: Option<(String, String)>,
}

/// For every `s ∈ M` and `σ ∈ N`, finds `s' ∈ M` with `τsσ = τss'`.
pub fn lemma_tech_check(tr: &MuTriple) -> Result<TechOutcome> {
    let n = tr
        .base
        .ok_or_else(|| Error::Input("triple was not built by mu".into()))?;
    let big = tr.monoid();
    let tau = tr.t();
    let mut checked = 0;
    for s in 0..n {
        let ts = big.mul(tau, s);
        for sigma in big.elements() {
            checked += 1;
            let target = big.mul(ts, sigma);
            if !(0..n).any(|s2| big.mul(tau, big.mul(s, s2)) == target) {
                return Ok(TechOutcome {
                    checked,
                    failure: Some((big.label(s), big.label(sigma))),
                });
            }
        }
    }
    Ok(TechOutcome { checked, failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedIsoOutcome {
    pub n: usize,
    /// `f -> f(01..(n-1))` is a bijection onto `I_n(01..(n-1))`.
    pub bijective: bool,
    /// `(af)(w) = a(f(w))` and `1 -> w`.
    pub equivariant: bool,
    pub verdict: RamseyVerdict,
}

/// The pointed `I_n`-set `I_n(01..(n-1))` against `I_n` acting on itself.
pub fn lupini_word_check(n: usize) -> Result<PointedIsoOutcome> {
    let m = Arc::new(family_i(n)?);
    let funcs = i_functions(n);
    let w: Vec<u8> = (0..n as u8).collect();
    let apply = |f: &[u8], word: &[u8]| -> Vec<u8> { word.iter().map(|&c| f[c as usize]).collect() };
    let images: Vec<Vec<u8>> = funcs.iter().map(|f| apply(f, &w)).collect();
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let bijective = sorted.len() == funcs.len();
    let image_of = |word: &[u8]| images.iter().position(|x| x == word);
    let equivariant = image_of(&w) == Some(m.identity())
        && m.elements().all(|a| {
            m.elements()
                .all(|f| image_of(&apply(&funcs[a], &images[f])) == Some(m.mul(a, f)))
        });
    Ok(PointedIsoOutcome {
        n,
        bijective,
        equivariant,
        verdict: decide_ramsey(&m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_basics() {
        let m2 = tower(2).unwrap();
        let m3 = mu_named(&m2, "M_3", "t3").unwrap();
        let big = m3.monoid();
        assert_eq!(big.size(), 2 * m2.monoid().size());
        let tau = m3.t();
        // ττ = τt
        let t = m2.t();
        assert_eq!(big.mul(tau, tau), big.mul(tau, t));
        for a in m2.monoid().elements() {
            for b in m2.monoid().elements() {
                assert_eq!(big.mul(a, b), m2.monoid().mul(a, b));
            }
        }
        for s in big.elements() {
            assert_eq!(big.mul(s, tau), big.mul(tau, m3.f()[s]));
        }
        assert_eq!(m3.base_size(), Some(2));
        assert_eq!(big.label(tau), "t3");
        assert_eq!(big.label(big.mul(tau, t)), "t3·t2");
    }

    #[test]
    fn tower_sizes() {
        assert!(tower(0).is_err());
        assert_eq!(tower(1).unwrap().monoid().size(), 1);
        for k in 1..=6 {
            assert_eq!(tower(k).unwrap().monoid().size(), 1 << (k - 1));
        }
    }

    #[test]
    fn bad_triples_are_rejected() {
        let g = Arc::new(crate::families::gowers(3).unwrap());
        // f = constant at 2 does not fix the identity
        assert!(MuTriple::new(g.clone(), 1, vec![2, 2, 2]).is_err());
        // identity endomorphism: st = ts holds since G_3 is commutative
        assert!(MuTriple::new(g, 1, vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn iso_small_levels() {
        for k in 1..=5 {
            let out = iso_to_concrete(k).unwrap();
            assert!(out.passed(), "{out:?}");
        }
    }

    #[test]
    fn recursion_small_levels() {
        for n in 1..=3 {
            let out = order_recursion_check(n).unwrap();
            assert!(out.passed(), "{out:?}");
        }
        assert_eq!(order_recursion_check(3).unwrap().pairs, 64);
    }

    #[test]
    fn i4_hasse() {
        let out = i4_hasse_check().unwrap();
        assert!(out.passed(), "{out:?}");
        assert_eq!(out.names[4].1, "0012");
        assert_eq!(out.names[2].1, "0122");
    }

    #[test]
    fn tech_lemma_on_tower() {
        let out = lemma_tech_check(&tower(4).unwrap()).unwrap();
        assert!(out.failure.is_none());
        assert_eq!(out.checked, 4 * 8);
        assert!(lemma_tech_check(&MuTriple::trivial()).is_err());
    }

    #[test]
    fn lupini_words() {
        for n in 1..=5 {
            let out = lupini_word_check(n).unwrap();
            assert!(out.bijective && out.equivariant);
            assert_eq!(out.verdict.name(), if n >= 4 { "NotRamsey" } else { "Ramsey" });
        }
    }
}
