//! Acceptance criteria 1-10, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramsey_monoid::certificate::{default_families, strongness_of};
use ramsey_monoid::coloring::Coloring;
use ramsey_monoid::families::{family_i, family_j, gowers};
use ramsey_monoid::fk::reduced_string_embedding_check;
use ramsey_monoid::join::JoinSemigroup;
use ramsey_monoid::laws::{act_endomorphism_sample, acted_posets_of, associativity_exhaustive, confluence_sample};
use ramsey_monoid::mu::{i4_hasse_check, iso_to_concrete, lemma_tech_check, order_recursion_check, tower};
use ramsey_monoid::order::{decide_ramsey, RamseyVerdict};
use ramsey_monoid::poset::Poset;
use ramsey_monoid::tame::{check_tame, search_tame, verify_not_ramsey, SearchBounds, SearchOutcome, TypeFilter, TypeSpace};
use ramsey_monoid::words::{PointedMSet, WordFamily};
use ramsey_monoid::Monoid;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn j_labels(na: usize, nb: usize) -> (Vec<String>, Vec<String>) {
    ((1..=na).map(|i| format!("a{i}")).collect(), (1..=nb).map(|i| format!("b{i}")).collect())
}

fn all_families() -> Vec<(String, Monoid, Option<(usize, usize)>)> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push((format!("G_{n}"), gowers(n).unwrap(), None));
    }
    for n in 1..=6 {
        out.push((format!("I_{n}"), family_i(n).unwrap(), None));
    }
    for na in 0..=3 {
        for nb in 0..=3 {
            let (a, b) = j_labels(na, nb);
            out.push((format!("J({na},{nb})"), family_j(&a, &b).unwrap(), Some((na, nb))));
        }
    }
    out
}

fn c1_family_sanity() -> Check {
    for (name, m, _) in all_families() {
        ensure(m.validate().is_valid(), || format!("{name}: library validate failed"))?;
        ensure(Table::of(&m).is_monoid(), || format!("{name}: table fails the brute-force monoid check"))?;
    }
    for n in 1..=8usize {
        // all n^n self-maps, keeping non-decreasing surjections onto an initial segment
        let mut count = 0u64;
        let mut f = vec![0usize; n];
        loop {
            let ok = f[0] == 0 && f.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
            count += ok as u64;
            let mut i = 0;
            while i < n {
                f[i] += 1;
                if f[i] < n {
                    break;
                }
                f[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        let size = family_i(n).unwrap().size() as u64;
        ensure(count == 1 << (n - 1) && size == count, || format!("|I_{n}| = {size}, enumeration {count}"))?;
    }
    // tables of I_n are composition of the labelled functions
    for n in 1..=6 {
        let t = Table::of(&family_i(n).unwrap());
        let f: Vec<Vec<usize>> = t.labels.iter().map(|l| l.bytes().map(|b| (b - b'0') as usize).collect()).collect();
        for a in 0..t.n {
            for b in 0..t.n {
                let comp: Vec<usize> = f[b].iter().map(|&x| f[a][x]).collect();
                ensure(f[t.mul(a, b)] == comp, || format!("I_{n}: {} * {} is not composition", t.labels[a], t.labels[b]))?;
            }
        }
    }
    Ok(())
}

fn c2_r_structure() -> Check {
    for (name, m, j) in all_families() {
        let t = Table::of(&m);
        ensure(m.is_r_trivial() == t.r_trivial(), || format!("{name}: R-trivial flag disagrees with brute force"))?;
        ensure(m.is_almost_r_trivial() == t.almost_r_trivial(), || format!("{name}: almost R-trivial flag disagrees"))?;
        match j {
            None => ensure(m.is_r_trivial(), || format!("{name} should be R-trivial"))?,
            Some((_, nb)) => {
                ensure(m.is_almost_r_trivial(), || format!("{name} should be almost R-trivial"))?;
                ensure(m.is_r_trivial() == (nb < 2), || format!("{name}: R-trivial should be |B| < 2"))?;
            }
        }
    }
    Ok(())
}

fn c3_verdicts() -> Check {
    for (name, m, j) in all_families() {
        let t = Table::of(&m);
        let x = OracleX::new(&t);
        let expected_ramsey = match (name.as_bytes()[0], j) {
            (b'G', _) => true,
            (b'I', _) => m.size() <= 4,
            (_, Some((na, _))) => na <= 1,
            _ => unreachable!(),
        };
        // decision rule evaluated on the oracle X(M)
        let oracle_ramsey = x.linear() && t.almost_r_trivial();
        ensure(oracle_ramsey == expected_ramsey, || format!("{name}: oracle disagrees with the expected verdict"))?;
        let v = decide_ramsey(&Arc::new(m.clone()));
        match v {
            RamseyVerdict::Ramsey => ensure(expected_ramsey, || format!("{name}: got Ramsey"))?,
            RamseyVerdict::NotRamsey { a, b, .. } => {
                ensure(!expected_ramsey, || format!("{name}: got NotRamsey"))?;
                let (ia, ib) = (t.ideal(a), t.ideal(b));
                ensure(!ia.is_subset(&ib) && !ib.is_subset(&ia), || {
                    format!("{name}: witness {} {} is comparable", t.label(a), t.label(b))
                })?;
            }
            RamseyVerdict::Undetermined => return Err(format!("{name}: undetermined")),
        }
    }
    Ok(())
}

fn c4_mu_tower() -> Check {
    for k in 1..=6 {
        let out = iso_to_concrete(k).map_err(|e| e.to_string())?;
        ensure(out.passed(), || format!("tower({k}): {:?}", out.failure))?;
        // independent re-check of the bijection
        let tw = Table::of(tower(k).unwrap().monoid());
        let ik = Table::of(&family_i(k).unwrap());
        let f = &out.map;
        let image: BTreeSet<usize> = f.iter().copied().collect();
        ensure(tw.n == ik.n && image.len() == ik.n && f[tw.id] == ik.id, || format!("tower({k}): map not a bijection"))?;
        for a in 0..tw.n {
            for b in 0..tw.n {
                ensure(f[tw.mul(a, b)] == ik.mul(f[a], f[b]), || format!("tower({k}): map not multiplicative"))?;
            }
        }
    }
    for n in 1..=5 {
        let out = order_recursion_check(n).map_err(|e| e.to_string())?;
        ensure(out.passed(), || format!("order recursion n={n}: {:?}", out.mismatch))?;
    }
    let tech = lemma_tech_check(&tower(4).unwrap()).map_err(|e| e.to_string())?;
    ensure(tech.failure.is_none() && tech.checked > 0, || format!("tech lemma: {:?}", tech.failure))
}

fn c5_i4_structure() -> Check {
    let lib = i4_hasse_check().map_err(|e| e.to_string())?;
    ensure(lib.passed(), || format!("library check: {lib:?}"))?;

    // oracle: I_4 as functions, order a <= b iff a = b∘c for some c
    let funcs: Vec<Vec<usize>> = {
        let mut v = Vec::new();
        for f1 in 0..=1 {
            for d2 in 0..=1 {
                for d3 in 0..=1 {
                    v.push(vec![0, f1, f1 + d2, f1 + d2 + d3]);
                }
            }
        }
        v
    };
    let idx = |f: &[usize]| funcs.iter().position(|g| g == f).unwrap();
    let comp = |f: &[usize], g: &[usize]| -> Vec<usize> { g.iter().map(|&x| f[x]).collect() };
    let below = |set: &[usize], a: usize, b: usize| set.iter().any(|&c| comp(&funcs[b], &funcs[c]) == funcs[a]);
    let all: Vec<usize> = (0..8).collect();
    // I_3 embedded as s ↦ (0, s+1); a_3 < a_2 < a_1 < 1
    let embedded: Vec<usize> = (0..8).filter(|&i| funcs[i][1] == 1).collect();
    let mut chain = embedded.clone();
    chain.sort_by_key(|&a| embedded.iter().filter(|&&b| below(&all, b, a)).count());
    let [a3, a2, a1, one] = [chain[0], chain[1], chain[2], chain[3]];
    let t4 = idx(&[0, 0, 1, 2]);
    let t = |s: usize| idx(&comp(&funcs[t4], &funcs[s]));
    let gens = vec![
        (a3, a2),
        (a2, a1),
        (a1, one),
        (t(a3), t(a2)),
        (t(a2), t(a1)),
        (t(a1), t4),
        (t4, a1),
        (t(a1), a3),
    ];
    let closed = closure(8, &gens);
    for a in 0..8 {
        for b in 0..8 {
            ensure(closed[a][b] == below(&all, a, b), || format!("closure differs from <= at {:?} {:?}", funcs[a], funcs[b]))?;
        }
    }
    for (name, drop) in [("M_1", vec![t4]), ("M_2", vec![a2, a3])] {
        let sub: Vec<usize> = all.iter().copied().filter(|i| !drop.contains(i)).collect();
        let closed_under = sub.iter().all(|&a| sub.iter().all(|&b| sub.contains(&idx(&comp(&funcs[a], &funcs[b])))));
        ensure(closed_under && sub.contains(&one), || format!("{name} is not a submonoid"))?;
        let linear = sub.iter().all(|&a| sub.iter().all(|&b| below(&sub, a, b) || below(&sub, b, a)));
        let r_trivial = sub.iter().all(|&a| sub.iter().all(|&b| a == b || !(below(&sub, a, b) && below(&sub, b, a))));
        ensure(linear && r_trivial, || format!("{name} should be R-trivial with a linear order"))?;
    }
    ensure(lib.m1_ramsey && lib.m2_ramsey, || "library verdict on M_1/M_2".into())
}

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> (Vec<(usize, usize)>, Vec<Vec<bool>>) {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.35) {
                gens.push((i, j));
            }
        }
    }
    let c = closure(n, &gens);
    (gens, c)
}

fn c6_join_algebra() -> Check {
    let conf = confluence_sample(0, 1000, 6, 10);
    ensure(conf.failure.is_none() && conf.words >= 1000, || format!("confluence: {:?}", conf.failure))?;
    // oracle: explore every rewrite order on fresh random words
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let (gens, leq) = random_order(&mut rng, n);
        let len = rng.gen_range(1..=9);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let forms = rewrite_normal_forms(&|p, q| leq[p][q], &word);
        ensure(forms.len() == 1, || format!("oracle found {} normal forms of {word:?}", forms.len()))?;
        let p = Poset::from_generators((0..n).map(|i| format!("p{i}")).collect(), &gens).unwrap();
        let nf = JoinSemigroup::new(p).normalize(&word).map_err(|e| e.to_string())?;
        ensure(forms.contains(nf.letters()), || format!("normalize({word:?}) = {:?}", nf.letters()))?;
    }
    let assoc = associativity_exhaustive(4, 3);
    ensure(assoc.failure.is_none() && assoc.triples > 0, || format!("associativity: {:?}", assoc.failure))?;
    let ms = vec![
        Arc::new(gowers(3).unwrap()),
        Arc::new(family_i(4).unwrap()),
        Arc::new(family_j(&["a1", "a2"], &["b"]).unwrap()),
        Arc::new(family_j(&["a"], &["b1", "b2", "b3"]).unwrap()),
    ];
    let endo = act_endomorphism_sample(&acted_posets_of(&ms), 0, 50, 5);
    ensure(endo.failure.is_none() && endo.cases > 0, || format!("endomorphism: {:?}", endo.failure))
}

fn c7_strongness() -> Check {
    for m in default_families() {
        let e = strongness_of(&m).map_err(|e| e.to_string())?;
        ensure(e.x_strong && e.y_strong && e.pi_max && e.agree, || format!("{}: {e:?}", m.name()))?;
        let t = Table::of(&m);
        let x = OracleX::new(&t);
        ensure(x.strong(), || format!("{}: oracle X not strong", m.name()))?;
        ensure(e.x_points == x.len(), || format!("{}: X size", m.name()))?;
        if x.len() <= 12 {
            let y = OracleY::new(&x);
            ensure(y.strong() && y.pi_max_epimorphism(&x), || format!("{}: oracle Y", m.name()))?;
            ensure(e.y_points == y.len(), || format!("{}: Y size {} vs oracle {}", m.name(), e.y_points, y.len()))?;
        }
    }
    Ok(())
}

fn c8_not_ramsey() -> Check {
    let monoids = [Arc::new(family_i(4).unwrap()), Arc::new(family_j(&["a1", "a2"], &["b"]).unwrap())];
    for m in monoids {
        let RamseyVerdict::NotRamsey { a, b, .. } = decide_ramsey(&m) else {
            return Err(format!("{} should be NotRamsey", m.name()));
        };
        let ev = verify_not_ramsey(&m, a, b, 5, 3).map_err(|e| e.to_string())?;
        ensure(ev.passed(), || format!("{}: {:?}", m.name(), ev.failure))?;

        // oracle over X(M) points
        let t = Table::of(&m);
        let x = OracleX::new(&t);
        let (ca, cb, one) = (x.class_of[a], x.class_of[b], x.class_of[t.id]);
        let words = located_words(5, 3, x.len(), Some(one));
        let color = |w: &[(usize, usize)]| -> usize {
            match w.iter().find(|&&(_, l)| l == ca || l == cb) {
                Some(&(_, l)) if l == ca => 0,
                _ => 1,
            }
        };
        let act = |e: usize, w: &Word| -> Word { w.iter().map(|&(s, l)| (s, x.act[e][l])).collect() };
        let mut pairs = 0usize;
        for w0 in &words {
            let last = w0.last().unwrap().0;
            let (aw, bw) = (act(a, w0), act(b, w0));
            for w1 in words.iter().filter(|w| w[0].0 > last) {
                pairs += 1;
                let pa: Word = aw.iter().chain(w1).copied().collect();
                let pb: Word = bw.iter().chain(w1).copied().collect();
                ensure(color(&pa) == 0 && color(&pb) == 1, || format!("{}: oracle violation at {w0:?} {w1:?}", m.name()))?;
            }
        }
        ensure(pairs == ev.pairs_checked && words.len() == ev.words, || {
            format!("{}: {} words/{} pairs, oracle {}/{}", m.name(), ev.words, ev.pairs_checked, words.len(), pairs)
        })?;
    }
    Ok(())
}

/// Tameness of a sequence over the left-regular family, with types in the
/// oracle `<Y(M)>` at its longest maximal chain and the parity coloring.
fn oracle_tame(t: &Table, y: &OracleY, top: usize, ws: &[Word], max_terms: usize) -> bool {
    let leq = |p: usize, q: usize| y.leq[p][q];
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let k = ws.len();
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
        if idx.len() > max_terms {
            continue;
        }
        let r = idx.len();
        for code in 0..t.n.pow(r as u32) {
            let elems: Vec<usize> = (0..r).map(|i| (code / t.n.pow(i as u32)) % t.n).collect();
            let ty = normal_form(&leq, &elems.iter().map(|&e| y.act[e][top]).collect::<Vec<_>>());
            let color = idx
                .iter()
                .zip(&elems)
                .flat_map(|(&i, &e)| ws[i].iter().map(move |&(_, l)| t.mul(e, l)))
                .filter(|&l| l != t.id)
                .count()
                % 2;
            if *seen.entry(ty).or_insert(color) != color {
                return false;
            }
        }
    }
    true
}

fn c9_witness_search() -> Check {
    let m = Arc::new(gowers(2).unwrap());
    let space = TypeSpace::of_y(&m).map_err(|e| e.to_string())?;
    let family = WordFamily::constant(PointedMSet::left_regular(&m));
    let bounds = SearchBounds::new(3, 12, 3);
    let out = search_tame(&space, &family, &Coloring::Parity, &TypeFilter::All, bounds).map_err(|e| e.to_string())?;
    let SearchOutcome::Witness { words, .. } = out else {
        return Err("no witness within slot bound 12".into());
    };
    let replay = check_tame(&space, &family, &Coloring::Parity, &words, 3, &TypeFilter::All).map_err(|e| e.to_string())?;
    ensure(replay.verdict, || "witness does not replay".into())?;

    let t = Table::of(&m);
    let x = OracleX::new(&t);
    let y = OracleY::new(&x);
    let maximal = y.maximal();
    let longest = maximal.iter().map(|&c| y.chains[c].len()).max().unwrap();
    let tops: Vec<usize> = maximal.into_iter().filter(|&c| y.chains[c].len() == longest).collect();
    ensure(tops.len() == 1, || "oracle: longest maximal chain not unique".into())?;
    let top = tops[0];
    let as_words: Vec<Word> = words.iter().map(|w| w.entries().to_vec()).collect();
    let basic = as_words.windows(2).all(|p| p[0].last().unwrap().0 < p[1][0].0);
    let pointed = as_words.iter().all(|w| w.iter().any(|&(_, l)| l == t.id) && w.len() <= 3 && w.last().unwrap().0 <= 12);
    ensure(basic && pointed, || format!("witness shape {as_words:?}"))?;
    ensure(oracle_tame(&t, &y, top, &as_words, 3), || format!("oracle rejects witness {as_words:?}"))?;

    // naive nested search with words of length <= 2
    let cands = located_words(12, 2, t.n, Some(t.id));
    let after = |w: &Word| -> Vec<&Word> {
        let last = w.last().unwrap().0;
        cands.iter().filter(|c| c[0].0 > last).collect()
    };
    let mut first = None;
    'outer: for w0 in &cands {
        for w1 in after(w0) {
            if !oracle_tame(&t, &y, top, &[w0.clone(), w1.clone()], 3) {
                continue;
            }
            for w2 in after(w1) {
                let seq = vec![w0.clone(), w1.clone(), w2.clone()];
                if oracle_tame(&t, &y, top, &seq, 3) {
                    first = Some(seq);
                    break 'outer;
                }
            }
        }
    }
    let first = first.ok_or("oracle search found no witness")?;
    ensure(as_words <= first, || format!("library witness {as_words:?} after oracle's {first:?}"))
}

fn c10_fk_embedding() -> Check {
    let report = reduced_string_embedding_check(&["a1", "a2"], &["b1", "b2"], 5).map_err(|e| e.to_string())?;
    ensure(report.passed, || format!("library: {report:?}"))?;

    let m = family_j(&["a1", "a2"], &["b1", "b2"]).unwrap();
    let t = Table::of(&m);
    let x = OracleX::new(&t);
    let y = OracleY::new(&x);
    let (a, b): (Vec<usize>, Vec<usize>) = (vec![t.find("a1"), t.find("a2")], vec![t.find("b1"), t.find("b2")]);
    let chain: BTreeSet<usize> = [x.class_of[b[0]], x.class_of[a[0]], x.class_of[t.id]].into_iter().collect();
    let point = y.index[&chain];
    let leq = |p: usize, q: usize| y.leq[p][q];
    let letters: Vec<usize> = a.iter().chain(&b).copied().collect();
    let mut by_reduced: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut sequences = 0;
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..5 {
        frontier = frontier
            .iter()
            .flat_map(|s| letters.iter().map(move |&c| [s.clone(), vec![c]].concat()))
            .collect();
        for cs in &frontier {
            sequences += 1;
            let ty = normal_form(&leq, &cs.iter().map(|&c| y.act[c][point]).collect::<Vec<_>>());
            let r = reduce(cs, &a);
            if let Some(prev) = by_reduced.insert(r.clone(), ty.clone()) {
                ensure(prev == ty, || format!("oracle: type does not factor at {cs:?}"))?;
            }
        }
    }
    let types: BTreeSet<&Vec<usize>> = by_reduced.values().collect();
    ensure(types.len() == by_reduced.len(), || "oracle: not injective".into())?;
    ensure(report.sequences == sequences && report.reduced_strings == by_reduced.len(), || {
        format!("counts {}/{} vs oracle {sequences}/{}", report.sequences, report.reduced_strings, by_reduced.len())
    })
    // the 10^4-string property tests live in tests/properties.rs
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Check, Option<u64>)> = vec![
        ("1 family sanity", c1_family_sanity, Some(5)),
        ("2 R-structure", c2_r_structure, None),
        ("3 Ramsey verdicts", c3_verdicts, Some(30)),
        ("4 mu-tower", c4_mu_tower, Some(60)),
        ("5 I_4 structure", c5_i4_structure, None),
        ("6 join algebra", c6_join_algebra, None),
        ("7 strongness", c7_strongness, None),
        ("8 non-Ramsey finitization", c8_not_ramsey, Some(120)),
        ("9 positive witness search", c9_witness_search, None),
        ("10 FK embedding", c10_fk_embedding, None),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|_| match limit {
            Some(s) if took > Duration::from_secs(s) => Err(format!("took {took:.1?}, limit {s}s")),
            _ => Ok(()),
        });
        match result {
            Ok(()) => println!("PASS criterion {name} ({took:.2?})"),
            Err(e) => {
                println!("FAIL criterion {name} ({took:.2?}): {e}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
