mod common;

use std::sync::Arc;

use proptest::prelude::*;
use ramsey_monoid::arrays::PartialSemigroup;
use ramsey_monoid::coloring::reduced_string;
use ramsey_monoid::families::family_j;
use ramsey_monoid::join::JoinSemigroup;
use ramsey_monoid::poset::Poset;
use ramsey_monoid::words::{LocatedWord, LocatedWords, PointedMSet, WordFamily};

const ALPHABET: [u8; 3] = [0, 1, 2];

fn poset_strategy(max_points: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_points).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let k = pairs.len();
        (Just(n), proptest::collection::vec(any::<bool>(), k)).prop_map(move |(n, keep)| {
            let gens = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(&p, _)| p).collect();
            (n, gens)
        })
    })
}

fn semigroup(n: usize, gens: &[(usize, usize)]) -> JoinSemigroup {
    JoinSemigroup::new(Poset::from_generators((0..n).map(|i| format!("p{i}")).collect(), gens).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduced_strings(cs in proptest::collection::vec(0u8..5, 0..24)) {
        let r = reduced_string(&cs, &ALPHABET);
        prop_assert_eq!(reduced_string(&r, &ALPHABET), r.clone());
        prop_assert!(r.windows(2).all(|w| w[0] != w[1]));
        prop_assert!(r.iter().all(|c| ALPHABET.contains(c)));
        prop_assert_eq!(&r, &common::reduce(&cs.iter().map(|&c| c as usize).collect::<Vec<_>>(), &[0, 1, 2])
            .iter().map(|&c| c as u8).collect::<Vec<_>>());
        // reducing commutes with concatenation up to one more reduction
        let (u, v) = cs.split_at(cs.len() / 2);
        let joined: Vec<u8> = reduced_string(u, &ALPHABET).into_iter().chain(reduced_string(v, &ALPHABET)).collect();
        prop_assert_eq!(reduced_string(&joined, &ALPHABET), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn normalization_is_confluent((n, gens) in poset_strategy(6), seq in proptest::collection::vec(0usize..6, 1..9)) {
        let seq: Vec<usize> = seq.into_iter().map(|x| x % n).collect();
        let s = semigroup(n, &gens);
        let forms = s.all_normal_forms(&seq).unwrap();
        prop_assert_eq!(forms.len(), 1);
        let nf = s.normalize(&seq).unwrap();
        prop_assert_eq!(forms.iter().next().unwrap().as_slice(), nf.letters());
        let closure = common::closure(n, &gens);
        prop_assert_eq!(common::normal_form(&|p, q| closure[p][q], &seq), nf.letters().to_vec());
    }

    #[test]
    fn join_is_associative((n, gens) in poset_strategy(5),
                           u in proptest::collection::vec(0usize..5, 1..5),
                           v in proptest::collection::vec(0usize..5, 1..5),
                           w in proptest::collection::vec(0usize..5, 1..5)) {
        let s = semigroup(n, &gens);
        let norm = |x: &[usize]| s.normalize(&x.iter().map(|p| p % n).collect::<Vec<_>>()).unwrap();
        let (u, v, w) = (norm(&u), norm(&v), norm(&w));
        let left = s.join(&s.join(&u, &v).unwrap(), &w).unwrap();
        let right = s.join(&u, &s.join(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn located_word_products_are_associative(cuts in proptest::collection::btree_set(0usize..30, 3..12), letters in proptest::collection::vec(0usize..4, 12)) {
        let m = Arc::new(family_j(&["a1", "a2"], &["b"]).unwrap());
        let ls = LocatedWords { family: Arc::new(WordFamily::constant(PointedMSet::left_regular(&m))) };
        let slots: Vec<usize> = cuts.into_iter().collect();
        let k = slots.len();
        let entries: Vec<(usize, usize)> = slots.iter().zip(&letters).map(|(&s, &l)| (s, l)).collect();
        let (a, b, c) = (&entries[..1], &entries[1..k / 2 + 1], &entries[k / 2 + 1..]);
        prop_assume!(!c.is_empty());
        let (a, b, c) = (LocatedWord::new(a.to_vec()).unwrap(), LocatedWord::new(b.to_vec()).unwrap(), LocatedWord::new(c.to_vec()).unwrap());
        let left = ls.product(&ls.product(&a, &b).unwrap(), &c);
        let right = ls.product(&a, &ls.product(&b, &c).unwrap());
        prop_assert_eq!(left.clone(), right);
        prop_assert_eq!(left.unwrap().entries().to_vec(), entries);
        // out of order products are undefined
        prop_assert!(ls.product(&c, &a).is_none());
    }
}
