//! The three monoid families: `G_n`, `I_n` and `J(A, B)`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::monoid::{Elem, Monoid};

/// `G_n = {0, .., n-1}` with `i * j = min(i + j, n - 1)` and identity 0.
pub fn gowers(n: usize) -> Result<Monoid> {
    if n == 0 {
        return Err(Error::BadParameter("G_n needs n >= 1".into()));
    }
    let table = (0..n)
        .map(|i| (0..n).map(|j| (i + j).min(n - 1)).collect())
        .collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    Monoid::from_table(format!("G_{n}"), 0, table, Some(labels))
}

/// All value sequences `f(0) .. f(n-1)` with `f(0) = 0` and
/// `f(i) - f(i-1)` in `{0, 1}`, in lexicographic order.
pub fn i_functions(n: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let last = *prefix.last().unwrap();
        for next in [last, last + 1] {
            prefix.push(next);
            extend(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(&mut vec![0], n, &mut out);
    }
    out
}

/// Composition `(f g)(i) = f(g(i))`.
pub fn compose(f: &[u8], g: &[u8]) -> Vec<u8> {
    g.iter().map(|&x| f[x as usize]).collect()
}

/// Compact label of a function, e.g. `0112`.
pub fn function_label(f: &[u8]) -> String {
    if f.iter().all(|&v| v < 10) {
        f.iter().map(|v| char::from(b'0' + v)).collect()
    } else {
        f.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// `I_n`: non-decreasing surjections of `n` onto an initial segment, under
/// composition. Elements are indexed in lexicographic order of their value
/// sequences, so the identity is the last element.
pub fn family_i(n: usize) -> Result<Monoid> {
    if n == 0 {
        return Err(Error::BadParameter("I_n needs n >= 1".into()));
    }
    let funcs = i_functions(n);
    let index: HashMap<&[u8], usize> = funcs
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect();
    let table = funcs
        .iter()
        .map(|f| funcs.iter().map(|g| index[compose(f, g).as_slice()]).collect())
        .collect();
    let identity: Vec<u8> = (0..n as u8).collect();
    let labels = funcs.iter().map(|f| function_label(f)).collect();
    Monoid::from_table(format!("I_{n}"), index[identity.as_slice()], table, Some(labels))
}

/// Value sequence of element `e` of `family_i(n)`.
pub fn i_function_of(n: usize, e: Elem) -> Vec<u8> {
    i_functions(n).swap_remove(e)
}

/// Index of a value sequence in `family_i(f.len())`.
pub fn i_index_of(f: &[u8]) -> Option<Elem> {
    i_functions(f.len()).iter().position(|g| g == f)
}

/// `t_k(0) = 0`, `t_k(i) = i - 1` for `0 < i < k`.
pub fn t_function(k: usize) -> Vec<u8> {
    (0..k).map(|i| i.saturating_sub(1) as u8).collect()
}

/// `f_k(s)(0) = 0`, `f_k(s)(i) = s(i - 1) + 1` for `0 < i < k`.
pub fn f_function(s: &[u8]) -> Vec<u8> {
    let k = s.len();
    (0..k)
        .map(|i| if i == 0 { 0 } else { s[i - 1] + 1 })
        .collect()
}

/// The embedding `I_{k-1} -> I_k`, `s'(0) = 0`, `s'(i) = s(i - 1) + 1`.
pub fn embed_function(s: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(s.len() + 1);
    out.push(0);
    out.extend(s.iter().map(|&v| v + 1));
    out
}

/// `J(A, B) = {1} ∪ A ∪ B` with `c a = c` for `a ∈ A` and `c b = b` for
/// `b ∈ B`. Index 0 is the identity, then `A` in order, then `B`.
pub fn family_j<S: AsRef<str>>(a: &[S], b: &[S]) -> Result<Monoid> {
    let a: Vec<&str> = a.iter().map(|s| s.as_ref()).collect();
    let b: Vec<&str> = b.iter().map(|s| s.as_ref()).collect();
    let mut seen = HashSet::new();
    for &l in a.iter().chain(b.iter()) {
        if l == "1" {
            return Err(Error::BadParameter(
                "the label 1 is reserved for the identity".into(),
            ));
        }
        if !seen.insert(l) {
            return Err(if a.contains(&l) && b.contains(&l) {
                Error::OverlappingLabels(l.to_string())
            } else {
                Error::DuplicateLabel(l.to_string())
            });
        }
    }
    let n = 1 + a.len() + b.len();
    let is_a = |i: usize| i >= 1 && i <= a.len();
    let table = (0..n)
        .map(|c| {
            (0..n)
                .map(|d| {
                    if c == 0 {
                        d
                    } else if d == 0 || is_a(d) {
                        c
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect();
    let labels = std::iter::once("1")
        .chain(a.iter().copied())
        .chain(b.iter().copied())
        .map(String::from)
        .collect();
    let name = format!("J({{{}}},{{{}}})", a.join(","), b.join(","));
    Monoid::from_table(name, 0, table, Some(labels))
}
