//! Brute-force reference implementations used as test oracles. Everything
//! here works from raw multiplication tables and shares no code with the
//! library beyond reading those tables.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use ramsey_monoid::Monoid;

#[derive(Clone, Debug)]
pub struct Table {
    pub n: usize,
    pub id: usize,
    pub t: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

impl Table {
    pub fn of(m: &Monoid) -> Table {
        let j = m.to_json();
        let t: Vec<Vec<usize>> = j.table.iter().map(|r| r.iter().map(|&x| x as usize).collect()).collect();
        let labels = j.labels.unwrap_or_else(|| (0..j.size).map(|i| i.to_string()).collect());
        Table {
            n: j.size,
            id: j.identity as usize,
            t,
            labels,
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.t[a][b]
    }

    pub fn is_monoid(&self) -> bool {
        let n = self.n;
        if self.t.len() != n || self.t.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return false;
        }
        for a in 0..n {
            if self.mul(self.id, a) != a || self.mul(a, self.id) != a {
                return false;
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `aM` as a sorted set.
    pub fn ideal(&self, a: usize) -> BTreeSet<usize> {
        (0..self.n).map(|c| self.mul(a, c)).collect()
    }

    pub fn r_classes(&self) -> Vec<Vec<usize>> {
        let mut by: HashMap<BTreeSet<usize>, Vec<usize>> = HashMap::new();
        for a in 0..self.n {
            by.entry(self.ideal(a)).or_default().push(a);
        }
        let mut out: Vec<Vec<usize>> = by.into_values().collect();
        out.sort();
        out
    }

    pub fn r_trivial(&self) -> bool {
        self.r_classes().iter().all(|c| c.len() == 1)
    }

    pub fn almost_r_trivial(&self) -> bool {
        self.r_classes()
            .iter()
            .filter(|c| c.len() > 1)
            .flatten()
            .all(|&b| (0..self.n).all(|a| self.mul(a, b) == b))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn find(&self, label: &str) -> usize {
        self.labels.iter().position(|l| l == label).expect("label present")
    }
}

/// Principal right ideals under inclusion with `a·(cM) = acM`.
#[derive(Clone, Debug)]
pub struct OracleX {
    pub ideals: Vec<BTreeSet<usize>>,
    pub class_of: Vec<usize>,
    pub rep: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

impl OracleX {
    pub fn new(m: &Table) -> OracleX {
        let mut ideals: Vec<BTreeSet<usize>> = Vec::new();
        let mut rep = Vec::new();
        let mut class_of = vec![0; m.n];
        for a in 0..m.n {
            let i = m.ideal(a);
            match ideals.iter().position(|j| *j == i) {
                Some(p) => class_of[a] = p,
                None => {
                    class_of[a] = ideals.len();
                    ideals.push(i);
                    rep.push(a);
                }
            }
        }
        let act = (0..m.n)
            .map(|a| rep.iter().map(|&r| class_of[m.mul(a, r)]).collect())
            .collect();
        OracleX {
            ideals,
            class_of,
            rep,
            act,
        }
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.ideals[p].is_subset(&self.ideals[q])
    }

    pub fn linear(&self) -> bool {
        (0..self.len()).all(|p| (0..self.len()).all(|q| self.leq(p, q) || self.leq(q, p)))
    }

    /// `{a·x : x <= y} = {x : x <= a·y}` for all `a`, `y`.
    pub fn strong(&self) -> bool {
        let n = self.len();
        (0..self.act.len()).all(|a| {
            (0..n).all(|y| {
                let lhs: BTreeSet<usize> = (0..n).filter(|&x| self.leq(x, y)).map(|x| self.act[a][x]).collect();
                let rhs: BTreeSet<usize> = (0..n).filter(|&x| self.leq(x, self.act[a][y])).collect();
                lhs == rhs
            })
        })
    }
}

/// Nonempty chains of `X` under end-extension, acting pointwise.
#[derive(Clone, Debug)]
pub struct OracleY {
    pub chains: Vec<BTreeSet<usize>>,
    pub index: HashMap<BTreeSet<usize>, usize>,
    pub leq: Vec<Vec<bool>>,
    pub act: Vec<Vec<usize>>,
}

impl OracleY {
    pub fn new(x: &OracleX) -> OracleY {
        let n = x.len();
        let mut chains: Vec<BTreeSet<usize>> = Vec::new();
        for mask in 1u64..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if s.iter().all(|&p| s.iter().all(|&q| x.leq(p, q) || x.leq(q, p))) {
                chains.push(s.into_iter().collect());
            }
        }
        let index: HashMap<BTreeSet<usize>, usize> = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let leq = chains
            .iter()
            .map(|c| {
                chains
                    .iter()
                    .map(|d| c.is_subset(d) && d.difference(c).all(|&p| c.iter().all(|&q| x.leq(q, p) && p != q)))
                    .collect()
            })
            .collect();
        let act = x
            .act
            .iter()
            .map(|row| {
                chains
                    .iter()
                    .map(|c| index[&c.iter().map(|&p| row[p]).collect::<BTreeSet<usize>>()])
                    .collect()
            })
            .collect();
        OracleY { chains, index, leq, act }
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn strong(&self) -> bool {
        let n = self.len();
        (0..self.act.len()).all(|a| {
            (0..n).all(|y| {
                let lhs: BTreeSet<usize> = (0..n).filter(|&x| self.leq[x][y]).map(|x| self.act[a][x]).collect();
                let rhs: BTreeSet<usize> = (0..n).filter(|&x| self.leq[x][self.act[a][y]]).collect();
                lhs == rhs
            })
        })
    }

    fn max_of(&self, x: &OracleX, c: usize) -> usize {
        let ch = &self.chains[c];
        *ch.iter().find(|&&p| ch.iter().all(|&q| x.leq(q, p))).unwrap()
    }

    /// `max`: onto, equivariant, and the image of `<=` is exactly `<=`.
    pub fn pi_max_epimorphism(&self, x: &OracleX) -> bool {
        let pi: Vec<usize> = (0..self.len()).map(|c| self.max_of(x, c)).collect();
        let onto = (0..x.len()).all(|p| pi.contains(&p));
        let equivariant = (0..self.act.len()).all(|a| (0..self.len()).all(|c| pi[self.act[a][c]] == x.act[a][pi[c]]));
        let mut image = HashSet::new();
        for c in 0..self.len() {
            for d in 0..self.len() {
                if self.leq[c][d] {
                    image.insert((pi[c], pi[d]));
                }
            }
        }
        let order: HashSet<(usize, usize)> = (0..x.len())
            .flat_map(|p| (0..x.len()).map(move |q| (p, q)))
            .filter(|&(p, q)| x.leq(p, q))
            .collect();
        onto && equivariant && image == order
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| (0..self.len()).all(|d| d == c || !self.leq[c][d]))
            .collect()
    }
}

/// All irreducible words reachable by replacing an adjacent comparable
/// pair with its larger letter.
pub fn rewrite_normal_forms(leq: &dyn Fn(usize, usize) -> bool, word: &[usize]) -> HashSet<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = HashSet::new();
    let mut queue = VecDeque::from([word.to_vec()]);
    while let Some(w) = queue.pop_front() {
        if !seen.insert(w.clone()) {
            continue;
        }
        let mut reducible = false;
        for i in 0..w.len().saturating_sub(1) {
            let (p, q) = (w[i], w[i + 1]);
            let keep = if leq(p, q) {
                Some(q)
            } else if leq(q, p) {
                Some(p)
            } else {
                None
            };
            if let Some(k) = keep {
                reducible = true;
                let mut v = w[..i].to_vec();
                v.push(k);
                v.extend_from_slice(&w[i + 2..]);
                queue.push_back(v);
            }
        }
        if !reducible {
            out.insert(w);
        }
    }
    out
}

/// Unique normal form; panics if the rewriting is not confluent.
pub fn normal_form(leq: &dyn Fn(usize, usize) -> bool, word: &[usize]) -> Vec<usize> {
    let forms = rewrite_normal_forms(leq, word);
    assert_eq!(forms.len(), 1, "rewriting not confluent on {word:?}");
    forms.into_iter().next().unwrap()
}

/// Reflexive-transitive closure of `pairs` on `n` points.
pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub type Word = Vec<(usize, usize)>;

/// Words with strictly increasing slots in `0..=max_slot`, length
/// `1..=max_len`, letters in `0..letters`, containing `must` if given.
pub fn located_words(max_slot: usize, max_len: usize, letters: usize, must: Option<usize>) -> Vec<Word> {
    fn go(start: usize, max_slot: usize, left: usize, letters: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for s in start..=max_slot {
            for l in 0..letters {
                cur.push((s, l));
                go(s + 1, max_slot, left - 1, letters, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, max_slot, max_len, letters, &mut Vec::new(), &mut out);
    out.retain(|w| must.is_none_or(|d| w.iter().any(|&(_, l)| l == d)));
    out.sort();
    out
}

/// Reduced string: drop letters outside `alphabet`, collapse repeats.
pub fn reduce(cs: &[usize], alphabet: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &c in cs {
        if alphabet.contains(&c) && out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}
