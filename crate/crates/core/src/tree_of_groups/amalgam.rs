use std::collections::BTreeMap;

use serde::Serialize;

use super::tree::TreeOfGroups;
use crate::error::{Error, Result};

/// Default cap on the number of enumerated words.
pub const DEFAULT_WORD_CAP: usize = 200_000;

/// A nontrivial element of some vertex group, identified across edges.
/// `support` lists every vertex whose group contains it, with its index there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub support: Vec<(usize, usize)>,
}

impl Letter {
    /// The least vertex of the support and the element there.
    pub fn home(&self) -> (usize, usize) {
        self.support[0]
    }

    fn at(&self, v: usize) -> Option<usize> {
        self.support.iter().find(|(w, _)| *w == v).map(|(_, x)| *x)
    }
}

/// A reduced word in the letters: no two neighbours lie in a common vertex group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmalgamWord {
    pub letters: Vec<usize>,
}

impl AmalgamWord {
    pub fn identity() -> Self {
        AmalgamWord { letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Word counts per length, together with the words.
#[derive(Debug, Clone, Serialize)]
pub struct Filtration {
    pub max_length: usize,
    pub counts: Vec<usize>,
    #[serde(skip)]
    pub strata: Vec<Vec<AmalgamWord>>,
}

impl Filtration {
    pub fn all(&self) -> impl Iterator<Item = &AmalgamWord> {
        self.strata.iter().flatten()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// The amalgam of a tree of groups, with letters ordered by home vertex and
/// then element index.
#[derive(Debug, Clone)]
pub struct Amalgam {
    tree: TreeOfGroups,
    letters: Vec<Letter>,
    /// `lookup[v][x]` is the letter of element `x` of the group at `v`.
    lookup: Vec<Vec<Option<usize>>>,
    inverses: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Amalgam {
    /// Ray prefixes are expanded into the core; the constant tails add no
    /// elements since each tail edge group is the whole tail vertex group.
    pub fn new(tree: &TreeOfGroups) -> Result<Self> {
        tree.check()?;
        let tree = tree.expand_prefixes();
        let injections = tree.injections()?;
        let mut offsets = Vec::with_capacity(tree.vertices.len());
        let mut total = 0;
        for v in &tree.vertices {
            offsets.push(total);
            total += v.group.order();
        }
        let mut uf = UnionFind((0..total).collect());
        for (e, (ia, ib)) in tree.edges.iter().zip(&injections) {
            for x in 1..e.group.order() {
                uf.union(offsets[e.a] + ia.apply(x), offsets[e.b] + ib.apply(x));
            }
        }
        let mut class_letter: BTreeMap<usize, usize> = BTreeMap::new();
        let mut letters: Vec<Letter> = Vec::new();
        let mut lookup: Vec<Vec<Option<usize>>> =
            tree.vertices.iter().map(|v| vec![None; v.group.order()]).collect();
        for (v, vert) in tree.vertices.iter().enumerate() {
            for (x, slot) in lookup[v].iter_mut().enumerate().take(vert.group.order()).skip(1) {
                let root = uf.find(offsets[v] + x);
                let id = *class_letter.entry(root).or_insert_with(|| {
                    letters.push(Letter { support: Vec::new() });
                    letters.len() - 1
                });
                letters[id].support.push((v, x));
                *slot = Some(id);
            }
        }
        let inverses = letters
            .iter()
            .map(|l| {
                let (v, x) = l.home();
                lookup[v][tree.vertices[v].group.inv(x)].expect("nontrivial inverse")
            })
            .collect();
        Ok(Amalgam { tree, letters, lookup, inverses })
    }

    /// The tree with prefixes expanded; vertex indices refer to it.
    pub fn tree(&self) -> &TreeOfGroups {
        &self.tree
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_of(&self, v: usize, x: usize) -> Option<usize> {
        self.lookup.get(v)?.get(x).copied().flatten()
    }

    pub fn inverse_letter(&self, l: usize) -> usize {
        self.inverses[l]
    }

    /// Product of two letters when they share a vertex group: `Some(None)`
    /// for the identity, `None` when they do not share one.
    fn merge(&self, a: usize, b: usize) -> Option<Option<usize>> {
        let la = &self.letters[a];
        let lb = &self.letters[b];
        for &(v, x) in &la.support {
            if let Some(y) = lb.at(v) {
                let z = self.tree.vertices[v].group.mul(x, y);
                return Some(self.lookup[v][z]);
            }
        }
        None
    }

    /// Leftmost-merge rewriting to a word of minimal length.
    pub fn reduce(&self, word: &[usize]) -> AmalgamWord {
        let mut stack: Vec<usize> = Vec::with_capacity(word.len());
        for &l in word {
            let mut cur = Some(l);
            while let Some(c) = cur {
                match stack.last().and_then(|&t| self.merge(t, c)) {
                    Some(merged) => {
                        stack.pop();
                        cur = merged;
                    }
                    None => {
                        stack.push(c);
                        cur = None;
                    }
                }
            }
        }
        AmalgamWord { letters: stack }
    }

    pub fn length(&self, word: &[usize]) -> usize {
        self.reduce(word).len()
    }

    pub fn inverse(&self, w: &AmalgamWord) -> AmalgamWord {
        AmalgamWord { letters: w.letters.iter().rev().map(|&l| self.inverses[l]).collect() }
    }

    pub fn multiply(&self, a: &AmalgamWord, b: &AmalgamWord) -> AmalgamWord {
        let joined: Vec<usize> = a.letters.iter().chain(&b.letters).copied().collect();
        self.reduce(&joined)
    }

    /// Whether two words represent the same element.
    pub fn equal(&self, a: &AmalgamWord, b: &AmalgamWord) -> bool {
        self.multiply(a, &self.inverse(b)).is_empty()
    }

    /// The canonical representative: at each step the least letter whose
    /// removal from the left shortens the element.
    pub fn canonical(&self, word: &[usize]) -> AmalgamWord {
        let mut rest = self.reduce(word);
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let m = rest.len();
            let first = (0..self.letters.len())
                .find_map(|x| {
                    let mut w = vec![self.inverses[x]];
                    w.extend_from_slice(&rest.letters);
                    let r = self.reduce(&w);
                    (r.len() + 1 == m).then_some((x, r))
                })
                .expect("some letter shortens a nontrivial word");
            out.push(first.0);
            rest = first.1;
        }
        AmalgamWord { letters: out }
    }

    /// All elements of length at most `max_length`, one canonical word each,
    /// grouped by length. Fails once more than `cap` words have been produced.
    pub fn enumerate(&self, max_length: usize, cap: usize) -> Result<Filtration> {
        let mut strata = vec![vec![AmalgamWord::identity()]];
        let mut total = 1;
        for m in 1..=max_length {
            let mut next = Vec::new();
            for w in &strata[m - 1] {
                for x in 0..self.letters.len() {
                    let mut cand = Vec::with_capacity(m);
                    cand.push(x);
                    cand.extend_from_slice(&w.letters);
                    if self.reduce(&cand).len() != m {
                        continue;
                    }
                    // keep x only if no smaller letter also peels off x w
                    let smaller = (0..x).any(|y| {
                        let mut t = vec![self.inverses[y]];
                        t.extend_from_slice(&cand);
                        self.reduce(&t).len() + 1 == m
                    });
                    if smaller {
                        continue;
                    }
                    total += 1;
                    if total > cap {
                        return Err(Error::Explosion(cap));
                    }
                    next.push(AmalgamWord { letters: cand });
                }
            }
            next.sort();
            strata.push(next);
        }
        let counts = strata.iter().map(Vec::len).collect();
        Ok(Filtration { max_length, counts, strata })
    }

    /// `g[v1]^2 · h[v3]`, each letter named at its home vertex.
    pub fn format(&self, w: &AmalgamWord) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters
            .iter()
            .map(|&l| {
                let (v, x) = self.letters[l].home();
                let vert = &self.tree.vertices[v];
                let name = vert.group.name(x);
                match name.split_once('^') {
                    Some((base, exp)) if !name.contains(' ') => format!("{base}[{}]^{exp}", vert.id),
                    _ => format!("{name}[{}]", vert.id),
                }
            })
            .collect::<Vec<_>>()
            .join(" · ")
    }
}

/// Canonical words of length at most `max_length` with the default cap.
pub fn amalgam_enumerate(tree: &TreeOfGroups, max_length: usize) -> Result<Filtration> {
    Amalgam::new(tree)?.enumerate(max_length, DEFAULT_WORD_CAP)
}
