use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest explicit group accepted.
pub const MAX_GROUP_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    Table,
}

/// A small finite group given by its Cayley table. Element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    kind: GroupKind,
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    /// Named generators as element indices.
    generators: Vec<(String, usize)>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        k => format!("{base}^{k}"),
    }
}

impl FiniteGroup {
    /// `Z_n` with generator `g`; element `k` is `g^k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::Group(format!("cyclic order {n} out of range 1..={MAX_GROUP_ORDER}")));
        }
        let names = (0..n)
            .map(|k| if k == 0 { "1".to_string() } else { power_name("g", k) })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let generators = if n == 1 { Vec::new() } else { vec![("g".to_string(), 1)] };
        Ok(Self::assemble(GroupKind::Cyclic(n), names, table, generators))
    }

    /// `D_n` of order `2n` with rotation `r` and reflection `s`; element
    /// `k + n j` is `r^k s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 2 || 2 * n > MAX_GROUP_ORDER {
            return Err(Error::Group(format!("dihedral parameter {n} out of range")));
        }
        let order = 2 * n;
        let names = (0..order)
            .map(|i| {
                let (k, j) = (i % n, i / n);
                match (power_name("r", k), j) {
                    (r, 0) if r.is_empty() => "1".to_string(),
                    (r, 0) => r,
                    (r, _) if r.is_empty() => "s".to_string(),
                    (r, _) => format!("{r} s"),
                }
            })
            .collect();
        let table = (0..order)
            .map(|x| {
                (0..order)
                    .map(|y| {
                        let (a, i) = (x % n, x / n);
                        let (b, j) = (y % n, y / n);
                        let rot = if i == 0 { (a + b) % n } else { (a + n - b) % n };
                        rot + n * ((i + j) % 2)
                    })
                    .collect()
            })
            .collect();
        let generators = vec![("r".to_string(), 1), ("s".to_string(), n)];
        Ok(Self::assemble(GroupKind::Dihedral(n), names, table, generators))
    }

    /// A group from an explicit table; the identity is located and moved to index 0.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>, generators: Vec<String>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::Group(format!("table group of order {n} out of range")));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Group("multiplication table has the wrong shape".into()));
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Group("table has no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Group(format!(
                            "table is not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
            if !(0..n).any(|b| table[a][b] == id) {
                return Err(Error::Group(format!("{} has no inverse", names[a])));
            }
        }
        // relabel so the identity is element 0
        let perm: Vec<usize> = std::iter::once(id).chain((0..n).filter(|&x| x != id)).collect();
        let mut pos = vec![0; n];
        for (i, &x) in perm.iter().enumerate() {
            pos[x] = i;
        }
        let names2: Vec<String> = perm.iter().map(|&x| names[x].clone()).collect();
        let table2 = perm
            .iter()
            .map(|&a| perm.iter().map(|&b| pos[table[a][b]]).collect())
            .collect();
        let gens = if generators.is_empty() {
            (1..n).map(|i| (names2[i].clone(), i)).collect()
        } else {
            generators
                .iter()
                .map(|g| {
                    names2
                        .iter()
                        .position(|x| x == g)
                        .map(|i| (g.clone(), i))
                        .ok_or_else(|| Error::Group(format!("unknown generator {g}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let g = Self::assemble(GroupKind::Table, names2, table2, gens);
        if g.generated(&g.generators.iter().map(|x| x.1).collect::<Vec<_>>()).len() != n {
            return Err(Error::Group("listed generators do not generate the table".into()));
        }
        Ok(g)
    }

    fn assemble(
        kind: GroupKind,
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Vec<(String, usize)>,
    ) -> Self {
        let n = names.len();
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).expect("inverse")).collect();
        FiniteGroup { kind, names, table, inverses, generators }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        let norm: String = name.split_whitespace().collect::<Vec<_>>().join(" ");
        self.names
            .iter()
            .position(|x| *x == norm)
            .ok_or_else(|| Error::Group(format!("no element named {name:?} in {}", self.describe())))
    }

    pub fn elements(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.element_order(a) == self.order())
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by a set of elements, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    /// A shortest word in the generators (indices into `generators()`) for every element.
    pub fn generator_words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.order()];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, (_, g)) in self.generators.iter().enumerate() {
                let y = self.mul(x, *g);
                if words[y].is_none() {
                    let mut w = words[x].clone().expect("visited");
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words.into_iter().map(|w| w.expect("generators generate")).collect()
    }

    pub fn describe(&self) -> String {
        match self.kind {
            GroupKind::Cyclic(n) => format!("Z_{n}"),
            GroupKind::Dihedral(n) => format!("D_{n}"),
            GroupKind::Table => format!("G({})", self.order()),
        }
    }
}

/// An injective homomorphism given by the images of the source generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    /// `map[x]` is the image of source element `x`.
    map: Vec<usize>,
}

impl Injection {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: &[usize]) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::Group(format!(
                "{} generator images given for {} with {} generators",
                images.len(),
                source.describe(),
                source.generators().len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&x| x >= target.order()) {
            return Err(Error::Group(format!("image index {bad} outside {}", target.describe())));
        }
        let map: Vec<usize> = source
            .generator_words()
            .iter()
            .map(|w| w.iter().fold(0, |acc, &gi| target.mul(acc, images[gi])))
            .collect();
        let n = source.order();
        for a in 0..n {
            for b in 0..n {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::Group(format!(
                        "generator images do not define a homomorphism {} -> {}",
                        source.describe(),
                        target.describe()
                    )));
                }
            }
        }
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::Group(format!(
                "map {} -> {} is not injective",
                source.describe(),
                target.describe()
            )));
        }
        Ok(Injection { map })
    }

    pub fn from_names(source: &FiniteGroup, target: &FiniteGroup, images: &[String]) -> Result<Self> {
        let idx = images.iter().map(|n| target.element(n)).collect::<Result<Vec<_>>>()?;
        Injection::new(source, target, &idx)
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Injection { map: (0..g.order()).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_relations() {
        let d = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d.order(), 6);
        let r = d.element("r").unwrap();
        let s = d.element("s").unwrap();
        // s r s = r^-1
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
        assert!(!d.is_abelian());
        assert_eq!(d.name(d.mul(r, s)), "r s");
    }

    #[test]
    fn injections() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(Injection::new(&z2, &z6, &[3]).is_ok());
        assert!(Injection::new(&z4, &z2, &[1]).is_err());
        assert!(Injection::new(&z2, &z6, &[1]).is_err());
    }

    #[test]
    fn table_groups() {
        // Klein four group with shuffled identity
        let names: Vec<String> = ["a", "e", "b", "c"].iter().map(|s| s.to_string()).collect();
        let t = vec![vec![1, 0, 3, 2], vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![2, 3, 0, 1]];
        let g = FiniteGroup::from_table(names, t, vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(g.name(0), "e");
        assert!(!g.is_cyclic() && g.is_abelian());
        let bad = vec![vec![0, 1], vec![0, 1]];
        assert!(FiniteGroup::from_table(vec!["x".into(), "y".into()], bad, vec![]).is_err());
    }
}
