use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::padic::{FieldSpec, PAdic};

/// Largest residue field whose stars are enumerated.
pub const MAX_STAR_Q: u64 = 1 << 20;

/// A vertex of the tree: the class of the lattice spanned by the columns of
/// `[[pi^n, b], [0, 1]]`, equivalently the ball `{z : v(z - b) >= n}` of K.
///
/// `b` is stored exactly, reduced to its digits below `pi^n`.
#[derive(Clone)]
pub struct Vertex {
    level: i64,
    offset: PAdic,
    /// Valuation of the offset (`level` when it is zero) and its digits up to `level`.
    key: (i64, Vec<u64>),
}

/// Edge direction at a vertex, indexed by P^1 of the residue field: the
/// parent is `Infinity`, the child `b + t pi^n` is `Residue(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Residue(u64),
    Infinity,
}

impl PartialEq for Vertex {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.key == other.key
    }
}

impl Eq for Vertex {}

impl Hash for Vertex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.key.hash(state);
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by level, then valuation of the offset, then its digits.
impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.level, &self.key).cmp(&(other.level, &other.key))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Vertex {
    /// The ball of level `n` around `b`; `b` must be known modulo `pi^n`.
    pub fn new(level: i64, b: &PAdic) -> Result<Self> {
        let offset = b.truncate(level)?;
        let key = match offset.valuation()? {
            None => (level, Vec::new()),
            Some(v) => (v, offset.digits(v, level)?),
        };
        Ok(Vertex { level, offset, key })
    }

    /// The standard vertex `(0; 0)`, the class of O_K^2.
    pub fn standard(field: &FieldSpec) -> Self {
        Vertex { level: 0, offset: field.zero(), key: (0, Vec::new()) }
    }

    pub fn field(&self) -> &FieldSpec {
        self.offset.field()
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn offset(&self) -> &PAdic {
        &self.offset
    }

    /// Parses a label `(n; b)` with `b` a field literal.
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("vertex {s:?} is not of the form (n; b)")))?;
        let (n, b) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("vertex {s:?} is missing ';'")))?;
        let level: i64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad level in {s:?}")))?;
        let b = field.parse(b)?;
        Vertex::new(level, &b)
    }

    /// Canonical label `(n; b)`.
    pub fn label(&self) -> String {
        format!("({}; {})", self.level, self.offset.literal_mod(self.level))
    }

    /// The representing matrix `[[pi^n, b], [0, 1]]`.
    pub fn matrix(&self) -> Mat2 {
        let f = self.field();
        Mat2 { a: f.pi_pow(self.level), b: self.offset.clone(), c: f.zero(), d: f.one() }
    }

    /// Valuation of `b - b'`, `None` when the offsets coincide.
    fn offset_gap(&self, other: &Vertex) -> Option<i64> {
        (&self.offset - &other.offset).valuation().expect("offsets are exact")
    }

    /// The ball containing this one at level `k <= n`.
    pub fn ancestor(&self, k: i64) -> Vertex {
        debug_assert!(k <= self.level);
        if k == self.level {
            return self.clone();
        }
        Vertex::new(k, &self.offset).expect("exact offset truncates")
    }

    pub fn parent(&self) -> Vertex {
        self.ancestor(self.level - 1)
    }

    /// The child ball `B(b + t pi^n, n + 1)` for the residue index `t`.
    pub fn child(&self, t: u64) -> Vertex {
        let f = self.field();
        let b = &self.offset + &(&f.digit(t) * &f.pi_pow(self.level));
        Vertex::new(self.level + 1, &b).expect("exact offset truncates")
    }

    pub fn neighbor(&self, dir: Direction) -> Vertex {
        match dir {
            Direction::Infinity => self.parent(),
            Direction::Residue(t) => self.child(t),
        }
    }

    /// All `q + 1` neighbors, children first in residue order, then the parent.
    pub fn star(&self) -> Result<Vec<(Direction, Vertex)>> {
        let q = self.field().q();
        if q > MAX_STAR_Q {
            return Err(Error::ResidueFieldTooLarge(q));
        }
        let mut out: Vec<(Direction, Vertex)> =
            (0..q).map(|t| (Direction::Residue(t), self.child(t))).collect();
        out.push((Direction::Infinity, self.parent()));
        Ok(out)
    }

    /// Level of the smallest ball containing both.
    pub fn meet_level(&self, other: &Vertex) -> i64 {
        let m = self.level.min(other.level);
        match self.offset_gap(other) {
            None => m,
            Some(g) => m.min(g),
        }
    }

    pub fn distance(&self, other: &Vertex) -> u64 {
        (self.level + other.level - 2 * self.meet_level(other)) as u64
    }

    /// Whether `other` is this ball or lies inside it.
    pub fn contains(&self, other: &Vertex) -> bool {
        other.level >= self.level && self.meet_level(other) == self.level
    }

    /// Direction of the first edge on the geodesic toward `other` (`None` if equal).
    pub fn direction_to(&self, other: &Vertex) -> Option<Direction> {
        if self == other {
            return None;
        }
        if self.contains(other) {
            let d = other.offset.digits(self.level, self.level + 1).expect("exact offset");
            Some(Direction::Residue(d[0]))
        } else {
            Some(Direction::Infinity)
        }
    }

    /// The unique path from `self` to `other`, endpoints included.
    pub fn geodesic(&self, other: &Vertex) -> Vec<Vertex> {
        let m = self.meet_level(other);
        let mut path: Vec<Vertex> = (m..=self.level).rev().map(|k| self.ancestor(k)).collect();
        path.extend((m + 1..=other.level).map(|k| other.ancestor(k)));
        path
    }

    /// The vertex spanned by the columns of an invertible matrix.
    pub fn from_matrix(m: &Mat2) -> Result<Vertex> {
        if m.det().is_zero() {
            return Err(Error::InvalidInput("singular matrix has no lattice class".into()));
        }
        // The column whose bottom entry has the smallest valuation becomes (b, 1).
        let (top_d, bot_d, top_o, bot_o) = {
            let v0 = m.c.valuation_lower_bound();
            let v1 = m.d.valuation_lower_bound();
            if v0 < v1 {
                (&m.a, &m.c, &m.b, &m.d)
            } else {
                (&m.b, &m.d, &m.a, &m.c)
            }
        };
        if bot_d.is_zero() {
            if !bot_d.is_exact_zero() {
                return Err(Error::precision("bottom row of lattice basis indistinguishable from zero"));
            }
            return Err(Error::InvalidInput("singular matrix has no lattice class".into()));
        }
        let ratio = bot_o.try_div(bot_d)?;
        let t = top_o - &(&ratio * top_d);
        let t_scaled = t.try_div(bot_d)?;
        let level = t_scaled.valuation()?.ok_or_else(|| {
            Error::precision("lattice basis degenerated during column reduction")
        })?;
        let b = top_d.try_div(bot_d)?;
        Vertex::new(level, &b)
    }

    /// Image of this vertex under a matrix.
    pub fn act(&self, g: &Mat2) -> Result<Vertex> {
        Vertex::from_matrix(&g.mul(&self.matrix()))
    }
}
