use std::fmt;

use super::vertex::{Direction, Vertex};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::padic::{FieldSpec, PAdic};

/// A K-rational point of P^1, i.e. an end of the tree.
///
/// Stored as `(z : 1)` with `v(z) >= 0` or as `(1 : w)` with `v(w) > 0`;
/// the affine coordinate is `x0 / x1`, so `(1 : 0)` is infinity.
#[derive(Clone)]
pub struct ProjPoint {
    x0: PAdic,
    x1: PAdic,
}

/// How an end sits relative to the affine chart.
enum Chart {
    Finite(PAdic),
    Infinity,
    /// `(1 : w)` with `w` zero only to absolute precision `a`.
    NearInfinity(i64),
}

impl ProjPoint {
    /// Canonicalizes `(x0 : x1)`: the coordinate of smaller valuation (`x0`
    /// on ties) is scaled to 1.
    pub fn new(x0: PAdic, x1: PAdic) -> Result<Self> {
        if x0.field() != x1.field() {
            return Err(Error::FieldMismatch);
        }
        if x0.is_zero() && x1.is_zero() {
            return Err(Error::precision("both homogeneous coordinates are zero"));
        }
        let one = x0.field().one();
        if x0.valuation_lower_bound() <= x1.valuation_lower_bound() {
            if x0.is_zero() {
                return Err(Error::precision("both homogeneous coordinates are indistinguishable from zero"));
            }
            let w = x1.try_div(&x0)?;
            if w.is_exact_zero() || w.valuation_lower_bound() > 0 {
                return Ok(ProjPoint { x0: one, x1: w });
            }
            // v(w) == 0: the point is finite with unit affine coordinate
            Ok(ProjPoint { x0: x0.try_div(&x1)?, x1: one })
        } else {
            Ok(ProjPoint { x0: x0.try_div(&x1)?, x1: one })
        }
    }

    pub fn finite(z: PAdic) -> Self {
        let one = z.field().one();
        ProjPoint::new(z, one).expect("(z : 1) is a valid point")
    }

    pub fn infinity(field: &FieldSpec) -> Self {
        ProjPoint { x0: field.one(), x1: field.zero() }
    }

    pub fn field(&self) -> &FieldSpec {
        self.x0.field()
    }

    pub fn coords(&self) -> (&PAdic, &PAdic) {
        (&self.x0, &self.x1)
    }

    pub fn is_infinity(&self) -> bool {
        self.x1.is_exact_zero()
    }

    fn chart(&self) -> Result<Chart> {
        if self.x1.is_exact_zero() {
            return Ok(Chart::Infinity);
        }
        if self.x1.is_zero() {
            return Ok(Chart::NearInfinity(self.x1.valuation_lower_bound()));
        }
        Ok(Chart::Finite(self.x0.try_div(&self.x1)?))
    }

    /// The affine coordinate, `None` for infinity.
    pub fn affine(&self) -> Result<Option<PAdic>> {
        match self.chart()? {
            Chart::Infinity => Ok(None),
            Chart::NearInfinity(a) => Err(Error::precision(format!(
                "point is within O(pi^{a}) of infinity"
            ))),
            Chart::Finite(z) => Ok(Some(z)),
        }
    }

    /// Equality at the available precision.
    pub fn same(&self, other: &ProjPoint) -> bool {
        // cross-ratio test x0 y1 - x1 y0 = 0
        (&(&self.x0 * &other.x1) - &(&self.x1 * &other.x0)).is_zero()
    }

    /// Mobius image `(a x0 + b x1 : c x0 + d x1)`.
    pub fn apply(&self, g: &Mat2) -> Result<ProjPoint> {
        ProjPoint::new(
            &(&g.a * &self.x0) + &(&g.b * &self.x1),
            &(&g.c * &self.x0) + &(&g.d * &self.x1),
        )
    }

    /// Whether the end lies in the ball of `v`.
    pub fn in_ball(&self, v: &Vertex) -> Result<bool> {
        match self.chart()? {
            Chart::Infinity => Ok(false),
            Chart::NearInfinity(a) => {
                let floor = v.level().min(v.offset().valuation_lower_bound());
                if floor > -a {
                    Ok(false)
                } else {
                    Err(Error::precision(format!(
                        "cannot place a point within O(pi^{a}) of infinity relative to {v}"
                    )))
                }
            }
            Chart::Finite(z) => {
                let diff = &z - v.offset();
                if diff.is_exact_zero() {
                    return Ok(true);
                }
                if diff.is_zero() {
                    let a = diff.valuation_lower_bound();
                    if a >= v.level() {
                        return Ok(true);
                    }
                    return Err(Error::precision(format!(
                        "end known only to O(pi^{a}), needed to level {}",
                        v.level()
                    )));
                }
                Ok(diff.valuation()?.expect("nonzero") >= v.level())
            }
        }
    }

    /// Direction at `v` of the half-line toward this end.
    pub fn direction_at(&self, v: &Vertex) -> Result<Direction> {
        if !self.in_ball(v)? {
            return Ok(Direction::Infinity);
        }
        let z = self.affine()?.expect("finite inside a ball");
        let d = z.digits(v.level(), v.level() + 1)?;
        Ok(Direction::Residue(d[0]))
    }

    /// Number of edges from `v` up to the top of the ball chain containing
    /// this end; `None` for infinity (the half-line climbs forever).
    fn climb(&self, v: &Vertex) -> Result<Option<i64>> {
        if self.in_ball(v)? {
            return Ok(Some(0));
        }
        match self.affine()? {
            None => Ok(None),
            Some(z) => {
                let gap = (&z - v.offset()).valuation()?.expect("outside the ball");
                Ok(Some(v.level() - gap))
            }
        }
    }

    /// The vertex `k` steps from `v` along the half-line toward this end.
    pub fn walk(&self, v: &Vertex, k: u64) -> Result<Vertex> {
        let k = k as i64;
        let up = self.climb(v)?.unwrap_or(i64::MAX);
        if k <= up {
            return Ok(v.ancestor(v.level() - k));
        }
        let top = v.level() - up;
        let z = self.affine()?.expect("finite end below the top");
        Vertex::new(top + (k - up), &z)
    }

    /// The `steps` vertices following `v` on the half-line toward this end.
    pub fn halfline(&self, v: &Vertex, steps: u64) -> Result<Vec<Vertex>> {
        (1..=steps).map(|k| self.walk(v, k)).collect()
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label(8))
    }
}

impl ProjPoint {
    /// `inf` or a field literal.
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" => Ok(ProjPoint::infinity(field)),
            t => Ok(ProjPoint::finite(field.parse(t)?)),
        }
    }

    /// Inverse of [`ProjPoint::parse`] at full stored precision.
    pub fn to_literal(&self) -> Result<String> {
        Ok(match self.affine()? {
            None => "inf".to_string(),
            Some(z) => z.to_literal(),
        })
    }

    /// Short label: the affine coordinate modulo `pi^n`, or `inf`.
    pub fn label(&self, n: i64) -> String {
        if self.is_infinity() {
            return "inf".into();
        }
        if self.x1.is_zero() {
            return format!("1/O(pi^{})", self.x1.valuation_lower_bound());
        }
        if self.x1.valuation_lower_bound() > 0 {
            let zi = self.x1.literal_mod(n + 2 * self.x1.valuation_lower_bound());
            return format!("1/({zi})");
        }
        self.x0.literal_mod(n)
    }
}

/// Gromov product `(z|w)_v`: the common length of the half-lines from `v`
/// toward `z` and `w`, which is also the distance from `v` to `]z, w[`.
pub fn gromov_product(v: &Vertex, z: &ProjPoint, w: &ProjPoint) -> Result<u64> {
    if z.same(w) {
        return Err(Error::InvalidInput("apartment needs two distinct ends".into()));
    }
    let uz = z.climb(v)?;
    let uw = w.climb(v)?;
    Ok(match (uz, uw) {
        (None, Some(u)) | (Some(u), None) => u as u64,
        (None, None) => unreachable!("distinct ends"),
        (Some(a), Some(b)) if a != b => a.min(b) as u64,
        (Some(u), Some(_)) => {
            let top = v.level() - u;
            let zz = z.affine()?.expect("finite");
            let ww = w.affine()?.expect("finite");
            let split = (&zz - &ww).valuation()?.expect("distinct");
            (u + (split - top)) as u64
        }
    })
}

/// Nearest vertex of `]z, w[` to `v`.
pub fn project_to_apartment(v: &Vertex, z: &ProjPoint, w: &ProjPoint) -> Result<Vertex> {
    let k = gromov_product(v, z, w)?;
    z.walk(v, k)
}

/// The median of three distinct ends: the unique vertex on all three apartments.
pub fn median(z1: &ProjPoint, z2: &ProjPoint, z3: &ProjPoint) -> Result<Vertex> {
    let origin = Vertex::standard(z1.field());
    let p = project_to_apartment(&origin, z1, z2)?;
    // walk from p toward z3 until leaving ]z1, z2[
    let mut cur = p;
    loop {
        let next = z3.walk(&cur, 1)?;
        if gromov_product(&next, z1, z2)? > 0 {
            return Ok(cur);
        }
        cur = next;
    }
}

/// The window `lo..=hi` of `]z, w[`, indexed by signed distance from the
/// apartment vertex nearest the standard vertex (negative toward `z`).
pub fn apartment(z: &ProjPoint, w: &ProjPoint, lo: i64, hi: i64) -> Result<Vec<Vertex>> {
    let origin = Vertex::standard(z.field());
    let center = project_to_apartment(&origin, z, w)?;
    (lo..=hi)
        .map(|i| {
            if i < 0 {
                z.walk(&center, (-i) as u64)
            } else {
                w.walk(&center, i as u64)
            }
        })
        .collect()
}

/// Whether `v` lies on the apartment `]z, w[`.
pub fn on_apartment(v: &Vertex, z: &ProjPoint, w: &ProjPoint) -> Result<bool> {
    Ok(gromov_product(v, z, w)? == 0)
}

/// Distance between the apartments `]z1, w1[` and `]z2, w2[` (0 when they meet).
pub fn apartment_distance(
    a: (&ProjPoint, &ProjPoint),
    b: (&ProjPoint, &ProjPoint),
) -> Result<u64> {
    let (z1, w1) = a;
    let (z2, w2) = b;
    if z1.same(z2) || z1.same(w2) || w1.same(z2) || w1.same(w2) {
        return Ok(0);
    }
    let pz = median(z1, w1, z2)?;
    let pw = median(z1, w1, w2)?;
    if pz != pw {
        return Ok(0);
    }
    gromov_product(&pz, z2, w2)
}
