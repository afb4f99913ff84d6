//! Elements of PGL(2, K): canonical scaling, the parabolic/elliptic/hyperbolic
//! trichotomy, fixed points, mirrors and fixed-vertex loci.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::bt_tree::{self, Direction, ProjPoint, Vertex};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::padic::{FieldSpec, PAdic, SquareRoot};

/// A projective class of invertible matrices, scaled so that the first entry
/// (reading order) of minimal valuation is 1.
#[derive(Clone)]
pub struct Pgl2 {
    m: Mat2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum ElementClass {
    Identity,
    /// Single fixed point; the discriminant is exactly zero.
    Parabolic,
    /// Eigenvalues of equal valuation (half the valuation of the determinant).
    Elliptic { eigenvalue_valuation2: i64 },
    /// Eigenvalues of valuations `low < high`.
    Hyperbolic { low: i64, high: i64 },
}

impl ElementClass {
    pub fn name(&self) -> &'static str {
        match self {
            ElementClass::Identity => "identity",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Elliptic { .. } => "elliptic",
            ElementClass::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Finite(u64),
    Infinite,
    ExceedsBound,
}

/// The apartment between the two fixed points of an elliptic element.
#[derive(Debug, Clone)]
pub struct Mirror {
    pub owner: Pgl2,
    pub ends: (ProjPoint, ProjPoint),
}

/// Fixed points of a hyperbolic element and its translation length.
#[derive(Debug, Clone)]
pub struct Axis {
    pub attracting: ProjPoint,
    pub repelling: ProjPoint,
    pub translation: u64,
}

#[derive(Debug, Clone)]
pub struct CommutatorVerdict {
    pub shared_fixed_points: usize,
    /// Exactly one common fixed point: the commutator is parabolic.
    pub obstruction: bool,
    pub commutator: Pgl2,
    pub commutator_class: ElementClass,
}

/// Default search bound for element orders.
pub const ORDER_BOUND: u64 = 4096;

fn entries_canonical(m: &Mat2) -> Result<Mat2> {
    let entries = m.entries();
    let mut best: Option<&PAdic> = None;
    for x in entries {
        if x.is_exact_zero() {
            continue;
        }
        match best {
            None => best = Some(x),
            Some(b) if x.valuation_lower_bound() < b.valuation_lower_bound() => best = Some(x),
            _ => {}
        }
    }
    let pivot = best.ok_or_else(|| Error::InvalidInput("zero matrix".into()))?;
    if pivot.is_zero() {
        return Err(Error::precision("every matrix entry is indistinguishable from zero"));
    }
    m.try_div_scalar(pivot)
}

impl Pgl2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.det();
        if det.is_exact_zero() {
            return Err(Error::InvalidInput("singular matrix".into()));
        }
        if det.is_zero() {
            return Err(Error::precision("determinant indistinguishable from zero"));
        }
        Ok(Pgl2 { m: entries_canonical(&m)? })
    }

    pub fn parse(field: &FieldSpec, s: &str) -> Result<Self> {
        Pgl2::new(Mat2::parse(field, s)?)
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Pgl2 { m: Mat2::identity(field) }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn field(&self) -> &FieldSpec {
        self.m.field()
    }

    pub fn mul(&self, o: &Pgl2) -> Pgl2 {
        Pgl2::new(self.m.mul(&o.m)).expect("product of invertible classes")
    }

    pub fn inverse(&self) -> Pgl2 {
        Pgl2::new(self.m.adjugate()).expect("adjugate of an invertible matrix")
    }

    pub fn pow(&self, n: i64) -> Pgl2 {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut result = Pgl2::identity(self.field());
        let mut b = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    /// `h g h^-1`.
    pub fn conjugate_by(&self, h: &Pgl2) -> Pgl2 {
        h.mul(self).mul(&h.inverse())
    }

    /// Projective equality at the available precision.
    pub fn same(&self, o: &Pgl2) -> bool {
        self.m.eq_at_precision(&o.m)
    }

    pub fn is_identity(&self) -> bool {
        self.m.b.is_zero() && self.m.c.is_zero() && (&self.m.a - &self.m.d).is_zero()
    }

    pub fn to_literal(&self) -> String {
        self.m.to_literal()
    }

    /// Entries printed modulo `pi^n`; a stable short key for reports.
    pub fn short(&self, n: i64) -> String {
        self.m.to_literal_mod(n)
    }

    pub fn mobius(&self, n: i64) -> String {
        self.m.mobius(n)
    }

    pub fn act(&self, v: &Vertex) -> Result<Vertex> {
        v.act(&self.m)
    }

    pub fn apply(&self, z: &ProjPoint) -> Result<ProjPoint> {
        z.apply(&self.m)
    }

    pub fn discriminant(&self) -> PAdic {
        let t = self.m.trace();
        &(&t * &t) - &(&self.m.det() * &self.field().from_int(4))
    }

    /// Whether the element fixes some vertex of the tree. Unlike
    /// [`Pgl2::classify`] this never needs the discriminant, so unipotent
    /// elements are handled at any precision.
    pub fn fixes_a_vertex(&self) -> Result<bool> {
        if self.is_identity() {
            return Ok(true);
        }
        let vdet = self.m.det().valuation()?.expect("invertible");
        let tr = self.m.trace();
        let tr_low = tr.valuation_lower_bound();
        if !tr.is_zero() && 2 * tr_low < vdet {
            return Ok(false);
        }
        if tr.is_zero() && !tr.is_exact_zero() && 2 * tr_low < vdet {
            return Err(Error::precision("trace too imprecise to read the Newton polygon"));
        }
        // odd determinant valuation without two slopes flips an edge
        Ok(vdet % 2 == 0)
    }

    pub fn classify(&self) -> Result<ElementClass> {
        if self.is_identity() {
            return Ok(ElementClass::Identity);
        }
        let det = self.m.det();
        let vdet = det.valuation()?.expect("invertible");
        let tr = self.m.trace();
        // Newton polygon of x^2 - tr x + det
        let tr_low = tr.valuation_lower_bound();
        if !tr.is_zero() && 2 * tr_low < vdet {
            return Ok(ElementClass::Hyperbolic { low: tr_low, high: vdet - tr_low });
        }
        if tr.is_zero() && !tr.is_exact_zero() && 2 * tr_low < vdet {
            return Err(Error::precision("trace too imprecise to read the Newton polygon"));
        }
        let disc = self.discriminant();
        if disc.is_exact_zero() {
            return Ok(ElementClass::Parabolic);
        }
        if disc.is_zero() {
            return Err(Error::precision(
                "discriminant indistinguishable from zero; cannot separate parabolic from elliptic",
            ));
        }
        Ok(ElementClass::Elliptic { eigenvalue_valuation2: vdet })
    }

    fn sqrt_disc(&self) -> Result<PAdic> {
        match self.discriminant().sqrt()? {
            SquareRoot::Root(r) => Ok(r),
            SquareRoot::NonSquare(w) => Err(Error::NotRational(format!(
                "discriminant of {} is not a square in K ({w:?})",
                self.short(6)
            ))),
        }
    }

    /// Eigenvalues `(tr + s)/2, (tr - s)/2` for the canonical root `s` of the discriminant.
    pub fn eigenvalues(&self) -> Result<(PAdic, PAdic)> {
        let s = self.sqrt_disc()?;
        let tr = self.m.trace();
        let two = self.field().from_int(2);
        Ok(((&tr + &s).try_div(&two)?, (&tr - &s).try_div(&two)?))
    }

    /// The fixed points in P^1(K): one for parabolic elements, two otherwise.
    pub fn fixed_points(&self) -> Result<Vec<ProjPoint>> {
        let f = self.field().clone();
        let Mat2 { a, b, c, d } = &self.m;
        if self.is_identity() {
            return Err(Error::InvalidInput("the identity fixes every point".into()));
        }
        let amd = a - d;
        if c.is_exact_zero() {
            let inf = ProjPoint::infinity(&f);
            if amd.is_exact_zero() {
                return Ok(vec![inf]);
            }
            // a z + b = d z
            return Ok(vec![ProjPoint::new(b.neg(), amd)?, inf]);
        }
        if b.is_exact_zero() {
            return Ok(vec![ProjPoint::finite(f.zero()), ProjPoint::new(amd, c.clone())?]);
        }
        let disc = self.discriminant();
        let two_c = &f.from_int(2) * c;
        if disc.is_exact_zero() {
            return Ok(vec![ProjPoint::new(amd, two_c)?]);
        }
        let s = self.sqrt_disc()?;
        Ok(vec![ProjPoint::new(&amd + &s, two_c.clone())?, ProjPoint::new(&amd - &s, two_c)?])
    }

    pub fn mirror(&self) -> Result<Mirror> {
        match self.classify()? {
            ElementClass::Elliptic { .. } => {}
            other => {
                return Err(Error::InvalidInput(format!(
                    "mirror needs an elliptic element, got {}",
                    other.name()
                )))
            }
        }
        let fp = self.fixed_points()?;
        Ok(Mirror { owner: self.clone(), ends: (fp[0].clone(), fp[1].clone()) })
    }

    /// Least `n <= bound` with `g^n` scalar.
    pub fn order(&self, bound: u64) -> Result<Order> {
        match self.classify()? {
            ElementClass::Identity => return Ok(Order::Finite(1)),
            ElementClass::Parabolic | ElementClass::Hyperbolic { .. } => return Ok(Order::Infinite),
            ElementClass::Elliptic { .. } => {}
        }
        match self.eigenvalues() {
            Ok((l1, l2)) => {
                let ratio = l1.try_div(&l2)?;
                Ok(root_of_unity_order(&ratio, bound)?.map_or(Order::ExceedsBound, Order::Finite))
            }
            Err(Error::NotRational(_)) => {
                let mut acc = self.clone();
                for n in 1..=bound {
                    if acc.is_identity() {
                        return Ok(Order::Finite(n));
                    }
                    acc = acc.mul(self);
                }
                Ok(Order::ExceedsBound)
            }
            Err(e) => Err(e),
        }
    }

    /// Radius `s` of the fixed-vertex set around the mirror of a finite-order
    /// elliptic element: 0 for orders prime to p, `e / phi(p^r)` for order `p^r`.
    pub fn fixed_radius(&self) -> Result<u64> {
        let n = match self.order(ORDER_BOUND)? {
            Order::Finite(n) => n,
            _ => return Err(Error::InvalidInput("fixed radius needs a finite-order element".into())),
        };
        if n == 1 {
            return Err(Error::InvalidInput("the identity has no mirror".into()));
        }
        let p = self.field().p();
        let mut r = 0u32;
        let mut rest = n;
        while rest % p == 0 {
            rest /= p;
            r += 1;
        }
        if r == 0 || rest > 1 {
            // a nontrivial prime-to-p power fixes only the mirror
            return Ok(0);
        }
        let phi = p.pow(r - 1) * (p - 1);
        let e = self.field().e() as u64;
        if !e.is_multiple_of(phi) {
            return Err(Error::NotRational(format!(
                "K does not contain a primitive {n}-th root of unity (e/phi = {e}/{phi}); enlarge K"
            )));
        }
        Ok(e / phi)
    }

    pub fn fixes(&self, v: &Vertex) -> Result<bool> {
        Ok(self.act(v)? == *v)
    }

    /// Orbits of `<g>` on the star of a mirror vertex, each a sorted list of directions.
    pub fn neighbor_orbits(&self, v0: &Vertex) -> Result<Vec<Vec<Direction>>> {
        let n = match self.order(ORDER_BOUND)? {
            Order::Finite(n) => n,
            _ => return Err(Error::InvalidInput("element of infinite order".into())),
        };
        if n > 1 {
            if n % self.field().p() == 0 {
                return Err(Error::InvalidInput(format!("order {n} is divisible by p")));
            }
            let mirror = self.mirror()?;
            if !bt_tree::on_apartment(v0, &mirror.ends.0, &mirror.ends.1)? {
                return Err(Error::InvalidInput(format!("{v0} is not on the mirror")));
            }
        }
        let star = v0.star()?;
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for (dir, w) in &star {
            if seen.contains(dir) {
                continue;
            }
            let mut orbit = vec![*dir];
            seen.insert(*dir);
            let mut cur = self.act(w)?;
            while cur != *w {
                let d = v0.direction_to(&cur).expect("neighbor");
                seen.insert(d);
                orbit.push(d);
                cur = self.act(&cur)?;
            }
            orbit.sort();
            orbits.push(orbit);
        }
        orbits.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(orbits)
    }

    pub fn hyperbolic_axis(&self) -> Result<Axis> {
        let (low, high) = match self.classify()? {
            ElementClass::Hyperbolic { low, high } => (low, high),
            other => {
                return Err(Error::InvalidInput(format!(
                    "axis needs a hyperbolic element, got {}",
                    other.name()
                )))
            }
        };
        let (l1, l2) = self.eigenvalues()?;
        let (big, small) = if l1.valuation()? == Some(low) { (l1, l2) } else { (l2, l1) };
        Ok(Axis {
            attracting: self.eigenvector(&big)?,
            repelling: self.eigenvector(&small)?,
            translation: (high - low) as u64,
        })
    }

    fn eigenvector(&self, lambda: &PAdic) -> Result<ProjPoint> {
        let Mat2 { a, b, c, d } = &self.m;
        let v1 = (b.clone(), lambda - a);
        let v2 = (lambda - d, c.clone());
        let score = |v: &(PAdic, PAdic)| v.0.valuation_lower_bound().min(v.1.valuation_lower_bound());
        let pick = if (v1.0.is_zero() && v1.1.is_zero()) || score(&v2) < score(&v1) { v2 } else { v1 };
        ProjPoint::new(pick.0, pick.1)
    }

    /// Whether `self` and `other` share exactly one fixed point, with the
    /// commutator as certificate.
    pub fn commutator_check(&self, other: &Pgl2) -> Result<CommutatorVerdict> {
        let fa = self.fixed_points()?;
        let fb = other.fixed_points()?;
        let shared = fa.iter().filter(|z| fb.iter().any(|w| w.same(z))).count();
        let commutator = self.mul(other).mul(&self.inverse()).mul(&other.inverse());
        let commutator_class = commutator.classify()?;
        Ok(CommutatorVerdict {
            shared_fixed_points: shared,
            obstruction: shared == 1 && fa.len() == 2 && fb.len() == 2,
            commutator,
            commutator_class,
        })
    }
}

/// Multiplicative order of a unit, if it is a root of unity of order `<= bound`.
fn root_of_unity_order(x: &PAdic, bound: u64) -> Result<Option<u64>> {
    let field = x.field();
    if x.valuation()? != Some(0) {
        return Ok(None);
    }
    let one = field.one();
    let k = field.residue_field();
    let base = k.order(x.leading_digit().expect("unit"));
    if base > bound {
        return Ok(None);
    }
    let mut n = base;
    let mut y = x.pow(base as i64)?;
    loop {
        if y.eq_at_precision(&one) {
            return Ok(Some(n));
        }
        n *= field.p();
        if n > bound {
            return Ok(None);
        }
        y = y.pow(field.p() as i64)?;
    }
}

impl fmt::Debug for Pgl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pgl2[{}]", self.short(6))
    }
}

/// Whether `g` occurs in `set` up to projective equality.
pub fn contains_element(set: &[Pgl2], g: &Pgl2) -> bool {
    set.iter().any(|h| h.same(g))
}

/// The finite group generated by `gens`, identity first, or `None` once it
/// exceeds `cap` elements.
pub fn generate_group(gens: &[Pgl2], field: &FieldSpec, cap: usize) -> Option<Vec<Pgl2>> {
    let mut elems = vec![Pgl2::identity(field)];
    let mut frontier = 0;
    while frontier < elems.len() {
        let x = elems[frontier].clone();
        frontier += 1;
        for g in gens {
            let y = x.mul(g);
            if !contains_element(&elems, &y) {
                if elems.len() == cap {
                    return None;
                }
                elems.push(y);
            }
        }
    }
    Some(elems)
}

/// Equality of two finite sets of classes.
pub fn same_set(a: &[Pgl2], b: &[Pgl2]) -> bool {
    a.len() == b.len() && a.iter().all(|g| contains_element(b, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bt_tree::apartment_distance;

    fn f4() -> FieldSpec {
        FieldSpec::new(2, 2, 1, 48).unwrap()
    }

    fn pt(k: &FieldSpec, s: &str) -> ProjPoint {
        ProjPoint::finite(k.parse(s).unwrap())
    }

    #[test]
    fn trichotomy() {
        let k = f4();
        let g = Pgl2::parse(&k, "zeta(3), 0; 0, 1").unwrap();
        assert_eq!(g.classify().unwrap().name(), "elliptic");
        let u = Pgl2::parse(&k, "1, 1; 0, 1").unwrap();
        assert_eq!(u.classify().unwrap(), ElementClass::Parabolic);
        let h = Pgl2::parse(&k, "pi, 0; 0, 1").unwrap();
        assert_eq!(h.classify().unwrap(), ElementClass::Hyperbolic { low: 0, high: 1 });
        assert_eq!(Pgl2::identity(&k).classify().unwrap(), ElementClass::Identity);
    }

    #[test]
    fn fixed_points_and_mirrors() {
        let k = f4();
        let g = Pgl2::parse(&k, "zeta(3), 0; 0, 1").unwrap();
        let fp = g.fixed_points().unwrap();
        assert!(fp[0].same(&pt(&k, "0")) && fp[1].is_infinity());
        let chi = Pgl2::parse(&k, "0, 1; 1, 0").unwrap();
        let fc = chi.fixed_points().unwrap();
        assert!(fc.iter().any(|z| z.same(&pt(&k, "1"))));
        assert!(fc.iter().any(|z| z.same(&pt(&k, "-1"))));
        let mg = g.mirror().unwrap();
        let mc = chi.mirror().unwrap();
        assert_eq!(apartment_distance((&mg.ends.0, &mg.ends.1), (&mc.ends.0, &mc.ends.1)).unwrap(), 1);

        let k3 = FieldSpec::new(3, 1, 1, 48).unwrap();
        let gamma = Pgl2::parse(&k3, "-1*pi, 0; -2, pi").unwrap();
        let fg = gamma.fixed_points().unwrap();
        assert!(fg.iter().any(|z| z.same(&pt(&k3, "0"))));
        assert!(fg.iter().any(|z| z.same(&pt(&k3, "pi"))));
    }

    #[test]
    fn orders() {
        let k = f4();
        assert_eq!(Pgl2::identity(&k).order(10).unwrap(), Order::Finite(1));
        assert_eq!(Pgl2::parse(&k, "0, 1; 1, 0").unwrap().order(10).unwrap(), Order::Finite(2));
        let k5 = FieldSpec::new(5, 1, 1, 48).unwrap();
        let delta = Pgl2::parse(&k5, "zeta(4), -(zeta(4) - 1)/pi; 0, 1").unwrap();
        assert_eq!(delta.order(100).unwrap(), Order::Finite(4));
        assert_eq!(Pgl2::parse(&k, "pi, 0; 0, 1").unwrap().order(10).unwrap(), Order::Infinite);
        // a unit ratio of infinite order
        let k7 = FieldSpec::new(7, 1, 1, 32).unwrap();
        let g = Pgl2::parse(&k7, "1 + 7, 0; 0, 1").unwrap();
        assert_eq!(g.order(50).unwrap(), Order::ExceedsBound);
    }

    #[test]
    fn fixed_radius_values() {
        let k = f4();
        assert_eq!(Pgl2::parse(&k, "zeta(3), 0; 0, 1").unwrap().fixed_radius().unwrap(), 0);
        let q2 = FieldSpec::new(2, 1, 1, 48).unwrap();
        let chi = Pgl2::parse(&q2, "0, 1; 1, 0").unwrap();
        assert_eq!(chi.fixed_radius().unwrap(), 1);
        let q2e2 = FieldSpec::new(2, 1, 2, 48).unwrap();
        let chi2 = Pgl2::parse(&q2e2, "0, 1; 1, 0").unwrap();
        assert_eq!(chi2.fixed_radius().unwrap(), 2);
        assert_eq!(q2.from_int(-2).valuation().unwrap(), Some(1));
        assert_eq!(q2e2.from_int(-2).valuation().unwrap(), Some(2));
    }

    #[test]
    fn neighbor_orbits() {
        let k = f4();
        let g = Pgl2::parse(&k, "zeta(3), 0; 0, 1").unwrap();
        let o = Vertex::standard(&k);
        let sizes: Vec<usize> = g.neighbor_orbits(&o).unwrap().iter().map(Vec::len).collect();
        assert_eq!(sizes, [1, 1, 3]);
        let sizes: Vec<usize> =
            Pgl2::identity(&k).neighbor_orbits(&o).unwrap().iter().map(Vec::len).collect();
        assert_eq!(sizes, [1; 5]);
        let k3 = FieldSpec::new(3, 1, 1, 32).unwrap();
        let m = Pgl2::parse(&k3, "-1, 0; 0, 1").unwrap();
        let sizes: Vec<usize> =
            m.neighbor_orbits(&Vertex::standard(&k3)).unwrap().iter().map(Vec::len).collect();
        assert_eq!(sizes, [1, 1, 2]);
    }

    #[test]
    fn axes() {
        let k = FieldSpec::new(3, 1, 1, 32).unwrap();
        let g = Pgl2::parse(&k, "pi, 0; 0, 1").unwrap();
        let ax = g.hyperbolic_axis().unwrap();
        assert!(ax.attracting.same(&pt(&k, "0")) && ax.repelling.is_infinity());
        assert_eq!(ax.translation, 1);
        let h = Pgl2::parse(&k, "1, 1; 1, 2").unwrap();
        let c = g.conjugate_by(&h);
        let cax = c.hyperbolic_axis().unwrap();
        assert!(cax.attracting.same(&h.apply(&pt(&k, "0")).unwrap()));
        assert!(cax.repelling.same(&h.apply(&ProjPoint::infinity(&k)).unwrap()));
        let v = bt_tree::project_to_apartment(&Vertex::standard(&k), &cax.attracting, &cax.repelling).unwrap();
        assert_eq!(v.distance(&c.act(&v).unwrap()), 1);
    }

    #[test]
    fn commutators() {
        let k = FieldSpec::new(3, 1, 1, 32).unwrap();
        let theta = Pgl2::new(Mat2::from_ints(&k, [[9, 0], [0, 1]])).unwrap();
        let chi = Pgl2::new(Mat2::from_ints(&k, [[9, 6], [0, 1]])).unwrap();
        let v = theta.commutator_check(&chi).unwrap();
        assert!(v.obstruction);
        assert_eq!(v.commutator_class, ElementClass::Parabolic);
        let d2 = Pgl2::new(Mat2::from_ints(&k, [[4, 0], [0, 1]])).unwrap();
        assert!(!theta.commutator_check(&d2).unwrap().obstruction);
    }
}
