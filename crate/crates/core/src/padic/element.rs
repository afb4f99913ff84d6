use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::FieldSpec;
use crate::error::{Error, Result};

/// An element of K stored as `pi^v * u` with `u` a unit known modulo
/// `pi^rel`.
///
/// Zero comes in two flavours: the exact zero, and "zero to absolute
/// precision a" produced when every known digit cancels. Elements built from
/// integers and `pi` (and sums, products of those) are tracked as exact while
/// their coefficients stay small, which lets `1 - 1` produce the exact zero.
#[derive(Clone)]
pub struct PAdic {
    pub(crate) field: FieldSpec,
    pub(crate) repr: Repr,
}

#[derive(Clone)]
pub(crate) enum Repr {
    Zero { abs: Option<i64> },
    Unit { v: i64, u: Vec<BigInt>, rel: u32, exact: bool },
}

const INF_REL: i64 = i64::MAX / 4;

impl FieldSpec {
    pub fn zero(&self) -> PAdic {
        PAdic { field: self.clone(), repr: Repr::Zero { abs: None } }
    }

    /// Zero known only modulo `pi^abs`.
    pub fn zero_to(&self, abs: i64) -> PAdic {
        PAdic { field: self.clone(), repr: Repr::Zero { abs: Some(abs) } }
    }

    pub fn one(&self) -> PAdic {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> PAdic {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> PAdic {
        let mut raw = self.0.raw_zero();
        raw[0] = n.clone();
        PAdic::normalize(self, raw, 0, None, true)
    }

    /// The uniformizer pi, with pi^e = p.
    pub fn pi(&self) -> PAdic {
        self.pi_pow(1)
    }

    pub fn pi_pow(&self, k: i64) -> PAdic {
        PAdic {
            field: self.clone(),
            repr: Repr::Unit { v: k, u: self.0.raw_one(), rel: self.precision(), exact: true },
        }
    }

    /// The generator x of the unramified part (a root of the defining polynomial).
    pub fn unramified_generator(&self) -> PAdic {
        let mut raw = self.0.raw_zero();
        if self.f() == 1 {
            raw[0] = -BigInt::from(self.residue_field().modulus()[0]);
        } else {
            raw[1] = BigInt::one();
        }
        PAdic::normalize(self, raw, 0, None, true)
    }

    /// The canonical lift of a residue-field element (coefficients in 0..p).
    pub fn digit(&self, idx: u64) -> PAdic {
        PAdic::normalize(self, self.0.raw_lift_residue(idx), 0, None, true)
    }

    /// Assembles `sum digits[k] pi^(start + k)` exactly.
    pub fn from_digits(&self, start: i64, digits: &[u64]) -> PAdic {
        let mut acc = self.zero();
        for (k, &d) in digits.iter().enumerate() {
            if d != 0 {
                acc = &acc + &(&self.digit(d) * &self.pi_pow(start + k as i64));
            }
        }
        acc
    }
}

impl PAdic {
    /// Builds `pi^offset * raw` where `raw` is integral and known to relative
    /// precision `known` (None: exact).
    pub(crate) fn normalize(
        field: &FieldSpec,
        raw: Vec<BigInt>,
        offset: i64,
        known: Option<i64>,
        exact: bool,
    ) -> PAdic {
        let inner = &field.0;
        let limit = known.unwrap_or(INF_REL);
        let exact = exact && known.is_none();
        let w = if raw.iter().all(Zero::is_zero) {
            limit
        } else {
            inner.raw_valuation(&raw, limit)
        };
        if w >= limit {
            let abs = if exact { None } else { Some(offset + limit) };
            return PAdic { field: field.clone(), repr: Repr::Zero { abs } };
        }
        let mut u = inner.raw_shift_down(&raw, w);
        let cap = field.precision() as i64;
        let (rel, exact) = if exact && inner.raw_is_small(&u) {
            (field.precision(), true)
        } else {
            inner.reduce(&mut u);
            ((limit - w).min(cap) as u32, false)
        };
        PAdic { field: field.clone(), repr: Repr::Unit { v: offset + w, u, rel, exact } }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn check_field(&self, other: &PAdic) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    /// True when the element is zero at the available precision.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None } | Repr::Unit { exact: true, .. })
    }

    /// Exact valuation; `Ok(None)` stands for the exact zero (infinite valuation).
    pub fn valuation(&self) -> Result<Option<i64>> {
        match &self.repr {
            Repr::Zero { abs: None } => Ok(None),
            Repr::Zero { abs: Some(a) } => Err(Error::precision(format!(
                "all digits cancelled; value is O(pi^{a})"
            ))),
            Repr::Unit { v, .. } => Ok(Some(*v)),
        }
    }

    /// Lower bound on the valuation (the valuation itself for nonzero elements).
    pub fn valuation_lower_bound(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs: None } => INF_REL,
            Repr::Zero { abs: Some(a) } => *a,
            Repr::Unit { v, .. } => *v,
        }
    }

    /// Absolute precision: the value is known modulo pi^this. `None` for exact values.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit { exact: true, .. } => None,
            Repr::Unit { v, rel, .. } => Some(v + *rel as i64),
        }
    }

    /// Relative precision in digits (`None` for exact values and zeros).
    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { rel, exact: false, .. } => Some(*rel),
            _ => None,
        }
    }

    fn eff_abs(&self) -> i64 {
        self.abs_precision().unwrap_or(INF_REL)
    }

    /// Residue class of the leading unit, as a residue-field index.
    pub fn leading_digit(&self) -> Option<u64> {
        match &self.repr {
            Repr::Unit { u, .. } => Some(self.field.0.raw_residue(u)),
            _ => None,
        }
    }

    pub fn neg(&self) -> PAdic {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { v, u, rel, exact } => {
                let mut nu: Vec<BigInt> = u.iter().map(|c| -c).collect();
                if !exact {
                    self.field.0.reduce(&mut nu);
                }
                PAdic {
                    field: self.field.clone(),
                    repr: Repr::Unit { v: *v, u: nu, rel: *rel, exact: *exact },
                }
            }
        }
    }

    pub fn try_add(&self, other: &PAdic) -> Result<PAdic> {
        self.check_field(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn try_sub(&self, other: &PAdic) -> Result<PAdic> {
        self.check_field(other)?;
        Ok(self.add_impl(other, true))
    }

    fn add_impl(&self, other: &PAdic, negate: bool) -> PAdic {
        let field = &self.field;
        let inner = &field.0;
        let other_signed = if negate { other.neg() } else { other.clone() };
        match (&self.repr, &other_signed.repr) {
            (Repr::Zero { abs: None }, _) => other_signed,
            (_, Repr::Zero { abs: None }) => self.clone(),
            (Repr::Zero { abs: Some(a) }, Repr::Zero { abs: Some(b) }) => field.zero_to(*a.min(b)),
            (Repr::Zero { abs: Some(a) }, Repr::Unit { .. }) => other_signed.cap_abs(*a),
            (Repr::Unit { .. }, Repr::Zero { abs: Some(b) }) => self.cap_abs(*b),
            (
                Repr::Unit { v: va, u: ua, exact: ea, .. },
                Repr::Unit { v: vb, u: ub, exact: eb, .. },
            ) => {
                let v = (*va).min(*vb);
                let abs = self.eff_abs().min(other_signed.eff_abs());
                let exact = *ea && *eb;
                let a = inner.raw_shift_up(ua, va - v);
                let b = inner.raw_shift_up(ub, vb - v);
                let sum = inner.raw_add(&a, &b);
                let known = if exact { None } else { Some(abs - v) };
                PAdic::normalize(field, sum, v, known, exact)
            }
        }
    }

    /// Forgets everything beyond absolute precision `abs`.
    pub fn cap_abs(&self, abs: i64) -> PAdic {
        match &self.repr {
            Repr::Zero { abs: a } => {
                self.field.zero_to(a.map_or(abs, |a| a.min(abs)))
            }
            Repr::Unit { v, u, .. } => {
                if abs <= *v {
                    return self.field.zero_to(abs);
                }
                let cur = self.eff_abs();
                if cur <= abs {
                    return self.clone();
                }
                PAdic::normalize(&self.field, u.clone(), *v, Some(abs - v), false)
            }
        }
    }

    pub fn try_mul(&self, other: &PAdic) -> Result<PAdic> {
        self.check_field(other)?;
        let field = &self.field;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { abs: None }, _) | (_, Repr::Zero { abs: None }) => field.zero(),
            (Repr::Zero { abs: Some(a) }, r) | (r, Repr::Zero { abs: Some(a) }) => {
                let vb = match r {
                    Repr::Zero { abs: Some(b) } => *b,
                    Repr::Unit { v, .. } => *v,
                    Repr::Zero { abs: None } => unreachable!(),
                };
                field.zero_to(a + vb)
            }
            (
                Repr::Unit { v: va, u: ua, rel: ra, exact: ea },
                Repr::Unit { v: vb, u: ub, rel: rb, exact: eb },
            ) => {
                let exact = *ea && *eb;
                let prod = field.0.raw_mul(ua, ub);
                let rel = match (*ea, *eb) {
                    (true, true) => None,
                    (true, false) => Some(*rb as i64),
                    (false, true) => Some(*ra as i64),
                    (false, false) => Some((*ra).min(*rb) as i64),
                };
                PAdic::normalize(field, prod, va + vb, rel, exact)
            }
        })
    }

    fn unit_inverse(&self, u: &[BigInt], rel: u32) -> Vec<BigInt> {
        let inner = &self.field.0;
        let res = inner.raw_residue(u);
        let inv = self.field.residue_field().inv(res).expect("unit has nonzero residue");
        let mut y = inner.raw_lift_residue(inv);
        let two = {
            let mut t = inner.raw_zero();
            t[0] = BigInt::from(2);
            t
        };
        let mut good = 1u32;
        while good < rel + 2 {
            let uy = inner.raw_mul(u, &y);
            let corr = inner.raw_sub(&two, &uy);
            y = inner.raw_mul(&y, &corr);
            inner.reduce(&mut y);
            good *= 2;
        }
        y
    }

    pub fn try_inv(&self) -> Result<PAdic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Unit { v, u, rel, exact } => {
                let one = self.field.0.raw_one();
                let minus_one: Vec<BigInt> = one.iter().map(|c| -c).collect();
                if *exact && (u == &one || u == &minus_one) {
                    return Ok(PAdic {
                        field: self.field.clone(),
                        repr: Repr::Unit { v: -v, u: u.clone(), rel: *rel, exact: true },
                    });
                }
                let prec = if *exact { self.field.precision() } else { *rel };
                let y = self.unit_inverse(u, prec);
                Ok(PAdic::normalize(&self.field, y, -v, Some(prec as i64), false))
            }
        }
    }

    pub fn try_div(&self, other: &PAdic) -> Result<PAdic> {
        self.check_field(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Repr::Unit { u: ua, exact: true, v: va, .. }, Repr::Unit { u: ub, exact: true, v: vb, .. }) =
            (&self.repr, &other.repr)
        {
            if ua == ub {
                return Ok(self.field.pi_pow(va - vb));
            }
        }
        self.try_mul(&other.try_inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Result<PAdic> {
        if n < 0 {
            return self.try_inv()?.pow(-n);
        }
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Equality at the available precision of both operands.
    pub fn eq_at_precision(&self, other: &PAdic) -> bool {
        self.field == other.field && (self - other).is_zero()
    }

    /// Digits `d_k` of the expansion `sum d_k pi^k` for `from <= k < to`,
    /// as residue-field indices. Fails if the value is not known that far.
    pub fn digits(&self, from: i64, to: i64) -> Result<Vec<u64>> {
        if to <= from {
            return Ok(Vec::new());
        }
        if to > self.eff_abs() {
            return Err(Error::precision(format!(
                "digit {} requested but value known only to O(pi^{})",
                to - 1,
                self.eff_abs()
            )));
        }
        let mut out = vec![0u64; (to - from) as usize];
        let Repr::Unit { v, u, .. } = &self.repr else {
            return Ok(out);
        };
        if *v >= to {
            return Ok(out);
        }
        if *v < from {
            // digits below `from` are skipped but must still be peeled off
        }
        let inner = &self.field.0;
        let mut cur = u.clone();
        let mut pos = *v;
        while pos < to {
            let d = inner.raw_residue(&cur);
            if pos >= from {
                out[(pos - from) as usize] = d;
            }
            let lifted = inner.raw_lift_residue(d);
            let diff = inner.raw_sub(&cur, &lifted);
            cur = inner.raw_div_pi(&diff);
            pos += 1;
        }
        Ok(out)
    }

    /// The exact element agreeing with `self` below `pi^n` (digits in canonical form).
    pub fn truncate(&self, n: i64) -> Result<PAdic> {
        match &self.repr {
            Repr::Zero { abs: None } => Ok(self.field.zero()),
            _ => {
                let low = self.valuation_lower_bound();
                if low >= n {
                    if self.eff_abs() < n && !self.is_exact() {
                        return Err(Error::precision(format!(
                            "value needed mod pi^{n}, known only to O(pi^{})",
                            self.eff_abs()
                        )));
                    }
                    return Ok(self.field.zero());
                }
                let ds = self.digits(low, n)?;
                Ok(self.field.from_digits(low, &ds))
            }
        }
    }

    /// Position of the last nonzero digit within the known precision, used to
    /// pick canonical representatives.
    pub(crate) fn significant_length(&self) -> i64 {
        match &self.repr {
            Repr::Unit { v, rel, exact, .. } => {
                let top = if *exact { v + self.field.precision() as i64 } else { v + *rel as i64 };
                let ds = self.digits(*v, top).unwrap_or_default();
                let last = ds.iter().rposition(|&d| d != 0).unwrap_or(0);
                last as i64
            }
            _ => -1,
        }
    }

    /// Deterministic ordering key: valuation then digits over the known range.
    pub(crate) fn digit_key(&self, span: i64) -> (i64, Vec<u64>) {
        match &self.repr {
            Repr::Unit { v, .. } => {
                let top = (v + span).min(self.eff_abs());
                (*v, self.digits(*v, top).unwrap_or_default())
            }
            _ => (INF_REL, Vec::new()),
        }
    }

    /// Canonical literal, e.g. `2 + pi^2 + O(pi^64)`.
    pub fn to_literal(&self) -> String {
        let abs = self.abs_precision();
        let (terms, tail) = match &self.repr {
            Repr::Zero { abs: None } => return "0".into(),
            Repr::Zero { abs: Some(a) } => return format!("O(pi^{a})"),
            Repr::Unit { v, rel, exact, .. } => {
                let top = if *exact { v + self.field.precision() as i64 + 1 } else { v + *rel as i64 };
                let ds = self.digits(*v, top).unwrap_or_default();
                (self.render_digits(*v, &ds), abs)
            }
        };
        let mut s = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if let Some(a) = tail {
            s.push_str(&format!(" + O(pi^{a})"));
        }
        s
    }

    fn render_digits(&self, start: i64, ds: &[u64]) -> Vec<String> {
        let k = self.field.residue_field();
        let mut terms = Vec::new();
        for (i, &d) in ds.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let pos = start + i as i64;
            let poly = k.to_poly(d);
            let parts: Vec<String> = poly
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| match (j, c) {
                    (0, c) => c.to_string(),
                    (1, 1) => "x".to_string(),
                    (1, c) => format!("{c}*x"),
                    (j, 1) => format!("x^{j}"),
                    (j, c) => format!("{c}*x^{j}"),
                })
                .collect();
            let coeff = if parts.len() > 1 { format!("({})", parts.join(" + ")) } else { parts[0].clone() };
            let term = match (pos, coeff.as_str()) {
                (0, _) => coeff,
                (1, "1") => "pi".to_string(),
                (_, "1") => format!("pi^{pos}"),
                (1, _) => format!("{coeff}*pi"),
                _ => format!("{coeff}*pi^{pos}"),
            };
            terms.push(term);
        }
        terms
    }

    /// Literal listing only the digits below `pi^n` (no precision marker).
    pub(crate) fn literal_mod(&self, n: i64) -> String {
        match &self.repr {
            Repr::Unit { v, .. } if *v < n => {
                let ds = self.digits(*v, n).unwrap_or_default();
                let t = self.render_digits(*v, &ds);
                if t.is_empty() { "0".into() } else { t.join(" + ") }
            }
            _ => "0".into(),
        }
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl<'a> std::ops::$trait<&'a PAdic> for &'a PAdic {
            type Output = PAdic;
            fn $method(self, rhs: &'a PAdic) -> PAdic {
                self.$impl(rhs).expect("operands from the same field")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        PAdic::neg(self)
    }
}

