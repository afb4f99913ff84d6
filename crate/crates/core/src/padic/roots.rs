use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use super::element::{PAdic, Repr};
use super::field::{FieldInner, FieldSpec};
use crate::error::{Error, Result};

/// Why an element has no square root in K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonSquare {
    OddValuation(i64),
    /// The leading digit is not a square in the residue field.
    NonResidue(u64),
    /// No residue-level root survives the 2-adic congruence test modulo `pi^k`.
    Congruence { modulus_exponent: i64 },
}

#[derive(Debug, Clone)]
pub enum SquareRoot {
    Root(PAdic),
    NonSquare(NonSquare),
}

impl SquareRoot {
    pub fn root(self) -> Option<PAdic> {
        match self {
            SquareRoot::Root(r) => Some(r),
            SquareRoot::NonSquare(_) => None,
        }
    }
}

/// Least `k >= 1` with `p^k = 1 mod n`, for `n` prime to `p`.
pub fn multiplicative_order(p: u64, n: u64) -> Option<u32> {
    if n == 0 || num_integer::gcd(p, n) != 1 {
        return None;
    }
    if n == 1 {
        return Some(1);
    }
    let mut acc = p % n;
    let mut k = 1u32;
    while acc != 1 {
        acc = ((acc as u128 * p as u128) % n as u128) as u64;
        k += 1;
    }
    Some(k)
}

fn raw_pow(inner: &FieldInner, a: &[BigInt], mut n: u64) -> Vec<BigInt> {
    let mut result = inner.raw_one();
    let mut base = a.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            result = inner.raw_mul(&result, &base);
            inner.reduce(&mut result);
        }
        n >>= 1;
        if n > 0 {
            base = inner.raw_mul(&base, &base);
            inner.reduce(&mut base);
        }
    }
    result
}

fn raw_is_zero_mod(inner: &FieldInner, a: &[BigInt], k: i64) -> bool {
    a.iter().all(Zero::is_zero) || inner.raw_valuation(a, k) >= k
}

fn raw_unit_inverse(field: &FieldSpec, u: &[BigInt]) -> Vec<BigInt> {
    let x = PAdic::normalize(field, u.to_vec(), 0, Some(field.precision() as i64), false);
    match x.try_inv().expect("unit").repr {
        Repr::Unit { u, v: 0, .. } => {
            let mut u = u;
            field.0.reduce(&mut u);
            u
        }
        _ => unreachable!("inverse of a unit is a unit"),
    }
}

impl FieldSpec {
    /// A primitive n-th root of unity: the Teichmüller lift of
    /// `g^((q-1)/n)` for the canonical generator `g` of the residue field.
    pub fn root_of_unity(&self, n: u64) -> Result<PAdic> {
        match n {
            0 => return Err(Error::InvalidInput("root of unity of order 0".into())),
            1 => return Ok(self.one()),
            2 => return Ok(self.from_int(-1)),
            _ => {}
        }
        let p = self.p();
        let q = self.q();
        if n.is_multiple_of(p) {
            return Err(Error::NoRootOfUnity { n, suggested_f: None });
        }
        if !(q - 1).is_multiple_of(n) {
            return Err(Error::NoRootOfUnity { n, suggested_f: multiplicative_order(p, n) });
        }
        let k = self.residue_field();
        let t = k.pow(k.generator(), (q - 1) / n);
        let inner = &self.0;
        let mut y = inner.raw_lift_residue(t);
        let n_raw = {
            let mut r = inner.raw_zero();
            r[0] = BigInt::from(n);
            r
        };
        // Newton on x^n - 1; n is a unit so convergence is quadratic.
        for _ in 0..64 {
            let yn1 = raw_pow(inner, &y, n - 1);
            let mut delta = inner.raw_mul(&yn1, &y);
            delta[0] -= 1;
            inner.reduce(&mut delta);
            if delta.iter().all(Zero::is_zero) {
                break;
            }
            let deriv = inner.raw_mul(&n_raw, &yn1);
            let step = inner.raw_mul(&delta, &raw_unit_inverse(self, &deriv));
            y = inner.raw_sub(&y, &step);
            inner.reduce(&mut y);
        }
        Ok(PAdic::normalize(self, y, 0, Some(self.precision() as i64), false))
    }
}

impl PAdic {
    /// Square root with a canonical choice of sign, or a non-square verdict.
    ///
    /// Of the two roots the one with the shorter significant expansion is
    /// returned, ties broken by comparing digit sequences; this makes the
    /// roots of small squares come out as the expected small integers.
    pub fn sqrt(&self) -> Result<SquareRoot> {
        let (v, u, rel, exact) = match &self.repr {
            Repr::Zero { abs: None } => return Ok(SquareRoot::Root(self.clone())),
            Repr::Zero { abs: Some(a) } => {
                return Err(Error::precision(format!("square root of O(pi^{a})")))
            }
            Repr::Unit { v, u, rel, exact } => (*v, u.clone(), *rel, *exact),
        };
        if v.rem_euclid(2) == 1 {
            return Ok(SquareRoot::NonSquare(NonSquare::OddValuation(v)));
        }
        let field = &self.field;
        let inner = &field.0;
        let k = field.residue_field();
        let res = inner.raw_residue(&u);
        let e = field.e() as i64;
        let mut u = u;
        inner.reduce(&mut u);
        let known = if exact { field.precision() as i64 } else { rel as i64 };

        let start = if field.p() == 2 {
            let need = 2 * e + 1;
            if known < need {
                return Err(Error::precision(format!(
                    "deciding a 2-adic square needs {need} digits, have {known}"
                )));
            }
            match two_adic_seed(field, &u, need) {
                Some(y) => y,
                None => {
                    return Ok(SquareRoot::NonSquare(NonSquare::Congruence {
                        modulus_exponent: need,
                    }))
                }
            }
        } else {
            match k.sqrt(res) {
                Some(r) => inner.raw_lift_residue(r),
                None => return Ok(SquareRoot::NonSquare(NonSquare::NonResidue(res))),
            }
        };

        let mut y = start;
        for _ in 0..128 {
            let mut delta = inner.raw_sub(&u, &inner.raw_mul(&y, &y));
            inner.reduce(&mut delta);
            if delta.iter().all(Zero::is_zero) {
                break;
            }
            let step = if field.p() == 2 {
                let half = inner.raw_shift_down(&delta, e);
                inner.raw_mul(&half, &raw_unit_inverse(field, &y))
            } else {
                let two_y = inner.raw_add(&y, &y);
                inner.raw_mul(&delta, &raw_unit_inverse(field, &two_y))
            };
            let prev = y.clone();
            y = inner.raw_add(&y, &step);
            inner.reduce(&mut y);
            if y == prev {
                break;
            }
        }
        let loss = if field.p() == 2 { e } else { 0 };
        let out_rel = if exact { field.precision() as i64 } else { known - loss };
        let root = PAdic::normalize(field, y, v / 2, Some(out_rel), false);
        let other = root.neg();
        let chosen = match root
            .significant_length()
            .cmp(&other.significant_length())
            .then_with(|| root.digit_key(out_rel).cmp(&other.digit_key(out_rel)))
        {
            Ordering::Greater => other,
            _ => root,
        };
        if exact {
            // Return an exact root when a short expansion squares back exactly.
            let span = chosen.significant_length() + 1;
            if let Ok(cand) = chosen.truncate(v / 2 + span) {
                if (&(&cand * &cand) - self).is_exact_zero() {
                    return Ok(SquareRoot::Root(cand));
                }
            }
        }
        Ok(SquareRoot::Root(chosen))
    }
}

/// Depth-first search for `y` with `y^2 = u mod pi^need`, digit by digit.
/// Knowing `y mod pi^j` pins `y^2` modulo `pi^min(j+e, 2j)`.
fn two_adic_seed(field: &FieldSpec, u: &[BigInt], need: i64) -> Option<Vec<BigInt>> {
    let inner = &field.0;
    let q = field.q();
    let e = field.e() as i64;
    fn go(
        field: &FieldSpec,
        u: &[BigInt],
        y: Vec<BigInt>,
        j: i64,
        need: i64,
        e: i64,
        q: u64,
    ) -> Option<Vec<BigInt>> {
        let inner = &field.0;
        let check = (j + e).min(2 * j).min(need);
        let diff = inner.raw_sub(&inner.raw_mul(&y, &y), u);
        if !raw_is_zero_mod(inner, &diff, check) {
            return None;
        }
        if check >= need {
            return Some(y);
        }
        for t in 0..q {
            let term = inner.raw_shift_up(&inner.raw_lift_residue(t), j);
            let next = inner.raw_add(&y, &term);
            if let Some(found) = go(field, u, next, j + 1, need, e, q) {
                return Some(found);
            }
        }
        None
    }
    let res = inner.raw_residue(u);
    let d0 = field.residue_field().sqrt(res)?;
    go(field, u, inner.raw_lift_residue(d0), 1, need, e, q)
}
