use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::residue::ResidueField;
use crate::error::{Error, Result};

/// A finite extension K of Q_p built as an unramified extension of degree `f`
/// followed by the totally ramified step `pi^e = p`.
///
/// Cloning is cheap; all clones share one immutable description.
#[derive(Clone)]
pub struct FieldSpec(pub(crate) Arc<FieldInner>);

pub(crate) struct FieldInner {
    pub(crate) residue: ResidueField,
    pub(crate) e: u32,
    pub(crate) precision: u32,
    pub(crate) pm: BigInt,
    pub(crate) p_big: BigInt,
    /// Exact elements whose coefficients grow past this bound are demoted to
    /// ordinary capped-precision elements.
    pub(crate) exact_bound: BigInt,
    /// Integer lift of the unramified modulus, lowest degree first.
    pub(crate) lift: Vec<BigInt>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p() == other.p()
                && self.f() == other.f()
                && self.e() == other.e()
                && self.precision() == other.precision())
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldSpec(p={}, f={}, e={}, N={})",
            self.p(),
            self.f(),
            self.e(),
            self.precision()
        )
    }
}

impl FieldSpec {
    /// `make_field`: K with residue field F_{p^f}, ramification `e` and
    /// relative precision `precision` pi-adic digits.
    pub fn new(p: u64, f: u32, e: u32, precision: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidField("ramification degree must be positive".into()));
        }
        if precision < 4 {
            return Err(Error::InvalidField(format!(
                "precision {precision} is below the minimum of 4 digits"
            )));
        }
        let residue = ResidueField::new(p, f)?;
        let cap = precision.div_ceil(e) + 2;
        let p_big = BigInt::from(p);
        let pm = num_traits::pow(p_big.clone(), cap as usize);
        let exact_bound = &pm >> 3;
        let lift = residue.modulus().iter().map(|&c| BigInt::from(c)).collect();
        Ok(FieldSpec(Arc::new(FieldInner {
            residue,
            e,
            precision,
            pm,
            p_big,
            exact_bound,
            lift,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.residue.p()
    }

    pub fn f(&self) -> u32 {
        self.0.residue.degree()
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    /// Residue cardinality q = p^f.
    pub fn q(&self) -> u64 {
        self.0.residue.size()
    }

    /// [K : Q_p] = e f.
    pub fn degree(&self) -> u32 {
        self.e() * self.f()
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.0.residue
    }

    /// The same field at a different working precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        FieldSpec::new(self.p(), self.f(), self.e(), precision)
    }

    /// Human-readable description of the two defining polynomials.
    pub fn describe(&self) -> String {
        let g = self.0.residue.modulus();
        let terms: Vec<String> = g
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            })
            .collect();
        format!(
            "K/Q_{}: unramified x: {} = 0, ramified pi^{} = {}, q = {}, N = {}",
            self.p(),
            terms.join(" + "),
            self.e(),
            self.p(),
            self.q(),
            self.precision()
        )
    }
}

/// Arithmetic on integral elements sum_{i<e, j<f} c[i f + j] pi^i x^j.
impl FieldInner {
    pub(crate) fn width(&self) -> usize {
        (self.e * self.residue.degree()) as usize
    }

    pub(crate) fn f_usize(&self) -> usize {
        self.residue.degree() as usize
    }

    pub(crate) fn raw_zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.width()]
    }

    pub(crate) fn reduce(&self, c: &mut [BigInt]) {
        for x in c.iter_mut() {
            *x = x.mod_floor(&self.pm);
        }
    }

    pub(crate) fn raw_add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub(crate) fn raw_sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// Product in O_K, without reduction modulo p^cap.
    pub(crate) fn raw_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let f = self.f_usize();
        let e = self.e as usize;
        let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); 2 * f - 1]; 2 * e - 1];
        for i1 in 0..e {
            let ablk = &a[i1 * f..(i1 + 1) * f];
            if ablk.iter().all(Zero::is_zero) {
                continue;
            }
            for i2 in 0..e {
                let bblk = &b[i2 * f..(i2 + 1) * f];
                for (j1, x) in ablk.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j2, y) in bblk.iter().enumerate() {
                        if !y.is_zero() {
                            acc[i1 + i2][j1 + j2] += x * y;
                        }
                    }
                }
            }
        }
        let mut out = self.raw_zero();
        for (i, mut blk) in acc.into_iter().enumerate() {
            // reduce modulo the monic unramified polynomial
            for d in (f..blk.len()).rev() {
                if blk[d].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut blk[d]);
                for (k, g) in self.lift.iter().enumerate().take(f) {
                    if !g.is_zero() {
                        blk[d - f + k] -= &c * g;
                    }
                }
            }
            // pi^(e + k) = p pi^k
            let (target, scale) = if i >= e { (i - e, true) } else { (i, false) };
            for j in 0..f {
                let val = if scale {
                    &blk[j] * &self.p_big
                } else {
                    std::mem::take(&mut blk[j])
                };
                out[target * f + j] += val;
            }
        }
        out
    }

    pub(crate) fn raw_mul_pi(&self, a: &[BigInt]) -> Vec<BigInt> {
        let f = self.f_usize();
        let e = self.e as usize;
        let mut out = self.raw_zero();
        for j in 0..f {
            out[j] = &a[(e - 1) * f + j] * &self.p_big;
        }
        for i in 1..e {
            for j in 0..f {
                out[i * f + j] = a[(i - 1) * f + j].clone();
            }
        }
        out
    }

    /// Divides by pi; the caller guarantees the constant block is divisible by p.
    pub(crate) fn raw_div_pi(&self, a: &[BigInt]) -> Vec<BigInt> {
        let f = self.f_usize();
        let e = self.e as usize;
        let mut out = self.raw_zero();
        for i in 0..e - 1 {
            for j in 0..f {
                out[i * f + j] = a[(i + 1) * f + j].clone();
            }
        }
        for j in 0..f {
            out[(e - 1) * f + j] = a[j].div_floor(&self.p_big);
        }
        out
    }

    fn vp(&self, x: &BigInt, limit: u32) -> u32 {
        if x.is_zero() {
            return limit;
        }
        let mut n = 0;
        let mut y = x.clone();
        while n < limit {
            let (q, r) = y.div_rem(&self.p_big);
            if !r.is_zero() {
                break;
            }
            y = q;
            n += 1;
        }
        n
    }

    /// pi-adic valuation of an integral element, bounded by `limit`.
    pub(crate) fn raw_valuation(&self, a: &[BigInt], limit: i64) -> i64 {
        let f = self.f_usize();
        let e = self.e as i64;
        let mut best = limit;
        for i in 0..self.e as usize {
            if i as i64 >= best {
                break;
            }
            let plimit = ((best - i as i64 + e - 1) / e).clamp(0, u32::MAX as i64) as u32;
            let vpi = a[i * f..(i + 1) * f]
                .iter()
                .map(|c| self.vp(c, plimit))
                .min()
                .unwrap_or(plimit);
            best = best.min(e.saturating_mul(vpi as i64).saturating_add(i as i64));
        }
        best
    }

    /// Divides by pi^k, the caller guarantees divisibility.
    pub(crate) fn raw_shift_down(&self, a: &[BigInt], k: i64) -> Vec<BigInt> {
        let e = self.e as i64;
        let whole = k / e;
        let rest = k % e;
        let mut out: Vec<BigInt> = if whole > 0 {
            let d = num_traits::pow(self.p_big.clone(), whole as usize);
            a.iter().map(|c| c.div_floor(&d)).collect()
        } else {
            a.to_vec()
        };
        for _ in 0..rest {
            out = self.raw_div_pi(&out);
        }
        out
    }

    pub(crate) fn raw_shift_up(&self, a: &[BigInt], k: i64) -> Vec<BigInt> {
        let e = self.e as i64;
        let whole = k / e;
        let rest = k % e;
        let mut out: Vec<BigInt> = if whole > 0 {
            let d = num_traits::pow(self.p_big.clone(), whole as usize);
            a.iter().map(|c| c * &d).collect()
        } else {
            a.to_vec()
        };
        for _ in 0..rest {
            out = self.raw_mul_pi(&out);
        }
        out
    }

    /// Residue class of an integral element, as a residue-field index.
    pub(crate) fn raw_residue(&self, a: &[BigInt]) -> u64 {
        let p = self.residue.p();
        let f = self.f_usize();
        let coeffs: Vec<u64> = a[..f]
            .iter()
            .map(|c| {
                c.mod_floor(&self.p_big).to_u64().expect("residue fits u64") % p
            })
            .collect();
        self.residue.from_poly(&coeffs)
    }

    /// Canonical integral lift of a residue-field element.
    pub(crate) fn raw_lift_residue(&self, idx: u64) -> Vec<BigInt> {
        let mut out = self.raw_zero();
        for (j, c) in self.residue.to_poly(idx).into_iter().enumerate() {
            out[j] = BigInt::from(c);
        }
        out
    }

    pub(crate) fn raw_is_small(&self, a: &[BigInt]) -> bool {
        a.iter().all(|c| c.abs() < self.exact_bound)
    }

    pub(crate) fn raw_one(&self) -> Vec<BigInt> {
        let mut out = self.raw_zero();
        out[0] = BigInt::one();
        out
    }
}
