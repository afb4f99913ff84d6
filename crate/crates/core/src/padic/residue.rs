//! The residue field k = F_q, q = p^f, presented as F_p[x]/(g).
//!
//! Elements are encoded as integers `0..q` whose base-p digits are the
//! coefficients of the representing polynomial, lowest degree first. This
//! encoding fixes the canonical ordering used for digits and for P^1(k).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    f: u32,
    q: u64,
    /// Monic modulus, coefficients lowest degree first, length f + 1.
    modulus: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = mulmod(c, mi, p);
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    result
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree f over F_p.
fn is_irreducible(g: &[u64], p: u64) -> bool {
    let f = (g.len() - 1) as u32;
    if f == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^k) mod g
    let frob = |k: u32| -> Vec<u64> {
        let mut t = x.clone();
        for _ in 0..k {
            t = poly_powmod(&t, p, g, p);
        }
        t
    };
    if poly_sub(&frob(f), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_factors(f as u64) {
        let h = poly_sub(&frob(f / l as u32), &x, p);
        if poly_gcd(g, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

impl ResidueField {
    /// Builds F_{p^f} using the least irreducible monic polynomial, where
    /// coefficient vectors are ordered by the integer sum a_i p^i.
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(Error::InvalidField("unramified degree must be positive".into()));
        }
        let q = p
            .checked_pow(f)
            .filter(|q| *q < (1u64 << 40))
            .ok_or_else(|| Error::InvalidField(format!("p^f = {p}^{f} is too large")))?;
        let mut code = 0u64;
        loop {
            let mut g: Vec<u64> = (0..f).map(|i| (code / p.pow(i)) % p).collect();
            g.push(1);
            if is_irreducible(&g, p) {
                return Ok(ResidueField { p, f, q, modulus: g });
            }
            code += 1;
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    /// The monic defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn to_poly(&self, a: u64) -> Vec<u64> {
        let mut a = a;
        (0..self.f)
            .map(|_| {
                let c = a % self.p;
                a /= self.p;
                c
            })
            .collect()
    }

    pub fn from_poly(&self, c: &[u64]) -> u64 {
        let r = poly_rem(c, &self.modulus, self.p);
        r.iter().rev().fold(0u64, |acc, &x| acc * self.p + x)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let pa = self.to_poly(a);
        let pb = self.to_poly(b);
        let s: Vec<u64> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_poly(&s)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let s: Vec<u64> = self.to_poly(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_poly(&s)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let prod = poly_mul(&trim(self.to_poly(a)), &trim(self.to_poly(b)), self.p);
        self.from_poly(&prod)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.q - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u64) -> u64 {
        assert_ne!(a, 0);
        let mut n = self.q - 1;
        for l in prime_factors(self.q - 1) {
            while n.is_multiple_of(l) && self.pow(a, n / l) == 1 {
                n /= l;
            }
        }
        n
    }

    /// The least element (in the integer encoding) generating k^x.
    pub fn generator(&self) -> u64 {
        if self.q == 2 {
            return 1;
        }
        (2..self.q)
            .chain(std::iter::once(1))
            .find(|&a| self.order(a) == self.q - 1)
            .expect("finite field has a primitive element")
    }

    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.p == 2 || self.pow(a, (self.q - 1) / 2) == 1
    }

    /// A square root, when one exists (Tonelli-Shanks; every element is a square in characteristic 2).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(self.pow(a, self.q / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        let mut s = 0;
        let mut t = self.q - 1;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let z = (2..self.q).find(|&z| !self.is_square(z)).unwrap_or(1);
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        while b != 1 {
            let mut i = 0;
            let mut bb = b;
            while bb != 1 {
                bb = self.mul(bb, bb);
                i += 1;
            }
            let mut w = c;
            for _ in 0..(m - i - 1) {
                w = self.mul(w, w);
            }
            x = self.mul(x, w);
            c = self.mul(w, w);
            b = self.mul(b, c);
            m = i;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_is_x2_x_1() {
        let k = ResidueField::new(2, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 1, 1]);
        assert_eq!(k.size(), 4);
        let g = k.generator();
        assert_eq!(k.order(g), 3);
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let k = ResidueField::new(5, 1).unwrap();
        assert_eq!(k.modulus(), &[0, 1]);
        assert_eq!(k.generator(), 2);
        assert_eq!(k.mul(3, 4), 2);
    }

    #[test]
    fn field_axioms_in_f9() {
        let k = ResidueField::new(3, 2).unwrap();
        for a in 1..9 {
            assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            let sq = k.mul(a, a);
            let r = k.sqrt(sq).unwrap();
            assert_eq!(k.mul(r, r), sq);
        }
        assert_eq!((1..9).filter(|&a| k.is_square(a)).count(), 4);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(ResidueField::new(4, 1).is_err());
    }
}
