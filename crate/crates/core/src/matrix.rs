//! 2x2 matrices over K.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{FieldSpec, PAdic};

/// `[[a, b], [c, d]]`; columns `(a, c)` and `(b, d)` span the associated lattice.
#[derive(Clone)]
pub struct Mat2 {
    pub a: PAdic,
    pub b: PAdic,
    pub c: PAdic,
    pub d: PAdic,
}

impl Mat2 {
    pub fn new(a: PAdic, b: PAdic, c: PAdic, d: PAdic) -> Result<Self> {
        let f = a.field();
        if [&b, &c, &d].iter().any(|x| x.field() != f) {
            return Err(Error::FieldMismatch);
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Mat2::diag(field.one(), field.one())
    }

    pub fn diag(x: PAdic, y: PAdic) -> Self {
        let z = x.field().zero();
        Mat2 { a: x, b: z.clone(), c: z, d: y }
    }

    /// Integer matrix, handy for exact constructions.
    pub fn from_ints(field: &FieldSpec, e: [[i64; 2]; 2]) -> Self {
        Mat2 {
            a: field.from_int(e[0][0]),
            b: field.from_int(e[0][1]),
            c: field.from_int(e[1][0]),
            d: field.from_int(e[1][1]),
        }
    }

    /// Parses `"a, b; c, d"` with entries in the element literal grammar.
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!("matrix {s:?} needs two rows separated by ';'")));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!("row {row:?} needs two entries separated by ','")));
            }
            for c in cols {
                entries.push(field.parse(c.trim())?);
            }
        }
        let mut it = entries.into_iter();
        let mut next = || it.next().expect("four entries");
        Ok(Mat2 { a: next(), b: next(), c: next(), d: next() })
    }

    pub fn field(&self) -> &FieldSpec {
        self.a.field()
    }

    pub fn entries(&self) -> [&PAdic; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn det(&self) -> PAdic {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> PAdic {
        &self.a + &self.d
    }

    /// The adjugate, which inverts the matrix projectively.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 { a: self.d.clone(), b: self.b.neg(), c: self.c.neg(), d: self.a.clone() }
    }

    pub fn scale(&self, s: &PAdic) -> Mat2 {
        Mat2 { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    pub fn try_div_scalar(&self, s: &PAdic) -> Result<Mat2> {
        Ok(Mat2 {
            a: self.a.try_div(s)?,
            b: self.b.try_div(s)?,
            c: self.c.try_div(s)?,
            d: self.d.try_div(s)?,
        })
    }

    pub fn eq_at_precision(&self, o: &Mat2) -> bool {
        self.entries().iter().zip(o.entries()).all(|(x, y)| x.eq_at_precision(y))
    }

    /// Literal form `"a, b; c, d"` accepted by [`Mat2::parse`].
    pub fn to_literal(&self) -> String {
        format!(
            "{}, {}; {}, {}",
            self.a.to_literal(),
            self.b.to_literal(),
            self.c.to_literal(),
            self.d.to_literal()
        )
    }

    /// Short form with every entry printed modulo `pi^n`.
    pub fn to_literal_mod(&self, n: i64) -> String {
        format!(
            "{}, {}; {}, {}",
            self.a.literal_mod(n),
            self.b.literal_mod(n),
            self.c.literal_mod(n),
            self.d.literal_mod(n)
        )
    }

    /// Mobius form `(a z + b)/(c z + d)` with entries shown modulo `pi^n`.
    pub fn mobius(&self, n: i64) -> String {
        format!(
            "z -> (({})*z + ({})) / (({})*z + ({}))",
            self.a.literal_mod(n),
            self.b.literal_mod(n),
            self.c.literal_mod(n),
            self.d.literal_mod(n)
        )
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_literal_mod(6))
    }
}
