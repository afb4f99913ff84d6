//! Bounded-precision arithmetic in finite extensions of Q_p.

mod element;
mod field;
mod literal;
mod residue;
mod roots;

pub use element::PAdic;
pub use field::FieldSpec;
pub use residue::ResidueField;
pub use roots::{multiplicative_order, NonSquare, SquareRoot};


#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn q(p: u64) -> FieldSpec {
        FieldSpec::new(p, 1, 1, 64).unwrap()
    }

    #[test]
    fn field_construction() {
        let k = FieldSpec::new(2, 2, 1, 64).unwrap();
        assert_eq!(k.q(), 4);
        assert_eq!(k.degree(), 2);
        let r = FieldSpec::new(3, 1, 2, 64).unwrap();
        assert_eq!(r.from_int(3).valuation().unwrap(), Some(2));
        assert!(FieldSpec::new(6, 1, 1, 64).is_err());
        assert!(FieldSpec::new(3, 1, 1, 3).is_err());
    }

    #[test]
    fn basic_arithmetic() {
        let k = q(3);
        let two_pi = &k.pi() + &k.pi();
        assert_eq!(two_pi.valuation().unwrap(), Some(1));
        assert_eq!(two_pi.digits(1, 2).unwrap(), vec![2]);
        let z = &k.one() - &k.one();
        assert!(z.is_exact_zero());
        assert_eq!(z.valuation().unwrap(), None);

        let k2 = q(2);
        let d = &k2.from_int(-1) - &k2.one();
        assert_eq!(d.valuation().unwrap(), Some(1));
    }

    #[test]
    fn cancellation_reports_precision() {
        let k = q(5);
        let a = k.parse("1 + O(pi^10)").unwrap();
        let z = &a - &k.one();
        assert!(z.is_zero() && !z.is_exact_zero());
        assert!(matches!(z.valuation(), Err(Error::PrecisionExhausted(_))));
        assert!(matches!(k.one().try_div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn division_and_inverse() {
        let k = q(7);
        let a = k.from_int(3);
        let inv = a.try_inv().unwrap();
        assert!((&(&a * &inv) - &k.one()).is_zero());
        let r = FieldSpec::new(2, 2, 2, 40).unwrap();
        let x = r.parse("(1 + x*pi) / (x + pi^3)").unwrap();
        let back = &x * &r.parse("x + pi^3").unwrap();
        assert!(back.eq_at_precision(&r.parse("1 + x*pi").unwrap()));
    }

    #[test]
    fn roots_of_unity() {
        assert!(q(2).root_of_unity(1).unwrap().eq_at_precision(&q(2).one()));
        let m1 = q(3).root_of_unity(2).unwrap();
        assert!(m1.pow(2).unwrap().eq_at_precision(&q(3).one()));
        assert!(!m1.eq_at_precision(&q(3).one()));
        let k = FieldSpec::new(2, 2, 1, 64).unwrap();
        let z = k.root_of_unity(3).unwrap();
        assert!(z.pow(3).unwrap().eq_at_precision(&k.one()));
        assert!(!z.eq_at_precision(&k.one()));
        assert_eq!(z.abs_precision(), Some(64));
        match q(2).root_of_unity(3) {
            Err(Error::NoRootOfUnity { n: 3, suggested_f: Some(2) }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(q(2).root_of_unity(4), Err(Error::NoRootOfUnity { suggested_f: None, .. })));
        let z4 = q(5).root_of_unity(4).unwrap();
        assert!(!z4.pow(2).unwrap().eq_at_precision(&q(5).one()));
    }

    #[test]
    fn square_roots() {
        let k = q(3);
        let one = k.one().sqrt().unwrap().root().unwrap();
        assert!(one.is_exact() && one.eq_at_precision(&k.one()));
        let two = k.from_int(4).sqrt().unwrap().root().unwrap();
        assert!(two.eq_at_precision(&k.from_int(2)));
        assert!(matches!(k.pi().sqrt().unwrap(), SquareRoot::NonSquare(NonSquare::OddValuation(1))));
        assert!(matches!(k.from_int(2).sqrt().unwrap(), SquareRoot::NonSquare(NonSquare::NonResidue(2))));
        let k2 = q(2);
        assert!(k2.from_int(3).sqrt().unwrap().root().is_none());
        assert!(k2.from_int(5).sqrt().unwrap().root().is_none());
        let s = k2.from_int(17).sqrt().unwrap().root().unwrap();
        assert!((&s * &s).eq_at_precision(&k2.from_int(17)));
        let m7 = k2.from_int(-7).sqrt().unwrap().root().unwrap();
        assert!((&m7 * &m7).eq_at_precision(&k2.from_int(-7)));
    }

    #[test]
    fn literal_round_trip() {
        let k = FieldSpec::new(3, 2, 1, 12).unwrap();
        let a = k.parse("(1 + x) / (2 - pi) + O(pi^8)").unwrap();
        let printed = a.to_literal();
        let back = k.parse(&printed).unwrap();
        assert!(a.eq_at_precision(&back));
        assert_eq!(back.to_literal(), printed);
        assert_eq!(k.parse("2*pi + pi").unwrap().to_literal(), "pi^2");
        assert_eq!(q(5).parse("1 + 4*pi + O(pi^6)").unwrap().to_literal(), "1 + 4*pi + O(pi^6)");
    }
}
