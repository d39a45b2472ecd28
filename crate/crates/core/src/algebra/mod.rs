//! Exact scalar, linear-form and polynomial arithmetic.

pub mod linalg;
pub mod linear;
pub mod parse;
pub mod poly;
pub mod scalar;

pub use linear::LinearForm;
pub use parse::{parse_polynomial, ParseError};
pub use poly::{monomial_count, monomials_of_degree, Monomial, Polynomial};
pub use scalar::{fmt_rational, int, parse_rational, rat, Rational, Scalar};

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..6, 1i64..4), 0..5).prop_map(move |ts| {
            Polynomial::from_terms(nvars, ts.into_iter().map(|(e, n, d)| (Monomial(e), Scalar::real(rat(n, d)))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn substitution_is_multiplicative(a in arb_poly(3), b in arb_poly(3), c0 in -3i64..4, c1 in -3i64..4) {
            let rep = Polynomial::from_linear(&LinearForm::from_ints(&[c0, c1, 0]));
            let lhs = (&a * &b).substitute(2, &rep);
            let rhs = &a.substitute(2, &rep) * &b.substitute(2, &rep);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_round_trip(a in arb_poly(3)) {
            prop_assert_eq!(parse_polynomial(&a.to_string(), 3).unwrap(), a);
        }
    }
}
