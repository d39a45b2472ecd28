//! Linear forms with rational coefficients.
//!
//! The same type stands for weights in the dual of the torus Lie algebra,
//! for test vectors in the Lie algebra itself, and for moment-map points; the
//! pairing between the two sides is the coordinate dot product.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{fmt_rational, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        LinearForm { coeffs: vec![Rational::zero(); dim] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        LinearForm { coeffs: v.iter().map(|&c| int(c)).collect() }
    }

    /// The `i`-th coordinate functional.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut f = LinearForm::zero(dim);
        f.coeffs[i] = Rational::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coordinate dot product.
    pub fn pair(&self, other: &LinearForm) -> Rational {
        self.pair_slice(&other.coeffs)
    }

    pub fn pair_slice(&self, v: &[Rational]) -> Rational {
        debug_assert_eq!(self.coeffs.len(), v.len());
        self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        LinearForm { coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates; `None` if some coordinate is fractional or huge.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.numer().to_i64() } else { None })
            .collect()
    }

    /// Index of the first non-zero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Returns `(s, f)` with `self = s * f` and the leading coefficient of `f` equal to one.
    pub fn normalize(&self) -> Option<(Rational, LinearForm)> {
        let i = self.leading_index()?;
        let s = self.coeffs[i].clone();
        let inv = s.recip();
        Some((s, self.scale(&inv)))
    }

    /// Smallest positive integer multiple with coprime integer entries.
    pub fn primitive(&self) -> Option<LinearForm> {
        if self.is_zero() {
            return None;
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Some(LinearForm { coeffs: ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect() })
    }

    /// True if `self = c * other` for some rational `c` (either sign).
    pub fn is_parallel(&self, other: &LinearForm) -> bool {
        match (self.normalize(), other.normalize()) {
            (Some((_, a)), Some((_, b))) => a == b,
            _ => false,
        }
    }

    /// The rational `c` with `self = c * other`, if any.
    pub fn ratio_to(&self, other: &LinearForm) -> Option<Rational> {
        let i = other.leading_index()?;
        let c = &self.coeffs[i] / &other.coeffs[i];
        if other.scale(&c) == *self {
            Some(c)
        } else {
            None
        }
    }

    pub fn max_abs(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl Index<usize> for LinearForm {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }
}

impl<'a> Add<&'a LinearForm> for &'a LinearForm {
    type Output = LinearForm;
    fn add(self, o: &LinearForm) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a LinearForm> for &'a LinearForm {
    type Output = LinearForm;
    fn sub(self, o: &LinearForm) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        -&self
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    #[test]
    fn normalization_and_parallelism() {
        let a = LinearForm::from_ints(&[0, -2, 4]);
        let (s, n) = a.normalize().unwrap();
        assert_eq!(s, int(-2));
        assert_eq!(n, LinearForm::from_ints(&[0, 1, -2]));
        assert!(a.is_parallel(&LinearForm::from_ints(&[0, 1, -2])));
        assert_eq!(a.ratio_to(&n), Some(int(-2)));
        assert!(LinearForm::zero(3).normalize().is_none());
    }

    #[test]
    fn primitive_vector() {
        let v = LinearForm::new(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(v.primitive().unwrap(), LinearForm::from_ints(&[2, -3]));
    }
}
