//! Rational functions in `q`, stored as a reduced quotient of Laurent polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::int::Int;
use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// `num / den` in lowest terms.
///
/// Normal form: the denominator has lowest exponent 0 (powers of `q` live in
/// the numerator), positive leading coefficient, and no common polynomial or
/// content factor with the numerator. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentRational {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentRational {
    pub fn zero() -> Self {
        LaurentRational { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        LaurentRational { num: p, den: LaurentPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(Int::new(c), 0))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.min_exp().unwrap();
        let mut num = num.shift(-shift);
        let mut den = den.shift(-shift);
        if den.max_exp() != Some(0) {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        } else {
            // Constant denominator: only the content can cancel.
            let c = den.trailing_coeff();
            let g = num.content().gcd(&c);
            if !g.is_one() {
                num = num.div_scalar_exact(&g);
                den = den.div_scalar_exact(&g);
            }
        }
        if den.leading_coeff().is_negative() {
            num = -num;
            den = -den;
        }
        // Keep the denominator's lowest exponent at 0 after cancellation.
        let s = den.min_exp().unwrap();
        LaurentRational { num: num.shift(-s), den: den.shift(-s) }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The polynomial value when the denominator is a unit.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else if self.den == -LaurentPoly::one() {
            Some(-self.num.clone())
        } else {
            None
        }
    }

    pub fn shift(&self, e: i32) -> Self {
        LaurentRational { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Substitute `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self::reduce(self.num.bar(), self.den.bar())
    }

    /// Laurent expansion around `q = 0`: coefficients of `q^e` for `e` in
    /// `[lo, lo + terms)` where `lo` is the lowest exponent of the series.
    pub fn series_low(&self, terms: usize) -> Result<(i32, Vec<Int>)> {
        if self.is_zero() {
            return Ok((0, vec![Int::zero(); terms]));
        }
        let d0 = self.den.trailing_coeff();
        if !d0.is_unit() {
            return Err(Error::Arithmetic(format!(
                "series over Z needs a unit constant term, got {d0}"
            )));
        }
        let lo = self.num.min_exp().unwrap() - self.den.min_exp().unwrap();
        let n: Vec<Int> = (0..terms as i32).map(|k| self.num.coeff(self.num.min_exp().unwrap() + k)).collect();
        let d: Vec<Int> = (0..terms as i32).map(|k| self.den.coeff(self.den.min_exp().unwrap() + k)).collect();
        let mut out: Vec<Int> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = n[k].clone();
            for i in 1..=k {
                if !d[i].is_zero() {
                    acc -= &(&d[i] * &out[k - i]);
                }
            }
            out.push(&acc * &d0);
        }
        Ok((lo, out))
    }

    /// Laurent expansion around `q = infinity`: coefficients of `q^e` for `e`
    /// descending from the highest exponent `hi`, returned as `(hi, coeffs)`.
    pub fn series_high(&self, terms: usize) -> Result<(i32, Vec<Int>)> {
        let (lo, c) = self.bar().series_low(terms)?;
        Ok((-lo, c))
    }
}

impl Default for LaurentRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for LaurentRational {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl<'a> Add<&'a LaurentRational> for &'a LaurentRational {
    type Output = LaurentRational;
    fn add(self, rhs: &LaurentRational) -> LaurentRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return LaurentRational::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        LaurentRational::reduce(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a LaurentRational> for &'a LaurentRational {
    type Output = LaurentRational;
    fn sub(self, rhs: &LaurentRational) -> LaurentRational {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a LaurentRational> for &'a LaurentRational {
    type Output = LaurentRational;
    fn mul(self, rhs: &LaurentRational) -> LaurentRational {
        if self.is_zero() || rhs.is_zero() {
            return LaurentRational::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return LaurentRational::from_poly(&self.num * &rhs.num);
        }
        LaurentRational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a LaurentRational> for &'a LaurentRational {
    type Output = Result<LaurentRational>;
    fn div(self, rhs: &LaurentRational) -> Result<LaurentRational> {
        Ok(self * &rhs.inverse()?)
    }
}

impl Add for LaurentRational {
    type Output = LaurentRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for LaurentRational {
    type Output = LaurentRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for LaurentRational {
    type Output = LaurentRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for LaurentRational {
    type Output = LaurentRational;
    fn neg(self) -> Self {
        LaurentRational { num: -self.num, den: self.den }
    }
}

impl fmt::Display for LaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for LaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(m: i32) -> LaurentRational {
        LaurentPoly::quantum_int(m).into()
    }

    #[test]
    fn reduces_common_factors() {
        let a = &qi(2) * &qi(3);
        let r = LaurentRational::new(a.num().clone(), LaurentPoly::quantum_int(2)).unwrap();
        assert_eq!(r, qi(3));
        assert!(r.den().is_one());
    }

    #[test]
    fn field_identities() {
        let x = LaurentRational::new(LaurentPoly::quantum_int(3), LaurentPoly::quantum_int(2)).unwrap();
        let y = LaurentRational::new(LaurentPoly::one(), LaurentPoly::quantum_int(4)).unwrap();
        let lhs = &(&x + &y) * &x;
        let rhs = &(&x * &x) + &(&y * &x);
        assert_eq!(lhs, rhs);
        assert!((&x - &x).is_zero());
        assert_eq!((&x / &x).unwrap(), LaurentRational::one());
    }

    #[test]
    fn series_of_inverse_delta() {
        // 1/(q + q^-1) = q - q^3 + q^5 - ...
        let r = LaurentRational::one().mul(qi(2).inverse().unwrap());
        let (lo, c) = r.series_low(4).unwrap();
        assert_eq!(lo, 1);
        let v: Vec<i64> = c.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, 0, -1, 0]);
        let (hi, c) = r.series_high(3).unwrap();
        assert_eq!(hi, -1);
        let v: Vec<i64> = c.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, 0, -1]);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(LaurentRational::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }
}
