//! Laurent polynomials in `q` with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::int::Int;

/// Dense Laurent polynomial `sum_k coeffs[k] q^(low + k)`.
///
/// Normal form: no leading or trailing zero coefficients, and the zero
/// polynomial has an empty coefficient vector with `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<Int>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Int::one(), 0)
    }

    pub fn monomial(c: Int, e: i32) -> Self {
        Self::from_parts(e, vec![c])
    }

    /// `q + q^-1`, the value of a closed circle.
    pub fn delta() -> Self {
        Self::from_parts(-1, vec![Int::one(), Int::zero(), Int::one()])
    }

    /// Quantum integer `[m] = (q^m - q^-m) / (q - q^-1)`.
    pub fn quantum_int(m: i32) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let sign = if m < 0 { -1 } else { 1 };
        let a = m.abs();
        let mut p = Self::zero();
        let mut e = -(a - 1);
        while e < a {
            p = &p + &Self::monomial(Int::new(sign), e);
            e += 2;
        }
        p
    }

    pub fn from_parts(low: i32, coeffs: Vec<Int>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.normalize();
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Int)>>(terms: I) -> Self {
        let mut map: BTreeMap<i32, Int> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert_with(Int::zero);
            *slot += &c;
        }
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero();
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![Int::zero(); (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_parts(lo, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, e: i32) -> Int {
        let k = e - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            Int::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Int)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    pub fn to_map(&self) -> BTreeMap<i32, Int> {
        self.terms().map(|(e, c)| (e, c.clone())).collect()
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Substitute `q -> q^-1`.
    pub fn bar(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => {
                let mut c = self.coeffs.clone();
                c.reverse();
                Self::from_parts(-hi, c)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn leading_coeff(&self) -> Int {
        self.coeffs.last().cloned().unwrap_or_else(Int::zero)
    }

    pub fn trailing_coeff(&self) -> Int {
        self.coeffs.first().cloned().unwrap_or_else(Int::zero)
    }

    /// Gcd of all coefficients (nonnegative).
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide every coefficient by `c`, which must divide all of them.
    pub fn div_scalar_exact(&self, c: &Int) -> Self {
        Self::from_parts(self.low, self.coeffs.iter().map(|x| x.div_exact(c)).collect())
    }

    /// The same coefficients with lowest exponent moved to zero.
    pub fn as_poly(&self) -> Self {
        self.shift(-self.low)
    }

    /// Polynomial gcd of `self` and `other` over the integers, ignoring powers
    /// of `q`. The result has lowest exponent 0 and positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.as_poly().positive_lead();
        }
        if other.is_zero() {
            return self.as_poly().positive_lead();
        }
        let ca = self.content();
        let cb = other.content();
        let c = ca.gcd(&cb);
        let mut a = self.as_poly().div_scalar_exact(&ca);
        let mut b = other.as_poly().div_scalar_exact(&cb);
        if a.coeffs.len() < b.coeffs.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.coeffs.len() == 1 {
                a = LaurentPoly::one();
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() {
                r
            } else {
                let cr = r.content();
                r.as_poly().div_scalar_exact(&cr)
            };
        }
        a.as_poly().positive_lead().scale(&c)
    }

    fn positive_lead(self) -> Self {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self
        }
    }

    /// Pseudo remainder of polynomials with `low = 0`.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.coeffs.len();
        let lb = b.leading_coeff();
        let mut r = self.coeffs.clone();
        while r.len() >= db && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - db;
            for x in r.iter_mut() {
                *x = &*x * &lb;
            }
            for (k, bc) in b.coeffs.iter().enumerate() {
                let t = &lr * bc;
                r[k + shift] -= &t;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::from_parts(0, r)
    }

    /// Exact division by `other` when the quotient is a Laurent polynomial.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let shift = self.low - other.low;
        let mut r = self.as_poly().coeffs;
        let b = &other.coeffs;
        let lb = b.last().unwrap();
        if r.len() < b.len() {
            return None;
        }
        let mut quot = vec![Int::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let lr = r.last().unwrap().clone();
            let qc = lr.checked_div_exact(lb)?;
            let s = r.len() - b.len();
            for (k, bc) in b.iter().enumerate() {
                let t = &qc * bc;
                r[k + s] -= &t;
            }
            quot[s] = qc;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
            if r.len() < b.len() {
                return None;
            }
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_parts(shift, quot))
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let mut c = vec![Int::zero(); (hi - lo + 1) as usize];
        for (e, x) in self.terms() {
            c[(e - lo) as usize] += x;
        }
        for (e, x) in rhs.terms() {
            c[(e - lo) as usize] += x;
        }
        LaurentPoly::from_parts(lo, c)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut c = vec![Int::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        LaurentPoly::from_parts(self.low + rhs.low, c)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for LaurentPoly {
    /// Highest power first, e.g. `q^2+1+q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<(i32, &Int)> = self.terms().collect();
        for (k, (e, c)) in terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let mono = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Keys are emitted in numeric order rather than string order.
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms().count()))?;
        for (e, c) in self.terms() {
            m.serialize_entry(&e.to_string(), c)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map: BTreeMap<String, Int> = BTreeMap::deserialize(d)?;
        let mut terms = Vec::with_capacity(map.len());
        for (k, v) in map {
            let e: i32 = k.parse().map_err(serde::de::Error::custom)?;
            terms.push((e, v));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Int::new(c))))
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(LaurentPoly::quantum_int(1), LaurentPoly::one());
        assert_eq!(LaurentPoly::quantum_int(2), LaurentPoly::delta());
        assert_eq!(LaurentPoly::quantum_int(3), p(&[(-2, 1), (0, 1), (2, 1)]));
        // [2][2] = [3] + [1]
        let lhs = &LaurentPoly::quantum_int(2) * &LaurentPoly::quantum_int(2);
        let rhs = &LaurentPoly::quantum_int(3) + &LaurentPoly::one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_order() {
        assert_eq!(LaurentPoly::quantum_int(3).to_string(), "q^2+1+q^-2");
        assert_eq!(p(&[(1, -2), (0, 1)]).to_string(), "-2*q+1");
    }

    #[test]
    fn gcd_of_products() {
        let a = &LaurentPoly::quantum_int(2) * &p(&[(0, 1), (1, 1)]);
        let b = &LaurentPoly::quantum_int(2) * &p(&[(0, 1), (1, -1)]);
        let g = a.gcd(&b);
        assert_eq!(g, LaurentPoly::quantum_int(2).as_poly());
    }

    #[test]
    fn exact_division() {
        let a = &LaurentPoly::quantum_int(3) * &LaurentPoly::quantum_int(2);
        assert_eq!(a.div_exact(&LaurentPoly::quantum_int(2)).unwrap(), LaurentPoly::quantum_int(3));
        assert!(LaurentPoly::quantum_int(3).div_exact(&LaurentPoly::quantum_int(2)).is_none());
    }

    #[test]
    fn json_map_form() {
        let s = serde_json::to_string(&LaurentPoly::quantum_int(3)).unwrap();
        assert_eq!(s, r#"{"-2":1,"0":1,"2":1}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, LaurentPoly::quantum_int(3));
    }

    #[test]
    fn bar_reverses() {
        assert_eq!(p(&[(3, 2), (-1, 1)]).bar(), p(&[(-3, 2), (1, 1)]));
    }
}
