//! The Temperley-Lieb algebra `TL_n` over `Q(q)` with loop value `q + q^-1`,
//! and Jones-Wenzl projectors.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::{LaurentPoly, LaurentRational};
use crate::error::{Error, Result};

/// A planar pairing of `2n` points: bottom `0..n` then top `n..2n`, both left to right.
pub type TLMatching = Vec<u8>;

/// Largest projector built by default.
pub const JW_MAX: usize = 8;

/// A linear combination of crossingless `(n, n)` matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLElement {
    pub n: usize,
    pub terms: BTreeMap<TLMatching, LaurentRational>,
}

/// Stack `b` on top of `a`; returns the matching and the number of closed loops.
pub fn compose_matchings(n: usize, a: &[u8], b: &[u8]) -> (TLMatching, usize) {
    let mut out = vec![0u8; 2 * n];
    let mut seen = vec![false; n];
    // Walk from an outer point through the middle until leaving again.
    let walk = |start_in_a: bool, mut p: usize, seen: &mut Vec<bool>| -> usize {
        let mut in_a = start_in_a;
        loop {
            if in_a {
                let y = a[p] as usize;
                if y < n {
                    return y;
                }
                seen[y - n] = true;
                in_a = false;
                p = y - n;
            } else {
                let z = b[p] as usize;
                if z >= n {
                    return z;
                }
                seen[z] = true;
                in_a = true;
                p = n + z;
            }
        }
    };
    for x in 0..n {
        out[x] = walk(true, x, &mut seen) as u8;
        out[n + x] = walk(false, n + x, &mut seen) as u8;
    }
    let mut loops = 0;
    for m in 0..n {
        if seen[m] {
            continue;
        }
        loops += 1;
        let mut p = m;
        loop {
            seen[p] = true;
            let z = b[p] as usize;
            seen[z] = true;
            p = a[n + z] as usize - n;
            if p == m {
                break;
            }
        }
    }
    (out, loops)
}

fn lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = a.gcd(b);
    (a * b).div_exact(&g).expect("gcd divides the product")
}

impl TLElement {
    pub fn zero(n: usize) -> Self {
        TLElement { n, terms: BTreeMap::new() }
    }

    pub fn identity_matching(n: usize) -> TLMatching {
        (0..2 * n).map(|x| if x < n { (x + n) as u8 } else { (x - n) as u8 }).collect()
    }

    pub fn identity(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.terms.insert(Self::identity_matching(n), LaurentRational::one());
        e
    }

    /// The turnback `e_i` (1-based) joining strands `i` and `i + 1` at the top and bottom.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i < 1 || i >= n {
            return Err(Error::input(format!("e_{i} does not exist in TL_{n}")));
        }
        let mut m = Self::identity_matching(n);
        let (l, r) = (i - 1, i);
        m[l] = r as u8;
        m[r] = l as u8;
        m[n + l] = (n + r) as u8;
        m[n + r] = (n + l) as u8;
        let mut e = Self::zero(n);
        e.terms.insert(m, LaurentRational::one());
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u8]) -> LaurentRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn identity_coeff(&self) -> LaurentRational {
        self.coeff(&Self::identity_matching(self.n))
    }

    fn add_term(&mut self, m: TLMatching, c: LaurentRational) {
        let e = self.terms.entry(m.clone()).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &TLElement) -> Result<TLElement> {
        if self.n != other.n {
            return Err(Error::Width(format!("TL_{} plus TL_{}", self.n, other.n)));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentRational) -> TLElement {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        TLElement { n: self.n, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Common denominator and numerators over it.
    pub fn over_common_denominator(&self) -> (LaurentPoly, Vec<(TLMatching, LaurentPoly)>) {
        let mut den = LaurentPoly::one();
        for c in self.terms.values() {
            if !c.den().is_one() {
                den = lcm(&den, c.den());
            }
        }
        let nums = self
            .terms
            .iter()
            .map(|(m, c)| {
                let f = den.div_exact(c.den()).expect("lcm is a multiple");
                (m.clone(), c.num() * &f)
            })
            .collect();
        (den, nums)
    }

    /// Add a strand on the right.
    pub fn tensor_id(&self) -> TLElement {
        let n = self.n;
        let lift = |x: u8| {
            let x = x as usize;
            if x < n {
                x
            } else {
                x + 1
            }
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = vec![0u8; 2 * n + 2];
                for x in 0..2 * n {
                    out[lift(x as u8)] = lift(m[x]) as u8;
                }
                out[n] = (2 * n + 1) as u8;
                out[2 * n + 1] = n as u8;
                (out, c.clone())
            })
            .collect();
        TLElement { n: n + 1, terms }
    }
}

/// `a` below `b`, loops closing to `q + q^-1`.
pub fn tl_multiply(a: &TLElement, b: &TLElement) -> Result<TLElement> {
    if a.n != b.n {
        return Err(Error::Width(format!("TL_{} times TL_{}", a.n, b.n)));
    }
    let n = a.n;
    let (da, na) = a.over_common_denominator();
    let (db, nb) = b.over_common_denominator();
    let delta = LaurentPoly::delta();
    let mut powers = vec![LaurentPoly::one()];
    let mut acc: BTreeMap<TLMatching, LaurentPoly> = BTreeMap::new();
    for (ma, pa) in &na {
        for (mb, pb) in &nb {
            let (m, loops) = compose_matchings(n, ma, mb);
            while powers.len() <= loops {
                let next = powers.last().unwrap() * &delta;
                powers.push(next);
            }
            let t = &(pa * pb) * &powers[loops];
            let e = acc.entry(m).or_insert_with(LaurentPoly::zero);
            *e = &*e + &t;
        }
    }
    let den = &da * &db;
    let mut out = TLElement::zero(n);
    for (m, p) in acc {
        if !p.is_zero() {
            out.terms.insert(m, LaurentRational::new(p, den.clone())?);
        }
    }
    Ok(out)
}

fn qint(m: i32) -> LaurentRational {
    LaurentRational::from_poly(LaurentPoly::quantum_int(m))
}

type Cache = RwLock<Vec<Arc<TLElement>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(vec![Arc::new(TLElement::identity(1))]))
}

/// `P_n` by the Wenzl recursion
/// `P_{m+1} = P_m (x) 1 - [m]/[m+1] (P_m (x) 1) e_m (P_m (x) 1)`, memoized.
pub fn jones_wenzl(n: usize) -> Result<Arc<TLElement>> {
    jones_wenzl_capped(n, JW_MAX)
}

pub fn jones_wenzl_capped(n: usize, cap: usize) -> Result<Arc<TLElement>> {
    if n == 0 {
        return Err(Error::input("projectors start at P_1"));
    }
    if n > cap {
        return Err(Error::Resource(format!("P_{n} exceeds the projector cap {cap}")));
    }
    if let Some(p) = cache().read().unwrap().get(n - 1) {
        return Ok(p.clone());
    }
    let mut w = cache().write().unwrap();
    while w.len() < n {
        let m = w.len();
        let lifted = w[m - 1].tensor_id();
        let left = tl_multiply(&lifted, &TLElement::generator(m + 1, m)?)?;
        let mid = tl_multiply(&left, &lifted)?;
        let c = (&qint(m as i32) / &qint(m as i32 + 1))?;
        let next = lifted.add(&mid.scale(&-c))?;
        w.push(Arc::new(next));
    }
    Ok(w[n - 1].clone())
}

/// Whether `P e_i = e_i P = 0` for every `i` and the identity coefficient is 1.
pub fn check_axioms(p: &TLElement) -> Result<bool> {
    if !p.identity_coeff().is_one() {
        return Ok(false);
    }
    for i in 1..p.n {
        let e = TLElement::generator(p.n, i)?;
        if !tl_multiply(p, &e)?.is_zero() || !tl_multiply(&e, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed trace of an element: join every top point to the bottom point below it.
pub fn trace(e: &TLElement) -> LaurentRational {
    let n = e.n;
    let mut acc = LaurentRational::zero();
    for (m, c) in &e.terms {
        let k = closure_loops(n, m);
        let v = LaurentRational::from_poly(LaurentPoly::delta().pow(k as u32));
        acc = &acc + &(c * &v);
    }
    acc
}

/// Loops in the trace closure of a matching.
pub fn closure_loops(n: usize, m: &[u8]) -> usize {
    // Point x on the bottom is glued to point n + x on the top.
    let glue = |x: usize| if x < n { x + n } else { x - n };
    let mut seen = vec![false; 2 * n];
    let mut loops = 0;
    for s in 0..2 * n {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut x = s;
        loop {
            seen[x] = true;
            let y = m[x] as usize;
            seen[y] = true;
            x = glue(y);
            if x == s {
                break;
            }
        }
    }
    loops
}

/// `q`-integer as an exact rational, exported for oracles.
pub fn quantum_integer(m: i32) -> LaurentRational {
    qint(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> LaurentRational {
        LaurentRational::from_poly(LaurentPoly::delta())
    }

    #[test]
    fn generator_relations() {
        let e1 = TLElement::generator(2, 1).unwrap();
        assert_eq!(tl_multiply(&e1, &e1).unwrap(), e1.scale(&delta()));
        let a = TLElement::generator(3, 1).unwrap();
        let b = TLElement::generator(3, 2).unwrap();
        let aba = tl_multiply(&tl_multiply(&a, &b).unwrap(), &a).unwrap();
        assert_eq!(aba, a);
        let id = TLElement::identity(3);
        assert_eq!(tl_multiply(&id, &b).unwrap(), b);
        assert!(tl_multiply(&id, &TLElement::identity(2)).is_err());
    }

    #[test]
    fn p2_solves_the_axioms() {
        // Oracle: P2 = I + x e1 with e1 P2 = e1 + x delta e1 = 0, so x = -1/delta.
        let p2 = jones_wenzl(2).unwrap();
        let x = (&LaurentRational::from_int(-1) / &delta()).unwrap();
        let expected = TLElement::identity(2).add(&TLElement::generator(2, 1).unwrap().scale(&x)).unwrap();
        assert_eq!(*p2, expected);
    }

    #[test]
    fn axioms_and_idempotency() {
        for n in 1..=4 {
            let p = jones_wenzl(n).unwrap();
            assert!(check_axioms(&p).unwrap(), "P_{n}");
            assert_eq!(tl_multiply(&p, &p).unwrap(), *p);
        }
    }

    #[test]
    fn traces_are_quantum_integers() {
        for n in 1..=4 {
            assert_eq!(trace(&jones_wenzl(n).unwrap()), qint(n as i32 + 1));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(jones_wenzl_capped(3, 2), Err(Error::Resource(_))));
        assert_eq!(jones_wenzl(3).unwrap().terms.len(), 5);
    }
}
