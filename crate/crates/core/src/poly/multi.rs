use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var};
use crate::error::{Error, Result};

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn var(name: impl Into<Var>) -> Self {
        MultiPoly::term(1, Monomial::var(name, 1))
    }

    pub fn monomial(m: Monomial) -> Self {
        MultiPoly::term(1, m)
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// The single monomial of a one-term polynomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        self.as_monomial()
            .filter(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// gcd of all coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every coefficient by `c`, failing if any division is inexact.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Option<MultiPoly> {
        if c.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (m, k) in &self.terms {
            let (q, r) = k.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(MultiPoly { terms })
    }

    /// Per-variable minimum exponent over all terms.
    fn min_exponents(&self) -> Monomial {
        let mut mins: HashMap<Var, i32> = HashMap::new();
        let vars = self.variables();
        for v in &vars {
            let lo = self.terms.keys().map(|m| m.exponent(v)).min().unwrap_or(0);
            mins.insert(v.clone(), lo);
        }
        Monomial::from_pairs(mins)
    }

    /// Exact division in the Laurent ring. Returns `None` when `divisor` does
    /// not divide `self` with integer coefficients.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        if let Some((m, c)) = divisor.as_monomial() {
            return self.mul_monomial(&m.inverse()).div_scalar_exact(c);
        }
        // Shift both operands to ordinary polynomials without monomial content.
        let shift_n = self.min_exponents().inverse();
        let shift_d = divisor.min_exponents().inverse();
        let num = self.mul_monomial(&shift_n);
        let den = divisor.mul_monomial(&shift_d);
        let (lm_d, lc_d) = den.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = num;
        let mut quot = MultiPoly::zero();
        while let Some((lm_r, lc_r)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm_d.divides(&lm_r) {
                return None;
            }
            let (q, r) = lc_r.div_rem(&lc_d);
            if !r.is_zero() {
                return None;
            }
            let qm = lm_r.mul(&lm_d.inverse());
            rem -= &den.mul_monomial(&qm).scale(&q);
            quot.add_term(qm, q);
        }
        // self/divisor = (num/den) * shift_d / shift_n
        Some(quot.mul_monomial(&shift_d.mul(&shift_n.inverse())))
    }

    /// Substitutes polynomials for variables. A variable occurring with a
    /// negative exponent may only be bound to a monomial (a unit).
    pub fn substitute(&self, bindings: &BTreeMap<Var, MultiPoly>) -> Result<MultiPoly> {
        let mut inverses: HashMap<Var, MultiPoly> = HashMap::new();
        for (v, p) in bindings {
            if let Some((m, c)) = p.as_monomial() {
                if c.is_one() {
                    inverses.insert(v.clone(), MultiPoly::monomial(m.inverse()));
                } else if (-c).is_one() {
                    inverses.insert(v.clone(), MultiPoly::term(-1, m.inverse()));
                }
            }
        }
        let mut cache: HashMap<(Var, i32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut acc = MultiPoly::constant(c.clone());
            for (v, e) in m.exponents() {
                match bindings.get(v) {
                    None => rest.push((v.clone(), *e)),
                    Some(p) => {
                        let key = (v.clone(), *e);
                        if !cache.contains_key(&key) {
                            let power = if *e >= 0 {
                                p.pow(*e as u32)
                            } else {
                                let inv = inverses.get(v).ok_or_else(|| {
                                    Error::NotPolynomial(format!(
                                        "negative power of {v} bound to a non-unit"
                                    ))
                                })?;
                                inv.pow((-*e) as u32)
                            };
                            cache.insert(key.clone(), power);
                        }
                        acc = &acc * &cache[&key];
                    }
                }
            }
            out += &acc.mul_monomial(&Monomial::from_pairs(rest));
        }
        Ok(out)
    }

    /// Replaces one variable by a polynomial.
    pub fn substitute_var(&self, v: impl Into<Var>, p: &MultiPoly) -> Result<MultiPoly> {
        let mut b = BTreeMap::new();
        b.insert(v.into(), p.clone());
        self.substitute(&b)
    }

    /// Collapses every positive power of the idempotent variables `d` and `δ`.
    pub fn d_reduce(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let m2 = m.map_exponents(|v, e| {
                if (v.as_str() == "d" || v.as_str() == "δ") && e > 0 {
                    1
                } else {
                    e
                }
            });
            (m2, c.clone())
        }))
    }

    /// Exact rational evaluation. Unbound variables are an error.
    pub fn evaluate(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, e) in m.exponents() {
                let x = point
                    .get(v)
                    .ok_or_else(|| Error::Parse(format!("no value for variable {v}")))?;
                if *e < 0 && x.is_zero() {
                    return Err(Error::DivisionByZero(format!("{v} = 0 with exponent {e}")));
                }
                t *= num_traits::pow::Pow::pow(x, *e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Groups terms by the exponent of `v`.
    pub fn collect_by(&self, v: &Var) -> BTreeMap<i32, MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    pub fn degree_in(&self, v: &Var) -> (i32, i32) {
        let mut lo = 0;
        let mut hi = 0;
        for m in self.terms.keys() {
            let e = m.exponent(v);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.exponents().iter().all(|(_, e)| *e >= 0))
    }

    /// Canonical text form: terms in descending graded-lex order.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = &p("a + b") * &p("a - b");
        assert_eq!(r, p("a^2 - b^2"));
        assert_eq!(r.to_string(), "a^2 - b^2");
    }

    #[test]
    fn adding_zero() {
        let q = p("3*a*b^-1 + 2");
        assert_eq!(&q + &MultiPoly::zero(), q);
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn canonical_rendering() {
        let z = p("a*c*x_e + a^2*c^2");
        assert_eq!(z.canonical_string(), "a^2*c^2 + a*c*x_e");
        assert_eq!(p("-2*a + 1").to_string(), "-2*a + 1");
    }

    #[test]
    fn d_reduction() {
        assert_eq!(p("d^3").d_reduce(), p("d"));
        assert_eq!(p("a*d^2 + a*d").d_reduce(), p("2*a*d"));
        assert_eq!(p("a + 3").d_reduce(), p("a + 3"));
        assert_eq!(p("δ^2*α + δ").d_reduce(), p("δ*α + δ"));
    }

    #[test]
    fn evaluation() {
        let mut pt = BTreeMap::new();
        pt.insert(Var::new("a"), BigRational::from_integer(1.into()));
        pt.insert(Var::new("b"), BigRational::from_integer(1.into()));
        assert_eq!(
            p("a + 2*b").evaluate(&pt).unwrap(),
            BigRational::from_integer(3.into())
        );
        pt.insert(Var::new("a"), BigRational::zero());
        assert!(matches!(
            p("a^-1").evaluate(&pt),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn exact_division() {
        let f = p("a^2 + 3*a*b + 2*b^2");
        assert_eq!(f.div_exact(&p("a + b")).unwrap(), p("a + 2*b"));
        assert!(f.div_exact(&p("a + 3*b")).is_none());
        let g = p("a^-1*c + a^-2*c^2");
        assert_eq!(g.div_exact(&p("a + c")).unwrap(), p("a^-2*c"));
        assert_eq!(p("2*a^3").div_exact(&p("2*a")).unwrap(), p("a^2"));
    }

    #[test]
    fn substitution_with_units() {
        let z = p("a^2*c^2 + a*c*x");
        let mut b = BTreeMap::new();
        b.insert(Var::new("c"), p("g^-1"));
        b.insert(Var::new("a"), p("α*g^2 - g^2"));
        let r = z.substitute(&b).unwrap();
        assert_eq!(r, p("α^2*g^2 - 2*α*g^2 + g^2 + α*g*x - g*x"));
        assert!(p("a^-1").substitute_var("a", &p("a + 1")).is_err());
    }
}
