use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, Var};
use crate::error::{Error, Result};

/// Quotient of two Laurent polynomials.
///
/// Kept normalized up to units: the denominator's leading monomial is 1, its
/// leading coefficient is positive, and the integer content shared by
/// numerator and denominator is removed. No polynomial gcd is taken, so two
/// equal functions may have different representations; `==` compares by
/// cross-multiplication.
#[derive(Clone)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFn { num, den }.normalized())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFn {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn zero() -> Self {
        RationalFn::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        RationalFn::from_poly(MultiPoly::one())
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = MultiPoly::one();
            return self;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RationalFn::from_poly(q);
        }
        if let Some((lm, _)) = self.den.leading_term() {
            let unit = lm.inverse();
            self.num = self.num.mul_monomial(&unit);
            self.den = self.den.mul_monomial(&unit);
        }
        let g = self.num.content().gcd(&self.den.content());
        if !g.is_zero() && !g.is_one() {
            self.num = self.num.div_scalar_exact(&g).expect("content divides");
            self.den = self.den.div_scalar_exact(&g).expect("content divides");
        }
        if self.den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            self.num = -self.num;
            self.den = -self.den;
        }
        self
    }

    /// The polynomial this function equals, if the denominator divides exactly.
    pub fn to_poly(&self) -> Result<MultiPoly> {
        self.num.div_exact(&self.den).ok_or_else(|| {
            Error::NotPolynomial(format!("({}) / ({}) is not a polynomial", self.num, self.den))
        })
    }

    pub fn recip(&self) -> Result<Self> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        if n >= 0 {
            Ok(RationalFn {
                num: self.num.pow(n as u32),
                den: self.den.pow(n as u32),
            }
            .normalized())
        } else {
            self.recip()?.pow(-n)
        }
    }

    pub fn checked_div(&self, other: &RationalFn) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RationalFn::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Simultaneous substitution of rational functions for variables.
    ///
    /// Works over a single common denominator: for a variable bound to N/D
    /// with exponents ranging over [lo, hi] (lo ≤ 0 ≤ hi), each term x^k is
    /// rewritten as N^(k-lo) D^(hi-k) over N^(-lo) D^hi.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RationalFn>) -> Result<RationalFn> {
        let n = substitute_poly(&self.num, bindings)?;
        let d = substitute_poly(&self.den, bindings)?;
        n.checked_div(&d)
    }

    pub fn evaluate(
        &self,
        point: &BTreeMap<Var, num_rational::BigRational>,
    ) -> Result<num_rational::BigRational> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero("denominator vanishes at point".into()));
        }
        Ok(self.num.evaluate(point)? / d)
    }
}

pub fn substitute_poly(p: &MultiPoly, bindings: &BTreeMap<Var, RationalFn>) -> Result<RationalFn> {
    let relevant: Vec<(&Var, &RationalFn, i32, i32)> = bindings
        .iter()
        .filter_map(|(v, r)| {
            let (lo, hi) = p.degree_in(v);
            (lo != 0 || hi != 0).then_some((v, r, lo, hi))
        })
        .collect();
    for (v, r, lo, _) in &relevant {
        if *lo < 0 && r.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "{v} bound to 0 appears with a negative power"
            )));
        }
    }
    let mut total = MultiPoly::zero();
    let mut num_pows: BTreeMap<(usize, i32), MultiPoly> = BTreeMap::new();
    let mut den_pows: BTreeMap<(usize, i32), MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut acc = MultiPoly::constant(c.clone());
        let mut rest = m.clone();
        for (i, (v, r, lo, hi)) in relevant.iter().enumerate() {
            let (k, others) = rest.split_off(v);
            rest = others;
            let a = k - lo;
            let b = hi - k;
            let np = num_pows
                .entry((i, a))
                .or_insert_with(|| r.num.pow(a as u32));
            acc = &acc * np;
            let dp = den_pows
                .entry((i, b))
                .or_insert_with(|| r.den.pow(b as u32));
            acc = &acc * dp;
        }
        total += &acc.mul_monomial(&rest);
    }
    let mut denom = MultiPoly::one();
    for (_, r, lo, hi) in &relevant {
        denom = &denom * &r.den.pow(*hi as u32);
        denom = &denom * &r.num.pow((-*lo) as u32);
    }
    RationalFn::new(total, denom)
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<MultiPoly> for RationalFn {
    fn from(p: MultiPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &'a RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        RationalFn {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &'a RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &'a RationalFn) -> RationalFn {
        RationalFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

/// Panics on division by the zero function; use [`RationalFn::checked_div`]
/// when the divisor may vanish.
impl<'a> Div<&'a RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &'a RationalFn) -> RationalFn {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: RationalFn) -> RationalFn {
        &self + &rhs
    }
}

impl Sub for RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: RationalFn) -> RationalFn {
        &self - &rhs
    }
}

impl Mul for RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: RationalFn) -> RationalFn {
        &self * &rhs
    }
}

/// Solves the 2×2 system `m00 x + m01 y = r0`, `m10 x + m11 y = r1` by
/// Cramer's rule.
pub fn solve_2x2(
    m: [[&RationalFn; 2]; 2],
    rhs: [&RationalFn; 2],
) -> Result<(RationalFn, RationalFn)> {
    let det = &(m[0][0] * m[1][1]) - &(m[0][1] * m[1][0]);
    if det.is_zero() {
        return Err(Error::SingularSystem);
    }
    let x = &(rhs[0] * m[1][1]) - &(m[0][1] * rhs[1]);
    let y = &(m[0][0] * rhs[1]) - &(rhs[0] * m[1][0]);
    Ok((x.checked_div(&det)?, y.checked_div(&det)?))
}
