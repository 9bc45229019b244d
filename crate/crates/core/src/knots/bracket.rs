use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::{ribbon_of_diagram, writhe, LinkDiagram};
use crate::error::{Error, Result};
use crate::poly::{substitute_poly, Monomial, MultiPoly, RationalFn};
use crate::ribbon::SpanningState;
use crate::statesum::{br_polynomial, var, vars, Budget};

/// Most crossings the state-expansion oracle will take.
pub const ORACLE_LIMIT: usize = 24;

const A: &str = "A";
const Q: &str = "q";

fn a_pow(k: i32) -> MultiPoly {
    MultiPoly::monomial(Monomial::var(A, k))
}

/// `−A² − A⁻²`, the value of an extra closed loop.
pub fn loop_value() -> MultiPoly {
    -(&a_pow(2) + &a_pow(-2))
}

/// `⟨D⟩ = A^{n(F)−r(F)} R(F; −A⁴, −1−A⁻⁴, (−A²−A⁻²)⁻¹)` where `F` is the
/// all-A ribbon graph of the diagram.
pub fn kauffman_bracket(d: &LinkDiagram, budget: Budget) -> Result<MultiPoly> {
    let f = ribbon_of_diagram(d)?;
    let r = br_polynomial(&f, budget)?;
    let m = SpanningState::full(&f).metrics();
    let bindings = BTreeMap::from([
        (var(vars::ALPHA), RationalFn::from(-a_pow(4))),
        (var(vars::BETA), RationalFn::from(&MultiPoly::constant(-1) - &a_pow(-4))),
        (var(vars::GAMMA), RationalFn::from(loop_value()).recip()?),
    ]);
    let value = substitute_poly(&r, &bindings)?;
    let shift = RationalFn::from(a_pow(m.nullity() as i32 - m.rank() as i32));
    (&value * &shift).to_poly()
}

/// `⟨D⟩` by expanding all `2^n` smoothings:
/// `Σ_S A^{#A(S) − #B(S)} (−A² − A⁻²)^{loops(S) − 1}`.
pub fn bracket_oracle(d: &LinkDiagram) -> Result<MultiPoly> {
    let n = d.num_crossings();
    if n > ORACLE_LIMIT {
        return Err(Error::BudgetExceeded {
            edges: n,
            budget: ORACLE_LIMIT,
        });
    }
    let mut index: HashMap<i64, usize> = HashMap::new();
    for c in d.crossings() {
        for &l in c {
            let next = index.len();
            index.entry(l).or_insert(next);
        }
    }
    let arcs: Vec<[usize; 4]> = d.crossings().iter().map(|c| c.map(|l| index[&l])).collect();
    let labels = index.len();
    let counts: HashMap<(i32, usize), u64> = (0..1u64 << n)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<(i32, usize), u64>, mask| {
            let mut parent: Vec<usize> = (0..labels).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            let mut loops = labels;
            let mut join = |p: &mut Vec<usize>, x: usize, y: usize| {
                let (rx, ry) = (find(p, x), find(p, y));
                if rx != ry {
                    p[rx] = ry;
                    loops -= 1;
                }
            };
            for (i, [a, b, c, dd]) in arcs.iter().copied().enumerate() {
                if mask >> i & 1 == 0 {
                    join(&mut parent, a, b);
                    join(&mut parent, c, dd);
                } else {
                    join(&mut parent, a, dd);
                    join(&mut parent, b, c);
                }
            }
            let b_count = mask.count_ones() as i32;
            let loops = if n == 0 { 1 } else { loops };
            *acc.entry((n as i32 - 2 * b_count, loops)).or_default() += 1;
            acc
        })
        .reduce(HashMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_default() += v;
            }
            x
        });
    let delta = loop_value();
    let mut powers: BTreeMap<usize, MultiPoly> = BTreeMap::new();
    let mut total = MultiPoly::zero();
    for ((shift, loops), count) in counts {
        let p = powers
            .entry(loops)
            .or_insert_with(|| delta.pow(loops as u32 - 1));
        total += &p.mul_monomial(&Monomial::var(A, shift)).scale(&BigInt::from(count));
    }
    Ok(total)
}

/// Jones polynomial `(−A³)^{−ω} ⟨D⟩` at `A = q⁻¹`, as a Laurent polynomial in
/// `q = t^{1/4}`.
pub fn jones(d: &LinkDiagram, budget: Budget) -> Result<MultiPoly> {
    jones_from_bracket(&kauffman_bracket(d, budget)?, writhe(d))
}

pub(crate) fn jones_from_bracket(bracket: &MultiPoly, writhe: i64) -> Result<MultiPoly> {
    let w = writhe as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalised = bracket.mul_monomial(&Monomial::var(A, -3 * w)).scale(&BigInt::from(sign));
    normalised.substitute(&BTreeMap::from([(
        var(A),
        MultiPoly::monomial(Monomial::var(Q, -1)),
    )]))
}

/// Writes a polynomial in `q = t^{1/4}` in powers of `t`, lowest first, with
/// fractional exponents as `t^(k/d)`.
pub fn format_jones(j: &MultiPoly) -> String {
    let q = var(Q);
    let mut terms: Vec<(i32, BigInt)> = j
        .terms()
        .map(|(m, c)| (m.exponent(&q), c.clone()))
        .collect();
    terms.sort_by_key(|(e, _)| *e);
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c < &BigInt::from(0);
        let mag = if neg { -c } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let g = e.gcd(&4);
        let (num, den) = (e / g, 4 / g);
        let power = match (num, den) {
            (0, _) => String::new(),
            (1, 1) => "t".into(),
            (k, 1) => format!("t^{k}"),
            (k, d) => format!("t^({k}/{d})"),
        };
        let one = mag == BigInt::from(1);
        match (power.is_empty(), one) {
            (true, _) => out.push_str(&mag.to_string()),
            (false, true) => out.push_str(&power),
            (false, false) => out.push_str(&format!("{mag}*{power}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::parse_pd;

    const B: Budget = Budget(20);

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn t_quarter(s: &str) -> MultiPoly {
        // Polynomials in t written with q = t^{1/4}.
        p(s).substitute(&BTreeMap::from([(var("t"), p("q^4"))])).unwrap()
    }

    #[test]
    fn unknot_and_kinks() {
        let u = parse_pd("").unwrap();
        assert_eq!(bracket_oracle(&u).unwrap(), p("1"));
        assert_eq!(kauffman_bracket(&u, B).unwrap(), p("1"));
        let k = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(bracket_oracle(&k).unwrap(), p("-A^3"));
        assert_eq!(kauffman_bracket(&k, B).unwrap(), p("-A^3"));
        let two = parse_pd("X(1,1,2,4) X(3,3,4,2)").unwrap();
        assert_eq!(writhe(&two), 2);
        assert_eq!(jones(&two, B).unwrap(), p("1"));
    }

    #[test]
    fn hopf_bracket() {
        let h = parse_pd("X(2,1,3,0) X(0,3,1,2)").unwrap();
        assert_eq!(bracket_oracle(&h).unwrap(), p("-A^4 - A^-4"));
        assert_eq!(kauffman_bracket(&h, B).unwrap(), p("-A^4 - A^-4"));
    }

    #[test]
    fn trefoil_jones() {
        let left = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(kauffman_bracket(&left, B).unwrap(), bracket_oracle(&left).unwrap());
        assert_eq!(jones(&left, B).unwrap(), t_quarter("-t^-4 + t^-3 + t^-1"));
        let right = parse_pd("X(2,0,3,5) X(0,4,1,3) X(4,2,5,1)").unwrap();
        assert_eq!(jones(&right, B).unwrap(), t_quarter("t + t^3 - t^4"));
        assert_eq!(format_jones(&jones(&right, B).unwrap()), "t + t^3 - t^4");
    }

    #[test]
    fn figure_eight_jones() {
        let d = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap();
        assert_eq!(writhe(&d), 0);
        assert_eq!(jones(&d, B).unwrap(), t_quarter("t^-2 - t^-1 + 1 - t + t^2"));
    }

    #[test]
    fn half_integer_exponents_print_as_fractions() {
        assert_eq!(format_jones(&p("-q^-2 + 3*q^4")), "-t^(-1/2) + 3*t");
    }
}
