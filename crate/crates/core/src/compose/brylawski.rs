use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{solve_2x2, substitute_poly, MultiPoly, RationalFn};
use crate::ribbon::{MarkedPiece, RibbonGraph, SpanningState};
use crate::statesum::{br_polynomial, components, solve_phi, tutte, var, vars, z_ab, Budget};

/// Solutions `h`, `h′` of a Brylawski system, with `ε = k(H) − k(A/e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrylawskiWeights {
    pub h: RationalFn,
    pub h_prime: RationalFn,
    pub epsilon: u32,
}

fn rf(p: MultiPoly) -> RationalFn {
    RationalFn::from(p)
}

fn v(name: &str) -> RationalFn {
    rf(MultiPoly::var(name))
}

fn minus_one(name: &str) -> RationalFn {
    rf(&MultiPoly::var(name) - &MultiPoly::one())
}

/// `Z(G ⊗ A; a, b) = g^{e(G)} Z(G; a, f/g)` with `(f, g)` from the piece.
pub fn tensor_z_formula(g: &RibbonGraph, piece: &MarkedPiece, budget: Budget) -> Result<MultiPoly> {
    let w = solve_phi(piece, budget)?;
    let z = z_ab(g, budget)?;
    let ratio = w.f.checked_div(&w.g)?;
    let subst = substitute_poly(&z, &BTreeMap::from([(var(vars::B), ratio)]))?;
    let scale = w.g.pow(g.num_edges() as i32)?;
    (&subst * &scale).to_poly()
}

/// Solves `(x−1)h + h′ = T(H)` and `(x−1)^ε (h + (y−1)h′) = T(A/e)`.
pub fn brylawski_weights(piece: &MarkedPiece, budget: Budget) -> Result<BrylawskiWeights> {
    let h_graph = piece.graph();
    let contracted = piece.contracted(false)?;
    let epsilon = components(h_graph) - components(&contracted);
    let t_h = rf(tutte(h_graph, budget)?);
    let t_a = rf(tutte(&contracted, budget)?);
    let xm1 = minus_one(vars::X);
    let ym1 = minus_one(vars::Y);
    let scale = xm1.pow(epsilon as i32)?;
    let one = RationalFn::one();
    let (h, h_prime) = solve_2x2([[&xm1, &one], [&scale, &(&scale * &ym1)]], [&t_h, &t_a])?;
    Ok(BrylawskiWeights { h, h_prime, epsilon })
}

fn rank_nullity(g: &RibbonGraph) -> (u32, u32) {
    let m = SpanningState::full(g).metrics();
    (m.rank(), m.nullity())
}

/// `h^n h′^r P(X/h′, Y/h)` expanded term by term as
/// `X^i h′^{r−i} Y^j h^{n−j}`, so neither `h` nor `h′` is ever inverted.
/// The degrees of `P` in `x_var`, `y_var` are bounded by `r` and `n`.
fn homogenized(
    p: &MultiPoly,
    (x_var, x_num, x_den, r): (&str, &RationalFn, &RationalFn, u32),
    (y_var, y_num, y_den, n): (&str, &RationalFn, &RationalFn, u32),
) -> Result<RationalFn> {
    let (xv, yv) = (var(x_var), var(y_var));
    let mut total = RationalFn::zero();
    for (m, c) in p.terms() {
        let (i, rest) = m.split_off(&xv);
        let (j, rest) = rest.split_off(&yv);
        if i < 0 || j < 0 || i as u32 > r || j as u32 > n {
            return Err(Error::Internal(format!("term {m} exceeds degree bounds ({r}, {n})")));
        }
        let coeff = rf(MultiPoly::term(c.clone(), rest));
        let t = &(&x_num.pow(i)? * &x_den.pow(r as i32 - i)?) * &(&y_num.pow(j)? * &y_den.pow(n as i32 - j)?);
        total = total + &coeff * &t;
    }
    Ok(total)
}

/// `T(G ⊗ A) = h^{n(G)} h′^{r(G)} T(G; T(H)/h′, T(A/e)/((x−1)^ε h))`.
pub fn brylawski(g: &RibbonGraph, piece: &MarkedPiece, budget: Budget) -> Result<MultiPoly> {
    brylawski_rational(g, piece, budget)?.to_poly()
}

/// The right-hand side of [`brylawski`] before the polynomial check. When
/// the marks are disconnected in `H` the system forces `h′ = 0` and the value
/// is `T(H)^{e(G)} (x−1)^{−n(G)}`, a polynomial only for forests.
pub fn brylawski_rational(g: &RibbonGraph, piece: &MarkedPiece, budget: Budget) -> Result<RationalFn> {
    let w = brylawski_weights(piece, budget)?;
    let t_h = rf(tutte(piece.graph(), budget)?);
    let t_a = rf(tutte(&piece.contracted(false)?, budget)?);
    let y_num = t_a.checked_div(&minus_one(vars::X).pow(w.epsilon as i32)?)?;
    let (r, n) = rank_nullity(g);
    homogenized(
        &tutte(g, budget)?,
        (vars::X, &t_h, &w.h_prime, r),
        (vars::Y, &y_num, &w.h, n),
    )
}

/// Solves `h + βh′ = R(A/e)` and `(α−1)h + h′ = R(H)` for a genus-0 piece.
pub fn brylawski_br_weights(piece: &MarkedPiece, budget: Budget) -> Result<BrylawskiWeights> {
    if !piece.is_untwisted() {
        return Err(Error::NotOrientable("piece has twisted edges".into()));
    }
    if !piece.is_planar()? {
        return Err(Error::NotPlanar("the piece with its distinguished edge has positive genus".into()));
    }
    let contracted = piece.contracted(false)?;
    let epsilon = components(piece.graph()) - components(&contracted);
    let r_h = rf(br_polynomial(piece.graph(), budget)?);
    let r_a = rf(br_polynomial(&contracted, budget)?);
    let one = RationalFn::one();
    let (h, h_prime) = solve_2x2(
        [[&one, &v(vars::BETA)], [&minus_one(vars::ALPHA), &one]],
        [&r_a, &r_h],
    )?;
    Ok(BrylawskiWeights { h, h_prime, epsilon })
}

/// `R(G ⊗ A) = h^{n(G)} h′^{r(G)} R(G; R(H)/h′, βh′/h, γ)` for a genus-0 piece.
pub fn brylawski_br(g: &RibbonGraph, piece: &MarkedPiece, budget: Budget) -> Result<MultiPoly> {
    let w = brylawski_br_weights(piece, budget)?;
    if w.epsilon != 0 {
        let h = piece.graph();
        return Err(Error::Disconnected(
            h.vertex(piece.u()).id.clone(),
            h.vertex(piece.w()).id.clone(),
        ));
    }
    let r_h = rf(br_polynomial(piece.graph(), budget)?);
    let beta_h = &v(vars::BETA) * &w.h_prime;
    let (r, n) = rank_nullity(g);
    homogenized(
        &br_polynomial(g, budget)?,
        (vars::ALPHA, &r_h, &w.h_prime, r),
        (vars::BETA, &beta_h, &w.h, n),
    )?
    .to_poly()
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Budget = Budget(20);

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn g(rot: &[(&str, &[&str])]) -> RibbonGraph {
        RibbonGraph::from_edge_rotations(rot, &[]).unwrap()
    }

    fn small_graphs() -> Vec<RibbonGraph> {
        vec![
            g(&[("u", &["p", "q"]), ("w", &["q", "p"])]),
            g(&[("a", &["x", "z"]), ("b", &["y", "x"]), ("c", &["z", "y"])]),
            g(&[("v", &["p", "p", "q", "q"])]),
            g(&[("v", &["p", "q", "p", "q"])]),
        ]
    }

    #[test]
    fn triangle_weights() {
        let w = brylawski_br_weights(&MarkedPiece::triangle(), B).unwrap();
        assert_eq!(w.h, rf(p("α + 1")));
        assert_eq!(w.h_prime, RationalFn::one());
        let t = brylawski_weights(&MarkedPiece::triangle(), B).unwrap();
        assert_eq!((t.h, t.h_prime), (rf(p("x + 1")), RationalFn::one()));
    }

    #[test]
    fn tensor_formulas_match_brute_force() {
        for piece in [MarkedPiece::triangle(), MarkedPiece::digon(), MarkedPiece::single_edge()] {
            for graph in small_graphs() {
                let t = graph.tensor(&piece).unwrap();
                assert_eq!(tensor_z_formula(&graph, &piece, B).unwrap(), z_ab(&t, B).unwrap());
                assert_eq!(brylawski(&graph, &piece, B).unwrap(), tutte(&t, B).unwrap());
                assert_eq!(brylawski_br(&graph, &piece, B).unwrap(), br_polynomial(&t, B).unwrap());
            }
        }
    }

    #[test]
    fn identity_tensor() {
        for graph in small_graphs() {
            let piece = MarkedPiece::single_edge();
            assert_eq!(brylawski(&graph, &piece, B).unwrap(), tutte(&graph, B).unwrap());
        }
    }

    #[test]
    fn disconnected_marks_use_the_epsilon_system() {
        let apart = RibbonGraph::from_edge_rotations(&[("u", &["l", "l"]), ("w", &[])], &[]).unwrap();
        let pieces = [
            MarkedPiece::new(RibbonGraph::isolated(2), 0, 1, 0, 0).unwrap(),
            MarkedPiece::new(apart, 0, 1, 1, 0).unwrap(),
        ];
        let path = g(&[("a", &["x"]), ("b", &["x", "y"]), ("c", &["y"])]);
        for piece in pieces {
            let w = brylawski_weights(&piece, B).unwrap();
            assert_eq!(w.epsilon, 1);
            assert!(w.h_prime.is_zero());
            let t = tutte(&path.tensor_relaxed(&piece).unwrap(), B).unwrap();
            assert_eq!(brylawski(&path, &piece, B).unwrap(), t);
            for graph in small_graphs() {
                let n = SpanningState::full(&graph).metrics().nullity() as i32;
                let t = rf(tutte(&graph.tensor_relaxed(&piece).unwrap(), B).unwrap());
                let off = minus_one(vars::X).pow(-n).unwrap();
                assert_eq!(brylawski_rational(&graph, &piece, B).unwrap(), &t * &off);
                assert!(matches!(brylawski(&graph, &piece, B), Err(Error::NotPolynomial(_))));
            }
        }
    }
}
