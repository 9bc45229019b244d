//! Composition formulas: polynomials of an assembled 2-decomposition from
//! the template and per-piece weights, without enumerating the assembled graph.

mod brylawski;
mod maps;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::ribbon::{RibbonGraph, Tracer, TwoDecomposition};
use crate::statesum::{
    eta_sums_full, eta_sums_planar, phi_sums, var, vars, z_multivariate, Budget, EtaFull,
};

pub use brylawski::{
    brylawski, brylawski_br, brylawski_br_weights, brylawski_rational, brylawski_weights,
    tensor_z_formula,
    BrylawskiWeights,
};
pub use maps::{apply_map, MapKind, MonomialMap};

fn require_untwisted(g: &RibbonGraph, what: &str) -> Result<()> {
    if !g.is_untwisted() {
        return Err(Error::NotOrientable(format!("{what} has twisted edges")));
    }
    Ok(())
}

/// `Σ_{s ⊆ E(G)} a^{k(s)} c^{∂(s)} Π_{e∈s} in_e Π_{e∉s} out_e`, with `c`
/// omitted when `with_boundary` is false.
fn template_sum(
    g: &RibbonGraph,
    inside: &[MultiPoly],
    outside: &[MultiPoly],
    with_boundary: bool,
    budget: Budget,
) -> Result<MultiPoly> {
    budget.check(g)?;
    let n = 1u64 << g.num_edges();
    Ok((0..n)
        .into_par_iter()
        .fold(
            || (Tracer::new(g), MultiPoly::zero()),
            |(mut t, acc), mask| {
                let m = t.metrics_mask(mask);
                let mut pairs = vec![(var(vars::A), m.k as i32)];
                if with_boundary {
                    pairs.push((var(vars::C), m.boundary as i32));
                }
                let mut term = MultiPoly::monomial(Monomial::from_pairs(pairs));
                for e in 0..g.num_edges() {
                    let w = if mask >> e & 1 == 1 { &inside[e] } else { &outside[e] };
                    term = &term * w;
                }
                (t, acc + term)
            },
        )
        .map(|(_, p)| p)
        .reduce(MultiPoly::zero, |a, b| a + b))
}

/// `Z(Ĝ; a, b) = Σ_s a^{k(s)} Π_{e∈s} φ¹_e Π_{e∉s} φ²_e`.
pub fn compose_tutte(d: &TwoDecomposition, budget: Budget) -> Result<MultiPoly> {
    let sums = d
        .slots()
        .par_iter()
        .map(|s| phi_sums(&s.piece, budget))
        .collect::<Result<Vec<_>>>()?;
    let (inside, outside): (Vec<_>, Vec<_>) = sums.into_iter().map(|s| (s.phi1, s.phi2)).unzip();
    template_sum(d.template(), &inside, &outside, false, budget)
}

/// `Z(Ĝ; a, b, c) = Σ_s a^{k(s)} c^{∂(s)} Π_{e∈s} η¹_e Π_{e∉s} η²_e` for pieces
/// whose `A_e` has genus 0. The template may have any genus.
pub fn compose_br_planar(d: &TwoDecomposition, budget: Budget) -> Result<MultiPoly> {
    require_untwisted(d.template(), "template")?;
    let sums = d
        .slots()
        .par_iter()
        .map(|s| eta_sums_planar(&s.piece, budget))
        .collect::<Result<Vec<_>>>()?;
    let (inside, outside): (Vec<_>, Vec<_>) = sums.into_iter().map(|s| (s.eta1, s.eta2)).unzip();
    template_sum(d.template(), &inside, &outside, true, budget)
}

/// Per-slot boundary-aware sums, computed in parallel.
pub fn slot_weights(d: &TwoDecomposition, budget: Budget) -> Result<Vec<EtaFull>> {
    d.slots()
        .par_iter()
        .map(|s| eta_sums_full(&s.piece, budget))
        .collect()
}

/// `Z(Ĝ; a, b, c)` for any orientable decomposition: `Z(G̃; a, x, c)` pushed
/// through the 𝓖 map with each slot's `(η̄¹, η̈¹, η̈²)`.
pub fn compose_br_general(d: &TwoDecomposition, budget: Budget) -> Result<MultiPoly> {
    require_untwisted(d.template(), "template")?;
    let weights = slot_weights(d, budget)?;
    let gt = d.template().build_gtilde()?;
    let z = z_multivariate(&gt.graph, budget)?;
    let map = MonomialMap::new(MapKind::G, &gt, weights);
    let out = apply_map(&map, &z)?;
    if !out.is_polynomial() {
        return Err(Error::Internal(format!("composed Z has negative exponents: {out}")));
    }
    Ok(out)
}

/// Brute-force `Z(Ĝ; a, b, c, d)` of the assembled graph.
pub fn brute_force_z(d: &TwoDecomposition, budget: Budget) -> Result<MultiPoly> {
    let (g, _) = d.assemble()?;
    crate::statesum::z_abcd(&g, budget)
}

/// Brute-force `Z(Ĝ; a, b)`.
pub fn brute_force_z_ab(d: &TwoDecomposition, budget: Budget) -> Result<MultiPoly> {
    let (g, _) = d.assemble()?;
    crate::statesum::z_ab(&g, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::{MarkedPiece, PieceSlot};
    use crate::statesum::{phi_gtilde, specialize};

    const B: Budget = Budget(20);

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn g(rot: &[(&str, &[&str])]) -> RibbonGraph {
        RibbonGraph::from_edge_rotations(rot, &[]).unwrap()
    }

    fn example_decomposition() -> TwoDecomposition {
        let path = g(&[("u", &["f"]), ("v", &["f", "g"]), ("w", &["g"])]);
        TwoDecomposition::new(
            path,
            vec![
                PieceSlot::plain(MarkedPiece::digon()),
                PieceSlot::plain(MarkedPiece::triangle()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tutte_route_on_path_template() {
        let d = example_decomposition();
        let expected = p("a*b^4 + 2*a*b^3 + a^2*b^2 + 2*a^2*b^3 + a^3*b^2 + 4*a^2*b^2 + 2*a^3*b + 2*a^3*b + a^4");
        assert_eq!(compose_tutte(&d, B).unwrap(), expected);
        assert_eq!(brute_force_z_ab(&d, B).unwrap(), expected);
    }

    #[test]
    fn empty_template_is_identity() {
        let d = TwoDecomposition::new(RibbonGraph::isolated(2), vec![]).unwrap();
        assert_eq!(compose_tutte(&d, B).unwrap(), p("a^2"));
        assert_eq!(compose_br_general(&d, B).unwrap(), p("a^2*c^2"));
    }

    #[test]
    fn single_edge_pieces_reproduce_template() {
        let c3 = g(&[("a", &["x", "z"]), ("b", &["y", "x"]), ("c", &["z", "y"])]);
        let d = TwoDecomposition::uniform(c3.clone(), &MarkedPiece::single_edge());
        let z = crate::statesum::z_abcd(&c3, B).unwrap();
        assert_eq!(compose_br_planar(&d, B).unwrap(), z);
        assert_eq!(compose_br_general(&d, B).unwrap(), z);
    }

    #[test]
    fn routes_agree_on_triangle_tensor() {
        let c3 = g(&[("a", &["x", "z"]), ("b", &["y", "x"]), ("c", &["z", "y"])]);
        let d = TwoDecomposition::uniform(c3, &MarkedPiece::triangle());
        let brute = brute_force_z(&d, B).unwrap();
        let planar = compose_br_planar(&d, B).unwrap();
        assert_eq!(planar, brute);
        assert_eq!(compose_br_general(&d, B).unwrap(), brute);
        assert_eq!(
            specialize(&planar, &[("c", 1)]).unwrap(),
            compose_tutte(&d, B).unwrap()
        );
    }

    #[test]
    fn general_route_on_genus_one_template() {
        let torus = g(&[("v", &["p", "q", "p", "q"])]);
        let d = TwoDecomposition::uniform(torus, &MarkedPiece::triangle());
        assert_eq!(compose_br_general(&d, B).unwrap(), brute_force_z(&d, B).unwrap());
        assert_eq!(compose_br_planar(&d, B).unwrap(), brute_force_z(&d, B).unwrap());
    }

    #[test]
    fn general_route_uses_the_interlaced_slot() {
        let h = RibbonGraph::from_edge_rotations(
            &[("u", &["p", "k", "q", "p", "q"]), ("w", &["k"])],
            &[],
        )
        .unwrap();
        let piece = MarkedPiece::new(h, 0, 1, 0, 0).unwrap();
        let path = g(&[("u", &["f"]), ("v", &["f", "g"]), ("w", &["g"])]);
        let d = TwoDecomposition::new(
            path,
            vec![PieceSlot::plain(piece), PieceSlot::plain(MarkedPiece::digon())],
        )
        .unwrap();
        assert!(matches!(compose_br_planar(&d, B), Err(Error::NotPlanar(_))));
        assert_eq!(compose_br_general(&d, B).unwrap(), brute_force_z(&d, B).unwrap());
    }

    #[test]
    fn f_map_of_phi_matches() {
        let d = example_decomposition();
        let gt = d.template().build_gtilde().unwrap();
        let phi = phi_gtilde(&gt, B).unwrap();
        let map = MonomialMap::new(MapKind::F, &gt, slot_weights(&d, B).unwrap());
        assert_eq!(apply_map(&map, &phi).unwrap(), brute_force_z(&d, B).unwrap());
    }
}
