use num_bigint::BigInt;
use rayon::prelude::*;

use super::{var, vars, Budget};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::ribbon::{GTilde, MarkedPiece, Metrics, PartitionTag, Tracer};

/// One state of a piece with its counts and mark tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PieceState {
    pub mask: u64,
    pub metrics: Metrics,
    pub tag: PartitionTag,
}

pub fn piece_states(piece: &MarkedPiece, budget: Budget) -> Result<Vec<PieceState>> {
    let h = piece.graph();
    budget.check(h)?;
    let n = 1u64 << h.num_edges();
    Ok((0..n)
        .into_par_iter()
        .map_init(
            || (Tracer::new(h), vec![false; h.num_edges()]),
            |(t, inc), mask| {
                for (e, f) in inc.iter_mut().enumerate() {
                    *f = mask >> e & 1 == 1;
                }
                let metrics = t.metrics(inc);
                let tag = piece.tag(t, inc);
                PieceState { mask, metrics, tag }
            },
        )
        .collect())
}

fn term(a: i64, b: u32, c: i64) -> Monomial {
    Monomial::from_pairs([
        (var(vars::A), a as i32),
        (var(vars::B), b as i32),
        (var(vars::C), c as i32),
    ])
}

fn add(p: &mut MultiPoly, m: Monomial) {
    p.add_term(m, BigInt::from(1));
}

/// `φ¹ = Σ_{S¹} a^{k−1} b^e` and `φ² = Σ_{S²} a^{k−2} b^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSums {
    pub phi1: MultiPoly,
    pub phi2: MultiPoly,
}

pub fn phi_sums(piece: &MarkedPiece, budget: Budget) -> Result<PhiSums> {
    let mut s = PhiSums {
        phi1: MultiPoly::zero(),
        phi2: MultiPoly::zero(),
    };
    for st in piece_states(piece, budget)? {
        let m = st.metrics;
        if st.tag.connected() {
            add(&mut s.phi1, term(m.k as i64 - 1, m.e, 0));
        } else {
            add(&mut s.phi2, term(m.k as i64 - 2, m.e, 0));
        }
    }
    Ok(s)
}

/// `η¹ = Σ_{S¹} a^{k−1} b^e c^{∂−1}` and `η² = Σ_{S²} a^{k−2} b^e c^{∂−2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaPlanar {
    pub eta1: MultiPoly,
    pub eta2: MultiPoly,
}

fn require_orientable(piece: &MarkedPiece) -> Result<()> {
    if !piece.is_untwisted() {
        return Err(Error::NotOrientable("piece has twisted edges".into()));
    }
    Ok(())
}

pub fn eta_sums_planar(piece: &MarkedPiece, budget: Budget) -> Result<EtaPlanar> {
    require_orientable(piece)?;
    if !piece.is_planar()? {
        return Err(Error::NotPlanar(
            "the piece with its distinguished edge has positive genus".into(),
        ));
    }
    let mut s = EtaPlanar {
        eta1: MultiPoly::zero(),
        eta2: MultiPoly::zero(),
    };
    for st in piece_states(piece, budget)? {
        let m = st.metrics;
        let (k, d) = (m.k as i64, m.boundary as i64);
        if st.tag.connected() {
            add(&mut s.eta1, term(k - 1, m.e, d - 1));
        } else {
            add(&mut s.eta2, term(k - 2, m.e, d - 2));
        }
    }
    Ok(s)
}

/// The three sums over the boundary-aware partition:
/// `η̄¹ = Σ_{S̄¹} a^{k−1} b^e c^{∂−1}`, `η̈¹ = Σ_{S̈¹} a^{k−1} b^e c^{∂−2}`,
/// `η̈² = Σ_{S̈²} a^{k−2} b^e c^{∂−2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaFull {
    pub bar1: MultiPoly,
    pub ddot1: MultiPoly,
    pub ddot2: MultiPoly,
}

pub fn eta_sums_full(piece: &MarkedPiece, budget: Budget) -> Result<EtaFull> {
    require_orientable(piece)?;
    let mut s = EtaFull {
        bar1: MultiPoly::zero(),
        ddot1: MultiPoly::zero(),
        ddot2: MultiPoly::zero(),
    };
    for st in piece_states(piece, budget)? {
        let m = st.metrics;
        let (k, d) = (m.k as i64, m.boundary as i64);
        match st.tag {
            PartitionTag::SameBoundary => add(&mut s.bar1, term(k - 1, m.e, d - 1)),
            PartitionTag::SameComponent => add(&mut s.ddot1, term(k - 1, m.e, d - 2)),
            PartitionTag::Separated => add(&mut s.ddot2, term(k - 2, m.e, d - 2)),
        }
    }
    Ok(s)
}

/// `Φ_G̃`: the sum of `a^k (Π x_e) c^∂` over states of G̃ that never contain
/// `f_e` without `g_e` (the fewest-edge representatives of the classes).
pub fn phi_gtilde(gt: &GTilde, budget: Budget) -> Result<MultiPoly> {
    let g = &gt.graph;
    budget.check(g)?;
    let n = 1u64 << g.num_edges();
    let lonely_f = |mask: u64| {
        gt.f_edges
            .iter()
            .zip(&gt.g_edges)
            .any(|(&f, &gg)| mask >> f & 1 == 1 && mask >> gg & 1 == 0)
    };
    let phi = (0..n)
        .into_par_iter()
        .filter(|&m| !lonely_f(m))
        .fold(
            || (Tracer::new(g), MultiPoly::zero()),
            |(mut t, mut acc), mask| {
                let m = t.metrics_mask(mask);
                let mut pairs = vec![
                    (var(vars::A), m.k as i32),
                    (var(vars::C), m.boundary as i32),
                ];
                pairs.extend(
                    (0..g.num_edges())
                        .filter(|e| mask >> e & 1 == 1)
                        .map(|e| (g.weight(e).clone(), 1)),
                );
                acc.add_term(Monomial::from_pairs(pairs), BigInt::from(1));
                (t, acc)
            },
        )
        .map(|(_, p)| p)
        .reduce(MultiPoly::zero, |a, b| a + b);
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::RibbonGraph;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    const B: Budget = Budget(20);

    #[test]
    fn phi_of_example_pieces() {
        let t = phi_sums(&MarkedPiece::triangle(), B).unwrap();
        assert_eq!((t.phi1, t.phi2), (p("b^2"), p("a + 2*b")));
        let d = phi_sums(&MarkedPiece::digon(), B).unwrap();
        assert_eq!((d.phi1, d.phi2), (p("b^2 + 2*b"), p("1")));
        let s = phi_sums(&MarkedPiece::single_edge(), B).unwrap();
        assert_eq!((s.phi1, s.phi2), (p("b"), p("1")));
    }

    #[test]
    fn eta_of_triangle_piece() {
        let f = eta_sums_full(&MarkedPiece::triangle(), B).unwrap();
        assert_eq!(f.bar1, p("b^2"));
        assert!(f.ddot1.is_zero());
        assert_eq!(f.ddot2, p("a*c + 2*b"));
        let pl = eta_sums_planar(&MarkedPiece::triangle(), B).unwrap();
        assert_eq!((pl.eta1, pl.eta2), (p("b^2"), p("a*c + 2*b")));
    }

    #[test]
    fn interlaced_loops_give_nonzero_ddot1() {
        // Two interlaced loops at u plus an edge from u to w, with the mark m
        // inside the loop p: the state {k, p} keeps the marks connected but
        // on different boundary walks.
        let h = RibbonGraph::from_edge_rotations(
            &[("u", &["p", "k", "q", "p", "q"]), ("w", &["k"])],
            &[],
        )
        .unwrap();
        let piece = MarkedPiece::new(h, 0, 1, 0, 0).unwrap();
        assert_eq!(piece.tag_of(&[true, true, false]), PartitionTag::SameComponent);
        let f = eta_sums_full(&piece, B).unwrap();
        assert!(!f.ddot1.is_zero());
        assert!(matches!(eta_sums_planar(&piece, B), Err(Error::NotPlanar(_))));
    }

    #[test]
    fn gtilde_class_counts() {
        let k2 = RibbonGraph::from_edge_rotations(&[("u", &["e"]), ("w", &["e"])], &[]).unwrap();
        let gt = k2.build_gtilde().unwrap();
        let phi = phi_gtilde(&gt, B).unwrap();
        let classes: BigInt = phi.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(classes, BigInt::from(3));
        let p2 = RibbonGraph::from_edge_rotations(&[("u", &["e"]), ("v", &["e", "f"]), ("w", &["f"])], &[])
            .unwrap();
        let phi = phi_gtilde(&p2.build_gtilde().unwrap(), B).unwrap();
        let classes: BigInt = phi.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(classes, BigInt::from(9));
    }
}
