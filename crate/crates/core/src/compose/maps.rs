use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Var};
use crate::ribbon::GTilde;
use crate::statesum::{vars, EtaFull};

/// Which monomial map to apply to a polynomial in the `f_e`, `g_e` labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Applied to `Φ_G̃`: `f_e g_e ↦ η̈¹`, `g_e ↦ η̄¹`, `1 ↦ η̈²`.
    F,
    /// Applied to `Z(G̃; a, x, c)`: as `F` but with `1 ↦ ½η̈²` and
    /// `f_e ↦ c⁻¹·½η̈²`.
    G,
}

/// A monomial map with one `(f_e, g_e)` label pair and weight triple per
/// template edge.
#[derive(Clone, Debug)]
pub struct MonomialMap {
    pub kind: MapKind,
    pub labels: Vec<(Var, Var)>,
    pub weights: Vec<EtaFull>,
}

impl MonomialMap {
    pub fn new(kind: MapKind, gt: &GTilde, weights: Vec<EtaFull>) -> Self {
        let labels = gt.f_labels.iter().cloned().zip(gt.g_labels.iter().cloned()).collect();
        MonomialMap { kind, labels, weights }
    }
}

/// Image of one edge pattern, scaled by 2 under the 𝓖 map so the halves
/// stay integral.
fn slot_value(kind: MapKind, w: &EtaFull, has_f: bool, has_g: bool) -> Result<MultiPoly> {
    let two = BigInt::from(2);
    Ok(match (kind, has_f, has_g) {
        (MapKind::F, true, true) => w.ddot1.clone(),
        (MapKind::F, false, true) => w.bar1.clone(),
        (MapKind::F, false, false) => w.ddot2.clone(),
        (MapKind::F, true, false) => {
            return Err(Error::MapExponent(
                "f_e without g_e is not a class representative".into(),
            ))
        }
        (MapKind::G, true, true) => w.ddot1.scale(&two),
        (MapKind::G, false, true) => w.bar1.scale(&two),
        (MapKind::G, false, false) => w.ddot2.clone(),
        (MapKind::G, true, false) => w.ddot2.mul_monomial(&Monomial::var(vars::C, -1)),
    })
}

/// Linear extension of the map over the monomials of `p`.
pub fn apply_map(map: &MonomialMap, p: &MultiPoly) -> Result<MultiPoly> {
    // Group terms by their (f, g) pattern so each pattern's product of slot
    // values is formed once.
    let mut groups: BTreeMap<Vec<(bool, bool)>, MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let mut pattern = Vec::with_capacity(map.labels.len());
        for (f, g) in &map.labels {
            let (ef, r) = rest.split_off(f);
            let (eg, r) = r.split_off(g);
            rest = r;
            for (v, e) in [(f, ef), (g, eg)] {
                if !(0..=1).contains(&e) {
                    return Err(Error::MapExponent(format!("{v}^{e} in {m}")));
                }
            }
            pattern.push((ef == 1, eg == 1));
        }
        groups.entry(pattern).or_insert_with(MultiPoly::zero).add_term(rest, c.clone());
    }
    let mut total = MultiPoly::zero();
    for (pattern, rest) in groups {
        let mut term = rest;
        for ((has_f, has_g), w) in pattern.into_iter().zip(&map.weights) {
            term = &term * &slot_value(map.kind, w, has_f, has_g)?;
        }
        total += &term;
    }
    if map.kind == MapKind::G {
        let scale = BigInt::from(1) << map.labels.len();
        total = total
            .div_scalar_exact(&scale)
            .ok_or_else(|| Error::Internal("the ½ factors of the 𝓖 map did not cancel".into()))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn map(kind: MapKind, n: usize) -> MonomialMap {
        let labels = (1..=n)
            .map(|i| (Var::from(format!("f{i}")), Var::from(format!("g{i}"))))
            .collect();
        let weights = (1..=n)
            .map(|i| EtaFull {
                bar1: p(&format!("P{i}")),
                ddot1: p(&format!("R{i}")),
                ddot2: p(&format!("Q{i}")),
            })
            .collect();
        MonomialMap { kind, labels, weights }
    }

    #[test]
    fn f_map_reads_patterns() {
        let m = map(MapKind::F, 3);
        assert_eq!(apply_map(&m, &p("f1*g1*g2")).unwrap(), p("R1*P2*Q3"));
        assert!(matches!(apply_map(&m, &p("f1")), Err(Error::MapExponent(_))));
        assert!(matches!(apply_map(&m, &p("g1^2")), Err(Error::MapExponent(_))));
    }

    #[test]
    fn g_map_halves_and_shifts() {
        let m = map(MapKind::G, 1);
        assert_eq!(apply_map(&m, &p("2")).unwrap(), p("Q1"));
        assert_eq!(apply_map(&m, &p("1 + c*f1")).unwrap(), p("Q1"));
        assert!(matches!(apply_map(&m, &p("1")), Err(Error::Internal(_))));
    }
}
