//! Brute-force state sums over all `2^|E|` spanning states.

mod partition;
mod solve;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Var};
use crate::ribbon::{Metrics, RibbonGraph, Tracer};

pub use partition::{
    eta_sums_full, eta_sums_planar, phi_gtilde, phi_sums, piece_states, EtaFull, EtaPlanar,
    PhiSums, PieceState,
};
pub use solve::{
    pqr_multivariate, solve_eta_planar, solve_phi, solve_pqr_twisted, Pqr, PqrReport, Weights,
};

pub fn var(name: &str) -> Var {
    Var::new(name)
}

/// Names of the polynomial variables.
pub mod vars {
    pub const A: &str = "a";
    pub const B: &str = "b";
    pub const C: &str = "c";
    pub const D: &str = "d";
    pub const X: &str = "x";
    pub const Y: &str = "y";
    pub const ALPHA: &str = "α";
    pub const BETA: &str = "β";
    pub const GAMMA: &str = "γ";
    pub const DELTA: &str = "δ";
}

pub const DEFAULT_BUDGET: usize = 20;
const HARD_LIMIT: usize = 40;

/// Largest edge count the brute-force engines will enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Budget {
    /// `RIBBONPOLY_BUDGET` if set and valid, else the default of 20 edges.
    pub fn from_env() -> Self {
        std::env::var("RIBBONPOLY_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Budget)
            .unwrap_or(Budget(DEFAULT_BUDGET))
    }

    pub fn check(&self, g: &RibbonGraph) -> Result<()> {
        let edges = g.num_edges();
        if edges > self.0.min(HARD_LIMIT) {
            return Err(Error::BudgetExceeded {
                edges,
                budget: self.0.min(HARD_LIMIT),
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

/// Metrics of every state, indexed by edge mask.
pub fn state_metrics(g: &RibbonGraph, budget: Budget) -> Result<Vec<Metrics>> {
    budget.check(g)?;
    let n = 1u64 << g.num_edges();
    Ok((0..n)
        .into_par_iter()
        .map_init(|| Tracer::new(g), |t, m| t.metrics_mask(m))
        .collect())
}

/// Number of states with each metric tuple.
pub fn histogram(g: &RibbonGraph, budget: Budget) -> Result<BTreeMap<Metrics, u64>> {
    budget.check(g)?;
    let n = 1u64 << g.num_edges();
    let merged = (0..n)
        .into_par_iter()
        .fold(
            || (Tracer::new(g), HashMap::<Metrics, u64>::new()),
            |(mut t, mut h), m| {
                *h.entry(t.metrics_mask(m)).or_default() += 1;
                (t, h)
            },
        )
        .map(|(_, h)| h)
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Ok(merged.into_iter().collect())
}

fn state_monomial(m: &Metrics, extra: impl IntoIterator<Item = (Var, i32)>) -> Monomial {
    let mut pairs: Vec<(Var, i32)> = vec![
        (var(vars::A), m.k as i32),
        (var(vars::C), m.boundary as i32),
        (var(vars::D), m.t() as i32),
    ];
    pairs.extend(extra);
    Monomial::from_pairs(pairs)
}

/// `Z(G; a, x, c, d) = Σ a^k(s) (Π_{e∈s} x_e) c^∂(s) d^t(s)`, with the
/// edge weights taken from the graph's labels.
pub fn z_multivariate(g: &RibbonGraph, budget: Budget) -> Result<MultiPoly> {
    budget.check(g)?;
    let n = 1u64 << g.num_edges();
    let weights: Vec<Var> = (0..g.num_edges()).map(|e| g.weight(e).clone()).collect();
    let z = (0..n)
        .into_par_iter()
        .fold(
            || (Tracer::new(g), MultiPoly::zero()),
            |(mut t, mut acc), mask| {
                let m = t.metrics_mask(mask);
                let xs = (0..weights.len())
                    .filter(|e| mask >> e & 1 == 1)
                    .map(|e| (weights[e].clone(), 1));
                acc.add_term(state_monomial(&m, xs), BigInt::from(1));
                (t, acc)
            },
        )
        .map(|(_, p)| p)
        .reduce(MultiPoly::zero, |a, b| a + b);
    Ok(z.d_reduce())
}

/// `Z(G; a, b, c, d)`: every edge weight set to `b`.
pub fn z_abcd(g: &RibbonGraph, budget: Budget) -> Result<MultiPoly> {
    Ok(z_from_histogram(&histogram(g, budget)?))
}

pub fn z_from_histogram(h: &BTreeMap<Metrics, u64>) -> MultiPoly {
    let mut z = MultiPoly::zero();
    for (m, &count) in h {
        z.add_term(
            state_monomial(m, [(var(vars::B), m.e as i32)]),
            BigInt::from(count),
        );
    }
    z
}

/// `Z(G; a, b) = Σ a^k(s) b^e(s)`, the form used for the Tutte polynomial.
pub fn z_ab(g: &RibbonGraph, budget: Budget) -> Result<MultiPoly> {
    let z = z_abcd(g, budget)?;
    specialize(&z, &[(vars::C, 1), (vars::D, 1)])
}

/// Sets each named variable to an integer constant.
pub fn specialize(p: &MultiPoly, values: &[(&str, i64)]) -> Result<MultiPoly> {
    let b: BTreeMap<Var, MultiPoly> = values
        .iter()
        .map(|(v, c)| (var(v), MultiPoly::constant(*c)))
        .collect();
    p.substitute(&b)
}

fn alpha_minus_one() -> MultiPoly {
    &MultiPoly::var(vars::ALPHA) - &MultiPoly::one()
}

/// Bollobás-Riordan polynomial straight from its state sum:
/// `Σ (α−1)^{r(G)−r(s)} β^{n(s)} γ^{k(s)−∂(s)+n(s)} δ^{t(s)}`.
pub fn br_from_histogram(h: &BTreeMap<Metrics, u64>, k_graph: u32) -> MultiPoly {
    let am1 = alpha_minus_one();
    let mut r = MultiPoly::zero();
    let mut powers: HashMap<u32, MultiPoly> = HashMap::new();
    for (m, &count) in h {
        let p = powers
            .entry(m.k - k_graph)
            .or_insert_with(|| am1.pow(m.k - k_graph));
        let mono = Monomial::from_pairs([
            (var(vars::BETA), m.nullity() as i32),
            (var(vars::GAMMA), m.gamma_exponent() as i32),
            (var(vars::DELTA), m.t() as i32),
        ]);
        r += &p.mul_monomial(&mono).scale(&BigInt::from(count));
    }
    r
}

/// Bollobás-Riordan polynomial from `Z(G; a, b, c, d)` by the change of
/// variables `a → (α−1)βγ²`, `b → βγ`, `c → γ⁻¹`, `d → δ`, followed by
/// division by `(α−1)^{k(G)} (βγ)^{v(G)}`.
pub fn br_from_z(z: &MultiPoly, k_graph: u32, v_graph: u32) -> Result<MultiPoly> {
    let am1 = alpha_minus_one();
    let beta = MultiPoly::var(vars::BETA);
    let gamma = MultiPoly::var(vars::GAMMA);
    let mut b = BTreeMap::new();
    b.insert(var(vars::A), &(&am1 * &beta) * &gamma.pow(2));
    b.insert(var(vars::B), &beta * &gamma);
    b.insert(
        var(vars::C),
        MultiPoly::monomial(Monomial::var(vars::GAMMA, -1)),
    );
    b.insert(var(vars::D), MultiPoly::var(vars::DELTA));
    let s = z.substitute(&b)?;
    let s = s
        .div_exact(&am1.pow(k_graph))
        .ok_or_else(|| Error::Internal("(α−1)^k(G) does not divide the substituted Z".into()))?;
    let unit = Monomial::from_pairs([
        (var(vars::BETA), -(v_graph as i32)),
        (var(vars::GAMMA), -(v_graph as i32)),
    ]);
    Ok(s.mul_monomial(&unit).d_reduce())
}

fn graph_components(h: &BTreeMap<Metrics, u64>) -> (u32, u32) {
    // The full state is the unique state with the most edges.
    let full = h.keys().max_by_key(|m| m.e).expect("at least one state");
    (full.k, full.v)
}

/// Bollobás-Riordan polynomial `R(G; α, β, γ, δ)`, computed both from its own
/// state sum and through `Z`; a disagreement is an internal error.
pub fn br_polynomial(g: &RibbonGraph, budget: Budget) -> Result<MultiPoly> {
    let h = histogram(g, budget)?;
    let (k, v) = graph_components(&h);
    let direct = br_from_histogram(&h, k);
    let via_z = br_from_z(&z_from_histogram(&h), k, v)?;
    if direct != via_z {
        return Err(Error::Internal(format!(
            "R routes disagree: state sum {direct} vs Z substitution {via_z}"
        )));
    }
    Ok(direct)
}

/// Tutte polynomial `T(G; x, y) = Σ (x−1)^{r(G)−r(s)} (y−1)^{n(s)}`, checked
/// against the specialization `R(G; x, y−1, 1)`.
pub fn tutte(g: &RibbonGraph, budget: Budget) -> Result<MultiPoly> {
    let h = histogram(g, budget)?;
    let (k, _) = graph_components(&h);
    let xm1 = &MultiPoly::var(vars::X) - &MultiPoly::one();
    let ym1 = &MultiPoly::var(vars::Y) - &MultiPoly::one();
    let mut t = MultiPoly::zero();
    let mut by_exp: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (m, &c) in h.iter() {
        *by_exp.entry((m.k - k, m.nullity())).or_default() += c;
    }
    for ((i, j), c) in by_exp {
        t += &(&xm1.pow(i) * &ym1.pow(j)).scale(&BigInt::from(c));
    }
    let r = br_from_histogram(&h, k);
    let spec = br_to_tutte(&r)?;
    if spec != t {
        return Err(Error::Internal(format!(
            "Tutte routes disagree: {t} vs R(x, y−1, 1) = {spec}"
        )));
    }
    Ok(t)
}

/// `R(G; x, y−1, 1)` with `δ = 1`.
pub fn br_to_tutte(r: &MultiPoly) -> Result<MultiPoly> {
    let mut b = BTreeMap::new();
    b.insert(var(vars::ALPHA), MultiPoly::var(vars::X));
    b.insert(
        var(vars::BETA),
        &MultiPoly::var(vars::Y) - &MultiPoly::one(),
    );
    b.insert(var(vars::GAMMA), MultiPoly::one());
    b.insert(var(vars::DELTA), MultiPoly::one());
    r.substitute(&b)
}

/// Number of connected components of the whole graph.
pub fn components(g: &RibbonGraph) -> u32 {
    Tracer::new(g).metrics(&vec![true; g.num_edges()]).k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn g(rot: &[(&str, &[&str])], tw: &[&str]) -> RibbonGraph {
        RibbonGraph::from_edge_rotations(rot, tw).unwrap()
    }

    const B: Budget = Budget(20);

    #[test]
    fn z_examples() {
        assert_eq!(z_multivariate(&RibbonGraph::isolated(1), B).unwrap(), p("a*c"));
        let k2 = g(&[("u", &["e"]), ("w", &["e"])], &[]);
        assert_eq!(
            z_multivariate(&k2, B).unwrap().to_string(),
            "a^2*c^2 + a*c*x_e"
        );
        let mob = g(&[("v", &["e", "e"])], &["e"]);
        assert_eq!(z_multivariate(&mob, B).unwrap(), p("a*c + a*c*d*x_e"));
    }

    #[test]
    fn br_examples() {
        assert_eq!(br_polynomial(&RibbonGraph::isolated(1), B).unwrap(), p("1"));
        let l = g(&[("v", &["e", "e"])], &[]);
        assert_eq!(br_polynomial(&l, B).unwrap(), p("1 + β"));
        let t = g(&[("v", &["e", "f", "e", "f"])], &[]);
        assert_eq!(br_polynomial(&t, B).unwrap(), p("β^2*γ^2 + 2*β + 1"));
        let k2 = g(&[("u", &["e"]), ("w", &["e"])], &[]);
        assert_eq!(br_polynomial(&k2, B).unwrap(), p("α"));
    }

    #[test]
    fn tutte_of_triangle() {
        let c3 = g(&[("a", &["x", "z"]), ("b", &["y", "x"]), ("c", &["z", "y"])], &[]);
        assert_eq!(tutte(&c3, B).unwrap(), p("x^2 + x + y"));
    }

    #[test]
    fn budget_is_enforced() {
        let l = g(&[("v", &["e", "e", "f", "f"])], &[]);
        assert!(matches!(
            z_abcd(&l, Budget(1)),
            Err(Error::BudgetExceeded { edges: 2, budget: 1 })
        ));
    }
}
