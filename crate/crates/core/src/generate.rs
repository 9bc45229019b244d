//! Seeded random ribbon graphs, marked pieces and decompositions, and an
//! exhaustive enumeration of small ribbon graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ribbon::{default_weight, Edge, MarkedPiece, PieceSlot, RibbonGraph, TwoDecomposition, Vertex};
use crate::statesum::{eta_sums_full, Budget};

pub type Seeded = ChaCha8Rng;

pub fn seeded(seed: u64) -> Seeded {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Builds a graph from per-edge endpoints, per-vertex rotations of darts
/// (`2e` and `2e + 1` are the two ends of edge `e`) and twist flags.
fn assemble_graph(rotations: Vec<Vec<usize>>, twisted: &[bool], prefix: &str) -> RibbonGraph {
    let vertices = rotations
        .into_iter()
        .enumerate()
        .map(|(i, rotation)| Vertex {
            id: format!("v{i}"),
            rotation,
        })
        .collect();
    let edges = twisted
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let id = format!("{prefix}{i}");
            Edge {
                half_ids: [format!("{id}.0"), format!("{id}.1")],
                twisted: t,
                weight: default_weight(&id),
                id,
            }
        })
        .collect();
    RibbonGraph::from_parts(vertices, edges).expect("generated darts are placed once")
}

/// A random ribbon graph: endpoints uniform (loops allowed), each dart
/// inserted at a uniform position of its rotation, each edge twisted with
/// probability `twist_prob`.
pub fn random_graph(rng: &mut Seeded, vertices: usize, edges: usize, twist_prob: f64) -> RibbonGraph {
    random_graph_named(rng, vertices, edges, twist_prob, "e")
}

fn random_graph_named(
    rng: &mut Seeded,
    vertices: usize,
    edges: usize,
    twist_prob: f64,
    prefix: &str,
) -> RibbonGraph {
    let vertices = vertices.max(1);
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut twisted = Vec::with_capacity(edges);
    for e in 0..edges {
        for end in 0..2 {
            let v = rng.gen_range(0..vertices);
            let pos = rng.gen_range(0..=rotations[v].len());
            rotations[v].insert(pos, 2 * e + end);
        }
        twisted.push(twist_prob > 0.0 && rng.gen_bool(twist_prob));
    }
    assemble_graph(rotations, &twisted, prefix)
}

/// A random connected ribbon graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(rng: &mut Seeded, vertices: usize, edges: usize, twist_prob: f64) -> RibbonGraph {
    let vertices = vertices.clamp(1, edges + 1);
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut twisted = Vec::with_capacity(edges);
    let mut place = |rng: &mut Seeded, v: usize, dart: usize| {
        let pos = rng.gen_range(0..=rotations[v].len());
        rotations[v].insert(pos, dart);
    };
    for e in 0..edges {
        let (a, b) = if e + 1 < vertices {
            (rng.gen_range(0..=e), e + 1)
        } else {
            (rng.gen_range(0..vertices), rng.gen_range(0..vertices))
        };
        place(rng, a, 2 * e);
        place(rng, b, 2 * e + 1);
        twisted.push(twist_prob > 0.0 && rng.gen_bool(twist_prob));
    }
    assemble_graph(rotations, &twisted, "e")
}

/// Which pieces [`random_piece`] may return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Any piece, twisted edges allowed.
    Any,
    /// Untwisted pieces.
    Orientable,
    /// Untwisted pieces whose `A_e` has genus 0.
    Planar,
    /// Untwisted pieces with a state whose marks share a component but not a
    /// boundary walk (`η̈¹ ≠ 0`).
    Interlaced,
}

/// A random marked piece with 2–3 vertices and at most `max_edges` edges,
/// marks on vertices 0 and 1, drawn by rejection until it has `kind`.
pub fn random_piece(rng: &mut Seeded, max_edges: usize, kind: PieceKind, budget: Budget) -> Result<MarkedPiece> {
    loop {
        let v = rng.gen_range(2..=3);
        let min_edges = if kind == PieceKind::Interlaced { 2 } else { 0 };
        let e = rng.gen_range(min_edges..=max_edges.max(min_edges));
        let twist = if kind == PieceKind::Any { 0.3 } else { 0.0 };
        let g = random_graph_named(rng, v, e, twist, "h");
        let m = rng.gen_range(0..g.degree(0).max(1));
        let n = rng.gen_range(0..g.degree(1).max(1));
        let piece = MarkedPiece::new(g, 0, 1, m, n)?;
        let keep = match kind {
            PieceKind::Any | PieceKind::Orientable => true,
            PieceKind::Planar => piece.is_planar()?,
            PieceKind::Interlaced => !eta_sums_full(&piece, budget)?.ddot1.is_zero(),
        };
        if keep {
            return Ok(piece);
        }
    }
}

/// A random decomposition: a template with 1..=`max_template_edges` edges
/// (loops and positive genus allowed, untwisted unless `kind` is `Any`) and
/// one piece per edge, keeping the total at most `max_total_edges`. When
/// `interlaced_slot` is set, the first slot is forced to have `η̈¹ ≠ 0`.
pub fn random_decomposition(
    rng: &mut Seeded,
    max_template_edges: usize,
    max_total_edges: usize,
    kind: PieceKind,
    interlaced_slot: bool,
    budget: Budget,
) -> Result<TwoDecomposition> {
    let te = rng.gen_range(1..=max_template_edges.max(1));
    let tv = rng.gen_range(1..=te + 1);
    let twist = if kind == PieceKind::Any { 0.3 } else { 0.0 };
    let template = random_graph_named(rng, tv, te, twist, "t");
    let per_piece = (max_total_edges / te).max(1);
    let mut slots = Vec::with_capacity(te);
    for i in 0..te {
        let k = if i == 0 && interlaced_slot { PieceKind::Interlaced } else { kind };
        let piece = random_piece(rng, per_piece.min(4), k, budget)?;
        slots.push(PieceSlot {
            piece,
            swap_ends: rng.gen_bool(0.5),
            flip: rng.gen_bool(0.5),
        });
    }
    TwoDecomposition::new(template, slots)
}

fn cyclic_orders(darts: &[usize]) -> Vec<Vec<usize>> {
    fn permute(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let d = rest.remove(i);
            prefix.push(d);
            permute(rest, prefix, out);
            prefix.pop();
            rest.insert(i, d);
        }
    }
    match darts.split_first() {
        None => vec![Vec::new()],
        Some((&first, rest)) => {
            let mut out = Vec::new();
            permute(&mut rest.to_vec(), &mut vec![first], &mut out);
            out
        }
    }
}

/// Every ribbon graph with `edges` edges and no isolated vertices, up to
/// relabelling vertices: endpoint sequences in restricted-growth form (a
/// vertex is first used only after all lower-numbered ones), all cyclic
/// orders at each vertex (first dart fixed) and, when `with_twists`, all
/// twist patterns. With no edges this is the single vertex.
pub fn enumerate_graphs(edges: usize, with_twists: bool) -> Vec<RibbonGraph> {
    let mut sequences = Vec::new();
    grow(&mut Vec::new(), 2 * edges, &mut sequences);
    let mut out = Vec::new();
    for seq in sequences {
        let vertices = seq.iter().max().map_or(1, |m| m + 1);
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertices];
        for (dart, &v) in seq.iter().enumerate() {
            incident[v].push(dart);
        }
        let per_vertex: Vec<Vec<Vec<usize>>> = incident.iter().map(|d| cyclic_orders(d)).collect();
        let mut idx = vec![0usize; vertices];
        loop {
            let rotations: Vec<Vec<usize>> = (0..vertices).map(|v| per_vertex[v][idx[v]].clone()).collect();
            let twist_patterns = if with_twists { 1u32 << edges } else { 1 };
            for t in 0..twist_patterns {
                let twisted: Vec<bool> = (0..edges).map(|e| t >> e & 1 == 1).collect();
                out.push(assemble_graph(rotations.clone(), &twisted, "e"));
            }
            let mut v = 0;
            while v < vertices {
                idx[v] += 1;
                if idx[v] < per_vertex[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
            if v == vertices {
                break;
            }
        }
    }
    out
}

fn grow(prefix: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    let next = prefix.iter().max().map_or(0, |m| m + 1);
    for v in 0..=next {
        prefix.push(v);
        grow(prefix, len, out);
        prefix.pop();
    }
}

/// All graphs from [`enumerate_graphs`] with at most `max_edges` edges.
pub fn all_small_graphs(max_edges: usize, with_twists: bool) -> Vec<RibbonGraph> {
    (0..=max_edges)
        .flat_map(|e| enumerate_graphs(e, with_twists))
        .collect()
}
