//! Ribbon graphs as signed rotation systems.
//!
//! Half-edges ("darts") are numbered `2 * edge + end`, so the edge of a dart
//! is `d / 2` and its partner is `d ^ 1`. A gap index `i` at a vertex names
//! the arc of the disk boundary just before rotation entry `i`; gaps run
//! over `0..=len` with `len` naming the same arc as `0`.

mod decomposition;
mod json;
mod state;
mod surgery;

use std::collections::{HashMap, HashSet};

pub use decomposition::{MarkedPiece, PartitionTag, PieceSlot, SplitState, TwoDecomposition};
pub use json::{DecompositionSpec, EdgeSpec, GraphSpec, PieceRef, PieceSpec, SlotSpec, VertexSpec};
pub use state::{BoundaryOrbits, Metrics, SpanningState, Tracer};
pub use json::{load_decomposition, load_graph, load_piece};
pub use surgery::{GTilde, Provenance};

use crate::error::{Error, Result, Violation};
use crate::poly::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    /// Darts in counterclockwise order.
    pub rotation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub half_ids: [String; 2],
    pub twisted: bool,
    pub weight: Var,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    dart_vertex: Vec<usize>,
    dart_pos: Vec<usize>,
}

pub fn default_weight(edge_id: &str) -> Var {
    Var::from(format!("x_{edge_id}"))
}

impl RibbonGraph {
    /// Builds a graph from already-consistent parts. Every dart of every edge
    /// must sit in exactly one rotation.
    pub(crate) fn from_parts(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let n = 2 * edges.len();
        let mut dart_vertex = vec![usize::MAX; n];
        let mut dart_pos = vec![usize::MAX; n];
        for (vi, v) in vertices.iter().enumerate() {
            for (p, &d) in v.rotation.iter().enumerate() {
                if d >= n || dart_vertex[d] != usize::MAX {
                    return Err(Error::Internal(format!(
                        "dart {d} misplaced while building rotation of `{}`",
                        v.id
                    )));
                }
                dart_vertex[d] = vi;
                dart_pos[d] = p;
            }
        }
        if let Some(d) = dart_vertex.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Internal(format!(
                "half-edge `{}` not placed in any rotation",
                edges[d / 2].half_ids[d % 2]
            )));
        }
        Ok(RibbonGraph {
            vertices,
            edges,
            dart_vertex,
            dart_pos,
        })
    }

    /// Compact constructor: each rotation lists edge ids; an edge's first
    /// occurrence (scanning vertices in order) is its end 0. Half-edges are
    /// named `{edge}.0` and `{edge}.1`. Edges in `twisted` get a half-twist.
    pub fn from_edge_rotations(vertices: &[(&str, &[&str])], twisted: &[&str]) -> Result<Self> {
        let mut edge_index: HashMap<&str, usize> = HashMap::new();
        let mut seen: Vec<u8> = Vec::new();
        let mut order: Vec<&str> = Vec::new();
        let mut verts = Vec::with_capacity(vertices.len());
        for (vid, rot) in vertices {
            let mut rotation = Vec::with_capacity(rot.len());
            for &e in rot.iter() {
                let idx = *edge_index.entry(e).or_insert_with(|| {
                    order.push(e);
                    seen.push(0);
                    order.len() - 1
                });
                if seen[idx] >= 2 {
                    return Err(Error::Parse(format!("edge `{e}` listed more than twice")));
                }
                rotation.push(2 * idx + seen[idx] as usize);
                seen[idx] += 1;
            }
            verts.push(Vertex {
                id: vid.to_string(),
                rotation,
            });
        }
        if let Some(i) = seen.iter().position(|&c| c != 2) {
            return Err(Error::Parse(format!("edge `{}` listed only once", order[i])));
        }
        for t in twisted {
            if !edge_index.contains_key(t) {
                return Err(Error::UnknownEdge(t.to_string()));
            }
        }
        let edges = order
            .iter()
            .map(|&e| Edge {
                id: e.to_string(),
                half_ids: [format!("{e}.0"), format!("{e}.1")],
                twisted: twisted.contains(&e),
                weight: default_weight(e),
            })
            .collect();
        let g = RibbonGraph::from_parts(verts, edges)?;
        let violations = g.to_spec().validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(violations))
        }
    }

    /// `n` isolated vertices named `v0..`.
    pub fn isolated(n: usize) -> Self {
        let vertices = (0..n)
            .map(|i| Vertex {
                id: format!("v{i}"),
                rotation: Vec::new(),
            })
            .collect();
        RibbonGraph::from_parts(vertices, Vec::new()).expect("no darts to place")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.vertices[v].rotation
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].rotation.len()
    }

    pub fn dart_vertex(&self, d: usize) -> usize {
        self.dart_vertex[d]
    }

    pub fn dart_pos(&self, d: usize) -> usize {
        self.dart_pos[d]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.dart_vertex[2 * e], self.dart_vertex[2 * e + 1])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, w) = self.endpoints(e);
        u == w
    }

    pub fn is_twisted(&self, e: usize) -> bool {
        self.edges[e].twisted
    }

    pub fn weight(&self, e: usize) -> &Var {
        &self.edges[e].weight
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn check_gap(&self, v: usize, gap: usize) -> Result<()> {
        let degree = self.degree(v);
        if gap > degree {
            return Err(Error::InvalidGap {
                vertex: self.vertices[v].id.clone(),
                gap,
                degree,
            });
        }
        Ok(())
    }

    /// True when every edge is untwisted.
    pub fn is_untwisted(&self) -> bool {
        self.edges.iter().all(|e| !e.twisted)
    }

    pub fn with_weights(mut self, weights: impl IntoIterator<Item = Var>) -> Self {
        for (e, w) in self.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        self
    }

    pub fn with_weight(mut self, e: usize, w: Var) -> Self {
        self.edges[e].weight = w;
        self
    }

    /// Sets every weight to the single variable `v` (the `x_e -> b` specialization).
    pub fn with_uniform_weight(self, v: &Var) -> Self {
        let n = self.num_edges();
        self.with_weights(std::iter::repeat_n(v.clone(), n))
    }

    /// Returns the first weight label used by two or more edges.
    pub fn duplicate_weight(&self) -> Option<&Var> {
        let mut seen = HashSet::new();
        self.edges.iter().map(|e| &e.weight).find(|w| !seen.insert(*w))
    }

    /// Vertex flip: reverse the rotation at `v` and toggle the twist of every
    /// edge with exactly one end there. Describes the same ribbon surface.
    pub fn flip_vertex(&self, v: usize) -> RibbonGraph {
        let mut vertices = self.vertices.clone();
        vertices[v].rotation.reverse();
        let mut edges = self.edges.clone();
        for (e, edge) in edges.iter_mut().enumerate() {
            let (a, b) = self.endpoints(e);
            if (a == v) != (b == v) {
                edge.twisted = !edge.twisted;
            }
        }
        RibbonGraph::from_parts(vertices, edges).expect("flip keeps darts in place")
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    id: v.id.clone(),
                    rotation: v
                        .rotation
                        .iter()
                        .map(|&d| self.edges[d / 2].half_ids[d % 2].clone())
                        .collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    ends: e.half_ids.clone(),
                    twisted: e.twisted,
                    weight: Some(e.weight.to_string()),
                })
                .collect(),
        }
    }
}

impl GraphSpec {
    /// Every invariant violation, each naming the offending id.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut vids = HashSet::new();
        for v in &self.vertices {
            if !vids.insert(v.id.as_str()) {
                out.push(Violation::DuplicateVertexId(v.id.clone()));
            }
        }
        let mut eids = HashSet::new();
        for e in &self.edges {
            if !eids.insert(e.id.as_str()) {
                out.push(Violation::DuplicateEdgeId(e.id.clone()));
            }
        }
        let mut placed: HashMap<&str, &str> = HashMap::new();
        for v in &self.vertices {
            let mut local = HashSet::new();
            for h in &v.rotation {
                if !local.insert(h.as_str()) {
                    out.push(Violation::HalfEdgeRepeated {
                        half_edge: h.clone(),
                        vertex: v.id.clone(),
                    });
                    continue;
                }
                if let Some(prev) = placed.insert(h.as_str(), v.id.as_str()) {
                    if prev != v.id {
                        out.push(Violation::HalfEdgeInMultipleRotations(h.clone()));
                    }
                }
            }
        }
        let mut owner: HashMap<&str, &str> = HashMap::new();
        let mut reported = HashSet::new();
        for e in &self.edges {
            if e.ends[0] == e.ends[1] {
                out.push(Violation::EdgeEndsIdentical(e.id.clone()));
            }
            for h in &e.ends {
                if let Some(prev) = owner.insert(h.as_str(), e.id.as_str()) {
                    if prev != e.id && reported.insert(h.as_str()) {
                        out.push(Violation::HalfEdgeInMultipleEdges(h.clone()));
                    }
                }
                if !placed.contains_key(h.as_str()) && reported.insert(h.as_str()) {
                    out.push(Violation::HalfEdgeNotInRotation(h.clone()));
                }
            }
        }
        for v in &self.vertices {
            for h in &v.rotation {
                if !owner.contains_key(h.as_str()) && reported.insert(h.as_str()) {
                    out.push(Violation::HalfEdgeWithoutEdge(h.clone()));
                }
            }
        }
        out
    }

    pub fn build(&self) -> Result<RibbonGraph> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidGraph(violations));
        }
        let mut dart_of: HashMap<&str, usize> = HashMap::new();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                dart_of.insert(e.ends[0].as_str(), 2 * i);
                dart_of.insert(e.ends[1].as_str(), 2 * i + 1);
                Edge {
                    id: e.id.clone(),
                    half_ids: e.ends.clone(),
                    twisted: e.twisted,
                    weight: e
                        .weight
                        .as_deref()
                        .map(Var::new)
                        .unwrap_or_else(|| default_weight(&e.id)),
                }
            })
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                rotation: v.rotation.iter().map(|h| dart_of[h.as_str()]).collect(),
            })
            .collect();
        RibbonGraph::from_parts(vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> GraphSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn single_vertex_is_valid() {
        let s = spec(r#"{"vertices":[{"id":"v","rotation":[]}],"edges":[]}"#);
        assert!(s.validate().is_empty());
        assert_eq!(s.build().unwrap().num_vertices(), 1);
    }

    #[test]
    fn half_edge_in_two_rotations() {
        let s = spec(
            r#"{"vertices":[{"id":"u","rotation":["h","k"]},{"id":"w","rotation":["h"]}],
                "edges":[{"id":"e","ends":["h","k"],"twisted":false,"weight":null}]}"#,
        );
        assert_eq!(
            s.validate(),
            vec![Violation::HalfEdgeInMultipleRotations("h".into())]
        );
    }

    #[test]
    fn edge_with_missing_half_edge() {
        let s = spec(
            r#"{"vertices":[{"id":"u","rotation":["h"]}],
                "edges":[{"id":"e","ends":["h","zz"],"twisted":false,"weight":null}]}"#,
        );
        assert_eq!(s.validate(), vec![Violation::HalfEdgeNotInRotation("zz".into())]);
    }

    #[test]
    fn duplicate_ids_and_identical_ends() {
        let s = spec(
            r#"{"vertices":[{"id":"u","rotation":["h"]},{"id":"u","rotation":[]}],
                "edges":[{"id":"e","ends":["h","h"],"twisted":false,"weight":null}]}"#,
        );
        let v = s.validate();
        assert!(v.contains(&Violation::DuplicateVertexId("u".into())));
        assert!(v.contains(&Violation::EdgeEndsIdentical("e".into())));
    }

    #[test]
    fn compact_constructor_round_trips() {
        let g = RibbonGraph::from_edge_rotations(&[("u", &["e", "f"]), ("w", &["f", "e"])], &["f"])
            .unwrap();
        assert_eq!(g.num_edges(), 2);
        assert!(g.is_twisted(1));
        assert_eq!(g.weight(0).as_str(), "x_e");
        let back = g.to_spec().build().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn vertex_flip_is_an_involution() {
        let g = RibbonGraph::from_edge_rotations(
            &[("u", &["e", "l", "f", "l"]), ("w", &["f", "e"])],
            &[],
        )
        .unwrap();
        let f = g.flip_vertex(0);
        assert!(f.is_twisted(0) && f.is_twisted(2) && !f.is_twisted(1));
        assert_eq!(f.flip_vertex(0), g);
    }
}
