use std::collections::HashSet;

use super::{default_weight, Edge, MarkedPiece, RibbonGraph, Vertex};
use crate::error::{Error, Result};
use crate::poly::Var;

/// Where an edge of a spliced graph came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// An edge of the template kept as is.
    Template(usize),
    /// Edge `piece_edge` of the piece glued in place of `template_edge`.
    Piece {
        template_edge: usize,
        piece_edge: usize,
    },
}

/// One template edge to be replaced during a splice.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Replacement<'a> {
    pub piece: &'a MarkedPiece,
    pub swap_ends: bool,
    pub flip: bool,
}

/// Drops the edges flagged in `remove` and renumbers darts.
fn compact(vertices: Vec<Vertex>, edges: Vec<Edge>, remove: &[bool]) -> Result<RibbonGraph> {
    let mut new_index = vec![usize::MAX; edges.len()];
    let mut kept = Vec::with_capacity(edges.len());
    for (i, e) in edges.into_iter().enumerate() {
        if !remove[i] {
            new_index[i] = kept.len();
            kept.push(e);
        }
    }
    let vertices = vertices
        .into_iter()
        .map(|v| Vertex {
            id: v.id,
            rotation: v
                .rotation
                .into_iter()
                .filter(|&d| !remove[d / 2])
                .map(|d| 2 * new_index[d / 2] + d % 2)
                .collect(),
        })
        .collect();
    RibbonGraph::from_parts(vertices, kept)
}

/// The rotation read as a linear sequence starting at gap `gap`.
fn opened(rot: &[usize], gap: usize) -> Vec<usize> {
    let g = if rot.is_empty() { 0 } else { gap % rot.len() };
    rot[g..].iter().chain(&rot[..g]).copied().collect()
}

fn fresh(base: &str, taken: &HashSet<&str>) -> String {
    let mut id = base.to_string();
    while taken.contains(id.as_str()) {
        id.push('\'');
    }
    id
}

impl RibbonGraph {
    pub fn delete(&self, e: usize) -> Result<RibbonGraph> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e.to_string()));
        }
        let mut remove = vec![false; self.num_edges()];
        remove[e] = true;
        compact(self.vertices().to_vec(), self.edges().to_vec(), &remove)
    }

    pub fn delete_id(&self, id: &str) -> Result<RibbonGraph> {
        self.delete(self.edge_index(id)?)
    }

    /// Contracts a non-loop edge, merging its endpoints into the first one.
    /// A twisted edge is first made untwisted by flipping its second endpoint.
    pub fn contract_nonloop(&self, e: usize) -> Result<RibbonGraph> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e.to_string()));
        }
        if self.is_loop(e) {
            return Err(Error::LoopContraction(self.edge(e).id.clone()));
        }
        let (u, w) = self.endpoints(e);
        let g = if self.is_twisted(e) {
            self.flip_vertex(w)
        } else {
            self.clone()
        };
        debug_assert!(!g.is_twisted(e));
        let after = |v: usize, d: usize| {
            let rot = g.rotation(v);
            opened(rot, g.dart_pos(d) + 1)[..rot.len() - 1].to_vec()
        };
        let mut merged = after(u, 2 * e);
        merged.extend(after(w, 2 * e + 1));
        let mut vertices = Vec::with_capacity(g.num_vertices() - 1);
        for (i, v) in g.vertices().iter().enumerate() {
            if i == u {
                vertices.push(Vertex {
                    id: v.id.clone(),
                    rotation: merged.clone(),
                });
            } else if i != w {
                vertices.push(v.clone());
            }
        }
        let mut remove = vec![false; g.num_edges()];
        remove[e] = true;
        compact(vertices, g.edges().to_vec(), &remove)
    }

    pub fn contract_id(&self, id: &str) -> Result<RibbonGraph> {
        self.contract_nonloop(self.edge_index(id)?)
    }

    /// Adds an edge from gap `gu` at `u` to gap `gw` at `w` (distinct
    /// vertices). Returns the new graph and the new edge's index.
    pub fn insert_edge(
        &self,
        u: usize,
        gu: usize,
        w: usize,
        gw: usize,
        twisted: bool,
        id: &str,
        weight: Option<Var>,
    ) -> Result<(RibbonGraph, usize)> {
        if u >= self.num_vertices() {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        if w >= self.num_vertices() {
            return Err(Error::UnknownVertex(w.to_string()));
        }
        if u == w {
            return Err(Error::SameEndpoints(self.vertex(u).id.clone()));
        }
        self.check_gap(u, gu)?;
        self.check_gap(w, gw)?;
        let taken: HashSet<&str> = self.edges().iter().map(|e| e.id.as_str()).collect();
        let id = fresh(id, &taken);
        let halves: HashSet<&str> = self
            .edges()
            .iter()
            .flat_map(|e| e.half_ids.iter().map(String::as_str))
            .collect();
        let h0 = fresh(&format!("{id}.0"), &halves);
        let h1 = fresh(&format!("{id}.1"), &halves);
        let ne = self.num_edges();
        let mut edges = self.edges().to_vec();
        edges.push(Edge {
            weight: weight.unwrap_or_else(|| default_weight(&id)),
            id,
            half_ids: [h0, h1],
            twisted,
        });
        let mut vertices = self.vertices().to_vec();
        vertices[u].rotation.insert(gu, 2 * ne);
        vertices[w].rotation.insert(gw, 2 * ne + 1);
        Ok((RibbonGraph::from_parts(vertices, edges)?, ne))
    }

    /// Replaces every template edge that has a replacement by its piece. The
    /// piece's `u` rotation, opened at its marked gap, takes the place of the
    /// edge's first end (second end if `swap_ends`), and `w` takes the other.
    /// Piece ids are prefixed by `{template edge id}:`; weights are kept.
    pub(crate) fn splice(
        &self,
        replacements: &[Option<Replacement<'_>>],
    ) -> Result<(RibbonGraph, Vec<Provenance>)> {
        let ne = self.num_edges();
        let mut edges = self.edges().to_vec();
        let mut provenance: Vec<Provenance> = (0..ne).map(Provenance::Template).collect();
        let mut remove = vec![false; ne];
        // Each template dart maps to the sequence that replaces it.
        let mut dart_seq: Vec<Option<Vec<usize>>> = vec![None; 2 * ne];
        let mut extra_vertices = Vec::new();
        for (e, rep) in replacements.iter().enumerate() {
            let Some(rep) = rep else { continue };
            remove[e] = true;
            let piece = rep.piece;
            let h = piece.graph();
            let prefix = &self.edge(e).id;
            let offset = edges.len();
            for (j, pe) in h.edges().iter().enumerate() {
                edges.push(Edge {
                    id: format!("{prefix}:{}", pe.id),
                    half_ids: [
                        format!("{prefix}:{}", pe.half_ids[0]),
                        format!("{prefix}:{}", pe.half_ids[1]),
                    ],
                    twisted: pe.twisted,
                    weight: pe.weight.clone(),
                });
                provenance.push(Provenance::Piece {
                    template_edge: e,
                    piece_edge: j,
                });
                remove.push(false);
            }
            let map = |d: usize| 2 * offset + d;
            let rot = |v: usize| -> Vec<usize> {
                let mut r: Vec<usize> = h.rotation(v).iter().map(|&d| map(d)).collect();
                if rep.flip {
                    r.reverse();
                }
                r
            };
            let gap = |v: usize, g: usize| if rep.flip { h.degree(v) - g } else { g };
            let seq_u = opened(&rot(piece.u()), gap(piece.u(), piece.m_arc()));
            let seq_w = opened(&rot(piece.w()), gap(piece.w(), piece.n_arc()));
            let (first, second) = if rep.swap_ends {
                (seq_w, seq_u)
            } else {
                (seq_u, seq_w)
            };
            dart_seq[2 * e] = Some(first);
            dart_seq[2 * e + 1] = Some(second);
            for (vi, v) in h.vertices().iter().enumerate() {
                if vi != piece.u() && vi != piece.w() {
                    extra_vertices.push(Vertex {
                        id: format!("{prefix}:{}", v.id),
                        rotation: rot(vi),
                    });
                }
            }
        }
        let mut vertices: Vec<Vertex> = self
            .vertices()
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                rotation: v
                    .rotation
                    .iter()
                    .flat_map(|&d| match &dart_seq[d] {
                        Some(seq) => seq.clone(),
                        None => vec![d],
                    })
                    .collect(),
            })
            .collect();
        vertices.extend(extra_vertices);
        let kept: Vec<Provenance> = provenance
            .into_iter()
            .zip(&remove)
            .filter(|(_, &r)| !r)
            .map(|(p, _)| p)
            .collect();
        Ok((compact(vertices, edges, &remove)?, kept))
    }

    /// 2-sum along template edge `e` with a marked piece.
    pub fn two_sum(
        &self,
        e: usize,
        piece: &MarkedPiece,
        swap_ends: bool,
        flip: bool,
    ) -> Result<RibbonGraph> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e.to_string()));
        }
        let mut reps = vec![None; self.num_edges()];
        reps[e] = Some(Replacement {
            piece,
            swap_ends,
            flip,
        });
        Ok(self.splice(&reps)?.0)
    }

    /// Tensor product with a piece: every edge `e` is replaced by a copy
    /// whose `j`-th edge carries the weight `x_{e}_{j}` (1-based). The marked
    /// vertices must be connected in the piece.
    pub fn tensor(&self, piece: &MarkedPiece) -> Result<RibbonGraph> {
        if !piece.marks_connected() {
            let h = piece.graph();
            return Err(Error::Disconnected(
                h.vertex(piece.u()).id.clone(),
                h.vertex(piece.w()).id.clone(),
            ));
        }
        self.tensor_relaxed(piece)
    }

    /// [`RibbonGraph::tensor`] without the connectivity requirement.
    pub fn tensor_relaxed(&self, piece: &MarkedPiece) -> Result<RibbonGraph> {
        let copies: Vec<MarkedPiece> = self
            .edges()
            .iter()
            .map(|e| {
                let n = piece.graph().num_edges();
                piece.relabeled((1..=n).map(|j| Var::from(format!("x_{}_{j}", e.id))))
            })
            .collect();
        let reps: Vec<_> = copies
            .iter()
            .map(|p| {
                Some(Replacement {
                    piece: p,
                    swap_ends: false,
                    flip: false,
                })
            })
            .collect();
        Ok(self.splice(&reps)?.0)
    }
}

/// A template with each edge replaced by an edge `g_e` and an interlaced loop
/// `f_e` (the graph G̃).
#[derive(Clone, Debug)]
pub struct GTilde {
    pub graph: RibbonGraph,
    /// Index in `graph` of `f_e` and `g_e` for each template edge.
    pub f_edges: Vec<usize>,
    pub g_edges: Vec<usize>,
    pub f_labels: Vec<Var>,
    pub g_labels: Vec<Var>,
}

impl MarkedPiece {
    /// The local piece `T − e` of G̃: `u` carries the loop `f` around the end
    /// of the edge `g`, i.e. rotation `(f, g, f)`, and `w` carries only `g`.
    pub fn gtilde_local(f_label: Var, g_label: Var) -> Result<MarkedPiece> {
        let h = RibbonGraph::from_edge_rotations(&[("u", &["f", "g", "f"]), ("w", &["g"])], &[])?;
        let h = h.with_weights([f_label, g_label]);
        MarkedPiece::new(h, 0, 1, 0, 0)
    }
}

impl RibbonGraph {
    pub fn build_gtilde(&self) -> Result<GTilde> {
        let mut pieces = Vec::with_capacity(self.num_edges());
        let mut f_labels = Vec::new();
        let mut g_labels = Vec::new();
        for e in self.edges() {
            let f = Var::from(format!("f_{}", e.id));
            let g = Var::from(format!("g_{}", e.id));
            let t = MarkedPiece::gtilde_local(f.clone(), g.clone())?;
            t.check_gtilde_configurations()?;
            pieces.push(t);
            f_labels.push(f);
            g_labels.push(g);
        }
        let reps: Vec<_> = pieces
            .iter()
            .map(|p| {
                Some(Replacement {
                    piece: p,
                    swap_ends: false,
                    flip: false,
                })
            })
            .collect();
        let (graph, prov) = self.splice(&reps)?;
        let mut f_edges = vec![usize::MAX; self.num_edges()];
        let mut g_edges = vec![usize::MAX; self.num_edges()];
        for (i, p) in prov.iter().enumerate() {
            if let Provenance::Piece {
                template_edge,
                piece_edge,
            } = *p
            {
                if piece_edge == 0 {
                    f_edges[template_edge] = i;
                } else {
                    g_edges[template_edge] = i;
                }
            }
        }
        Ok(GTilde {
            graph,
            f_edges,
            g_edges,
            f_labels,
            g_labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::SpanningState;

    fn g(rot: &[(&str, &[&str])]) -> RibbonGraph {
        RibbonGraph::from_edge_rotations(rot, &[]).unwrap()
    }

    #[test]
    fn contract_single_edge() {
        let k2 = g(&[("u", &["e"]), ("w", &["e"])]);
        let c = k2.contract_nonloop(0).unwrap();
        assert_eq!((c.num_vertices(), c.num_edges()), (1, 0));
    }

    #[test]
    fn contract_triangle_edge_gives_digon() {
        let c3 = g(&[("a", &["x", "z"]), ("b", &["y", "x"]), ("c", &["z", "y"])]);
        let d = c3.contract_nonloop(0).unwrap();
        assert_eq!((d.num_vertices(), d.num_edges()), (2, 2));
        assert_eq!(SpanningState::full(&d).metrics().boundary, 2);
    }

    #[test]
    fn loop_contraction_rejected() {
        let l = g(&[("v", &["e", "e"])]);
        let err = l.contract_nonloop(0).unwrap_err().to_string();
        assert!(err.contains("loop contraction unsupported"));
    }

    #[test]
    fn insert_into_isolated_pair() {
        let (k2, e) = RibbonGraph::isolated(2)
            .insert_edge(0, 0, 1, 0, false, "e", None)
            .unwrap();
        assert_eq!(e, 0);
        assert_eq!(k2.endpoints(0), (0, 1));
        assert!(RibbonGraph::isolated(2)
            .insert_edge(0, 1, 1, 0, false, "e", None)
            .is_err());
    }

    #[test]
    fn gtilde_of_single_edge() {
        let k2 = g(&[("u", &["e"]), ("w", &["e"])]);
        let t = k2.build_gtilde().unwrap();
        assert_eq!((t.graph.num_vertices(), t.graph.num_edges()), (2, 2));
        assert!(t.graph.is_loop(t.f_edges[0]));
        assert_eq!(t.graph.weight(t.g_edges[0]).as_str(), "g_e");
    }
}
