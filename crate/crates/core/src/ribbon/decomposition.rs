use super::surgery::Replacement;
use super::{Provenance, RibbonGraph, SpanningState, Tracer};
use crate::error::{Error, Result};
use crate::poly::Var;

/// A piece `H_e` with marked vertices `u ≠ w` and the gaps `m`, `n` where
/// the distinguished edge of `A_e` attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPiece {
    graph: RibbonGraph,
    u: usize,
    w: usize,
    m: usize,
    n: usize,
}

/// Where the two marks of a piece sit relative to each other in a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartitionTag {
    /// Same boundary walk (hence same component): `S̄¹`.
    SameBoundary,
    /// Same component, different boundary walks: `S̈¹`.
    SameComponent,
    /// Different components: `S̈²`.
    Separated,
}

impl PartitionTag {
    pub fn connected(self) -> bool {
        self != PartitionTag::Separated
    }
}

impl MarkedPiece {
    pub fn new(graph: RibbonGraph, u: usize, w: usize, m: usize, n: usize) -> Result<Self> {
        if u >= graph.num_vertices() {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        if w >= graph.num_vertices() {
            return Err(Error::UnknownVertex(w.to_string()));
        }
        if u == w {
            return Err(Error::SameEndpoints(graph.vertex(u).id.clone()));
        }
        graph.check_gap(u, m)?;
        graph.check_gap(w, n)?;
        Ok(MarkedPiece { graph, u, w, m, n })
    }

    /// Marks a piece by vertex ids.
    pub fn with_ids(graph: RibbonGraph, u: &str, w: &str, m: usize, n: usize) -> Result<Self> {
        let (u, w) = (graph.vertex_index(u)?, graph.vertex_index(w)?);
        MarkedPiece::new(graph, u, w, m, n)
    }

    /// A single edge from `u` to `w`; tensoring with it changes nothing.
    pub fn single_edge() -> Self {
        let h = RibbonGraph::from_edge_rotations(&[("u", &["a"]), ("w", &["a"])], &[])
            .expect("valid edge");
        MarkedPiece::new(h, 0, 1, 0, 0).expect("valid marks")
    }

    /// `A = C₃`: the piece is the path `u, v, w` with edges `a`, `b`.
    pub fn triangle() -> Self {
        let h = RibbonGraph::from_edge_rotations(&[("u", &["a"]), ("v", &["a", "b"]), ("w", &["b"])], &[])
            .expect("valid path");
        MarkedPiece::new(h, 0, 2, 0, 0).expect("valid marks")
    }

    /// `u` and `w` joined by two parallel edges.
    pub fn digon() -> Self {
        let h = RibbonGraph::from_edge_rotations(&[("u", &["a", "b"]), ("w", &["b", "a"])], &[])
            .expect("valid digon");
        MarkedPiece::new(h, 0, 1, 0, 0).expect("valid marks")
    }

    pub fn graph(&self) -> &RibbonGraph {
        &self.graph
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn m_arc(&self) -> usize {
        self.m
    }

    pub fn n_arc(&self) -> usize {
        self.n
    }

    pub fn relabeled(&self, weights: impl IntoIterator<Item = Var>) -> MarkedPiece {
        MarkedPiece {
            graph: self.graph.clone().with_weights(weights),
            ..self.clone()
        }
    }

    /// `A_e` (or `A_ẽ` when `twisted`): the piece with the distinguished edge
    /// inserted at the marked gaps. Returns the graph and the edge's index.
    pub fn with_edge(&self, twisted: bool) -> Result<(RibbonGraph, usize)> {
        self.graph
            .insert_edge(self.u, self.m, self.w, self.n, twisted, "e", None)
    }

    /// `A_e / e` (or `A_ẽ / ẽ`).
    pub fn contracted(&self, twisted: bool) -> Result<RibbonGraph> {
        let (a, e) = self.with_edge(twisted)?;
        a.contract_nonloop(e)
    }

    pub fn marks_connected(&self) -> bool {
        let c = Tracer::new(&self.graph).components(&vec![true; self.graph.num_edges()]);
        c[self.u] == c[self.w]
    }

    pub fn tag(&self, tracer: &mut Tracer<'_>, included: &[bool]) -> PartitionTag {
        let comp = tracer.components(included);
        if comp[self.u] != comp[self.w] {
            return PartitionTag::Separated;
        }
        let o = tracer.orbits(included);
        if o.orbit(self.u, self.m) == o.orbit(self.w, self.n) {
            PartitionTag::SameBoundary
        } else {
            PartitionTag::SameComponent
        }
    }

    pub fn tag_of(&self, included: &[bool]) -> PartitionTag {
        self.tag(&mut Tracer::new(&self.graph), included)
    }

    /// `A_e` has genus 0: `2k − ∂ + e − v = 0` on its full state.
    pub fn is_planar(&self) -> Result<bool> {
        let (a, _) = self.with_edge(false)?;
        let m = SpanningState::full(&a).metrics();
        Ok(m.gamma_exponent() == 0 && !m.nonorientable)
    }

    pub fn is_untwisted(&self) -> bool {
        self.graph.is_untwisted()
    }

    /// The four configurations of the G̃ local piece, with `f` edge 0 and `g`
    /// edge 1: `{g}` puts the marks on one walk, `{f,g}` on two walks of one
    /// component, `{f}` and `∅` separate them, and `{f}` has one more walk
    /// than `∅`.
    pub(crate) fn check_gtilde_configurations(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::ConstructionCheck(msg.to_string()));
        if self.tag_of(&[false, true]) != PartitionTag::SameBoundary {
            return fail("state {g} must put both marks on one boundary walk");
        }
        if self.tag_of(&[true, true]) != PartitionTag::SameComponent {
            return fail("state {f,g} must put the marks on distinct walks of one component");
        }
        if self.tag_of(&[true, false]) != PartitionTag::Separated
            || self.tag_of(&[false, false]) != PartitionTag::Separated
        {
            return fail("states {f} and {} must separate the marks");
        }
        let mut t = Tracer::new(&self.graph);
        if t.metrics(&[true, false]).boundary != t.metrics(&[false, false]).boundary + 1 {
            return fail("state {f} must have exactly one more boundary walk than {}");
        }
        Ok(())
    }
}

/// The piece glued in place of one template edge and how it is glued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceSlot {
    pub piece: MarkedPiece,
    /// Glue `u` to the template edge's second end instead of its first.
    pub swap_ends: bool,
    /// Reverse every rotation of the piece before gluing.
    pub flip: bool,
}

impl PieceSlot {
    pub fn plain(piece: MarkedPiece) -> Self {
        PieceSlot {
            piece,
            swap_ends: false,
            flip: false,
        }
    }
}

/// A template `G` with one marked piece per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoDecomposition {
    template: RibbonGraph,
    slots: Vec<PieceSlot>,
}

/// A state of the assembled graph seen through the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitState {
    pub template: Vec<bool>,
    pub pieces: Vec<Vec<bool>>,
    pub tags: Vec<PartitionTag>,
}

impl TwoDecomposition {
    pub fn new(template: RibbonGraph, slots: Vec<PieceSlot>) -> Result<Self> {
        if slots.len() != template.num_edges() {
            return Err(Error::Parse(format!(
                "template has {} edges but {} pieces were given",
                template.num_edges(),
                slots.len()
            )));
        }
        Ok(TwoDecomposition { template, slots })
    }

    /// Same piece on every edge with default gluing.
    pub fn uniform(template: RibbonGraph, piece: &MarkedPiece) -> Self {
        let slots = (0..template.num_edges())
            .map(|_| PieceSlot::plain(piece.clone()))
            .collect();
        TwoDecomposition { template, slots }
    }

    pub fn template(&self) -> &RibbonGraph {
        &self.template
    }

    pub fn slots(&self) -> &[PieceSlot] {
        &self.slots
    }

    pub fn slots_mut(&mut self) -> &mut [PieceSlot] {
        &mut self.slots
    }

    pub fn total_edges(&self) -> usize {
        self.slots.iter().map(|s| s.piece.graph().num_edges()).sum()
    }

    /// Ĝ with the gluing choices stored in the slots.
    pub fn assemble(&self) -> Result<(RibbonGraph, Vec<Provenance>)> {
        let reps: Vec<_> = self
            .slots
            .iter()
            .map(|s| {
                Some(Replacement {
                    piece: &s.piece,
                    swap_ends: s.swap_ends,
                    flip: s.flip,
                })
            })
            .collect();
        self.template.splice(&reps)
    }

    /// Ĝ with explicit per-edge flips, overriding the stored ones.
    pub fn assemble_with_flips(&self, flips: &[bool]) -> Result<(RibbonGraph, Vec<Provenance>)> {
        let mut d = self.clone();
        for (s, &f) in d.slots.iter_mut().zip(flips) {
            s.flip = f;
        }
        d.assemble()
    }

    /// Reads the template state and per-piece states off a state of Ĝ.
    pub fn split_state(&self, provenance: &[Provenance], included: &[bool]) -> SplitState {
        let mut pieces: Vec<Vec<bool>> = self
            .slots
            .iter()
            .map(|s| vec![false; s.piece.graph().num_edges()])
            .collect();
        for (i, p) in provenance.iter().enumerate() {
            if let Provenance::Piece {
                template_edge,
                piece_edge,
            } = *p
            {
                pieces[template_edge][piece_edge] = included[i];
            }
        }
        let tags: Vec<PartitionTag> = self
            .slots
            .iter()
            .zip(&pieces)
            .map(|(s, st)| s.piece.tag_of(st))
            .collect();
        let template = tags.iter().map(|t| t.connected()).collect();
        SplitState {
            template,
            pieces,
            tags,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_piece_rebuilds_triangle() {
        let (a, e) = MarkedPiece::triangle().with_edge(false).unwrap();
        assert_eq!((a.num_vertices(), a.num_edges()), (3, 3));
        assert_eq!(a.endpoints(e), (0, 2));
        let m = SpanningState::full(&a).metrics();
        assert_eq!((m.k, m.boundary, m.t()), (1, 2, 0));
        let (at, _) = MarkedPiece::triangle().with_edge(true).unwrap();
        assert_eq!(SpanningState::full(&at).metrics().t(), 1);
    }

    #[test]
    fn triangle_piece_tags() {
        let p = MarkedPiece::triangle();
        assert_eq!(p.tag_of(&[true, true]), PartitionTag::SameBoundary);
        assert_eq!(p.tag_of(&[true, false]), PartitionTag::Separated);
        assert_eq!(p.tag_of(&[false, false]), PartitionTag::Separated);
    }

    #[test]
    fn gtilde_local_piece_configurations() {
        let t = MarkedPiece::gtilde_local("f".into(), "g".into()).unwrap();
        t.check_gtilde_configurations().unwrap();
        let mut tr = Tracer::new(t.graph());
        assert_eq!(tr.orbits(&[false, true]).count, 1);
    }

    #[test]
    fn marks_must_differ() {
        assert!(MarkedPiece::new(RibbonGraph::isolated(2), 1, 1, 0, 0).is_err());
        assert!(MarkedPiece::new(RibbonGraph::isolated(2), 0, 1, 1, 0).is_err());
    }

    #[test]
    fn empty_template_assembles_to_itself() {
        let g = RibbonGraph::isolated(3);
        let d = TwoDecomposition::new(g.clone(), vec![]).unwrap();
        assert_eq!(d.assemble().unwrap().0, g);
    }

    #[test]
    fn triangle_tensor_triangle() {
        let c3 = RibbonGraph::from_edge_rotations(
            &[("a", &["x", "z"]), ("b", &["y", "x"]), ("c", &["z", "y"])],
            &[],
        )
        .unwrap();
        let t = c3.tensor(&MarkedPiece::triangle()).unwrap();
        assert_eq!((t.num_vertices(), t.num_edges()), (6, 6));
        assert_eq!(t.weight(0).as_str(), "x_x_1");
        let d = TwoDecomposition::uniform(c3, &MarkedPiece::triangle());
        let (hat, prov) = d.assemble().unwrap();
        assert_eq!(hat.num_edges(), 6);
        let full = d.split_state(&prov, &[true; 6]);
        assert!(full.template.iter().all(|&x| x));
        let empty = d.split_state(&prov, &[false; 6]);
        assert!(empty.tags.iter().all(|&t| t == PartitionTag::Separated));
    }

    #[test]
    fn single_edge_tensor_is_identity() {
        let g = RibbonGraph::from_edge_rotations(&[("v", &["e", "f", "e", "f"])], &[]).unwrap();
        let t = g.tensor(&MarkedPiece::single_edge()).unwrap();
        assert_eq!(t.num_edges(), 2);
        assert_eq!(SpanningState::full(&t).metrics(), SpanningState::full(&g).metrics());
        assert!(g.tensor(&MarkedPiece::triangle()).is_ok());
    }
}
