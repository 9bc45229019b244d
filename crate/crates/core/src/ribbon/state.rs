use super::RibbonGraph;
use crate::error::{Error, Result};

/// Topological counts of one spanning state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Metrics {
    /// Connected components, `k(s)`.
    pub k: u32,
    /// Included edges, `e(s)`.
    pub e: u32,
    /// Vertices (always all of them).
    pub v: u32,
    /// Boundary components, `∂(s)`.
    pub boundary: u32,
    /// `t(s)`: the state's surface is non-orientable.
    pub nonorientable: bool,
}

impl Metrics {
    pub fn rank(&self) -> u32 {
        self.v - self.k
    }

    pub fn nullity(&self) -> u32 {
        self.e - self.rank()
    }

    /// `k − ∂ + n`: the γ exponent of the Bollobás-Riordan polynomial, which
    /// is twice the genus for an orientable state.
    pub fn gamma_exponent(&self) -> i64 {
        self.k as i64 - self.boundary as i64 + self.nullity() as i64
    }

    pub fn t(&self) -> u32 {
        self.nonorientable as u32
    }
}

/// Assignment of every gap at every vertex to a boundary walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryOrbits {
    pub count: usize,
    /// `gaps[v][i]` for `i` in `0..=degree(v)`; the last entry repeats the first.
    pub gaps: Vec<Vec<usize>>,
}

impl BoundaryOrbits {
    pub fn orbit(&self, v: usize, gap: usize) -> usize {
        self.gaps[v][gap]
    }
}

/// Reusable scratch space for computing state metrics of one graph.
pub struct Tracer<'g> {
    g: &'g RibbonGraph,
    corner: Vec<u32>,
    vert: Vec<u32>,
    parity: Vec<u8>,
    prev: Vec<usize>,
    buf: Vec<usize>,
}

fn find(p: &mut [u32], mut x: u32) -> u32 {
    while p[x as usize] != x {
        let up = p[p[x as usize] as usize];
        p[x as usize] = up;
        x = up;
    }
    x
}

fn union(p: &mut [u32], a: u32, b: u32) -> bool {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra == rb {
        return false;
    }
    p[ra as usize] = rb;
    true
}

impl<'g> Tracer<'g> {
    pub fn new(g: &'g RibbonGraph) -> Self {
        Tracer {
            g,
            corner: vec![0; 2 * g.num_edges()],
            vert: vec![0; g.num_vertices()],
            parity: vec![0; g.num_vertices()],
            prev: vec![usize::MAX; 2 * g.num_edges()],
            buf: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g RibbonGraph {
        self.g
    }

    /// Metrics of the state whose edges are the set bits of `mask`.
    pub fn metrics_mask(&mut self, mask: u64) -> Metrics {
        self.metrics_by(|e| mask >> e & 1 == 1)
    }

    pub fn metrics(&mut self, included: &[bool]) -> Metrics {
        self.metrics_by(|e| included[e])
    }

    /// Links every corner to its predecessor and unions corners along the
    /// sides of included ribbons. A corner is named by the included dart it
    /// starts at; returns the number of vertices without included darts.
    fn trace(&mut self, inc: &impl Fn(usize) -> bool) -> u32 {
        let g = self.g;
        let mut bare = 0;
        for (i, c) in self.corner.iter_mut().enumerate() {
            *c = i as u32;
        }
        for v in 0..g.num_vertices() {
            self.buf.clear();
            self.buf
                .extend(g.rotation(v).iter().copied().filter(|&d| inc(d / 2)));
            if self.buf.is_empty() {
                bare += 1;
                continue;
            }
            let n = self.buf.len();
            for j in 0..n {
                self.prev[self.buf[j]] = self.buf[(j + n - 1) % n];
            }
        }
        for e in 0..g.num_edges() {
            if !inc(e) {
                continue;
            }
            let (h0, h1) = (2 * e, 2 * e + 1);
            let (b0, b1) = (self.prev[h0], self.prev[h1]);
            if g.is_twisted(e) {
                union(&mut self.corner, h0 as u32, h1 as u32);
                union(&mut self.corner, b0 as u32, b1 as u32);
            } else {
                union(&mut self.corner, h0 as u32, b1 as u32);
                union(&mut self.corner, b0 as u32, h1 as u32);
            }
        }
        bare
    }

    fn metrics_by(&mut self, inc: impl Fn(usize) -> bool) -> Metrics {
        let g = self.g;
        let bare = self.trace(&inc);
        let mut boundary = bare;
        let mut e_count = 0;
        for e in 0..g.num_edges() {
            if !inc(e) {
                continue;
            }
            e_count += 1;
            for h in [2 * e, 2 * e + 1] {
                if self.corner[h] == h as u32 {
                    boundary += 1;
                }
            }
        }

        for (i, p) in self.vert.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.parity.iter_mut().for_each(|x| *x = 0);
        let mut k = g.num_vertices() as u32;
        let mut nonorientable = false;
        for e in 0..g.num_edges() {
            if !inc(e) {
                continue;
            }
            let (u, w) = g.endpoints(e);
            let tw = g.is_twisted(e) as u8;
            let (ru, pu) = self.find_parity(u as u32);
            let (rw, pw) = self.find_parity(w as u32);
            if ru == rw {
                if pu ^ pw != tw {
                    nonorientable = true;
                }
            } else {
                self.vert[ru as usize] = rw;
                self.parity[ru as usize] = pu ^ pw ^ tw;
                k -= 1;
            }
        }
        Metrics {
            k,
            e: e_count,
            v: g.num_vertices() as u32,
            boundary,
            nonorientable,
        }
    }

    /// Root and parity relative to the root. No path compression, so the
    /// parity bookkeeping stays local; graphs here are small.
    fn find_parity(&self, mut x: u32) -> (u32, u8) {
        let mut par = 0;
        while self.vert[x as usize] != x {
            par ^= self.parity[x as usize];
            x = self.vert[x as usize];
        }
        (x, par)
    }

    /// Boundary walk containing each gap. Walk ids are assigned in order of
    /// first appearance scanning vertices and gaps.
    pub fn orbits(&mut self, included: &[bool]) -> BoundaryOrbits {
        let g = self.g;
        let inc = |e: usize| included[e];
        self.trace(&inc);
        let mut ids: Vec<usize> = vec![usize::MAX; 2 * g.num_edges()];
        let mut count = 0;
        let mut gaps = Vec::with_capacity(g.num_vertices());
        for v in 0..g.num_vertices() {
            let rot = g.rotation(v);
            let len = rot.len();
            let mut row = Vec::with_capacity(len + 1);
            let mut bare_id = None;
            for i in 0..=len {
                let owner = (1..=len)
                    .map(|s| rot[(i + len * 2 - s) % len])
                    .find(|&d| inc(d / 2));
                let id = match owner {
                    Some(d) => {
                        let r = find(&mut self.corner, d as u32) as usize;
                        if ids[r] == usize::MAX {
                            ids[r] = count;
                            count += 1;
                        }
                        ids[r]
                    }
                    None => *bare_id.get_or_insert_with(|| {
                        count += 1;
                        count - 1
                    }),
                };
                row.push(id);
            }
            gaps.push(row);
        }
        BoundaryOrbits { count, gaps }
    }

    /// Connected component label of each vertex under the included edges.
    pub fn components(&mut self, included: &[bool]) -> Vec<usize> {
        let g = self.g;
        for (i, p) in self.vert.iter_mut().enumerate() {
            *p = i as u32;
        }
        for (e, &on) in included.iter().enumerate() {
            if on {
                let (u, w) = g.endpoints(e);
                union(&mut self.vert, u as u32, w as u32);
            }
        }
        (0..g.num_vertices())
            .map(|v| find(&mut self.vert, v as u32) as usize)
            .collect()
    }
}

/// A spanning subgraph: every vertex plus a subset of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningState<'g> {
    graph: &'g RibbonGraph,
    included: Vec<bool>,
}

impl<'g> SpanningState<'g> {
    pub fn new(graph: &'g RibbonGraph, included: Vec<bool>) -> Result<Self> {
        if included.len() != graph.num_edges() {
            return Err(Error::Internal(format!(
                "state has {} flags for {} edges",
                included.len(),
                graph.num_edges()
            )));
        }
        Ok(SpanningState { graph, included })
    }

    pub fn from_ids(graph: &'g RibbonGraph, ids: &[&str]) -> Result<Self> {
        let mut included = vec![false; graph.num_edges()];
        for id in ids {
            included[graph.edge_index(id)?] = true;
        }
        Ok(SpanningState { graph, included })
    }

    pub fn from_mask(graph: &'g RibbonGraph, mask: u64) -> Self {
        let included = (0..graph.num_edges()).map(|e| mask >> e & 1 == 1).collect();
        SpanningState { graph, included }
    }

    pub fn full(graph: &'g RibbonGraph) -> Self {
        SpanningState {
            graph,
            included: vec![true; graph.num_edges()],
        }
    }

    pub fn empty(graph: &'g RibbonGraph) -> Self {
        SpanningState {
            graph,
            included: vec![false; graph.num_edges()],
        }
    }

    pub fn graph(&self) -> &'g RibbonGraph {
        self.graph
    }

    pub fn included(&self) -> &[bool] {
        &self.included
    }

    pub fn contains(&self, e: usize) -> bool {
        self.included[e]
    }

    pub fn metrics(&self) -> Metrics {
        Tracer::new(self.graph).metrics(&self.included)
    }

    pub fn boundary_components(&self) -> (usize, BoundaryOrbits) {
        let o = Tracer::new(self.graph).orbits(&self.included);
        (o.count, o)
    }

    pub fn component_count(&self) -> u32 {
        self.metrics().k
    }

    pub fn rank_nullity(&self) -> (u32, u32) {
        let m = self.metrics();
        (m.rank(), m.nullity())
    }

    pub fn orientable_marker(&self) -> u32 {
        self.metrics().t()
    }
}
