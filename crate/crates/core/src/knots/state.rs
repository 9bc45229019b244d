use std::collections::{BTreeMap, VecDeque};

use super::LinkDiagram;
use crate::error::{Error, Result};
use crate::ribbon::RibbonGraph;

/// Where a chord meets a state circle: crossing `crossing`, on the smoothing
/// arc joining slots 0–1 (`side` 0) or 2–3 (`side` 1). `left` records that
/// the chord leaves the circle to the left of its traversal direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChordEnd {
    pub crossing: usize,
    pub side: usize,
    pub left: bool,
}

/// The all-A state: each circle lists its chord ends in traversal order, and
/// every crossing contributes one chord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateCircles {
    pub circles: Vec<Vec<ChordEnd>>,
    pub chords: usize,
}

/// A-smoothing partner of each slot: the arcs join slots 0–1 and 2–3.
fn a_partner(s: usize) -> usize {
    s ^ 1
}

/// Traces the circles of the A-smoothing of every crossing.
pub fn all_a_state(d: &LinkDiagram) -> StateCircles {
    let n = 4 * d.num_crossings();
    let mut other = vec![0; n];
    let mut by_label: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (x, c) in d.crossings().iter().enumerate() {
        for (s, &l) in c.iter().enumerate() {
            by_label.entry(l).or_default().push(4 * x + s);
        }
    }
    for occ in by_label.values() {
        other[occ[0]] = occ[1];
        other[occ[1]] = occ[0];
    }
    let mut seen = vec![false; n];
    let mut circles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut circle = Vec::new();
        let mut o = start;
        loop {
            let (x, s) = (o / 4, o % 4);
            let t = 4 * x + a_partner(s);
            seen[o] = true;
            seen[t] = true;
            // Crossing the arc from slot s: entering at slot 0 or 2 the
            // centre of the crossing lies to the left.
            circle.push(ChordEnd {
                crossing: x,
                side: s / 2,
                left: s % 2 == 0,
            });
            o = other[t];
            if o == start {
                break;
            }
        }
        circles.push(circle);
    }
    if circles.is_empty() {
        circles.push(Vec::new());
    }
    StateCircles {
        circles,
        chords: d.num_crossings(),
    }
}

/// The ribbon graph of the all-A state: a vertex per circle with its chord
/// ends in traversal order, an edge per crossing. Edges whose two ends leave
/// their circles on different sides start out twisted; vertex flips along a
/// spanning forest then remove every twist, which must succeed for a planar
/// diagram.
pub fn ribbon_of_diagram(d: &LinkDiagram) -> Result<RibbonGraph> {
    let st = all_a_state(d);
    let ids: Vec<String> = (0..st.chords).map(|x| format!("x{x}")).collect();
    let names: Vec<String> = (0..st.circles.len()).map(|i| format!("s{i}")).collect();
    let rotations: Vec<Vec<&str>> = st
        .circles
        .iter()
        .map(|c| c.iter().map(|e| ids[e.crossing].as_str()).collect())
        .collect();
    let mut sides: Vec<Vec<bool>> = vec![Vec::new(); st.chords];
    for c in &st.circles {
        for e in c {
            sides[e.crossing].push(e.left);
        }
    }
    let twisted: Vec<&str> = (0..st.chords)
        .filter(|&x| sides[x][0] != sides[x][1])
        .map(|x| ids[x].as_str())
        .collect();
    let spec: Vec<(&str, &[&str])> = names
        .iter()
        .zip(&rotations)
        .map(|(n, r)| (n.as_str(), r.as_slice()))
        .collect();
    let mut g = RibbonGraph::from_edge_rotations(&spec, &twisted)?;
    let nv = g.num_vertices();
    let mut visited = vec![false; nv];
    for root in 0..nv {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in 0..g.num_edges() {
                let (a, b) = g.endpoints(e);
                let w = match (a == v, b == v) {
                    (true, false) => b,
                    (false, true) => a,
                    _ => continue,
                };
                if visited[w] {
                    continue;
                }
                visited[w] = true;
                if g.is_twisted(e) {
                    g = g.flip_vertex(w);
                }
                queue.push_back(w);
            }
        }
    }
    if let Some(e) = (0..g.num_edges()).find(|&e| g.is_twisted(e)) {
        return Err(Error::ConstructionCheck(format!(
            "edge `{}` of the all-A ribbon graph stays twisted",
            g.edge(e).id
        )));
    }
    Ok(g)
}
