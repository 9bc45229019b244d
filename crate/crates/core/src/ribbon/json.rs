use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MarkedPiece, PieceSlot, RibbonGraph, TwoDecomposition};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub rotation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
    #[serde(default)]
    pub twisted: bool,
    #[serde(default)]
    pub weight: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSpec {
    #[serde(flatten)]
    pub graph: GraphSpec,
    pub u: String,
    pub w: String,
    pub m_arc: usize,
    pub n_arc: usize,
}

/// A graph or piece given inline or as a path relative to the referring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PieceRef<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSpec {
    pub piece: PieceRef<PieceSpec>,
    /// `"default"` glues u to the template edge's first end; `"swap"` to its second.
    #[serde(default)]
    pub ends: Option<String>,
    #[serde(default)]
    pub flip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSpec {
    pub template: PieceRef<GraphSpec>,
    pub pieces: BTreeMap<String, SlotSpec>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn resolve<T: for<'de> Deserialize<'de> + Clone>(r: &PieceRef<T>, base: &Path) -> Result<T> {
    match r {
        PieceRef::Inline(t) => Ok(t.clone()),
        PieceRef::Path(p) => {
            let full = base.join(p);
            parse_json(&read(&full)?, &full.display().to_string())
        }
    }
}

impl PieceSpec {
    pub fn build(&self) -> Result<MarkedPiece> {
        let g = self.graph.build()?;
        let u = g.vertex_index(&self.u)?;
        let w = g.vertex_index(&self.w)?;
        MarkedPiece::new(g, u, w, self.m_arc, self.n_arc)
    }
}

impl MarkedPiece {
    pub fn to_spec(&self) -> PieceSpec {
        PieceSpec {
            graph: self.graph().to_spec(),
            u: self.graph().vertex(self.u()).id.clone(),
            w: self.graph().vertex(self.w()).id.clone(),
            m_arc: self.m_arc(),
            n_arc: self.n_arc(),
        }
    }
}

impl DecompositionSpec {
    /// Builds the decomposition, resolving file references against `base`.
    pub fn build(&self, base: &Path) -> Result<TwoDecomposition> {
        let template = resolve(&self.template, base)?.build()?;
        let mut slots = Vec::with_capacity(template.num_edges());
        for e in template.edges() {
            let slot = self
                .pieces
                .get(&e.id)
                .ok_or_else(|| Error::Parse(format!("no piece for template edge `{}`", e.id)))?;
            let piece = resolve(&slot.piece, base)?.build()?;
            let swap_ends = match slot.ends.as_deref() {
                None | Some("default") => false,
                Some("swap") => true,
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "ends must be \"default\" or \"swap\", got \"{other}\""
                    )))
                }
            };
            slots.push(PieceSlot {
                piece,
                swap_ends,
                flip: slot.flip,
            });
        }
        if let Some(extra) = self
            .pieces
            .keys()
            .find(|k| template.edge_index(k).is_err())
        {
            return Err(Error::UnknownEdge(extra.clone()));
        }
        TwoDecomposition::new(template, slots)
    }
}

pub fn load_graph(path: &Path) -> Result<RibbonGraph> {
    parse_json::<GraphSpec>(&read(path)?, &path.display().to_string())?.build()
}

pub fn load_piece(path: &Path) -> Result<MarkedPiece> {
    parse_json::<PieceSpec>(&read(path)?, &path.display().to_string())?.build()
}

pub fn load_decomposition(path: &Path) -> Result<TwoDecomposition> {
    let spec: DecompositionSpec = parse_json(&read(path)?, &path.display().to_string())?;
    spec.build(path.parent().unwrap_or(Path::new(".")))
}

impl TwoDecomposition {
    pub fn to_spec(&self) -> DecompositionSpec {
        DecompositionSpec {
            template: PieceRef::Inline(self.template().to_spec()),
            pieces: self
                .slots()
                .iter()
                .zip(self.template().edges())
                .map(|(s, e)| {
                    (
                        e.id.clone(),
                        SlotSpec {
                            piece: PieceRef::Inline(s.piece.to_spec()),
                            ends: Some(if s.swap_ends { "swap" } else { "default" }.into()),
                            flip: s.flip,
                        },
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piece_json_round_trip() {
        let text = r#"{"vertices":[{"id":"u","rotation":["a0"]},{"id":"m","rotation":["a1","b0"]},
                       {"id":"w","rotation":["b1"]}],
                       "edges":[{"id":"a","ends":["a0","a1"]},{"id":"b","ends":["b0","b1"]}],
                       "u":"u","w":"w","m_arc":0,"n_arc":1}"#;
        let spec: PieceSpec = serde_json::from_str(text).unwrap();
        let p = spec.build().unwrap();
        assert_eq!(p.n_arc(), 1);
        assert_eq!(p.to_spec().build().unwrap(), p);
    }

    #[test]
    fn decomposition_requires_every_edge() {
        let text = r#"{"template":{"vertices":[{"id":"x","rotation":["e0","e1"]}],
                        "edges":[{"id":"e","ends":["e0","e1"]}]},"pieces":{}}"#;
        let spec: DecompositionSpec = serde_json::from_str(text).unwrap();
        assert!(spec.build(Path::new(".")).is_err());
    }
}
