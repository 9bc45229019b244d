//! Link diagrams in PD notation, their all-A ribbon graphs, and the Kauffman
//! bracket and Jones polynomial computed through the Bollobás-Riordan polynomial.

mod bracket;
mod state;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use bracket::{
    bracket_oracle, format_jones, jones, kauffman_bracket, loop_value, ORACLE_LIMIT,
};
pub use state::{all_a_state, ribbon_of_diagram, ChordEnd, StateCircles};

/// One crossing: arc labels starting at the incoming under-strand, then
/// counterclockwise.
pub type Crossing = [i64; 4];

/// A link diagram given by its crossings, with the strand orientation read
/// off the under-crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    /// `incoming[4X + s]`: the strand enters crossing `X` through slot `s`.
    incoming: Vec<bool>,
    components: usize,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<Crossing>) -> Result<Self> {
        let mut occurrences: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (s, &label) in c.iter().enumerate() {
                occurrences.entry(label).or_default().push(4 * x + s);
            }
        }
        let mut other = vec![0; 4 * crossings.len()];
        for (label, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(Error::Parse(format!(
                    "arc {label} appears {} times, expected twice",
                    occ.len()
                )));
            }
            other[occ[0]] = occ[1];
            other[occ[1]] = occ[0];
        }
        let (incoming, components) = orient(&other)?;
        Ok(LinkDiagram {
            crossings,
            incoming,
            components: components.max(1),
        })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Number of link components (1 for the crossingless unknot).
    pub fn num_components(&self) -> usize {
        self.components
    }

    /// Slot `s` of crossing `x` is where the strand enters.
    pub fn is_incoming(&self, x: usize, s: usize) -> bool {
        self.incoming[4 * x + s]
    }

    /// `+1` when the over-strand runs from slot 3 to slot 1, else `−1`.
    pub fn sign(&self, x: usize) -> i64 {
        if self.is_incoming(x, 3) {
            1
        } else {
            -1
        }
    }

    /// Reflection of the diagram in a line of the plane.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self.crossings.iter().map(|&[a, b, c, d]| [a, d, c, b]).collect();
        LinkDiagram::new(crossings).expect("mirror of a valid diagram")
    }
}

/// Two-colours the strand graph (slot to opposite slot, arc end to arc end)
/// into entering and leaving ends. Slot 0 always enters and slot 2 always
/// leaves; a component with no under-crossing is oriented so that its first
/// slot enters.
fn orient(other: &[usize]) -> Result<(Vec<bool>, usize)> {
    let n = other.len();
    let mut dir: Vec<Option<bool>> = vec![None; n];
    let mut components = 0;
    let through = |o: usize| o - o % 4 + (o % 4 + 2) % 4;
    for start in 0..n {
        if dir[start].is_some() {
            continue;
        }
        components += 1;
        let mut cycle = vec![start];
        let mut o = start;
        // Walk: through the crossing, then along the arc to its other end.
        loop {
            let t = through(o);
            cycle.push(t);
            let next = other[t];
            if next == start {
                break;
            }
            cycle.push(next);
            o = next;
        }
        // Entries sit at even positions of the walk (o, through(o) leaves,
        // other[..] enters, ...). Find a seed fixing which parity enters.
        let seed = cycle.iter().enumerate().find_map(|(i, &o)| match o % 4 {
            0 => Some(i % 2 == 0),
            2 => Some(i % 2 == 1),
            _ => None,
        });
        let even_enters = seed.unwrap_or(true);
        for (i, &o) in cycle.iter().enumerate() {
            let enters = (i % 2 == 0) == even_enters;
            let fixed = match o % 4 {
                0 => Some(true),
                2 => Some(false),
                _ => None,
            };
            if fixed.is_some_and(|f| f != enters) {
                return Err(Error::Parse(format!(
                    "orientation inconsistency at crossing {} slot {}",
                    o / 4,
                    o % 4
                )));
            }
            dir[o] = Some(enters);
        }
    }
    Ok((dir.into_iter().map(|d| d.unwrap_or(false)).collect(), components))
}

impl std::str::FromStr for LinkDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pd(s)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .crossings
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Parses `X(a,b,c,d) …`. Also accepts square brackets, a missing `X`, an
/// enclosing `PD[...]` or list, and `#` comments. The empty diagram is the
/// unknot.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    let mut crossings = Vec::new();
    let mut stack: Vec<(Vec<i64>, bool)> = Vec::new();
    let mut num = String::new();
    let flush = |num: &mut String, stack: &mut Vec<(Vec<i64>, bool)>| -> Result<()> {
        if num.is_empty() {
            return Ok(());
        }
        let v: i64 = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad arc label `{num}`")))?;
        num.clear();
        match stack.last_mut() {
            Some((vals, _)) => {
                vals.push(v);
                Ok(())
            }
            None => Err(Error::Parse(format!("arc label {v} outside a crossing"))),
        }
    };
    for ch in body.chars() {
        match ch {
            '0'..='9' => num.push(ch),
            '-' if num.is_empty() => num.push(ch),
            '(' | '[' => {
                flush(&mut num, &mut stack)?;
                if let Some(top) = stack.last_mut() {
                    top.1 = true;
                }
                stack.push((Vec::new(), false));
            }
            ')' | ']' => {
                flush(&mut num, &mut stack)?;
                let (vals, nested) = stack
                    .pop()
                    .ok_or_else(|| Error::Parse("unbalanced closing bracket".into()))?;
                if nested {
                    if !vals.is_empty() {
                        return Err(Error::Parse("arc labels mixed with crossings".into()));
                    }
                } else if vals.is_empty() {
                    if !stack.is_empty() {
                        return Err(Error::Parse("empty crossing".into()));
                    }
                } else {
                    let c: Crossing = vals.as_slice().try_into().map_err(|_| {
                        Error::Parse(format!("crossing needs 4 arc labels, got {vals:?}"))
                    })?;
                    crossings.push(c);
                }
            }
            ',' | 'X' | 'x' | 'P' | 'D' | ';' => flush(&mut num, &mut stack)?,
            c if c.is_whitespace() => flush(&mut num, &mut stack)?,
            c => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    flush(&mut num, &mut stack)?;
    if !stack.is_empty() {
        return Err(Error::Parse("unbalanced opening bracket".into()));
    }
    LinkDiagram::new(crossings)
}

/// Sum of crossing signs.
pub fn writhe(d: &LinkDiagram) -> i64 {
    (0..d.num_crossings()).map(|x| d.sign(x)).sum()
}

/// Relabels arcs `0, 1, …` in order of first appearance.
pub fn normalize_labels(d: &LinkDiagram) -> LinkDiagram {
    let mut map: HashMap<i64, i64> = HashMap::new();
    let crossings = d
        .crossings()
        .iter()
        .map(|c| {
            c.map(|l| {
                let next = map.len() as i64;
                *map.entry(l).or_insert(next)
            })
        })
        .collect();
    LinkDiagram::new(crossings).expect("relabelling keeps validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn parses_forms() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.num_crossings(), 3);
        assert_eq!(d.num_components(), 1);
        let e = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(d, e);
        let f = parse_pd("[(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]  # trefoil").unwrap();
        assert_eq!(d, f);
        assert_eq!(parse_pd("PD[]").unwrap().num_crossings(), 0);
        let u = parse_pd("").unwrap();
        assert_eq!((u.num_crossings(), u.num_components()), (0, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_pd("X(1,1,1,2) X(2,3,3,4)").is_err());
        assert!(parse_pd("X(1,2,3)").is_err());
        assert!(parse_pd("X(1,2,3,4").is_err());
        assert!(parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,q)").is_err());
        // Arc 1 would enter both of its crossings.
        assert!(matches!(parse_pd("X(1,3,2,4) X(1,4,2,3)"), Err(Error::Parse(_))));
    }

    #[test]
    fn trefoil_writhe_and_mirror() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(writhe(&d), -3);
        assert_eq!(writhe(&d.mirror()), 3);
        assert_eq!(writhe(&parse_pd("X(2,0,3,5) X(0,4,1,3) X(4,2,5,1)").unwrap()), 3);
    }

    #[test]
    fn kinks_and_links() {
        assert_eq!(writhe(&parse_pd("X(1,1,2,2)").unwrap()), 1);
        assert_eq!(writhe(&parse_pd("X(1,2,2,1)").unwrap()), -1);
        let hopf = parse_pd("X(2,1,3,0) X(0,3,1,2)").unwrap();
        assert_eq!(hopf.num_components(), 2);
        assert_eq!(writhe(&hopf).abs(), 2);
    }
}
