use ribbonpoly::knots::{
    all_a_state, bracket_oracle, jones, kauffman_bracket, parse_pd, ribbon_of_diagram, writhe, Crossing,
    LinkDiagram,
};
use ribbonpoly::statesum::Budget;
use ribbonpoly::verify::PD_CORPUS;
use ribbonpoly::{MultiPoly, SpanningState};

const B: Budget = Budget(20);

fn corpus(name: &str) -> LinkDiagram {
    let text = PD_CORPUS.iter().find(|(n, _)| *n == name).unwrap().1;
    parse_pd(text).unwrap()
}

fn p(s: &str) -> MultiPoly {
    s.parse().unwrap()
}

fn fresh_label(d: &LinkDiagram) -> i64 {
    d.crossings().iter().flatten().copied().max().unwrap_or(0) + 1
}

/// The other occurrence of the label at `(x, s)`.
fn other_end(c: &[Crossing], x: usize, s: usize) -> (usize, usize) {
    let l = c[x][s];
    (0..c.len())
        .flat_map(|y| (0..4).map(move |t| (y, t)))
        .find(|&(y, t)| (y, t) != (x, s) && c[y][t] == l)
        .unwrap()
}

/// Faces as orbits of "follow the arc, then turn left", each dart being a
/// crossing slot the walk leaves through.
fn faces(c: &[Crossing]) -> Vec<Vec<(usize, usize)>> {
    let n = c.len();
    let mut seen = vec![false; 4 * n];
    let mut out = Vec::new();
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push((d / 4, d % 4));
            let (y, t) = other_end(c, d / 4, d % 4);
            d = 4 * y + (t + 3) % 4;
        }
        out.push(face);
    }
    out
}

/// Reidemeister I: a curl on the arc leaving `(x, s)`.
fn add_kink(d: &LinkDiagram, x: usize, s: usize, positive: bool) -> LinkDiagram {
    let mut c = d.crossings().to_vec();
    // Orient the arc by the link: `from` is where the strand leaves.
    let (y, t) = other_end(&c, x, s);
    let (to_x, to_s) = if d.is_incoming(y, t) { (y, t) } else { (x, s) };
    let l = c[to_x][to_s];
    let (m, n) = (fresh_label(d), fresh_label(d) + 1);
    c[to_x][to_s] = n;
    c.push(if positive { [l, n, m, m] } else { [l, m, m, n] });
    LinkDiagram::new(c).unwrap()
}

/// Reidemeister II: pushes the arc leaving `da` across the arc leaving `db`,
/// both on the boundary of one face, with the pushed arc passing over when
/// `over` is set.
fn push_across(d: &LinkDiagram, da: (usize, usize), db: (usize, usize), over: bool) -> LinkDiagram {
    let mut c = d.crossings().to_vec();
    let ea = other_end(&c, da.0, da.1);
    let eb = other_end(&c, db.0, db.1);
    let forward_a = d.is_incoming(ea.0, ea.1);
    let forward_b = d.is_incoming(eb.0, eb.1);
    let (a1, b1) = (c[da.0][da.1], c[db.0][db.1]);
    let base = fresh_label(d);
    let (a2, a3, b2, b3) = (base, base + 1, base + 2, base + 3);
    c[ea.0][ea.1] = a3;
    c[eb.0][eb.1] = b3;
    // In the face, `a` runs left to right along the bottom and `b` right to
    // left along the top; `a` bulges up across `b` at C1 (left) then C2.
    let (c1, c2) = match (over, forward_a, forward_b) {
        (true, _, true) => ([b2, a2, b3, a1], [b1, a2, b2, a3]),
        (true, _, false) => ([b3, a1, b2, a2], [b2, a3, b1, a2]),
        (false, true, _) => ([a1, b2, a2, b3], [a2, b2, a3, b1]),
        (false, false, _) => ([a2, b3, a1, b2], [a3, b1, a2, b2]),
    };
    c.push(c1);
    c.push(c2);
    LinkDiagram::new(c).unwrap()
}

fn diagrams() -> Vec<(&'static str, LinkDiagram)> {
    PD_CORPUS.iter().map(|(n, t)| (*n, parse_pd(t).unwrap())).collect()
}

#[test]
fn bracket_matches_state_expansion_on_corpus() {
    for (name, d) in diagrams() {
        assert_eq!(kauffman_bracket(&d, B).unwrap(), bracket_oracle(&d).unwrap(), "{name}");
    }
}

#[test]
fn all_a_ribbon_graphs_are_orientable_and_valid() {
    for (name, d) in diagrams() {
        let f = ribbon_of_diagram(&d).unwrap();
        assert!(f.to_spec().validate().is_empty(), "{name}");
        assert!(!SpanningState::full(&f).metrics().nonorientable, "{name}");
        let st = all_a_state(&d);
        assert_eq!(st.chords, d.num_crossings());
        assert_eq!(st.circles.iter().map(Vec::len).sum::<usize>(), 2 * d.num_crossings(), "{name}");
    }
}

#[test]
fn corpus_faces_are_planar() {
    for (name, d) in diagrams() {
        if d.num_crossings() > 0 {
            assert_eq!(faces(d.crossings()).len(), d.num_crossings() + 2, "{name}");
        }
    }
}

#[test]
fn hopf_and_known_jones_values() {
    assert_eq!(kauffman_bracket(&corpus("hopf.pd"), B).unwrap(), p("-A^4 - A^-4"));
    let q4 = |s: &str| p(s).substitute_var("t", &p("q^4")).unwrap();
    assert_eq!(jones(&corpus("trefoil_right.pd"), B).unwrap(), q4("t + t^3 - t^4"));
    assert_eq!(jones(&corpus("figure_eight.pd"), B).unwrap(), q4("t^-2 - t^-1 + 1 - t + t^2"));
    assert_eq!(jones(&corpus("figure_eight_alt.pd"), B).unwrap(), q4("t^-2 - t^-1 + 1 - t + t^2"));
    for name in ["unknot.pd", "unknot_kink_positive.pd", "unknot_kink_negative.pd", "unknot_two_kinks.pd"] {
        assert_eq!(jones(&corpus(name), B).unwrap(), p("1"), "{name}");
    }
}

#[test]
fn mutant_pair_is_not_distinguished() {
    let kt = corpus("kinoshita_terasaka.pd");
    let conway = corpus("conway.pd");
    assert_eq!(kt.num_crossings(), 11);
    assert_eq!(kauffman_bracket(&kt, B).unwrap(), kauffman_bracket(&conway, B).unwrap());
    assert_eq!(jones(&kt, B).unwrap(), jones(&conway, B).unwrap());
    assert_eq!(writhe(&kt), writhe(&conway));
}

#[test]
fn kinks_scale_the_bracket() {
    for (name, d) in diagrams() {
        if d.num_crossings() == 0 || d.num_crossings() > 8 {
            continue;
        }
        let base = bracket_oracle(&d).unwrap();
        for x in 0..d.num_crossings() {
            for s in 0..4 {
                for positive in [true, false] {
                    let k = add_kink(&d, x, s, positive);
                    assert_eq!(writhe(&k), writhe(&d) + if positive { 1 } else { -1 }, "{name}");
                    let factor = if positive { p("-A^3") } else { p("-A^-3") };
                    assert_eq!(kauffman_bracket(&k, B).unwrap(), &base * &factor, "{name} {x} {s}");
                    assert_eq!(jones(&k, B).unwrap(), jones(&d, B).unwrap(), "{name}");
                }
            }
        }
    }
}

#[test]
fn second_move_preserves_the_bracket() {
    let mut moves = 0;
    for (name, d) in diagrams() {
        if d.num_crossings() == 0 || d.num_crossings() > 8 {
            continue;
        }
        let base = bracket_oracle(&d).unwrap();
        let fs = faces(d.crossings());
        for face in &fs {
            for (i, &da) in face.iter().enumerate() {
                for &db in &face[i + 1..] {
                    let (la, lb) = (d.crossings()[da.0][da.1], d.crossings()[db.0][db.1]);
                    if la == lb {
                        continue;
                    }
                    for over in [true, false] {
                        let moved = push_across(&d, da, db, over);
                        assert_eq!(faces(moved.crossings()).len(), fs.len() + 2, "{name}: not planar");
                        assert_eq!(writhe(&moved), writhe(&d), "{name}");
                        assert_eq!(kauffman_bracket(&moved, B).unwrap(), base, "{name} {da:?} {db:?} {over}");
                        moves += 1;
                    }
                }
            }
        }
    }
    assert!(moves > 100, "{moves}");
}

#[test]
fn parse_errors() {
    assert!(parse_pd("X(1,1,1,2) X(2,3,3,4)").is_err());
    assert!(parse_pd("X(1,2,3)").is_err());
    let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
    assert_eq!((d.num_crossings(), d.crossings().iter().flatten().max()), (3, Some(&6)));
    assert_eq!(parse_pd("").unwrap().num_crossings(), 0);
}
