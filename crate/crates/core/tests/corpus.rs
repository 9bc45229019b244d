use std::path::PathBuf;

use ribbonpoly::compose::{
    brute_force_z, brute_force_z_ab, compose_br_general, compose_br_planar, compose_tutte,
};
use ribbonpoly::ribbon::{load_decomposition, load_graph, load_piece};
use ribbonpoly::statesum::{br_polynomial, phi_sums, tutte, z_multivariate, Budget};
use ribbonpoly::{Error, MarkedPiece, MultiPoly, RibbonGraph, SpanningState};

const B: Budget = Budget(20);

fn data(rel: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "graphs", rel].iter().collect()
}

fn p(s: &str) -> MultiPoly {
    s.parse().unwrap()
}

#[test]
fn bundled_graphs() {
    let z = |f: &str| z_multivariate(&load_graph(&data(f)).unwrap(), B).unwrap();
    assert_eq!(z("vertex.json"), p("a*c"));
    assert_eq!(z("single_edge.json"), p("a^2*c^2 + a*c*x_e"));
    assert_eq!(z("loop.json"), p("a*c + a*c^2*x_e"));
    assert_eq!(z("twisted_loop.json"), p("a*c + a*c*d*x_e"));
    let r = |f: &str| br_polynomial(&load_graph(&data(f)).unwrap(), B).unwrap();
    assert_eq!(r("single_edge.json"), p("α"));
    assert_eq!(r("interlaced_loops.json"), p("1 + 2*β + β^2*γ^2"));
    assert_eq!(r("triangle.json"), p("α^2 + α + 1 + β"));
    assert_eq!(tutte(&load_graph(&data("digon.json")).unwrap(), B).unwrap(), p("x + y"));
}

#[test]
fn worked_example_sums() {
    let digon = load_piece(&data("pieces/digon.json")).unwrap();
    let path = load_piece(&data("pieces/path.json")).unwrap();
    let s = phi_sums(&digon, B).unwrap();
    assert_eq!((s.phi1, s.phi2), (p("b^2 + 2*b"), p("1")));
    let s = phi_sums(&path, B).unwrap();
    assert_eq!((s.phi1, s.phi2), (p("b^2"), p("a + 2*b")));
    let d = load_decomposition(&data("path_example.json")).unwrap();
    let displayed = p("a*b^4 + 2*a*b^3 + a^2*b^2 + 2*a^2*b^3 + a^3*b^2 + 4*a^2*b^2 + 2*a^3*b + 2*a^3*b + a^4");
    assert_eq!(compose_tutte(&d, B).unwrap(), displayed);
    assert_eq!(brute_force_z_ab(&d, B).unwrap(), displayed);
}

#[test]
fn bundled_decompositions_compose() {
    for f in ["path_example.json", "triangle_tensor_triangle.json", "torus_template.json", "interlaced_slot.json"] {
        let d = load_decomposition(&data(f)).unwrap();
        let brute = brute_force_z(&d, B).unwrap();
        assert_eq!(compose_tutte(&d, B).unwrap(), brute_force_z_ab(&d, B).unwrap(), "{f}");
        assert_eq!(compose_br_general(&d, B).unwrap(), brute, "{f}");
        match compose_br_planar(&d, B) {
            Ok(z) => assert_eq!(z, brute, "{f}"),
            Err(Error::NotPlanar(_)) => assert_eq!(f, "interlaced_slot.json"),
            Err(e) => panic!("{f}: {e}"),
        }
    }
}

#[test]
fn assembled_sizes() {
    let d = load_decomposition(&data("triangle_tensor_triangle.json")).unwrap();
    let (g, _) = d.assemble().unwrap();
    assert_eq!((g.num_vertices(), g.num_edges()), (6, 6));
    for f in ["path_example.json", "torus_template.json", "interlaced_slot.json"] {
        let d = load_decomposition(&data(f)).unwrap();
        let (g, _) = d.assemble().unwrap();
        let extra: usize = d.slots().iter().map(|s| s.piece.graph().num_vertices() - 2).sum();
        assert_eq!(g.num_vertices(), d.template().num_vertices() + extra, "{f}");
        assert_eq!(g.num_edges(), d.total_edges(), "{f}");
    }
}

#[test]
fn flips_in_files_do_not_change_r() {
    let d = load_decomposition(&data("torus_template.json")).unwrap();
    let r0 = br_polynomial(&d.assemble_with_flips(&[false, false]).unwrap().0, B).unwrap();
    for flips in [[true, false], [false, true], [true, true]] {
        let r = br_polynomial(&d.assemble_with_flips(&flips).unwrap().0, B).unwrap();
        assert_eq!(r, r0);
    }
}

fn graph(rot: &[(&str, &[&str])]) -> RibbonGraph {
    RibbonGraph::from_edge_rotations(rot, &[]).unwrap()
}

#[test]
fn equal_r_survives_tensoring() {
    // A loop hung on an end of a path versus on its middle vertex: different
    // degree sequences, same R.
    let end = graph(&[("u", &["l", "a", "l"]), ("v", &["a", "b"]), ("w", &["b"])]);
    let middle = graph(&[("u", &["a"]), ("v", &["a", "l", "l", "b"]), ("w", &["b"])]);
    let degrees = |g: &RibbonGraph| {
        let mut d: Vec<usize> = (0..g.num_vertices()).map(|v| g.degree(v)).collect();
        d.sort();
        d
    };
    assert_ne!(degrees(&end), degrees(&middle));
    assert_eq!(br_polynomial(&end, B).unwrap(), br_polynomial(&middle, B).unwrap());
    for piece in [MarkedPiece::triangle(), MarkedPiece::digon()] {
        let a = br_polynomial(&end.tensor(&piece).unwrap(), B).unwrap();
        let b = br_polynomial(&middle.tensor(&piece).unwrap(), B).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, br_polynomial(&end, B).unwrap());
    }
    // Two trees with three edges.
    let path = graph(&[("a", &["x"]), ("b", &["x", "y"]), ("c", &["y", "z"]), ("d", &["z"])]);
    let star = graph(&[("o", &["x", "y", "z"]), ("a", &["x"]), ("b", &["y"]), ("c", &["z"])]);
    let tp = br_polynomial(&path.tensor(&MarkedPiece::triangle()).unwrap(), B).unwrap();
    let ts = br_polynomial(&star.tensor(&MarkedPiece::triangle()).unwrap(), B).unwrap();
    assert_eq!(tp, ts);
    assert!(!SpanningState::full(&path).metrics().nonorientable);
}
