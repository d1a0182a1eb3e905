use holtklee::exact::rat_vec;
use holtklee::fixtures::{alternating_4_8, ic_8_4_2_om};
use holtklee::omp::*;
use holtklee::{Chirotope, OrientedMatroid, Sign};
use proptest::prelude::*;

fn om_of(vectors: &[Vec<i64>]) -> Option<OrientedMatroid> {
    let rats: Vec<_> = vectors.iter().map(|v| rat_vec(v)).collect();
    let chi = Chirotope::from_vectors(&rats).ok()?;
    OrientedMatroid::from_chirotope(&chi).ok()
}

fn cross(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Element 1 is the homogenizing coordinate (the line at infinity), the last
/// element is the objective; the rest are affine half-planes `a x + b y + c ≥ 0`.
fn planar(lines: &[[i64; 3]], objective: [i64; 2]) -> Vec<Vec<i64>> {
    let mut v = vec![vec![0, 0, 1]];
    v.extend(lines.iter().map(|l| l.to_vec()));
    v.push(vec![objective[0], objective[1], 0]);
    v
}

/// The objective strictly increases along every arc, evaluated at the
/// realized vertex points.
fn check_arcs_follow_objective(vectors: &[Vec<i64>]) {
    let Some(om) = om_of(vectors) else { return };
    if om.rank() != 3 {
        return;
    }
    let n = vectors.len();
    let Ok(pi) = Program::new(om, 1, n) else { return };
    let graph = program_graph(&pi).unwrap();
    let point = |i: usize| {
        let x = &graph.vertices[i];
        let zeros: Vec<usize> = (0..n - 1).filter(|&e| x.get(e) == Sign::Zero).collect();
        let mut y = None;
        'outer: for a in 0..zeros.len() {
            for b in a + 1..zeros.len() {
                let c = cross(&vectors[zeros[a]], &vectors[zeros[b]]);
                if c != [0, 0, 0] {
                    y = Some(c);
                    break 'outer;
                }
            }
        }
        let mut y = y.expect("vertex is a point");
        let e = (0..n - 1).find(|&e| x.get(e) != Sign::Zero).unwrap();
        if Sign::of(&dot(&vectors[e], &y)) != x.get(e) {
            y = y.map(|t| -t);
        }
        assert!(y[2] > 0, "vertex lies on the positive side of infinity");
        // objective value as a fraction over y[2] > 0
        (dot(&vectors[n - 1], &y), y[2])
    };
    for &(u, v) in graph.graph.arcs() {
        let (a, b) = (point(u), point(v));
        assert!(a.0 * b.1 < b.0 * a.1, "arc against the objective in {vectors:?}");
    }
    for &(u, v) in graph.graph.undirected() {
        let (a, b) = (point(u), point(v));
        assert_eq!(a.0 * b.1, b.0 * a.1);
    }
}

#[test]
fn triangle_program() {
    let v = planar(&[[1, 0, 0], [0, 1, 0], [-1, -1, 3]], [1, 2]);
    let om = om_of(&v).unwrap();
    let pi = Program::new(om, 1, 5).unwrap();
    assert!(is_bounded(&pi).unwrap());
    assert!(is_proper_program(&pi).unwrap());
    assert!(feasible_region(&pi).contains_tope(pi.om()));
    let hk = is_hk_program(&pi).unwrap();
    assert!(hk.holds);
    assert_eq!(hk.disjoint_path_count, 2);
    let g = program_graph(&pi).unwrap();
    assert_eq!(g.feasible_graph.len(), 3);
    check_arcs_follow_objective(&v);
}

#[test]
fn recession_direction_is_unbounded() {
    let v = planar(&[[1, 0, 0], [0, 1, 0]], [1, 1]);
    let pi = Program::new(om_of(&v).unwrap(), 1, 4).unwrap();
    assert!(!is_bounded(&pi).unwrap());
    assert!(!is_proper_program(&pi).unwrap());
    assert!(is_hk_program(&pi).is_err());
}

#[test]
fn empty_region_is_bounded() {
    // x ≥ 1 and x ≤ 0
    let v = planar(&[[1, 0, -1], [-1, 0, 0], [0, 1, 0]], [1, 1]);
    let pi = Program::new(om_of(&v).unwrap(), 1, 5).unwrap();
    assert!(feasible_region(&pi).members.is_empty());
    assert!(is_bounded(&pi).unwrap());
    assert!(!is_proper_program(&pi).unwrap());
}

#[test]
fn objective_parallel_to_an_edge_is_degenerate() {
    // unit square, objective y: the bottom and top edges are level
    let v = planar(&[[1, 0, 0], [0, 1, 0], [-1, 0, 1], [0, -1, 1]], [0, 1]);
    let pi = Program::new(om_of(&v).unwrap(), 1, 6).unwrap();
    assert!(is_bounded(&pi).unwrap());
    assert!(!is_generic_objective(&pi).unwrap());
    assert!(!is_proper_program(&pi).unwrap());
    check_arcs_follow_objective(&v);
}

#[test]
fn negating_the_objective_reverses_arcs() {
    let v = planar(&[[1, 0, 0], [0, 1, 0], [-1, -1, 3], [-1, 2, 4]], [2, 1]);
    let om = om_of(&v).unwrap();
    let a = program_graph(&Program::new(om.clone(), 1, 6).unwrap()).unwrap();
    let b = program_graph(&Program::new(om.reorient(&[6]).unwrap(), 1, 6).unwrap()).unwrap();
    assert_eq!(a.graph.reversed().arcs().len(), b.graph.arcs().len());
    for &(u, w) in a.graph.arcs() {
        let (lu, lw) = (&a.graph.labels()[u], &a.graph.labels()[w]);
        let (bu, bw) = (b.graph.vertex(lu).unwrap(), b.graph.vertex(lw).unwrap());
        assert!(b.graph.has_arc(bw, bu));
    }
}

#[test]
fn program_report_json() {
    let v = planar(&[[1, 0, 0], [0, 1, 0], [-1, -1, 3]], [1, 2]);
    let pi = Program::new(om_of(&v).unwrap(), 1, 5).unwrap();
    let r = serde_json::to_value(program_report(&pi).unwrap()).unwrap();
    for key in ["g", "f", "proper", "bounded", "generic", "hk", "euclidean"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert_eq!(r["hk"]["holds"], true);
}

#[test]
fn ic842_is_hk_but_not_euclidean() {
    let om = ic_8_4_2_om();
    let hk = is_hk_matroid(&om).unwrap();
    assert!(hk.holds);
    assert_eq!(hk.uso_anomalies, 0);
    let eu = is_euclidean_matroid(&om).unwrap();
    assert!(!eu.holds);
    let w = eu.witness.unwrap();
    let pi = Program::new(om, w.g, w.f).unwrap();
    assert!(!is_euclidean_program(&pi).unwrap());
}

#[test]
fn alternating_matroid_is_hk_and_euclidean() {
    let om = OrientedMatroid::from_chirotope(&alternating_4_8()).unwrap();
    assert!(is_hk_matroid(&om).unwrap().holds);
    assert!(is_euclidean_matroid(&om).unwrap().holds);
}

#[test]
fn rank_two_is_euclidean() {
    let om = om_of(&[vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 2]]).unwrap();
    assert!(is_euclidean_matroid(&om).unwrap().holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planar_arcs_follow_objective(
        lines in proptest::collection::vec(proptest::array::uniform3(-4i64..=4), 2..=5),
        c in proptest::array::uniform2(-3i64..=3),
    ) {
        check_arcs_follow_objective(&planar(&lines, c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn representable_rank_four_controls(vs in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 6..=7)) {
        if let Some(om) = om_of(&vs) {
            if om.rank() == 4 {
                let hk = is_hk_matroid(&om).unwrap();
                prop_assert!(hk.holds, "{:?}", hk.witness);
                prop_assert_eq!(hk.uso_anomalies, 0);
                prop_assert!(is_euclidean_matroid(&om).unwrap().holds);
            }
        }
    }
}
