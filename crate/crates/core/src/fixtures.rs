//! Reference instances used by tests, the CLI and the bindings.

use crate::chirotope::Chirotope;
use crate::digraph::Digraph;
use crate::exact::rat_vec;
use crate::om::OrientedMatroid;

/// IC(8,4,2), the oriented matroid RS(8), in block form: four rows of basis
/// labels read column-wise and one row of signs.
pub const IC_8_4_2_BLOCK: &str = "\
1111211121121231112112123112123123411121121231121231234112123123412345
2223322332334442233233444233444555522332334442334445555233444555566666
3344434445555553444555555666666666634445555556666666666777777777777777
4555566666666667777777777777777777788888888888888888888888888888888888
+++++++++++++++++++++++++++-------++------------+--++-----+--+---+--++";

pub fn ic_8_4_2() -> Chirotope {
    Chirotope::parse(IC_8_4_2_BLOCK).expect("fixture parses")
}

pub fn ic_8_4_2_om() -> OrientedMatroid {
    OrientedMatroid::from_chirotope(&ic_8_4_2()).expect("fixture spans")
}

/// All-positive chirotope of rank 4 on 8 elements (cyclic 4-polytope with 8 vertices).
pub fn alternating_4_8() -> Chirotope {
    Chirotope::alternating(8, 4).expect("valid shape")
}

/// Normals `(0,0,1), (1,0,0), (0,1,0), (1,1,0)`: elements 2, 3, 4 are coplanar.
pub fn coplanar_normals_chirotope() -> Chirotope {
    Chirotope::from_vectors(&[
        rat_vec(&[0, 0, 1]),
        rat_vec(&[1, 0, 0]),
        rat_vec(&[0, 1, 0]),
        rat_vec(&[1, 1, 0]),
    ])
    .expect("full rank")
}

pub fn coplanar_normals_om() -> OrientedMatroid {
    OrientedMatroid::from_chirotope(&coplanar_normals_chirotope()).expect("spans")
}

/// Edges of the 3-cube on vertices `0..8`, labelled by their bit patterns.
pub fn cube_edges() -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    edges
}

/// The six square faces of the 3-cube.
pub fn cube_faces() -> Vec<Vec<usize>> {
    let mut faces = Vec::new();
    for bit in 0..3 {
        for value in 0..2 {
            faces.push((0..8usize).filter(|v| (v >> bit) & 1 == value).collect());
        }
    }
    faces
}

fn cube_labels() -> Vec<String> {
    // v1 = 000, v2 = 001, v7 = 110, v8 = 111; the rest in between
    let names = ["v1", "v2", "v3", "v5", "v4", "v6", "v7", "v8"];
    names.iter().map(|s| s.to_string()).collect()
}

/// An LP orientation of the cube: arcs increase `x0 + 2 x1 + 4 x2`.
pub fn cube_lp_orientation() -> Digraph {
    let mut d = Digraph::with_labels(cube_labels());
    for (u, v) in cube_edges() {
        d.add_arc(u, v).expect("distinct endpoints");
    }
    d
}

/// Acyclic unique-source unique-sink orientation of the cube in which every
/// dipath from `v1` to `v8` passes through `v2` or `v7`.
pub fn cube_non_hk_orientation() -> Digraph {
    let arcs = [
        (0b000, 0b001),
        (0b000, 0b010),
        (0b000, 0b100),
        (0b001, 0b011),
        (0b001, 0b101),
        (0b011, 0b010),
        (0b011, 0b111),
        (0b101, 0b100),
        (0b101, 0b111),
        (0b010, 0b110),
        (0b100, 0b110),
        (0b110, 0b111),
    ];
    let mut d = Digraph::with_labels(cube_labels());
    for (u, v) in arcs {
        d.add_arc(u, v).expect("distinct endpoints");
    }
    d
}
