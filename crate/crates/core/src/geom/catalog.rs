//! Small fixed polytopes.

use super::polytope::{hull_facets, int_points, Polytope};

#[derive(Clone, Debug)]
pub struct CatalogPolytope {
    pub name: &'static str,
    pub polytope: Polytope,
}

fn build(points: &[&[i64]]) -> Polytope {
    hull_facets(&int_points(points)).expect("fixture is full-dimensional")
}

pub fn simplex_3() -> Polytope {
    build(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
}

pub fn cube_3() -> Polytope {
    build(&[
        &[0, 0, 0],
        &[1, 0, 0],
        &[0, 1, 0],
        &[1, 1, 0],
        &[0, 0, 1],
        &[1, 0, 1],
        &[0, 1, 1],
        &[1, 1, 1],
    ])
}

/// The two combinatorial types with five vertices: square pyramid and
/// triangular bipyramid.
pub fn five_vertex_polytopes() -> Vec<CatalogPolytope> {
    vec![
        CatalogPolytope {
            name: "square pyramid",
            polytope: build(&[&[0, 0, 0], &[2, 0, 0], &[2, 2, 0], &[0, 2, 0], &[1, 1, 2]]),
        },
        CatalogPolytope {
            name: "triangular bipyramid",
            polytope: build(&[&[0, 0, 0], &[3, 0, 0], &[0, 3, 0], &[1, 1, 2], &[1, 1, -2]]),
        },
    ]
}

/// One realization of each of the seven combinatorial types with six
/// vertices. The first two admit no sensitive orientation at all; the
/// realizations of the other five were picked so that a small lattice
/// objective is sensitive.
pub fn six_vertex_catalog() -> Vec<CatalogPolytope> {
    let entries: [(&'static str, &[&[i64]]); 7] = [
        (
            "octahedron",
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
        ),
        (
            "pentagonal pyramid",
            &[&[0, 0, 0], &[4, 0, 0], &[5, 3, 0], &[2, 5, 0], &[-1, 3, 0], &[2, 2, 4]],
        ),
        (
            "triangular prism",
            &[&[9, 15, 0], &[-6, -6, 0], &[-6, 3, 0], &[8, 7, 6], &[-2, -7, 6], &[2, -5, 12]],
        ),
        (
            "two quadrilaterals, four triangles",
            &[&[2, 2, 6], &[6, 8, 0], &[0, 4, 7], &[3, 4, 5], &[6, 6, 2], &[4, 5, 4]],
        ),
        (
            "one quadrilateral, six triangles (a)",
            &[&[1, 4, 7], &[3, 7, 4], &[7, 0, 6], &[3, 8, 8], &[7, 6, 2], &[6, 8, 8]],
        ),
        (
            "one quadrilateral, six triangles (b)",
            &[&[7, 6, 4], &[1, 2, 6], &[7, 1, 0], &[3, 5, 6], &[7, 6, 3], &[8, 3, 5]],
        ),
        (
            "capped bipyramid",
            &[&[3, 4, 8], &[1, 7, 5], &[1, 3, 3], &[4, 3, 7], &[8, 5, 8], &[0, 3, 1]],
        ),
    ];
    entries
        .iter()
        .map(|&(name, points)| CatalogPolytope {
            name,
            polytope: build(points),
        })
        .collect()
}
