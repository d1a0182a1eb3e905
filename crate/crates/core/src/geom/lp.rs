//! LP digraphs of polytopes, sensitive orientations, and the two
//! operations (truncation, pyramid) that carry sensitivity upwards.

use num_traits::{One, Zero};
use serde::Serialize;

use super::polytope::{hull_facets, Polytope};
use crate::digraph::{enumerate_acyclic_uso, Digraph};
use crate::error::{Error, Result};
use crate::exact::{centroid, dot, fmt_rat, lerp, rat, ratio, Rat, RatVec};

/// An LP digraph with its lowest vertex `s` and second-lowest vertex `w`.
#[derive(Clone, Debug)]
pub struct MarkedLPDigraph {
    pub polytope: Polytope,
    pub objective: RatVec,
    pub graph: Digraph,
    pub s: usize,
    pub w: usize,
}

impl MarkedLPDigraph {
    pub fn values(&self) -> Vec<Rat> {
        self.polytope.vertices().iter().map(|v| dot(&self.objective, v)).collect()
    }

    /// Vertex indices by increasing objective value.
    pub fn vertex_order(&self) -> Vec<usize> {
        let values = self.values();
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]));
        order
    }

    pub fn certificate(&self) -> SensitiveCertificate {
        let flipped = self.graph.with_arc_reversed(self.s, self.w).expect("(s, w) is an arc");
        let report = flipped.holt_klee(self.polytope.dim());
        SensitiveCertificate {
            dim: self.polytope.dim(),
            vertices: self.polytope.export().vertices,
            objective: self.objective.iter().map(fmt_rat).collect(),
            s: self.s,
            w: self.w,
            arcs: self.graph.arcs().iter().map(|&(u, v)| [u, v]).collect(),
            flipped_disjoint_paths: report.disjoint_path_count,
            required_d: report.required_d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SensitiveCertificate {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub objective: Vec<String>,
    pub s: usize,
    pub w: usize,
    pub arcs: Vec<[usize; 2]>,
    pub flipped_disjoint_paths: usize,
    pub required_d: usize,
}

fn vertex_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// Orients every edge toward the larger objective value.
pub fn lp_digraph(p: &Polytope, c: &[Rat]) -> Result<MarkedLPDigraph> {
    if c.len() != p.dim() {
        return Err(Error::Precondition("objective of the wrong dimension".into()));
    }
    let values: Vec<Rat> = p.vertices().iter().map(|v| dot(c, v)).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if let Some(k) = order.windows(2).position(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::NonGeneric(format!(
            "vertices {} and {} tie",
            order[k] + 1,
            order[k + 1] + 1
        )));
    }
    let mut graph = Digraph::with_labels(vertex_labels(p.vertex_count()));
    for &(a, b) in p.edges() {
        if values[a] < values[b] {
            graph.add_arc(a, b)?;
        } else {
            graph.add_arc(b, a)?;
        }
    }
    let (s, w) = (order[0], order[1]);
    if !graph.has_arc(s, w) {
        return Err(Error::verification("lp_digraph", "lowest two vertices are not adjacent"));
    }
    Ok(MarkedLPDigraph {
        polytope: p.clone(),
        objective: c.to_vec(),
        graph,
        s,
        w,
    })
}

/// Reversing `s → w` keeps the digraph acyclic with a unique source and
/// sink; whether it also keeps Holt-Klee in dimension `d` is the question.
/// Errors if the reversal is not even acyclic and USO.
pub fn flip_breaks_holt_klee(graph: &Digraph, s: usize, w: usize, d: usize) -> Result<bool> {
    let flipped = graph.with_arc_reversed(s, w)?;
    if !flipped.is_acyclic() || !flipped.is_uso() {
        return Err(Error::verification(
            "is_sensitive",
            "reversing (s, w) lost acyclicity or the unique source and sink",
        ));
    }
    Ok(!flipped.holt_klee(d).holds)
}

pub fn is_sensitive(gamma: &MarkedLPDigraph) -> Result<bool> {
    flip_breaks_holt_klee(&gamma.graph, gamma.s, gamma.w, gamma.polytope.dim())
}

/// The abstract analogue of the marked pair: `w` is an out-neighbour of the
/// source whose only in-arc comes from it. Returns every such `w` whose
/// flip breaks Holt-Klee in dimension `d`.
pub fn sensitive_flips(graph: &Digraph, d: usize) -> Vec<usize> {
    let (Some(s), _) = graph.unique_source_sink() else {
        return Vec::new();
    };
    let indeg = graph.in_degrees();
    graph.out_neighbors()[s]
        .iter()
        .copied()
        .filter(|&w| indeg[w] == 1)
        .filter(|&w| flip_breaks_holt_klee(graph, s, w, d).unwrap_or(false))
        .collect()
}

/// Exhaustive count over `enumerate_acyclic_uso` of (orientation, w) pairs
/// whose flip breaks Holt-Klee.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SensitiveCensus {
    pub orientations: usize,
    pub sensitive_orientations: usize,
    pub sensitive_pairs: usize,
}

pub fn sensitive_census(p: &Polytope) -> SensitiveCensus {
    let d = p.dim();
    let mut census = SensitiveCensus {
        orientations: 0,
        sensitive_orientations: 0,
        sensitive_pairs: 0,
    };
    for graph in enumerate_acyclic_uso(&p.faced_graph()) {
        census.orientations += 1;
        let k = sensitive_flips(&graph, d).len();
        census.sensitive_pairs += k;
        census.sensitive_orientations += usize::from(k > 0);
    }
    census
}

/// Objective vectors with integer entries, by increasing max-norm and then
/// lexicographically. Norms `1..=budget`.
pub fn lattice_directions(dim: usize, budget: i64) -> impl Iterator<Item = RatVec> {
    (1..=budget).flat_map(move |k| {
        let side = (2 * k + 1) as usize;
        let total = side.pow(dim as u32);
        (0..total).filter_map(move |mut code| {
            let mut v = Vec::with_capacity(dim);
            for _ in 0..dim {
                v.push((code % side) as i64 - k);
                code /= side;
            }
            v.reverse();
            (v.iter().map(|x| x.abs()).max() == Some(k)).then(|| v.iter().map(|&x| rat(x)).collect())
        })
    })
}

pub const DEFAULT_SEARCH_BUDGET: i64 = 6;

/// First sensitive LP digraph over `seeds` followed by the lattice
/// directions up to `budget`; non-generic directions are skipped.
pub fn find_sensitive_objective_from(
    p: &Polytope,
    seeds: &[RatVec],
    budget: i64,
) -> Option<MarkedLPDigraph> {
    seeds
        .iter()
        .cloned()
        .chain(lattice_directions(p.dim(), budget))
        .find_map(|c| {
            let gamma = lp_digraph(p, &c).ok()?;
            is_sensitive(&gamma).ok()?.then_some(gamma)
        })
}

pub fn find_sensitive_objective(p: &Polytope) -> Option<MarkedLPDigraph> {
    find_sensitive_objective_from(p, &[], DEFAULT_SEARCH_BUDGET)
}

/// Cuts the simple vertex `v` off a 3-polytope by the plane through the
/// midpoints of `v v1`, `v v2` and the neighbour `v3`. `v3` is chosen by
/// `apex`, an index into the sorted neighbour list.
pub fn truncate_at(p: &Polytope, v: usize, apex: usize) -> Result<Truncation> {
    if p.dim() != 3 {
        return Err(Error::Precondition("truncation needs a 3-polytope".into()));
    }
    let nbrs = p.neighbors(v);
    if nbrs.len() != 3 {
        return Err(Error::Precondition(format!("vertex {} is not simple", v + 1)));
    }
    if apex > 2 {
        return Err(Error::Precondition("apex index must be 0, 1 or 2".into()));
    }
    let v3 = nbrs[apex];
    let others: Vec<usize> = nbrs.iter().copied().filter(|&x| x != v3).collect();
    let half = ratio(1, 2);
    let u1 = lerp(&p.vertices()[v], &p.vertices()[others[0]], &half);
    let u2 = lerp(&p.vertices()[v], &p.vertices()[others[1]], &half);
    let mut points: Vec<RatVec> = p
        .vertices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, x)| x.clone())
        .collect();
    points.push(u1);
    points.push(u2);
    let q = hull_facets(&points)?;
    if q.vertex_count() != p.vertex_count() + 1 {
        return Err(Error::verification("truncate", "vertex count did not grow by one"));
    }
    // old index i maps to i or i - 1; u1, u2 are last
    let old = |i: usize| if i < v { i } else { i - 1 };
    let n = q.vertex_count();
    let (u1, u2) = (n - 2, n - 1);
    let new_edges = [
        (old(others[0]), u1),
        (old(others[1]), u2),
        (old(v3), u1),
        (old(v3), u2),
        (u1, u2),
    ];
    for &(a, b) in &new_edges {
        if !q.edges().contains(&(a.min(b), a.max(b))) {
            return Err(Error::verification("truncate", "an expected new edge is missing"));
        }
    }
    Ok(Truncation {
        polytope: q,
        removed: v,
        new_edges,
    })
}

pub fn truncate(p: &Polytope, v: usize) -> Result<Polytope> {
    Ok(truncate_at(p, v, 2)?.polytope)
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub polytope: Polytope,
    pub removed: usize,
    /// `(v1,u1), (v2,u2), (v3,u1), (v3,u2), (u1,u2)` in the new numbering.
    pub new_edges: [(usize, usize); 5],
}

/// Outcome of carrying a sensitive digraph across a truncation.
#[derive(Clone, Debug)]
pub struct TruncationCertificate {
    pub truncation: Truncation,
    /// `(in-degree, out-degree)` of the cut vertex in the original digraph.
    pub vertex_type: (usize, usize),
    /// The surviving arcs plus one of the 32 orientations of the new edges
    /// that keeps acyclicity, both USO conditions and sensitivity.
    pub surgery: Digraph,
    pub surgery_options: usize,
    /// Geometric realization, when the objective search finds one.
    pub geometric: Option<MarkedLPDigraph>,
    pub warning: Option<String>,
}

pub fn sensitive_after_truncation(gamma: &MarkedLPDigraph, v: usize) -> Result<TruncationCertificate> {
    sensitive_after_truncation_at(gamma, v, 2)
}

pub fn sensitive_after_truncation_at(gamma: &MarkedLPDigraph, v: usize, apex: usize) -> Result<TruncationCertificate> {
    if !is_sensitive(gamma)? {
        return Err(Error::Precondition("input digraph is not sensitive".into()));
    }
    let tr = truncate_at(&gamma.polytope, v, apex)?;
    let q = &tr.polytope;
    let old = |i: usize| if i < v { i } else { i - 1 };
    let mut kept = Vec::new();
    for &(a, b) in gamma.graph.arcs() {
        if a != v && b != v {
            kept.push((old(a), old(b)));
        }
    }
    let indeg = gamma.graph.in_degrees()[v];
    let outdeg = gamma.graph.out_degrees()[v];
    let faces = q.faced_graph().faces;
    let mut options = Vec::new();
    for bits in 0u32..32 {
        let mut graph = Digraph::with_labels(vertex_labels(q.vertex_count()));
        for &(a, b) in &kept {
            graph.add_arc(a, b)?;
        }
        for (k, &(a, b)) in tr.new_edges.iter().enumerate() {
            if bits >> k & 1 == 0 {
                graph.add_arc(a, b)?;
            } else {
                graph.add_arc(b, a)?;
            }
        }
        if !graph.is_acyclic() || !graph.is_uso() || !faces_uso(&graph, &faces) {
            continue;
        }
        if sensitive_flips(&graph, 3).is_empty() {
            continue;
        }
        options.push(graph);
    }
    let Some(surgery) = options.first().cloned() else {
        return Err(Error::verification(
            "sensitive_after_truncation",
            format!(
                "no orientation of the five new edges keeps sensitivity (cut vertex {} of type in {indeg} / out {outdeg})",
                v + 1
            ),
        ));
    };
    // seeds: the old objective and small nudges of it
    let mut seeds = vec![gamma.objective.clone()];
    for k in 1..=4i64 {
        for axis in 0..3 {
            for sign in [1, -1] {
                let mut c = gamma.objective.clone();
                c[axis] += ratio(sign, 4 * k);
                seeds.push(c);
            }
        }
    }
    let geometric = find_sensitive_objective_from(q, &seeds, DEFAULT_SEARCH_BUDGET);
    let warning = geometric
        .is_none()
        .then(|| "objective search exhausted its budget; only the combinatorial witness is available".to_string());
    Ok(TruncationCertificate {
        vertex_type: (indeg, outdeg),
        surgery_options: options.len(),
        surgery,
        geometric,
        truncation: tr,
        warning,
    })
}

fn faces_uso(graph: &Digraph, faces: &[Vec<usize>]) -> bool {
    faces.iter().all(|f| {
        let inside = |x: &usize| f.contains(x);
        let mut sources = 0;
        let mut sinks = 0;
        for &x in f {
            let has_in = graph.arcs().iter().any(|(a, b)| *b == x && inside(a));
            let has_out = graph.arcs().iter().any(|(a, b)| *a == x && inside(b));
            sources += usize::from(!has_in);
            sinks += usize::from(!has_out);
        }
        sources == 1 && sinks == 1
    })
}

/// Pyramid over `P × {0}` with apex above the vertex centroid at height 1.
/// The objective gains a last coordinate placing the apex strictly between
/// the second- and third-lowest vertices. The apex is the last vertex.
pub fn pyramid(gamma: &MarkedLPDigraph) -> Result<MarkedLPDigraph> {
    let p = &gamma.polytope;
    if p.dim() < 3 {
        return Err(Error::Precondition("pyramid needs dimension at least 3".into()));
    }
    if !is_sensitive(gamma)? {
        return Err(Error::Precondition("input digraph is not sensitive".into()));
    }
    let order = gamma.vertex_order();
    let values = gamma.values();
    let (fw, fz) = (&values[order[1]], &values[order[2]]);
    let base = centroid(p.vertices());
    let target = (fw + fz) / rat(2);
    let last = &target - dot(&gamma.objective, &base);
    let mut points: Vec<RatVec> = p
        .vertices()
        .iter()
        .map(|x| {
            let mut y = x.clone();
            y.push(Rat::zero());
            y
        })
        .collect();
    let mut apex = base;
    apex.push(Rat::one());
    points.push(apex);
    let q = hull_facets(&points)?;
    if q.vertex_count() != p.vertex_count() + 1 {
        return Err(Error::verification("pyramid", "unexpected vertex count"));
    }
    let mut c = gamma.objective.clone();
    c.push(last);
    let lifted = lp_digraph(&q, &c)?;
    let apex_index = q.vertex_count() - 1;
    let lv = lifted.values();
    if lifted.s != gamma.s || lifted.w != gamma.w || !(lv[apex_index] > *fw && lv[apex_index] < *fz) {
        return Err(Error::verification("pyramid", "objective order g(S) < g(W) < g(V) < g(Z) failed"));
    }
    if !is_sensitive(&lifted)? {
        return Err(Error::verification("pyramid", "lifted digraph is not sensitive"));
    }
    Ok(lifted)
}

/// Every LP digraph is acyclic, USO and Holt-Klee in its dimension.
pub fn check_lp_properties(gamma: &MarkedLPDigraph) -> Result<()> {
    let g = &gamma.graph;
    if !g.is_acyclic() || !g.is_uso() || !g.holt_klee(gamma.polytope.dim()).holds {
        return Err(Error::verification("lp_digraph", "LP digraph lacks acyclicity, USO or Holt-Klee"));
    }
    Ok(())
}
