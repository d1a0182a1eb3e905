//! From a sensitive LP digraph to a non-HK* oriented matroid.
//!
//! The polar dual `P` of the polytope is cut by a line `L` through the
//! origin in the direction of decreasing objective, so the facets of `P`
//! are met in objective order. The first two facets `F_a`, `F_b` and a small
//! simplex in their ridge span a `d`-simplex whose other walls `T_j` all
//! contain `L`. Lifting `{H_i} ∪ {T_j}` to a central arrangement gives an
//! oriented matroid in which `T` is a coline with that shelling; mutating
//! the simplex basis swaps `e_a` and `e_b` and breaks Holt-Klee.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::catalog::six_vertex_catalog;
use super::lp::{find_sensitive_objective, is_sensitive, pyramid, sensitive_after_truncation_at, MarkedLPDigraph};
use super::polytope::{polar_dual, translated, Polytope};
use crate::chirotope::Chirotope;
use crate::coshell::{coline_shelling, is_hkstar_fixation, ColineFixation};
use crate::error::{Error, Result};
use crate::exact::{self, add, centroid, dot, fmt_rat, lerp, ratio, scale, sub, Rat, RatVec};
use crate::om::{validate_cocircuit_axioms, OrientedMatroid};

/// Facets of a polytope in the order a line through the interior meets
/// their hyperplanes: forward from the start point, then back in from the
/// far side.
#[derive(Clone, Debug)]
pub struct LineShelling {
    pub point: RatVec,
    pub direction: RatVec,
    /// Facet indices.
    pub order: Vec<usize>,
    /// Line parameter at which each facet hyperplane is met, by facet index.
    pub params: Vec<Rat>,
}

impl LineShelling {
    pub fn at(&self, t: &Rat) -> RatVec {
        add(&self.point, &scale(&self.direction, t))
    }
}

pub fn line_shelling(p: &Polytope, point: &[Rat], direction: &[Rat]) -> Result<LineShelling> {
    if !p.contains_interior(point) {
        return Err(Error::Precondition("line does not start in the interior".into()));
    }
    let mut params = Vec::with_capacity(p.facets().len());
    for (i, f) in p.facets().iter().enumerate() {
        let speed = dot(&f.normal, direction);
        if speed.is_zero() {
            return Err(Error::NonGeneric(format!("line is parallel to facet {i}")));
        }
        params.push(f.slack(point) / speed);
    }
    let mut order: Vec<usize> = (0..params.len()).collect();
    // forward hits (t > 0) first, then the far side in increasing t
    order.sort_by(|&a, &b| {
        let (ta, tb) = (&params[a], &params[b]);
        (ta.is_negative(), ta).cmp(&(tb.is_negative(), tb))
    });
    if order.windows(2).any(|w| params[w[0]] == params[w[1]]) {
        return Err(Error::NonGeneric("line meets two facet hyperplanes at one point".into()));
    }
    Ok(LineShelling {
        point: point.to_vec(),
        direction: direction.to_vec(),
        order,
        params,
    })
}

/// The `d`-simplex on the first two facets of a line shelling.
#[derive(Clone, Debug)]
pub struct ShellingSimplex {
    pub va: RatVec,
    pub vb: RatVec,
    /// Vertices of the `(d-2)`-simplex inside the ridge.
    pub ridge_simplex: Vec<RatVec>,
    /// `T_j` as `normal · x = offset`, oriented so the vertex of the ridge
    /// simplex it omits lies on the positive side.
    pub hyperplanes: Vec<(RatVec, Rat)>,
}

/// Ridge simplices tried, in order: every `(d-1)`-subset of the ridge
/// vertices (lexicographic), each shrunk toward the ridge centroid by
/// `1/2, 1/3, 1/4`.
pub fn simplex_hyperplanes(p: &Polytope, shelling: &LineShelling, fa: usize, fb: usize) -> Result<ShellingSimplex> {
    let d = p.dim();
    if shelling.order.len() < 2 || shelling.order[0] != fa || shelling.order[1] != fb {
        return Err(Error::Precondition("F_a, F_b must open the shelling".into()));
    }
    let facets = p.facets();
    let ridge: Vec<usize> = facets[fa]
        .vertices
        .iter()
        .copied()
        .filter(|v| facets[fb].vertices.contains(v))
        .collect();
    let ridge_points: Vec<RatVec> = ridge.iter().map(|&v| p.vertices()[v].clone()).collect();
    let ridge_dim = if ridge_points.is_empty() {
        -1
    } else {
        let diffs: Vec<RatVec> = ridge_points[1..].iter().map(|x| sub(x, &ridge_points[0])).collect();
        exact::rank(&diffs) as isize
    };
    if ridge_dim != d as isize - 2 {
        return Err(Error::Precondition("F_a and F_b are not adjacent".into()));
    }
    let va = shelling.at(&shelling.params[fa]);
    let vb = shelling.at(&shelling.params[fb]);
    let center = centroid(&ridge_points);
    for shrink in 2..=4i64 {
        let lambda = ratio(1, shrink);
        for chosen in choose(ridge.len(), d - 1) {
            let simplex: Vec<RatVec> = chosen
                .iter()
                .map(|&k| lerp(&center, &ridge_points[k], &lambda))
                .collect();
            if let Some(found) = try_simplex(p, fa, fb, &va, &vb, simplex) {
                return Ok(found);
            }
        }
    }
    Err(Error::verification("simplex_hyperplanes", "no ridge simplex passed verification"))
}

fn try_simplex(p: &Polytope, fa: usize, fb: usize, va: &RatVec, vb: &RatVec, simplex: Vec<RatVec>) -> Option<ShellingSimplex> {
    let d = p.dim();
    let mut corners = vec![va.clone(), vb.clone()];
    corners.extend(simplex.iter().cloned());
    let diffs: Vec<RatVec> = corners[1..].iter().map(|x| sub(x, &corners[0])).collect();
    if exact::rank(&diffs) != d {
        return None;
    }
    // no other facet hyperplane may touch the simplex
    for (i, f) in p.facets().iter().enumerate() {
        if i != fa && i != fb && corners.iter().any(|x| !f.slack(x).is_positive()) {
            return None;
        }
    }
    let mut hyperplanes = Vec::with_capacity(d - 1);
    for j in 0..simplex.len() {
        let mut through = vec![va.clone(), vb.clone()];
        through.extend(simplex.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()));
        let (mut normal, mut offset) = exact::hyperplane_through(&through)?;
        let side = dot(&normal, &simplex[j]) - &offset;
        if side.is_zero() {
            return None;
        }
        if side.is_negative() {
            normal = normal.iter().map(|x| -x).collect();
            offset = -offset;
        }
        hyperplanes.push((normal, offset));
    }
    // the T_j meet exactly in L
    let normals: Vec<RatVec> = hyperplanes.iter().map(|(n, _)| n.clone()).collect();
    if exact::rank(&normals) != d - 1 {
        return None;
    }
    Some(ShellingSimplex {
        va: va.clone(),
        vb: vb.clone(),
        ridge_simplex: simplex,
        hyperplanes,
    })
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Sensitive LP digraph on a `d`-polytope with `vertices` vertices: a
/// catalog 3-polytope, truncated up, then pyramided up.
pub fn sensitive_polytope(d: usize, vertices: usize) -> Result<MarkedLPDigraph> {
    if d < 3 || vertices < d + 3 {
        return Err(Error::Precondition("needs d ≥ 3 and at least d + 3 vertices".into()));
    }
    let mut gamma = six_vertex_catalog()
        .iter()
        .find_map(|entry| find_sensitive_objective(&entry.polytope))
        .ok_or_else(|| Error::verification("sensitive_polytope", "no catalog polytope is sensitive"))?;
    for _ in 0..vertices - d - 3 {
        gamma = truncate_once(&gamma)?;
    }
    for _ in 3..d {
        gamma = pyramid(&gamma)?;
    }
    Ok(gamma)
}

/// First simple vertex and apex choice whose truncation has a geometric
/// sensitive objective.
fn truncate_once(gamma: &MarkedLPDigraph) -> Result<MarkedLPDigraph> {
    let p = &gamma.polytope;
    for v in (0..p.vertex_count()).filter(|&v| p.is_simple_vertex(v)) {
        for apex in 0..3 {
            if let Ok(cert) = sensitive_after_truncation_at(gamma, v, apex) {
                if let Some(g) = cert.geometric {
                    return Ok(g);
                }
            }
        }
    }
    Err(Error::verification("truncate", "no truncation kept a geometric sensitive objective"))
}

#[derive(Clone, Debug, Serialize)]
pub struct NonHkStarCertificate {
    pub r: usize,
    pub n: usize,
    pub chirotope: String,
    pub coline: Vec<usize>,
    pub mutated_basis: Vec<usize>,
    pub polytope_vertices: Vec<Vec<String>>,
    pub objective: Vec<String>,
    pub shelling_order_before: Vec<usize>,
    pub shelling_order_after: Vec<usize>,
    pub disjoint_path_count: usize,
    pub required_d: usize,
}

impl NonHkStarCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Rank-`r` non-HK* oriented matroid on `n` elements, for `r ≥ 4` and
/// `n ≥ 2r`, with its certificate. Every stage is verified.
pub fn build_non_hkstar(r: usize, n: usize) -> Result<(Chirotope, NonHkStarCertificate)> {
    if r < 4 || n < 2 * r {
        return Err(Error::Precondition(format!("needs r ≥ 4 and n ≥ 2r, got r = {r}, n = {n}")));
    }
    let d = r - 1;
    let gamma = sensitive_polytope(d, n - d + 1)?;
    build_from_sensitive(&gamma)
}

/// The flipping construction on a given sensitive LP digraph.
pub fn build_from_sensitive(gamma: &MarkedLPDigraph) -> Result<(Chirotope, NonHkStarCertificate)> {
    if !is_sensitive(gamma)? {
        return Err(Error::Precondition("LP digraph is not sensitive".into()));
    }
    let q = &gamma.polytope;
    let d = q.dim();
    let nv = q.vertex_count();
    let c = &gamma.objective;
    let objective_order = gamma.vertex_order();

    // centre for the polar: the vertex centroid, nudged toward s if some
    // vertex is level with it (L would be parallel to that facet)
    let base = q.vertex_centroid();
    let center = (0..16i64)
        .map(|k| if k == 0 { base.clone() } else { lerp(&base, &q.vertices()[gamma.s], &ratio(1, k + 2)) })
        .find(|m| q.vertices().iter().all(|v| !dot(c, &sub(v, m)).is_zero()))
        .ok_or_else(|| Error::verification("line_shelling", "perturbation budget exhausted"))?;
    let shifted = translated(q, &center);
    let (dual, primal_of) = polar_dual(&shifted)?;
    let mut facet_of = vec![0; nv];
    for (f, &v) in primal_of.iter().enumerate() {
        facet_of[v] = f;
    }

    let origin = vec![Rat::zero(); d];
    let direction: RatVec = c.iter().map(|x| -x).collect();
    let shelling = line_shelling(&dual, &origin, &direction)?;
    let geometric: Vec<usize> = shelling.order.iter().map(|&f| primal_of[f]).collect();
    if geometric != objective_order {
        return Err(Error::verification("line_shelling", "facet order differs from the objective order"));
    }
    let (fa, fb) = (facet_of[gamma.s], facet_of[gamma.w]);
    let simplex = simplex_hyperplanes(&dual, &shelling, fa, fb)?;

    // element i + 1 is the facet dual to vertex i; the T_j follow
    let mut vectors: Vec<RatVec> = (0..nv)
        .map(|v| {
            let f = &dual.facets()[facet_of[v]];
            let mut x: RatVec = f.normal.iter().map(|a| -a).collect();
            x.push(f.offset.clone());
            x
        })
        .collect();
    for (normal, offset) in &simplex.hyperplanes {
        let mut x = normal.clone();
        x.push(-offset);
        vectors.push(x);
    }
    let ground = vectors.len();
    let coline: Vec<usize> = (nv + 1..=ground).collect();
    let label = |v: usize| v + 1;

    let chi = Chirotope::from_vectors(&vectors)?;
    let om = OrientedMatroid::from_chirotope(&chi)?;
    let before = ColineFixation::new(om, &coline)
        .map_err(|e| Error::verification("coline", e.to_string()))?;
    let order_before = coline_shelling(&before)?.order;
    let expected: Vec<usize> = objective_order.iter().map(|&v| label(v)).collect();
    if !same_up_to_reversal(&order_before, &expected) {
        return Err(Error::verification("coline_shelling", "coline shelling differs from the line shelling"));
    }
    if !is_hkstar_fixation(&before)?.holds {
        return Err(Error::verification("coline_shelling", "unmutated fixation already fails Holt-Klee"));
    }

    let mut basis = vec![label(gamma.s), label(gamma.w)];
    basis.extend(&coline);
    basis.sort_unstable();
    let mutated = chi.mutate(&basis)?;
    let axioms = validate_cocircuit_axioms(&mutated.cocircuits());
    if !axioms.passed() {
        return Err(Error::verification("mutate", format!("{axioms:?}")));
    }
    let om2 = OrientedMatroid::from_chirotope(&mutated)?;
    if om2.rank() != d + 1 || om2.ground_size() != ground {
        return Err(Error::verification("mutate", "rank or size changed"));
    }
    let after = ColineFixation::new(om2, &coline)
        .map_err(|e| Error::verification("mutate", format!("T is no longer a coline: {e}")))?;
    let order_after = coline_shelling(&after)?.order;
    let mut swapped = expected.clone();
    swapped.swap(0, 1);
    if !same_up_to_reversal(&order_after, &swapped) {
        return Err(Error::verification("mutate", "shelling changed beyond the first pair"));
    }
    let report = is_hkstar_fixation(&after)?;
    if report.holds {
        return Err(Error::verification("is_hkstar_fixation", "mutated fixation still satisfies Holt-Klee"));
    }

    let cert = NonHkStarCertificate {
        r: d + 1,
        n: ground,
        chirotope: mutated.to_line(),
        coline,
        mutated_basis: basis,
        polytope_vertices: q.export().vertices,
        objective: c.iter().map(fmt_rat).collect(),
        shelling_order_before: order_before,
        shelling_order_after: order_after,
        disjoint_path_count: report.disjoint_path_count,
        required_d: report.required_d,
    };
    Ok((mutated, cert))
}

fn same_up_to_reversal(a: &[usize], b: &[usize]) -> bool {
    a == b || a.iter().rev().eq(b.iter())
}
