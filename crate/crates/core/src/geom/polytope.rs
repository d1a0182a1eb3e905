//! Convex polytopes given by exact rational vertices.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::digraph::FacedGraph;
use crate::error::{Error, Result};
use crate::exact::{self, centroid, dot, fmt_rat, rat, sub, Rat, RatVec};

/// Bit set over the vertices of one polytope.
pub type VertexMask = u64;

/// Points brute-forced into a hull stay well below this.
pub const MAX_HULL_POINTS: usize = 24;

/// Supporting hyperplane `normal · x ≤ offset` with the vertices on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: RatVec,
    pub offset: Rat,
    pub vertices: Vec<usize>,
}

impl Facet {
    fn mask(&self) -> VertexMask {
        self.vertices.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// `offset - normal · x`: positive strictly inside.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.offset - dot(&self.normal, x)
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: Vec<RatVec>,
    facets: Vec<Facet>,
    edges: Vec<(usize, usize)>,
}

/// Facets of the convex hull by brute force over `d`-subsets. Points that
/// are not extreme are dropped; vertex order follows the input.
pub fn hull_facets(points: &[RatVec]) -> Result<Polytope> {
    let Some(d) = points.first().map(Vec::len) else {
        return Err(Error::Precondition("no points".into()));
    };
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::Precondition("points of unequal dimension".into()));
    }
    if points.len() > MAX_HULL_POINTS {
        return Err(Error::Precondition(format!("at most {MAX_HULL_POINTS} points")));
    }
    let diffs: Vec<RatVec> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    if d == 0 || exact::rank(&diffs) < d {
        return Err(Error::RankDeficient);
    }
    let mut seen: BTreeSet<(Vec<String>, String)> = BTreeSet::new();
    let mut raw: Vec<(RatVec, Rat, VertexMask)> = Vec::new();
    for subset in subsets(points.len(), d) {
        let chosen: Vec<RatVec> = subset.iter().map(|&i| points[i].clone()).collect();
        let Some((mut normal, mut offset)) = exact::hyperplane_through(&chosen) else {
            continue;
        };
        let sides: Vec<Rat> = points.iter().map(|p| dot(&normal, p) - &offset).collect();
        let above = sides.iter().any(|s| s.is_positive());
        let below = sides.iter().any(|s| s.is_negative());
        if above && below {
            continue;
        }
        if above {
            normal = normal.iter().map(|x| -x).collect();
            offset = -offset;
        }
        let key = (normal.iter().map(fmt_rat).collect(), fmt_rat(&offset));
        if seen.insert(key) {
            let on = sides
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_zero())
                .fold(0, |m, (i, _)| m | 1 << i);
            raw.push((normal, offset, on));
        }
    }
    // extreme points are cut out by facets whose normals span R^d
    let extreme: Vec<usize> = (0..points.len())
        .filter(|&i| {
            let normals: Vec<RatVec> = raw
                .iter()
                .filter(|(_, _, on)| on >> i & 1 == 1)
                .map(|(n, _, _)| n.clone())
                .collect();
            exact::rank(&normals) == d
                && !(0..i).any(|j| points[j] == points[i])
        })
        .collect();
    let renumber: HashMap<usize, usize> = extreme.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let vertices: Vec<RatVec> = extreme.iter().map(|&i| points[i].clone()).collect();
    let facets: Vec<Facet> = raw
        .into_iter()
        .map(|(normal, offset, on)| Facet {
            normal,
            offset,
            vertices: (0..points.len())
                .filter(|i| on >> i & 1 == 1)
                .filter_map(|i| renumber.get(&i).copied())
                .collect(),
        })
        .collect();
    Ok(Polytope::assemble(vertices, facets))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl Polytope {
    fn assemble(vertices: Vec<RatVec>, facets: Vec<Facet>) -> Self {
        let mut p = Polytope {
            vertices,
            facets,
            edges: Vec::new(),
        };
        p.edges = p
            .faces(1)
            .into_iter()
            .map(|m| {
                let a = m.trailing_zeros() as usize;
                let b = (m & !(1 << a)).trailing_zeros() as usize;
                (a, b)
            })
            .collect();
        p.edges.sort_unstable();
        p
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Graph edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn is_simple_vertex(&self, v: usize) -> bool {
        self.neighbors(v).len() == self.dim()
    }

    pub fn vertex_centroid(&self) -> RatVec {
        centroid(&self.vertices)
    }

    /// Vertex sets of all proper faces of dimension `k`. Faces are the
    /// nonempty intersections of facets; the dimension of a face is its
    /// affine rank.
    pub fn faces(&self, k: usize) -> Vec<VertexMask> {
        let mut all: BTreeSet<VertexMask> = self.facets.iter().map(Facet::mask).collect();
        let mut frontier: Vec<VertexMask> = all.iter().copied().collect();
        while let Some(f) = frontier.pop() {
            for g in self.facets.iter().map(Facet::mask) {
                let h = f & g;
                if h != 0 && all.insert(h) {
                    frontier.push(h);
                }
            }
        }
        all.into_iter().filter(|&m| self.affine_dim(m) == k as isize).collect()
    }

    fn affine_dim(&self, mask: VertexMask) -> isize {
        let idx: Vec<usize> = (0..self.vertices.len()).filter(|i| mask >> i & 1 == 1).collect();
        let Some(&first) = idx.first() else {
            return -1;
        };
        let diffs: Vec<RatVec> = idx[1..]
            .iter()
            .map(|&i| sub(&self.vertices[i], &self.vertices[first]))
            .collect();
        exact::rank(&diffs) as isize
    }

    /// The graph with its 2-faces, for orientation enumeration.
    pub fn faced_graph(&self) -> FacedGraph {
        FacedGraph {
            vertices: self.vertices.len(),
            edges: self.edges.clone(),
            faces: self
                .faces(2)
                .into_iter()
                .map(|m| (0..self.vertices.len()).filter(|i| m >> i & 1 == 1).collect())
                .collect(),
        }
    }

    /// Whether `x` satisfies every facet inequality strictly.
    pub fn contains_interior(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// Same face lattice up to relabelling the vertices, by brute force over
    /// vertex bijections (fine for the small catalogs used here).
    pub fn is_combinatorially_equivalent(&self, other: &Polytope) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.facets.len() != other.facets.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let mine: BTreeSet<VertexMask> = self.facets.iter().map(Facet::mask).collect();
        let theirs: Vec<VertexMask> = other.facets.iter().map(Facet::mask).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            theirs.iter().all(|&m| {
                let image = (0..n).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << p[i]);
                mine.contains(&image)
            })
        })
    }

    /// `(f0, f1, …, f_{d-1})`
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim()).map(|k| if k == 0 { self.vertex_count() } else { self.faces(k).len() }).collect()
    }

    pub fn export(&self) -> PolytopeExport {
        PolytopeExport {
            dim: self.dim(),
            vertices: self.vertices.iter().map(|v| v.iter().map(fmt_rat).collect()).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            facets: self.facets.iter().map(|f| f.vertices.clone()).collect(),
        }
    }
}

/// Polytope fixture format: vertices as rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeExport {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
    pub facets: Vec<Vec<usize>>,
}

fn permutations(p: &mut Vec<usize>, k: usize, accept: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return accept(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations(p, k + 1, accept) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}

/// Polar dual about the vertex centroid: one dual vertex `a / b` per facet
/// `a·(x - m) ≤ b`. Returns the dual and, for each dual facet, the primal
/// vertex it corresponds to.
pub fn polar_dual(p: &Polytope) -> Result<(Polytope, Vec<usize>)> {
    let m = p.vertex_centroid();
    let dual_points: Vec<RatVec> = p
        .facets
        .iter()
        .map(|f| {
            let b = f.slack(&m);
            f.normal.iter().map(|a| a / &b).collect()
        })
        .collect();
    let dual = hull_facets(&dual_points)?;
    if dual.vertex_count() != p.facets.len() {
        return Err(Error::verification("polar_dual", "a facet normal is not extreme"));
    }
    // dual facet y·(v - m) ≤ 1 for the primal vertex v
    let shifted: Vec<RatVec> = p.vertices.iter().map(|v| sub(v, &m)).collect();
    let mut primal_of = Vec::with_capacity(dual.facets.len());
    for f in &dual.facets {
        let scaled: RatVec = f.normal.iter().map(|a| a / &f.offset).collect();
        let v = shifted
            .iter()
            .position(|s| *s == scaled)
            .ok_or_else(|| Error::verification("polar_dual", "dual facet matches no primal vertex"))?;
        primal_of.push(v);
    }
    if !p.vertices.is_empty() && primal_of.iter().collect::<BTreeSet<_>>().len() != p.vertex_count() {
        return Err(Error::verification("polar_dual", "facet-vertex correspondence is not a bijection"));
    }
    Ok((dual, primal_of))
}

/// `x ↦ x - m`
pub fn translated(p: &Polytope, by: &[Rat]) -> Polytope {
    let vertices: Vec<RatVec> = p.vertices.iter().map(|v| sub(v, by)).collect();
    let facets = p
        .facets
        .iter()
        .map(|f| Facet {
            normal: f.normal.clone(),
            offset: &f.offset - dot(&f.normal, by),
            vertices: f.vertices.clone(),
        })
        .collect();
    Polytope {
        vertices,
        facets,
        edges: p.edges.clone(),
    }
}

/// Convenience for fixtures: integer coordinates.
pub fn int_points(points: &[&[i64]]) -> Vec<RatVec> {
    points.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()
}
