//! Oriented matroid programs `(M, g, f)`: feasible regions, program digraphs,
//! properness, and the Holt-Klee and Euclidean tests.
//!
//! Edges are oriented through the point at infinity of their line: for an
//! edge `X — Y` let `P` be the cocircuit of `M \ f` on the same line with
//! `P_g = 0`, signed so it lies beyond `Y` as seen from `X`. The edge points
//! `X → Y` exactly when `f` is positive at `P`, i.e. when moving from `X`
//! towards `Y` increases the objective. When `f` vanishes at `P` the edge is
//! parallel to `s_f` and stays non-oriented.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::{Digraph, HoltKleeReport};
use crate::error::{Error, Result};
use crate::om::{minors_of_rank_at_least, OrientedMatroid};
use crate::sign::{full_mask, mask_elements, ElementMask, Sign, SignVector};

/// A program `π = (M, g, f)` with `g` the element at infinity and `f` the objective.
#[derive(Clone, Debug)]
pub struct Program {
    om: OrientedMatroid,
    g: usize,
    f: usize,
}

impl Program {
    /// `g` and `f` are element labels of `om`.
    pub fn new(om: OrientedMatroid, g: usize, f: usize) -> Result<Self> {
        if g == f {
            return Err(Error::InvalidProgram(format!("g = f = {g}")));
        }
        let gi = om.index_of(g)?;
        let fi = om.index_of(f)?;
        if om.loop_mask() >> gi & 1 == 1 {
            return Err(Error::InvalidProgram(format!("g = {g} is a loop")));
        }
        if om.coloop_mask() >> fi & 1 == 1 {
            return Err(Error::InvalidProgram(format!("f = {f} is a coloop")));
        }
        Ok(Program { om, g, f })
    }

    pub fn om(&self) -> &OrientedMatroid {
        &self.om
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn f(&self) -> usize {
        self.f
    }

    fn frame(&self) -> Result<Frame> {
        Frame::new(&self.om, self.om.index_of(self.g)?, self.om.index_of(self.f)?)
    }
}

/// Covectors `X` of `M` with `X_g = +` and `X_e ≥ 0` off `{g, f}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibleRegion {
    pub members: Vec<SignVector>,
}

impl FeasibleRegion {
    pub fn contains_tope(&self, om: &OrientedMatroid) -> bool {
        let full = full_mask(om.ground_size());
        self.members.iter().any(|x| x.support() == full)
    }
}

pub fn feasible_region(pi: &Program) -> FeasibleRegion {
    let gi = pi.om.index_of(pi.g).expect("validated");
    let fi = pi.om.index_of(pi.f).expect("validated");
    let members = pi
        .om
        .covectors()
        .iter()
        .filter(|x| x.get(gi) == Sign::Plus && x.minus() & !(1 << fi) == 0)
        .copied()
        .collect();
    FeasibleRegion { members }
}

pub fn is_bounded(pi: &Program) -> Result<bool> {
    Ok(pi.frame()?.is_bounded(0))
}

/// The program digraph `G_π` with its feasible part marked.
#[derive(Clone, Debug)]
pub struct ProgramGraph {
    /// Cocircuits of `M \ f` with `g`-entry `+`, lifted to covectors of `M`.
    pub vertices: Vec<SignVector>,
    /// The `f`-entry of each lifted vertex.
    pub lifts: Vec<Sign>,
    pub feasible: Vec<bool>,
    /// `G_π`; vertex `i` is `vertices[i]`.
    pub graph: Digraph,
    /// `G_π^+`, on the feasible vertices only.
    pub feasible_graph: Digraph,
}

pub fn program_graph(pi: &Program) -> Result<ProgramGraph> {
    let frame = pi.frame()?;
    let fi = pi.om.index_of(pi.f)?;
    let (ids, graph) = frame.full_graph(0, true);
    let vertices: Vec<SignVector> = ids
        .iter()
        .map(|&c| frame.cocircuits[c].inserted(fi, frame.lifts[c]))
        .collect();
    let lifts = ids.iter().map(|&c| frame.lifts[c]).collect();
    let feasible = ids.iter().map(|&c| frame.is_feasible(0, &frame.cocircuits[c])).collect();
    let feasible_graph = frame.feasible_graph(0, true);
    Ok(ProgramGraph {
        vertices,
        lifts,
        feasible,
        graph,
        feasible_graph,
    })
}

pub fn is_generic_objective(pi: &Program) -> Result<bool> {
    Ok(pi.frame()?.feasible_graph(0, false).undirected().is_empty())
}

pub fn is_proper_program(pi: &Program) -> Result<bool> {
    Ok(pi.frame()?.is_proper(0))
}

/// Holt-Klee test of `G_π^+` with `d = r(M) - 1`. Improper programs are rejected.
pub fn is_hk_program(pi: &Program) -> Result<HoltKleeReport> {
    let frame = pi.frame()?;
    if !frame.is_proper(0) {
        return Err(Error::InvalidProgram(format!(
            "(g, f) = ({}, {}) is not proper",
            pi.g, pi.f
        )));
    }
    Ok(frame.feasible_graph(0, true).holt_klee(frame.rank - 1))
}

/// No directed cycle in the whole of `G_π`.
pub fn is_euclidean_program(pi: &Program) -> Result<bool> {
    Ok(pi.frame()?.full_graph(0, false).1.is_acyclic())
}

#[derive(Clone, Debug, Serialize)]
pub struct ProgramReport {
    pub g: usize,
    pub f: usize,
    pub proper: bool,
    pub bounded: bool,
    pub generic: bool,
    pub hk: Option<HoltKleeReport>,
    pub euclidean: bool,
    /// A proper program whose feasible graph lacks a unique source or sink.
    pub uso_anomaly: bool,
}

pub fn program_report(pi: &Program) -> Result<ProgramReport> {
    let frame = pi.frame()?;
    let bounded = frame.is_bounded(0);
    let feasible = frame.feasible_graph(0, true);
    let generic = feasible.undirected().is_empty();
    let proper = frame.is_proper(0);
    let hk = proper.then(|| feasible.holt_klee(frame.rank - 1));
    let uso_anomaly = proper && !feasible.is_uso();
    Ok(ProgramReport {
        g: pi.g,
        f: pi.f,
        proper,
        bounded,
        generic,
        hk,
        euclidean: frame.full_graph(0, false).1.is_acyclic(),
        uso_anomaly,
    })
}

/// Where a matroid-level property fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgramWitness {
    pub deleted: Vec<usize>,
    pub contracted: Vec<usize>,
    pub reorientation: Vec<usize>,
    pub g: usize,
    pub f: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatroidVerdict {
    pub holds: bool,
    pub witness: Option<ProgramWitness>,
    /// Proper programs examined; exact only when the property holds.
    pub programs_checked: usize,
    pub uso_anomalies: usize,
}

/// Every proper program of every reorientation of every minor satisfies
/// Holt-Klee. Minors of rank at most 3 are skipped: they always do.
///
/// Reorientations are enumerated through topes: a reorientation (ignoring
/// `f`, which only reverses arcs) has a feasible region containing a tope
/// iff it is `W^-` for a tope `W` of `N \ f`, and then `W` is that tope.
pub fn is_hk_matroid(om: &OrientedMatroid) -> Result<MatroidVerdict> {
    let minors = minors_of_rank_at_least(om, 4)?;
    let tasks: Vec<(usize, usize, usize)> = minors
        .iter()
        .enumerate()
        .flat_map(|(k, m)| {
            let n = m.om.ground_size();
            (0..n).flat_map(move |fi| (0..n).filter(move |&gi| gi != fi).map(move |gi| (k, fi, gi)))
        })
        .collect();
    let checked = AtomicUsize::new(0);
    let anomalies = AtomicUsize::new(0);
    let witness = tasks
        .par_iter()
        .map(|&(k, fi, gi)| -> Result<Option<ProgramWitness>> {
            let minor = &minors[k];
            let n = &minor.om;
            if n.coloop_mask() >> fi & 1 == 1 || n.loop_mask() >> gi & 1 == 1 {
                return Ok(None);
            }
            let frame = Frame::new(n, gi, fi)?;
            for w in frame.d.topes() {
                let flip = w.minus();
                if !frame.is_proper(flip) {
                    continue;
                }
                checked.fetch_add(1, Ordering::Relaxed);
                let graph = frame.feasible_graph(flip, false);
                let uso = graph.is_uso();
                if !uso {
                    anomalies.fetch_add(1, Ordering::Relaxed);
                }
                let report = graph.holt_klee(frame.rank - 1);
                if !report.holds {
                    let d_labels = frame.d.labels();
                    return Ok(Some(ProgramWitness {
                        deleted: om.labels_of(minor.deleted),
                        contracted: om.labels_of(minor.contracted),
                        reorientation: mask_elements(flip).map(|i| d_labels[i]).collect(),
                        g: n.labels()[gi],
                        f: n.labels()[fi],
                        detail: if uso {
                            format!(
                                "{} disjoint paths, {} required",
                                report.disjoint_path_count, report.required_d
                            )
                        } else {
                            "feasible graph has no unique source and sink".into()
                        },
                    }));
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let witness = match witness {
        Some(Err(e)) => return Err(e),
        Some(Ok(w)) => w,
        None => None,
    };
    Ok(MatroidVerdict {
        holds: witness.is_none(),
        witness,
        programs_checked: checked.into_inner(),
        uso_anomalies: anomalies.into_inner(),
    })
}

/// `G_π` is acyclic for every ordered pair `(g, f)` of `M` itself.
pub fn is_euclidean_matroid(om: &OrientedMatroid) -> Result<MatroidVerdict> {
    let n = om.ground_size();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|gi| (0..n).filter(move |&fi| fi != gi).map(move |fi| (gi, fi)))
        .filter(|&(gi, fi)| om.loop_mask() >> gi & 1 == 0 && om.coloop_mask() >> fi & 1 == 0)
        .collect();
    let witness = pairs
        .par_iter()
        .map(|&(gi, fi)| -> Result<Option<ProgramWitness>> {
            let frame = Frame::new(om, gi, fi)?;
            let (_, graph) = frame.full_graph(0, false);
            Ok((!graph.is_acyclic()).then(|| ProgramWitness {
                deleted: vec![],
                contracted: vec![],
                reorientation: vec![],
                g: om.labels()[gi],
                f: om.labels()[fi],
                detail: "directed cycle in the program graph".into(),
            }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let witness = match witness {
        Some(Err(e)) => return Err(e),
        Some(Ok(w)) => w,
        None => None,
    };
    Ok(MatroidVerdict {
        holds: witness.is_none(),
        witness,
        programs_checked: pairs.len(),
        uso_anomalies: 0,
    })
}

#[derive(Clone, Copy, Debug)]
struct FrameEdge {
    z: SignVector,
    tail: usize,
    head: usize,
    oriented: bool,
}

/// Everything about `(N, g, f)` that does not depend on a reorientation of
/// `N \ f`. Reorienting only moves the `g`-hemisphere and the feasible
/// region; arc directions are intrinsic.
pub(crate) struct Frame {
    /// `N \ f`
    d: OrientedMatroid,
    rank: usize,
    /// position of `g` in `d`
    g: usize,
    cocircuits: Vec<SignVector>,
    lifts: Vec<Sign>,
    /// edges whose endpoints both lie off `s_g`
    edges: Vec<FrameEdge>,
}

fn lift(n: &OrientedMatroid, x: &SignVector, fi: usize) -> Result<Sign> {
    let mut found = None;
    for s in [Sign::Minus, Sign::Zero, Sign::Plus] {
        if n.contains(&x.inserted(fi, s)) {
            if found.is_some() {
                return Err(Error::verification("program_graph", format!("{x} has two f-lifts")));
            }
            found = Some(s);
        }
    }
    found.ok_or_else(|| Error::verification("program_graph", format!("{x} has no f-lift")))
}

impl Frame {
    /// `gi`, `fi` are positions in `n`.
    pub(crate) fn new(n: &OrientedMatroid, gi: usize, fi: usize) -> Result<Self> {
        let d = n.delete_mask(1 << fi);
        let g = if gi > fi { gi - 1 } else { gi };
        let cocircuits = d.cocircuits().to_vec();
        let lifts = cocircuits
            .iter()
            .map(|x| lift(n, x, fi))
            .collect::<Result<Vec<_>>>()?;
        let at_infinity: Vec<&SignVector> = cocircuits.iter().filter(|p| p.get(g) == Sign::Zero).collect();
        let mut edges = Vec::new();
        for e in d.edges() {
            let [a, b] = e.ends;
            let (x, y) = (&cocircuits[a], &cocircuits[b]);
            if e.covector.get(g) == Sign::Zero || x.get(g) == Sign::Zero || y.get(g) == Sign::Zero {
                continue;
            }
            let line = e.covector.zeros();
            let p = at_infinity
                .iter()
                .find(|p| p.zeros() & line == line)
                .ok_or_else(|| Error::verification("program_graph", format!("no point at infinity on {}", e.covector)))?;
            let probe = (x.zeros() & !line).trailing_zeros() as usize;
            let p = if p.get(probe) == y.get(probe) { **p } else { p.negated() };
            let edge = match lift(n, &p, fi)? {
                Sign::Plus => FrameEdge { z: e.covector, tail: a, head: b, oriented: true },
                Sign::Minus => FrameEdge { z: e.covector, tail: b, head: a, oriented: true },
                Sign::Zero => FrameEdge { z: e.covector, tail: a, head: b, oriented: false },
            };
            edges.push(edge);
        }
        Ok(Frame {
            rank: d.rank(),
            d,
            g,
            cocircuits,
            lifts,
            edges,
        })
    }

    fn on_positive_side(&self, flip: ElementMask, x: &SignVector) -> bool {
        x.reoriented(flip).get(self.g) == Sign::Plus
    }

    fn is_feasible(&self, flip: ElementMask, x: &SignVector) -> bool {
        let y = x.reoriented(flip);
        y.get(self.g) == Sign::Plus && y.minus() == 0
    }

    fn label(&self, c: usize) -> String {
        self.cocircuits[c].to_string()
    }

    fn build(&self, keep: impl Fn(&SignVector) -> bool, named: bool) -> (Vec<usize>, Digraph) {
        let ids: Vec<usize> = (0..self.cocircuits.len()).filter(|&c| keep(&self.cocircuits[c])).collect();
        let mut index = vec![usize::MAX; self.cocircuits.len()];
        for (i, &c) in ids.iter().enumerate() {
            index[c] = i;
        }
        let mut graph = if named {
            Digraph::with_labels(ids.iter().map(|&c| self.label(c)).collect())
        } else {
            Digraph::new(ids.len())
        };
        for e in &self.edges {
            if !keep(&e.z) {
                continue;
            }
            let (u, v) = (index[e.tail], index[e.head]);
            if u == usize::MAX || v == usize::MAX {
                continue;
            }
            let added = if e.oriented { graph.add_arc(u, v) } else { graph.add_undirected(u, v) };
            added.expect("edge covectors have distinct endpoint pairs");
        }
        (ids, graph)
    }

    /// `G_π` on the `g`-positive hemisphere after reorienting by `flip`.
    pub(crate) fn full_graph(&self, flip: ElementMask, named: bool) -> (Vec<usize>, Digraph) {
        self.build(|x| self.on_positive_side(flip, x), named)
    }

    /// `G_π^+` after reorienting by `flip`.
    pub(crate) fn feasible_graph(&self, flip: ElementMask, named: bool) -> Digraph {
        self.build(|x| self.is_feasible(flip, x), named).1
    }

    pub(crate) fn is_bounded(&self, flip: ElementMask) -> bool {
        let mut nonempty = false;
        let mut recession = false;
        for y in self.d.covectors() {
            let y = y.reoriented(flip);
            if y.minus() != 0 {
                continue;
            }
            match y.get(self.g) {
                Sign::Plus => nonempty = true,
                Sign::Zero if !y.is_zero() => recession = true,
                _ => {}
            }
        }
        !(nonempty && recession)
    }

    fn has_tope(&self, flip: ElementMask) -> bool {
        let all = SignVector::from_masks_unchecked(self.d.ground_size(), self.d.full(), 0);
        self.d.contains(&all.reoriented(flip))
    }

    pub(crate) fn is_proper(&self, flip: ElementMask) -> bool {
        self.has_tope(flip)
            && self.is_bounded(flip)
            && self
                .edges
                .iter()
                .all(|e| e.oriented || !self.is_feasible(flip, &e.z))
    }
}
