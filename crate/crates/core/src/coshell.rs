//! Coline fixations `(M, T)`: supercells, coline shellings, shelling
//! digraphs and the HK* test.
//!
//! Everything about a fixation is read off two minors: the rank-2
//! contraction `M / T` (its cocircuits are the points of the coline, so it
//! carries genericity, the interior point and the staircase) and the
//! deletion `M \ T` (the supercell is the closed all-positive tope there, so
//! it carries facets and ridges). A reorientation of `E \ T` with an
//! interior point is `W^-` for exactly one tope `W` of `M / T`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::chirotope::Chirotope;
use crate::digraph::{Digraph, HoltKleeReport};
use crate::error::{Error, Result};
use crate::om::{minors_of_rank_at_least, OrientedMatroid};
use crate::sign::{mask_elements, ElementMask, Sign, SignVector};

#[derive(Clone, Debug)]
pub struct ColineFixation {
    om: OrientedMatroid,
    coline: ElementMask,
}

impl ColineFixation {
    /// `coline` holds element labels; it must be a flat of rank `r - 2`.
    pub fn new(om: OrientedMatroid, coline: &[usize]) -> Result<Self> {
        let mask = om.mask_of(coline)?;
        if !om.coline_masks().contains(&mask) {
            return Err(Error::InvalidFixation(format!("{coline:?} is not a coline")));
        }
        Ok(ColineFixation { om, coline: mask })
    }

    pub fn om(&self) -> &OrientedMatroid {
        &self.om
    }

    pub fn coline(&self) -> Vec<usize> {
        self.om.labels_of(self.coline)
    }

    fn frame(&self) -> FixationFrame {
        FixationFrame::new(&self.om, self.coline)
    }
}

/// Covectors nonnegative off the coline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Supercell {
    pub members: Vec<SignVector>,
}

pub fn supercell(omega: &ColineFixation) -> Supercell {
    let members = omega
        .om
        .covectors()
        .iter()
        .filter(|x| x.minus() & !omega.coline == 0)
        .copied()
        .collect();
    Supercell { members }
}

/// Every `f ∉ T` has a cocircuit vanishing exactly on `T ∪ {f}`.
pub fn is_generic_coline(omega: &ColineFixation) -> bool {
    omega.frame().is_generic()
}

pub fn is_proper_fixation(omega: &ColineFixation) -> bool {
    omega.frame().is_proper(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColineShelling {
    /// `e_1, …, e_s` as labels.
    pub order: Vec<usize>,
    /// `V^k` as sign vectors over all of `E`.
    pub witnesses: Vec<SignVector>,
}

/// Needs a generic coline and an interior point; the staircase itself is
/// verified, so properness is not required.
pub fn coline_shelling(omega: &ColineFixation) -> Result<ColineShelling> {
    let frame = omega.frame();
    if !frame.is_generic() {
        return Err(Error::NonGeneric(format!("coline {:?}", omega.coline())));
    }
    if !frame.has_interior(0) {
        return Err(Error::InvalidFixation("supercell has no interior point".into()));
    }
    let (order, witnesses) = frame.staircase(0)?;
    let n = omega.om.ground_size();
    Ok(ColineShelling {
        order: order.iter().map(|&i| frame.labels[i]).collect(),
        witnesses: witnesses.iter().map(|v| v.expanded(frame.rest, n)).collect(),
    })
}

/// Whether the facets for labels `a` and `b` meet in a ridge: some covector
/// vanishes on both and is positive on every other element off the coline.
pub fn facet_adjacency(omega: &ColineFixation, a: usize, b: usize) -> Result<bool> {
    let frame = omega.frame();
    let pa = frame.position(a)?;
    let pb = frame.position(b)?;
    if pa == pb {
        return Err(Error::Precondition("facet compared with itself".into()));
    }
    if !frame.is_facet(0, pa) || !frame.is_facet(0, pb) {
        return Err(Error::InvalidFixation(format!("{a} or {b} does not give a facet")));
    }
    Ok(frame.adjacent(0, pa, pb))
}

pub fn shelling_digraph(omega: &ColineFixation) -> Result<Digraph> {
    let frame = omega.frame();
    if !frame.is_proper(0) {
        return Err(Error::InvalidFixation("fixation is not proper".into()));
    }
    let (order, _) = frame.staircase(0)?;
    Ok(frame.digraph(0, &order))
}

/// Holt-Klee test of the shelling digraph with `d = r(M) - 1`.
pub fn is_hkstar_fixation(omega: &ColineFixation) -> Result<HoltKleeReport> {
    let graph = shelling_digraph(omega)?;
    if !graph.is_acyclic() || !graph.is_uso() {
        return Err(Error::verification(
            "shelling_digraph",
            "shelling digraph lacks acyclicity or a unique source and sink",
        ));
    }
    Ok(graph.holt_klee(omega.om.rank() - 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct HkStarCertificate {
    pub chirotope: Option<String>,
    #[serde(rename = "T")]
    pub coline: Vec<usize>,
    pub shelling_order: Vec<usize>,
    pub arcs: Vec<[usize; 2]>,
    pub source: Option<usize>,
    pub sink: Option<usize>,
    pub disjoint_path_count: usize,
    pub required_d: usize,
    pub hkstar: bool,
}

pub fn hkstar_certificate(omega: &ColineFixation, chirotope: Option<&Chirotope>) -> Result<HkStarCertificate> {
    let shelling = coline_shelling(omega)?;
    let graph = shelling_digraph(omega)?;
    let report = is_hkstar_fixation(omega)?;
    let label = |v: usize| graph.labels()[v].parse::<usize>().expect("element labels");
    Ok(HkStarCertificate {
        chirotope: chirotope.map(Chirotope::to_line),
        coline: omega.coline(),
        shelling_order: shelling.order,
        arcs: graph.arcs().iter().map(|&(u, v)| [label(u), label(v)]).collect(),
        source: report.source.map(label),
        sink: report.sink.map(label),
        disjoint_path_count: report.disjoint_path_count,
        required_d: report.required_d,
        hkstar: report.holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixationWitness {
    pub deleted: Vec<usize>,
    pub contracted: Vec<usize>,
    pub reorientation: Vec<usize>,
    pub coline: Vec<usize>,
    pub shelling_order: Vec<usize>,
    pub disjoint_path_count: usize,
    pub required_d: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HkStarVerdict {
    pub holds: bool,
    pub witness: Option<FixationWitness>,
    /// Proper fixations examined; exact only when the property holds.
    pub fixations_checked: usize,
    /// Proper fixations whose staircase or shelling digraph misbehaved.
    pub anomalies: usize,
}

/// Every proper coline fixation of every reorientation of every minor of
/// rank at least 4 is HK*.
pub fn is_hkstar_matroid(om: &OrientedMatroid) -> Result<HkStarVerdict> {
    let minors = minors_of_rank_at_least(om, 4)?;
    let tasks: Vec<(usize, ElementMask)> = minors
        .iter()
        .enumerate()
        .flat_map(|(k, m)| m.om.coline_masks().into_iter().map(move |t| (k, t)))
        .collect();
    let checked = AtomicUsize::new(0);
    let anomalies = AtomicUsize::new(0);
    let witness = tasks.par_iter().find_map_first(|&(k, t)| {
        let minor = &minors[k];
        let n = &minor.om;
        let frame = FixationFrame::new(n, t);
        if !frame.is_generic() {
            return None;
        }
        let d = n.rank() - 1;
        for w in frame.contracted.topes() {
            let flip = w.minus();
            if !frame.is_proper(flip) {
                continue;
            }
            checked.fetch_add(1, Ordering::Relaxed);
            let Ok((order, _)) = frame.staircase(flip) else {
                anomalies.fetch_add(1, Ordering::Relaxed);
                continue;
            };
            let graph = frame.digraph(flip, &order);
            if !graph.is_acyclic() || !graph.is_uso() {
                anomalies.fetch_add(1, Ordering::Relaxed);
            }
            let report = graph.holt_klee(d);
            if !report.holds {
                return Some(FixationWitness {
                    deleted: om.labels_of(minor.deleted),
                    contracted: om.labels_of(minor.contracted),
                    reorientation: mask_elements(flip).map(|i| frame.labels[i]).collect(),
                    coline: n.labels_of(t),
                    shelling_order: order.iter().map(|&i| frame.labels[i]).collect(),
                    disjoint_path_count: report.disjoint_path_count,
                    required_d: d,
                });
            }
        }
        None
    });
    Ok(HkStarVerdict {
        holds: witness.is_none(),
        witness,
        fixations_checked: checked.into_inner(),
        anomalies: anomalies.into_inner(),
    })
}

/// A fixation reduced to its two minors; positions index `E \ T`.
pub(crate) struct FixationFrame {
    /// `M / T`
    contracted: OrientedMatroid,
    /// `M \ T`
    deleted: OrientedMatroid,
    /// `E \ T` as a mask over `M`
    rest: ElementMask,
    labels: Vec<usize>,
    pointed: bool,
}

impl FixationFrame {
    pub(crate) fn new(om: &OrientedMatroid, coline: ElementMask) -> Self {
        let contracted = om.contract_mask(coline);
        let deleted = om.delete_mask(coline);
        FixationFrame {
            pointed: deleted.rank() == om.rank(),
            labels: contracted.labels().to_vec(),
            contracted,
            deleted,
            rest: om.full() & !coline,
        }
    }

    fn size(&self) -> usize {
        self.labels.len()
    }

    fn position(&self, label: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownElement(label))
    }

    fn plus_except(&self, zeros: ElementMask, flip: ElementMask) -> SignVector {
        let all = self.deleted.full();
        SignVector::from_masks_unchecked(self.size(), all & !zeros, 0).reoriented(flip)
    }

    /// Each point of the coline lies on exactly one element off `T`, and
    /// every element off `T` passes through one.
    pub(crate) fn is_generic(&self) -> bool {
        let mut hit: ElementMask = 0;
        for c in self.contracted.cocircuits() {
            let z = c.zeros();
            if z.count_ones() != 1 {
                return false;
            }
            hit |= z;
        }
        hit == self.contracted.full()
    }

    fn has_interior(&self, flip: ElementMask) -> bool {
        self.contracted.contains(&self.plus_except(0, flip))
    }

    fn is_facet(&self, flip: ElementMask, f: usize) -> bool {
        self.deleted.contains(&self.plus_except(1 << f, flip))
    }

    fn adjacent(&self, flip: ElementMask, a: usize, b: usize) -> bool {
        self.deleted.contains(&self.plus_except(1 << a | 1 << b, flip))
    }

    /// Besides the defining conditions, the elements off `T` must have full
    /// rank: otherwise the supercell carries a lineality direction and is
    /// not dual to an `(r-1)`-polytope.
    pub(crate) fn is_proper(&self, flip: ElementMask) -> bool {
        self.pointed
            && self.is_generic()
            && self.has_interior(flip)
            && (0..self.size()).all(|f| self.is_facet(flip, f))
    }

    /// The staircase order, started at the smaller-labelled end, with its
    /// `V^k` over `E \ T` in the reoriented signs.
    pub(crate) fn staircase(&self, flip: ElementMask) -> Result<(Vec<usize>, Vec<SignVector>)> {
        let s = self.size();
        let mut at: Vec<Option<SignVector>> = vec![None; s];
        for c in self.contracted.cocircuits() {
            let c = c.reoriented(flip);
            if c.minus() == 0 || at[c.zeros().trailing_zeros() as usize].is_none() {
                at[c.zeros().trailing_zeros() as usize] = Some(c);
            }
        }
        let pairs: Vec<SignVector> = at
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::NonGeneric("a coline point is missing".into()))?;
        let start = (0..s)
            .filter(|&f| pairs[f].minus() == 0)
            .min_by_key(|&f| self.labels[f])
            .ok_or_else(|| Error::verification("coline_shelling", "no nonnegative coline point"))?;
        let mut steps: Vec<(usize, SignVector)> = (0..s)
            .map(|f| {
                let v = pairs[f];
                let v = if f != start && v.get(start) == Sign::Plus { v.negated() } else { v };
                (f, v)
            })
            .collect();
        steps.sort_by_key(|(_, v)| v.minus().count_ones());
        let mut below: ElementMask = 0;
        for (f, v) in &steps {
            if v.minus() != below || v.zeros() != 1 << f {
                return Err(Error::verification(
                    "coline_shelling",
                    format!("staircase breaks at element {}", self.labels[*f]),
                ));
            }
            below |= 1 << f;
        }
        Ok(steps.into_iter().unzip())
    }

    pub(crate) fn digraph(&self, flip: ElementMask, order: &[usize]) -> Digraph {
        let mut graph = Digraph::with_labels(order.iter().map(|&f| self.labels[f].to_string()).collect());
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if self.adjacent(flip, order[i], order[j]) {
                    graph.add_arc(i, j).expect("simple graph");
                }
            }
        }
        graph
    }
}
