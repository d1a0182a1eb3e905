//! Oriented matroids given by their full covector set.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::chirotope::Chirotope;
use crate::error::{Error, Result};
use crate::sign::{full_mask, mask_elements, ElementMask, SignVector, MAX_ELEMENTS};

/// Default cap on the size of a generated covector set.
pub const DEFAULT_COVECTOR_BUDGET: usize = 2_000_000;

/// An oriented matroid `M = (E, L)`.
///
/// Elements carry external labels (1-based in every constructor here);
/// sign vectors are indexed by position in `labels`. Minors keep the labels
/// of the surviving elements.
#[derive(Clone)]
pub struct OrientedMatroid {
    labels: Vec<usize>,
    covectors: Vec<SignVector>,
    cocircuits: Vec<SignVector>,
    topes: Vec<SignVector>,
    rank: usize,
}

impl OrientedMatroid {
    /// Builds from an explicit covector set; the zero vector is added if missing.
    pub fn from_covectors(labels: Vec<usize>, covectors: impl IntoIterator<Item = SignVector>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        let mut set: BTreeSet<SignVector> = BTreeSet::new();
        for x in covectors {
            if x.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: x.len(),
                });
            }
            set.insert(x);
        }
        set.insert(SignVector::zero(n));
        Ok(Self::from_sorted(labels, set.into_iter().collect()))
    }

    fn from_sorted(labels: Vec<usize>, covectors: Vec<SignVector>) -> Self {
        let cocircuits = minimal_nonzero(&covectors);
        let top = covectors.iter().map(|x| x.support()).fold(0, |a, b| a | b);
        let topes: Vec<SignVector> = covectors
            .iter()
            .filter(|x| x.support() == top && !x.is_zero())
            .copied()
            .collect();
        let rank = lattice_height(&covectors);
        OrientedMatroid {
            labels,
            covectors,
            cocircuits,
            topes,
            rank,
        }
    }

    /// Closure of `cocircuits ∪ {0}` under composition, ground set labelled `1..=n`.
    pub fn span(n: usize, cocircuits: &[SignVector]) -> Result<Self> {
        Self::span_with_budget((1..=n).collect(), cocircuits, DEFAULT_COVECTOR_BUDGET)
    }

    pub fn span_with_budget(labels: Vec<usize>, cocircuits: &[SignVector], budget: usize) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        if cocircuits.is_empty() {
            return Err(Error::Precondition("cocircuit set is empty".into()));
        }
        if let Some(c) = cocircuits.iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: c.len(),
            });
        }
        let gens: Vec<SignVector> = cocircuits
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut seen: HashSet<SignVector> = HashSet::new();
        let zero = SignVector::zero(n);
        seen.insert(zero);
        let mut frontier = vec![zero];
        // every covector is X_1∘…∘X_k for cocircuits X_i, so extending by one
        // cocircuit on the right reaches the whole closure
        while let Some(x) = frontier.pop() {
            for c in &gens {
                let y = x.compose_unchecked(c);
                if y != x && seen.insert(y) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded { limit: budget });
                    }
                    frontier.push(y);
                }
            }
        }
        let mut covectors: Vec<SignVector> = seen.into_iter().collect();
        covectors.sort_unstable();
        Ok(Self::from_sorted(labels, covectors))
    }

    pub fn from_chirotope(chi: &Chirotope) -> Result<Self> {
        Self::span_with_budget(
            (1..=chi.ground_size()).collect(),
            &chi.cocircuits(),
            DEFAULT_COVECTOR_BUDGET,
        )
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn covectors(&self) -> &[SignVector] {
        &self.covectors
    }

    pub fn cocircuits(&self) -> &[SignVector] {
        &self.cocircuits
    }

    pub fn topes(&self) -> &[SignVector] {
        &self.topes
    }

    pub fn contains(&self, x: &SignVector) -> bool {
        self.covectors.binary_search(x).is_ok()
    }

    /// Position of an element label.
    pub fn index_of(&self, label: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownElement(label))
    }

    pub fn mask_of(&self, labels: &[usize]) -> Result<ElementMask> {
        labels
            .iter()
            .try_fold(0u64, |m, &l| Ok(m | 1 << self.index_of(l)?))
    }

    pub fn labels_of(&self, mask: ElementMask) -> Vec<usize> {
        mask_elements(mask).map(|i| self.labels[i]).collect()
    }

    pub(crate) fn full(&self) -> ElementMask {
        full_mask(self.ground_size())
    }

    /// Negates every covector on `set`.
    pub fn reorient(&self, set: &[usize]) -> Result<Self> {
        let mask = self.mask_of(set)?;
        Ok(self.reorient_mask(mask))
    }

    pub(crate) fn reorient_mask(&self, mask: ElementMask) -> Self {
        let mut covectors: Vec<SignVector> = self.covectors.iter().map(|x| x.reoriented(mask)).collect();
        covectors.sort_unstable();
        let mut cocircuits: Vec<SignVector> = self.cocircuits.iter().map(|x| x.reoriented(mask)).collect();
        cocircuits.sort_unstable();
        let mut topes: Vec<SignVector> = self.topes.iter().map(|x| x.reoriented(mask)).collect();
        topes.sort_unstable();
        OrientedMatroid {
            labels: self.labels.clone(),
            covectors,
            cocircuits,
            topes,
            rank: self.rank,
        }
    }

    /// `M \ A`: covectors restricted to `E \ A`.
    pub fn delete(&self, set: &[usize]) -> Result<Self> {
        let mask = self.mask_of(set)?;
        Ok(self.delete_mask(mask))
    }

    pub(crate) fn delete_mask(&self, mask: ElementMask) -> Self {
        let keep = self.full() & !mask;
        let set: BTreeSet<SignVector> = self.covectors.iter().map(|x| x.restricted(keep)).collect();
        let labels = mask_elements(keep).map(|i| self.labels[i]).collect();
        Self::from_sorted(labels, set.into_iter().collect())
    }

    /// `M / B`: covectors vanishing on `B`, restricted to `E \ B`.
    pub fn contract(&self, set: &[usize]) -> Result<Self> {
        let mask = self.mask_of(set)?;
        Ok(self.contract_mask(mask))
    }

    pub(crate) fn contract_mask(&self, mask: ElementMask) -> Self {
        let keep = self.full() & !mask;
        let set: BTreeSet<SignVector> = self
            .covectors
            .iter()
            .filter(|x| x.support() & mask == 0)
            .map(|x| x.restricted(keep))
            .collect();
        let labels = mask_elements(keep).map(|i| self.labels[i]).collect();
        Self::from_sorted(labels, set.into_iter().collect())
    }

    /// Elements that vanish on every covector.
    pub fn loops(&self) -> Vec<usize> {
        self.labels_of(self.loop_mask())
    }

    pub(crate) fn loop_mask(&self) -> ElementMask {
        let support = self.covectors.iter().fold(0, |a, x| a | x.support());
        self.full() & !support
    }

    /// Elements `e` for which a cocircuit with support exactly `{e}` exists.
    pub fn coloops(&self) -> Vec<usize> {
        self.labels_of(self.coloop_mask())
    }

    pub(crate) fn coloop_mask(&self) -> ElementMask {
        self.cocircuits
            .iter()
            .filter(|c| c.support_size() == 1)
            .fold(0, |a, c| a | c.support())
    }

    /// Every cocircuit vanishes on exactly `r - 1` elements.
    pub fn is_uniform(&self) -> bool {
        let want = self.rank.saturating_sub(1) as u32;
        self.cocircuits.iter().all(|c| c.zeros().count_ones() == want)
    }

    /// Covectors with exactly two cocircuits conforming below them, paired
    /// with the indices of those two cocircuits in [`Self::cocircuits`].
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for z in &self.covectors {
            if z.is_zero() {
                continue;
            }
            let mut below = [usize::MAX; 2];
            let mut count = 0;
            for (i, c) in self.cocircuits.iter().enumerate() {
                if c.conforms_unchecked(z) {
                    if count < 2 {
                        below[count] = i;
                    }
                    count += 1;
                    if count > 2 {
                        break;
                    }
                }
            }
            if count == 2 {
                out.push(Edge {
                    covector: *z,
                    ends: below,
                });
            }
        }
        out
    }

    /// Zero sets of the edge covectors: the flats of rank `r - 2`.
    pub fn coline_masks(&self) -> Vec<ElementMask> {
        self.edges()
            .iter()
            .map(|e| e.covector.zeros())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn colines(&self) -> ColineSet {
        let mut colines: Vec<Vec<usize>> = self
            .coline_masks()
            .into_iter()
            .map(|m| self.labels_of(m))
            .collect();
        colines.sort();
        ColineSet { colines }
    }

    /// Composition and negation closure; `None` when both hold.
    pub fn closure_violation(&self) -> Option<String> {
        for x in &self.covectors {
            if !self.contains(&x.negated()) {
                return Some(format!("{x} present but its negative is not"));
            }
        }
        for x in &self.covectors {
            for y in &self.covectors {
                let z = x.compose_unchecked(y);
                if !self.contains(&z) {
                    return Some(format!("{x}∘{y} = {z} missing"));
                }
            }
        }
        None
    }
}

impl PartialEq for OrientedMatroid {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.covectors == other.covectors
    }
}

impl Eq for OrientedMatroid {}

impl fmt::Debug for OrientedMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrientedMatroid")
            .field("labels", &self.labels)
            .field("rank", &self.rank)
            .field("covectors", &self.covectors.len())
            .field("cocircuits", &self.cocircuits.len())
            .field("topes", &self.topes.len())
            .finish()
    }
}

/// A 1-cell and the indices of its two endpoint cocircuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub covector: SignVector,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColineSet {
    pub colines: Vec<Vec<usize>>,
}

impl ColineSet {
    pub fn contains(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.colines.contains(&s)
    }

    pub fn len(&self) -> usize {
        self.colines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colines.is_empty()
    }
}

/// A minor `M \\ A / B` with the removed sets as masks over the parent.
#[derive(Clone, Debug)]
pub struct Minor {
    pub deleted: ElementMask,
    pub contracted: ElementMask,
    pub om: OrientedMatroid,
}

/// Largest ground set for which minors are enumerated exhaustively.
pub const MAX_MINOR_GROUND: usize = 16;

/// All distinct minors of rank at least `k`, contraction sets in increasing
/// mask order, then deletion sets likewise. Rank only drops as either set
/// grows, so a set whose minor falls below `k` prunes its supersets.
pub fn minors_of_rank_at_least(om: &OrientedMatroid, k: usize) -> Result<Vec<Minor>> {
    let n = om.ground_size();
    if n > MAX_MINOR_GROUND {
        return Err(Error::TooManyElements(n));
    }
    let full = om.full();
    let mut out = Vec::new();
    let mut seen: HashSet<(Vec<usize>, Vec<SignVector>)> = HashSet::new();
    let mut contract_ok = vec![false; 1 << n];
    for b in 0..(1u64 << n) {
        if mask_elements(b).any(|i| !contract_ok[(b & !(1 << i)) as usize]) {
            continue;
        }
        let contracted = om.contract_mask(b);
        if contracted.rank() < k {
            continue;
        }
        contract_ok[b as usize] = true;
        let rest = full & !b;
        let mut delete_ok = vec![false; 1 << n];
        // subsets of `rest` in increasing order
        let mut a = 0u64;
        loop {
            if !mask_elements(a).any(|i| !delete_ok[(a & !(1 << i)) as usize]) {
                let minor = contracted.delete_mask(compress(a, rest));
                if minor.rank() >= k {
                    delete_ok[a as usize] = true;
                    if seen.insert((minor.labels.clone(), minor.covectors.clone())) {
                        out.push(Minor {
                            deleted: a,
                            contracted: b,
                            om: minor,
                        });
                    }
                }
            }
            if a == rest {
                break;
            }
            a = (a.wrapping_sub(rest)) & rest;
        }
    }
    Ok(out)
}

fn compress(mask: ElementMask, within: ElementMask) -> ElementMask {
    crate::sign::compress_bits(mask, within)
}

/// Nonzero sign vectors whose support is minimal among the nonzero ones.
fn minimal_nonzero(covectors: &[SignVector]) -> Vec<SignVector> {
    let mut by_size: Vec<&SignVector> = covectors.iter().filter(|x| !x.is_zero()).collect();
    by_size.sort_by_key(|x| x.support_size());
    let mut found: Vec<SignVector> = Vec::new();
    for x in by_size {
        let s = x.support();
        if found.iter().all(|c| c.support() & !s != 0 || c.support() == s) {
            found.push(*x);
        }
    }
    found.sort_unstable();
    found
}

/// Length of a maximal chain from `0` to a tope. The face lattice is graded,
/// so a greedy chain through covers has the right length.
fn lattice_height(covectors: &[SignVector]) -> usize {
    let mut cur = covectors
        .iter()
        .find(|x| x.is_zero())
        .copied()
        .unwrap_or_else(|| SignVector::zero(covectors.first().map_or(0, |x| x.len())));
    let mut height = 0;
    loop {
        let next = covectors
            .iter()
            .filter(|y| **y != cur && cur.conforms_unchecked(y))
            .min_by_key(|y| y.support_size());
        match next {
            Some(y) => {
                cur = *y;
                height += 1;
            }
            None => return height,
        }
    }
}

/// Outcome of the cocircuit axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum AxiomReport {
    Pass,
    Violation {
        axiom: AxiomKind,
        witnesses: Vec<SignVector>,
        element: Option<usize>,
    },
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomReport::Pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    ZeroVector,
    Symmetry,
    Incomparability,
    WeakElimination,
}

/// Checks the cocircuit axioms: no zero vector, closure under negation,
/// incomparable supports, and weak elimination. `element` in a violation is
/// a 0-based position.
pub fn validate_cocircuit_axioms(cocircuits: &[SignVector]) -> AxiomReport {
    let set: HashSet<SignVector> = cocircuits.iter().copied().collect();
    let list: Vec<SignVector> = {
        let mut v: Vec<SignVector> = set.iter().copied().collect();
        v.sort_unstable();
        v
    };
    if let Some(z) = list.iter().find(|x| x.is_zero()) {
        return AxiomReport::Violation {
            axiom: AxiomKind::ZeroVector,
            witnesses: vec![*z],
            element: None,
        };
    }
    for x in &list {
        if !set.contains(&x.negated()) {
            return AxiomReport::Violation {
                axiom: AxiomKind::Symmetry,
                witnesses: vec![*x],
                element: None,
            };
        }
    }
    for x in &list {
        for y in &list {
            if x.support() & !y.support() == 0 && *x != *y && *x != y.negated() {
                return AxiomReport::Violation {
                    axiom: AxiomKind::Incomparability,
                    witnesses: vec![*x, *y],
                    element: None,
                };
            }
        }
    }
    let n = list.first().map_or(0, |x| x.len());
    let vanishing: Vec<Vec<&SignVector>> = (0..n)
        .map(|e| list.iter().filter(|z| z.zeros() >> e & 1 == 1).collect())
        .collect();
    for x in &list {
        for y in &list {
            if *x == y.negated() {
                continue;
            }
            let clash = x.plus() & y.minus();
            for e in mask_elements(clash) {
                let pos = x.plus() | y.plus();
                let neg = x.minus() | y.minus();
                let ok = vanishing[e]
                    .iter()
                    .any(|z| z.plus() & !pos == 0 && z.minus() & !neg == 0);
                if !ok {
                    return AxiomReport::Violation {
                        axiom: AxiomKind::WeakElimination,
                        witnesses: vec![*x, *y],
                        element: Some(e),
                    };
                }
            }
        }
    }
    AxiomReport::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    fn rank2() -> OrientedMatroid {
        OrientedMatroid::from_chirotope(&Chirotope::parse("3 2 +++").unwrap()).unwrap()
    }

    #[test]
    fn rank_two_uniform_span() {
        let m = rank2();
        // 4n + 1 cells for n points on a circle
        assert_eq!(m.covectors().len(), 13);
        assert_eq!(m.cocircuits().len(), 6);
        assert_eq!(m.topes().len(), 6);
        assert_eq!(m.rank(), 2);
        assert!(m.is_uniform());
        assert!(m.closure_violation().is_none());
    }

    #[test]
    fn single_antipodal_pair() {
        let c = sv("+0-");
        let m = OrientedMatroid::span(3, &[c, c.negated()]).unwrap();
        let want = vec![SignVector::zero(3), c, c.negated()];
        let mut want = want;
        want.sort_unstable();
        assert_eq!(m.covectors(), want.as_slice());
        assert_eq!(m.rank(), 1);
        assert_eq!(m.loops(), vec![2]);
    }

    #[test]
    fn budget_is_enforced() {
        let chi = fixtures::ic_8_4_2();
        let err = OrientedMatroid::span_with_budget((1..=8).collect(), &chi.cocircuits(), 100);
        assert!(matches!(err, Err(Error::BudgetExceeded { limit: 100 })));
    }

    #[test]
    fn ic842_lattice() {
        let m = fixtures::ic_8_4_2_om();
        assert_eq!(m.rank(), 4);
        assert_eq!(m.cocircuits().len(), 112);
        assert_eq!(m.topes().len(), 128);
        // f-vector of a uniform arrangement of 8 great 2-spheres in S^3
        assert_eq!(m.covectors().len(), 1 + 112 + 336 + 352 + 128);
        assert!(m.is_uniform());
        assert!(m.loops().is_empty());
        assert!(m.coloops().is_empty());
        let colines = m.colines();
        assert_eq!(colines.len(), 28);
        assert!(colines.contains(&[1, 8]));
    }

    #[test]
    fn reorientation() {
        let m = fixtures::ic_8_4_2_om();
        assert_eq!(m.reorient(&[]).unwrap(), m);
        let all: Vec<usize> = (1..=8).collect();
        assert_eq!(m.reorient(&all).unwrap().reorient(&all).unwrap(), m);
        let r = m.reorient(&[1]).unwrap();
        assert_eq!(r.topes().len(), 128);
        assert!(m.reorient(&[9]).is_err());
    }

    #[test]
    fn minors() {
        let m = rank2();
        assert_eq!(m.delete(&[]).unwrap(), m);
        let c = m.contract(&[1]).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.labels(), &[2, 3]);
        // the two remaining points project to the same side of the first
        assert_eq!(c.covectors().len(), 3);
        assert!(c.contains(&sv("++")));

        let ic = fixtures::ic_8_4_2_om();
        let d = ic.delete(&[8]).unwrap();
        assert_eq!(d.rank(), 4);
        assert_eq!(d.ground_size(), 7);
        assert!(d.is_uniform());
    }

    #[test]
    fn rank_two_has_the_empty_coline() {
        let m = rank2();
        assert_eq!(m.colines().colines, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn loop_detection() {
        let m = OrientedMatroid::from_covectors(vec![1, 2], [sv("+0"), sv("-0")]).unwrap();
        assert_eq!(m.loops(), vec![2]);
        assert_eq!(m.coloops(), vec![1]);
    }

    #[test]
    fn axiom_checker() {
        assert!(validate_cocircuit_axioms(fixtures::ic_8_4_2().cocircuits().as_slice()).passed());
        let report = validate_cocircuit_axioms(&[sv("0++"), sv("-0+")]);
        assert!(matches!(
            report,
            AxiomReport::Violation {
                axiom: AxiomKind::Symmetry,
                ..
            }
        ));
        let report = validate_cocircuit_axioms(&[sv("0++"), sv("0--"), sv("+++"), sv("---")]);
        assert!(matches!(
            report,
            AxiomReport::Violation {
                axiom: AxiomKind::Incomparability,
                ..
            }
        ));
        // two antipodal pairs on a circle that never cross each other
        let report = validate_cocircuit_axioms(&[sv("0+"), sv("0-"), sv("+0"), sv("-0")]);
        assert!(report.passed());
        let report = validate_cocircuit_axioms(&[sv("0++"), sv("0--"), sv("+0+"), sv("-0-")]);
        assert!(matches!(
            report,
            AxiomReport::Violation {
                axiom: AxiomKind::WeakElimination,
                ..
            }
        ));
    }
}
