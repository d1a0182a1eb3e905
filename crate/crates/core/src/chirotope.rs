//! Chirotopes stored as sign strings over the colexicographic order of bases.
//!
//! Two text encodings are understood:
//!
//! * the single-line form `n r s` where `s ∈ {+,-,0}^C(n,r)`;
//! * the block form: `r` rows of digits giving the bases column by column,
//!   followed by one row of signs.
//!
//! Elements are labelled `1..=n` in the public API.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{det_sign, RatVec};
use crate::sign::{full_mask, mask_elements, ElementMask, Sign, SignVector, MAX_ELEMENTS};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All `k`-subsets of `{0..n}` as masks, in colexicographic order.
pub fn colex_subsets(n: usize, k: usize) -> impl Iterator<Item = ElementMask> {
    let limit = if n >= 64 { u64::MAX } else { 1u64 << n };
    let first = if k == 0 { 0 } else { full_mask(k) };
    let mut next = if k > n { None } else { Some(first) };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack: next integer with the same popcount.
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            let n2 = (((r ^ cur) >> 2) / c) | r;
            (r != 0 && n2 < limit && n2 > cur).then_some(n2)
        };
        Some(cur)
    })
}

/// Position of a subset in colexicographic order.
pub fn colex_rank(subset: ElementMask) -> usize {
    mask_elements(subset)
        .enumerate()
        .map(|(k, e)| binomial(e, k + 1))
        .sum()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chirotope {
    n: usize,
    r: usize,
    signs: Vec<Sign>,
}

impl Chirotope {
    pub fn new(n: usize, r: usize, signs: Vec<Sign>) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        if r == 0 || r > n {
            return Err(Error::Precondition(format!("rank {r} invalid for {n} elements")));
        }
        let expected = binomial(n, r);
        if signs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: signs.len(),
            });
        }
        if signs.iter().all(|s| s.is_zero()) {
            return Err(Error::ZeroChirotope);
        }
        Ok(Chirotope { n, r, signs })
    }

    /// Parses either the single-line or the block encoding.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        match lines.as_slice() {
            [] => Err(Error::parse(None, "empty chirotope text")),
            [line] => Self::parse_line(line),
            _ => Self::parse_block(&lines),
        }
    }

    /// `n r signs`
    pub fn parse_line(line: &str) -> Result<Self> {
        let mut tokens = line.split_whitespace();
        let (Some(n), Some(r), Some(s), None) =
            (tokens.next(), tokens.next(), tokens.next(), tokens.next())
        else {
            return Err(Error::parse(None, format!("expected `n r signs`, got {line:?}")));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::parse(None, format!("bad ground size {n:?}")))?;
        let r: usize = r
            .parse()
            .map_err(|_| Error::parse(None, format!("bad rank {r:?}")))?;
        let signs = s.chars().map(Sign::from_char).collect::<Result<Vec<_>>>()?;
        Self::new(n, r, signs)
    }

    fn parse_block(lines: &[&str]) -> Result<Self> {
        let (sign_row, index_rows) = lines.split_last().expect("at least two lines");
        let signs = sign_row
            .chars()
            .map(Sign::from_char)
            .collect::<Result<Vec<_>>>()?;
        let r = index_rows.len();
        let columns = signs.len();
        let mut digits = Vec::with_capacity(r);
        for (i, row) in index_rows.iter().enumerate() {
            let row: Vec<usize> = row
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d > 0)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::parse(Some(i + 1), format!("bad element digit {c:?}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != columns {
                return Err(Error::LengthMismatch {
                    expected: columns,
                    found: row.len(),
                });
            }
            digits.push(row);
        }
        let n = digits.iter().flatten().copied().max().unwrap_or(0);
        let expected = binomial(n, r);
        if columns != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: columns,
            });
        }
        for (col, subset) in colex_subsets(n, r).enumerate() {
            let labels: Vec<usize> = digits.iter().map(|row| row[col]).collect();
            if labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::BadBlockColumn {
                    column: col + 1,
                    expected: format!("a strictly increasing {r}-subset, got {labels:?}"),
                });
            }
            let want: Vec<usize> = mask_elements(subset).map(|e| e + 1).collect();
            if labels != want {
                return Err(Error::BadBlockColumn {
                    column: col + 1,
                    expected: format!("{want:?}, got {labels:?}"),
                });
            }
        }
        Self::new(n, r, signs)
    }

    /// Signs of the maximal minors of the `n` given vectors in `R^r`.
    pub fn from_vectors(vectors: &[RatVec]) -> Result<Self> {
        let n = vectors.len();
        let r = vectors.first().map(Vec::len).unwrap_or(0);
        if vectors.iter().any(|v| v.len() != r) {
            return Err(Error::Precondition("vectors of unequal dimension".into()));
        }
        if r == 0 || n < r {
            return Err(Error::RankDeficient);
        }
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        let signs: Vec<Sign> = colex_subsets(n, r)
            .map(|b| {
                let rows: Vec<RatVec> = mask_elements(b).map(|e| vectors[e].clone()).collect();
                det_sign(&rows)
            })
            .collect();
        if signs.iter().all(|s| s.is_zero()) {
            return Err(Error::RankDeficient);
        }
        Self::new(n, r, signs)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn is_uniform(&self) -> bool {
        self.signs.iter().all(|s| !s.is_zero())
    }

    pub(crate) fn sign_of_mask(&self, basis: ElementMask) -> Sign {
        debug_assert_eq!(basis.count_ones() as usize, self.r);
        self.signs[colex_rank(basis)]
    }

    /// `χ(b_1, …, b_r)` for 1-based labels in any order; the alternating
    /// extension supplies the permutation sign, repeated labels give zero.
    pub fn sign_of(&self, tuple: &[usize]) -> Result<Sign> {
        if tuple.len() != self.r {
            return Err(Error::LengthMismatch {
                expected: self.r,
                found: tuple.len(),
            });
        }
        let mut mask = 0u64;
        for &e in tuple {
            if e == 0 || e > self.n {
                return Err(Error::UnknownElement(e));
            }
            if mask >> (e - 1) & 1 == 1 {
                return Ok(Sign::Zero);
            }
            mask |= 1 << (e - 1);
        }
        let inversions = tuple
            .iter()
            .enumerate()
            .map(|(i, a)| tuple[i + 1..].iter().filter(|b| a > b).count())
            .sum::<usize>();
        let s = self.sign_of_mask(mask);
        Ok(if inversions % 2 == 1 { -s } else { s })
    }

    /// Flips the sign of one basis.
    pub fn mutate(&self, basis: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in basis {
            if e == 0 || e > self.n {
                return Err(Error::UnknownElement(e));
            }
            mask |= 1 << (e - 1);
        }
        if mask.count_ones() as usize != self.r || basis.len() != self.r {
            return Err(Error::LengthMismatch {
                expected: self.r,
                found: basis.len(),
            });
        }
        let idx = colex_rank(mask);
        if self.signs[idx].is_zero() {
            let mut sorted = basis.to_vec();
            sorted.sort_unstable();
            return Err(Error::ZeroBasis(sorted));
        }
        let mut out = self.clone();
        out.signs[idx] = -out.signs[idx];
        Ok(out)
    }

    /// Negates every basis containing an odd number of elements of `set`.
    pub fn reorient(&self, set: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in set {
            if e == 0 || e > self.n {
                return Err(Error::UnknownElement(e));
            }
            mask |= 1 << (e - 1);
        }
        let signs = colex_subsets(self.n, self.r)
            .zip(&self.signs)
            .map(|(b, &s)| if (b & mask).count_ones() % 2 == 1 { -s } else { s })
            .collect();
        Ok(Chirotope { signs, ..self.clone() })
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.to_char()).collect()
    }

    /// Single-line encoding without trailing newline.
    pub fn to_line(&self) -> String {
        format!("{} {} {}", self.n, self.r, self.sign_string())
    }

    /// Block encoding: `r` digit rows and one sign row. Only for `n ≤ 9`.
    pub fn to_block(&self) -> Option<String> {
        if self.n > 9 {
            return None;
        }
        let mut rows = vec![String::new(); self.r + 1];
        for (b, s) in colex_subsets(self.n, self.r).zip(&self.signs) {
            for (k, e) in mask_elements(b).enumerate() {
                rows[k].push(char::from(b'1' + e as u8));
            }
            rows[self.r].push(s.to_char());
        }
        Some(rows.join("\n"))
    }

    /// Basis cocircuits: for each `(r-1)`-subset `S` spanning a hyperplane,
    /// the vector `e ↦ χ(S, e)`, together with its negative.
    pub fn cocircuits(&self) -> Vec<SignVector> {
        let mut out = BTreeSet::new();
        for s in colex_subsets(self.n, self.r - 1) {
            let mut v = SignVector::zero(self.n);
            for f in 0..self.n {
                if s >> f & 1 == 1 {
                    continue;
                }
                let sign = self.sign_of_mask(s | 1 << f);
                // moving f from the last slot past every larger element of S
                let above = (s >> f).count_ones();
                v.set(f, if above % 2 == 1 { -sign } else { sign });
            }
            if !v.is_zero() {
                out.insert(v);
                out.insert(v.negated());
            }
        }
        out.into_iter().collect()
    }

    /// Chirotope of the alternating matroid: every basis positive.
    pub fn alternating(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, vec![Sign::Plus; binomial(n, r)])
    }
}

impl fmt::Display for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl fmt::Debug for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chirotope({})", self.to_line())
    }
}

impl std::str::FromStr for Chirotope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;
    use crate::fixtures;

    #[test]
    fn colex_enumeration_and_rank_agree() {
        for (i, m) in colex_subsets(8, 4).enumerate() {
            assert_eq!(colex_rank(m), i);
        }
        assert_eq!(colex_subsets(8, 4).count(), 70);
        assert_eq!(colex_subsets(5, 0).count(), 1);
        assert_eq!(colex_subsets(3, 3).count(), 1);
        let first: Vec<u64> = colex_subsets(5, 2).take(4).collect();
        assert_eq!(first, vec![0b00011, 0b00101, 0b00110, 0b01001]);
    }

    #[test]
    fn table_block_parses() {
        let chi = fixtures::ic_8_4_2();
        assert_eq!((chi.ground_size(), chi.rank()), (8, 4));
        assert_eq!(chi.signs().len(), 70);
        assert!(chi.is_uniform());
        assert_eq!(chi.sign_of(&[1, 2, 3, 5]).unwrap(), Sign::Plus);
        // block and line encodings agree
        let again = Chirotope::parse(&chi.to_line()).unwrap();
        assert_eq!(again, chi);
        assert_eq!(Chirotope::parse(&chi.to_block().unwrap()).unwrap(), chi);
    }

    #[test]
    fn single_line_examples() {
        let chi = Chirotope::parse("3 2 +++").unwrap();
        assert_eq!((chi.ground_size(), chi.rank()), (3, 2));
        assert!(chi.is_uniform());
        // parsing does not validate; this one is accepted as is
        assert!(Chirotope::parse("4 2 ++0+++").is_ok());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Chirotope::parse("3 2 ++"), Err(Error::LengthMismatch { .. })));
        assert!(matches!(Chirotope::parse("3 2 +x+"), Err(Error::InvalidSign('x'))));
        assert!(matches!(Chirotope::parse("3 2 000"), Err(Error::ZeroChirotope)));
        let bad_block = "121\n233\n+++";
        assert!(matches!(Chirotope::parse(bad_block), Err(Error::BadBlockColumn { .. })));
        let decreasing = "121\n312\n+++";
        assert!(matches!(Chirotope::parse(decreasing), Err(Error::BadBlockColumn { .. })));
    }

    #[test]
    fn alternating_extension() {
        let chi = Chirotope::parse("3 2 +-+").unwrap();
        assert_eq!(chi.sign_of(&[2, 1]).unwrap(), Sign::Minus);
        assert_eq!(chi.sign_of(&[1, 3]).unwrap(), Sign::Minus);
        assert_eq!(chi.sign_of(&[3, 1]).unwrap(), Sign::Plus);
        assert_eq!(chi.sign_of(&[2, 2]).unwrap(), Sign::Zero);
        assert!(chi.sign_of(&[1, 4]).is_err());
    }

    #[test]
    fn vectors_to_chirotope() {
        let chi =
            Chirotope::from_vectors(&[rat_vec(&[1, 1]), rat_vec(&[1, 2]), rat_vec(&[1, 3])]).unwrap();
        assert_eq!(chi.sign_string(), "+++");

        let chi = Chirotope::from_vectors(&[
            rat_vec(&[1, 0, 2]),
            rat_vec(&[0, 1, 1]),
            rat_vec(&[1, 0, 2]),
            rat_vec(&[3, 1, 0]),
        ])
        .unwrap();
        for (b, s) in colex_subsets(4, 3).zip(chi.signs()) {
            if b & 0b101 == 0b101 {
                assert_eq!(*s, Sign::Zero);
            }
        }

        let chi = fixtures::coplanar_normals_chirotope();
        assert_eq!(chi.sign_of(&[2, 3, 4]).unwrap(), Sign::Zero);
        assert!(matches!(
            Chirotope::from_vectors(&[rat_vec(&[1, 1]), rat_vec(&[2, 2])]),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn mutation_is_an_involution() {
        let chi = fixtures::ic_8_4_2();
        let once = chi.mutate(&[1, 2, 3, 5]).unwrap();
        assert_eq!(once.sign_of(&[1, 2, 3, 5]).unwrap(), Sign::Minus);
        assert_eq!(once.mutate(&[5, 3, 2, 1]).unwrap(), chi);
        let zero = Chirotope::parse("3 2 0++").unwrap();
        assert!(matches!(zero.mutate(&[1, 2]), Err(Error::ZeroBasis(_))));
    }

    #[test]
    fn rank_two_cocircuits() {
        let chi = Chirotope::parse("3 2 +++").unwrap();
        let got: BTreeSet<String> = chi.cocircuits().iter().map(|c| c.to_string()).collect();
        let want: BTreeSet<String> = ["0++", "0--", "-0+", "+0-", "--0", "++0"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn uniform_cocircuit_count() {
        assert_eq!(fixtures::ic_8_4_2().cocircuits().len(), 112);
        assert_eq!(Chirotope::alternating(7, 3).unwrap().cocircuits().len(), 2 * binomial(7, 2));
    }
}
