//! Signs and sign vectors over a ground set of at most 64 elements.
//!
//! A [`SignVector`] stores its positive and negative parts as bitmasks; the
//! zero part is implied. All the lattice operations used by covector sets
//! (composition, conformal order, reorientation, restriction) are a handful
//! of word operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' | '\u{2212}' => Ok(Sign::Minus),
            '0' => Ok(Sign::Zero),
            other => Err(Error::InvalidSign(other)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }

    pub fn of<T: num_traits::Signed>(x: &T) -> Self {
        if x.is_positive() {
            Sign::Plus
        } else if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Bitmask over element positions `0..len`.
pub type ElementMask = u64;

pub(crate) fn full_mask(len: usize) -> ElementMask {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

pub(crate) fn mask_elements(mask: ElementMask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Packs the bits of `value` selected by `keep` into the low bits, in order.
pub(crate) fn compress_bits(value: u64, keep: u64) -> u64 {
    let mut out = 0u64;
    for (k, i) in mask_elements(keep).enumerate() {
        if value >> i & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// A vector in `{-, 0, +}^E`.
///
/// Ordering is lexicographic on `(len, pos, neg)`; it only serves to give
/// covector sets a canonical sorted form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    len: u8,
    pos: u64,
    neg: u64,
}

impl SignVector {
    pub fn zero(len: usize) -> Self {
        assert!(len <= MAX_ELEMENTS, "sign vectors hold at most 64 entries");
        SignVector {
            len: len as u8,
            pos: 0,
            neg: 0,
        }
    }

    /// Builds a vector from explicit masks. Overlapping or out-of-range bits are rejected.
    pub fn from_masks(len: usize, pos: ElementMask, neg: ElementMask) -> Result<Self> {
        if len > MAX_ELEMENTS {
            return Err(Error::TooManyElements(len));
        }
        let full = full_mask(len);
        if pos & neg != 0 || (pos | neg) & !full != 0 {
            return Err(Error::Precondition(format!(
                "masks {pos:#x}/{neg:#x} are not a sign vector of length {len}"
            )));
        }
        Ok(SignVector {
            len: len as u8,
            pos,
            neg,
        })
    }

    pub(crate) fn from_masks_unchecked(len: usize, pos: ElementMask, neg: ElementMask) -> Self {
        debug_assert!(pos & neg == 0);
        SignVector {
            len: len as u8,
            pos,
            neg,
        }
    }

    pub fn from_signs(signs: &[Sign]) -> Result<Self> {
        if signs.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements(signs.len()));
        }
        let mut v = SignVector::zero(signs.len());
        for (i, s) in signs.iter().enumerate() {
            v.set(i, *s);
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, e: usize) -> Sign {
        debug_assert!(e < self.len());
        if self.pos >> e & 1 == 1 {
            Sign::Plus
        } else if self.neg >> e & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn set(&mut self, e: usize, s: Sign) {
        assert!(e < self.len(), "element {e} out of range");
        let bit = 1u64 << e;
        self.pos &= !bit;
        self.neg &= !bit;
        match s {
            Sign::Plus => self.pos |= bit,
            Sign::Minus => self.neg |= bit,
            Sign::Zero => {}
        }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.len()).map(|e| self.get(e)).collect()
    }

    /// `X^+`
    pub fn plus(&self) -> ElementMask {
        self.pos
    }

    /// `X^-`
    pub fn minus(&self) -> ElementMask {
        self.neg
    }

    /// `X^0`
    pub fn zeros(&self) -> ElementMask {
        full_mask(self.len()) & !(self.pos | self.neg)
    }

    pub fn support(&self) -> ElementMask {
        self.pos | self.neg
    }

    pub fn support_size(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.support() == 0
    }

    pub fn negated(&self) -> Self {
        SignVector {
            len: self.len,
            pos: self.neg,
            neg: self.pos,
        }
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Composition `X∘Y`: `X_e` where nonzero, `Y_e` elsewhere.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let free = !self.support();
        SignVector {
            len: self.len,
            pos: self.pos | (other.pos & free),
            neg: self.neg | (other.neg & free),
        }
    }

    /// Conformal order `X ≤ Y`: every `X_e` is `0` or equal to `Y_e`.
    pub fn conforms(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.conforms_unchecked(other))
    }

    #[inline]
    pub(crate) fn conforms_unchecked(&self, other: &Self) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    /// Negates the entries selected by `mask`.
    #[inline]
    pub fn reoriented(&self, mask: ElementMask) -> Self {
        SignVector {
            len: self.len,
            pos: (self.pos & !mask) | (self.neg & mask),
            neg: (self.neg & !mask) | (self.pos & mask),
        }
    }

    /// Keeps only the positions in `keep`, packed in order.
    pub(crate) fn restricted(&self, keep: ElementMask) -> Self {
        SignVector {
            len: keep.count_ones() as u8,
            pos: compress_bits(self.pos, keep),
            neg: compress_bits(self.neg, keep),
        }
    }

    /// Inserts a new entry at position `at`, shifting later entries up.
    pub(crate) fn inserted(&self, at: usize, s: Sign) -> Self {
        debug_assert!(at <= self.len() && self.len() < MAX_ELEMENTS);
        let spread = |m: u64| {
            let low = m & ((1u64 << at) - 1);
            low | ((m & !((1u64 << at) - 1)) << 1)
        };
        let mut v = SignVector {
            len: self.len + 1,
            pos: spread(self.pos),
            neg: spread(self.neg),
        };
        v.set(at, s);
        v
    }

    /// Inverse of [`Self::restricted`]: spreads the entries over the
    /// positions of `into` in a vector of length `len`, zeros elsewhere.
    pub(crate) fn expanded(&self, into: ElementMask, len: usize) -> Self {
        let mut v = SignVector::zero(len);
        for (k, i) in mask_elements(into).enumerate() {
            v.set(i, self.get(k));
        }
        v
    }

    /// Separation set `S(X, Y) = {e : X_e = -Y_e ≠ 0}`.
    pub fn separation(&self, other: &Self) -> ElementMask {
        (self.pos & other.neg) | (self.neg & other.pos)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in 0..self.len() {
            write!(f, "{}", self.get(e))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl std::str::FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .trim()
            .chars()
            .map(Sign::from_char)
            .collect::<Result<Vec<_>>>()?;
        SignVector::from_signs(&signs)
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    #[test]
    fn composition_examples() {
        assert_eq!(sv("+0-").compose(&sv("0++")).unwrap(), sv("++-"));
        let x = sv("+-0+");
        assert_eq!(x.compose(&x).unwrap(), x);
        assert_eq!(SignVector::zero(4).compose(&x).unwrap(), x);
        assert!(matches!(
            sv("+0").compose(&sv("+00")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn conformal_order_examples() {
        assert!(sv("0+0").conforms(&sv("++-")).unwrap());
        assert!(!sv("+0").conforms(&sv("-+")).unwrap());
        assert!(SignVector::zero(3).conforms(&sv("-0+")).unwrap());
        assert!(sv("0+").conforms(&sv("+0+")).is_err());
    }

    #[test]
    fn parts_partition_the_ground_set() {
        let x = sv("+-0+0-");
        assert_eq!(x.plus() | x.minus() | x.zeros(), full_mask(6));
        assert_eq!(x.plus() & x.minus(), 0);
        assert_eq!(x.zeros() & x.support(), 0);
    }

    #[test]
    fn restriction_packs_positions() {
        let x = sv("+-0+");
        assert_eq!(x.restricted(0b1010), sv("-+"));
        assert_eq!(x.reoriented(0b0011), sv("-+0+"));
    }

    #[test]
    fn unicode_minus_is_accepted() {
        assert_eq!(sv("+\u{2212}0"), sv("+-0"));
        assert!(matches!("+x".parse::<SignVector>(), Err(Error::InvalidSign('x'))));
    }
}
