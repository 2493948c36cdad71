//! The representative set `R = ∪ R_m` as a `p`-ary tree.
//!
//! A [`Rep`] is a finite digit string (low index first) with no trailing
//! zeros; the empty string is `0`. Its length `l(r)` is the digit count, its
//! predecessor `r_-` drops the top digit, and `γ_r = r - r_-` (with `γ_0 = 1`).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldParams, RingElem, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Rep {
    digits: Vec<u8>,
}

impl Rep {
    pub fn zero() -> Self {
        Rep { digits: Vec::new() }
    }

    /// Canonicalizes by stripping trailing zeros.
    pub fn from_digits(digits: &[u8]) -> Self {
        let end = digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
        Rep {
            digits: digits[..end].to_vec(),
        }
    }

    /// Checked constructor: every digit must be below `p`.
    pub fn new(params: &FieldParams, digits: &[u8]) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= params.p()) {
            return Err(Error::InvalidArgument(format!(
                "digit {d} out of range for p = {}",
                params.p()
            )));
        }
        Ok(Self::from_digits(digits))
    }

    /// Base-`p` digits of a non-negative integer.
    pub fn from_u64(p: u32, mut n: u64) -> Self {
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % p as u64) as u8);
            n /= p as u64;
        }
        Rep { digits }
    }

    /// The first `m` digits of `x`.
    pub fn truncation(x: &RingElem, m: usize) -> Self {
        Self::from_digits(&x.digits()[..m.min(x.digits().len())])
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// `l(r)`.
    pub fn length(&self) -> usize {
        self.digits.len()
    }

    /// `r_-`; fails on `r = 0`.
    pub fn predecessor(&self) -> Result<Rep> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("0 has no predecessor".into()));
        }
        Ok(Self::from_digits(&self.digits[..self.digits.len() - 1]))
    }

    /// Top digit `a_{l(r)-1}`; `None` for `r = 0`.
    pub fn top_digit(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    pub fn to_scalar(&self, params: FieldParams) -> Scalar {
        Scalar::from_digits(params, &self.digits)
    }

    pub fn to_ring(&self, params: &FieldParams) -> RingElem {
        RingElem::new(params, &self.digits).expect("rep digits are in range")
    }

    /// `γ_r`.
    pub fn gamma(&self, params: FieldParams) -> Scalar {
        match self.digits.last() {
            None => Scalar::one(params),
            Some(&a) => Scalar::from_i64(params, a as i64).shift(self.digits.len() as i64 - 1),
        }
    }

    /// `r ◁ x`: the first `l(r)` digits of `x` are those of `r`.
    pub fn precedes(&self, x: &RingElem) -> bool {
        self.digits
            .iter()
            .enumerate()
            .all(|(i, &d)| x.digit(i) == d)
    }

    /// `self ◁ other` for two representatives.
    pub fn precedes_rep(&self, other: &Rep) -> bool {
        self.digits
            .iter()
            .enumerate()
            .all(|(i, &d)| other.digits.get(i).copied().unwrap_or(0) == d)
    }

    /// The ancestors `r'` with `r' ◁ self`, shortest first, ending with
    /// `self`. Every prefix of the digit string, canonicalized, deduplicated.
    pub fn ancestors(&self) -> Vec<Rep> {
        let mut out: Vec<Rep> = Vec::with_capacity(self.digits.len() + 1);
        for k in 0..=self.digits.len() {
            let r = Self::from_digits(&self.digits[..k]);
            if out.last() != Some(&r) {
                out.push(r);
            }
        }
        out
    }

    /// The chain `y = t_1 ◁ t_2 ◁ ... ◁ t_n = x` with `(t_j)_- = t_{j-1}`.
    pub fn chain(y: &Rep, x: &Rep) -> Result<Vec<Rep>> {
        if y == x || !y.precedes_rep(x) {
            return Err(Error::InvalidArgument(format!(
                "chain needs y ◁ x with y != x, got y = {y}, x = {x}"
            )));
        }
        let mut out = vec![x.clone()];
        let mut cur = x.clone();
        while &cur != y {
            cur = cur.predecessor()?;
            out.push(cur.clone());
        }
        out.reverse();
        Ok(out)
    }

    /// The common initial part `z` of two distinct representatives.
    pub fn common_prefix(x: &Rep, y: &Rep) -> Result<Rep> {
        if x == y {
            return Err(Error::InvalidArgument("common prefix of equal reps".into()));
        }
        let n = x.length().max(y.length());
        let first_diff = (0..n)
            .find(|&i| {
                x.digits.get(i).copied().unwrap_or(0) != y.digits.get(i).copied().unwrap_or(0)
            })
            .expect("distinct reps differ somewhere");
        Ok(Self::from_digits(&x.digits[..first_diff.min(x.length())]))
    }

    /// All `p^m` elements of `R_m` in canonical order.
    pub fn enumerate(p: u32, m: usize) -> Vec<Rep> {
        let count = (p as usize).pow(m as u32);
        let mut out: Vec<Rep> = (0..count as u64).map(|i| Rep::from_u64(p, i)).collect();
        out.sort();
        out
    }

    /// The elements of exactly length `m` (`R_m \ R_{m-1}`), canonical order.
    pub fn enumerate_exact(p: u32, m: usize) -> Vec<Rep> {
        if m == 0 {
            return vec![Rep::zero()];
        }
        let inner = (p as u64).pow(m as u32 - 1);
        let mut out = Vec::new();
        for top in 1..p as u64 {
            for low in 0..inner {
                out.push(Rep::from_u64(p, low + top * inner));
            }
        }
        out.sort();
        out
    }

    /// The children of `r` at the given length `m > l(r)`: `r + a π^(m-1)`.
    pub fn children_at(&self, p: u32, m: usize) -> Vec<Rep> {
        debug_assert!(m > self.length());
        (1..p as u8)
            .map(|a| {
                let mut d = self.digits.clone();
                d.resize(m - 1, 0);
                d.push(a);
                Rep { digits: d }
            })
            .collect()
    }

    /// Pads `self` with zeros to `m` digits; as a leaf of depth `m`.
    pub fn padded(&self, m: usize) -> Vec<u8> {
        let mut d = self.digits.clone();
        d.resize(m.max(d.len()), 0);
        d
    }
}

impl Ord for Rep {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits
            .len()
            .cmp(&other.digits.len())
            .then_with(|| self.digits.cmp(&other.digits))
    }
}

impl PartialOrd for Rep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `r=<d0,d1,...>`; `r=` for zero.
impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r=")?;
        write_digits(f, &self.digits)
    }
}

/// Comma-separated digits; the empty expansion prints as `0`.
pub(crate) fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[u8]) -> fmt::Result {
    if digits.is_empty() {
        return write!(f, "0");
    }
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}
