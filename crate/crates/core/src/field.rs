//! Finite-precision arithmetic in the ring of integers `R` and its fraction
//! field `K`, for the two supported local fields:
//!
//! * [`Backend::Zp`]: the `p`-adic integers, uniformizer `π = p`, digits carry
//!   base `p`.
//! * [`Backend::FpT`]: the power series ring `F_p[[t]]`, uniformizer `π = t`,
//!   digits add component-wise with no carries.
//!
//! A nonzero [`Scalar`] is `π^v · u` with `u` a unit known modulo `π^k`
//! (`k` significant digits, `k <= N`). Precision is tracked through every
//! operation in the capped-relative model: sums keep the smaller absolute
//! precision, products and quotients keep the smaller relative precision.
//! A cancellation to zero below the tracked precision yields a zero that
//! remembers its absolute precision; it is never confused with the literal
//! zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// `Z_p` with carries.
    Zp,
    /// `F_p[[t]]`, carry-free.
    FpT,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Zp => "zp",
            Backend::FpT => "fpt",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "zp" => Some(Backend::Zp),
            "fpt" => Some(Backend::FpT),
            _ => None,
        }
    }
}

/// Backend selector, residue characteristic `p` (= `q`), and working precision
/// `N` in significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    backend: Backend,
    p: u32,
    precision: u32,
}

const MAX_SERIES_PRECISION: u32 = 512;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldParams {
    pub fn new(backend: Backend, p: u32, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidParams("precision must be at least 1".into()));
        }
        match backend {
            Backend::Zp => {
                // Units are stored in a u64 and multiplied in u128.
                let fits = (p as u64)
                    .checked_pow(precision)
                    .is_some_and(|m| m < (1u64 << 63));
                if !fits {
                    return Err(Error::InvalidParams(format!(
                        "precision {precision} too large for zp with p = {p} (max {})",
                        Self::max_precision(Backend::Zp, p)
                    )));
                }
            }
            Backend::FpT => {
                if p > 251 {
                    return Err(Error::InvalidParams(format!(
                        "fpt supports p < 256, got {p}"
                    )));
                }
                if precision > MAX_SERIES_PRECISION {
                    return Err(Error::InvalidParams(format!(
                        "precision {precision} exceeds the fpt limit {MAX_SERIES_PRECISION}"
                    )));
                }
            }
        }
        Ok(FieldParams {
            backend,
            p,
            precision,
        })
    }

    /// Parameters at the largest precision the backend supports for `p`
    /// (capped at 48 digits for `F_p[[t]]`).
    pub fn with_default_precision(backend: Backend, p: u32) -> Result<Self> {
        Self::new(backend, p, Self::max_precision(backend, p).min(48))
    }

    pub fn max_precision(backend: Backend, p: u32) -> u32 {
        match backend {
            Backend::Zp => {
                let mut n = 0u32;
                let mut m = 1u64;
                while let Some(next) = m.checked_mul(p as u64) {
                    if next >= 1u64 << 63 {
                        break;
                    }
                    m = next;
                    n += 1;
                }
                n
            }
            Backend::FpT => MAX_SERIES_PRECISION,
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Residue field cardinality; equal to `p` for both backends.
    pub fn q(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.backend, self.p, precision)
    }

    /// Guard for orders that require dividing by `j!`: in characteristic `p`
    /// these exist only for `j <= p - 1`.
    pub fn check_order(&self, order: usize) -> Result<()> {
        if self.backend == Backend::FpT && order >= self.p as usize {
            return Err(Error::CharacteristicViolation {
                order,
                bound: self.p as usize - 1,
            });
        }
        Ok(())
    }

    pub(crate) fn same(&self, other: &FieldParams) -> Result<()> {
        if self != other {
            Err(Error::MismatchedParams(*self, *other))
        } else {
            Ok(())
        }
    }

    fn modulus(&self, k: u32) -> u64 {
        (self.p as u64).pow(k)
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "field {} p={} prec={}",
            self.backend.name(),
            self.p,
            self.precision
        )
    }
}

/// Digits of a unit (or of a fixed-point value) modulo `π^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Digits {
    Int(u64),
    Series(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `abs == None` is the literal zero; `Some(a)` is zero modulo `π^a`.
    Zero { abs: Option<i64> },
    /// `π^v · u`, `u` a unit known modulo `π^k`.
    Unit { v: i64, k: u32, unit: Digits },
}

/// An element of `K` at finite precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    params: FieldParams,
    repr: Repr,
}

// ---------------------------------------------------------------------------
// digit-level helpers

fn modinv_u64(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m as i128) as u64
}

fn inv_mod_p(a: u8, p: u32) -> u8 {
    modinv_u64(a as u64, p as u64) as u8
}

impl Digits {
    fn reduce(&self, params: &FieldParams, len: u32) -> Digits {
        match self {
            Digits::Int(x) => Digits::Int(x % params.modulus(len)),
            Digits::Series(s) => {
                let mut s = s.clone();
                s.resize(len as usize, 0);
                Digits::Series(s)
            }
        }
    }

    /// `self · π^d` modulo `π^len`, where `self` is known modulo `π^(len - d)`.
    fn shifted(&self, params: &FieldParams, d: u32, len: u32) -> Digits {
        match self {
            Digits::Int(x) => {
                if d >= len {
                    Digits::Int(0)
                } else {
                    let low = x % params.modulus(len - d);
                    Digits::Int(low * params.modulus(d))
                }
            }
            Digits::Series(s) => {
                let mut out = vec![0u8; len as usize];
                for (i, &c) in s.iter().enumerate() {
                    let idx = i + d as usize;
                    if idx >= len as usize {
                        break;
                    }
                    out[idx] = c;
                }
                Digits::Series(out)
            }
        }
    }

    fn add(&self, other: &Digits, params: &FieldParams, len: u32) -> Digits {
        match (self, other) {
            (Digits::Int(a), Digits::Int(b)) => {
                let m = params.modulus(len);
                Digits::Int(((*a as u128 + *b as u128) % m as u128) as u64)
            }
            (Digits::Series(a), Digits::Series(b)) => {
                let p = params.p;
                Digits::Series(
                    (0..len as usize)
                        .map(|i| {
                            let x = a.get(i).copied().unwrap_or(0) as u32;
                            let y = b.get(i).copied().unwrap_or(0) as u32;
                            ((x + y) % p) as u8
                        })
                        .collect(),
                )
            }
            _ => unreachable!("digit kinds follow the backend"),
        }
    }

    fn neg(&self, params: &FieldParams, len: u32) -> Digits {
        match self {
            Digits::Int(a) => {
                let m = params.modulus(len);
                Digits::Int((m - a % m) % m)
            }
            Digits::Series(s) => {
                let p = params.p;
                Digits::Series(
                    s.iter()
                        .take(len as usize)
                        .map(|&c| ((p - c as u32) % p) as u8)
                        .collect(),
                )
            }
        }
    }

    fn mul(&self, other: &Digits, params: &FieldParams, len: u32) -> Digits {
        match (self, other) {
            (Digits::Int(a), Digits::Int(b)) => {
                let m = params.modulus(len) as u128;
                Digits::Int((((*a as u128) % m) * ((*b as u128) % m) % m) as u64)
            }
            (Digits::Series(a), Digits::Series(b)) => {
                let p = params.p as u64;
                let len = len as usize;
                let mut out = vec![0u64; len];
                for (i, &x) in a.iter().take(len).enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().take(len - i).enumerate() {
                        out[i + j] += x as u64 * y as u64;
                    }
                    if i % 64 == 63 {
                        out.iter_mut().for_each(|c| *c %= p);
                    }
                }
                Digits::Series(out.into_iter().map(|c| (c % p) as u8).collect())
            }
            _ => unreachable!("digit kinds follow the backend"),
        }
    }

    /// Inverse of a unit modulo `π^len`.
    fn inv(&self, params: &FieldParams, len: u32) -> Digits {
        match self {
            Digits::Int(a) => {
                let m = params.modulus(len);
                Digits::Int(modinv_u64(a % m, m))
            }
            Digits::Series(a) => {
                let p = params.p as u64;
                let len = len as usize;
                let a0_inv = inv_mod_p(a[0], params.p) as u64;
                let mut b = vec![0u8; len];
                b[0] = a0_inv as u8;
                for i in 1..len {
                    let mut acc = 0u64;
                    for j in 1..=i {
                        let aj = a.get(j).copied().unwrap_or(0) as u64;
                        acc = (acc + aj * b[i - j] as u64) % p;
                    }
                    b[i] = ((p - acc) % p * a0_inv % p) as u8;
                }
                Digits::Series(b)
            }
        }
    }

    /// Splits a value known modulo `π^len` into `(t, unit mod π^(len - t))`,
    /// or `None` if it is zero modulo `π^len`.
    fn split_valuation(self, params: &FieldParams, len: u32) -> Option<(u32, Digits)> {
        match self {
            Digits::Int(mut x) => {
                if x == 0 {
                    return None;
                }
                let p = params.p as u64;
                let mut t = 0;
                while x % p == 0 {
                    x /= p;
                    t += 1;
                }
                Some((t, Digits::Int(x % params.modulus(len - t))))
            }
            Digits::Series(s) => {
                let t = s.iter().take(len as usize).position(|&c| c != 0)? as u32;
                let mut unit: Vec<u8> = s[t as usize..len as usize].to_vec();
                unit.truncate((len - t) as usize);
                Some((t, Digits::Series(unit)))
            }
        }
    }

    fn digit_vec(&self, params: &FieldParams, len: u32) -> Vec<u8> {
        match self {
            Digits::Int(x) => {
                let p = params.p as u64;
                let mut x = *x;
                (0..len)
                    .map(|_| {
                        let d = (x % p) as u8;
                        x /= p;
                        d
                    })
                    .collect()
            }
            Digits::Series(s) => {
                let mut v = s.clone();
                v.resize(len as usize, 0);
                v
            }
        }
    }

    fn from_digit_slice(params: &FieldParams, digits: &[u8]) -> Digits {
        match params.backend {
            Backend::Zp => {
                let p = params.p as u64;
                let mut x = 0u64;
                for &d in digits.iter().rev() {
                    x = x * p + d as u64;
                }
                Digits::Int(x)
            }
            Backend::FpT => Digits::Series(digits.to_vec()),
        }
    }
}

// ---------------------------------------------------------------------------

impl Scalar {
    /// The literal (exact) zero.
    pub fn zero(params: FieldParams) -> Self {
        Scalar {
            params,
            repr: Repr::Zero { abs: None },
        }
    }

    /// Zero known only modulo `π^abs`.
    pub fn zero_at(params: FieldParams, abs: i64) -> Self {
        Scalar {
            params,
            repr: Repr::Zero { abs: Some(abs) },
        }
    }

    pub fn one(params: FieldParams) -> Self {
        Self::pi_pow(params, 0)
    }

    /// `π^e` at full relative precision.
    pub fn pi_pow(params: FieldParams, e: i64) -> Self {
        let k = params.precision;
        let unit = match params.backend {
            Backend::Zp => Digits::Int(1),
            Backend::FpT => {
                let mut s = vec![0u8; k as usize];
                s[0] = 1;
                Digits::Series(s)
            }
        };
        Scalar {
            params,
            repr: Repr::Unit { v: e, k, unit },
        }
    }

    /// The image of an integer. In `F_p[[t]]` this is the constant `n mod p`.
    pub fn from_i64(params: FieldParams, n: i64) -> Self {
        match params.backend {
            Backend::Zp => {
                if n == 0 {
                    return Self::zero(params);
                }
                let p = params.p as u128;
                let mut a = n.unsigned_abs() as u128;
                let mut v = 0i64;
                while a.is_multiple_of(p) {
                    a /= p;
                    v += 1;
                }
                let k = params.precision;
                let m = params.modulus(k) as u128;
                let mut u = (a % m) as u64;
                if n < 0 {
                    u = ((m - u as u128) % m) as u64;
                }
                Scalar {
                    params,
                    repr: Repr::Unit {
                        v,
                        k,
                        unit: Digits::Int(u),
                    },
                }
            }
            Backend::FpT => {
                let c = n.rem_euclid(params.p as i64) as u8;
                if c == 0 {
                    return Self::zero(params);
                }
                let mut s = vec![0u8; params.precision as usize];
                s[0] = c;
                Scalar {
                    params,
                    repr: Repr::Unit {
                        v: 0,
                        k: params.precision,
                        unit: Digits::Series(s),
                    },
                }
            }
        }
    }

    /// The element `Σ digits[i] π^i`, an exact finite expansion. At most `N`
    /// digits are used.
    pub fn from_digits(params: FieldParams, digits: &[u8]) -> Self {
        let n = params.precision as usize;
        debug_assert!(digits.iter().all(|&d| (d as u32) < params.p));
        let digits = &digits[..digits.len().min(n)];
        let Some(t) = digits.iter().position(|&d| d != 0) else {
            return Self::zero(params);
        };
        let mut unit_digits = digits[t..].to_vec();
        unit_digits.resize(n, 0);
        Scalar {
            params,
            repr: Repr::Unit {
                v: t as i64,
                k: params.precision,
                unit: Digits::from_digit_slice(&params, &unit_digits),
            },
        }
    }

    /// Builds `π^v · u` from explicit unit digits (low index first); the digit
    /// count is the relative precision.
    pub fn from_unit_digits(params: FieldParams, v: i64, unit: &[u8]) -> Result<Self> {
        if unit.is_empty() || unit[0] == 0 {
            return Err(Error::InvalidArgument(
                "unit digits must be nonempty with nonzero leading digit".into(),
            ));
        }
        if unit.len() > params.precision as usize {
            return Err(Error::InvalidArgument(format!(
                "{} unit digits exceed precision {}",
                unit.len(),
                params.precision
            )));
        }
        if let Some(&d) = unit.iter().find(|&&d| d as u32 >= params.p) {
            return Err(Error::InvalidArgument(format!(
                "digit {d} out of range for p = {}",
                params.p
            )));
        }
        Ok(Scalar {
            params,
            repr: Repr::Unit {
                v,
                k: unit.len() as u32,
                unit: Digits::from_digit_slice(&params, unit),
            },
        })
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None })
    }

    /// `v(x)`; `None` stands for `+∞` (any zero, exact or at precision).
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { v, .. } => Some(v),
        }
    }

    pub fn abs(&self) -> AbsValue {
        AbsValue {
            q: self.params.q(),
            valuation: self.valuation(),
        }
    }

    /// Absolute precision: the value is known modulo `π^abs`. `None` for the
    /// literal zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Unit { v, k, .. } => Some(v + k as i64),
        }
    }

    /// Number of significant digits of the unit part; `None` for zeros.
    pub fn rel_precision(&self) -> Option<u32> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { k, .. } => Some(k),
        }
    }

    /// Unit digits, low index first, `k` of them.
    pub fn unit_digits(&self) -> Option<Vec<u8>> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { k, unit, .. } => Some(unit.digit_vec(&self.params, *k)),
        }
    }

    /// Leading unit digit, i.e. the residue of `x / π^v(x)`.
    pub fn leading_digit(&self) -> Option<u8> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, .. } => Some(unit.digit_vec(&self.params, 1)[0]),
        }
    }

    /// `π`-adic digits of an element of `R`, positions `0..len`. Fails if the
    /// element has negative valuation or is not known to `len` digits.
    pub fn ring_digits(&self, len: usize) -> Result<Vec<u8>> {
        match &self.repr {
            Repr::Zero { abs } => {
                if let Some(a) = abs {
                    if (*a as usize) < len && *a >= 0 {
                        return Err(Error::PrecisionExhausted(format!(
                            "need {len} digits, value known modulo pi^{a}"
                        )));
                    }
                }
                Ok(vec![0; len])
            }
            Repr::Unit { v, k, unit } => {
                if *v < 0 {
                    return Err(Error::InvalidArgument(format!(
                        "element has negative valuation {v}, not in R"
                    )));
                }
                let v = *v as usize;
                if v + (*k as usize) < len {
                    return Err(Error::PrecisionExhausted(format!(
                        "need {len} digits, value known to {}",
                        v + *k as usize
                    )));
                }
                let mut out = vec![0u8; len];
                if v < len {
                    let d = unit.digit_vec(&self.params, (len - v) as u32);
                    out[v..].copy_from_slice(&d);
                }
                Ok(out)
            }
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.params.same(&other.params)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.params.same(&other.params)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.params.same(&other.params)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        let params = self.params;
        let (a, b) = (&self.repr, &other.repr);
        if matches!(a, Repr::Zero { abs: None }) {
            return other.clone();
        }
        if matches!(b, Repr::Zero { abs: None }) {
            return self.clone();
        }
        let abs_of = |r: &Repr| match r {
            Repr::Zero { abs } => abs.unwrap(),
            Repr::Unit { v, k, .. } => v + *k as i64,
        };
        let abs = abs_of(a).min(abs_of(b));
        let v0 = match (a, b) {
            (Repr::Unit { v: va, .. }, Repr::Unit { v: vb, .. }) => (*va).min(*vb),
            (Repr::Unit { v, .. }, _) | (_, Repr::Unit { v, .. }) => *v,
            _ => return Scalar::zero_at(params, abs),
        };
        if abs <= v0 {
            return Scalar::zero_at(params, abs);
        }
        let len = (abs - v0) as u32;
        let fixed = |r: &Repr| -> Option<Digits> {
            match r {
                Repr::Zero { .. } => None,
                Repr::Unit { v, unit, .. } => Some(unit.shifted(&params, (*v - v0) as u32, len)),
            }
        };
        let sum = match (fixed(a), fixed(b)) {
            (Some(x), Some(y)) => x.add(&y, &params, len),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!(),
        };
        match sum.split_valuation(&params, len) {
            None => Scalar::zero_at(params, abs),
            Some((t, unit)) => Scalar {
                params,
                repr: Repr::Unit {
                    v: v0 + t as i64,
                    k: len - t,
                    unit,
                },
            },
        }
    }

    fn neg_ref(&self) -> Scalar {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { v, k, unit } => Scalar {
                params: self.params,
                repr: Repr::Unit {
                    v: *v,
                    k: *k,
                    unit: unit.neg(&self.params, *k),
                },
            },
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        let params = self.params;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs: None }, _) | (_, Repr::Zero { abs: None }) => Scalar::zero(params),
            (Repr::Zero { abs: Some(a) }, Repr::Zero { abs: Some(b) }) => {
                Scalar::zero_at(params, a + b)
            }
            (Repr::Zero { abs: Some(a) }, Repr::Unit { v, .. })
            | (Repr::Unit { v, .. }, Repr::Zero { abs: Some(a) }) => Scalar::zero_at(params, a + v),
            (
                Repr::Unit {
                    v: va,
                    k: ka,
                    unit: ua,
                },
                Repr::Unit {
                    v: vb,
                    k: kb,
                    unit: ub,
                },
            ) => {
                let k = (*ka).min(*kb);
                Scalar {
                    params,
                    repr: Repr::Unit {
                        v: va + vb,
                        k,
                        unit: ua.mul(ub, &params, k),
                    },
                }
            }
        }
    }

    /// Multiplicative inverse. Fails on the literal zero and on zeros at
    /// precision, whose inverse is not determined.
    pub fn inv(&self) -> Result<Scalar> {
        match &self.repr {
            Repr::Zero { abs: None } => Err(Error::DivisionByZero),
            Repr::Zero { abs: Some(a) } => Err(Error::PrecisionExhausted(format!(
                "division by a value that is zero modulo pi^{a}"
            ))),
            Repr::Unit { v, k, unit } => Ok(Scalar {
                params: self.params,
                repr: Repr::Unit {
                    v: -v,
                    k: *k,
                    unit: unit.inv(&self.params, *k),
                },
            }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.params.same(&other.params)?;
        let inv = other.inv()?;
        Ok(self.mul_unchecked(&inv))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.params);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `self · π^e`.
    pub fn shift(&self, e: i64) -> Scalar {
        match &self.repr {
            Repr::Zero { abs: None } => self.clone(),
            Repr::Zero { abs: Some(a) } => Scalar::zero_at(self.params, a + e),
            Repr::Unit { v, k, unit } => Scalar {
                params: self.params,
                repr: Repr::Unit {
                    v: v + e,
                    k: *k,
                    unit: unit.clone(),
                },
            },
        }
    }

    /// Agreement at tracked precision: the difference is zero (exact or
    /// below precision).
    pub fn agrees(&self, other: &Scalar) -> bool {
        self.checked_sub(other)
            .map(|d| d.is_zero())
            .unwrap_or(false)
    }

    /// Reduces the relative precision to at most `k` digits.
    pub fn truncate(&self, k: u32) -> Scalar {
        match &self.repr {
            Repr::Unit { v, k: k0, unit } if k < *k0 && k > 0 => Scalar {
                params: self.params,
                repr: Repr::Unit {
                    v: *v,
                    k,
                    unit: unit.reduce(&self.params, k),
                },
            },
            Repr::Unit { v, .. } if k == 0 => Scalar::zero_at(self.params, *v),
            _ => self.clone(),
        }
    }

    /// `j!` as a scalar. In characteristic `p` only `j <= p - 1` is allowed.
    pub fn factorial(params: FieldParams, j: usize) -> Result<Scalar> {
        params.check_order(j)?;
        let mut acc = Scalar::one(params);
        for i in 2..=j as i64 {
            acc = acc.mul_unchecked(&Scalar::from_i64(params, i));
        }
        Ok(acc)
    }

    /// The binomial coefficient `C(n, k)` as a scalar.
    pub fn binomial(params: FieldParams, n: usize, k: usize) -> Scalar {
        Scalar::from_i64(params, binomial_i64(n, k))
    }
}

/// Exact integer binomial coefficient for the small arguments used here.
pub fn binomial_i64(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar addition")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar subtraction")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar multiplication")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Canonical text: `0` for the literal zero, `O(pi^a)` for a zero at
/// precision, otherwise `v:<v> u:<d0,d1,...>` with all significant digits.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs: None } => write!(f, "0"),
            Repr::Zero { abs: Some(a) } => write!(f, "O(pi^{a})"),
            Repr::Unit { v, k, unit } => {
                let digits = unit.digit_vec(&self.params, *k);
                write!(f, "v:{v} u:")?;
                for (i, d) in digits.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

/// `|x| = q^(-v(x))`, or `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AbsValue {
    q: u32,
    valuation: Option<i64>,
}

impl AbsValue {
    pub fn zero(q: u32) -> Self {
        AbsValue { q, valuation: None }
    }

    pub fn one(q: u32) -> Self {
        AbsValue {
            q,
            valuation: Some(0),
        }
    }

    /// `q^e`.
    pub fn q_pow(q: u32, e: i64) -> Self {
        AbsValue {
            q,
            valuation: Some(-e),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// The valuation `v` with `|x| = q^(-v)`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Product of absolute values; valuations add.
    pub fn times(&self, other: &AbsValue) -> AbsValue {
        AbsValue {
            q: self.q,
            valuation: match (self.valuation, other.valuation) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self.valuation {
            None => 0.0,
            Some(v) => (self.q as f64).powi(-(v as i32)),
        }
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.valuation, other.valuation) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact rational text: `0`, `9`, `1/27`.
impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |e: u32| -> String {
            match (self.q as u128).checked_pow(e) {
                Some(x) => x.to_string(),
                None => format!("{}^{}", self.q, e),
            }
        };
        match self.valuation {
            None => write!(f, "0"),
            Some(v) if v <= 0 => write!(f, "{}", pow((-v) as u32)),
            Some(v) => write!(f, "1/{}", pow(v as u32)),
        }
    }
}

/// An element of `R` modulo `π^N`: exactly `N` digits, low index first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    digits: Vec<u8>,
}

impl RingElem {
    /// Pads (or truncates) `digits` to the working precision.
    pub fn new(params: &FieldParams, digits: &[u8]) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= params.p) {
            return Err(Error::InvalidArgument(format!(
                "digit {d} out of range for p = {}",
                params.p
            )));
        }
        let mut digits = digits.to_vec();
        digits.resize(params.precision as usize, 0);
        Ok(RingElem { digits })
    }

    /// Base-`p` digits of a non-negative integer (in `F_p[[t]]`, the polynomial
    /// with those coefficients).
    pub fn from_u64(params: &FieldParams, mut n: u64) -> Self {
        let p = params.p as u64;
        let digits: Vec<u8> = (0..params.precision)
            .map(|_| {
                let d = (n % p) as u8;
                n /= p;
                d
            })
            .collect();
        RingElem { digits }
    }

    pub fn random<R: rand::Rng + ?Sized>(params: &FieldParams, rng: &mut R) -> Self {
        let digits = (0..params.precision)
            .map(|_| rng.gen_range(0..params.p) as u8)
            .collect();
        RingElem { digits }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> u8 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn to_scalar(&self, params: FieldParams) -> Scalar {
        Scalar::from_digits(params, &self.digits)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self
            .digits
            .iter()
            .rposition(|&d| d != 0)
            .map_or(0, |i| i + 1);
        write!(f, "x=")?;
        for (i, d) in self.digits[..last].iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(p: u32, n: u32) -> FieldParams {
        FieldParams::new(Backend::Zp, p, n).unwrap()
    }

    fn fpt(p: u32, n: u32) -> FieldParams {
        FieldParams::new(Backend::FpT, p, n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(FieldParams::new(Backend::Zp, 4, 3).is_err());
        assert!(FieldParams::new(Backend::Zp, 3, 0).is_err());
        assert!(FieldParams::new(Backend::Zp, 3, 40).is_err());
        assert!(FieldParams::new(Backend::Zp, 3, 39).is_ok());
        assert_eq!(FieldParams::max_precision(Backend::Zp, 2), 62);
    }

    #[test]
    fn zp_addition_carries() {
        let f = zp(3, 6);
        let s = Scalar::from_i64(f, 5) + Scalar::from_i64(f, 4);
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.ring_digits(3).unwrap(), vec![0, 0, 1]);
        let a = Scalar::from_i64(f, 7);
        assert_eq!(&a + &Scalar::zero(f), a);
    }

    #[test]
    fn fpt_addition_is_carry_free() {
        let f = fpt(3, 6);
        let a = Scalar::from_digits(f, &[1, 2]);
        let b = Scalar::from_digits(f, &[2, 2]);
        let s = &a + &b;
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.ring_digits(3).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn zp_inverse_of_two() {
        let f = zp(3, 4);
        let half = Scalar::one(f).div(&Scalar::from_i64(f, 2)).unwrap();
        assert_eq!(half.valuation(), Some(0));
        assert_eq!(half.unit_digits().unwrap(), vec![2, 1, 1, 1]);
        assert_eq!(half.to_string(), "v:0 u:2,1,1,1");
    }

    #[test]
    fn valuation_bookkeeping() {
        let f = zp(3, 8);
        let nine = Scalar::from_i64(f, 9);
        assert_eq!(nine.valuation(), Some(2));
        assert_eq!(nine.abs().to_string(), "1/9");
        let q = nine.div(&Scalar::from_i64(f, 3)).unwrap();
        assert_eq!(q.valuation(), Some(1));
        assert_eq!(q.unit_digits().unwrap()[0], 1);
        assert_eq!(Scalar::one(f).abs().to_string(), "1");
        assert_eq!(Scalar::zero(f).valuation(), None);
        assert_eq!(Scalar::zero(f).abs().to_string(), "0");
    }

    #[test]
    fn division_by_zero() {
        let f = zp(5, 5);
        assert_eq!(
            Scalar::one(f).div(&Scalar::zero(f)),
            Err(Error::DivisionByZero)
        );
        let z = Scalar::zero_at(f, 3);
        assert!(matches!(
            Scalar::one(f).div(&z),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn cancellation_is_not_exact_zero() {
        let f = zp(3, 5);
        let a = Scalar::from_i64(f, 11);
        let d = &a - &a;
        assert!(d.is_zero());
        assert!(!d.is_exact_zero());
        assert_eq!(d.abs_precision(), Some(5));
    }

    #[test]
    fn factorials() {
        let f = zp(3, 10);
        assert_eq!(Scalar::factorial(f, 0).unwrap(), Scalar::one(f));
        let six = Scalar::factorial(f, 3).unwrap();
        assert_eq!(six.valuation(), Some(1));
        assert!(six.agrees(&Scalar::from_i64(f, 6)));
        let g = fpt(3, 10);
        assert_eq!(
            Scalar::factorial(g, 3),
            Err(Error::CharacteristicViolation { order: 3, bound: 2 })
        );
        assert!(Scalar::factorial(g, 2).is_ok());
    }

    #[test]
    fn mismatched_params() {
        let a = Scalar::one(zp(3, 5));
        let b = Scalar::one(zp(3, 6));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::MismatchedParams(..))
        ));
    }

    #[test]
    fn fpt_series_inverse() {
        let f = fpt(5, 12);
        let a = Scalar::from_digits(f, &[3, 1, 4, 1, 0, 2]);
        let prod = &a * &a.inv().unwrap();
        assert!(prod.agrees(&Scalar::one(f)));
        assert_eq!(prod.rel_precision(), Some(12));
    }

    #[test]
    fn abs_value_order() {
        let a = AbsValue::q_pow(3, -2);
        let b = AbsValue::one(3);
        let z = AbsValue::zero(3);
        assert!(z < a && a < b);
        assert_eq!(a.to_string(), "1/9");
        assert_eq!(AbsValue::q_pow(3, 2).to_string(), "9");
    }
}
