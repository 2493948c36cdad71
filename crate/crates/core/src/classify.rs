//! Decision procedures on level-0 coefficients: monotone of type `sgn(s)`,
//! pseudocontraction, isometry, vanishing derivative, and the finite-depth
//! `C^{n+1}` limit criterion on coefficient streams.
//!
//! For a combo of depth `m` whose leaf polynomials have degree at most 1,
//! every `b_r` with `l(r) > m` equals `a_1(leaf)·γ_r`, so the infinite
//! quantifiers over `R_+` reduce to an explicit check over `R_{m+1}` plus one
//! check of the slope `a_1` per leaf.

use std::collections::BTreeMap;
use std::fmt;

use crate::calculus::expand_c0;
use crate::error::{Error, Result};
use crate::field::{AbsValue, Scalar};
use crate::funcspace::{CnCombo, CoeffStream, LeafPoly};
use crate::reps::Rep;

/// `sgn(x)` in `K^× / K^+`: valuation and leading unit digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignClass {
    pub valuation: i64,
    pub leading_digit: u8,
}

impl SignClass {
    pub fn of(x: &Scalar) -> Result<Self> {
        match (x.valuation(), x.leading_digit()) {
            (Some(valuation), Some(leading_digit)) => Ok(SignClass {
                valuation,
                leading_digit,
            }),
            _ => Err(Error::InvalidArgument("sgn(0) is undefined".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Rep(Rep),
    Pair(Rep, Rep),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |f: &mut fmt::Formatter<'_>, r: &Rep| -> fmt::Result {
            write!(f, "[")?;
            crate::reps::write_digits(f, r.digits())?;
            write!(f, "]")
        };
        match self {
            Witness::Rep(r) => one(f, r),
            Witness::Pair(a, b) => {
                one(f, a)?;
                write!(f, ";")?;
                one(f, b)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Witness>,
    /// Largest representative length examined explicitly.
    pub depth: usize,
    /// Stabilized limits `lim b_r^{n,j} γ_r^{-1}` (limit tests only).
    pub limits: Vec<Scalar>,
}

impl Verdict {
    fn yes(depth: usize) -> Self {
        Verdict {
            answer: Answer::Yes,
            witness: None,
            depth,
            limits: Vec::new(),
        }
    }

    fn no(witness: Witness, depth: usize) -> Self {
        Verdict {
            answer: Answer::No,
            witness: Some(witness),
            depth,
            limits: Vec::new(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// `answer=<yes|no|inconclusive> witness=<[d,..]|[d,..];[d,..]|none> depth=<m>`
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "answer={} witness=", self.answer.as_str())?;
        match &self.witness {
            None => write!(f, "none")?,
            Some(w) => write!(f, "{w}")?,
        }
        write!(f, " depth={}", self.depth)
    }
}

/// Level-0 data of a combo for the classifiers: the ratios `b_r γ_r^{-1}` for
/// `r ∈ R_{m+1} \ {0}` and the leaf slopes.
struct Tail {
    depth: usize,
    ratios: Vec<(Rep, Scalar)>,
    b: BTreeMap<Rep, Scalar>,
    leaves: Vec<LeafPoly>,
}

fn tail(f: &CnCombo) -> Result<Tail> {
    let params = f.params();
    let leaves = f.leaf_normal_form();
    for l in &leaves {
        if let Some(d) = l.degree() {
            if d > 1 {
                return Err(Error::UnsupportedDegree {
                    leaf: l.leaf.to_string(),
                    degree: d,
                });
            }
        }
    }
    let depth = f.depth() + 1;
    let table = expand_c0(f, depth)?;
    let mut ratios = Vec::new();
    let mut b = BTreeMap::new();
    for r in Rep::enumerate(params.p(), depth).into_iter().skip(1) {
        let v = table.get(&r, 0);
        ratios.push((r.clone(), v.div(&r.gamma(params))?));
        b.insert(r, v);
    }
    Ok(Tail {
        depth,
        ratios,
        b,
        leaves,
    })
}

fn slope(params: crate::field::FieldParams, leaf: &LeafPoly) -> Scalar {
    leaf.coeffs
        .get(1)
        .cloned()
        .unwrap_or_else(|| Scalar::zero(params))
}

/// A representative below the leaf (length `m + 1`) that witnesses a slope
/// failure.
fn leaf_witness(leaf: &LeafPoly, p: u32) -> Rep {
    leaf.leaf.children_at(p, leaf.depth + 1).swap_remove(0)
}

/// Checks `pred` on every explicit ratio and every leaf slope.
fn check_ratios(f: &CnCombo, pred: impl Fn(&Scalar) -> bool) -> Result<Verdict> {
    let t = tail(f)?;
    let params = f.params();
    for (r, v) in &t.ratios {
        if !pred(v) {
            return Ok(Verdict::no(Witness::Rep(r.clone()), t.depth));
        }
    }
    for leaf in &t.leaves {
        if !pred(&slope(params, leaf)) {
            return Ok(Verdict::no(
                Witness::Rep(leaf_witness(leaf, params.p())),
                t.depth,
            ));
        }
    }
    Ok(Verdict::yes(t.depth))
}

/// `|s^{-1} b_r γ_r^{-1} - 1| < 1` for all `r ∈ R_+`: monotone of type
/// `sgn(s)`; `s = 1` tests increasing.
pub fn monotone_type(f: &CnCombo, s: &Scalar) -> Result<Verdict> {
    let sinv = s.inv()?;
    let one = Scalar::one(f.params());
    check_ratios(f, |v| {
        (&(&sinv * v) - &one).abs() < AbsValue::one(v.params().q())
    })
}

/// `|b_r γ_r^{-1}| < 1` for all `r ∈ R_+`.
pub fn is_pseudocontraction(f: &CnCombo) -> Result<Verdict> {
    check_ratios(f, |v| v.abs() < AbsValue::one(v.params().q()))
}

/// `|b_r γ_r^{-1}| = 1` for all `r ∈ R_+`, and `|b_{r1} - b_{r2}| =
/// |π^{l(r1)-1}|` for distinct siblings (same length, same predecessor).
pub fn is_isometry(f: &CnCombo) -> Result<Verdict> {
    let params = f.params();
    let q = params.q();
    let unit = |v: &Scalar| v.abs() == AbsValue::one(q);
    let first = check_ratios(f, unit)?;
    if !first.is_yes() {
        return Ok(first);
    }
    let t = tail(f)?;
    let mut groups: BTreeMap<(usize, Rep), Vec<&Rep>> = BTreeMap::new();
    for r in t.b.keys() {
        groups
            .entry((r.length(), r.predecessor()?))
            .or_default()
            .push(r);
    }
    for ((len, _), members) in &groups {
        let want = AbsValue::q_pow(q, -(*len as i64 - 1));
        for (i, r1) in members.iter().enumerate() {
            for r2 in &members[i + 1..] {
                let d = (&t.b[*r1] - &t.b[*r2]).abs();
                if d != want {
                    return Ok(Verdict::no(
                        Witness::Pair((*r1).clone(), (*r2).clone()),
                        t.depth,
                    ));
                }
            }
        }
    }
    Ok(Verdict::yes(t.depth))
}

/// `f ∈ C^n` with `f' = 0`, i.e. `lim_{r ∈ R_+} b_r γ_r^{-n} = 0`. A combo is
/// locally polynomial, so this holds exactly when every leaf polynomial is
/// constant; otherwise a representative below a non-constant leaf with
/// `b_r ≠ 0` is reported.
pub fn is_derivative_zero(f: &CnCombo, n: usize) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "derivative-zero test needs n >= 1".into(),
        ));
    }
    let params = f.params();
    let m = f.depth();
    for leaf in f.leaf_normal_form() {
        if leaf.degree().unwrap_or(0) == 0 {
            continue;
        }
        // Some child a few layers down has b_r ≠ 0 since the leaf polynomial
        // is not constant.
        let mut frontier = vec![leaf.leaf.clone()];
        for len in m + 1..=m + 3 {
            let mut next = Vec::new();
            for s in &frontier {
                for r in s.children_at(params.p(), len) {
                    let x = r.to_ring(&params);
                    let y = r.predecessor()?.to_ring(&params);
                    if !(&leaf.eval(params, &x) - &leaf.eval(params, &y)).is_zero() {
                        return Ok(Verdict::no(Witness::Rep(r), len));
                    }
                    next.push(r);
                }
            }
            frontier = next;
        }
        return Ok(Verdict::no(
            Witness::Rep(leaf_witness(&leaf, params.p())),
            m + 1,
        ));
    }
    Ok(Verdict::yes(m + 1))
}

/// Finite-depth test of the `C^{n+1}` criterion at `a`: along
/// `r = a + u π^d` (`u = 1..p-1`, `d = m0..=m1`, `d >= l(a)`), the ratios
/// `b_r^{n,j} γ_r^{-1}` must stabilize within `q^{-tol}` and the limits must
/// satisfy `L_j = C(n+1, j) L_0` within the same tolerance.
///
/// `no` is returned when the values never settle and the jumps between
/// consecutive depths do not shrink over the second half of the window;
/// `inconclusive` when the jumps shrink but the window ends first.
pub fn cnplus1_limit_test(
    s: &CoeffStream,
    a: &Rep,
    m0: usize,
    m1: usize,
    tol: i64,
) -> Result<Verdict> {
    let params = s.params();
    let n = s.level();
    let m0 = m0.max(a.length());
    if m1 <= m0 {
        return Err(Error::InvalidArgument(format!(
            "depth window {m0}..={m1} needs at least two depths beyond l(a) = {}",
            a.length()
        )));
    }
    // values[d - m0][u - 1][j]
    let mut reps: Vec<Vec<Rep>> = Vec::new();
    let mut values: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for d in m0..=m1 {
        let rs = a.children_at(params.p(), d + 1);
        let vs = rs
            .iter()
            .map(|r| {
                let g = r.gamma(params);
                (0..=n)
                    .map(|j| s.coeff(r, j).div(&g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        reps.push(rs);
        values.push(vs);
    }
    let close = |x: &Scalar, y: &Scalar| (x - y).valuation().is_none_or(|e| e >= tol);
    // Depth index i is stable if everything from i on agrees with values[i][0].
    let agrees_from = |i: usize| {
        values[i..]
            .iter()
            .flatten()
            .all(|row| row.iter().zip(&values[i][0]).all(|(x, y)| close(x, y)))
    };
    let last = values.len() - 1;
    if let Some(i) = (0..last).find(|&i| agrees_from(i)) {
        let limits = values[last][0].clone();
        for (j, lj) in limits.iter().enumerate() {
            let want = &Scalar::binomial(params, n + 1, j) * &limits[0];
            if !close(lj, &want) {
                let mut v = Verdict::no(Witness::Rep(reps[i][0].clone()), m1 + 1);
                v.limits = limits;
                return Ok(v);
            }
        }
        let mut v = Verdict::yes(m1 + 1);
        v.limits = limits;
        return Ok(v);
    }
    // Size of the jump from depth i to i + 1, as a valuation (None = no jump).
    let jump = |i: usize| -> Option<i64> {
        values[i]
            .iter()
            .chain(&values[i + 1])
            .flat_map(|row| {
                row.iter()
                    .zip(&values[i][0])
                    .map(|(x, y)| (x - y).valuation())
            })
            .flatten()
            .min()
    };
    let jumps: Vec<Option<i64>> = (0..last).map(jump).collect();
    let half = &jumps[jumps.len() / 2..];
    let not_shrinking = half.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b <= a,
        _ => false,
    }) && half.iter().all(|e| e.is_some_and(|e| e < tol));
    if not_shrinking {
        let i = jumps.len() / 2 + half.len() - 1;
        return Ok(Verdict::no(
            Witness::Pair(reps[i][0].clone(), reps[i + 1][0].clone()),
            m1 + 1,
        ));
    }
    Ok(Verdict {
        answer: Answer::Inconclusive,
        witness: None,
        depth: m1 + 1,
        limits: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Backend, FieldParams};

    fn zp3() -> FieldParams {
        FieldParams::new(Backend::Zp, 3, 20).unwrap()
    }

    fn shifted_identity(params: FieldParams) -> CnCombo {
        CnCombo::identity(params)
            .unwrap()
            .add(&CnCombo::indicator(params, &Rep::from_u64(3, 1)).unwrap())
            .unwrap()
    }

    fn isometry_example(params: FieldParams) -> CnCombo {
        shifted_identity(params)
            .sub(&CnCombo::indicator(params, &Rep::from_u64(3, 2)).unwrap())
            .unwrap()
    }

    #[test]
    fn example_coefficients() {
        let f = zp3();
        let tf = expand_c0(&shifted_identity(f), 2).unwrap();
        let tg = expand_c0(&isometry_example(f), 2).unwrap();
        let r = |n| Rep::from_u64(3, n);
        for (n, want) in [(1, 2), (2, 2), (3, 3)] {
            assert!(tf.get(&r(n), 0).agrees(&Scalar::from_i64(f, want)));
        }
        for (n, want) in [(1, 2), (2, 1), (3, 3)] {
            assert!(tg.get(&r(n), 0).agrees(&Scalar::from_i64(f, want)));
        }
    }

    #[test]
    fn isometry_examples() {
        let f = zp3();
        let g = is_isometry(&isometry_example(f)).unwrap();
        assert!(g.is_yes(), "{g}");
        let v = is_isometry(&shifted_identity(f)).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(
            v.witness,
            Some(Witness::Pair(Rep::from_u64(3, 1), Rep::from_u64(3, 2)))
        );
        assert!(is_isometry(&CnCombo::identity(f).unwrap())
            .unwrap()
            .is_yes());
    }

    #[test]
    fn monotone_examples() {
        let f = zp3();
        let one = Scalar::one(f);
        assert!(monotone_type(&CnCombo::identity(f).unwrap(), &one)
            .unwrap()
            .is_yes());
        let v = monotone_type(&shifted_identity(f), &one).unwrap();
        assert_eq!(v.witness, Some(Witness::Rep(Rep::from_u64(3, 1))));
        assert_eq!(monotone_type(&isometry_example(f), &one).unwrap().answer, Answer::No);
        assert!(monotone_type(&shifted_identity(f), &Scalar::zero(f)).is_err());
    }

    #[test]
    fn pseudocontraction_examples() {
        let f = zp3();
        let x = CnCombo::identity(f).unwrap();
        let pix = x.scale(&Scalar::from_i64(f, 3)).unwrap();
        assert!(is_pseudocontraction(&pix).unwrap().is_yes());
        assert_eq!(is_pseudocontraction(&x).unwrap().answer, Answer::No);
        let chi1 = CnCombo::indicator(f, &Rep::from_u64(3, 1)).unwrap();
        let v = is_pseudocontraction(&chi1).unwrap();
        assert_eq!(v.witness, Some(Witness::Rep(Rep::from_u64(3, 1))));
    }

    #[test]
    fn derivative_zero_examples() {
        let f = zp3();
        let chi1 = CnCombo::indicator(f, &Rep::from_u64(3, 1)).unwrap();
        for n in 1..3 {
            assert!(is_derivative_zero(&chi1, n).unwrap().is_yes());
        }
        assert_eq!(
            is_derivative_zero(&CnCombo::identity(f).unwrap(), 1)
                .unwrap()
                .answer,
            Answer::No
        );
        assert!(is_derivative_zero(&CnCombo::new(f, 1, 0).unwrap(), 1)
            .unwrap()
            .is_yes());
    }

    #[test]
    fn unsupported_degree() {
        let f = zp3();
        let sq = CnCombo::new(f, 2, 0)
            .unwrap()
            .with_term(Rep::zero(), 2, Scalar::one(f))
            .unwrap();
        assert!(matches!(
            is_isometry(&sq),
            Err(Error::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn limit_streams() {
        let f = zp3();
        let x = CoeffStream::new(f, 0, move |r: &Rep, _| r.gamma(f));
        let v = cnplus1_limit_test(&x, &Rep::zero(), 1, 6, 10).unwrap();
        assert!(v.is_yes(), "{v}");
        assert!(v.limits[0].agrees(&Scalar::one(f)));

        let alt = CoeffStream::new(f, 0, move |r: &Rep, _| {
            let u = if r.length().is_multiple_of(2) { 1 } else { 2 };
            &Scalar::from_i64(f, u) * &r.gamma(f)
        });
        let v = cnplus1_limit_test(&alt, &Rep::zero(), 1, 6, 10).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(matches!(v.witness, Some(Witness::Pair(..))));

        let zero = CoeffStream::new(f, 1, move |_: &Rep, _| Scalar::zero(f));
        let v = cnplus1_limit_test(&zero, &Rep::from_u64(3, 4), 0, 5, 10).unwrap();
        assert!(v.is_yes());
        assert!(v.limits.iter().all(|l| l.is_zero()));
        assert_eq!(v.to_string(), "answer=yes witness=none depth=6");
    }
}
