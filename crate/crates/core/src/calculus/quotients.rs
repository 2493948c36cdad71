//! Divided differences `Φ_k`, the Taylor-remainder quotients `ψ_j`, and the
//! confluent quotients `ψ_{n,j}`.

use crate::error::{Error, Result};
use crate::field::{FieldParams, RingElem, Scalar};
use crate::funcspace::{CnCombo, Evaluator};

/// Newton divided difference of `values` at pairwise distinct `points`.
/// Symmetric in the points, so it agrees with the defining recursion.
pub fn divided_difference(points: &[Scalar], values: &[Scalar]) -> Result<Scalar> {
    debug_assert_eq!(points.len(), values.len());
    let mut dd: Vec<Scalar> = values.to_vec();
    let k = points.len();
    for level in 1..k {
        for i in 0..k - level {
            let num = &dd[i + 1] - &dd[i];
            let den = &points[i + level] - &points[i];
            dd[i] = num.div(&den)?;
        }
    }
    Ok(dd.swap_remove(0))
}

fn check_distinct(points: &[RingElem]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].contains(a) {
            return Err(Error::InvalidArgument(format!(
                "difference quotient needs pairwise distinct points, {a} repeats"
            )));
        }
    }
    Ok(())
}

/// `Φ_k f(x_1, ..., x_{k+1})` at pairwise distinct points.
pub fn phi(f: &dyn Evaluator, points: &[RingElem]) -> Result<Scalar> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("Φ needs at least one point".into()));
    }
    check_distinct(points)?;
    let params = f.params();
    let xs: Vec<Scalar> = points.iter().map(|x| x.to_scalar(params)).collect();
    let vs = points
        .iter()
        .map(|x| f.eval(x))
        .collect::<Result<Vec<_>>>()?;
    divided_difference(&xs, &vs)
}

/// `Φ_k f` for a combo at points that may repeat. On a run of `L + 1` equal
/// points the divided difference is the Taylor coefficient `D_L f`.
pub fn phi_confluent(f: &CnCombo, points: &[RingElem]) -> Result<Scalar> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("Φ needs at least one point".into()));
    }
    let params = f.params();
    let mut pts = points.to_vec();
    pts.sort();
    let xs: Vec<Scalar> = pts.iter().map(|x| x.to_scalar(params)).collect();
    let k = pts.len();
    let mut dd: Vec<Scalar> = pts.iter().map(|x| f.eval(x)).collect();
    for level in 1..k {
        for i in 0..k - level {
            dd[i] = if pts[i] == pts[i + level] {
                f.taylor_coeff(level, &pts[i])
            } else {
                (&dd[i + 1] - &dd[i]).div(&(&xs[i + level] - &xs[i]))?
            };
        }
    }
    Ok(dd.swap_remove(0))
}

/// `ψ_j f(x, y)` by the recursion `ψ_0 = Φ_1`,
/// `ψ_j = (ψ_{j-1} - D_j f(y)) / (x - y)`.
pub fn psi(f: &CnCombo, j: usize, x: &RingElem, y: &RingElem) -> Result<Scalar> {
    if x == y {
        return Err(Error::InvalidArgument("ψ needs distinct points".into()));
    }
    let params = f.params();
    let h = &x.to_scalar(params) - &y.to_scalar(params);
    let mut acc = (&f.eval(x) - &f.eval(y)).div(&h)?;
    for i in 1..=j {
        acc = (&acc - &f.taylor_coeff(i, y)).div(&h)?;
    }
    Ok(acc)
}

/// `ψ_{n,j} f(x, y) = Φ_{n+1} f(x, ..., x, y, ..., y)` with `x` repeated `j`
/// times and `y` repeated `n + 2 - j` times.
pub fn psi_nj(f: &CnCombo, n: usize, j: usize, x: &RingElem, y: &RingElem) -> Result<Scalar> {
    if j == 0 || j > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "ψ_{{n,j}} needs 1 <= j <= n+1, got j = {j}"
        )));
    }
    if x == y {
        return Err(Error::InvalidArgument(
            "ψ_{n,j} needs distinct points".into(),
        ));
    }
    let mut pts = vec![x.clone(); j];
    pts.extend(std::iter::repeat_n(y.clone(), n + 2 - j));
    phi_confluent(f, &pts)
}

/// `ψ_k g(x, y)` computed from the local polynomials of `g`: exact, with no
/// division, when `x` and `y` share a leaf.
pub(crate) fn psi_local(g: &CnCombo, k: usize, x: &RingElem, y: &RingElem) -> Result<Scalar> {
    let params: FieldParams = g.params();
    let leaf_y = g.leaf_poly_at(y);
    let ys = y.to_scalar(params);
    let h = &x.to_scalar(params) - &ys;
    let taylor = |l: usize| leaf_y.taylor_at(params, l, &ys);
    let m = g.depth();
    if x.digits()[..m] == y.digits()[..m] {
        // ψ_k g = Σ_{l > k} D_l g(y) (x - y)^(l - k - 1)
        let mut acc = Scalar::zero(params);
        for l in (k + 1..=g.level()).rev() {
            acc = &(&acc * &h) + &taylor(l);
        }
        return Ok(acc);
    }
    let mut num = g.eval(x);
    let mut hp = Scalar::one(params);
    for l in 0..=k.min(g.level()) {
        num = &num - &(&hp * &taylor(l));
        hp = &hp * &h;
    }
    num.div(&h.pow(k as u32 + 1))
}
