//! Finite-depth estimation of `D_j f(a)` for black-box functions.

use crate::error::{Error, Result};
use crate::field::{RingElem, Scalar};
use crate::funcspace::Evaluator;

use super::quotients::phi;

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    /// Value at the first depth where consecutive estimates agreed.
    pub value: Scalar,
    /// That depth.
    pub depth: usize,
    /// `(depth, Φ_j f at the probe tuple)` for every depth examined.
    pub history: Vec<(usize, Scalar)>,
}

/// Estimates `D_j f(a)` as `Φ_j f(a, a + π^{d+1}, ..., a + π^{d+j})` for
/// `d = m0..=m1`, and reports the first depth at which two consecutive
/// values agree modulo `π^tol`.
pub fn estimate_dj(
    f: &dyn Evaluator,
    j: usize,
    a: &RingElem,
    m0: usize,
    m1: usize,
    tol: i64,
) -> Result<Estimate> {
    let params = f.params();
    if m1 <= m0 {
        return Err(Error::InvalidArgument(format!(
            "depth window {m0}..={m1} needs at least two depths"
        )));
    }
    if m1 + j >= params.precision() as usize {
        return Err(Error::PrecisionExhausted(format!(
            "probe points need {} digits, precision is {}",
            m1 + j + 1,
            params.precision()
        )));
    }
    let a_s = a.to_scalar(params);
    let mut history: Vec<(usize, Scalar)> = Vec::new();
    for d in m0..=m1 {
        let mut pts = vec![a.clone()];
        for i in 1..=j {
            let x = &a_s + &Scalar::pi_pow(params, (d + i) as i64);
            pts.push(RingElem::new(
                &params,
                &x.ring_digits(params.precision() as usize)?,
            )?);
        }
        let v = phi(f, &pts)?;
        if let Some((_, prev)) = history.last() {
            let diff = &v - prev;
            let close = match diff.valuation() {
                None => true,
                Some(e) => e >= tol,
            };
            if close {
                let value = v.clone();
                history.push((d, v));
                return Ok(Estimate {
                    value,
                    depth: d,
                    history,
                });
            }
        }
        history.push((d, v));
    }
    Err(Error::NoConvergence {
        from: m0,
        to: m1,
        detail: format!("consecutive estimates of D_{j} never agreed modulo pi^{tol}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Backend, FieldParams};
    use crate::funcspace::FnEvaluator;

    #[test]
    fn estimate_examples() {
        let f = FieldParams::new(Backend::Zp, 3, 30).unwrap();
        let sq = FnEvaluator::new(f, 2, |x: &Scalar| x * x);
        let zero = RingElem::from_u64(&f, 0);
        let e = estimate_dj(&sq, 1, &zero, 1, 10, 5).unwrap();
        assert!(e.value.abs() <= crate::field::AbsValue::q_pow(3, -5));

        let c = FnEvaluator::new(f, 3, |x: &Scalar| Scalar::from_i64(x.params(), 4));
        let e = estimate_dj(&c, 2, &zero, 0, 4, 8).unwrap();
        assert!(e.value.is_zero());
        assert_eq!(e.depth, 1);

        let cube = FnEvaluator::new(f, 3, |x: &Scalar| &(x * x) * x);
        let one = RingElem::from_u64(&f, 1);
        let e = estimate_dj(&cube, 2, &one, 1, 12, 6).unwrap();
        let diff = &e.value - &Scalar::from_i64(f, 3);
        assert!(diff.valuation().is_none_or(|v| v >= 6));
    }

    #[test]
    fn no_convergence() {
        let f = FieldParams::new(Backend::Zp, 3, 30).unwrap();
        // value depends on the parity of v(x): not differentiable at 0
        let wild = FnEvaluator::new(f, 1, |x: &Scalar| match x.valuation() {
            None => Scalar::zero(x.params()),
            Some(v) => Scalar::from_i64(x.params(), 1 + (v % 2)),
        });
        let zero = RingElem::from_u64(&f, 0);
        assert!(matches!(
            estimate_dj(&wild, 1, &zero, 1, 6, 3),
            Err(Error::NoConvergence { .. })
        ));
    }
}
