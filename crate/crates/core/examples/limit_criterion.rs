//! The finite-depth C^{n+1} limit test on coefficient streams.

use padic_wavelet::calculus::extract_bnj_to_depth;
use padic_wavelet::classify::cnplus1_limit_test;
use padic_wavelet::{Backend, CnCombo, CoeffStream, FieldParams, Rep, Scalar};

fn main() -> padic_wavelet::Result<()> {
    let p = FieldParams::new(Backend::Zp, 3, 20)?;
    let a = Rep::zero();

    let x = CoeffStream::new(p, 0, move |r: &Rep, _| r.gamma(p));
    let v = cnplus1_limit_test(&x, &a, 1, 6, 8)?;
    println!(
        "x at level 0:        {v}  limits {:?}",
        v.limits.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    );

    let square = CnCombo::new(p, 2, 0)?.with_term(Rep::zero(), 2, Scalar::one(p))?;
    let sq = CoeffStream::new(p, 1, move |r: &Rep, j| {
        extract_bnj_to_depth(&square, 1, r.length())
            .expect("expansion")
            .get(r, j)
    });
    let v = cnplus1_limit_test(&sq, &a, 1, 5, 8)?;
    println!(
        "x^2 at level 1:      {v}  limits {:?}",
        v.limits.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    );

    let alt = CoeffStream::new(p, 0, move |r: &Rep, _| {
        let u = if r.length().is_multiple_of(2) { 1 } else { 2 };
        &Scalar::from_i64(p, u) * &r.gamma(p)
    });
    println!(
        "alternating stream:  {}",
        cnplus1_limit_test(&alt, &a, 1, 8, 8)?
    );
    Ok(())
}
