//! Divided differences `Φ_k` and Taylor remainders `ψ_j` of a combo.

use padic_wavelet::calculus::{phi, psi};
use padic_wavelet::{Backend, CnCombo, FieldParams, Rep, RingElem, Scalar};

fn main() -> padic_wavelet::Result<()> {
    let f = FieldParams::new(Backend::Zp, 3, 20)?;
    // x^2 as a level-2 combo: (x - 0)^2 χ_0.
    let square = CnCombo::new(f, 2, 0)?.with_term(Rep::zero(), 2, Scalar::one(f))?;
    let pt = |n| RingElem::from_u64(&f, n);
    println!("Φ_1 x^2 (1, 2)    = {}", phi(&square, &[pt(1), pt(2)])?);
    println!(
        "Φ_2 x^2 (4, 0, 7) = {}",
        phi(&square, &[pt(4), pt(0), pt(7)])?
    );
    println!("ψ_1 x^2 (5, 11)   = {}", psi(&square, 1, &pt(5), &pt(11))?);

    // A locally polynomial function: x on D_1, x^2 elsewhere.
    let g = CnCombo::new(f, 2, 1)?
        .with_term(Rep::from_u64(3, 1), 1, Scalar::one(f))?
        .with_term(Rep::from_u64(3, 2), 2, Scalar::one(f))?;
    for (a, b) in [(1, 4), (1, 2), (2, 5)] {
        println!("Φ_1 g ({a}, {b}) = {}", phi(&g, &[pt(a), pt(b)])?);
    }
    Ok(())
}
