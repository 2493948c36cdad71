//! Increasing, isometry and pseudocontraction tests on level-1 combos.

use padic_wavelet::classify::{
    is_derivative_zero, is_isometry, is_pseudocontraction, monotone_type,
};
use padic_wavelet::{Backend, CnCombo, FieldParams, Rep, Scalar};

fn main() -> padic_wavelet::Result<()> {
    let p = FieldParams::new(Backend::Zp, 3, 20)?;
    let chi = |n| CnCombo::indicator(p, &Rep::from_u64(3, n));
    let f = CnCombo::identity(p)?.add(&chi(1)?)?;
    let g = f.sub(&chi(2)?)?;
    let pi_x = CnCombo::identity(p)?.scale(&Scalar::pi_pow(p, 1))?;
    let one = Scalar::one(p);
    for (name, h) in [("x + χ_1", &f), ("x + χ_1 - χ_2", &g), ("3x", &pi_x)] {
        println!("{name}:");
        println!("  increasing        {}", monotone_type(h, &one)?);
        println!("  isometry          {}", is_isometry(h)?);
        println!("  pseudocontraction {}", is_pseudocontraction(h)?);
        println!("  derivative zero   {}", is_derivative_zero(h, 1)?);
    }
    Ok(())
}
