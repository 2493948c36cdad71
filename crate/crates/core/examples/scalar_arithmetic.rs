//! Finite-precision arithmetic in Z_p and F_p[[t]].

use padic_wavelet::{Backend, FieldParams, Scalar};

fn main() -> padic_wavelet::Result<()> {
    let zp = FieldParams::new(Backend::Zp, 3, 4)?;
    let nine = &Scalar::from_i64(zp, 5) + &Scalar::from_i64(zp, 4);
    println!("Z_3:  5 + 4 = {nine}  (|9| = {})", nine.abs());
    let half = Scalar::one(zp).div(&Scalar::from_i64(zp, 2))?;
    println!("Z_3:  1/2 = {half}");
    println!("Z_3:  3! = {}", Scalar::factorial(zp, 3)?);

    let fpt = FieldParams::new(Backend::FpT, 3, 8)?;
    let a = Scalar::from_digits(fpt, &[1, 2]);
    let b = Scalar::from_digits(fpt, &[2, 2]);
    println!("F_3[[t]]: (1 + 2t) + (2 + 2t) = {}", &a + &b);
    match Scalar::factorial(fpt, 3) {
        Ok(v) => println!("F_3[[t]]: 3! = {v}"),
        Err(e) => println!("F_3[[t]]: 3! rejected: {e}"),
    }

    // Cancellation loses relative precision instead of inventing digits.
    let x = Scalar::from_i64(zp, 1);
    let y = &Scalar::from_i64(zp, 1) + &Scalar::pi_pow(zp, 5);
    println!("Z_3:  1 - (1 + 3^5) = {}", &x - &y);
    Ok(())
}
