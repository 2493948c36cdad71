//! The antiderivation `P_n`, its digit-sum form and `T_n`.

use padic_wavelet::calculus::{antiderive, antiderive_digit_sum, norm_n, t_n};
use padic_wavelet::text::write_function;
use padic_wavelet::{Backend, CnCombo, FieldParams, Rep, RingElem, Scalar};

fn main() -> padic_wavelet::Result<()> {
    let f = FieldParams::new(Backend::Zp, 5, 16)?;
    let g = CnCombo::new(f, 0, 1)?
        .with_term(Rep::zero(), 0, Scalar::one(f))?
        .with_term(Rep::from_u64(5, 3), 0, Scalar::from_i64(f, 2))?;
    let p1 = antiderive(&g, 1)?;
    print!("P_1 g:\n{}", write_function(&p1));
    for n in [3u64, 8, 13, 124] {
        let x = RingElem::from_u64(&f, n);
        println!(
            "x = {n:>3}: closed form {}  digit sum {}",
            p1.eval(&x),
            antiderive_digit_sum(&g, 1, &x)?
        );
    }
    println!(
        "D_1 P_1 g == g: {}",
        p1.derivative(1)?.sub(&g.with_level(0)?)?.is_zero()
    );
    println!(
        "|P_1 g|_1 = {}  |g|_0 = {}",
        norm_n(&p1, 1)?,
        norm_n(&g, 0)?
    );

    let chi = CnCombo::indicator(f, &Rep::from_u64(5, 7))?;
    print!("\nT_3 χ_7:\n{}", write_function(&t_n(&chi, 3)?));
    Ok(())
}
