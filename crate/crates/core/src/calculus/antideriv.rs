//! The antiderivation `P_n` and `T_n = n! P_n ∘ ... ∘ P_1`.

use crate::error::{Error, Result};
use crate::field::{RingElem, Scalar};
use crate::funcspace::CnCombo;

/// `P_n f` for a combo of level at most `n - 1`, term by term:
/// `P_n (x-r)^k χ_r = (x-r)^{k+1} χ_r / (k+1)`. In the level basis the
/// coefficient at `(r, k)` moves to `(r, k+1)` divided by `k + 1`.
pub fn antiderive(f: &CnCombo, n: usize) -> Result<CnCombo> {
    if n == 0 {
        return Err(Error::InvalidArgument("P_n needs n >= 1".into()));
    }
    let params = f.params();
    params.check_order(n)?;
    let f = if f.level() < n - 1 {
        f.with_level(n - 1)?
    } else if f.level() == n - 1 {
        f.clone()
    } else {
        return Err(Error::InvalidArgument(format!(
            "P_{n} takes a level-{} combo, got level {}",
            n - 1,
            f.level()
        )));
    };
    let mut out = CnCombo::new(params, n, f.depth())?;
    for (r, k, c) in f.terms() {
        let v = c.div(&Scalar::from_i64(params, k as i64 + 1))?;
        out.add_term(r.clone(), k + 1, v)?;
    }
    Ok(out)
}

/// `P_n f(x)` by the digit sum
/// `Σ_{j<n} Σ_m f^{(j)}(x_m) / (j+1)! · (x_{m+1} - x_m)^{j+1}`, with
/// `f^{(j)} / (j+1)! = D_j f / (j+1)`. The sum over `m` stops at the last
/// nonzero digit of `x`, which is exact for the finite expansion `x`.
pub fn antiderive_digit_sum(f: &CnCombo, n: usize, x: &RingElem) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::InvalidArgument("P_n needs n >= 1".into()));
    }
    let params = f.params();
    params.check_order(n)?;
    if f.level() + 1 > n {
        return Err(Error::InvalidArgument(format!(
            "P_{n} takes a combo of level <= {}, got {}",
            n - 1,
            f.level()
        )));
    }
    let digits = x.digits();
    let len = digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
    let prefix = |m: usize| RingElem::new(&params, &digits[..m]);
    let mut acc = Scalar::zero(params);
    for (m, &digit) in digits.iter().enumerate().take(len) {
        if digit == 0 {
            continue;
        }
        let xm = prefix(m)?;
        let step = Scalar::from_i64(params, digit as i64).shift(m as i64);
        for j in 0..n {
            let d = f.taylor_coeff(j, &xm);
            if d.is_zero() {
                continue;
            }
            let t = d.div(&Scalar::from_i64(params, j as i64 + 1))?;
            acc = &acc + &(&t * &step.pow(j as u32 + 1));
        }
    }
    Ok(acc)
}

/// `T_n f = n! P_n(P_{n-1}(... P_1 f))` for a level-0 combo.
pub fn t_n(f: &CnCombo, n: usize) -> Result<CnCombo> {
    if f.level() != 0 {
        return Err(Error::InvalidArgument("T_n takes a level-0 combo".into()));
    }
    let params = f.params();
    params.check_order(n)?;
    let mut g = f.clone();
    for k in 1..=n {
        g = antiderive(&g, k)?;
    }
    g.scale(&Scalar::factorial(params, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Backend, FieldParams};
    use crate::reps::Rep;

    #[test]
    fn closed_form_examples() {
        let f = FieldParams::new(Backend::Zp, 3, 20).unwrap();
        let one = CnCombo::constant(f, Scalar::one(f)).unwrap();
        assert_eq!(antiderive(&one, 1).unwrap(), CnCombo::identity(f).unwrap());
        let r = Rep::from_u64(3, 5);
        let lin = CnCombo::new(f, 1, 2)
            .unwrap()
            .with_term(r.clone(), 1, Scalar::one(f))
            .unwrap();
        let p = antiderive(&lin, 2).unwrap();
        let half = Scalar::one(f).div(&Scalar::from_i64(f, 2)).unwrap();
        assert_eq!(p.coeff(&r, 2), half);
        assert_eq!(p.len(), 1);
        let zero = CnCombo::new(f, 1, 0).unwrap();
        assert!(antiderive(&zero, 2).unwrap().is_zero());
    }

    #[test]
    fn t_n_of_indicator() {
        let f = FieldParams::new(Backend::Zp, 5, 20).unwrap();
        let r = Rep::from_u64(5, 7);
        let chi = CnCombo::indicator(f, &r).unwrap();
        assert_eq!(t_n(&chi, 0).unwrap(), chi);
        for n in 1..=3 {
            let t = t_n(&chi, n).unwrap();
            assert_eq!(t.len(), 1);
            assert!(t.coeff(&r, n).agrees(&Scalar::one(f)));
        }
    }

    #[test]
    fn characteristic_guard() {
        let g = FieldParams::new(Backend::FpT, 3, 20).unwrap();
        let one = CnCombo::new(g, 2, 0).unwrap();
        assert!(matches!(
            antiderive(&one, 3),
            Err(Error::CharacteristicViolation { .. })
        ));
    }
}
