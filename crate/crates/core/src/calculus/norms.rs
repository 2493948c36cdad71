//! The coefficient norms `|f|_n`, Lipschitz constants, and brute-force
//! evaluation of `|f|_{C^n} = max_{k<=n} |Φ_k f|_sup` at finite depth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{AbsValue, FieldParams, RingElem, Scalar};
use crate::funcspace::{CnCombo, Evaluator};
use crate::reps::Rep;

use super::coeffs::extract_bnj_to_depth;
use super::quotients::divided_difference;

/// Tuples examined exhaustively when their count is at most this.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// `|f|_sup` for a locally constant combo (local degree 0): the largest leaf
/// value. Higher local degree is rejected because the supremum of a
/// polynomial over a disk is not determined by its coefficients alone.
pub fn sup_norm(f: &CnCombo) -> Result<AbsValue> {
    let q = f.params().q();
    let mut best = AbsValue::zero(q);
    for leaf in f.leaf_normal_form() {
        match leaf.degree() {
            None => {}
            Some(0) => best = best.max(leaf.coeffs[0].abs()),
            Some(d) => {
                return Err(Error::InvalidArgument(format!(
                    "sup norm needs a locally constant combo, leaf {} has degree {d}",
                    leaf.leaf
                )))
            }
        }
    }
    Ok(best)
}

/// `sup |b_r^{n-1,j}(f) γ_r^{-1}|` over the given representatives.
fn level_sup(f: &CnCombo, n: usize, skip_zero: bool) -> Result<AbsValue> {
    let params = f.params();
    let q = params.q();
    let Some(degree) = f.local_degree() else {
        return Ok(AbsValue::zero(q));
    };
    if degree > n {
        return Err(Error::InvalidArgument(format!(
            "local degree {degree} exceeds n = {n}; only combos of local degree <= n \
             have a finitely attained level-(n-1) supremum"
        )));
    }
    // Below the combo depth the level-(n-1) entries over a leaf are constant
    // (C(n, j) times the leaf's degree-n coefficient), and one extra layer
    // already reaches every leaf.
    let depth = (f.depth() + 1).min(params.precision() as usize);
    let table = extract_bnj_to_depth(f, n - 1, depth)?;
    let mut best = AbsValue::zero(q);
    for (r, _, v) in table.entries() {
        if skip_zero && r.is_zero() {
            continue;
        }
        let g = r.gamma(params).abs();
        best = best.max(v.abs().times(&inverse(&g)));
    }
    Ok(best)
}

fn inverse(a: &AbsValue) -> AbsValue {
    let v = a.valuation().expect("γ_r is nonzero");
    AbsValue::q_pow(a.q(), v)
}

/// `|f|_n = sup_{r ∈ R, j < n} |b_r^{n-1,j} γ_r^{-1}|` for `n >= 1`; the sup
/// norm for `n = 0`.
pub fn norm_n(f: &CnCombo, n: usize) -> Result<AbsValue> {
    f.params().check_order(n)?;
    if n == 0 {
        return sup_norm(f);
    }
    level_sup(f, n, false)
}

/// `A_f = sup_{r ∈ R_+, j < n} |b_r^{n-1,j} γ_r^{-1}|`, the `n`-th Lipschitz
/// constant.
pub fn lipschitz_constant(f: &CnCombo, n: usize) -> Result<AbsValue> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Lipschitz constant needs n >= 1".into(),
        ));
    }
    f.params().check_order(n)?;
    level_sup(f, n, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceConfig {
    /// Largest tuple count enumerated exhaustively; also the sample count
    /// when sampling.
    pub budget: u64,
    pub seed: u64,
    pub allow_sampling: bool,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        BruteForceConfig {
            budget: DEFAULT_BUDGET,
            seed: 0,
            allow_sampling: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupReport {
    pub value: AbsValue,
    /// True when every tuple was examined.
    pub exhaustive: bool,
    pub tuples: u128,
    /// Seed used when sampling was needed.
    pub seed: Option<u64>,
}

fn binom_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn legendre(n: usize, p: u32) -> usize {
    let mut v = 0;
    let mut pk = p as usize;
    while pk <= n {
        v += n / pk;
        pk *= p as usize;
    }
    v
}

/// Refuses to start when `N <= k·m' + k·v(k!)`, the worst-case digit loss of
/// `Φ_k` over `R_{m'}`.
pub fn check_precision(params: &FieldParams, k: usize, probe: usize) -> Result<()> {
    let need = k * probe + k * legendre(k, params.p());
    if (params.precision() as usize) <= need {
        return Err(Error::PrecisionExhausted(format!(
            "Φ_{k} over R_{probe} needs precision N > {need}, have {}",
            params.precision()
        )));
    }
    Ok(())
}

/// `max |Φ_k f|` over pairwise distinct `(k+1)`-tuples from `R_{m'}`.
/// Tuples are unordered (`Φ_k` is symmetric). The search runs on the current
/// rayon pool; its result does not depend on the number of threads.
pub fn phi_sup_bruteforce(
    f: &dyn Evaluator,
    k: usize,
    probe: usize,
    cfg: &BruteForceConfig,
) -> Result<SupReport> {
    let params = f.params();
    check_precision(&params, k, probe)?;
    let q = params.q();
    let npts = (params.p() as u128)
        .checked_pow(probe as u32)
        .unwrap_or(u128::MAX);
    let count = binom_u128(npts, k as u128 + 1);
    if count <= cfg.budget as u128 {
        return exhaustive_sup(f, k, probe, count);
    }
    if !cfg.allow_sampling {
        return Err(Error::BudgetExceeded {
            count,
            budget: cfg.budget,
        });
    }
    // Points are drawn digit by digit so that R_{m'} is never materialized.
    const CHUNK: u64 = 4096;
    let chunks = cfg.budget.div_ceil(CHUNK);
    let p = params.p();
    let value = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<AbsValue> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c);
            let mut best = AbsValue::zero(q);
            let n = CHUNK.min(cfg.budget - c * CHUNK);
            for _ in 0..n {
                let mut pts: Vec<RingElem> = Vec::with_capacity(k + 1);
                while pts.len() < k + 1 {
                    let digits: Vec<u8> = (0..probe).map(|_| rng.gen_range(0..p) as u8).collect();
                    let x = RingElem::new(&params, &digits)?;
                    if !pts.contains(&x) {
                        pts.push(x);
                    }
                }
                let xs: Vec<Scalar> = pts.iter().map(|x| x.to_scalar(params)).collect();
                let vs = pts.iter().map(|x| f.eval(x)).collect::<Result<Vec<_>>>()?;
                best = best.max(divided_difference(&xs, &vs)?.abs());
            }
            Ok(best)
        })
        .try_reduce(|| AbsValue::zero(q), |a, b| Ok(a.max(b)))?;
    Ok(SupReport {
        value,
        exhaustive: false,
        tuples: cfg.budget as u128,
        seed: Some(cfg.seed),
    })
}

fn exhaustive_sup(f: &dyn Evaluator, k: usize, probe: usize, count: u128) -> Result<SupReport> {
    let params = f.params();
    let q = params.q();
    let pts: Vec<RingElem> = Rep::enumerate(params.p(), probe)
        .iter()
        .map(|r| r.to_ring(&params))
        .collect();
    let xs: Vec<Scalar> = pts.iter().map(|x| x.to_scalar(params)).collect();
    let vs: Vec<Scalar> = pts
        .par_iter()
        .map(|x| f.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let npts = pts.len();
    let eval_tuple = |idx: &[usize]| -> Result<AbsValue> {
        let p: Vec<Scalar> = idx.iter().map(|&i| xs[i].clone()).collect();
        let v: Vec<Scalar> = idx.iter().map(|&i| vs[i].clone()).collect();
        Ok(divided_difference(&p, &v)?.abs())
    };
    let value = (0..npts)
        .into_par_iter()
        .map(|first| -> Result<AbsValue> {
            let mut best = AbsValue::zero(q);
            let mut idx = vec![first];
            for_each_combination(first + 1, npts, k, &mut idx, &mut |t| {
                best = best.max(eval_tuple(t)?);
                Ok(())
            })?;
            Ok(best)
        })
        .try_reduce(|| AbsValue::zero(q), |a, b| Ok(a.max(b)))?;
    Ok(SupReport {
        value,
        exhaustive: true,
        tuples: count,
        seed: None,
    })
}

fn for_each_combination(
    start: usize,
    n: usize,
    remaining: usize,
    idx: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if remaining == 0 {
        return visit(idx);
    }
    for i in start..n {
        idx.push(i);
        for_each_combination(i + 1, n, remaining - 1, idx, visit)?;
        idx.pop();
    }
    Ok(())
}

/// `max_{k <= n} max |Φ_k f|` over distinct tuples from `R_{m'}`.
pub fn norm_cn_bruteforce(
    f: &dyn Evaluator,
    n: usize,
    probe: usize,
    cfg: &BruteForceConfig,
) -> Result<SupReport> {
    let q = f.params().q();
    let mut out = SupReport {
        value: AbsValue::zero(q),
        exhaustive: true,
        tuples: 0,
        seed: None,
    };
    for k in 0..=n {
        let r = phi_sup_bruteforce(f, k, probe, cfg)?;
        out.value = out.value.max(r.value);
        out.exhaustive &= r.exhaustive;
        out.tuples += r.tuples;
        out.seed = out.seed.or(r.seed);
    }
    Ok(out)
}
