//! The individual checks. Each returns `Ok(None)` on success and a
//! description of the instance on failure.

use rand::Rng;

use crate::calculus::{
    antiderive, antiderive_digit_sum, expand_c0, extract_bnj, extract_bnj_to_depth,
    lipschitz_constant, lower_basis, lower_basis_signed, norm_cn_bruteforce, norm_n, phi,
    phi_sup_bruteforce, psi, psi_nj, raise_basis, sup_norm, t_n, BruteForceConfig,
};
use crate::classify::{is_isometry, is_pseudocontraction, monotone_type, Answer, Witness};
use crate::error::{Error, Result};
use crate::field::{AbsValue, Backend, RingElem, Scalar};
use crate::funcspace::CnCombo;
use crate::reps::Rep;
use crate::text::write_function;

use super::gen::Sampler as Gen;
use super::{Mutation, Suite, VerifyConfig};

pub(crate) static ALL: &[Suite] = &[
    Suite {
        name: "orthonormality",
        check: orthonormality,
        applicable: always,
    },
    Suite {
        name: "reconstruction",
        check: reconstruction,
        applicable: always,
    },
    Suite {
        name: "symmetry",
        check: symmetry,
        applicable: always,
    },
    Suite {
        name: "psi_three_point",
        check: psi_three_point,
        applicable: always,
    },
    Suite {
        name: "psi_chain",
        check: psi_chain,
        applicable: always,
    },
    Suite {
        name: "psi_derivative_split",
        check: psi_derivative_split,
        applicable: always,
    },
    Suite {
        name: "derivative_composition",
        check: derivative_composition,
        applicable: always,
    },
    Suite {
        name: "basis_change",
        check: basis_change,
        applicable: always,
    },
    Suite {
        name: "antiderivation",
        check: antiderivation,
        applicable: always,
    },
    Suite {
        name: "t_n_pattern",
        check: t_n_pattern,
        applicable: always,
    },
    Suite {
        name: "sup_bound",
        check: sup_bound,
        applicable: always,
    },
    Suite {
        name: "norm_bruteforce",
        check: norm_bruteforce,
        applicable: small_field,
    },
    Suite {
        name: "lipschitz",
        check: lipschitz,
        applicable: small_field,
    },
    Suite {
        name: "classifiers",
        check: classifiers,
        applicable: pair_field,
    },
    Suite {
        name: "characteristic",
        check: characteristic,
        applicable: always,
    },
];

fn always(_: &VerifyConfig) -> Option<String> {
    None
}

/// Largest `m` with `p^m <= 27`: the exhaustive probe depth for tuple sups.
fn probe_max(p: u32) -> usize {
    let mut m = 0;
    while (p as u64).pow(m as u32 + 1) <= 27 {
        m += 1;
    }
    m
}

fn small_field(cfg: &VerifyConfig) -> Option<String> {
    (probe_max(cfg.params.p()) < 2).then(|| "p^2 > 27, exhaustive probe too large".to_string())
}

/// Largest combo depth whose pairwise check over `R_{m+2}` stays within 81 points.
fn pair_depth_max(p: u32) -> Option<usize> {
    let mut d = None;
    let mut m = 0usize;
    while (p as u64).pow(m as u32 + 2) <= 81 {
        d = Some(m);
        m += 1;
    }
    d
}

fn pair_field(cfg: &VerifyConfig) -> Option<String> {
    pair_depth_max(cfg.params.p())
        .is_none()
        .then(|| "p^2 > 81, pairwise check too large".to_string())
}

fn desc(f: &CnCombo) -> String {
    write_function(f).trim_end().replace('\n', " | ")
}

fn same_combo(a: &CnCombo, b: &CnCombo) -> Result<bool> {
    Ok(a.sub(b)?.is_zero())
}

fn orthonormality(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let n = g.level(1, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(n, d);
    let want = f
        .terms()
        .map(|(_, _, c)| c.abs())
        .max()
        .unwrap_or(AbsValue::zero(g.params.q()));
    let got = norm_n(&f, n)?;
    Ok((got != want).then(|| format!("norm_{n} = {got} but max |c| = {want} for {}", desc(&f))))
}

fn reconstruction(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let n = g.level(0, cfg.level_cap());
    let l = g.level(0, n);
    let d = g.depth(cfg.max_depth);
    let f = g.combo(l, d);
    let h = extract_bnj(&f, n)?.rebuild()?;
    for x in g.distinct_points(cfg.points.max(1), d) {
        let (a, b) = (f.eval(&x), h.eval(&x));
        if !a.agrees(&b) {
            return Ok(Some(format!(
                "level {n}: f({x}) = {a}, rebuilt {b}, f = {}",
                desc(&f)
            )));
        }
    }
    Ok(None)
}

fn symmetry(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let k = g.level(1, 3);
    let d = g.depth(cfg.max_depth);
    let level = g.level(0, cfg.level_cap());
    let f = g.combo(level, d);
    let pts = g.distinct_points(k + 1, d);
    let mut perm = pts.clone();
    g.shuffle(&mut perm);
    let (a, b) = (phi(&f, &pts)?, phi(&f, &perm)?);
    Ok((!a.agrees(&b)).then(|| format!("Φ_{k} not symmetric: {a} vs {b}, f = {}", desc(&f))))
}

fn diff(params: crate::field::FieldParams, x: &RingElem, y: &RingElem) -> Scalar {
    &x.to_scalar(params) - &y.to_scalar(params)
}

/// `ψ_n f(x,y) = ((x-z)/(x-y))^{n+1} ψ_n f(x,z) - Σ_{l<=n} ((y-z)/(x-y))^{n+1-l} ψ_{n-l} D_l f(y,z)`.
fn psi_three_point(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let n = g.level(0, cfg.level_cap());
    let level = g.level(n, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(level, d);
    let pts = g.distinct_points(3, d);
    let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
    let xy = diff(params, x, y);
    let lhs = psi(&f, n, x, y)?;
    let mut rhs = &diff(params, x, z).div(&xy)?.pow(n as u32 + 1) * &psi(&f, n, x, z)?;
    let ratio = diff(params, y, z).div(&xy)?;
    for l in 0..=n {
        let dl = f.derivative(l)?;
        rhs = &rhs - &(&ratio.pow((n + 1 - l) as u32) * &psi(&dl, n - l, y, z)?);
    }
    Ok((!lhs.agrees(&rhs)).then(|| {
        format!(
            "n={n} {x} {y} {z}: ψ_n f(x,y) = {lhs}, right side {rhs}, f = {}",
            desc(&f)
        )
    }))
}

/// `m` points: either a predecessor chain `t_1 ◁ ... ◁ t_m` or arbitrary
/// distinct points.
fn chain_points(g: &mut Gen, m: usize, d: usize) -> Vec<RingElem> {
    if g.rng.gen_bool(0.5) {
        let len = m - 1 + g.rng.gen_range(0..=2);
        let digits: Vec<u8> = (0..len).map(|_| g.nonzero_digit()).collect();
        let ancestors = Rep::from_digits(&digits).ancestors();
        let start = g.rng.gen_range(0..=ancestors.len() - m);
        ancestors[start..start + m]
            .iter()
            .map(|r| r.to_ring(&g.params))
            .collect()
    } else {
        g.distinct_points(m, d)
    }
}

/// `ψ_n f(t_m, t_1)` as a weighted sum of quotients over consecutive points,
/// with weights summing to 1.
fn psi_chain(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let n = g.level(0, cfg.level_cap());
    let level = g.level(n, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(level, d);
    let m = g.rng.gen_range(2..=5usize);
    let t = chain_points(g, m, d);
    let span = diff(params, &t[m - 1], &t[0]);
    let span_pow = span.pow(n as u32 + 1);
    // t is 0-based here: t[j - 1] is t_j.
    let lambda = |j: usize| -> Result<Scalar> {
        Ok(diff(params, &t[j - 1], &t[j - 2])
            .div(&span)?
            .pow(n as u32 + 1))
    };
    let mu = |l: usize, j: usize| -> Result<Scalar> {
        let a = diff(params, &t[j - 1], &t[j - 2]).pow(l as u32);
        let b = diff(params, &t[j - 2], &t[0]).pow((n + 1 - l) as u32);
        (&a * &b).div(&span_pow)
    };
    let lhs = psi(&f, n, &t[m - 1], &t[0])?;
    let mut rhs = Scalar::zero(params);
    let mut unity = Scalar::zero(params);
    for j in 2..=m {
        let lj = lambda(j)?;
        rhs = &rhs + &(&lj * &psi(&f, n, &t[j - 1], &t[j - 2])?);
        unity = &unity + &lj;
    }
    for l in 1..=n {
        let dl = f.derivative(l)?;
        for j in 3..=m {
            let mlj = mu(l, j)?;
            rhs = &rhs + &(&mlj * &psi(&dl, n - l, &t[j - 2], &t[0])?);
            unity = &unity + &(&Scalar::binomial(params, n + 1, l) * &mlj);
        }
    }
    let pts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    if !lhs.agrees(&rhs) {
        return Ok(Some(format!(
            "chain identity, n={n} points [{}]: {lhs} vs {rhs}, f = {}",
            pts.join(" "),
            desc(&f)
        )));
    }
    if !unity.agrees(&Scalar::one(params)) {
        return Ok(Some(format!(
            "partition of unity, n={n} points [{}]: sum = {unity}",
            pts.join(" ")
        )));
    }
    Ok(None)
}

/// `ψ_{n-j} D_j f(x,y) = Σ_{i=1}^{j+1} C(n+1-i, n-j) ψ_{n,i} f(x,y)`.
fn psi_derivative_split(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let n = g.level(1, cfg.level_cap());
    let level = g.level(n, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(level, d);
    let j = g.level(1, n);
    let pts = g.distinct_points(2, d);
    let (x, y) = (&pts[0], &pts[1]);
    let lhs = psi(&f.derivative(j)?, n - j, x, y)?;
    let mut rhs = Scalar::zero(params);
    for i in 1..=j + 1 {
        rhs = &rhs + &(&Scalar::binomial(params, n + 1 - i, n - j) * &psi_nj(&f, n, i, x, y)?);
    }
    Ok((!lhs.agrees(&rhs))
        .then(|| format!("n={n} j={j} {x} {y}: {lhs} vs {rhs}, f = {}", desc(&f))))
}

/// `D_j D_{n-j} f = C(n,j) D_n f`.
fn derivative_composition(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let n = g.level(1, cfg.level_cap());
    let level = g.level(n, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(level, d);
    let j = g.level(0, n);
    let lhs = f.derivative(n - j)?.derivative(j)?;
    let rhs = f.derivative(n)?.scale(&Scalar::binomial(g.params, n, j))?;
    Ok((!same_combo(&lhs, &rhs)?).then(|| {
        format!(
            "n={n} j={j}: D_j D_(n-j) f != C(n,j) D_n f for {}",
            desc(&f)
        )
    }))
}

fn basis_change(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let n = g.level(1, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(n, d);
    let t = extract_bnj(&f, n)?;
    let lowered = match cfg.mutation {
        Mutation::None => lower_basis(&t, d + 1)?,
        Mutation::LowerBasisSign => lower_basis_signed(&t, d + 1, -1)?,
    };
    let direct = extract_bnj_to_depth(&f, n - 1, d + 1)?;
    if !lowered.agrees(&direct) {
        return Ok(Some(format!(
            "lowering the level-{n} table disagrees with direct level-{} extraction for {}",
            n - 1,
            desc(&f)
        )));
    }
    let dn = expand_c0(&f.derivative(n)?, d + 1)?;
    let raised = raise_basis(&lowered, &dn)?;
    Ok((!raised.agrees(&t)).then(|| format!("raise(lower(t)) != t at level {n} for {}", desc(&f))))
}

fn antiderivation(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let n = g.level(1, cfg.level_cap());
    let l = g.level(0, n - 1);
    let d = g.depth(cfg.max_depth);
    let f = g.combo(l, d);
    let pf = antiderive(&f, n)?;
    let fd = &desc(&f);

    let x = g.rep(d + 3).to_ring(&params);
    let (a, b) = (pf.eval(&x), antiderive_digit_sum(&f, n, &x)?);
    if !a.agrees(&b) {
        return Ok(Some(format!(
            "P_{n} closed form {a} vs digit sum {b} at {x}, f = {fd}"
        )));
    }

    let lifted = if f.level() < n - 1 {
        f.with_level(n - 1)?
    } else {
        f.clone()
    };
    if !same_combo(&pf.derivative(1)?, &lifted)? {
        return Ok(Some(format!("D_1 P_{n} f != f for {fd}")));
    }

    for r in Rep::enumerate(params.p(), 3).into_iter().skip(1) {
        let rm = r.predecessor()?;
        let (xr, xm) = (r.to_ring(&params), rm.to_ring(&params));
        let lhs = &pf.eval(&xr) - &pf.eval(&xm);
        let gamma = r.gamma(params);
        let mut rhs = Scalar::zero(params);
        for j in 1..=n {
            let t = f
                .taylor_coeff(j - 1, &xm)
                .div(&Scalar::from_i64(params, j as i64))?;
            rhs = &rhs + &(&gamma.pow(j as u32) * &t);
        }
        if !lhs.agrees(&rhs) {
            return Ok(Some(format!(
                "telescope at {r}: {lhs} vs {rhs}, n={n}, f = {fd}"
            )));
        }
    }

    let scaled = f.scale(&Scalar::factorial(params, n)?.inv()?)?;
    let (pn, bound) = (norm_n(&pf, n)?, norm_n(&scaled, n - 1)?);
    Ok((pn > bound).then(|| {
        format!(
            "|P_{n} f|_{n} = {pn} > |f/{n}!|_{} = {bound}, f = {fd}",
            n - 1
        )
    }))
}

fn t_n_pattern(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let n = g.level(1, cfg.level_cap());
    let r0 = g.rep(cfg.max_depth);
    let tn = t_n(&CnCombo::indicator(params, &r0)?, n)?;
    if tn.len() != 1 || !tn.coeff(&r0, n).agrees(&Scalar::one(params)) {
        return Ok(Some(format!(
            "T_{n} χ at {r0} is not (x-r0)^n χ: {}",
            desc(&tn)
        )));
    }
    let depth = r0.length() + 2;
    let table = extract_bnj_to_depth(&tn, n - 1, depth)?;
    for r in Rep::enumerate(params.p(), depth) {
        for j in 0..n {
            let want = if !r.is_zero() && r0.precedes_rep(&r.predecessor()?) {
                &Scalar::binomial(params, n, j) * &r.gamma(params)
            } else {
                Scalar::zero(params)
            };
            let got = table.get(&r, j);
            if !got.agrees(&want) {
                return Ok(Some(format!(
                    "T_{n} χ at {r0}: b at {r} j={j} is {got}, expected {want}"
                )));
            }
        }
    }
    let fd = g.depth(cfg.max_depth);
    let f = g.combo(0, fd);
    let (a, b) = (norm_n(&t_n(&f, n)?, n)?, sup_norm(&f)?);
    Ok((a != b).then(|| format!("|T_{n} f|_{n} = {a} but |f|_sup = {b}, f = {}", desc(&f))))
}

fn sup_bound(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let n = g.level(1, cfg.level_cap());
    let d = g.depth(cfg.max_depth);
    let f = g.combo(n, d);
    let low = sup_norm(&f.derivative(n)?)?;
    let mut mid = AbsValue::zero(params.q());
    for r in Rep::enumerate(params.p(), d + 1).into_iter().skip(1) {
        let v = psi(
            &f,
            n - 1,
            &r.to_ring(&params),
            &r.predecessor()?.to_ring(&params),
        )?;
        mid = mid.max(v.abs());
    }
    let high = norm_n(&f, n)?;
    Ok((low > mid || mid > high).then(|| {
        format!(
            "n={n}: |D_n f|_sup = {low}, sup ψ = {mid}, |f|_n = {high}, f = {}",
            desc(&f)
        )
    }))
}

/// Largest tuple count enumerated per probe in the norm suite.
const NORM_TUPLES: u128 = 5_000;

fn tuples(p: u32, probe: usize, n: usize) -> u128 {
    let m = (p as u128).pow(probe as u32);
    (0..=n as u128).fold(1, |acc, i| acc * (m.saturating_sub(i)) / (i + 1))
}

fn norm_bruteforce(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let p = g.params.p();
    let pm = probe_max(p);
    let mut n = g.level(1, cfg.level_cap());
    while n > 1 && tuples(p, 2, n) > NORM_TUPLES {
        n -= 1;
    }
    let dmax = (0..=cfg.max_depth.min(pm - 2))
        .rev()
        .find(|&d| tuples(p, d + 2, n) <= NORM_TUPLES)
        .unwrap_or(0);
    let d = g.depth(dmax);
    let f = g.combo(n, d);
    let norm = norm_n(&f, n)?;
    let bf = BruteForceConfig::default();
    let mut prev = AbsValue::zero(g.params.q());
    for probe in d..=d + 2 {
        let b = norm_cn_bruteforce(&f, n, probe, &bf)?.value;
        if b < prev || b > norm || (probe == d + 2 && b != norm) {
            return Ok(Some(format!(
                "probe {probe}: brute force {b} (previous {prev}), |f|_{n} = {norm}, f = {}",
                desc(&f)
            )));
        }
        prev = b;
    }
    Ok(None)
}

fn lipschitz(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let probe = probe_max(g.params.p());
    let n = g.level(1, cfg.level_cap().min(2));
    let d = g.depth(cfg.max_depth.min(probe - 2));
    let f = g.combo(n, d);
    let a = lipschitz_constant(&f, n)?;
    let b = phi_sup_bruteforce(&f, n, probe, &BruteForceConfig::default())?.value;
    Ok((a != b).then(|| {
        format!(
            "n={n}: A_f = {a}, max |Φ_n f| over R_{probe} = {b}, f = {}",
            desc(&f)
        )
    }))
}

/// A level-1 combo built around a multiple of `x`, so that all three
/// classifier answers occur.
fn classifier_combo(g: &mut Gen, d: usize) -> Result<CnCombo> {
    let params = g.params;
    let mut f = CnCombo::new(params, 1, d)?;
    let slope = if g.rng.gen_bool(0.5) {
        Scalar::one(params)
    } else {
        g.nonzero_scalar(0, 1)
    };
    f.add_term(Rep::zero(), 1, slope)?;
    for _ in 0..g.rng.gen_range(0..=3) {
        let r = g.rep(d);
        let j = usize::from(g.rng.gen_ratio(1, 4));
        let c = g.nonzero_scalar(0, 1);
        f.add_term(r, j, c)?;
    }
    Ok(f)
}

fn classifiers(g: &mut Gen, cfg: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let q = params.q();
    let one_abs = AbsValue::one(q);
    let d = g.depth(cfg.max_depth.min(pair_depth_max(params.p()).unwrap_or(0)));
    let f = classifier_combo(g, d)?;
    let fd = desc(&f);
    let one = Scalar::one(params);
    let pts: Vec<(RingElem, Scalar)> = Rep::enumerate(params.p(), d + 2)
        .iter()
        .map(|r| {
            let x = r.to_ring(&params);
            let v = f.eval(&x);
            (x, v)
        })
        .collect();
    let (mut incr, mut iso, mut pseudo) = (true, true, true);
    for (i, (x, fx)) in pts.iter().enumerate() {
        for (y, fy) in &pts[i + 1..] {
            let h = diff(params, x, y);
            let dv = fx - fy;
            let q1 = dv.div(&h)?;
            incr &= (&q1 - &one).abs() < one_abs;
            iso &= dv.abs() == h.abs();
            pseudo &= q1.abs() < one_abs;
        }
    }
    let mono = monotone_type(&f, &one)?;
    let isov = is_isometry(&f)?;
    let pc = is_pseudocontraction(&f)?;
    for (name, v, brute) in [
        ("increasing", &mono, incr),
        ("isometry", &isov, iso),
        ("pseudocontraction", &pc, pseudo),
    ] {
        if v.is_yes() != brute {
            return Ok(Some(format!(
                "{name}: classifier {v}, pairwise check {brute}, f = {fd}"
            )));
        }
        if v.answer == Answer::No {
            let bad = match &v.witness {
                Some(Witness::Rep(r)) => {
                    let (xr, xm) = (r.to_ring(&params), r.predecessor()?.to_ring(&params));
                    let dv = &f.eval(&xr) - &f.eval(&xm);
                    let ratio = dv.div(&r.gamma(params))?;
                    match name {
                        "increasing" => (&ratio - &one).abs() >= one_abs,
                        "isometry" => ratio.abs() != one_abs,
                        _ => ratio.abs() >= one_abs,
                    }
                }
                Some(Witness::Pair(a, b)) => {
                    let (xa, xb) = (a.to_ring(&params), b.to_ring(&params));
                    (&f.eval(&xa) - &f.eval(&xb)).abs() != diff(params, &xa, &xb).abs()
                }
                None => false,
            };
            if !bad {
                return Ok(Some(format!(
                    "{name}: witness in {v} does not violate the criterion, f = {fd}"
                )));
            }
        }
    }
    if pc.is_yes() && lipschitz_constant(&f, 1)? >= one_abs {
        return Ok(Some(format!("pseudocontraction with A_f >= 1, f = {fd}")));
    }
    if mono.is_yes() && !isov.is_yes() {
        return Ok(Some(format!("increasing but not an isometry, f = {fd}")));
    }
    Ok(None)
}

fn characteristic(g: &mut Gen, _: &VerifyConfig) -> Result<Option<String>> {
    let params = g.params;
    let p = params.p() as usize;
    let n = g.level(1, p + 1);
    let reject = params.backend() == Backend::FpT && n >= p;
    let x = CnCombo::identity(params)?;
    let chi = CnCombo::constant(params, Scalar::one(params))?;
    let outcomes: [(&str, Result<()>); 5] = [
        ("level", CnCombo::new(params, n, 0).map(drop)),
        ("factorial", Scalar::factorial(params, n).map(drop)),
        ("T_n", t_n(&chi, n).map(drop)),
        ("norm", norm_n(&x, n).map(drop)),
        ("extract", extract_bnj_to_depth(&x, n, 1).map(drop)),
    ];
    for (what, r) in outcomes {
        let ok = matches!(
            (&r, reject),
            (Err(Error::CharacteristicViolation { .. }), true) | (Ok(()), false)
        );
        if !ok {
            return Ok(Some(format!(
                "{what} with n={n}: expected {}, got {r:?}",
                if reject { "rejection" } else { "acceptance" }
            )));
        }
    }
    Ok(None)
}
