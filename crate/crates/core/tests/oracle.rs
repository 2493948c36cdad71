//! Cross-checks against independent oracles built from exact integer and
//! rational arithmetic. Representatives are the integers `0..p^m`, whose
//! base-`p` digits are the digit strings. Values checked here first against
//! an oracle are then frozen as literals.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_wavelet::calculus::{antiderive, estimate_dj, expand_c0, phi};
use padic_wavelet::{Backend, CnCombo, FieldParams, FnEvaluator, Rep, RingElem, Scalar};

type Q = Ratio<i128>;

fn zp(p: u32) -> FieldParams {
    FieldParams::new(Backend::Zp, p, 20).unwrap()
}

fn digits(mut n: u64, p: u64) -> Vec<u8> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % p) as u8);
        n /= p;
    }
    out
}

fn length(r: u64, p: u64) -> u32 {
    digits(r, p).len() as u32
}

fn predecessor(r: u64, p: u64) -> u64 {
    r % p.pow(length(r, p).saturating_sub(1))
}

fn gamma(r: u64, p: u64) -> u64 {
    if r == 0 {
        1
    } else {
        r - predecessor(r, p)
    }
}

fn chi(r: u64, x: u64, p: u64) -> bool {
    (x as i128 - r as i128).rem_euclid(p.pow(length(r, p)) as i128) == 0
}

fn binomial(n: u32, k: u32) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `Σ c γ_r^{n-j} (x-r)^j χ_r(x)` over integer `x`.
#[derive(Clone)]
struct Terms {
    p: u64,
    level: u32,
    terms: Vec<(u64, u32, Q)>,
}

impl Terms {
    fn random(rng: &mut ChaCha8Rng, p: u64, level: u32, depth: u32) -> Self {
        let count = rng.gen_range(1..=5);
        let terms = (0..count)
            .map(|_| {
                let r = rng.gen_range(0..p.pow(depth));
                let j = rng.gen_range(0..=level);
                let num = rng.gen_range(-20i128..=20);
                let den = [1i128, 2, 3, 4, 5, 7][rng.gen_range(0..6)];
                (r, j, Q::new(num, den))
            })
            .collect();
        Terms { p, level, terms }
    }

    fn eval(&self, x: u64) -> Q {
        self.eval_derivative(0, x)
    }

    /// `D_k` of every term, then evaluated: `C(j,k) (x-r)^{j-k}`.
    fn eval_derivative(&self, k: u32, x: u64) -> Q {
        let mut acc = Q::from_integer(0);
        for &(r, j, c) in &self.terms {
            if j < k || !chi(r, x, self.p) {
                continue;
            }
            let g = Q::from_integer(gamma(r, self.p) as i128).pow((self.level - j) as i32);
            let h = Q::from_integer(x as i128 - r as i128).pow((j - k) as i32);
            acc += c * g * h * Q::from_integer(binomial(j, k));
        }
        acc
    }

    /// The level-`n+1` antiderivative `Σ c/(j+1) γ_r^{n-j} (x-r)^{j+1} χ_r`.
    fn eval_antiderivative(&self, x: u64) -> Q {
        let mut acc = Q::from_integer(0);
        for &(r, j, c) in &self.terms {
            if chi(r, x, self.p) {
                let g = Q::from_integer(gamma(r, self.p) as i128).pow((self.level - j) as i32);
                let h = Q::from_integer(x as i128 - r as i128).pow(j as i32 + 1);
                acc += c * g * h / Q::from_integer(j as i128 + 1);
            }
        }
        acc
    }

    fn combo(&self, params: FieldParams, depth: usize) -> CnCombo {
        let mut f = CnCombo::new(params, self.level as usize, depth).unwrap();
        for &(r, j, c) in &self.terms {
            f.add_term(
                Rep::from_u64(self.p as u32, r),
                j as usize,
                scalar(params, c),
            )
            .unwrap();
        }
        f
    }
}

fn scalar(params: FieldParams, q: Q) -> Scalar {
    let n = Scalar::from_i64(params, *q.numer() as i64);
    n.div(&Scalar::from_i64(params, *q.denom() as i64)).unwrap()
}

fn ring(params: FieldParams, x: u64) -> RingElem {
    RingElem::from_u64(&params, x)
}

/// Newton divided difference over distinct integers.
fn divided_difference(xs: &[i128], vs: &[Q]) -> Q {
    if xs.len() == 1 {
        return vs[0];
    }
    let k = xs.len() - 1;
    let a = divided_difference(&xs[1..], &vs[1..]);
    let b = divided_difference(&xs[..k], &vs[..k]);
    (a - b) / Q::from_integer(xs[k] - xs[0])
}

#[test]
fn tree_operations_match_integer_oracle() {
    for p in [2u64, 3, 5] {
        for r in 0..p.pow(4) {
            let rep = Rep::from_u64(p as u32, r);
            assert_eq!(rep.length(), length(r, p) as usize);
            assert_eq!(rep.digits(), &digits(r, p)[..]);
            let params = zp(p as u32);
            assert!(rep
                .gamma(params)
                .agrees(&Scalar::from_i64(params, gamma(r, p) as i64)));
            if r != 0 {
                assert_eq!(
                    rep.predecessor().unwrap(),
                    Rep::from_u64(p as u32, predecessor(r, p))
                );
            }
            for x in [0, 1, r, r + 7, 3 * r + 2] {
                assert_eq!(
                    rep.precedes(&ring(params, x)),
                    chi(r, x, p),
                    "p={p} r={r} x={x}"
                );
            }
        }
        for m in 0..4u32 {
            let mut got: Vec<u64> = Rep::enumerate(p as u32, m as usize)
                .iter()
                .map(|r| r.digits().iter().rev().fold(0u64, |a, &d| a * p + d as u64))
                .collect();
            let lengths: Vec<u32> = got.iter().map(|&r| length(r, p)).collect();
            assert!(lengths.windows(2).all(|w| w[0] <= w[1]));
            got.sort_unstable();
            assert_eq!(got, (0..p.pow(m)).collect::<Vec<_>>());
        }
    }
}

#[test]
fn tree_examples() {
    let r = |n| Rep::from_u64(3, n);
    // Oracle first, then the library.
    assert_eq!(
        (
            length(5, 3),
            length(2, 3),
            predecessor(5, 3),
            predecessor(4, 3)
        ),
        (2, 1, 2, 1)
    );
    assert_eq!((gamma(5, 3), gamma(2, 3), gamma(0, 3)), (3, 2, 1));
    assert_eq!((r(5).length(), r(2).length(), r(0).length()), (2, 1, 0));
    assert_eq!(r(5).predecessor().unwrap(), r(2));
    assert_eq!(r(4).predecessor().unwrap(), r(1));
    assert!(r(2).precedes_rep(&r(5)));
    assert!(!r(1).precedes_rep(&r(5)));
    assert_eq!(Rep::chain(&r(0), &r(5)).unwrap(), vec![r(0), r(2), r(5)]);
    let b = |n| Rep::from_u64(2, n);
    assert_eq!(Rep::chain(&b(1), &b(7)).unwrap(), vec![b(1), b(3), b(7)]);
    assert_eq!(Rep::common_prefix(&r(5), &r(2)).unwrap(), r(2));
    assert_eq!(Rep::common_prefix(&r(1), &r(2)).unwrap(), r(0));
    assert_eq!(Rep::common_prefix(&b(3), &b(1)).unwrap(), b(1));
    assert!(chi(1, 4, 3) && !chi(1, 2, 3));
}

#[test]
fn scalar_examples() {
    let f = zp(3);
    assert_eq!(digits(5 + 4, 3), vec![0, 0, 1]);
    assert_eq!(
        (&Scalar::from_i64(f, 5) + &Scalar::from_i64(f, 4))
            .ring_digits(3)
            .unwrap(),
        vec![0, 0, 1]
    );

    let f4 = FieldParams::new(Backend::Zp, 3, 4).unwrap();
    let inv = (1..81).find(|k| 2 * k % 81 == 1).unwrap();
    assert_eq!(digits(inv, 3), vec![2, 1, 1, 1]);
    let half = Scalar::one(f4).div(&Scalar::from_i64(f4, 2)).unwrap();
    assert_eq!(
        (half.valuation(), half.unit_digits()),
        (Some(0), Some(vec![2, 1, 1, 1]))
    );

    let nine = Scalar::from_i64(f, 9);
    assert_eq!(nine.valuation(), Some(2));
    assert_eq!(
        nine.div(&Scalar::from_i64(f, 3)).unwrap().valuation(),
        Some(1)
    );
    let six = Scalar::factorial(f, 3).unwrap();
    assert!(six.agrees(&Scalar::from_i64(f, (1..=3).product())));
    assert_eq!(six.valuation(), Some(1));

    // F_3[[t]]: digit-wise addition without carries.
    let t = FieldParams::new(Backend::FpT, 3, 8).unwrap();
    let (a, b) = ([1u8, 2], [2u8, 2]);
    let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| (x + y) % 3).collect();
    assert_eq!(sum, vec![0, 1]);
    let s = &Scalar::from_digits(t, &a) + &Scalar::from_digits(t, &b);
    assert_eq!(s.ring_digits(2).unwrap(), sum);
}

#[test]
fn eval_and_derivatives_match_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u64, 3, 5] {
        let params = zp(p as u32);
        for _ in 0..40 {
            let level = rng.gen_range(0..=3);
            let depth = rng.gen_range(0..=2);
            let t = Terms::random(&mut rng, p, level, depth);
            let f = t.combo(params, depth as usize);
            for x in 0..p.pow(4) {
                let xr = ring(params, x);
                assert!(
                    f.eval(&xr).agrees(&scalar(params, t.eval(x))),
                    "p={p} x={x}"
                );
                for k in 1..=level {
                    let d = f.derivative(k as usize).unwrap();
                    assert!(d.eval(&xr).agrees(&scalar(params, t.eval_derivative(k, x))));
                }
            }
        }
    }
}

#[test]
fn antiderivative_matches_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in [3u64, 5] {
        let params = zp(p as u32);
        for _ in 0..30 {
            let level = rng.gen_range(0..=2);
            let depth = rng.gen_range(0..=2);
            let t = Terms::random(&mut rng, p, level, depth);
            let pf = antiderive(&t.combo(params, depth as usize), level as usize + 1).unwrap();
            for x in 0..p.pow(3) {
                assert!(pf
                    .eval(&ring(params, x))
                    .agrees(&scalar(params, t.eval_antiderivative(x))));
            }
        }
    }
}

#[test]
fn divided_differences_match_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for p in [2u64, 3, 5] {
        let params = zp(p as u32);
        for _ in 0..200 {
            let level = rng.gen_range(0..=3);
            let depth = rng.gen_range(0..=2);
            let t = Terms::random(&mut rng, p, level, depth);
            let f = t.combo(params, depth as usize);
            let k = rng.gen_range(0..=3usize);
            let mut xs: Vec<u64> = Vec::new();
            while xs.len() < k + 1 {
                let x = rng.gen_range(0..p.pow(4));
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            let vs: Vec<Q> = xs.iter().map(|&x| t.eval(x)).collect();
            let xi: Vec<i128> = xs.iter().map(|&x| x as i128).collect();
            let want = divided_difference(&xi, &vs);
            let pts: Vec<RingElem> = xs.iter().map(|&x| ring(params, x)).collect();
            assert!(
                phi(&f, &pts).unwrap().agrees(&scalar(params, want)),
                "p={p} k={k} {xs:?}"
            );
        }
    }
}

#[test]
fn divided_difference_examples() {
    let f = zp(3);
    let sq = |x: i128| Q::from_integer(x * x);
    let want = divided_difference(&[1, 2], &[sq(1), sq(2)]);
    assert_eq!(want, Q::from_integer(3));
    assert_eq!(
        divided_difference(&[4, 0, 7], &[sq(4), sq(0), sq(7)]),
        Q::from_integer(1)
    );

    let square = CnCombo::new(f, 2, 0)
        .unwrap()
        .with_term(Rep::zero(), 2, Scalar::one(f))
        .unwrap();
    let pts = |xs: &[u64]| xs.iter().map(|&x| ring(f, x)).collect::<Vec<_>>();
    assert!(phi(&square, &pts(&[1, 2]))
        .unwrap()
        .agrees(&Scalar::from_i64(f, 3)));
    assert!(phi(&square, &pts(&[4, 0, 7]))
        .unwrap()
        .agrees(&Scalar::one(f)));
}

#[test]
fn c0_coefficients_match_value_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for p in [2u64, 3, 5] {
        let params = zp(p as u32);
        for _ in 0..30 {
            let level = rng.gen_range(0..=2);
            let depth = rng.gen_range(0..=2);
            let t = Terms::random(&mut rng, p, level, depth);
            let table = expand_c0(&t.combo(params, depth as usize), 3).unwrap();
            for r in 0..p.pow(3) {
                let want = if r == 0 {
                    t.eval(0)
                } else {
                    t.eval(r) - t.eval(predecessor(r, p))
                };
                let got = table.get(&Rep::from_u64(p as u32, r), 0);
                assert!(got.agrees(&scalar(params, want)), "p={p} r={r}");
            }
        }
    }
}

#[test]
fn closing_example_coefficients() {
    let f = zp(3);
    let x = Terms {
        p: 3,
        level: 1,
        terms: vec![(0, 1, Q::from_integer(1))],
    };
    // χ_1 at level 1 carries γ_1 = 1; χ_2 carries γ_2 = 2.
    let mut pf = x.clone();
    pf.terms.push((1, 0, Q::from_integer(1)));
    let mut pg = pf.clone();
    pg.terms.push((2, 0, Q::new(-1, 2)));
    let b = |t: &Terms, r: u64| t.eval(r) - t.eval(predecessor(r, 3));
    let oracle_f: Vec<Q> = (1..=3).map(|r| b(&pf, r)).collect();
    let oracle_g: Vec<Q> = (1..=3).map(|r| b(&pg, r)).collect();
    let ints = |v: &[i128]| v.iter().map(|&n| Q::from_integer(n)).collect::<Vec<_>>();
    assert_eq!(oracle_f, ints(&[2, 2, 3]));
    assert_eq!(oracle_g, ints(&[2, 1, 3]));

    for (t, want) in [(&pf, [2, 2, 3]), (&pg, [2, 1, 3])] {
        let table = expand_c0(&t.combo(f, 1), 2).unwrap();
        for (r, w) in (1..=3).zip(want) {
            assert!(table
                .get(&Rep::from_u64(3, r), 0)
                .agrees(&Scalar::from_i64(f, w)));
        }
    }
}

#[test]
fn c0_expansion_examples() {
    let f = zp(3);
    let chi1 = Terms {
        p: 3,
        level: 0,
        terms: vec![(1, 0, Q::from_integer(1))],
    };
    let x = Terms {
        p: 3,
        level: 1,
        terms: vec![(0, 1, Q::from_integer(1))],
    };
    let b = |t: &Terms, r: u64| {
        if r == 0 {
            t.eval(0)
        } else {
            t.eval(r) - t.eval(predecessor(r, 3))
        }
    };
    let expect_chi: Vec<i64> = vec![0, 1, 0, 0, 0, 0, 0, 0, 0];
    let expect_x: Vec<i64> = vec![0, 1, 2];
    for (r, &w) in expect_chi.iter().enumerate() {
        assert_eq!(b(&chi1, r as u64), Q::from_integer(w as i128));
    }
    for (r, &w) in expect_x.iter().enumerate() {
        assert_eq!(b(&x, r as u64), Q::from_integer(w as i128));
    }
    let tc = expand_c0(&chi1.combo(f, 1), 2).unwrap();
    for (r, w) in expect_chi.into_iter().enumerate() {
        assert!(tc
            .get(&Rep::from_u64(3, r as u64), 0)
            .agrees(&Scalar::from_i64(f, w)));
    }
    let tx = expand_c0(&x.combo(f, 0), 1).unwrap();
    for (r, w) in expect_x.into_iter().enumerate() {
        assert!(tx
            .get(&Rep::from_u64(3, r as u64), 0)
            .agrees(&Scalar::from_i64(f, w)));
    }
}

#[test]
fn second_derivative_estimate_of_cube() {
    let f = zp(3);
    // D_2 x^3 = C(3,2) x, so D_2 f(1) = 3.
    assert_eq!(binomial(3, 2), 3);
    let cube = FnEvaluator::new(f, 3, |x: &Scalar| x.pow(3));
    let e = estimate_dj(&cube, 2, &ring(f, 1), 0, 8, 8).unwrap();
    assert!(
        e.value
            .truncate(8)
            .agrees(&Scalar::from_i64(f, 3).truncate(8)),
        "{}",
        e.value
    );
}
