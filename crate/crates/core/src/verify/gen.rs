//! Random instances for the verification suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldParams, RingElem, Scalar};
use crate::funcspace::CnCombo;
use crate::reps::Rep;

/// Seeded source of random scalars, representatives, combos and points.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub(crate) params: FieldParams,
    pub(crate) rng: ChaCha8Rng,
}

impl Sampler {
    /// A sampler on ChaCha stream `stream` of `seed`.
    pub fn new(params: FieldParams, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { params, rng }
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn digit(&mut self) -> u8 {
        self.rng.gen_range(0..self.params.p()) as u8
    }

    pub fn nonzero_digit(&mut self) -> u8 {
        self.rng.gen_range(1..self.params.p()) as u8
    }

    /// `π^v · u` with `v ∈ lo..=hi` and `u` an exact unit with at most four
    /// digits.
    pub fn nonzero_scalar(&mut self, lo: i64, hi: i64) -> Scalar {
        let len = self.rng.gen_range(1..=4usize);
        let mut digits = vec![self.nonzero_digit()];
        digits.extend((1..len).map(|_| self.digit()));
        let v = self.rng.gen_range(lo..=hi);
        Scalar::from_digits(self.params, &digits).shift(v)
    }

    pub fn scalar(&mut self, lo: i64, hi: i64) -> Scalar {
        if self.rng.gen_ratio(1, 8) {
            Scalar::zero(self.params)
        } else {
            self.nonzero_scalar(lo, hi)
        }
    }

    /// A representative of length at most `max_len`.
    pub fn rep(&mut self, max_len: usize) -> Rep {
        let len = self.rng.gen_range(0..=max_len);
        let mut digits: Vec<u8> = (0..len).map(|_| self.digit()).collect();
        if let Some(last) = digits.last_mut() {
            *last = self.nonzero_digit();
        }
        Rep::from_digits(&digits)
    }

    pub fn level(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn depth(&mut self, max: usize) -> usize {
        self.rng.gen_range(0..=max)
    }

    /// A combo with up to five random terms.
    pub fn combo(&mut self, level: usize, depth: usize) -> CnCombo {
        let mut f = CnCombo::new(self.params, level, depth).expect("valid level and depth");
        let terms = self.rng.gen_range(1..=5);
        for _ in 0..terms {
            let r = self.rep(depth);
            let j = self.rng.gen_range(0..=level);
            let c = self.scalar(-1, 2);
            f.add_term(r, j, c).expect("valid term");
        }
        f
    }

    pub fn point(&mut self) -> RingElem {
        RingElem::random(&self.params, &mut self.rng)
    }

    /// A point agreeing with `x` in its first `k` digits and different from it.
    pub fn near(&mut self, x: &RingElem, k: usize) -> RingElem {
        let n = self.params.precision() as usize;
        let k = k.min(n - 1);
        loop {
            let mut d = x.digits().to_vec();
            for slot in d.iter_mut().skip(k) {
                *slot = self.digit();
            }
            if d != x.digits() {
                return RingElem::new(&self.params, &d).expect("digits in range");
            }
        }
    }

    /// Pairwise distinct points; about half are close to an earlier point so
    /// that pairs inside one leaf of a depth-`depth` combo occur.
    pub fn distinct_points(&mut self, count: usize, depth: usize) -> Vec<RingElem> {
        let mut out: Vec<RingElem> = Vec::with_capacity(count);
        while out.len() < count {
            let x = if out.is_empty() || self.rng.gen_bool(0.5) {
                self.point()
            } else {
                let base = out.choose(&mut self.rng).expect("nonempty").clone();
                let k = self.rng.gen_range(0..=depth + 2);
                self.near(&base, k)
            };
            if !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }

    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        v.shuffle(&mut self.rng);
    }
}
