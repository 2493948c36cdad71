use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldParams, RingElem, Scalar};
use crate::reps::Rep;

/// A finite combination `Σ c_{r,j} γ_r^{n-j} (x - r)^j χ_r(x)` at level `n`,
/// with every `r` of length at most the depth `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CnCombo {
    params: FieldParams,
    level: usize,
    depth: usize,
    terms: BTreeMap<(Rep, usize), Scalar>,
}

/// The polynomial `Σ a_k (x - s)^k` that a combo restricts to on the disk of
/// elements whose first `depth` digits are those of `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafPoly {
    pub leaf: Rep,
    pub depth: usize,
    pub coeffs: Vec<Scalar>,
}

impl LeafPoly {
    pub fn eval(&self, params: FieldParams, x: &RingElem) -> Scalar {
        let h = &x.to_scalar(params) - &self.leaf.to_scalar(params);
        horner(params, &self.coeffs, &h)
    }

    /// Highest `k` with `a_k != 0`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// `D_l` of the polynomial evaluated at `y` (a point of this leaf):
    /// `Σ_k C(k, l) a_k (y - s)^(k - l)`.
    pub fn taylor_at(&self, params: FieldParams, l: usize, y: &Scalar) -> Scalar {
        if l >= self.coeffs.len() {
            return Scalar::zero(params);
        }
        let h = y - &self.leaf.to_scalar(params);
        let shifted: Vec<Scalar> = (l..self.coeffs.len())
            .map(|k| &Scalar::binomial(params, k, l) * &self.coeffs[k])
            .collect();
        horner(params, &shifted, &h)
    }
}

fn horner(params: FieldParams, coeffs: &[Scalar], h: &Scalar) -> Scalar {
    let mut acc = Scalar::zero(params);
    for c in coeffs.iter().rev() {
        acc = &(&acc * h) + c;
    }
    acc
}

impl CnCombo {
    /// An empty combo. In characteristic `p` the level must be at most `p - 1`.
    pub fn new(params: FieldParams, level: usize, depth: usize) -> Result<Self> {
        params.check_order(level)?;
        if depth > params.precision() as usize {
            return Err(Error::InvalidArgument(format!(
                "depth {depth} exceeds working precision {}",
                params.precision()
            )));
        }
        Ok(CnCombo {
            params,
            level,
            depth,
            terms: BTreeMap::new(),
        })
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rep, usize, &Scalar)> {
        self.terms.iter().map(|((r, j), c)| (r, *j, c))
    }

    pub fn coeff(&self, r: &Rep, j: usize) -> Scalar {
        self.terms
            .get(&(r.clone(), j))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.params))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` to the coefficient of `γ_r^{n-j}(x-r)^j χ_r`.
    pub fn add_term(&mut self, r: Rep, j: usize, c: Scalar) -> Result<()> {
        self.params.same(&c.params())?;
        if j > self.level {
            return Err(Error::InvalidArgument(format!(
                "term degree {j} exceeds level {}",
                self.level
            )));
        }
        if r.length() > self.depth {
            return Err(Error::InvalidArgument(format!(
                "term {r} is deeper than depth {}",
                self.depth
            )));
        }
        if r.digits().iter().any(|&d| d as u32 >= self.params.p()) {
            return Err(Error::InvalidArgument(format!("{r} has a digit >= p")));
        }
        let key = (r, j);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    /// Builder form of [`add_term`](Self::add_term).
    pub fn with_term(mut self, r: Rep, j: usize, c: Scalar) -> Result<Self> {
        self.add_term(r, j, c)?;
        Ok(self)
    }

    /// `χ_r` as a level-0 combo of depth `l(r)`.
    pub fn indicator(params: FieldParams, r: &Rep) -> Result<Self> {
        CnCombo::new(params, 0, r.length())?.with_term(r.clone(), 0, Scalar::one(params))
    }

    /// The identity function `x` as a level-1 combo of depth 0.
    pub fn identity(params: FieldParams) -> Result<Self> {
        CnCombo::new(params, 1, 0)?.with_term(Rep::zero(), 1, Scalar::one(params))
    }

    /// The constant `c` as a level-0 combo of depth 0.
    pub fn constant(params: FieldParams, c: Scalar) -> Result<Self> {
        CnCombo::new(params, 0, 0)?.with_term(Rep::zero(), 0, c)
    }

    /// Same function stored at a larger depth.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        if depth < self.max_term_length() {
            return Err(Error::InvalidArgument(format!(
                "depth {depth} is shallower than the deepest term"
            )));
        }
        let mut out = self.clone();
        out.depth = depth;
        Ok(out)
    }

    fn max_term_length(&self) -> usize {
        self.terms
            .keys()
            .map(|(r, _)| r.length())
            .max()
            .unwrap_or(0)
    }

    /// Same function expressed at a higher level: the coefficient of
    /// `γ_r^{n'-j}(x-r)^j χ_r` is `c / γ_r^{n'-n}`.
    pub fn with_level(&self, level: usize) -> Result<Self> {
        if level < self.level {
            return Err(Error::InvalidArgument(format!(
                "cannot lower the level from {} to {level} term-wise",
                self.level
            )));
        }
        let mut out = CnCombo::new(self.params, level, self.depth)?;
        let shift = (level - self.level) as u32;
        for ((r, j), c) in &self.terms {
            let g = r.gamma(self.params).pow(shift);
            out.add_term(r.clone(), *j, c.div(&g)?)?;
        }
        Ok(out)
    }

    /// Brings two combos to a common level and depth.
    fn aligned(&self, other: &CnCombo) -> Result<(CnCombo, CnCombo)> {
        self.params.same(&other.params)?;
        let level = self.level.max(other.level);
        let depth = self.depth.max(other.depth);
        Ok((
            self.with_level(level)?.with_depth(depth)?,
            other.with_level(level)?.with_depth(depth)?,
        ))
    }

    pub fn add(&self, other: &CnCombo) -> Result<CnCombo> {
        let (mut a, b) = self.aligned(other)?;
        for ((r, j), c) in b.terms {
            a.add_term(r, j, c)?;
        }
        Ok(a)
    }

    pub fn scale(&self, s: &Scalar) -> Result<CnCombo> {
        let mut out = CnCombo::new(self.params, self.level, self.depth)?;
        for ((r, j), c) in &self.terms {
            out.add_term(r.clone(), *j, c.checked_mul(s)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CnCombo) -> Result<CnCombo> {
        self.add(&other.scale(&Scalar::from_i64(self.params, -1))?)
    }

    pub fn eval(&self, x: &RingElem) -> Scalar {
        let params = self.params;
        let xs = x.to_scalar(params);
        let mut acc = Scalar::zero(params);
        let mut last: Option<Rep> = None;
        for k in 0..=self.depth {
            let r = Rep::truncation(x, k);
            if last.as_ref() == Some(&r) {
                continue;
            }
            let g = r.gamma(params);
            let h = &xs - &r.to_scalar(params);
            for j in 0..=self.level {
                if let Some(c) = self.terms.get(&(r.clone(), j)) {
                    let term = &(c * &g.pow((self.level - j) as u32)) * &h.pow(j as u32);
                    acc = &acc + &term;
                }
            }
            last = Some(r);
        }
        acc
    }

    /// The polynomial the combo restricts to on the depth-`m` leaf `s`
    /// (`s` given by its first `m` digits).
    pub fn leaf_poly(&self, leaf: &Rep) -> LeafPoly {
        let params = self.params;
        let s = leaf.to_scalar(params);
        let mut coeffs = vec![Scalar::zero(params); self.level + 1];
        for r in leaf.ancestors() {
            if r.length() > self.depth {
                break;
            }
            let d = &s - &r.to_scalar(params);
            let g = r.gamma(params);
            for j in 0..=self.level {
                let Some(c) = self.terms.get(&(r.clone(), j)) else {
                    continue;
                };
                let base = c * &g.pow((self.level - j) as u32);
                // (x - r)^j = Σ_k C(j, k) (s - r)^(j - k) (x - s)^k
                for (k, slot) in coeffs.iter_mut().enumerate().take(j + 1) {
                    let t = &(&base * &Scalar::binomial(params, j, k)) * &d.pow((j - k) as u32);
                    *slot = &*slot + &t;
                }
            }
        }
        LeafPoly {
            leaf: leaf.clone(),
            depth: self.depth,
            coeffs,
        }
    }

    /// Leaf polynomials over every leaf of `R_m`, in canonical order.
    pub fn leaf_normal_form(&self) -> Vec<LeafPoly> {
        Rep::enumerate(self.params.p(), self.depth)
            .iter()
            .map(|s| self.leaf_poly(s))
            .collect()
    }

    /// The leaf polynomial covering `x`.
    pub fn leaf_poly_at(&self, x: &RingElem) -> LeafPoly {
        self.leaf_poly(&Rep::truncation(x, self.depth))
    }

    /// Largest local polynomial degree over all leaves; `None` for `f = 0`.
    pub fn local_degree(&self) -> Option<usize> {
        self.leaf_normal_form()
            .iter()
            .filter_map(|l| l.degree())
            .max()
    }

    /// `D_j f` at level `n - j`: the term `γ_r^{n-k}(x-r)^k χ_r` maps to
    /// `C(k, j) γ_r^{(n-j)-(k-j)}(x-r)^{k-j} χ_r`.
    pub fn derivative(&self, j: usize) -> Result<CnCombo> {
        self.params.check_order(j)?;
        if j > self.level {
            return Err(Error::InvalidArgument(format!(
                "D_{j} of a level-{} combo; use a combo of level >= {j}",
                self.level
            )));
        }
        let mut out = CnCombo::new(self.params, self.level - j, self.depth)?;
        for ((r, k), c) in &self.terms {
            if *k >= j {
                let b = Scalar::binomial(self.params, *k, j);
                out.add_term(r.clone(), k - j, c * &b)?;
            }
        }
        Ok(out)
    }

    /// `D_l f(y)` for any `l`; zero beyond the level since combos are locally
    /// polynomial of degree at most the level.
    pub fn taylor_coeff(&self, l: usize, y: &RingElem) -> Scalar {
        if l > self.level {
            return Scalar::zero(self.params);
        }
        let leaf = self.leaf_poly_at(y);
        leaf.taylor_at(self.params, l, &y.to_scalar(self.params))
    }
}
