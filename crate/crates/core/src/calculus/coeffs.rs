//! Coefficient tables `b_r^{n,j}` and the basis change between levels.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{AbsValue, FieldParams, RingElem, Scalar};
use crate::funcspace::{CnCombo, Evaluator};
use crate::reps::Rep;

use super::quotients::psi_local;

/// Coefficients `b_r^{n,j}` for `r ∈ R_depth`, `0 <= j <= n`. Zero entries are
/// not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    params: FieldParams,
    level: usize,
    depth: usize,
    entries: BTreeMap<(Rep, usize), Scalar>,
}

impl CoeffTable {
    pub fn new(params: FieldParams, level: usize, depth: usize) -> Self {
        CoeffTable {
            params,
            level,
            depth,
            entries: BTreeMap::new(),
        }
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

    pub fn get(&self, r: &Rep, j: usize) -> Scalar {
        self.entries
            .get(&(r.clone(), j))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.params))
    }

    /// Stores `v` (dropping it if it is zero).
    pub fn set(&mut self, r: Rep, j: usize, v: Scalar) -> Result<()> {
        if j > self.level || r.length() > self.depth {
            return Err(Error::InvalidArgument(format!(
                "entry ({r}, j={j}) outside a level-{} depth-{} table",
                self.level, self.depth
            )));
        }
        if v.is_zero() {
            self.entries.remove(&(r, j));
        } else {
            self.entries.insert((r, j), v);
        }
        Ok(())
    }

    /// Nonzero entries in canonical `(length, lex, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&Rep, usize, &Scalar)> {
        self.entries.iter().map(|((r, j), v)| (r, *j, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same keys and every value agrees at tracked precision.
    pub fn agrees(&self, other: &CoeffTable) -> bool {
        self.level == other.level
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .all(|(k, v)| other.entries.get(k).is_some_and(|w| v.agrees(w)))
    }

    /// Restriction to `r ∈ R_depth`.
    pub fn truncated(&self, depth: usize) -> CoeffTable {
        let mut out = CoeffTable::new(self.params, self.level, depth.min(self.depth));
        for ((r, j), v) in &self.entries {
            if r.length() <= depth {
                out.entries.insert((r.clone(), *j), v.clone());
            }
        }
        out
    }

    /// `Σ b_r^{n,j} γ_r^{n-j}(x-r)^j χ_r` as a combo.
    pub fn rebuild(&self) -> Result<CnCombo> {
        let mut out = CnCombo::new(self.params, self.level, self.depth)?;
        for ((r, j), v) in &self.entries {
            out.add_term(r.clone(), *j, v.clone())?;
        }
        Ok(out)
    }

    /// `max |b_r^{n,j}|` over stored entries.
    pub fn max_abs(&self) -> AbsValue {
        self.entries
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or(AbsValue::zero(self.params.q()))
    }
}

/// Level-0 (van der Put) coefficients of a black box over `R_m`:
/// `b_0 = f(0)`, `b_r = f(r) - f(r_-)`.
pub fn expand_c0(f: &dyn Evaluator, m: usize) -> Result<CoeffTable> {
    let params = f.params();
    let mut out = CoeffTable::new(params, 0, m);
    for r in Rep::enumerate(params.p(), m) {
        let v = if r.is_zero() {
            f.eval(&r.to_ring(&params))?
        } else {
            &f.eval(&r.to_ring(&params))? - &f.eval(&r.predecessor()?.to_ring(&params))?
        };
        out.set(r, 0, v)?;
    }
    Ok(out)
}

fn derivatives(f: &CnCombo, n: usize) -> Result<Vec<CnCombo>> {
    (0..=n)
        .map(|j| {
            if j <= f.level() {
                f.derivative(j)
            } else {
                CnCombo::new(f.params(), 0, f.depth())
            }
        })
        .collect()
}

/// One coefficient `b_r^{n,j}` given `D_j f`: `D_j f(0)` at `r = 0`, else
/// `γ_r ψ_{n-j} D_j f(r, r_-)`.
fn coefficient(dj: &CnCombo, n: usize, j: usize, r: &Rep) -> Result<Scalar> {
    let params = dj.params();
    let zero = RingElem::new(&params, &[])?;
    if r.is_zero() {
        return Ok(dj.taylor_coeff(0, &zero));
    }
    let x = r.to_ring(&params);
    let y = r.predecessor()?.to_ring(&params);
    Ok(&r.gamma(params) * &psi_local(dj, n - j, &x, &y)?)
}

/// `b_r^{n,j}(f)` for every `r ∈ R_depth`. Valid for any combo; when the
/// combo's local degree exceeds `n` the full table is infinite and this is
/// its truncation.
pub fn extract_bnj_to_depth(f: &CnCombo, n: usize, depth: usize) -> Result<CoeffTable> {
    let params = f.params();
    params.check_order(n)?;
    if depth > params.precision() as usize {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} exceeds precision {}",
            params.precision()
        )));
    }
    let ds = derivatives(f, n)?;
    let mut out = CoeffTable::new(params, n, depth);
    for r in Rep::enumerate(params.p(), depth) {
        for (j, dj) in ds.iter().enumerate() {
            let v = coefficient(dj, n, j, &r)?;
            out.set(r.clone(), j, v)?;
        }
    }
    Ok(out)
}

/// The complete level-`n` table of a combo whose local degree is at most `n`.
/// Entries with `l(r)` beyond the combo depth vanish, so the table lives on
/// `R_m`.
pub fn extract_bnj(f: &CnCombo, n: usize) -> Result<CoeffTable> {
    if let Some(d) = f.local_degree() {
        if d > n {
            return Err(Error::InvalidArgument(format!(
                "local degree {d} exceeds level {n}: the level-{n} table is infinite, \
                 use a truncated extraction"
            )));
        }
    }
    extract_bnj_to_depth(f, n, f.depth())
}

/// `Σ_{r' ◁ r_-} b_{r'}^{n,n}`, i.e. `D_n f(r_-)`, for every stored prefix.
fn ancestor_sum(t: &CoeffTable, r: &Rep, n: usize) -> Result<Scalar> {
    let mut acc = Scalar::zero(t.params);
    for a in r.predecessor()?.ancestors() {
        if let Some(v) = t.entries.get(&(a, n)) {
            acc = &acc + v;
        }
    }
    Ok(acc)
}

/// Level `n` to level `n - 1` over `R_depth`, using
/// `b_r^{n-1,j} γ_r^{-1} = b_r^{n,j} + C(n, j) Σ_{r' ◁ r_-} b_{r'}^{n,n}`
/// and `b_0^{n-1,j} = b_0^{n,j}`. Entries of `t` beyond its depth are taken
/// as zero, which is exact for complete tables.
pub fn lower_basis(t: &CoeffTable, depth: usize) -> Result<CoeffTable> {
    lower_basis_signed(t, depth, 1)
}

#[doc(hidden)]
pub fn lower_basis_signed(t: &CoeffTable, depth: usize, sign: i64) -> Result<CoeffTable> {
    let n = t.level;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot lower a level-0 table".into(),
        ));
    }
    let params = t.params;
    let mut out = CoeffTable::new(params, n - 1, depth);
    for r in Rep::enumerate(params.p(), depth) {
        if r.is_zero() {
            for j in 0..n {
                out.set(r.clone(), j, t.get(&r, j))?;
            }
            continue;
        }
        let s = ancestor_sum(t, &r, n)?;
        let g = r.gamma(params);
        for j in 0..n {
            let c = &Scalar::binomial(params, n, j) * &s;
            let c = if sign < 0 { -&c } else { c };
            let v = &g * &(&t.get(&r, j) + &c);
            out.set(r.clone(), j, v)?;
        }
    }
    Ok(out)
}

/// Inverse of [`lower_basis`]: given the level-`(n-1)` table and the level-0
/// table of `D_n f`, rebuilds the level-`n` table over the depth of `t`.
pub fn raise_basis(t: &CoeffTable, dn: &CoeffTable) -> Result<CoeffTable> {
    if dn.level != 0 {
        return Err(Error::InvalidArgument("D_n table must be level 0".into()));
    }
    if dn.depth > t.depth {
        return Err(Error::InvalidArgument(format!(
            "inconsistent depths: D_n table depth {} exceeds table depth {}",
            dn.depth, t.depth
        )));
    }
    t.params.same(&dn.params)?;
    let params = t.params;
    let n = t.level + 1;
    let mut out = CoeffTable::new(params, n, t.depth);
    for r in Rep::enumerate(params.p(), t.depth) {
        out.set(r.clone(), n, dn.get(&r, 0))?;
        if r.is_zero() {
            for j in 0..n {
                out.set(r.clone(), j, t.get(&r, j))?;
            }
            continue;
        }
        let mut s = Scalar::zero(params);
        for a in r.predecessor()?.ancestors() {
            s = &s + &dn.get(&a, 0);
        }
        let ginv = r.gamma(params).inv()?;
        for j in 0..n {
            let v = &(&t.get(&r, j) * &ginv) - &(&Scalar::binomial(params, n, j) * &s);
            out.set(r.clone(), j, v)?;
        }
    }
    Ok(out)
}
