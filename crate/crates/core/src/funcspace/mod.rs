//! Functions `R → K`: finite combos in the level-`n` basis, black-box
//! evaluators, and coefficient streams.

mod combo;

use std::fmt;
use std::sync::Arc;

pub use combo::{CnCombo, LeafPoly};

use crate::error::Result;
use crate::field::{FieldParams, RingElem, Scalar};
use crate::reps::Rep;

/// `χ_r(x)` as a scalar `0` or `1`.
pub fn chi_eval(params: FieldParams, r: &Rep, x: &RingElem) -> Scalar {
    if r.precedes(x) {
        Scalar::one(params)
    } else {
        Scalar::zero(params)
    }
}

/// A function `R → K` given only by evaluation. Implementations must be pure:
/// the same input always gives the same output, from any thread.
pub trait Evaluator: Sync {
    fn params(&self) -> FieldParams;
    fn eval(&self, x: &RingElem) -> Result<Scalar>;
    /// Smoothness level asserted by the caller (`f ∈ C^level`).
    fn smoothness(&self) -> usize;
}

impl Evaluator for CnCombo {
    fn params(&self) -> FieldParams {
        CnCombo::params(self)
    }

    fn eval(&self, x: &RingElem) -> Result<Scalar> {
        Ok(CnCombo::eval(self, x))
    }

    /// Combos are locally polynomial, so they are `C^∞`; the stored level is
    /// what is reported.
    fn smoothness(&self) -> usize {
        self.level()
    }
}

/// An [`Evaluator`] backed by a closure.
pub struct FnEvaluator<F> {
    params: FieldParams,
    smoothness: usize,
    f: F,
}

impl<F> FnEvaluator<F>
where
    F: Fn(&Scalar) -> Scalar + Sync,
{
    /// `f` receives `x` already converted to a scalar.
    pub fn new(params: FieldParams, smoothness: usize, f: F) -> Self {
        FnEvaluator {
            params,
            smoothness,
            f,
        }
    }
}

impl<F> Evaluator for FnEvaluator<F>
where
    F: Fn(&Scalar) -> Scalar + Sync,
{
    fn params(&self) -> FieldParams {
        self.params
    }

    fn eval(&self, x: &RingElem) -> Result<Scalar> {
        Ok((self.f)(&x.to_scalar(self.params)))
    }

    fn smoothness(&self) -> usize {
        self.smoothness
    }
}

type Rule = dyn Fn(&Rep, usize) -> Scalar + Send + Sync;

/// A rule `(r, j) ↦ b_r^{n,j}` defined at every depth.
#[derive(Clone)]
pub struct CoeffStream {
    params: FieldParams,
    level: usize,
    rule: Arc<Rule>,
}

impl CoeffStream {
    pub fn new<F>(params: FieldParams, level: usize, rule: F) -> Self
    where
        F: Fn(&Rep, usize) -> Scalar + Send + Sync + 'static,
    {
        CoeffStream {
            params,
            level,
            rule: Arc::new(rule),
        }
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeff(&self, r: &Rep, j: usize) -> Scalar {
        (self.rule)(r, j)
    }
}

impl fmt::Debug for CoeffStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffStream")
            .field("params", &self.params)
            .field("level", &self.level)
            .finish_non_exhaustive()
    }
}
