//! Bernoulli numbers and the closed-form kernels built from them.
//!
//! Kernels are univariate series in `x`; callers attach `eps` and a linear
//! argument with [`MultiSeries::compose_linear`].

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, Rational};
use crate::series::{var_names, LinearForm, MultiSeries, TruncationSpec, EPS};

static BERNOULLI: spin::RwLock<Vec<Rational>> = spin::RwLock::new(Vec::new());

/// `B_k` in the convention of `x / (e^x - 1)`, so `B_1 = -1/2`.
///
/// Values are memoized process-wide; readers share the table and the first
/// request past its end extends it under the write lock.
pub fn bernoulli(k: u32) -> Rational {
    let k = k as usize;
    if let Some(b) = BERNOULLI.read().get(k) {
        return b.clone();
    }
    let mut table = BERNOULLI.write();
    while table.len() <= k {
        let n = table.len();
        let b = if n == 0 {
            Rational::one()
        } else {
            // sum_{j=0}^{n} C(n+1, j) B_j = 0
            let sum = table
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (j, bj)| {
                    acc + bj * Rational::from_integer(binomial(n as u32 + 1, j as u32))
                });
            -sum / Rational::from_integer(BigInt::from(n + 1))
        };
        table.push(b);
    }
    table[k].clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    /// `(x/2) / sinh(x/2)`
    SinhRatio,
    /// `sinh(x/2) / (x/2)`
    SinhRatioInverse,
    /// `1 - (x/2) / tanh(x/2)`
    TanhDefect,
    /// `log((x/2) / sinh(x/2))`
    LogSinhRatio,
}

/// A kernel expanded to `x^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSeries {
    pub kind: KernelKind,
    pub order: u32,
    pub body: MultiSeries,
}

impl KernelSeries {
    /// The kernel evaluated at `eps * (sum of vars)`, as a series in eps
    /// and `vars`.
    pub fn at_eps_sum<S: AsRef<str>>(&self, vars: &[S], spec: &TruncationSpec) -> Result<MultiSeries> {
        MultiSeries::compose_linear(&self.body, &LinearForm::sum_of(vars), true, spec)
    }
}

fn kernel_coefficient(kind: KernelKind, k: u32) -> Rational {
    let kf = Rational::from_integer(factorial(k));
    match kind {
        KernelKind::SinhRatio => {
            if k % 2 == 1 {
                return Rational::zero();
            }
            // x/sinh(x) = sum (2 - 2^{2n}) B_{2n} x^{2n} / (2n)!, at x/2
            let two_pow = BigInt::one() << (k as usize);
            let scale = Rational::from_integer(BigInt::from(2) - &two_pow)
                / Rational::from_integer(two_pow);
            scale * bernoulli(k) / kf
        }
        KernelKind::SinhRatioInverse => {
            if k % 2 == 1 {
                return Rational::zero();
            }
            let two_pow = BigInt::one() << (k as usize);
            Rational::one() / Rational::from_integer(two_pow * factorial(k + 1))
        }
        KernelKind::TanhDefect if k >= 2 => -bernoulli(k) / kf,
        KernelKind::LogSinhRatio if k >= 2 => {
            -bernoulli(k) / (kf * Rational::from_integer(BigInt::from(k)))
        }
        _ => Rational::zero(),
    }
}

/// Exact expansion of a kernel to order `x^order`.
pub fn kernel(kind: KernelKind, order: u32) -> KernelSeries {
    let spec = TruncationSpec::unbounded().with_cap("x", order);
    let terms = (0..=order).map(|k| (vec![k], kernel_coefficient(kind, k)));
    let body = MultiSeries::from_terms(var_names(&["x"]), spec, terms)
        .expect("univariate kernel construction");
    KernelSeries { kind, order, body }
}

/// `L_{a,i}(z)` truncated at `z^order`, as a series in `[eps, z]`.
///
/// The coefficient of `eps^k z^{k+a+i}` is
/// `-i! B_k / ((k+a)(k+a+1)...(k+a+i) k!)` for `k >= 2`. The index `a = -1`
/// is admitted; every factor `k + a` is then still at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LSeries {
    pub a: i32,
    pub i: u32,
    pub order: u32,
    pub body: MultiSeries,
}

pub fn l_series(a: i32, i: u32, order: u32) -> Result<LSeries> {
    if a < -1 {
        return Err(Error::InvalidIndex(alloc::format!("L_{{{a},{i}}}: a must be >= -1")));
    }
    let shift = a + i as i32;
    let i_fact = Rational::from_integer(factorial(i));
    let mut terms = Vec::new();
    let mut k = 2u32;
    while (k as i32 + shift) as u32 <= order {
        let bk = bernoulli(k);
        if !bk.is_zero() {
            let falling = (0..=i).fold(BigInt::one(), |acc, j| {
                acc * BigInt::from(k as i64 + a as i64 + j as i64)
            });
            let denom = Rational::from_integer(falling * factorial(k));
            let exp = vec![k, (k as i32 + shift) as u32];
            terms.push((exp, -(&i_fact * bk) / denom));
        }
        k += 1;
    }
    let spec = TruncationSpec::unbounded().with_cap("z", order);
    let body = MultiSeries::from_terms(var_names(&[EPS, "z"]), spec, terms)?;
    Ok(LSeries { a, i, order, body })
}

impl LSeries {
    /// `L_{a,i}(v_1 + ... + v_k)`; an empty list is the argument 0, where
    /// every `L` vanishes.
    pub fn eval_sum<S: AsRef<str>>(&self, vars: &[S], spec: &TruncationSpec) -> Result<MultiSeries> {
        if vars.is_empty() {
            return MultiSeries::zero(alloc::vec![EPS.to_string()], spec.clone());
        }
        let mut names = alloc::vec![EPS.to_string()];
        names.extend(var_names(vars));
        let sum = MultiSeries::from_terms(
            names.clone(),
            spec.clone(),
            (1..names.len()).map(|k| {
                let mut e = vec![0; names.len()];
                e[k] = 1;
                (e, Rational::one())
            }),
        )?;
        self.body.substitute("z", &sum)?.embed(&names).map(|s| s.truncate(spec))
    }
}
