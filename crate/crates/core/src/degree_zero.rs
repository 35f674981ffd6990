//! Degree zero multipoint series and the Hodge series behind them.
//!
//! Everything here is a function of `Z = z_1 + ... + z_n` (and of `y + Z`
//! for the series with one point-class insertion) except the stationary-free
//! series, which is assembled from the `L_{a,i}` functions. Each eps-slice
//! of these series is a homogeneous polynomial, so internally everything is
//! computed under the eps cap alone, where exact division by `Z` is always
//! possible, and restricted to the requested truncation at the end.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{index_partitions, proper_subsets};
use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, int, Rational};
use crate::series::{euler_antiderivative, var_names, MultiSeries, TruncationSpec, EPS};
use crate::special::{bernoulli, kernel, l_series, KernelKind};

/// Negative powers of `w = y + Z` in the two modified series.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrincipalPart {
    pub terms: BTreeMap<i32, Rational>,
}

impl PrincipalPart {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A degree zero multipoint series: the power series part plus, for
/// `F^0[y|]` and `F^0[y|z]`, the principal part in `w = y + Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree0Series {
    pub q_insertions: u8,
    pub z_vars: Vec<String>,
    pub regular: MultiSeries,
    pub principal: PrincipalPart,
}

fn work_spec(spec: &TruncationSpec) -> Result<TruncationSpec> {
    if spec.eps_cap.is_none() {
        return Err(Error::MissingEpsCap);
    }
    Ok(spec.eps_only())
}

fn with_eps(vars: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(vars.len() + 1);
    out.push(EPS.to_string());
    out.extend(vars.iter().cloned());
    out
}

/// `(v_1 + ... + v_k)^power` over the variable list `vars`.
pub(crate) fn sum_power(
    vars: &[String],
    summands: &[String],
    power: u32,
    spec: &TruncationSpec,
) -> Result<MultiSeries> {
    if summands.is_empty() {
        return if power == 0 {
            MultiSeries::one(vars.to_vec(), spec.clone())
        } else {
            MultiSeries::zero(vars.to_vec(), spec.clone())
        };
    }
    let mut sum = MultiSeries::zero(vars.to_vec(), spec.clone())?;
    for s in summands {
        sum = sum.add(&MultiSeries::var(vars.to_vec(), spec.clone(), s)?)?;
    }
    sum.pow(power)
}

/// `kind(eps * (sum of summands))` over `vars`.
pub(crate) fn kernel_at(
    kind: KernelKind,
    vars: &[String],
    summands: &[String],
    spec: &TruncationSpec,
) -> Result<MultiSeries> {
    let order = spec.eps_cap.ok_or(Error::MissingEpsCap)?;
    kernel(kind, order).at_eps_sum(summands, spec)?.embed(vars)
}

/// `Z^{n-2} e^{xZ}` (or `Z^{n-2}` without a shift variable): the genus-zero
/// series `f0[z_1..z_n]` with `s_0` translated by `x`. Needs `n > 1`; the
/// shift variable must be capped in the truncation.
pub fn mp_f0(z_vars: &[&str], shift: Option<&str>, spec: &TruncationSpec) -> Result<MultiSeries> {
    let n = z_vars.len();
    if n <= 1 {
        return Err(Error::TooFewVariables { needed: 2, got: n });
    }
    let zs = var_names(z_vars);
    let mut vars = zs.clone();
    if let Some(x) = shift {
        vars.push(x.to_string());
    }
    let base = sum_power(&vars, &zs, n as u32 - 2, spec)?;
    match shift {
        None => Ok(base),
        Some(x) => {
            let xz = MultiSeries::var(vars.clone(), spec.clone(), x)?.mul(&sum_power(&vars, &zs, 1, spec)?)?;
            base.mul(&xz.exp()?)
        }
    }
}

/// `v[z_1..z_n] = Z^{n-1}` for `n > 0`.
pub fn v_series(z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    if z_vars.is_empty() {
        return Err(Error::TooFewVariables { needed: 1, got: 0 });
    }
    let zs = var_names(z_vars);
    sum_power(&zs, &zs, z_vars.len() as u32 - 1, spec)
}

/// `(d_k f0)[z_1..z_n]`, read off from `f0[w, z_1..z_n]` as the coefficient
/// of `w^k`: `C(n-1, k) Z^{n-1-k}`.
pub fn f0_descendant(k: u32, z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    let n = z_vars.len() as u32;
    if n == 0 {
        return Err(Error::TooFewVariables { needed: 1, got: 0 });
    }
    let zs = var_names(z_vars);
    if k > n - 1 {
        return MultiSeries::zero(zs, spec.clone());
    }
    Ok(sum_power(&zs, &zs, n - 1 - k, spec)?.scale(&Rational::from_integer(binomial(n - 1, k))))
}

/// `(v^{k+1} / (k+1)!)[z_1..z_n]` from `v[S] = Z_S^{|S|-1}`: since `v`
/// vanishes at the origin, the product rule leaves one term per partition
/// of the points into `k + 1` blocks.
pub fn v_power_over_factorial(k: u32, z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    let zs = var_names(z_vars);
    let mut acc = MultiSeries::zero(zs.clone(), spec.clone())?;
    for blocks in index_partitions(zs.len()) {
        if blocks.len() != k as usize + 1 {
            continue;
        }
        let mut term = MultiSeries::one(zs.clone(), spec.clone())?;
        for b in &blocks {
            let names: Vec<String> = b.iter().map(|&i| zs[i].clone()).collect();
            term = term.mul(&sum_power(&zs, &names, b.len() as u32 - 1, spec)?)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `F^0[y|z_1..z_n] = ((eps w/2)/sinh(eps w/2)) w^{n-2}` with `w = y + Z`.
///
/// For `n = 0, 1` the power `w^{n-2}` is negative: the leading `w^{n-2}`
/// becomes the principal part and the regular part is
/// `((eps w/2)/sinh(eps w/2) - 1) w^{n-2}`.
pub fn mp_f0_qp(y: &str, z_vars: &[&str], spec: &TruncationSpec) -> Result<Degree0Series> {
    let work = work_spec(spec)?;
    let n = z_vars.len();
    let zs = var_names(z_vars);
    let mut points = alloc::vec![y.to_string()];
    points.extend(zs.iter().cloned());
    let vars = with_eps(&points);
    let ratio = kernel_at(KernelKind::SinhRatio, &vars, &points, &work)?;
    let (regular, principal) = if n >= 2 {
        let w = sum_power(&vars, &points, n as u32 - 2, &work)?;
        (ratio.mul(&w)?, PrincipalPart::default())
    } else {
        let mut r = ratio.add_constant(&-Rational::one());
        for _ in n..2 {
            r = r.divide_by_sum(&points)?;
        }
        let mut principal = PrincipalPart::default();
        principal.terms.insert(n as i32 - 2, Rational::one());
        (r, principal)
    };
    Ok(Degree0Series {
        q_insertions: 1,
        z_vars: zs,
        regular: regular.truncate(spec),
        principal,
    })
}

/// One summand of the closed form for `f1`:
/// `C(r-1, i-1) (Z - Z_J)^{r-i} L_{|J|-1,i}(Z_J)` with `r = n - |J|`.
#[derive(Clone, Debug)]
pub struct GSummand {
    pub subset: Vec<usize>,
    pub i: u32,
    pub value: MultiSeries,
}

/// All summands of `g[z_1..z_n]`, including the `J = {}` ones (which
/// vanish) and, last, the `L_{n-1,0}(Z)` term with `subset` = everything.
pub fn g_summands(z_vars: &[&str], spec: &TruncationSpec) -> Result<Vec<GSummand>> {
    let work = work_spec(spec)?;
    let eps_cap = work.eps_cap.unwrap_or(0);
    let n = z_vars.len();
    if n == 0 {
        return Err(Error::TooFewVariables { needed: 1, got: 0 });
    }
    let zs = var_names(z_vars);
    let vars = with_eps(&zs);
    let mut out = Vec::new();
    for subset in proper_subsets(n) {
        let inside: Vec<String> = subset.iter().map(|&k| zs[k].clone()).collect();
        let outside: Vec<String> = (0..n).filter(|k| !subset.contains(k)).map(|k| zs[k].clone()).collect();
        let r = (n - subset.len()) as u32;
        let a = subset.len() as i32 - 1;
        for i in 1..=r {
            let order = (eps_cap as i32 + a + i as i32).max(0) as u32;
            let l = l_series(a, i, order)?.eval_sum(&inside, &work)?.embed(&vars)?;
            let value = sum_power(&vars, &outside, r - i, &work)?
                .mul(&l)?
                .scale(&Rational::from_integer(binomial(r - 1, i - 1)));
            out.push(GSummand {
                subset: subset.clone(),
                i,
                value,
            });
        }
    }
    let top = l_series(n as i32 - 1, 0, eps_cap + n as u32 - 1)?
        .eval_sum(&zs, &work)?
        .embed(&vars)?;
    out.push(GSummand {
        subset: (0..n).collect(),
        i: 0,
        value: top,
    });
    Ok(out)
}

/// `g[z_1..z_n]`, the closed form of the stationary-free Hodge series `f1`.
pub fn g_series(z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    let vars = with_eps(&var_names(z_vars));
    let mut acc = MultiSeries::zero(vars, work_spec(spec)?)?;
    for s in g_summands(z_vars, spec)? {
        acc = acc.add(&s.value)?;
    }
    Ok(acc.truncate(spec))
}

/// `f1[z_1..z_n]` from its closed form.
pub fn f1_closed(z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    g_series(z_vars, spec)
}

/// `f1[z_1..z_n]` by integrating the exact 1-form
/// `sum_{I proper} (Z - Z_I)^{n-|I|-1} f1[z_I] dZ_I + Z^{n-1} d log((eps Z/2)/sinh(eps Z/2))`
/// from the origin, starting from the one-point series.
///
/// The logarithmic differential is written as
/// `Z^{n-2} (1 - (eps Z/2)/tanh(eps Z/2)) dZ`, so every component carries
/// the same correction term.
pub fn f1_recursive(z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    let work = work_spec(spec)?;
    let n = z_vars.len();
    if n == 0 {
        return Err(Error::TooFewVariables { needed: 1, got: 0 });
    }
    let zs = var_names(z_vars);
    // by_size[k - 1] = f1 on the first k of the variables
    let mut by_size: Vec<MultiSeries> = Vec::with_capacity(n);
    for size in 1..=n {
        let names = &zs[..size];
        let vars = with_eps(names);
        let defect = kernel_at(KernelKind::TanhDefect, &vars, names, &work)?;
        let correction = if size == 1 {
            defect.divide_by_sum(names)?
        } else {
            defect.mul(&sum_power(&vars, names, size as u32 - 2, &work)?)?
        };
        let mut components = Vec::with_capacity(size);
        for i in 0..size {
            let mut h = correction.clone();
            for subset in proper_subsets(size).filter(|s| s.contains(&i)) {
                let sub = &by_size[subset.len() - 1];
                let renames: Vec<(String, String)> = subset
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| (names[k].clone(), names[j].clone()))
                    .collect();
                let moved = sub.rename(&renames)?.embed(&vars)?;
                let rest: Vec<String> = (0..size)
                    .filter(|k| !subset.contains(k))
                    .map(|k| names[k].clone())
                    .collect();
                let factor = sum_power(&vars, &rest, (size - subset.len()) as u32 - 1, &work)?;
                h = h.add(&factor.mul(&moved)?)?;
            }
            components.push(h);
        }
        by_size.push(euler_antiderivative(&components, names)?);
    }
    Ok(by_size.pop().expect("n >= 1").truncate(spec))
}

/// `F^0[z_1..z_n] = -2 ((eps Z/2)/sinh(eps Z/2)) Z^{-1} g[z_1..z_n]`.
pub fn mp_f0_p(z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    let work = work_spec(spec)?;
    let zs = var_names(z_vars);
    let vars = with_eps(&zs);
    let quotient = g_series(z_vars, &work)?.divide_by_sum(&zs)?;
    let ratio = kernel_at(KernelKind::SinhRatio, &vars, &zs, &work)?;
    Ok(ratio.mul(&quotient)?.scale(&int(-2)).truncate(spec))
}

/// The Hodge series `Fbar_h[z_1..z_n]` for `h = 0, 1`.
///
/// `Fbar_0 = ((eps Z/2)/sinh(eps Z/2)) Z^{n-3}`, where for `n < 3` the
/// constant 1 is removed before dividing (the string relation fixes those
/// cases). `Fbar_1 = -F^0[z_1..z_n] / 2` for every `n`.
pub fn fbar(h: u32, z_vars: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
    let work = work_spec(spec)?;
    let n = z_vars.len();
    if n == 0 {
        return Err(Error::TooFewVariables { needed: 1, got: 0 });
    }
    let zs = var_names(z_vars);
    let vars = with_eps(&zs);
    let out = match h {
        0 => {
            let ratio = kernel_at(KernelKind::SinhRatio, &vars, &zs, &work)?;
            if n >= 3 {
                ratio.mul(&sum_power(&vars, &zs, n as u32 - 3, &work)?)?
            } else {
                let mut r = ratio.add_constant(&-Rational::one());
                for _ in n..3 {
                    r = r.divide_by_sum(&zs)?;
                }
                r
            }
        }
        1 => mp_f0_p(z_vars, &work)?.scale(&crate::rational::rat(-1, 2)),
        _ => return Err(Error::InvalidIndex(alloc::format!("Hodge series index h = {h}"))),
    };
    Ok(out.truncate(spec))
}

/// `int_{Mbar_{g,n}} psi_1^{k_1} ... psi_n^{k_n} lambda_{g-h}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeKey {
    pub genus: u32,
    /// `h`: 0 selects `lambda_g`, 1 selects `lambda_{g-1}`.
    pub lambda_codim: u32,
    pub psi: Vec<u32>,
}

impl HodgeKey {
    pub fn new(genus: u32, lambda_codim: u32, psi: &[u32]) -> Self {
        HodgeKey {
            genus,
            lambda_codim,
            psi: psi.to_vec(),
        }
    }

    pub fn is_stable(&self) -> bool {
        2 * self.genus as i64 - 2 + self.psi.len() as i64 > 0
    }

    /// `sum k_i + (g - h) = 3g - 3 + n`
    pub fn dimension_matches(&self) -> bool {
        let psi: i64 = self.psi.iter().map(|&k| k as i64).sum();
        let g = self.genus as i64;
        psi + g - self.lambda_codim as i64 == 3 * g - 3 + self.psi.len() as i64
    }
}

/// Reads a Hodge integral off the Hodge series:
/// `(-1)^g [eps^{2g} z^k] Fbar_h[z_1..z_n]`.
pub fn hodge_integral(key: &HodgeKey) -> Result<Rational> {
    if !key.is_stable() {
        return Err(Error::UnstableModuli(2 * key.genus as i64 - 2 + key.psi.len() as i64));
    }
    if key.lambda_codim > 1 {
        return Err(Error::InvalidIndex(alloc::format!(
            "lambda_(g-{}) is not supported",
            key.lambda_codim
        )));
    }
    if key.lambda_codim > key.genus || !key.dimension_matches() {
        return Ok(Rational::zero());
    }
    let names: Vec<String> = (1..=key.psi.len()).map(|i| alloc::format!("z{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut spec = TruncationSpec::eps(2 * key.genus);
    for (name, &k) in names.iter().zip(&key.psi) {
        spec = spec.with_cap(name, k);
    }
    let series = fbar(key.lambda_codim, &refs, &spec)?;
    let mut exps: Vec<(&str, u32)> = refs.iter().copied().zip(key.psi.iter().copied()).collect();
    exps.push((EPS, 2 * key.genus));
    let c = series.coefficient(&exps)?;
    Ok(if key.genus % 2 == 1 { -c } else { c })
}

/// `int_{Mbar_{g,1}} psi^{2g-2} lambda_g = (-1)^g (2^{1-2g} - 1) B_{2g} / (2g)!`
pub fn lambda_g_onepoint(genus: u32) -> Result<Rational> {
    if genus == 0 {
        return Err(Error::UnstableModuli(-1));
    }
    let two_pow = Rational::from_integer(BigInt::one() << (2 * genus as usize - 1));
    let value = (Rational::one() / two_pow - Rational::one()) * bernoulli(2 * genus)
        / Rational::from_integer(factorial(2 * genus));
    Ok(if genus % 2 == 1 { -value } else { value })
}
