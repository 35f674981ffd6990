//! Truncated multivariate power series over the rationals.
//!
//! A [`MultiSeries`] is a finite map from exponent vectors to nonzero
//! rationals, tagged with a [`TruncationSpec`]. Monomials exceeding any cap
//! form a monomial ideal, so every ring operation here is an operation in
//! the quotient ring and truncation is applied eagerly: nothing beyond a cap
//! is ever stored.
//!
//! The genus parameter is the ordinary variable named [`EPS`]; when present
//! it is always the first variable.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Name of the genus-tracking variable.
pub const EPS: &str = "eps";

/// Exponent caps. A missing cap means the variable is unbounded; every
/// cap is inclusive.
///
/// `total_cap` bounds the combined degree of all variables other than
/// [`EPS`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationSpec {
    pub eps_cap: Option<u32>,
    pub var_caps: BTreeMap<String, u32>,
    pub total_cap: Option<u32>,
}

impl TruncationSpec {
    pub fn unbounded() -> Self {
        Self::default()
    }

    /// Caps only the genus variable.
    pub fn eps(cap: u32) -> Self {
        TruncationSpec {
            eps_cap: Some(cap),
            ..Self::default()
        }
    }

    pub fn with_cap(mut self, var: &str, cap: u32) -> Self {
        if var == EPS {
            self.eps_cap = Some(cap);
        } else {
            self.var_caps.insert(var.to_string(), cap);
        }
        self
    }

    pub fn with_total(mut self, cap: u32) -> Self {
        self.total_cap = Some(cap);
        self
    }

    pub fn cap(&self, var: &str) -> Option<u32> {
        if var == EPS {
            self.eps_cap
        } else {
            self.var_caps.get(var).copied()
        }
    }

    /// Componentwise minimum of the two specs.
    pub fn meet(&self, other: &Self) -> Self {
        let mut var_caps = self.var_caps.clone();
        for (name, &cap) in &other.var_caps {
            var_caps
                .entry(name.clone())
                .and_modify(|c| *c = (*c).min(cap))
                .or_insert(cap);
        }
        TruncationSpec {
            eps_cap: min_opt(self.eps_cap, other.eps_cap),
            var_caps,
            total_cap: min_opt(self.total_cap, other.total_cap),
        }
    }

    /// Keeps only the genus cap.
    pub fn eps_only(&self) -> Self {
        TruncationSpec {
            eps_cap: self.eps_cap,
            ..Self::default()
        }
    }

    /// The truncation that is exact after lowering the exponent of `var` by one,
    /// as for a partial derivative or division by `var`.
    pub fn lowered(&self, var: &str) -> Self {
        let mut out = self.clone();
        if var == EPS {
            out.eps_cap = out.eps_cap.map(|c| c.saturating_sub(1));
        } else {
            if let Some(c) = out.var_caps.get_mut(var) {
                *c = c.saturating_sub(1);
            }
            out.total_cap = out.total_cap.map(|c| c.saturating_sub(1));
        }
        out
    }

    /// Drops the caps of variables not in `vars`.
    pub fn restricted_to(&self, vars: &[String]) -> Self {
        TruncationSpec {
            eps_cap: self.eps_cap,
            var_caps: self
                .var_caps
                .iter()
                .filter(|(name, _)| vars.contains(name))
                .map(|(n, c)| (n.clone(), *c))
                .collect(),
            total_cap: self.total_cap,
        }
    }

    fn bounds(&self, vars: &[String]) -> Bounds {
        Bounds {
            caps: vars.iter().map(|v| self.cap(v)).collect(),
            eps_index: vars.iter().position(|v| v == EPS),
            total: self.total_cap,
        }
    }
}

fn min_opt(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Caps laid out along a variable list.
struct Bounds {
    caps: Vec<Option<u32>>,
    eps_index: Option<usize>,
    total: Option<u32>,
}

impl Bounds {
    fn admits(&self, exp: &[u32]) -> bool {
        for (e, cap) in exp.iter().zip(&self.caps) {
            if let Some(c) = cap {
                if e > c {
                    return false;
                }
            }
        }
        match self.total {
            Some(t) => non_eps_degree(exp, self.eps_index) <= t,
            None => true,
        }
    }

    /// True when arbitrarily high powers of this monomial are truncated away.
    fn kills_powers_of(&self, exp: &[u32]) -> bool {
        let capped = exp
            .iter()
            .zip(&self.caps)
            .any(|(&e, cap)| e > 0 && cap.is_some());
        capped || (self.total.is_some() && non_eps_degree(exp, self.eps_index) > 0)
    }
}

fn non_eps_degree(exp: &[u32], eps_index: Option<usize>) -> u32 {
    exp.iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != eps_index)
        .map(|(_, e)| *e)
        .sum()
}

fn accumulate(terms: &mut BTreeMap<Vec<u32>, Rational>, exp: Vec<u32>, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(exp) {
        alloc::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
        alloc::collections::btree_map::Entry::Occupied(mut slot) => {
            *slot.get_mut() += coeff;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

/// A linear form `sum c_v * v`, in the order the variables were given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm(pub Vec<(String, Rational)>);

impl LinearForm {
    /// `v_1 + v_2 + ... + v_k`.
    pub fn sum_of<S: AsRef<str>>(vars: &[S]) -> Self {
        LinearForm(
            vars.iter()
                .map(|v| (v.as_ref().to_string(), Rational::one()))
                .collect(),
        )
    }

    pub fn variables(&self) -> Vec<String> {
        self.0.iter().map(|(v, _)| v.clone()).collect()
    }
}

/// Truncated power series in named variables with exact coefficients.
///
/// Equality compares the variable list and the coefficients; the
/// truncation tag is not compared.
#[derive(Clone, Debug)]
pub struct MultiSeries {
    vars: Vec<String>,
    spec: TruncationSpec,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PartialEq for MultiSeries {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for MultiSeries {}

pub fn var_names<S: AsRef<str>>(names: &[S]) -> Vec<String> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

fn check_vars(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) || (v == EPS && i != 0) {
            return Err(Error::InvalidVariables(vars.to_vec()));
        }
    }
    Ok(())
}

/// Union of two variable lists: eps first if either has it, then `a`, then
/// the new names of `b`.
pub fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    if a.iter().chain(b).any(|v| v == EPS) {
        out.push(EPS.to_string());
    }
    for v in a.iter().chain(b) {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

impl MultiSeries {
    pub fn zero(vars: Vec<String>, spec: TruncationSpec) -> Result<Self> {
        check_vars(&vars)?;
        Ok(MultiSeries {
            vars,
            spec,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(vars: Vec<String>, spec: TruncationSpec, c: Rational) -> Result<Self> {
        let exp = vec![0; vars.len()];
        Self::from_terms(vars, spec, [(exp, c)])
    }

    pub fn one(vars: Vec<String>, spec: TruncationSpec) -> Result<Self> {
        Self::constant(vars, spec, Rational::one())
    }

    /// The series consisting of the single variable `name`.
    pub fn var(vars: Vec<String>, spec: TruncationSpec, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        Self::from_terms(vars, spec, [(exp, Rational::one())])
    }

    /// Builds a series from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed and terms beyond the caps are dropped.
    pub fn from_terms<I>(vars: Vec<String>, spec: TruncationSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        check_vars(&vars)?;
        let bounds = spec.bounds(&vars);
        let mut map = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != vars.len() {
                return Err(Error::InvalidIndex(alloc::format!(
                    "exponent vector of length {} for {} variables",
                    exp.len(),
                    vars.len()
                )));
            }
            if bounds.admits(&exp) {
                accumulate(&mut map, exp, c);
            }
        }
        Ok(MultiSeries {
            vars,
            spec,
            terms: map,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    /// Nonzero terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    fn with_terms(&self, spec: TruncationSpec, terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        MultiSeries {
            vars: self.vars.clone(),
            spec,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let spec = self.spec.meet(&other.spec);
        let bounds = spec.bounds(&self.vars);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if bounds.admits(e) {
                accumulate(&mut terms, e.clone(), c.clone());
            }
        }
        Ok(self.with_terms(spec, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.with_terms(self.spec.clone(), BTreeMap::new());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.clone(), v * c))
            .collect();
        self.with_terms(self.spec.clone(), terms)
    }

    /// Adds a constant.
    pub fn add_constant(&self, c: &Rational) -> Self {
        let mut terms = self.terms.clone();
        if self.spec.bounds(&self.vars).admits(&vec![0; self.vars.len()]) {
            accumulate(&mut terms, vec![0; self.vars.len()], c.clone());
        }
        self.with_terms(self.spec.clone(), terms)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let spec = self.spec.meet(&other.spec);
        let bounds = spec.bounds(&self.vars);
        let mut terms = BTreeMap::new();
        let mut exp = vec![0u32; self.vars.len()];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for (slot, (a, b)) in exp.iter_mut().zip(ea.iter().zip(eb)) {
                    *slot = a + b;
                }
                if bounds.admits(&exp) {
                    accumulate(&mut terms, exp.clone(), ca * cb);
                }
            }
        }
        Ok(self.with_terms(spec, terms))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.vars.clone(), self.spec.clone())?;
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn check_nilpotent(&self) -> Result<()> {
        let bounds = self.spec.bounds(&self.vars);
        if self.terms.keys().all(|e| bounds.kills_powers_of(e)) {
            Ok(())
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// `sum_k a^k / k!`; the argument must have zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        self.check_nilpotent()?;
        let mut result = Self::one(self.vars.clone(), self.spec.clone())?;
        let mut term = result.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(self)?.scale(&crate::rational::rat(1, k));
            if term.is_zero() {
                return Ok(result);
            }
            result = result.add(&term)?;
            k += 1;
        }
    }

    /// `sum_k (-1)^(k+1) (u - 1)^k / k`; the argument must have constant
    /// term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let a = self.add_constant(&-Rational::one());
        a.check_nilpotent()?;
        let mut result = Self::zero(self.vars.clone(), self.spec.clone())?;
        let mut power = a.clone();
        let mut k = 1i64;
        while !power.is_zero() {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result = result.add(&power.scale(&crate::rational::rat(sign, k)))?;
            power = power.mul(&a)?;
            k += 1;
        }
        Ok(result)
    }

    /// Coefficient of the monomial with the given exponents; variables not
    /// mentioned have exponent zero.
    pub fn coefficient(&self, exponents: &[(&str, u32)]) -> Result<Rational> {
        let mut exp = vec![0u32; self.vars.len()];
        for &(name, e) in exponents {
            let i = self.index_of(name)?;
            if let Some(cap) = self.spec.cap(name) {
                if e > cap {
                    return Err(Error::ExponentBeyondTruncation {
                        variable: name.to_string(),
                        exponent: e,
                        cap,
                    });
                }
            }
            exp[i] = e;
        }
        if let Some(total) = self.spec.total_cap {
            let degree = non_eps_degree(&exp, self.vars.iter().position(|v| v == EPS));
            if degree > total {
                return Err(Error::ExponentBeyondTruncation {
                    variable: "total degree".to_string(),
                    exponent: degree,
                    cap: total,
                });
            }
        }
        Ok(self.coefficient_at(&exp))
    }

    /// Coefficient by raw exponent vector, zero when absent.
    pub fn coefficient_at(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets `var = 0` and removes it from the variable list.
    pub fn specialize_zero(&self, var: &str) -> Result<Self> {
        let i = self.index_of(var)?;
        let mut vars = self.vars.clone();
        vars.remove(i);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] == 0)
            .map(|(e, c)| {
                let mut e = e.clone();
                e.remove(i);
                (e, c.clone())
            })
            .collect();
        Ok(MultiSeries {
            spec: self.spec.restricted_to(&vars),
            vars,
            terms,
        })
    }

    /// Re-expresses the series over a larger variable list.
    pub fn embed(&self, target: &[String]) -> Result<Self> {
        check_vars(target)?;
        let positions = self
            .vars
            .iter()
            .map(|v| {
                target
                    .iter()
                    .position(|t| t == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; target.len()];
                for (k, &p) in positions.iter().enumerate() {
                    out[p] = e[k];
                }
                (out, c.clone())
            })
            .collect();
        Ok(MultiSeries {
            vars: target.to_vec(),
            spec: self.spec.clone(),
            terms,
        })
    }

    /// Renames variables in place; positions and coefficients are kept.
    pub fn rename(&self, pairs: &[(String, String)]) -> Result<Self> {
        let mut vars = self.vars.clone();
        let mut spec = self.spec.clone();
        spec.var_caps.clear();
        for v in vars.iter_mut() {
            let old = v.clone();
            if let Some((_, new)) = pairs.iter().find(|(from, _)| *from == old) {
                *v = new.clone();
            }
            if let Some(cap) = self.spec.var_caps.get(&old) {
                spec.var_caps.insert(v.clone(), *cap);
            }
        }
        check_vars(&vars)?;
        Ok(MultiSeries {
            vars,
            spec,
            terms: self.terms.clone(),
        })
    }

    /// Exchanges the roles of two variables, keeping the variable order.
    pub fn swap_variables(&self, a: &str, b: &str) -> Result<Self> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.swap(i, j);
                (e, c.clone())
            })
            .collect();
        Ok(self.with_terms(self.spec.clone(), terms))
    }

    /// Restricts to a (usually smaller) truncation.
    pub fn truncate(&self, spec: &TruncationSpec) -> Self {
        let spec = self.spec.meet(spec);
        let bounds = spec.bounds(&self.vars);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| bounds.admits(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        self.with_terms(spec, terms)
    }

    /// Product with the variable `var`. Its cap and the total cap rise by
    /// one, since the product is exact there; this undoes [`TruncationSpec::lowered`].
    pub fn mul_var(&self, var: &str) -> Result<Self> {
        let i = self.index_of(var)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[i] += 1;
                (e, c.clone())
            })
            .collect();
        let mut spec = self.spec.clone();
        if var == EPS {
            spec.eps_cap = spec.eps_cap.map(|c| c + 1);
        } else {
            if let Some(c) = spec.var_caps.get_mut(var) {
                *c += 1;
            }
            spec.total_cap = spec.total_cap.map(|c| c + 1);
        }
        Ok(self.with_terms(spec, terms))
    }

    /// Partial derivative. The result truncation is lowered by one in `var`, which
    /// is where the derivative is exact.
    pub fn partial(&self, var: &str) -> Result<Self> {
        let i = self.index_of(var)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                accumulate(&mut terms, e2, c * Rational::from_integer(e[i].into()));
            }
        }
        Ok(self.with_terms(self.spec.lowered(var), terms))
    }

    /// Substitutes `var := value`. The result lives on the merged variable
    /// list and the meet of both specs.
    pub fn substitute(&self, var: &str, value: &Self) -> Result<Self> {
        let i = self.index_of(var)?;
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != var).cloned().collect();
        let vars = merge_vars(&rest, &value.vars);
        let spec = self
            .spec
            .restricted_to(&rest)
            .meet(&value.spec);
        let value = value.embed(&vars)?.truncate(&spec);

        let mut by_power: BTreeMap<u32, BTreeMap<Vec<u32>, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest_exp = e.clone();
            rest_exp.remove(i);
            by_power
                .entry(e[i])
                .or_default()
                .insert(rest_exp, c.clone());
        }

        let mut result = Self::zero(vars.clone(), spec.clone())?;
        let mut power = Self::one(vars.clone(), spec.clone())?;
        let mut current = 0u32;
        for (k, coeffs) in by_power {
            while current < k {
                power = power.mul(&value)?;
                current += 1;
            }
            if power.is_zero() {
                break;
            }
            let coeff = MultiSeries::from_terms(rest.clone(), spec.clone(), coeffs)?.embed(&vars)?;
            result = result.add(&coeff.mul(&power)?)?;
        }
        Ok(result)
    }

    /// Composes a univariate series `u(x)` with the linear form
    /// `x := sum c_v v`, or with `x := eps * sum c_v v` when `with_eps` is
    /// set. The result variables are eps (if used) followed by the form's
    /// variables.
    pub fn compose_linear(
        u: &Self,
        form: &LinearForm,
        with_eps: bool,
        spec: &TruncationSpec,
    ) -> Result<Self> {
        if u.vars.len() != 1 {
            return Err(Error::NotUnivariate);
        }
        if form.0.is_empty() {
            return Err(Error::EmptyForm);
        }
        let mut vars = Vec::new();
        if with_eps {
            vars.push(EPS.to_string());
        }
        vars.extend(form.variables());
        check_vars(&vars)?;
        let eps_shift = usize::from(with_eps);
        let width = vars.len();
        let terms = form.0.iter().enumerate().map(|(k, (_, c))| {
            let mut e = vec![0; width];
            e[k + eps_shift] = 1;
            if with_eps {
                e[0] = 1;
            }
            (e, c.clone())
        });
        let value = MultiSeries::from_terms(vars, spec.clone(), terms)?;
        let u = MultiSeries {
            vars: u.vars.clone(),
            spec: TruncationSpec::unbounded(),
            terms: u.terms.clone(),
        };
        u.substitute(&u.vars[0].clone(), &value)
    }

    /// Exact quotient by `Z = sum of vars`.
    ///
    /// With one variable this is division by a monomial and the cap of that
    /// variable drops by one. With several, the summed variables must not
    /// carry individual caps: each homogeneous slice is then complete and is
    /// divided exactly, and the total cap drops by one.
    pub fn divide_by_sum<S: AsRef<str>>(&self, vars: &[S]) -> Result<Self> {
        let idx = vars
            .iter()
            .map(|v| self.index_of(v.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<String> = var_names(vars);
        if idx.is_empty() {
            return Err(Error::EmptyForm);
        }
        let not_divisible = || Error::NotDivisible(names.clone());
        if idx.len() == 1 {
            let i = idx[0];
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                if e[i] == 0 {
                    return Err(not_divisible());
                }
                let mut e = e.clone();
                e[i] -= 1;
                terms.insert(e, c.clone());
            }
            return Ok(self.with_terms(self.spec.lowered(&names[0]), terms));
        }
        for name in &names {
            if name == EPS || self.spec.cap(name).is_some() {
                return Err(Error::CappedDivisor(name.clone()));
            }
        }

        // Group by the exponents of the other variables; within a group the
        // polynomial in the summed variables is divided by lex elimination
        // on the first of them.
        let mut groups: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut outer = e.clone();
            let inner: Vec<u32> = idx.iter().map(|&i| e[i]).collect();
            for &i in &idx {
                outer[i] = 0;
            }
            groups.entry(outer).or_default().insert(inner, c.clone());
        }

        let mut terms = BTreeMap::new();
        for (outer, mut poly) in groups {
            while let Some((lead, c)) = poly.last_key_value() {
                let (lead, c) = (lead.clone(), c.clone());
                if lead[0] == 0 {
                    return Err(not_divisible());
                }
                let mut q = lead.clone();
                q[0] -= 1;
                for k in 0..idx.len() {
                    let mut e = q.clone();
                    e[k] += 1;
                    accumulate(&mut poly, e, -c.clone());
                }
                let mut full = outer.clone();
                for (k, &i) in idx.iter().enumerate() {
                    full[i] = q[k];
                }
                accumulate(&mut terms, full, c);
            }
        }
        let mut spec = self.spec.clone();
        spec.total_cap = spec.total_cap.map(|t| t.saturating_sub(1));
        Ok(self.with_terms(spec, terms))
    }

    /// True when every monomial has an even exponent of eps.
    pub fn is_eps_even(&self) -> bool {
        match self.vars.iter().position(|v| v == EPS) {
            Some(i) => self.terms.keys().all(|e| e[i] % 2 == 0),
            None => true,
        }
    }

    /// Combined exponent of the named variables in an exponent vector of
    /// this series.
    pub fn degree_in(&self, exp: &[u32], vars: &[String]) -> u32 {
        self.vars
            .iter()
            .zip(exp)
            .filter(|(v, _)| vars.contains(v))
            .map(|(_, e)| *e)
            .sum()
    }

    /// Exponent of eps in an exponent vector of this series.
    pub fn eps_exponent(&self, exp: &[u32]) -> u32 {
        match self.vars.iter().position(|v| v == EPS) {
            Some(i) => exp[i],
            None => 0,
        }
    }
}

/// Primitive of the 1-form `sum_i h_i dz_i` vanishing at the origin.
///
/// Each monomial of `sum_i z_i h_i` of degree `D > 0` in the form variables
/// contributes `coeff / D`. Closedness is checked first, pairwise on the
/// region where both mixed partials are exact.
pub fn euler_antiderivative<S: AsRef<str>>(
    components: &[MultiSeries],
    form_vars: &[S],
) -> Result<MultiSeries> {
    let form_vars = var_names(form_vars);
    if components.len() != form_vars.len() || components.is_empty() {
        return Err(Error::InvalidIndex(alloc::format!(
            "{} components for {} variables",
            components.len(),
            form_vars.len()
        )));
    }
    for h in &components[1..] {
        components[0].same_vars(h)?;
    }
    for i in 0..form_vars.len() {
        for j in i + 1..form_vars.len() {
            let a = components[i].partial(&form_vars[j])?;
            let b = components[j].partial(&form_vars[i])?;
            let spec = a.spec.meet(&b.spec);
            if a.truncate(&spec) != b.truncate(&spec) {
                return Err(Error::NotClosed {
                    first: form_vars[i].clone(),
                    second: form_vars[j].clone(),
                });
            }
        }
    }

    let first = &components[0];
    let idx = form_vars
        .iter()
        .map(|v| first.index_of(v))
        .collect::<Result<Vec<_>>>()?;
    let spec = components
        .iter()
        .skip(1)
        .fold(first.spec.clone(), |acc, h| acc.meet(&h.spec));
    let bounds = spec.bounds(&first.vars);
    let mut terms = BTreeMap::new();
    for (h, &i) in components.iter().zip(&idx) {
        for (e, c) in &h.terms {
            let mut e = e.clone();
            e[i] += 1;
            if !bounds.admits(&e) {
                continue;
            }
            let degree: u32 = idx.iter().map(|&k| e[k]).sum();
            accumulate(&mut terms, e, c / Rational::from_integer(degree.into()));
        }
    }
    Ok(first.with_terms(spec, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn poly(vars: &[&str], spec: TruncationSpec, terms: &[(&[u32], Rational)]) -> MultiSeries {
        MultiSeries::from_terms(
            var_names(vars),
            spec,
            terms.iter().map(|(e, c)| (e.to_vec(), c.clone())),
        )
        .unwrap()
    }

    fn z(spec: TruncationSpec) -> MultiSeries {
        MultiSeries::var(var_names(&["z"]), spec, "z").unwrap()
    }

    #[test]
    fn add_cancels_and_truncates() {
        let u = TruncationSpec::unbounded();
        let one_plus_z = poly(&["z"], u.clone(), &[(&[0], int(1)), (&[1], int(1))]);
        let minus_one = poly(&["z"], u.clone(), &[(&[0], int(-1))]);
        assert_eq!(one_plus_z.add(&minus_one).unwrap(), z(u.clone()));

        let zero = MultiSeries::zero(var_names(&["z"]), u.clone()).unwrap();
        assert_eq!(z(u.clone()).add(&zero).unwrap(), z(u.clone()));

        let capped = TruncationSpec::unbounded().with_cap("z", 1);
        let z2 = poly(&["z"], u.clone(), &[(&[2], int(1))]);
        let z2_capped = poly(&["z"], capped, &[(&[2], int(1))]);
        assert!(z2.add(&z2_capped).unwrap().is_zero());
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let u = TruncationSpec::unbounded();
        let a = z(u.clone());
        let b = MultiSeries::var(var_names(&["y"]), u, "y").unwrap();
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn eps_must_come_first() {
        let err = MultiSeries::zero(var_names(&["z", "eps"]), TruncationSpec::unbounded());
        assert!(matches!(err, Err(Error::InvalidVariables(_))));
    }

    #[test]
    fn products() {
        let u = TruncationSpec::unbounded();
        let a = poly(&["z"], u.clone(), &[(&[0], int(1)), (&[1], int(1))]);
        let b = poly(&["z"], u.clone(), &[(&[0], int(1)), (&[1], int(-1))]);
        let expect = poly(&["z"], u.clone(), &[(&[0], int(1)), (&[2], int(-1))]);
        assert_eq!(a.mul(&b).unwrap(), expect);

        let x4 = TruncationSpec::unbounded().with_cap("x", 4);
        let c = poly(&["x"], x4.clone(), &[(&[0], int(1)), (&[2], rat(-1, 24))]);
        let d = poly(&["x"], x4.clone(), &[(&[0], int(1)), (&[2], rat(1, 24))]);
        let expect = poly(&["x"], x4, &[(&[0], int(1)), (&[4], rat(-1, 576))]);
        assert_eq!(c.mul(&d).unwrap(), expect);

        let zero = MultiSeries::zero(var_names(&["z"]), u).unwrap();
        assert!(a.mul(&zero).unwrap().is_zero());
    }

    #[test]
    fn exp_and_log() {
        let cap3 = TruncationSpec::unbounded().with_cap("z", 3);
        let e = z(cap3.clone()).exp().unwrap();
        let expect = poly(
            &["z"],
            cap3.clone(),
            &[(&[0], int(1)), (&[1], int(1)), (&[2], rat(1, 2)), (&[3], rat(1, 6))],
        );
        assert_eq!(e, expect);
        assert_eq!(e.log().unwrap(), z(cap3.clone()));

        let zero = MultiSeries::zero(var_names(&["z"]), cap3.clone()).unwrap();
        assert_eq!(zero.exp().unwrap(), MultiSeries::one(var_names(&["z"]), cap3.clone()).unwrap());
        let one = MultiSeries::one(var_names(&["z"]), cap3.clone()).unwrap();
        assert!(one.log().unwrap().is_zero());

        let x4 = TruncationSpec::unbounded().with_cap("x", 4);
        let u = poly(&["x"], x4.clone(), &[(&[0], int(1)), (&[2], rat(-1, 24)), (&[4], rat(7, 5760))]);
        let expect = poly(&["x"], x4.clone(), &[(&[2], rat(-1, 24)), (&[4], rat(1, 2880))]);
        assert_eq!(u.log().unwrap(), expect);

        let v = poly(&["x"], x4, &[(&[0], int(1)), (&[2], rat(-1, 24))]);
        assert_eq!(v.log().unwrap().exp().unwrap(), v);
    }

    #[test]
    fn exp_log_preconditions() {
        let cap3 = TruncationSpec::unbounded().with_cap("z", 3);
        let one = MultiSeries::one(var_names(&["z"]), cap3.clone()).unwrap();
        assert_eq!(one.exp(), Err(Error::NonzeroConstantTerm));
        assert_eq!(z(cap3).log(), Err(Error::ConstantTermNotOne));
        assert_eq!(z(TruncationSpec::unbounded()).exp(), Err(Error::NotNilpotent));
    }

    #[test]
    fn compose_linear_examples() {
        let u = TruncationSpec::unbounded();
        let x2 = poly(&["x"], u.clone(), &[(&[2], int(1))]);
        let got = MultiSeries::compose_linear(&x2, &LinearForm::sum_of(&["z1", "z2"]), true, &u).unwrap();
        let expect = poly(
            &["eps", "z1", "z2"],
            u.clone(),
            &[(&[2, 2, 0], int(1)), (&[2, 1, 1], int(2)), (&[2, 0, 2], int(1))],
        );
        assert_eq!(got, expect);

        let k = poly(&["x"], u.clone(), &[(&[0], int(1)), (&[2], rat(-1, 24))]);
        let got = MultiSeries::compose_linear(&k, &LinearForm::sum_of(&["y"]), true, &u).unwrap();
        let expect = poly(&["eps", "y"], u.clone(), &[(&[0, 0], int(1)), (&[2, 2], rat(-1, 24))]);
        assert_eq!(got, expect);

        let x = poly(&["x"], u.clone(), &[(&[1], int(1))]);
        assert_eq!(
            MultiSeries::compose_linear(&x, &LinearForm(Vec::new()), false, &u),
            Err(Error::EmptyForm)
        );
    }

    #[test]
    fn coefficient_lookup() {
        let cap = TruncationSpec::unbounded().with_cap("z", 2);
        let s = poly(&["z"], cap, &[(&[0], int(1)), (&[1], int(1))]);
        assert_eq!(s.coefficient(&[("z", 1)]).unwrap(), int(1));
        assert_eq!(s.coefficient(&[("z", 2)]).unwrap(), int(0));
        assert!(matches!(
            s.coefficient(&[("z", 3)]),
            Err(Error::ExponentBeyondTruncation { .. })
        ));
        assert!(matches!(s.coefficient(&[("w", 0)]), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn specialization() {
        let u = TruncationSpec::unbounded();
        let s = poly(&["z1", "z2"], u.clone(), &[(&[0, 0], int(1)), (&[1, 0], int(1)), (&[1, 1], int(1))]);
        let expect = poly(&["z1"], u, &[(&[0], int(1)), (&[1], int(1))]);
        assert_eq!(s.specialize_zero("z2").unwrap(), expect);
        assert!(matches!(s.specialize_zero("z9"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn division_by_sum() {
        let u = TruncationSpec::unbounded();
        let zsum = poly(&["z1", "z2"], u.clone(), &[(&[1, 0], int(1)), (&[0, 1], int(1))]);
        let one = MultiSeries::one(var_names(&["z1", "z2"]), u.clone()).unwrap();
        assert_eq!(zsum.divide_by_sum(&["z1", "z2"]).unwrap(), one);

        let bad = poly(&["z1", "z2"], u.clone(), &[(&[0, 0], int(1)), (&[1, 0], int(1))]);
        assert!(matches!(bad.divide_by_sum(&["z1", "z2"]), Err(Error::NotDivisible(_))));

        let capped = zsum.truncate(&TruncationSpec::unbounded().with_cap("z1", 3));
        assert!(matches!(capped.divide_by_sum(&["z1", "z2"]), Err(Error::CappedDivisor(_))));

        // (z1 + z2 + z3)^2 * (eps^2 z1 - 3 z2 + 1) / Z
        let vars = ["eps", "z1", "z2", "z3"];
        let zz = poly(&vars, u.clone(), &[(&[0, 1, 0, 0], int(1)), (&[0, 0, 1, 0], int(1)), (&[0, 0, 0, 1], int(1))]);
        let q = poly(&vars, u.clone(), &[(&[2, 1, 0, 0], int(1)), (&[0, 0, 1, 0], int(-3)), (&[0, 0, 0, 0], int(1))]);
        let q = q.mul(&zz).unwrap();
        let s = q.mul(&zz).unwrap();
        assert_eq!(s.divide_by_sum(&["z1", "z2", "z3"]).unwrap(), q);
    }

    #[test]
    fn antiderivative() {
        let u = TruncationSpec::unbounded();
        let one = MultiSeries::one(var_names(&["z"]), u.clone()).unwrap();
        assert_eq!(euler_antiderivative(&[one], &["z"]).unwrap(), z(u.clone()));

        let vars = ["z1", "z2"];
        let s = poly(&vars, u.clone(), &[(&[1, 0], int(1)), (&[0, 1], int(1))]);
        let f = euler_antiderivative(&[s.clone(), s.clone()], &vars).unwrap();
        assert_eq!(f, s.mul(&s).unwrap().scale(&rat(1, 2)));
        assert_eq!(f.partial("z1").unwrap(), s);

        let h1 = poly(&vars, u.clone(), &[(&[0, 1], int(1))]);
        let h2 = MultiSeries::zero(var_names(&vars), u).unwrap();
        assert!(matches!(euler_antiderivative(&[h1, h2], &vars), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn substitution_and_embedding() {
        let u = TruncationSpec::unbounded();
        let s = poly(&["x", "y"], u.clone(), &[(&[2, 1], int(3))]);
        let value = poly(&["a", "b"], u.clone(), &[(&[1, 0], int(1)), (&[0, 1], int(1))]);
        let got = s.substitute("x", &value).unwrap();
        let expect = poly(
            &["y", "a", "b"],
            u.clone(),
            &[(&[1, 2, 0], int(3)), (&[1, 1, 1], int(6)), (&[1, 0, 2], int(3))],
        );
        assert_eq!(got, expect);
        let moved = got.embed(&var_names(&["eps", "b", "a", "y"])).unwrap();
        assert_eq!(moved.coefficient(&[("a", 1), ("b", 1), ("y", 1)]).unwrap(), int(6));
        assert_eq!(moved.swap_variables("a", "b").unwrap(), moved);
    }
}
