//! Positive degree multipoint series from the Toda recursion, memoized,
//! and extraction of individual invariants.
//!
//! For `d > 0`,
//!
//! ```text
//! F^d[y|z] = -(2/d)   sum_i   z_i     F^d[y, z_i | z minus z_i]
//!            -(2/d^2) sum_i<j z_i z_j F^d[y, z_i, z_j | z minus z_i, z_j]
//!            +(1/d^2) sum_P sum_{d_1+..+d_l = d-1}
//!                 prod_k (sinh(eps W_k/2)/(eps W_k/2))^2 F^{d_k}[y_{P_k}|z_{P_k},0,0]
//! ```
//!
//! where `P` runs over the set partitions of all `y` and `z` variables and
//! `W_k` is the sum of the variables of the block `P_k`.
//!
//! Truncation: every monomial cap (eps, per variable, total) is an ideal,
//! so each factor is computed under the parent's caps restricted to its own
//! variables and products are exact. A variable promoted from `z` to `y`
//! carries its cap minus one, as does the total cap; this is never smaller
//! than what the parent's coefficients need. Without per-variable caps each
//! eps-slice is a polynomial of degree `eps - 2 + 2d + n`, so the eps cap
//! alone always gives a finite computation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::combinatorics::{compositions, set_partitions};
use crate::degree_zero::{kernel_at, mp_f0_p, mp_f0_qp, sum_power};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};
use crate::series::{var_names, MultiSeries, TruncationSpec, EPS};
use crate::special::KernelKind;

/// Identity of a memoized series: degree, numbers of `y` and `z`
/// variables, and the truncation over the canonical names
/// `y1..ym, z1..zn`, whose caps are sorted ascending with uncapped
/// variables last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesKey {
    pub d: u32,
    pub m: usize,
    pub n: usize,
    pub spec: TruncationSpec,
}

impl SeriesKey {
    pub fn y_names(&self) -> Vec<String> {
        (1..=self.m).map(|i| format!("y{i}")).collect()
    }

    pub fn z_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("z{i}")).collect()
    }

    /// `[eps, y1.., z1..]`
    pub fn variables(&self) -> Vec<String> {
        let mut out = alloc::vec![EPS.to_string()];
        out.extend(self.y_names());
        out.extend(self.z_names());
        out
    }

    /// True when a series computed under `self` restricts to `other`.
    pub fn covers(&self, other: &SeriesKey) -> bool {
        if (self.d, self.m, self.n) != (other.d, other.m, other.n) {
            return false;
        }
        let le = |small: Option<u32>, big: Option<u32>| match (small, big) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        le(other.spec.eps_cap, self.spec.eps_cap)
            && le(other.spec.total_cap, self.spec.total_cap)
            && other
                .variables()
                .iter()
                .skip(1)
                .all(|v| le(other.spec.cap(v), self.spec.cap(v)))
    }
}

/// One bracket `<tau_{k,Q}.. tau_{l,P}..>_{g,d}`; the index lists are kept
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantKey {
    pub genus: u32,
    pub degree: u32,
    pub q: Vec<u32>,
    pub p: Vec<u32>,
}

impl InvariantKey {
    pub fn new(genus: u32, degree: u32, q: &[u32], p: &[u32]) -> Self {
        let mut q = q.to_vec();
        let mut p = p.to_vec();
        q.sort_unstable();
        p.sort_unstable();
        InvariantKey { genus, degree, q, p }
    }

    pub fn insertions(&self) -> usize {
        self.q.len() + self.p.len()
    }

    /// `sum (k_i + 1) + sum l_j`
    pub fn insertion_degree(&self) -> i64 {
        self.q.iter().map(|&k| k as i64 + 1).sum::<i64>() + self.p.iter().map(|&l| l as i64).sum::<i64>()
    }

    /// `2g - 2 + 2d + m + n`
    pub fn virtual_dimension(&self) -> i64 {
        2 * self.genus as i64 - 2 + 2 * self.degree as i64 + self.insertions() as i64
    }

    pub fn dimension_matches(&self) -> bool {
        self.insertion_degree() == self.virtual_dimension()
    }

    /// Only degree zero has unstable domains: `2g - 2 + m + n <= 0`.
    pub fn is_stable(&self) -> bool {
        self.degree > 0 || 2 * self.genus as i64 - 2 + self.insertions() as i64 > 0
    }

    fn with_q(&self, k: u32) -> Self {
        let mut q = self.q.clone();
        q.push(k);
        InvariantKey::new(self.genus, self.degree, &q, &self.p)
    }

    fn with_p(&self, l: u32) -> Self {
        let mut p = self.p.clone();
        p.push(l);
        InvariantKey::new(self.genus, self.degree, &self.q, &p)
    }
}

impl core::fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("<")?;
        let mut first = true;
        for (class, list) in [("Q", &self.q), ("P", &self.p)] {
            for k in list.iter() {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "tau_{{{k},{class}}}")?;
            }
        }
        write!(f, ">_{{{},{}}}", self.genus, self.degree)
    }
}

/// How the two zero insertions of each block are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZeroInsertions {
    /// By the string equation: `F^e[y|z,0,0] = W^2 F^e[y|z]` for `e > 0`,
    /// and the closed degree zero forms otherwise.
    #[default]
    Direct,
    /// Two extra `z` variables capped at exponent 0, then set to zero.
    Literal,
}

/// Outcome of the divisor and string checks around one bracket `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketCheck {
    pub key: InvariantKey,
    /// `(<tau_{0,Q} X>, d <X> + sum of point-class lowerings)`
    pub divisor: Option<(Rational, Rational)>,
    /// `(<tau_{0,P} X>, sum of index lowerings)`
    pub string: Option<(Rational, Rational)>,
}

/// Memoizing evaluator of multipoint series.
#[derive(Clone, Debug, Default)]
pub struct Engine {
    memo: BTreeMap<SeriesKey, MultiSeries>,
    zero_insertions: ZeroInsertions,
}

fn sort_caps(names: &[String], spec: &TruncationSpec) -> Vec<usize> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&i| (spec.cap(&names[i]).unwrap_or(u32::MAX), i));
    order
}

fn check_names(y_vars: &[String], z_vars: &[String]) -> Result<()> {
    let all: Vec<&String> = y_vars.iter().chain(z_vars).collect();
    for (i, v) in all.iter().enumerate() {
        if *v == EPS || all[..i].contains(v) {
            let names = all.iter().map(|s| s.to_string()).collect();
            return Err(Error::InvalidVariables(names));
        }
    }
    Ok(())
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_zero_insertions(mode: ZeroInsertions) -> Self {
        Engine {
            memo: BTreeMap::new(),
            zero_insertions: mode,
        }
    }

    pub fn zero_insertions(&self) -> ZeroInsertions {
        self.zero_insertions
    }

    pub fn memo(&self) -> &BTreeMap<SeriesKey, MultiSeries> {
        &self.memo
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Seeds the memo table, e.g. from a stored cache.
    pub fn insert_memo(&mut self, key: SeriesKey, series: MultiSeries) {
        self.memo.insert(key, series);
    }

    pub fn clear_memo(&mut self) {
        self.memo.clear();
    }

    /// `F^d[y_1..y_m | z_1..z_n]` over `[eps, y.., z..]`. The eps cap is
    /// required.
    pub fn multipoint(
        &mut self,
        d: u32,
        y_vars: &[&str],
        z_vars: &[&str],
        spec: &TruncationSpec,
    ) -> Result<MultiSeries> {
        if spec.eps_cap.is_none() {
            return Err(Error::MissingEpsCap);
        }
        let ys = var_names(y_vars);
        let zs = var_names(z_vars);
        check_names(&ys, &zs)?;

        let y_order = sort_caps(&ys, spec);
        let z_order = sort_caps(&zs, spec);
        let mut canon = TruncationSpec {
            eps_cap: spec.eps_cap,
            var_caps: BTreeMap::new(),
            total_cap: spec.total_cap,
        };
        let mut renames = Vec::new();
        for (prefix, names, order) in [("y", &ys, &y_order), ("z", &zs, &z_order)] {
            for (slot, &i) in order.iter().enumerate() {
                let canonical = format!("{prefix}{}", slot + 1);
                if let Some(c) = spec.cap(&names[i]) {
                    canon.var_caps.insert(canonical.clone(), c);
                }
                renames.push((canonical, names[i].clone()));
            }
        }
        let key = SeriesKey {
            d,
            m: ys.len(),
            n: zs.len(),
            spec: canon,
        };
        let series = self.canonical(&key)?;

        let mut target = alloc::vec![EPS.to_string()];
        target.extend(ys);
        target.extend(zs);
        series.rename(&renames)?.embed(&target)
    }

    fn canonical(&mut self, key: &SeriesKey) -> Result<MultiSeries> {
        if let Some(s) = self.memo.get(key) {
            return Ok(s.clone());
        }
        let start = SeriesKey {
            d: key.d,
            m: key.m,
            n: key.n,
            spec: TruncationSpec::default(),
        };
        let mut same_shape = self
            .memo
            .range(start..)
            .take_while(|(k, _)| (k.d, k.m, k.n) == (key.d, key.m, key.n));
        if let Some((_, s)) = same_shape.find(|(k, _)| k.covers(key)) {
            return Ok(s.truncate(&key.spec));
        }
        let series = self.compute(key)?;
        self.memo.insert(key.clone(), series.clone());
        Ok(series)
    }

    fn compute(&mut self, key: &SeriesKey) -> Result<MultiSeries> {
        let ys = key.y_names();
        let zs = key.z_names();
        let vars = key.variables();
        let spec = &key.spec;
        if key.d == 0 {
            return degree_zero_series(&ys, &zs, spec);
        }

        let d = key.d;
        let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
        let mut acc = MultiSeries::zero(vars.clone(), spec.clone())?;

        // a point-class insertion with index k from z_i^{k+1}
        for i in 0..zs.len() {
            if spec.cap(&zs[i]) == Some(0) {
                continue;
            }
            let mut sub_y = y_refs.clone();
            sub_y.push(&zs[i]);
            let sub_z: Vec<&str> = zs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, z)| z.as_str()).collect();
            let inner = self.multipoint(d, &sub_y, &sub_z, &spec.lowered(&zs[i]))?;
            let term = inner.embed(&vars)?.mul_var(&zs[i])?;
            acc = acc.add(&term.scale(&rat(-2, d as i64)))?;
        }

        for i in 0..zs.len() {
            for j in i + 1..zs.len() {
                if spec.cap(&zs[i]) == Some(0) || spec.cap(&zs[j]) == Some(0) {
                    continue;
                }
                let mut sub_y = y_refs.clone();
                sub_y.push(&zs[i]);
                sub_y.push(&zs[j]);
                let sub_z: Vec<&str> = zs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, z)| z.as_str())
                    .collect();
                let sub_spec = spec.lowered(&zs[i]).lowered(&zs[j]);
                let inner = self.multipoint(d, &sub_y, &sub_z, &sub_spec)?;
                let term = inner.embed(&vars)?.mul_var(&zs[i])?.mul_var(&zs[j])?;
                acc = acc.add(&term.scale(&rat(-2, (d * d) as i64)))?;
            }
        }

        let ground: Vec<String> = vars[1..].to_vec();
        let mut blocks: BTreeMap<(Vec<String>, u32), MultiSeries> = BTreeMap::new();
        let mut partition_sum = MultiSeries::zero(vars.clone(), spec.clone())?;
        for partition in set_partitions(&ground) {
            'degrees: for degrees in compositions(d - 1, partition.parts.len()) {
                let mut product = MultiSeries::one(vars.clone(), spec.clone())?;
                for (part, &e) in partition.parts.iter().zip(&degrees) {
                    let q_count = part.iter().filter(|v| v.starts_with('y')).count();
                    if e == 0 && q_count >= 2 {
                        continue 'degrees;
                    }
                    let block_key = (part.clone(), e);
                    if !blocks.contains_key(&block_key) {
                        let block = self.block(e, part, spec)?.embed(&vars)?;
                        blocks.insert(block_key.clone(), block);
                    }
                    product = product.mul(&blocks[&block_key])?;
                    if product.is_zero() {
                        continue 'degrees;
                    }
                }
                partition_sum = partition_sum.add(&product)?;
            }
        }
        acc = acc.add(&partition_sum.scale(&rat(1, (d * d) as i64)))?;
        Ok(acc)
    }

    /// `(sinh(eps W/2)/(eps W/2))^2 F^e[y_B|z_B,0,0]` for one block `B` of
    /// canonical names.
    fn block(&mut self, e: u32, part: &[String], spec: &TruncationSpec) -> Result<MultiSeries> {
        let ys: Vec<&str> = part.iter().filter(|v| v.starts_with('y')).map(String::as_str).collect();
        let zs: Vec<&str> = part.iter().filter(|v| v.starts_with('z')).map(String::as_str).collect();
        let mut vars = alloc::vec![EPS.to_string()];
        vars.extend(ys.iter().map(|s| s.to_string()));
        vars.extend(zs.iter().map(|s| s.to_string()));
        let local = spec.restricted_to(&vars);
        let inverse = kernel_at(KernelKind::SinhRatioInverse, &vars, &vars[1..], &local)?;
        let appended = match self.zero_insertions {
            ZeroInsertions::Direct => self.with_zeros_direct(e, &ys, &zs, &vars, &local)?,
            ZeroInsertions::Literal => self.with_zeros_literal(e, &ys, &zs, &local)?,
        };
        inverse.pow(2)?.mul(&appended.embed(&vars)?)
    }

    fn with_zeros_direct(
        &mut self,
        e: u32,
        ys: &[&str],
        zs: &[&str],
        vars: &[String],
        spec: &TruncationSpec,
    ) -> Result<MultiSeries> {
        let w2 = sum_power(vars, &vars[1..], 2, spec)?;
        if e > 0 {
            let inner = self.multipoint(e, ys, zs, spec)?;
            return w2.mul(&inner.embed(vars)?);
        }
        match ys.len() {
            0 => w2.mul(&mp_f0_p(zs, spec)?.embed(vars)?),
            1 => {
                let ratio = kernel_at(KernelKind::SinhRatio, vars, &vars[1..], spec)?;
                ratio.mul(&sum_power(vars, &vars[1..], zs.len() as u32, spec)?)
            }
            _ => MultiSeries::zero(vars.to_vec(), spec.clone()),
        }
    }

    fn with_zeros_literal(&mut self, e: u32, ys: &[&str], zs: &[&str], spec: &TruncationSpec) -> Result<MultiSeries> {
        // canonical names never start with 'o'
        let (a, b) = ("o1", "o2");
        let mut padded = zs.to_vec();
        padded.push(a);
        padded.push(b);
        let padded_spec = spec.clone().with_cap(a, 0).with_cap(b, 0);
        self.multipoint(e, ys, &padded, &padded_spec)?
            .specialize_zero(a)?
            .specialize_zero(b)
    }

    /// The bracket as the coefficient of `eps^{2g} y^k z^l` in the
    /// multipoint series. Principal parts of the degree zero series are not
    /// brackets and are never consulted.
    pub fn gw_invariant(&mut self, key: &InvariantKey) -> Result<Rational> {
        if !key.is_stable() {
            return Err(Error::UnstableModuli(2 * key.genus as i64 - 2 + key.insertions() as i64));
        }
        if !key.dimension_matches() || (key.degree == 0 && key.q.len() >= 2) {
            return Ok(Rational::zero());
        }
        let ys: Vec<String> = (1..=key.q.len()).map(|i| format!("y{i}")).collect();
        let zs: Vec<String> = (1..=key.p.len()).map(|i| format!("z{i}")).collect();
        let mut spec = TruncationSpec::eps(2 * key.genus);
        let mut exps: Vec<(&str, u32)> = alloc::vec![(EPS, 2 * key.genus)];
        for (name, &k) in ys.iter().zip(&key.q).chain(zs.iter().zip(&key.p)) {
            spec = spec.with_cap(name, k);
            exps.push((name, k));
        }
        let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
        let z_refs: Vec<&str> = zs.iter().map(String::as_str).collect();
        let series = self.multipoint(key.degree, &y_refs, &z_refs, &spec)?;
        series.coefficient(&exps)
    }

    /// Checks the divisor and string equations around `x`:
    ///
    /// `<tau_{0,Q} X> = d <X> + sum_j <X with tau_{l_j,P} replaced by tau_{l_j-1,Q}>`
    /// and `<tau_{0,P} X> = sum_i <X with the i-th index lowered>`.
    ///
    /// In degree zero both sides are brackets only when `X` itself is
    /// stable; otherwise nothing is checked.
    pub fn check_divisor_string(&mut self, x: &InvariantKey) -> Result<BracketCheck> {
        let mut report = BracketCheck {
            key: x.clone(),
            divisor: None,
            string: None,
        };
        if !x.is_stable() {
            return Ok(report);
        }

        let lhs = self.gw_invariant(&x.with_q(0))?;
        let mut rhs = int(x.degree as i64) * self.gw_invariant(x)?;
        for j in 0..x.p.len() {
            if x.p[j] == 0 {
                continue;
            }
            let mut p = x.p.clone();
            let l = p.remove(j);
            let mut q = x.q.clone();
            q.push(l - 1);
            rhs += self.gw_invariant(&InvariantKey::new(x.genus, x.degree, &q, &p))?;
        }
        if lhs != rhs {
            return Err(Error::IdentityViolated(format!("divisor equation at {}: {lhs} != {rhs}", x.with_q(0))));
        }
        report.divisor = Some((lhs, rhs));

        let lhs = self.gw_invariant(&x.with_p(0))?;
        let mut rhs = Rational::zero();
        for i in 0..x.q.len() {
            if x.q[i] > 0 {
                let mut q = x.q.clone();
                q[i] -= 1;
                rhs += self.gw_invariant(&InvariantKey::new(x.genus, x.degree, &q, &x.p))?;
            }
        }
        for j in 0..x.p.len() {
            if x.p[j] > 0 {
                let mut p = x.p.clone();
                p[j] -= 1;
                rhs += self.gw_invariant(&InvariantKey::new(x.genus, x.degree, &x.q, &p))?;
            }
        }
        if lhs != rhs {
            return Err(Error::IdentityViolated(format!("string equation at {}: {lhs} != {rhs}", x.with_p(0))));
        }
        report.string = Some((lhs, rhs));
        Ok(report)
    }
}

/// Degree zero series over `[eps, y.., z..]`: vanishes with two or more
/// point-class insertions, and the principal part is dropped when there is
/// exactly one.
fn degree_zero_series(ys: &[String], zs: &[String], spec: &TruncationSpec) -> Result<MultiSeries> {
    let z_refs: Vec<&str> = zs.iter().map(String::as_str).collect();
    let mut vars = alloc::vec![EPS.to_string()];
    vars.extend(ys.iter().cloned());
    vars.extend(zs.iter().cloned());
    match ys.len() {
        0 if zs.is_empty() => Err(Error::TooFewVariables { needed: 1, got: 0 }),
        0 => mp_f0_p(&z_refs, spec),
        1 => Ok(mp_f0_qp(&ys[0], &z_refs, spec)?.regular),
        _ => MultiSeries::zero(vars, spec.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::kernel;

    #[test]
    fn degree_one_without_points_is_one() {
        let mut engine = Engine::new();
        let f = engine.multipoint(1, &[], &[], &TruncationSpec::eps(6)).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.constant_term(), int(1));
    }

    #[test]
    fn degree_one_one_point_class() {
        let mut engine = Engine::new();
        let spec = TruncationSpec::eps(8);
        let f = engine.multipoint(1, &["y"], &[], &spec).unwrap();
        let expected = kernel(KernelKind::SinhRatioInverse, 8)
            .at_eps_sum(&["y"], &spec)
            .unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.coefficient(&[(EPS, 4), ("y", 4)]).unwrap(), rat(1, 1920));
    }

    #[test]
    fn degree_two_one_point_class() {
        // (1/4) y^2 (sinh(eps y/2)/(eps y/2))^3
        let mut engine = Engine::new();
        let spec = TruncationSpec::eps(6);
        let f = engine.multipoint(2, &["y"], &[], &spec).unwrap();
        let inv = kernel(KernelKind::SinhRatioInverse, 6).at_eps_sum(&["y"], &spec).unwrap();
        let y2 = MultiSeries::var(var_names(&[EPS, "y"]), spec.clone(), "y").unwrap().pow(2).unwrap();
        assert_eq!(f, inv.pow(3).unwrap().mul(&y2).unwrap().scale(&rat(1, 4)));
    }

    #[test]
    fn invariant_examples() {
        let mut engine = Engine::new();
        assert_eq!(engine.gw_invariant(&InvariantKey::new(0, 1, &[0], &[])).unwrap(), int(1));
        assert_eq!(engine.gw_invariant(&InvariantKey::new(1, 1, &[2], &[])).unwrap(), rat(1, 24));
        assert_eq!(engine.gw_invariant(&InvariantKey::new(1, 0, &[], &[1])).unwrap(), rat(1, 12));
        assert_eq!(engine.gw_invariant(&InvariantKey::new(1, 1, &[3], &[])).unwrap(), int(0));
        assert_eq!(engine.gw_invariant(&InvariantKey::new(0, 1, &[], &[])).unwrap(), int(1));
        assert_eq!(engine.gw_invariant(&InvariantKey::new(0, 1, &[], &[1])).unwrap(), int(-2));
        assert_eq!(engine.gw_invariant(&InvariantKey::new(0, 2, &[2], &[])).unwrap(), rat(1, 4));
        assert!(matches!(
            engine.gw_invariant(&InvariantKey::new(0, 0, &[0], &[0])),
            Err(Error::UnstableModuli(0))
        ));
    }

    #[test]
    fn two_point_classes_in_degree_zero_vanish() {
        let mut engine = Engine::new();
        let f = engine.multipoint(0, &["a", "b"], &["c"], &TruncationSpec::eps(4)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn names_and_caps_are_canonicalized() {
        let mut engine = Engine::new();
        let spec = TruncationSpec::eps(4).with_cap("b", 1).with_cap("a", 3);
        let f = engine.multipoint(1, &[], &["a", "b"], &spec).unwrap();
        assert_eq!(f.variables(), &var_names(&[EPS, "a", "b"])[..]);
        let swapped = TruncationSpec::eps(4).with_cap("a", 1).with_cap("b", 3);
        let g = engine.multipoint(1, &[], &["b", "a"], &swapped).unwrap();
        assert_eq!(engine.memo().keys().filter(|k| k.d == 1 && k.n == 2).count(), 1);
        assert_eq!(f.rename(&[("a".into(), "b".into()), ("b".into(), "a".into())]).unwrap().embed(&var_names(&[EPS, "b", "a"])).unwrap(), g);
    }

    #[test]
    fn smaller_requests_reuse_larger_results() {
        let mut engine = Engine::new();
        let big = engine.multipoint(1, &["y"], &["z"], &TruncationSpec::eps(4)).unwrap();
        let before = engine.memo_len();
        let small_spec = TruncationSpec::eps(2).with_cap("z", 1);
        let small = engine.multipoint(1, &["y"], &["z"], &small_spec).unwrap();
        assert_eq!(engine.memo_len(), before);
        assert_eq!(small, big.truncate(&small_spec));
    }

    #[test]
    fn literal_zero_insertions_agree() {
        let spec = TruncationSpec::eps(4);
        for (d, m, n) in [(1, 0, 1), (1, 1, 1), (2, 1, 0), (1, 0, 2), (2, 0, 1)] {
            let ys: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
            let zs: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
            let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
            let z_refs: Vec<&str> = zs.iter().map(String::as_str).collect();
            let direct = Engine::new().multipoint(d, &y_refs, &z_refs, &spec).unwrap();
            let literal = Engine::with_zero_insertions(ZeroInsertions::Literal)
                .multipoint(d, &y_refs, &z_refs, &spec)
                .unwrap();
            assert_eq!(direct, literal, "d={d} m={m} n={n}");
        }
    }

    #[test]
    fn divisor_and_string_examples() {
        let mut engine = Engine::new();
        let r = engine.check_divisor_string(&InvariantKey::new(0, 1, &[], &[])).unwrap();
        assert_eq!(r.divisor, Some((int(1), int(1))));
        let r = engine.check_divisor_string(&InvariantKey::new(1, 1, &[2], &[])).unwrap();
        assert_eq!(r.divisor, Some((rat(1, 24), rat(1, 24))));
        let r = engine.check_divisor_string(&InvariantKey::new(1, 0, &[], &[1])).unwrap();
        assert!(r.string.is_some());
        let r = engine.check_divisor_string(&InvariantKey::new(0, 0, &[], &[1])).unwrap();
        assert!(r.divisor.is_none() && r.string.is_none());
    }
}
