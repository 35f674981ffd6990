//! Structural checks on computed series and the identity suites run by the
//! test harness and by `cp1-gw verify`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;

use crate::combinatorics::{compositions, tree_valence_polynomial, verify_hurwitz, TREE_BOUND};
use crate::degree_zero::{
    f1_closed, f1_recursive, fbar, hodge_integral, kernel_at, lambda_g_onepoint, sum_power, HodgeKey,
};
use crate::error::{Error, Result};
use crate::rational::{multinomial, Rational};
use crate::series::{var_names, MultiSeries, TruncationSpec, EPS};
use crate::special::KernelKind;
use crate::toda::{Engine, InvariantKey, SeriesKey};

fn violated(msg: String) -> Error {
    Error::IdentityViolated(msg)
}

fn first_difference(lhs: &MultiSeries, rhs: &MultiSeries) -> Result<Option<String>> {
    let diff = lhs.sub(rhs)?;
    let first = diff
        .terms()
        .next()
        .map(|(exp, c)| format!("monomial {exp:?} over {:?} differs by {c}", lhs.variables()));
    Ok(first)
}

fn expect_equal(label: &str, lhs: &MultiSeries, rhs: &MultiSeries) -> Result<()> {
    match first_difference(lhs, rhs)? {
        None => Ok(()),
        Some(msg) => Err(violated(format!("{label}: {msg}"))),
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn refs(names: &[String]) -> Vec<&str> {
    names.iter().map(String::as_str).collect()
}

/// Invariance under every transposition of two of `group`, compared where
/// both caps allow.
pub fn check_symmetry(series: &MultiSeries, group: &[String]) -> Result<()> {
    for (i, a) in group.iter().enumerate() {
        for b in &group[i + 1..] {
            let spec = series.spec();
            let common = match (spec.cap(a), spec.cap(b)) {
                (Some(x), Some(y)) => spec.clone().with_cap(a, x.min(y)).with_cap(b, x.min(y)),
                (Some(x), None) | (None, Some(x)) => spec.clone().with_cap(a, x).with_cap(b, x),
                (None, None) => spec.clone(),
            };
            let swapped = series.swap_variables(a, b)?;
            if let Some(msg) = first_difference(&series.truncate(&common), &swapped.truncate(&common))? {
                return Err(violated(format!("not symmetric in {a}, {b}: {msg}")));
            }
        }
    }
    Ok(())
}

pub fn check_eps_parity(series: &MultiSeries) -> Result<()> {
    for (exp, c) in series.terms() {
        if series.eps_exponent(exp) % 2 == 1 {
            return Err(violated(format!("odd power of eps at {exp:?} with coefficient {c}")));
        }
    }
    Ok(())
}

/// Every monomial `eps^k v^a` has `|a| = k + shift`.
pub fn check_homogeneity(series: &MultiSeries, shift: i64) -> Result<()> {
    let others: Vec<String> = series.variables().iter().filter(|v| *v != EPS).cloned().collect();
    for (exp, c) in series.terms() {
        let k = series.eps_exponent(exp) as i64;
        let degree = series.degree_in(exp, &others) as i64;
        if degree != k + shift {
            return Err(violated(format!(
                "monomial {exp:?} (coefficient {c}) has degree {degree}, expected {}",
                k + shift
            )));
        }
    }
    Ok(())
}

/// Symmetry in each kind of variable, eps-parity, and the degree
/// `2g - 2 + 2d + n` of each `eps^{2g}` slice, for a memoized series.
pub fn check_multipoint_structure(key: &SeriesKey, series: &MultiSeries) -> Result<()> {
    check_symmetry(series, &key.y_names())?;
    check_symmetry(series, &key.z_names())?;
    check_eps_parity(series)?;
    check_homogeneity(series, 2 * key.d as i64 + key.n as i64 - 2)
}

/// `Fbar_h[z_1..z_{n+1}]` at `z_{n+1} = 0` equals
/// `Z Fbar_h[z_1..z_n] + [h = 0, n = 2]`.
pub fn check_string_relation(h: u32, n: usize, eps_cap: u32) -> Result<()> {
    let spec = TruncationSpec::eps(eps_cap);
    let big = names("z", n + 1);
    let small = names("z", n);
    let lhs = fbar(h, &refs(&big), &spec)?.specialize_zero(&big[n])?;
    let vars = {
        let mut v = alloc::vec![EPS.to_string()];
        v.extend(small.iter().cloned());
        v
    };
    let mut rhs = fbar(h, &refs(&small), &spec)?.mul(&sum_power(&vars, &small, 1, &spec)?)?;
    if h == 0 && n == 2 {
        rhs = rhs.add_constant(&Rational::one());
    }
    expect_equal(&format!("string relation h={h} n={n}"), &lhs, &rhs)
}

/// `Fbar_1 = ((eps Z/2)/sinh(eps Z/2)) Z^{-1} f1` for `n >= 3`.
pub fn check_fbar_one_from_f1(n: usize, eps_cap: u32) -> Result<()> {
    let spec = TruncationSpec::eps(eps_cap);
    let zs = names("z", n);
    let mut vars = alloc::vec![EPS.to_string()];
    vars.extend(zs.iter().cloned());
    let ratio = kernel_at(KernelKind::SinhRatio, &vars, &zs, &spec)?;
    let rhs = ratio.mul(&f1_closed(&refs(&zs), &spec)?.divide_by_sum(&zs)?)?;
    let lhs = fbar(1, &refs(&zs), &spec)?;
    expect_equal(&format!("Fbar_1 from f1, n={n}"), &lhs, &rhs)
}

/// The recursion for `f1` agrees with the closed form.
pub fn check_f1_equivalence(n: usize, spec: &TruncationSpec) -> Result<()> {
    let zs = names("z", n);
    let closed = f1_closed(&refs(&zs), spec)?;
    let recursive = f1_recursive(&refs(&zs), spec)?;
    expect_equal(&format!("f1 recursion vs closed form, n={n}"), &recursive, &closed)
}

/// The one-point `lambda_g` closed form agrees with the Hodge series.
pub fn check_lambda_g(genus: u32) -> Result<()> {
    let closed = lambda_g_onepoint(genus)?;
    let series = hodge_integral(&HodgeKey::new(genus, 0, &[2 * genus - 2]))?;
    if closed != series {
        return Err(violated(format!("lambda_g at g={genus}: {closed} != {series}")));
    }
    Ok(())
}

/// `lambda_g` integrals are multinomial multiples of the one with all
/// psi classes on the first point.
pub fn check_lambda_g_multinomial(genus: u32, n: usize) -> Result<()> {
    let top = 2 * genus as i64 + n as i64 - 3;
    if genus == 0 || top < 0 {
        return Ok(());
    }
    let top = top as u32;
    let mut first = alloc::vec![0u32; n];
    first[0] = top;
    let base = hodge_integral(&HodgeKey::new(genus, 0, &first))?;
    for psi in compositions(top, n) {
        let value = hodge_integral(&HodgeKey::new(genus, 0, &psi))?;
        if value != &base * Rational::from_integer(multinomial(&psi)) {
            return Err(violated(format!("multinomial structure at g={genus} psi={psi:?}")));
        }
    }
    Ok(())
}

/// Degree-zero series structure: symmetry, parity and homogeneity of
/// `Fbar_0` (shift `n-3`), `Fbar_1` (`n-2`) and `f1` (`n-1`).
pub fn check_degree_zero_structure(n: usize, eps_cap: u32) -> Result<()> {
    let spec = TruncationSpec::eps(eps_cap);
    let zs = names("z", n);
    let shift = n as i64;
    for (series, s) in [
        (fbar(0, &refs(&zs), &spec)?, shift - 3),
        (fbar(1, &refs(&zs), &spec)?, shift - 2),
        (f1_closed(&refs(&zs), &spec)?, shift - 1),
    ] {
        check_symmetry(&series, &zs)?;
        check_eps_parity(&series)?;
        check_homogeneity(&series, s)?;
    }
    Ok(())
}

/// `Z^{n-2}` as a sum over labeled trees.
pub fn check_tree_identity(n: usize) -> Result<()> {
    let zs = var_names(&names("z", n));
    let lhs = tree_valence_polynomial(n)?;
    let rhs = sum_power(&zs, &zs, n as u32 - 2, &TruncationSpec::unbounded())?;
    expect_equal(&format!("tree identity n={n}"), &lhs, &rhs)
}

/// Brackets `X` with `d <= max_degree`, `g <= max_genus` and fewer than
/// `max_insertions` insertions for which adding `tau_{0,Q}` or
/// `tau_{0,P}` can give a nonzero bracket; for every other `X` both sides
/// of both equations vanish by the dimension constraint.
pub fn divisor_string_keys(max_genus: u32, max_degree: u32, max_insertions: usize) -> Vec<InvariantKey> {
    let mut out = Vec::new();
    for degree in 0..=max_degree {
        for genus in 0..=max_genus {
            for count in 0..max_insertions {
                for m in 0..=count {
                    let n = count - m;
                    let base = InvariantKey::new(genus, degree, &alloc::vec![0; m], &alloc::vec![0; n]);
                    let room = base.virtual_dimension() - base.insertion_degree() + 1;
                    if room < 0 {
                        continue;
                    }
                    for total in 0..=room as u32 {
                        for split in compositions(total, count) {
                            let (q, p) = split.split_at(m);
                            if q.windows(2).any(|w| w[0] > w[1]) || p.windows(2).any(|w| w[0] > w[1]) {
                                continue;
                            }
                            out.push(InvariantKey::new(genus, degree, q, p));
                        }
                    }
                }
            }
        }
    }
    out
}

/// One line of a suite report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: String,
    /// `None` when the check passed.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn record(out: &mut Vec<CheckOutcome>, suite: &'static str, name: String, result: Result<()>) {
    out.push(CheckOutcome {
        suite,
        name,
        failure: result.err().map(|e| e.to_string()),
    });
}

pub fn suite_hurwitz(max_n: usize) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for which in [1u8, 2] {
            record(
                &mut out,
                "hurwitz",
                format!("hurwitz identity {which}, n={n}"),
                verify_hurwitz(which, n).map(|_| ()),
            );
        }
    }
    for n in 2..=(max_n + 1).min(TREE_BOUND) {
        record(&mut out, "hurwitz", format!("tree identity n={n}"), check_tree_identity(n));
    }
    out
}

/// f1 recursion, `Fbar_1` from `f1`, the string relation, and structure,
/// with eps up to `2 * max_genus`.
pub fn suite_degree0(max_n: usize, max_genus: u32) -> Vec<CheckOutcome> {
    let eps_cap = 2 * max_genus;
    let spec = TruncationSpec::eps(eps_cap);
    let mut out = Vec::new();
    for n in 1..=max_n {
        record(&mut out, "degree0", format!("f1 recursion = closed form, n={n}"), check_f1_equivalence(n, &spec));
    }
    for n in 3..=max_n.max(3) {
        record(&mut out, "degree0", format!("Fbar_1 from f1, n={n}"), check_fbar_one_from_f1(n, eps_cap));
    }
    for h in 0..=1 {
        for n in 1..=max_n {
            record(
                &mut out,
                "degree0",
                format!("string relation h={h}, n={n}"),
                check_string_relation(h, n, eps_cap),
            );
        }
    }
    for n in 1..=max_n {
        record(
            &mut out,
            "degree0",
            format!("symmetry, parity, homogeneity, n={n}"),
            check_degree_zero_structure(n, eps_cap),
        );
    }
    out
}

pub fn suite_hodge(max_n: usize, max_genus: u32) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for g in 1..=max_genus {
        record(&mut out, "hodge", format!("lambda_g one-point formula, g={g}"), check_lambda_g(g));
    }
    for g in 1..=max_genus.min(3) {
        for n in 1..=max_n.min(3) {
            record(
                &mut out,
                "hodge",
                format!("lambda_g multinomial structure, g={g}, n={n}"),
                check_lambda_g_multinomial(g, n),
            );
        }
    }
    out
}

/// Divisor and string equations for `d <= max_degree`, `g <= max_genus`
/// and at most three insertions, then the structure of every series the
/// engine computed.
pub fn suite_toda(engine: &mut Engine, max_genus: u32, max_degree: u32) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let base = engine.multipoint(1, &["y"], &[], &TruncationSpec::eps(2 * max_genus.max(2)));
    let expected = kernel_at(
        KernelKind::SinhRatioInverse,
        &var_names(&[EPS, "y"]),
        &var_names(&["y"]),
        &TruncationSpec::eps(2 * max_genus.max(2)),
    );
    let base_check = match (base, expected) {
        (Ok(b), Ok(e)) => expect_equal("degree one, one point class", &b, &e),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    record(&mut out, "toda", "degree one base series".into(), base_check);

    for degree in 0..=max_degree {
        for genus in 0..=max_genus {
            let mut result = Ok(());
            let mut count = 0usize;
            for key in divisor_string_keys(genus, degree, 3)
                .into_iter()
                .filter(|k| k.genus == genus && k.degree == degree)
            {
                count += 1;
                if let Err(e) = engine.check_divisor_string(&key) {
                    result = Err(e);
                    break;
                }
            }
            record(
                &mut out,
                "toda",
                format!("divisor and string equations, g={genus}, d={degree} ({count} brackets)"),
                result,
            );
        }
    }

    let mut structure = Ok(());
    for (key, series) in engine.memo() {
        if let Err(e) = check_multipoint_structure(key, series) {
            structure = Err(violated(format!("{key:?}: {e}")));
            break;
        }
    }
    record(
        &mut out,
        "toda",
        format!("symmetry, parity, homogeneity of {} memoized series", engine.memo_len()),
        structure,
    );
    out
}
