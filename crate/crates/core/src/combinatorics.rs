//! Enumeration primitives and brute-force checks of the Hurwitz tree
//! identities.
//!
//! Every stream comes out in a fixed order: subsets in colex order (the
//! bitmask order), set partitions by restricted growth strings, and
//! compositions lexicographically.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{binomial, Rational};
use crate::series::{var_names, MultiSeries, TruncationSpec};

/// Default largest vertex count for tree enumeration.
pub const TREE_BOUND: usize = 7;

/// All subsets of `{0, .., n-1}` as sorted index lists, in colex order.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// The `2^n - 1` proper subsets of `{0, .., n-1}`, the empty set first.
pub fn proper_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    subsets(n).filter(move |s| s.len() < n)
}

/// A partition of `ground` into nonempty blocks. The empty ground set has
/// exactly one partition, with no blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    pub ground: Vec<String>,
    pub parts: Vec<Vec<String>>,
}

/// Restricted growth strings of length `n`: `a[0] = 0` and
/// `a[i] <= 1 + max(a[..i])`.
pub struct GrowthStrings {
    current: Option<Vec<usize>>,
}

impl Iterator for GrowthStrings {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut a = out.clone();
        let mut advanced = false;
        for i in (1..a.len()).rev() {
            let prefix_max = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= prefix_max {
                a[i] += 1;
                for slot in a.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                advanced = true;
                break;
            }
        }
        self.current = advanced.then_some(a);
        Some(out)
    }
}

pub fn growth_strings(n: usize) -> GrowthStrings {
    GrowthStrings {
        current: Some(vec![0; n]),
    }
}

/// Set partitions of `{0, .., n-1}` as lists of index blocks.
pub fn index_partitions(n: usize) -> impl Iterator<Item = Vec<Vec<usize>>> {
    growth_strings(n).map(|rgs| {
        let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            parts[b].push(i);
        }
        parts
    })
}

pub fn set_partitions(ground: &[String]) -> impl Iterator<Item = SetPartition> + '_ {
    index_partitions(ground.len()).map(move |blocks| SetPartition {
        ground: ground.to_vec(),
        parts: blocks
            .into_iter()
            .map(|b| b.into_iter().map(|i| ground[i].clone()).collect())
            .collect(),
    })
}

/// Tuples of `parts` nonnegative integers summing to `total`. With zero
/// parts there is one (empty) tuple when `total == 0` and none otherwise.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn fill(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            fill(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(total, parts, &mut Vec::new(), &mut out);
    out
}

/// A tree on the vertices `1..=n`, edges stored as `(small, large)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabeledTree {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl LabeledTree {
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Prüfer sequence of the tree (length `n - 2`, empty for `n <= 2`).
    pub fn prufer(&self) -> Vec<usize> {
        let mut edges = self.edges.clone();
        let mut out = Vec::new();
        for _ in 0..self.n.saturating_sub(2) {
            let leaf = (1..=self.n)
                .find(|&v| edges.iter().filter(|(a, b)| *a == v || *b == v).count() == 1)
                .expect("a tree with at least two edges has a leaf");
            let edge = *edges
                .iter()
                .find(|(a, b)| *a == leaf || *b == leaf)
                .expect("leaf edge");
            out.push(if edge.0 == leaf { edge.1 } else { edge.0 });
            edges.remove(&edge);
        }
        out
    }

    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.n {
            return false;
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }
}

/// Decodes a Prüfer sequence over `1..=n`.
pub fn prufer_decode(n: usize, seq: &[usize]) -> LabeledTree {
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = BTreeSet::new();
    for &v in seq {
        let leaf = (1..=n).find(|&u| degree[u] == 1).expect("leaf exists");
        edges.insert((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&u| degree[u] == 1).collect();
    if rest.len() == 2 {
        edges.insert((rest[0], rest[1]));
    }
    LabeledTree { n, edges }
}

/// All `n^{n-2}` labeled trees on `n` vertices, by Prüfer decoding.
pub fn labeled_trees(n: usize) -> Result<Vec<LabeledTree>> {
    labeled_trees_bounded(n, TREE_BOUND)
}

pub fn labeled_trees_bounded(n: usize, bound: usize) -> Result<Vec<LabeledTree>> {
    if n > bound {
        return Err(Error::BoundExceeded { requested: n, bound });
    }
    if n == 0 {
        return Err(Error::InvalidIndex("a tree needs at least one vertex".to_string()));
    }
    let len = n.saturating_sub(2);
    let count = n.pow(len as u32);
    Ok((0..count)
        .map(|mut code| {
            let mut seq = vec![0; len];
            for slot in seq.iter_mut().rev() {
                *slot = code % n + 1;
                code /= n;
            }
            prufer_decode(n, &seq)
        })
        .collect())
}

fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| alloc::format!("z{i}")).collect()
}

/// `sum_T prod_i z_i^{d(T,i) - 1}` over labeled trees on `n` vertices.
pub fn tree_valence_polynomial(n: usize) -> Result<MultiSeries> {
    if n < 2 {
        return Err(Error::TooFewVariables { needed: 2, got: n });
    }
    let trees = labeled_trees(n)?;
    MultiSeries::from_terms(
        z_names(n),
        TruncationSpec::unbounded(),
        trees.iter().map(|t| {
            let exp = (1..=n).map(|v| t.valence(v) as u32 - 1).collect();
            (exp, Rational::from_integer(1.into()))
        }),
    )
}

/// What a successful Hurwitz verification covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzReport {
    pub which: u8,
    pub n: usize,
    /// One label per polynomial identity that was checked.
    pub checked: Vec<String>,
}

/// Polynomials in `x`, `y`, `z1..zn`.
struct Ring {
    vars: Vec<String>,
    n: usize,
}

impl Ring {
    fn new(n: usize) -> Self {
        let mut vars = var_names(&["x", "y"]);
        vars.extend(z_names(n));
        Ring { vars, n }
    }

    fn one(&self) -> MultiSeries {
        MultiSeries::one(self.vars.clone(), TruncationSpec::unbounded()).expect("ring")
    }

    /// `c_x x + c_y y + sum_{i in set} z_i`
    fn linear(&self, cx: i64, cy: i64, set: &[usize]) -> MultiSeries {
        let mut terms = Vec::new();
        let unit = |k: usize| {
            let mut e = vec![0; self.vars.len()];
            e[k] = 1;
            e
        };
        terms.push((unit(0), Rational::from_integer(cx.into())));
        terms.push((unit(1), Rational::from_integer(cy.into())));
        for &i in set {
            terms.push((unit(2 + i), Rational::from_integer(1.into())));
        }
        MultiSeries::from_terms(self.vars.clone(), TruncationSpec::unbounded(), terms).expect("ring")
    }

    fn complement(&self, set: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|i| !set.contains(i)).collect()
    }

    fn all(&self) -> Vec<usize> {
        (0..self.n).collect()
    }
}

fn compare(label: &str, lhs: &MultiSeries, rhs: &MultiSeries) -> Result<()> {
    let diff = lhs.sub(rhs)?;
    let first = diff.terms().next().map(|(exp, c)| {
        alloc::format!("{label}: monomial {exp:?} in {:?} differs by {c}", lhs.variables())
    });
    match first {
        None => Ok(()),
        Some(msg) => Err(Error::IdentityViolated(msg)),
    }
}

/// Checks one of the two Hurwitz identities for `n` points by exact
/// expansion, together with the coefficient identities derived from it.
///
/// Identity 1 is checked after multiplying the summands with `|I| = 0` or
/// `|I| = n` by `xy`, which keeps everything polynomial. Identity 2 is
/// checked separately for the coefficient of each `dz_k`.
pub fn verify_hurwitz(which: u8, n: usize) -> Result<HurwitzReport> {
    if n == 0 {
        return Err(Error::TooFewVariables { needed: 1, got: 0 });
    }
    let r = Ring::new(n);
    let all = r.all();
    let mut checked = Vec::new();
    match which {
        1 => {
            // (x+y)(x+y+Z)^{n-1} = xy sum_I (x+Z_I)^{|I|-1} (y+Z-Z_I)^{n-|I|-1}
            let lhs = r.linear(1, 1, &[]).mul(&r.linear(1, 1, &all).pow(n as u32 - 1)?)?;
            let mut rhs = r.linear(0, 0, &[]).scale(&Rational::zero());
            for set in subsets(n) {
                let rest = r.complement(&set);
                let k = set.len();
                let term = if k == 0 {
                    r.linear(0, 1, &[]).mul(&r.linear(0, 1, &all).pow(n as u32 - 1)?)?
                } else if k == n {
                    r.linear(1, 0, &[]).mul(&r.linear(1, 0, &all).pow(n as u32 - 1)?)?
                } else {
                    r.linear(1, 0, &[])
                        .mul(&r.linear(0, 1, &[]))?
                        .mul(&r.linear(1, 0, &set).pow(k as u32 - 1)?)?
                        .mul(&r.linear(0, 1, &rest).pow((n - k) as u32 - 1)?)?
                };
                rhs = rhs.add(&term)?;
            }
            compare("identity 1", &lhs, &rhs)?;
            checked.push(alloc::format!("identity 1, n={n}"));

            // (i+1) C(n-1,i) Z^{n-i-1} = sum_{0<|I|<n} C(|I|-1,i-1) Z_I^{|I|-i} (Z-Z_I)^{n-|I|-1}
            for i in 1..n {
                let lhs = r
                    .linear(0, 0, &all)
                    .pow((n - i - 1) as u32)?
                    .scale(&Rational::from_integer(
                        binomial(n as u32 - 1, i as u32) * (i as i64 + 1),
                    ));
                let rhs = corollary_sum(&r, i, None)?;
                compare(&alloc::format!("coefficient identity, i={i}"), &lhs, &rhs)?;
                checked.push(alloc::format!("coefficient identity i={i}, n={n}"));
            }
        }
        2 => {
            for k in 0..n {
                // dz_k: (x+y+Z)^{n-1} = y sum_{I ∋ k} (x+Z_I)^{|I|-1} (y+Z-Z_I)^{n-|I|-1}
                let lhs = r.linear(1, 1, &all).pow(n as u32 - 1)?;
                let mut rhs = r.one().scale(&Rational::zero());
                for set in subsets(n).filter(|s| s.contains(&k)) {
                    let rest = r.complement(&set);
                    let size = set.len();
                    let term = if size == n {
                        r.linear(1, 0, &all).pow(n as u32 - 1)?
                    } else {
                        r.linear(0, 1, &[])
                            .mul(&r.linear(1, 0, &set).pow(size as u32 - 1)?)?
                            .mul(&r.linear(0, 1, &rest).pow((n - size) as u32 - 1)?)?
                    };
                    rhs = rhs.add(&term)?;
                }
                compare(&alloc::format!("identity 2, dz{}", k + 1), &lhs, &rhs)?;
                checked.push(alloc::format!("identity 2 dz{}, n={n}", k + 1));

                // i C(n-1,i) Z^{n-i-1} dZ = sum_{0<|I|<n} C(|I|-1,i-1) Z_I^{|I|-i} (Z-Z_I)^{n-|I|-1} dZ_I
                for i in 1..n {
                    let lhs = r
                        .linear(0, 0, &all)
                        .pow((n - i - 1) as u32)?
                        .scale(&Rational::from_integer(
                            binomial(n as u32 - 1, i as u32) * i as i64,
                        ));
                    let rhs = corollary_sum(&r, i, Some(k))?;
                    compare(
                        &alloc::format!("differential coefficient identity, i={i}, dz{}", k + 1),
                        &lhs,
                        &rhs,
                    )?;
                    checked.push(alloc::format!("differential coefficient identity i={i} dz{}, n={n}", k + 1));
                }
            }
        }
        _ => return Err(Error::InvalidIndex(alloc::format!("Hurwitz identity {which}"))),
    }
    Ok(HurwitzReport { which, n, checked })
}

/// `sum_{0<|I|<n, k in I} C(|I|-1, i-1) Z_I^{|I|-i} (Z-Z_I)^{n-|I|-1}`, the
/// membership condition applying only when `k` is given.
fn corollary_sum(r: &Ring, i: usize, k: Option<usize>) -> Result<MultiSeries> {
    let n = r.n;
    let mut acc = r.one().scale(&Rational::zero());
    for set in subsets(n) {
        let size = set.len();
        if size == 0 || size == n || size < i {
            continue;
        }
        if let Some(k) = k {
            if !set.contains(&k) {
                continue;
            }
        }
        let rest = r.complement(&set);
        let term = r
            .linear(0, 0, &set)
            .pow((size - i) as u32)?
            .mul(&r.linear(0, 0, &rest).pow((n - size - 1) as u32)?)?
            .scale(&Rational::from_integer(binomial(size as u32 - 1, i as u32 - 1)));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &v in &row {
                let last = *next.last().unwrap();
                next.push(last + v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn proper_subset_streams() {
        assert_eq!(proper_subsets(1).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(
            proper_subsets(2).collect::<Vec<_>>(),
            vec![vec![], vec![0], vec![1]]
        );
        assert_eq!(proper_subsets(5).count(), 31);
    }

    #[test]
    fn partition_counts_follow_bell_numbers() {
        assert_eq!(bell(3), 5);
        assert_eq!(bell(4), 15);
        for n in 0..=7 {
            let all: Vec<_> = index_partitions(n).collect();
            assert_eq!(all.len(), bell(n), "n={n}");
            let distinct: BTreeSet<_> = all
                .iter()
                .map(|p| {
                    let mut p = p.clone();
                    p.sort();
                    p
                })
                .collect();
            assert_eq!(distinct.len(), all.len());
            for p in &all {
                let mut flat: Vec<usize> = p.iter().flatten().copied().collect();
                flat.sort();
                assert_eq!(flat, (0..n).collect::<Vec<_>>());
                assert!(p.iter().all(|b| !b.is_empty()));
            }
        }
        let empty: Vec<_> = set_partitions(&[]).collect();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].parts.is_empty());
    }

    #[test]
    fn composition_streams() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 0).is_empty());
        for total in 0..6u32 {
            for parts in 1..5usize {
                let expect = binomial(total + parts as u32 - 1, parts as u32 - 1);
                assert_eq!(num_bigint::BigInt::from(compositions(total, parts).len()), expect);
            }
        }
    }

    #[test]
    fn cayley_counts_and_prufer_bijection() {
        assert_eq!(labeled_trees(1).unwrap().len(), 1);
        assert_eq!(labeled_trees(2).unwrap().len(), 1);
        assert_eq!(labeled_trees(3).unwrap().len(), 3);
        assert_eq!(labeled_trees(5).unwrap().len(), 125);
        for n in 2..=6 {
            let trees = labeled_trees(n).unwrap();
            assert_eq!(trees.len(), n.pow(n as u32 - 2));
            let distinct: BTreeSet<_> = trees.iter().cloned().collect();
            assert_eq!(distinct.len(), trees.len());
            for t in &trees {
                assert!(t.is_tree());
                assert_eq!((1..=n).map(|v| t.valence(v)).sum::<usize>(), 2 * (n - 1));
                assert_eq!(prufer_decode(n, &t.prufer()), *t);
            }
        }
        assert!(matches!(labeled_trees(8), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn tree_polynomial_small_cases() {
        let one = MultiSeries::one(z_names(2), TruncationSpec::unbounded()).unwrap();
        assert_eq!(tree_valence_polynomial(2).unwrap(), one);
        let p3 = tree_valence_polynomial(3).unwrap();
        assert_eq!(p3.len(), 3);
        assert!(p3.terms().all(|(e, c)| e.iter().sum::<u32>() == 1 && *c == Rational::from_integer(1.into())));
    }

    #[test]
    fn hurwitz_single_point() {
        let report = verify_hurwitz(1, 1).unwrap();
        assert_eq!(report.checked.len(), 1);
        assert!(verify_hurwitz(2, 1).is_ok());
        assert!(verify_hurwitz(3, 2).is_err());
    }

    #[test]
    fn hurwitz_four_points() {
        verify_hurwitz(1, 4).unwrap();
        let report = verify_hurwitz(2, 4).unwrap();
        assert!(report.checked.iter().any(|c| c.contains("dz2")));
    }
}
