use cp1_core::checks::{check_multipoint_structure, divisor_string_keys};
use cp1_core::combinatorics::compositions;
use cp1_core::rational::{int, rat};
use cp1_core::toda::{Engine, InvariantKey, ZeroInsertions};
use cp1_core::{TruncationSpec, EPS};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn genus_zero_one_point_descendants() {
    // <tau_{2d-2,Q}>_{0,d} = 1/(d!)^2
    let mut engine = Engine::new();
    for (d, den) in [(1u32, 1i64), (2, 4), (3, 36), (4, 576)] {
        let key = InvariantKey::new(0, d, &[2 * d - 2], &[]);
        assert_eq!(engine.gw_invariant(&key).unwrap(), rat(1, den), "d={d}");
    }
}

#[test]
fn a_line_through_two_points() {
    let mut engine = Engine::new();
    assert_eq!(engine.gw_invariant(&InvariantKey::new(0, 1, &[0, 0], &[])).unwrap(), int(1));
}

#[test]
fn capped_requests_match_the_full_series() {
    let mut full_engine = Engine::new();
    let mut engine = Engine::new();
    for (d, m, n) in [(1u32, 1usize, 1usize), (2, 1, 1), (2, 0, 2), (1, 2, 1), (3, 1, 0)] {
        let ys = names("y", m);
        let zs = names("z", n);
        let full = full_engine.multipoint(d, &refs(&ys), &refs(&zs), &TruncationSpec::eps(4)).unwrap();
        for g in 0..=2u32 {
            let dim = 2 * g + 2 * d + n as u32;
            if dim < 2 {
                continue;
            }
            for split in compositions(dim - 2, m + n) {
                let key = InvariantKey::new(g, d, &split[..m], &split[m..]);
                let mut exps: Vec<(&str, u32)> = vec![(EPS, 2 * g)];
                for (name, &k) in ys.iter().chain(&zs).zip(&split) {
                    exps.push((name, k));
                }
                let expected = full.coefficient(&exps).unwrap();
                assert_eq!(engine.gw_invariant(&key).unwrap(), expected, "{key}");
            }
        }
    }
}

#[test]
fn literal_and_direct_zero_insertions_agree_in_higher_degree() {
    let spec = TruncationSpec::eps(4).with_cap("a", 3).with_cap("b", 4);
    let direct = Engine::new().multipoint(2, &["a"], &["b"], &spec).unwrap();
    let literal = Engine::with_zero_insertions(ZeroInsertions::Literal)
        .multipoint(2, &["a"], &["b"], &spec)
        .unwrap();
    assert_eq!(direct, literal);
    let spec = TruncationSpec::eps(2);
    let direct = Engine::new().multipoint(3, &[], &["b"], &spec).unwrap();
    let literal = Engine::with_zero_insertions(ZeroInsertions::Literal)
        .multipoint(3, &[], &["b"], &spec)
        .unwrap();
    assert_eq!(direct, literal);
}

#[test]
fn memoized_series_are_symmetric_even_and_homogeneous() {
    let mut engine = Engine::new();
    for (d, m, n) in [(1u32, 2usize, 1usize), (2, 1, 2), (2, 0, 3), (3, 1, 1)] {
        let ys = names("y", m);
        let zs = names("z", n);
        engine.multipoint(d, &refs(&ys), &refs(&zs), &TruncationSpec::eps(4)).unwrap();
    }
    assert!(engine.memo_len() > 10);
    for (key, series) in engine.memo() {
        check_multipoint_structure(key, series).unwrap();
    }
}

#[test]
fn divisor_and_string_in_low_degree() {
    let mut engine = Engine::new();
    let keys = divisor_string_keys(1, 2, 3);
    assert!(keys.len() > 50);
    for key in keys {
        engine.check_divisor_string(&key).unwrap();
    }
}
