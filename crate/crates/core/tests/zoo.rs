use std::sync::Arc;

use garside_kit::coxeter::{parse_coxeter, CoxeterSystem};
use garside_kit::garside_zoo::*;
use garside_kit::germ::{parse_germ, Verdict};

#[test]
fn builtin_specs_parse() {
    for s in ["braid:n=4", "braid:4", "klein:m=2", "freeabelian:n=3", "b3table", "prpinv", "dcat"] {
        assert!(parse_builtin(s).is_ok(), "{s}");
    }
    assert!(parse_builtin("hecke:3").is_err());
}

#[test]
fn braid_germ_sizes() {
    for (n, size) in [(2, 2), (3, 6), (4, 24)] {
        assert_eq!(braid_germ(n).unwrap().len(), size);
    }
}

#[test]
fn artin_germ_matches_braid_germ_on_s4() {
    let a = artin_germ(&CoxeterSystem::symmetric_group(4)).unwrap();
    let b = braid_germ(4).unwrap();
    assert_eq!(a.len(), b.len());
}

#[test]
fn b3_table_round_trips_through_text() {
    let (_, g) = load_builtin(&parse_builtin("b3table").unwrap(), 8).unwrap();
    let again = parse_germ(&g.to_text()).unwrap();
    assert_eq!(again.len(), g.len());
    let again = Arc::new(again);
    assert_eq!(again.garside_check(false, 100_000).verdict, Verdict::Garside);
}

#[test]
fn klein_listed_products_hold() {
    for m in 0..=4 {
        for inst in klein_listed_products(m, 8) {
            assert_eq!(klein_mul(inst.left, inst.right), inst.result, "m={m} {}", inst.rule);
        }
    }
}

#[test]
fn klein_coordinates() {
    assert_eq!(klein_coord(""), Some((0, 0)));
    assert_eq!(klein_coord("bab"), klein_coord("a"));
    assert_eq!(klein_coord("baa"), klein_coord("aab"));
    assert_eq!(klein_name(klein_coord("abb").unwrap()), "ab^2");
    assert_eq!(klein_name(klein_coord("ba").unwrap()), "ba");
    assert_eq!(klein_coord("abc"), None);
}

#[test]
fn freeabelian_nf_blocks_are_decreasing() {
    let nf = freeabelian_nf(&[2, 7, 4, 7]);
    assert_eq!(nf.delta_power, 2);
    for p in nf.blocks.windows(2) {
        assert!(p[0].iter().zip(&p[1]).all(|(x, y)| x >= y));
    }
}

#[test]
fn rank4_system_loads_from_disk() {
    let text = std::fs::read_to_string(format!("{}/data/rank4.cox", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let sys = parse_coxeter(&text).unwrap();
    assert_eq!(sys.rank(), 4);
    assert!(sys.enumerate_group(500).is_err());
}

#[test]
fn delta_squared_splits_into_two_deltas() {
    let n = 4;
    let d = SimpleElement::delta(n);
    let w: Vec<usize> = d.word.iter().chain(&d.word).copied().collect();
    assert_eq!(braid_greedy(n, &w, 100_000).unwrap(), vec![d.clone(), d]);
}
