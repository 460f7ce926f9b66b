use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use garside_kit::coxeter::{perm_of_word, CoxeterSystem};
use garside_kit::garside_zoo::*;
use garside_kit::germ::Germ;
use garside_kit::presentation::parse_presentation;
use garside_kit::rewrite::{ReductionSystem, Strategy as Reduce};

const FUEL: usize = 100_000;

fn klein() -> &'static ReductionSystem {
    static S: OnceLock<ReductionSystem> = OnceLock::new();
    S.get_or_init(|| {
        let text = std::fs::read_to_string(format!("{}/data/klein.pres", env!("CARGO_MANIFEST_DIR"))).unwrap();
        let p = parse_presentation(&text).unwrap();
        ReductionSystem::from_presentation(&p).unwrap().complete(64, FUEL).unwrap()
    })
}

fn braid4() -> &'static Arc<Germ> {
    static G: OnceLock<Arc<Germ>> = OnceLock::new();
    G.get_or_init(|| Arc::new(braid_germ(4).unwrap()))
}

fn klein_word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop_oneof![Just('a'), Just('b')], 0..12).prop_map(|v| v.into_iter().collect())
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn klein_normal_forms_are_irreducible_and_stable(w in klein_word()) {
        let sys = klein();
        let Ok(u) = sys.graph().path(&w.chars().map(|c| sys.graph().edge_id(&c.to_string()).unwrap()).collect::<Vec<_>>()) else {
            return Ok(());
        };
        let nf = sys.normalize(&u, FUEL).unwrap();
        prop_assert!(sys.is_irreducible(&nf));
        prop_assert_eq!(sys.normalize(&nf, FUEL).unwrap(), nf.clone());
        prop_assert_eq!(sys.normalize_with(&u, FUEL, Reduce::Rightmost).unwrap(), nf.clone());
        prop_assert!(!sys.order().less(&u, &nf));
    }

    #[test]
    fn klein_multiplication_is_associative(x in (0i64..5, -5i64..5), y in (0i64..5, -5i64..5), z in (0i64..5, -5i64..5)) {
        prop_assert_eq!(klein_mul(klein_mul(x, y), z), klein_mul(x, klein_mul(y, z)));
        prop_assert_eq!(klein_mul(x, klein_inv(x)), (0, 0));
    }

    #[test]
    fn braid_greedy_is_greedy_and_sound(w in prop::collection::vec(0usize..3, 0..14)) {
        let nf = braid_greedy_with(braid4(), 4, &w, FUEL).unwrap();
        let cox = CoxeterSystem::symmetric_group(4);
        for p in nf.windows(2) {
            prop_assert!(cox.angle(&p[0].word, &p[1].word));
            prop_assert!(!p[0].is_empty() && !p[1].is_empty());
        }
        let total: usize = nf.iter().map(|s| s.len()).sum();
        prop_assert_eq!(total, w.len());
        prop_assert_eq!(braid_greedy_descent(4, &w), nf);
    }

    #[test]
    fn simple_product_respects_length(p in perm(4), q in perm(4)) {
        let (u, v) = (SimpleElement::from_perm(p), SimpleElement::from_perm(q));
        match simple_product(&u, &v) {
            Some(uv) => {
                prop_assert_eq!(uv.len(), u.len() + v.len());
                prop_assert!(simple_divides(&u, &uv));
            }
            None => prop_assert!(u.len() + v.len() > 0),
        }
        prop_assert!(simple_divides(&u, &SimpleElement::delta(4)));
    }

    #[test]
    fn head_tail_variants_agree_on_s5(p in perm(5), q in perm(5)) {
        let (a, b) = (SimpleElement::from_perm(p), SimpleElement::from_perm(q));
        let (h, t) = head_tail(&a, &b);
        prop_assert_eq!((h.clone(), t.clone()), head_tail_incremental(&a, &b));
        prop_assert_eq!(h.len() + t.len(), a.len() + b.len());
        let w: Vec<usize> = a.word.iter().chain(&b.word).copied().collect();
        let v: Vec<usize> = h.word.iter().chain(&t.word).copied().collect();
        prop_assert_eq!(perm_of_word(5, &w), perm_of_word(5, &v));
    }

    #[test]
    fn freeabelian_nf_reassembles(counts in prop::collection::vec(0u64..9, 1..5)) {
        let nf = freeabelian_nf(&counts);
        let mut sum = vec![nf.delta_power; counts.len()];
        for b in &nf.blocks {
            prop_assert!(b.contains(&1) && b.contains(&0));
            for (s, &x) in sum.iter_mut().zip(b) {
                *s += x as u64;
            }
        }
        prop_assert_eq!(sum, counts);
        for p in nf.blocks.windows(2) {
            prop_assert!(p[0].iter().zip(&p[1]).all(|(x, y)| x >= y));
        }
    }

    #[test]
    fn squarefree_blocks(w in prop::collection::vec(0u8..3, 0..20)) {
        let blocks = squarefree_normalize(&w);
        prop_assert_eq!(blocks.concat(), w);
        for b in &blocks {
            prop_assert!(is_squarefree(b) && !b.is_empty());
        }
        for p in blocks.windows(2) {
            prop_assert_eq!(p[0].last(), p[1].first());
        }
    }

    #[test]
    fn braid_germ_upsilon_strategies_agree(w in prop::collection::vec(0usize..3, 0..10)) {
        let g = braid4();
        let ids: Vec<usize> = w.iter().map(|&s| g.id(&format!("s{}", s + 1)).unwrap()).collect();
        let l = g.upsilon_normalize_with(&ids, FUEL, Reduce::Leftmost).unwrap();
        let r = g.upsilon_normalize_with(&ids, FUEL, Reduce::Rightmost).unwrap();
        prop_assert!(g.is_upsilon_normal(&l));
        prop_assert_eq!(l, r);
    }
}
