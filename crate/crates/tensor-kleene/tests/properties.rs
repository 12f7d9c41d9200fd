use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use tensor_kleene::automaton::compile;
use tensor_kleene::bridge::cfg_to_expr;
use tensor_kleene::normal::{first_normal_form, nf_combine, CombineOp};
use tensor_kleene::tensor::{compositional_image, image_contains, positional_image};
use tensor_kleene::word::{encode_brackets, nf_mul, reduce_all_orders, EncodeMode};
use tensor_kleene::{enumerate_nf_image, equal_bounded, gen, nf_reduce, stack_recognize};
use tensor_kleene::{ImageOptions, NfWord, RecognizerConfig, Token, Verdict};

/// Fixed seed so every run explores the same cases.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x7e45_0121), failure_persistence: None, ..ProptestConfig::default() }
}

fn token(m: u8) -> impl Strategy<Value = Token> {
    prop_oneof![
        prop_oneof![Just('a'), Just('b')].prop_map(Token::Letter),
        (0..m).prop_map(Token::Open),
        (0..m).prop_map(Token::Close),
    ]
}

fn word(m: u8, max: usize) -> impl Strategy<Value = Vec<Token>> {
    prop::collection::vec(token(m), 0..=max)
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn reduction_is_idempotent(w in word(3, 12)) {
        let once = nf_reduce(&w);
        prop_assert_eq!(nf_reduce(&once.flatten()), once);
    }

    #[test]
    fn reduction_is_a_homomorphism(u in word(2, 8), v in word(2, 8)) {
        let uv = [u.clone(), v.clone()].concat();
        prop_assert_eq!(nf_reduce(&uv), nf_mul(&nf_reduce(&u), &nf_reduce(&v)));
    }

    #[test]
    fn every_reduction_order_agrees(w in word(2, 7)) {
        let all = reduce_all_orders(&w);
        prop_assert_eq!(all.len(), 1);
        prop_assert!(all.contains(&nf_reduce(&w).flatten()));
    }

    #[test]
    fn polycyclic_recoding_preserves_reduction(w in word(4, 8)) {
        let enc = encode_brackets(&w, 4, EncodeMode::Polycyclic).unwrap();
        let direct = nf_reduce(&w);
        let coded = nf_reduce(&enc);
        prop_assert_eq!(direct == NfWord::Zero, coded == NfWord::Zero);
        if let NfWord::Word(nf) = direct {
            let re = encode_brackets(&nf.flatten(), 4, EncodeMode::Polycyclic).unwrap();
            prop_assert_eq!(nf_reduce(&re), coded);
        }
    }

    #[test]
    fn images_grow_with_the_bound(seed in any::<u64>(), l in 2u32..8) {
        let mut rng = gen::rng(seed);
        let e = gen::bracket_expr(&mut rng, &['a', 'b'], 5);
        let small = enumerate_nf_image(&e, l).unwrap();
        let large = enumerate_nf_image(&e, l + 2).unwrap();
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn both_image_routes_agree(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let e = gen::bracket_expr(&mut rng, &['a', 'b'], 6);
        let o = ImageOptions::new(8);
        prop_assert_eq!(positional_image(&e, &o).unwrap(), compositional_image(&e, &o).unwrap());
    }

    #[test]
    fn distinct_witness_separates(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let l = gen::bracket_expr(&mut rng, &['a'], 4);
        let r = gen::bracket_expr(&mut rng, &['a'], 4);
        prop_assert!(equal_bounded(&l, &l, 8).unwrap().is_equal());
        if let Verdict::Distinct { witness, in_left } = equal_bounded(&l, &r, 8).unwrap() {
            let (has, lacks) = if in_left { (&l, &r) } else { (&r, &l) };
            let o = ImageOptions::new(32);
            prop_assert!(image_contains(has, &witness, 8, &o).unwrap());
            prop_assert!(!image_contains(lacks, &witness, 32, &o).unwrap());
        }
    }

    #[test]
    fn star_combinator_matches_star(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let e = gen::bracket_expr(&mut rng, &['a', 'b'], 4);
        let nf = first_normal_form(&compile(&e)).unwrap();
        let c = nf_combine(CombineOp::Star, &nf, None).unwrap();
        prop_assert!(equal_bounded(&c.expr().unwrap(), &tensor_kleene::Expr::star_of(&e), 8).unwrap().is_equal());
    }

    #[test]
    fn first_normal_form_keeps_language(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let a = gen::split_automaton(&mut rng, 3, &['a', 'b']);
        let nf = first_normal_form(&a).unwrap();
        prop_assert!(equal_bounded(&a.language(), &nf.expr().unwrap(), 8).unwrap().is_equal());
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn random_grammars_three_oracles(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let g = gen::grammar(&mut rng, 3, &['a', 'b']);
        let words = g.enumerate(5).unwrap();
        let e = cfg_to_expr(&g).unwrap();
        let cfg = RecognizerConfig::default();
        for n in 0..=5usize {
            for bits in 0..(1u32 << n) {
                let w: String = (0..n).map(|k| if bits >> k & 1 == 1 { 'b' } else { 'a' }).collect();
                let in_lang = words.contains(&w);
                prop_assert_eq!(g.cyk(&w), in_lang, "cyk {} on\n{}", w, g);
                prop_assert_eq!(stack_recognize(&e, &w, cfg).unwrap(), in_lang, "stack {} on\n{}", w, g);
            }
        }
    }
}
