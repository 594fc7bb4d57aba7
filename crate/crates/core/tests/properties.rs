mod common;

use hpsg::decode::{decode_joint, DecodeConfig};
use hpsg::division::{from_division, to_division};
use hpsg::hpsg::{fuse, project_constituents, project_dependencies, validate};
use hpsg::scoring::{read_scores, write_scores, CategoryVocab, ScoreTable};
use hpsg::tree::Token;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn division_round_trip(seed in any::<u64>(), n in 1usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = common::random_tree(&mut rng, n);
        let division = to_division(&tree).unwrap();
        let (back, issues) = from_division(&division).unwrap();
        prop_assert!(issues.is_empty(), "{issues:?}");
        prop_assert_eq!(back, tree);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Views projected from one head-annotated tree are always compatible:
    /// fusing them back leaves nothing to repair.
    #[test]
    fn fuse_of_compatible_views_is_clean(seed in any::<u64>(), n in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = common::random_tree(&mut rng, n);
        let c = project_constituents(&tree).unwrap();
        let d = project_dependencies(&tree).unwrap();
        prop_assert!(d.is_projective());
        let (fused, report) = fuse(&c, &d).unwrap();
        prop_assert!(report.is_clean(), "{report:?}");
        prop_assert_eq!(validate(&fused).residual, 0);
        prop_assert_eq!(project_constituents(&fused).unwrap(), c);
        prop_assert_eq!(project_dependencies(&fused).unwrap().heads, d.heads);
    }

    #[test]
    fn score_file_round_trip(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocab = CategoryVocab::from_names(["<E>", "#", "NP", "VP"]);
        let table = ScoreTable::uniform(n, vocab.len(), -2.0, 2.0, &mut rng);
        let text = write_scores([(1, &table)], &vocab);
        let mut read_vocab = CategoryVocab::new();
        let back = read_scores(&text, &mut read_vocab).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(read_vocab.names(), vocab.names());
        prop_assert_eq!(&back[0].1, &table);
    }

    /// Decoding is total: any finite table yields a well-formed tree whose
    /// root spans the sentence.
    #[test]
    fn joint_decode_is_total(seed in any::<u64>(), n in 1usize..12, lambda in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocab = CategoryVocab::from_names(["<E>", "#", "NP", "VP", "S"]);
        let table = ScoreTable::uniform(n, vocab.len(), -1.0, 1.0, &mut rng);
        let tokens: Vec<Token> = (1..=n).map(|i| Token::new(i, format!("w{i}"), "X")).collect();
        let (tree, _) = decode_joint(&tokens, &table, &vocab, &DecodeConfig::with_lambda(lambda).unwrap()).unwrap();
        prop_assert_eq!(validate(&tree).residual, 0);
        prop_assert!(project_dependencies(&tree).unwrap().is_projective());
    }
}
