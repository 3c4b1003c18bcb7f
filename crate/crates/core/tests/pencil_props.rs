mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rees_core::groebner::Ideal;
use rees_core::ideals::radical_member;
use rees_core::pencil::{
    classify_phi_prime, determinantal_divisors, invariant_factors, normalize_form,
    pencil_from_matrix, phi_prime, Pencil, PencilSummary,
};
use rees_core::ring::{Field, PolyMatrix, Polynomial, RingContext, ScalarMatrix};

/// Root of an `M` block: `None` is the form `y`, `Some(r)` is `x - r*y`.
type Root = Option<i64>;

fn root_form(ctx: &Arc<RingContext>, r: Root) -> Polynomial {
    match r {
        None => p(ctx, "y"),
        Some(r) => p(ctx, &format!("x - ({r})*y")),
    }
}

/// Block diagonal `[L'_r, M_{k1}(root1), ...]`: the `L'` block has `x` on
/// the diagonal and `y` below it; each `M` block is a Jordan block in its
/// root form with the complementary variable above the diagonal.
fn canonical(ctx: &Arc<RingContext>, r: usize, ms: &[(usize, Root)]) -> PolyMatrix {
    let cols = r + ms.iter().map(|m| m.0).sum::<usize>();
    let mut m = PolyMatrix::zeros(ctx, cols + 1, cols);
    for i in 0..r {
        m.set(i, i, p(ctx, "x"));
        m.set(i + 1, i, p(ctx, "y"));
    }
    let (mut row, mut col) = (r + 1, r);
    for &(k, root) in ms {
        let off = if root.is_none() {
            p(ctx, "x")
        } else {
            p(ctx, "y")
        };
        for i in 0..k {
            m.set(row + i, col + i, root_form(ctx, root));
            if i + 1 < k {
                m.set(row + i, col + i + 1, off.clone());
            }
        }
        row += k;
        col += k;
    }
    m
}

fn shapes() -> impl Strategy<Value = (usize, Vec<(usize, Root)>)> {
    (
        1usize..=3,
        prop::collection::vec((1usize..=2, prop::option::of(-2i64..=2)), 0..=2),
    )
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(32003)),
        Just(Field::Prime(101))
    ]
}

fn random_transform(p: &Pencil, field: Field, seed: u64) -> Pencil {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = ScalarMatrix::random_invertible(field, p.rows(), 5, &mut rng);
    let d = ScalarMatrix::random_invertible(field, p.cols(), 5, &mut rng);
    p.transform(&c, &d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strict_equivalence_preserves_the_classification((r, ms) in shapes(), field in fields(), seed in any::<u64>()) {
        let ctx = RingContext::rees(5, field).unwrap();
        let base = pencil_from_matrix(&canonical(&ctx, r, &ms)).unwrap();
        let expected = classify_phi_prime(&base).unwrap();
        let moved = random_transform(&base, field, seed);
        prop_assert_eq!(classify_phi_prime(&moved).unwrap(), expected);
    }

    #[test]
    fn invariant_factors_form_a_divisibility_chain((r, ms) in shapes(), seed in any::<u64>()) {
        let ctx = RingContext::rees(5, Field::Rational).unwrap();
        let base = pencil_from_matrix(&canonical(&ctx, r, &ms)).unwrap();
        let moved = random_transform(&base, Field::Rational, seed);
        let f = invariant_factors(&moved).unwrap();
        for w in f.windows(2) {
            prop_assert!(w[1].exact_div(&w[0]).is_some(), "{} does not divide {}", w[0], w[1]);
        }
        let d = determinantal_divisors(&moved).unwrap();
        let product = f.iter().fold(Polynomial::one(&ctx), |acc, s| &acc * s);
        prop_assert_eq!(normalize_form(&product), normalize_form(d.last().unwrap()));
    }

    #[test]
    fn block_sizes_account_for_the_pencil((r, ms) in shapes(), seed in any::<u64>()) {
        let ctx = RingContext::rees(5, Field::Rational).unwrap();
        let m = canonical(&ctx, r, &ms);
        let moved = random_transform(&pencil_from_matrix(&m).unwrap(), Field::Rational, seed);
        let inv = classify_phi_prime(&moved).unwrap();
        let ed_total: usize = inv.elementary_divisors.iter().map(|e| e.power as usize).sum();
        prop_assert_eq!(inv.l_prime_size(moved.cols()), r);
        prop_assert_eq!(ed_total + r, moved.cols());
        prop_assert_eq!(inv.normal_rank, moved.cols());
        prop_assert!(!inv.has_zero_block);
        let top = ms.iter().fold(Polynomial::one(&ctx), |acc, &(k, root)| {
            (0..k).fold(acc, |a, _| &a * &root_form(&ctx, root))
        });
        let d = determinantal_divisors(&moved).unwrap();
        prop_assert_eq!(normalize_form(d.last().unwrap()), normalize_form(&top));
        match inv.summary {
            PencilSummary::SingleLPrime => prop_assert!(ms.is_empty()),
            PencilSummary::LPrimeWithM(sizes) => {
                prop_assert_eq!(sizes.iter().map(|&s| s as usize).sum::<usize>(), ed_total);
            }
        }
    }
}

#[test]
fn phi_prime_of_the_first_example_is_a_single_block() {
    let (_, ctx, phi) = load("ex71");
    let m = phi_prime(&phi);
    assert_eq!((m.rows(), m.cols()), (4, 3));
    let pencil = pencil_from_matrix(&m).unwrap();
    // the four maximal minors share no linear factor exactly when their
    // ideal has radical (x, y)
    let minors = Ideal::new(&ctx, m.minors(3).unwrap());
    assert!(radical_member(&p(&ctx, "x"), &minors));
    assert!(radical_member(&p(&ctx, "y"), &minors));
    let d = determinantal_divisors(&pencil).unwrap();
    assert_eq!(d.len(), 4);
    assert!(d[3].is_constant());
    let inv = classify_phi_prime(&pencil).unwrap();
    assert_eq!(inv.summary, PencilSummary::SingleLPrime);
    assert_eq!(inv.l_prime_size(3), 3);
}

#[test]
fn bundled_examples_keep_their_classification() {
    let mut seed = 0;
    for name in ["ex71", "ex72", "ex73"] {
        let (_, _, phi) = load(name);
        let pencil = pencil_from_matrix(&phi_prime(&phi)).unwrap();
        let expected = classify_phi_prime(&pencil).unwrap();
        for _ in 0..20 {
            seed += 1;
            let moved = random_transform(&pencil, Field::Rational, seed);
            assert_eq!(classify_phi_prime(&moved).unwrap(), expected, "{name}");
        }
    }
}

#[test]
fn m_blocks_read_back() {
    let ctx = RingContext::rees(5, Field::Rational).unwrap();
    let one = pencil_from_matrix(&canonical(&ctx, 3, &[(1, Some(0))])).unwrap();
    assert_eq!(
        classify_phi_prime(&one).unwrap().summary,
        PencilSummary::LPrimeWithM(vec![1])
    );
    let two = pencil_from_matrix(&canonical(&ctx, 2, &[(2, Some(0))])).unwrap();
    let inv = classify_phi_prime(&two).unwrap();
    assert_eq!(inv.summary, PencilSummary::LPrimeWithM(vec![2]));
    assert_eq!(inv.elementary_divisors.len(), 1);
    let split = pencil_from_matrix(&canonical(&ctx, 1, &[(1, Some(1)), (1, None)])).unwrap();
    assert_eq!(
        classify_phi_prime(&split).unwrap().summary,
        PencilSummary::LPrimeWithM(vec![1, 1])
    );
}
