mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rees_core::groebner::Ideal;
use rees_core::ideals::{
    colon, colon_poly, dimension, fitting_ideal, gs_check, height, intersect, min_prime_check,
    radical_member, saturate,
};
use rees_core::rees::{jacobian_dual, symmetric_ideal, Frame, Pipeline};
use rees_core::ring::{Field, MonomialOrder, PolyMatrix, Polynomial, RingContext, ScalarMatrix};

/// `S[t]` under plain lex with `t` the largest variable, plus the index of `t`.
fn lex_t(ctx: &Arc<RingContext>) -> (Arc<RingContext>, usize) {
    (ctx.with_aux_vars(&["t"], MonomialOrder::Lex), ctx.nvars())
}

fn t_free(ctx: &Arc<RingContext>, big: &Ideal, t: usize) -> Ideal {
    Ideal::new(
        ctx,
        big.gb()
            .elements()
            .iter()
            .filter(|g| !g.involves(t))
            .map(|g| g.restrict(ctx).unwrap()),
    )
}

fn oracle_intersect(i: &Ideal, j: &Ideal) -> Ideal {
    let ctx = i.ctx();
    let (ext, t) = lex_t(ctx);
    let tv = Polynomial::var(&ext, t);
    let one_minus_t = &Polynomial::one(&ext) - &tv;
    let gens = i
        .generators()
        .iter()
        .map(|g| &tv * &g.embed(&ext))
        .chain(j.generators().iter().map(|g| &one_minus_t * &g.embed(&ext)));
    t_free(ctx, &Ideal::new(&ext, gens), t)
}

fn oracle_colon_poly(i: &Ideal, g: &Polynomial) -> Ideal {
    let ctx = i.ctx();
    let meet = oracle_intersect(i, &Ideal::new(ctx, [g.clone()]));
    Ideal::new(
        ctx,
        meet.gb().elements().iter().map(|h| h.exact_div(g).unwrap()),
    )
}

/// `I : f^∞` as `(I + (1 - t*f)) ∩ S`.
fn rabinowitsch(i: &Ideal, f: &Polynomial) -> Ideal {
    let ctx = i.ctx();
    let (ext, t) = lex_t(ctx);
    let inv = &Polynomial::one(&ext) - &(&Polynomial::var(&ext, t) * &f.embed(&ext));
    let big = Ideal::new(
        &ext,
        i.generators().iter().map(|g| g.embed(&ext)).chain([inv]),
    );
    t_free(ctx, &big, t)
}

fn power(j: &Ideal, m: usize) -> Ideal {
    (0..m).fold(Ideal::unit(j.ctx()), |acc, _| acc.product(j))
}

fn forms() -> impl Strategy<Value = Vec<RawPoly>> {
    prop::collection::vec(raw_form(3, 2, 4), 1..=3)
}

fn monomials() -> impl Strategy<Value = Vec<Vec<u16>>> {
    prop::collection::vec(prop::collection::vec(0u16..=2, 3), 1..=3)
        .prop_filter("no unit monomial", |ms| {
            ms.iter().all(|m| m.iter().any(|&e| e > 0))
        })
}

fn monomial_ideal(ctx: &Arc<RingContext>, ms: &[Vec<u16>]) -> Ideal {
    Ideal::new(ctx, ms.iter().map(|e| build(ctx, &vec![(e.clone(), 1)])))
}

/// Smallest number of variables meeting the support of every generator.
fn monomial_height(ms: &[Vec<u16>], nvars: usize) -> usize {
    (0u32..1 << nvars)
        .filter(|mask| {
            ms.iter()
                .all(|m| (0..nvars).any(|v| mask & (1 << v) != 0 && m[v] > 0))
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn colon_contract(i in forms(), j in forms()) {
        let ctx = xyz(MonomialOrder::DegRevLex);
        let i = Ideal::new(&ctx, i.iter().map(|g| build(&ctx, g)));
        let j = Ideal::new(&ctx, j.iter().map(|g| build(&ctx, g)));
        if j.is_zero() {
            prop_assert!(colon(&i, &j).is_err());
            return Ok(());
        }
        let q = colon(&i, &j).unwrap();
        for d in q.gb().elements() {
            for g in j.generators() {
                prop_assert!(i.contains(&(d * g)));
            }
        }
        prop_assert!(q.contains_ideal(&i));
    }

    #[test]
    fn colon_by_a_polynomial_matches_the_oracle(i in forms(), g in raw_poly(3, 2, 3)) {
        let ctx = xyz(MonomialOrder::DegRevLex);
        let i = Ideal::new(&ctx, i.iter().map(|f| build(&ctx, f)));
        let g = build(&ctx, &g);
        prop_assume!(!g.is_zero());
        prop_assert_eq!(colon_poly(&i, &g), oracle_colon_poly(&i, &g));
    }

    #[test]
    fn monomial_saturation_matches_rabinowitsch(i in forms(), ms in monomials()) {
        let ctx = xyz(MonomialOrder::DegRevLex);
        let i = Ideal::new(&ctx, i.iter().map(|f| build(&ctx, f)));
        let j = monomial_ideal(&ctx, &ms);
        let sat = saturate(&i, &j).unwrap();
        let oracle = j
            .generators()
            .iter()
            .map(|g| rabinowitsch(&i, g))
            .reduce(|a, b| oracle_intersect(&a, &b))
            .unwrap();
        prop_assert_eq!(&sat.ideal, &oracle);
        prop_assert_eq!(colon(&sat.ideal, &j).unwrap(), sat.ideal.clone());
        let m = sat.exponent;
        prop_assert!(i.contains_ideal(&power(&j, m).product(&sat.ideal)));
        if m > 0 {
            prop_assert!(!i.contains_ideal(&power(&j, m - 1).product(&sat.ideal)));
        }
    }

    #[test]
    fn saturation_by_a_form_matches_rabinowitsch(i in forms(), f in raw_form(3, 1, 3)) {
        let ctx = xyz(MonomialOrder::DegRevLex);
        let i = Ideal::new(&ctx, i.iter().map(|g| build(&ctx, g)));
        let f = build(&ctx, &f);
        prop_assume!(!f.is_zero());
        let sat = saturate(&i, &Ideal::new(&ctx, [f.clone()])).unwrap();
        prop_assert_eq!(sat.ideal, rabinowitsch(&i, &f));
    }

    #[test]
    fn intersection_matches_the_oracle(a in forms(), b in forms()) {
        let ctx = xyz(MonomialOrder::DegRevLex);
        let a = Ideal::new(&ctx, a.iter().map(|g| build(&ctx, g)));
        let b = Ideal::new(&ctx, b.iter().map(|g| build(&ctx, g)));
        let m = intersect(&a, &b);
        prop_assert!(a.contains_ideal(&m) && b.contains_ideal(&m));
        prop_assert_eq!(m, oracle_intersect(&a, &b));
    }

    #[test]
    fn monomial_intersection_is_generated_by_lcms(a in monomials(), b in monomials()) {
        let ctx = xyz(MonomialOrder::DegRevLex);
        let (ia, ib) = (monomial_ideal(&ctx, &a), monomial_ideal(&ctx, &b));
        let lcms: Vec<Vec<u16>> = a
            .iter()
            .flat_map(|u| b.iter().map(move |v| u.iter().zip(v).map(|(x, y)| *x.max(y)).collect()))
            .collect();
        prop_assert_eq!(intersect(&ia, &ib), monomial_ideal(&ctx, &lcms));
        let h = height(&intersect(&ia, &ib)).unwrap();
        prop_assert_eq!(h, monomial_height(&a, 3).min(monomial_height(&b, 3)));
        prop_assert_eq!(height(&ia).unwrap(), monomial_height(&a, 3));
    }
}

#[test]
fn colon_examples() {
    let ctx = xyz(MonomialOrder::DegRevLex);
    let i = ideal(&ctx, &["x^2 + y*z", "y^3"]);
    assert_eq!(colon(&i, &Ideal::unit(&ctx)).unwrap(), i);
    assert_eq!(
        colon(&ideal(&ctx, &["x*y"]), &ideal(&ctx, &["x"])).unwrap(),
        ideal(&ctx, &["y"])
    );
    let s = saturate(&ideal(&ctx, &["x^2"]), &ideal(&ctx, &["x"])).unwrap();
    assert!(s.ideal.is_unit());
    assert_eq!(s.exponent, 2);
    let a = ideal(&ctx, &["x^2*y", "z^3"]);
    assert_eq!(intersect(&a, &a), a);
    assert_eq!(
        intersect(&ideal(&ctx, &["x"]), &ideal(&ctx, &["y"])),
        ideal(&ctx, &["x*y"])
    );
}

#[test]
fn colon_of_the_first_three_equations() {
    let (_, ctx, phi) = load("ex71");
    let pl = Pipeline::new(&phi).unwrap();
    let first: Vec<Polynomial> = pl.data.ls[..3].to_vec();
    let q = colon(
        &Ideal::new(&ctx, first.clone()),
        &ideal(&ctx, &["x", "y", "z*w0"]),
    )
    .unwrap();
    let expected =
        Ideal::new(&ctx, first).with_generators([p(&ctx, "w0^2 + w0*w1 - w2^2 + w0*w3 + w1*w3")]);
    assert_eq!(q, expected);
    assert_eq!(height(&q), Some(3));
}

#[test]
fn saturations_of_the_examples() {
    let (_, ctx, phi) = load("ex73");
    let l = symmetric_ideal(&phi).unwrap();
    let s = saturate(&l, &ideal(&ctx, &["x", "y"])).unwrap();
    assert_eq!(s.exponent, 1);
    let b = jacobian_dual(&phi, Frame::XYZ2W0).unwrap();
    assert_eq!(s.ideal, l.with_generators(b.matrix.minors(3).unwrap()));

    let (_, ctx, phi) = load("ex71");
    let l = symmetric_ideal(&phi).unwrap();
    let by_u = saturate(&l, &ideal(&ctx, &["x", "y", "z*w0"])).unwrap();
    let by_xy = saturate(&l, &ideal(&ctx, &["x", "y"])).unwrap();
    assert_eq!(by_u.ideal, by_xy.ideal);
    assert!(by_u.exponent >= 2);
}

#[test]
fn radicals_and_dimensions() {
    let ctx = xyz(MonomialOrder::DegRevLex);
    assert!(radical_member(&p(&ctx, "x"), &ideal(&ctx, &["x^2"])));
    assert!(!radical_member(&p(&ctx, "z"), &ideal(&ctx, &["x", "y"])));
    assert_eq!(dimension(&Ideal::zero(&ctx)).unwrap(), 3);

    let (_, ctx, phi) = load("ex71");
    let i3 = Ideal::new(&ctx, phi.minors(3).unwrap());
    assert!(radical_member(&p(&ctx, "x"), &i3));
    assert!(radical_member(&p(&ctx, "y"), &i3));
    assert_eq!(height(&i3), Some(2));
    assert!(gs_check(&phi, 2).unwrap());
    assert!(!gs_check(&phi, 3).unwrap());
    assert!(min_prime_check(&phi).unwrap());
    assert!(min_prime_check(&load("ex73").2).unwrap());
}

#[test]
fn unit_minor_breaks_the_minimal_prime_check() {
    let ctx = RingContext::rees(5, Field::Rational).unwrap();
    let rows: Vec<Vec<&str>> = vec![
        vec!["1", "0", "0", "x^2"],
        vec!["0", "1", "0", "y^2"],
        vec!["0", "0", "1", "z^2"],
        vec!["x", "y", "z", "x*y"],
        vec!["y", "z", "x", "y*z"],
    ];
    let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
    let phi = PolyMatrix::from_rows(&ctx, &refs).unwrap();
    assert!(!min_prime_check(&phi).unwrap());
}

#[test]
fn generic_linear_matrix_satisfies_g3() {
    let ctx = RingContext::rees(5, Field::Rational).unwrap();
    let rows: Vec<Vec<&str>> = vec![
        vec!["x", "y", "z", "x + y"],
        vec!["y", "z", "x", "y - z"],
        vec!["z", "x + y", "y", "x"],
        vec!["x - z", "x", "y + z", "z"],
        vec!["y + z", "x - y", "x", "y"],
    ];
    let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
    let phi = PolyMatrix::from_rows(&ctx, &refs).unwrap();
    assert_eq!(height(&Ideal::new(&ctx, phi.minors(3).unwrap())), Some(3));
    assert!(gs_check(&phi, 3).unwrap());
}

#[test]
fn fitting_ideals_do_not_depend_on_the_presentation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["ex71", "ex73"] {
        let (_, ctx, phi) = load(name);
        let lift = |m: &ScalarMatrix| {
            let entries = (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| Polynomial::constant(&ctx, m.get(i, j).clone()))
                .collect();
            PolyMatrix::new(&ctx, m.rows(), m.cols(), entries).unwrap()
        };
        for _ in 0..2 {
            let u = lift(&ScalarMatrix::random_invertible(
                Field::Rational,
                5,
                2,
                &mut rng,
            ));
            let v = lift(&ScalarMatrix::random_invertible(
                Field::Rational,
                4,
                2,
                &mut rng,
            ));
            let moved = u.mul(&phi).unwrap().mul(&v).unwrap();
            for i in 1..=5 {
                assert_eq!(
                    fitting_ideal(&phi, i).unwrap(),
                    fitting_ideal(&moved, i).unwrap(),
                    "{name}, i = {i}"
                );
            }
        }
        assert!(fitting_ideal(&phi, 5).unwrap().is_unit());
        assert!(fitting_ideal(&phi, 0).unwrap().is_zero());
    }
}
