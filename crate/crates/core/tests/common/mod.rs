#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use rees_core::groebner::Ideal;
use rees_core::instance::Instance;
use rees_core::ring::{
    parse_poly, Field, Monomial, MonomialOrder, PolyMatrix, Polynomial, RingContext, Term,
};

pub type RawPoly = Vec<(Vec<u16>, i64)>;

pub fn instance(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(format!("{name}.json"));
    Instance::load(&path).unwrap()
}

pub fn load(name: &str) -> (Instance, Arc<RingContext>, PolyMatrix) {
    let inst = instance(name);
    let ctx = inst
        .ring(Field::Rational, MonomialOrder::DegRevLex)
        .unwrap();
    let phi = inst.matrix(&ctx).unwrap();
    (inst, ctx, phi)
}

pub fn p(ctx: &Arc<RingContext>, s: &str) -> Polynomial {
    parse_poly(s, ctx).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn ideal(ctx: &Arc<RingContext>, gens: &[&str]) -> Ideal {
    Ideal::new(ctx, gens.iter().map(|g| p(ctx, g)))
}

pub fn xyz(order: MonomialOrder) -> Arc<RingContext> {
    RingContext::generic(&["x", "y", "z"], Field::Rational, order)
}

pub fn build(ctx: &Arc<RingContext>, raw: &RawPoly) -> Polynomial {
    let f = ctx.field();
    Polynomial::from_terms(
        ctx,
        raw.iter().map(|(e, c)| Term {
            mono: Monomial::from_exponents(e.iter().copied()),
            coeff: f.from_i64(*c),
        }),
    )
}

/// Up to `terms` terms in `nvars` variables, each exponent at most `deg`.
pub fn raw_poly(nvars: usize, deg: u16, terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=deg, nvars), -4i64..=4),
        1..=terms,
    )
}

/// Homogeneous of degree `deg` in `nvars` variables.
pub fn raw_form(nvars: usize, deg: u16, terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=deg, nvars - 1), -4i64..=4),
        1..=terms,
    )
    .prop_map(move |ts| {
        ts.into_iter()
            .filter_map(|(mut e, c)| {
                let s: u16 = e.iter().sum();
                (s <= deg).then(|| {
                    e.push(deg - s);
                    (e, c)
                })
            })
            .collect()
    })
}

fn leading(f: &Polynomial) -> (Monomial, rees_core::ring::Scalar) {
    let t = f.leading_term().unwrap();
    (t.mono.clone(), t.coeff.clone())
}

/// Full reduction by plain long division, written out term by term.
pub fn naive_nf(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let ctx = f.ctx();
    let mut rest = f.clone();
    let mut rem = Polynomial::zero(ctx);
    while !rest.is_zero() {
        let (m, c) = leading(&rest);
        let hit = divisors
            .iter()
            .filter(|g| !g.is_zero())
            .find(|g| g.lm().divides(&m));
        match hit {
            Some(g) => {
                let (gm, gc) = leading(g);
                let q = m.checked_div(&gm).unwrap();
                let k = &c * &gc.inv().unwrap();
                rest = &rest - &g.mul_term(&q, &k);
            }
            None => {
                let t = Polynomial::monomial(ctx, m, c);
                rem = &rem + &t;
                rest = &rest - &t;
            }
        }
    }
    rem
}

pub fn naive_spoly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = leading(f);
    let (gm, gc) = leading(g);
    let l = fm.lcm(&gm);
    let a = f.mul_term(&l.checked_div(&fm).unwrap(), &fc.inv().unwrap());
    let b = g.mul_term(&l.checked_div(&gm).unwrap(), &gc.inv().unwrap());
    &a - &b
}

/// Buchberger without any pair criteria: every pair is reduced until a
/// full pass adds nothing, then the basis is minimized and inter-reduced.
pub fn brute_force_gb(gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut g: Vec<Polynomial> = gens.iter().filter(|f| !f.is_zero()).cloned().collect();
    loop {
        let mut added = false;
        let snapshot = g.clone();
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                let h = naive_nf(&naive_spoly(&snapshot[i], &snapshot[j]), &g);
                if !h.is_zero() {
                    g.push(h);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (i, f) in g.iter().enumerate() {
        let redundant = g
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && h.lm().divides(f.lm()) && (h.lm() != f.lm() || j < i));
        if !redundant {
            minimal.push(f.monic());
        }
    }
    let mut reduced: Vec<Polynomial> = (0..minimal.len())
        .map(|k| {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, h)| h.clone())
                .collect();
            naive_nf(&minimal[k], &others).monic()
        })
        .collect();
    sort_basis(&mut reduced);
    reduced
}

pub fn sort_basis(b: &mut [Polynomial]) {
    if let Some(first) = b.first() {
        let ctx = first.ctx().clone();
        b.sort_by(|f, g| {
            ctx.order()
                .cmp(g.lm(), f.lm())
                .then_with(|| f.to_string().cmp(&g.to_string()))
        });
    }
}

pub fn sorted_gb(i: &Ideal) -> Vec<Polynomial> {
    let mut b = i.gb().elements().to_vec();
    sort_basis(&mut b);
    b
}

/// Every pairwise S-polynomial of `basis` reduces to zero modulo `basis`.
pub fn s_pairs_vanish(basis: &[Polynomial]) -> bool {
    (0..basis.len()).all(|i| {
        (i + 1..basis.len()).all(|j| naive_nf(&naive_spoly(&basis[i], &basis[j]), basis).is_zero())
    })
}
