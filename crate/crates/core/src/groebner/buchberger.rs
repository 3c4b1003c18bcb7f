use std::sync::Arc;

use super::{normal_form, s_polynomial, support_mask, GroebnerBasis};
use crate::ring::{Monomial, Polynomial, RingContext};

/// Counters collected during one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuchbergerStats {
    pub pairs_created: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub criteria_skips: usize,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'a> {
    ctx: &'a Arc<RingContext>,
    polys: Vec<Polynomial>,
    masks: Vec<u64>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: BuchbergerStats,
}

impl State<'_> {
    fn reducers(&self) -> Vec<Polynomial> {
        self.active.iter().map(|&k| self.polys[k].clone()).collect()
    }

    fn update(&mut self, h: Polynomial) {
        let hk = self.polys.len();
        let lm_h = h.lm().clone();
        let mask_h = support_mask(&lm_h);
        self.polys.push(h);
        self.masks.push(mask_h);

        let mut candidates: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: hk,
                lcm: self.polys[g].lm().lcm(&lm_h),
            })
            .collect();
        self.stats.pairs_created += candidates.len();

        let mut kept: Vec<Pair> = Vec::new();
        while !candidates.is_empty() {
            let p = candidates.remove(0);
            let coprime = self.polys[p.i].lm().is_coprime(&lm_h);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            } else {
                self.stats.criteria_skips += 1;
            }
        }
        let before = kept.len();
        kept.retain(|p| !self.polys[p.i].lm().is_coprime(&lm_h));
        self.stats.criteria_skips += before - kept.len();

        let polys = &self.polys;
        let before = self.pairs.len();
        self.pairs.retain(|p| {
            !(lm_h.divides(&p.lcm)
                && polys[p.i].lm().lcm(&lm_h) != p.lcm
                && polys[p.j].lm().lcm(&lm_h) != p.lcm)
        });
        self.stats.criteria_skips += before - self.pairs.len();
        self.pairs.extend(kept);

        let masks = &self.masks;
        self.active
            .retain(|&g| !(mask_h & !masks[g] == 0 && lm_h.divides(polys[g].lm())));
        self.active.push(hk);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.ctx.order();
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            order
                .cmp(&pa.lcm, &pb.lcm)
                .then(pa.j.cmp(&pb.j))
                .then(pa.i.cmp(&pb.i))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Groebner basis of the ideal generated by `gens` under the order
/// of `ctx`, with Gebauer-Moeller pair management and the normal selection
/// strategy. Ties are broken by generator index, so output is reproducible.
pub fn buchberger(ctx: &Arc<RingContext>, gens: &[Polynomial]) -> (GroebnerBasis, BuchbergerStats) {
    let order = ctx.order();
    let mut input: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            assert!(g.ctx().same_ring(ctx), "generator lives in another ring");
            g.monic()
        })
        .collect();
    if input.iter().any(|g| g.is_constant()) {
        return (
            GroebnerBasis::from_reduced(ctx, vec![Polynomial::one(ctx)]),
            BuchbergerStats::default(),
        );
    }
    input.sort_by(|a, b| {
        order
            .cmp(a.lm(), b.lm())
            .then_with(|| a.len().cmp(&b.len()))
    });

    let mut st = State {
        ctx,
        polys: Vec::new(),
        masks: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        stats: BuchbergerStats::default(),
    };
    for g in input {
        let h = normal_form(&g, &st.reducers());
        if !h.is_zero() {
            if h.is_constant() {
                return (
                    GroebnerBasis::from_reduced(ctx, vec![Polynomial::one(ctx)]),
                    st.stats,
                );
            }
            st.update(h.monic());
        }
    }

    while let Some(pair) = st.next_pair() {
        st.stats.pairs_reduced += 1;
        let s = s_polynomial(&st.polys[pair.i], &st.polys[pair.j]).unwrap();
        let h = normal_form(&s, &st.reducers());
        if h.is_zero() {
            st.stats.zero_reductions += 1;
            continue;
        }
        if h.is_constant() {
            return (
                GroebnerBasis::from_reduced(ctx, vec![Polynomial::one(ctx)]),
                st.stats,
            );
        }
        st.update(h.monic());
    }

    let minimal = st.reducers();
    let reduced = (0..minimal.len())
        .map(|k| {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, g)| g.clone())
                .collect();
            normal_form(&minimal[k], &others).monic()
        })
        .collect();
    (GroebnerBasis::from_reduced(ctx, reduced), st.stats)
}

/// True when every S-polynomial of `basis` reduces to zero modulo `basis`.
pub fn is_groebner_basis(basis: &[Polynomial]) -> bool {
    let basis: Vec<Polynomial> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j]).unwrap();
            if !normal_form(&s, &basis).is_zero() {
                return false;
            }
        }
    }
    true
}
