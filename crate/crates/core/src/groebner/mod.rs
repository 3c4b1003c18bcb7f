//! Buchberger engine: multivariate division, S-polynomials, reduced
//! Groebner bases, membership and elimination.

mod buchberger;
mod ideal;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Monomial, MonomialOrder, Polynomial, RingContext, RingError, Term};

pub use buchberger::{buchberger, is_groebner_basis, BuchbergerStats};
pub use ideal::{eliminate, Ideal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("empty divisor list")]
    NoDivisors,
}

/// Reduced Groebner basis: monic, auto-reduced, sorted by leading monomial
/// (largest first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ctx: Arc<RingContext>,
    elements: Vec<Polynomial>,
}

/// Serializable form, carrying the order descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBasisJson {
    pub order: String,
    pub field: String,
    pub elements: Vec<String>,
}

impl GroebnerBasis {
    pub(crate) fn from_reduced(ctx: &Arc<RingContext>, mut elements: Vec<Polynomial>) -> Self {
        let order = ctx.order().clone();
        elements.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
        GroebnerBasis {
            ctx: ctx.clone(),
            elements,
        }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ctx.order()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.elements)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.lm().clone()).collect()
    }

    pub fn to_json(&self) -> GroebnerBasisJson {
        GroebnerBasisJson {
            order: self.ctx.order().name(),
            field: self.ctx.field().to_string(),
            elements: self.elements.iter().map(|g| g.to_string()).collect(),
        }
    }

    /// Checks the auto-reduced, monic shape (not the S-pair property).
    pub fn is_auto_reduced(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, g)| {
            g.lc().is_one()
                && self
                    .elements
                    .iter()
                    .enumerate()
                    .all(|(j, h)| i == j || g.terms().iter().all(|t| !h.lm().divides(&t.mono)))
        })
    }
}

/// Result of dividing `f` by an ordered list of divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Multivariate division. The first divisor (in list order) whose leading
/// monomial divides the current leading term is used; terms no divisor
/// touches move to the remainder.
pub fn reduce(f: &Polynomial, divisors: &[Polynomial]) -> Result<Division, GroebnerError> {
    if divisors.is_empty() {
        return Err(GroebnerError::NoDivisors);
    }
    let ctx = f.ctx();
    if divisors.iter().any(|g| !g.ctx().same_ring(ctx)) {
        return Err(RingError::ContextMismatch.into());
    }
    if divisors.iter().any(|g| g.is_zero()) {
        return Err(RingError::ZeroPolynomial("leading term").into());
    }
    let inv: Vec<_> = divisors.iter().map(|g| g.lc().inv().unwrap()).collect();
    let mut quotients: Vec<Vec<Term>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();
    let mut p: Vec<Term> = f.terms().to_vec();
    let mut start = 0;
    while start < p.len() {
        let lead = &p[start];
        match divisors.iter().position(|g| g.lm().divides(&lead.mono)) {
            Some(k) => {
                let g = &divisors[k];
                let m = g.lm().quotient_of(&lead.mono);
                let c = &lead.coeff * &inv[k];
                p = cancel_leading(ctx, &p[start + 1..], &c, &m, &g.terms()[1..]);
                start = 0;
                quotients[k].push(Term { mono: m, coeff: c });
            }
            None => {
                remainder.push(lead.clone());
                start += 1;
            }
        }
    }
    Ok(Division {
        quotients: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(ctx, q))
            .collect(),
        remainder: Polynomial::from_sorted_terms(ctx, remainder),
    })
}

/// Full normal form of `f` modulo `divisors` (no quotients tracked).
pub fn normal_form(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let ctx = f.ctx();
    let masks: Vec<u64> = divisors.iter().map(|g| support_mask(g.lm())).collect();
    let inv: Vec<_> = divisors.iter().map(|g| g.lc().inv().unwrap()).collect();
    let mut remainder = Vec::new();
    let mut p: Vec<Term> = f.terms().to_vec();
    let mut start = 0;
    while start < p.len() {
        let lead = &p[start];
        let lm = support_mask(&lead.mono);
        let found = divisors
            .iter()
            .enumerate()
            .position(|(k, g)| masks[k] & !lm == 0 && g.lm().divides(&lead.mono));
        match found {
            Some(k) => {
                let g = &divisors[k];
                let m = g.lm().quotient_of(&lead.mono);
                let c = &lead.coeff * &inv[k];
                p = cancel_leading(ctx, &p[start + 1..], &c, &m, &g.terms()[1..]);
                start = 0;
            }
            None => {
                remainder.push(lead.clone());
                start += 1;
            }
        }
    }
    Polynomial::from_sorted_terms(ctx, remainder)
}

pub(crate) fn support_mask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | (1u64 << (i % 64)))
}

/// `p - c * m * g`, where the (already removed) leading terms cancel.
fn cancel_leading(
    ctx: &Arc<RingContext>,
    p: &[Term],
    c: &crate::ring::Scalar,
    m: &Monomial,
    g_tail: &[Term],
) -> Vec<Term> {
    let order = ctx.order();
    let neg_c = -c;
    let mut out = Vec::with_capacity(p.len() + g_tail.len());
    let mut i = 0;
    let mut shifted = g_tail.iter().map(|t| (t.mono.mul(m), &t.coeff)).peekable();
    while i < p.len() || shifted.peek().is_some() {
        let step = match (p.get(i), shifted.peek()) {
            (Some(_), None) => std::cmp::Ordering::Greater,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(a), Some((mb, _))) => order.cmp(&a.mono, mb),
            (None, None) => unreachable!(),
        };
        match step {
            std::cmp::Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let (mono, coeff) = shifted.next().unwrap();
                out.push(Term {
                    mono,
                    coeff: coeff * &neg_c,
                });
            }
            std::cmp::Ordering::Equal => {
                let (mono, coeff) = shifted.next().unwrap();
                let v = &p[i].coeff + &(coeff * &neg_c);
                i += 1;
                if !v.is_zero() {
                    out.push(Term { mono, coeff: v });
                }
            }
        }
    }
    out
}

/// `lcm/lt(f) * f - lcm/lt(g) * g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GroebnerError> {
    if f.is_zero() || g.is_zero() {
        return Err(RingError::ZeroPolynomial("S-polynomial").into());
    }
    if !f.ctx().same_ring(g.ctx()) {
        return Err(RingError::ContextMismatch.into());
    }
    let lcm = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&lcm);
    let mg = g.lm().quotient_of(&lcm);
    let cf = f.lc().inv().unwrap();
    let cg = g.lc().inv().unwrap();
    let a = f.mul_term(&mf, &cf);
    Ok(a.add_scaled_shifted(&-&cg, &mg, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, Field};

    fn ctx() -> Arc<RingContext> {
        RingContext::rees(5, Field::Rational).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_poly(s, &ctx()).unwrap()
    }

    #[test]
    fn division_identity_and_remainder() {
        let f = p("x^2 + y");
        let d = reduce(&f, &[p("x")]).unwrap();
        assert_eq!(d.remainder, p("y"));
        assert_eq!(d.quotients, vec![p("x")]);

        let g = p("x*w1 + y*w2");
        let d = reduce(&g, std::slice::from_ref(&g)).unwrap();
        assert_eq!(d.quotients, vec![p("1")]);
        assert!(d.remainder.is_zero());
        assert_eq!(reduce(&g, &[]), Err(GroebnerError::NoDivisors));
    }

    #[test]
    fn division_reconstructs_dividend() {
        let f = p("x^3*w0 + 2*x*y*z*w1 - y^2*w4 + 7");
        let gs = [p("x*w0 - y"), p("y*z + w1"), p("x^2 - w4")];
        let d = reduce(&f, &gs).unwrap();
        let mut back = d.remainder.clone();
        for (q, g) in d.quotients.iter().zip(&gs) {
            back = &back + &(q * g);
        }
        assert_eq!(back, f);
        for t in d.remainder.terms() {
            assert!(gs.iter().all(|g| !g.lm().divides(&t.mono)));
        }
        assert_eq!(normal_form(&f, &gs), d.remainder);
    }

    #[test]
    fn s_polynomial_basics() {
        let f = p("x*w3 + y*w4 + z*w0");
        assert!(s_polynomial(&f, &f).unwrap().is_zero());
        assert!(s_polynomial(&f, &Polynomial::zero(&ctx())).is_err());
        // S(l3, z^2 w0^2) = (z w0) * l3 - z^2 w0^2 = x z w0 w3 + y z w0 w4
        let s = s_polynomial(&f, &p("z^2*w0^2")).unwrap();
        assert_eq!(s, p("x*z*w0*w3 + y*z*w0*w4"));
    }
}
