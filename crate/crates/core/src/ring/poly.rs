use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Monomial, RingContext, RingError, Scalar, VarKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: Scalar,
}

/// Degree in the base variables and in the dual variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub x_degree: u32,
    pub w_degree: u32,
}

/// Sparse polynomial. Terms are kept sorted by the ring's order, largest
/// first, with no zero coefficients, so equal polynomials have equal term
/// vectors.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<RingContext>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_ring(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<RingContext>, c: Scalar) -> Self {
        Self::monomial(ctx, Monomial::one(ctx.nvars()), c)
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::constant(ctx, ctx.field().one())
    }

    pub fn from_i64(ctx: &Arc<RingContext>, v: i64) -> Self {
        Self::constant(ctx, ctx.field().from_i64(v))
    }

    pub fn var(ctx: &Arc<RingContext>, index: usize) -> Self {
        Self::monomial(ctx, Monomial::var(ctx.nvars(), index), ctx.field().one())
    }

    pub fn monomial(ctx: &Arc<RingContext>, mono: Monomial, coeff: Scalar) -> Self {
        debug_assert_eq!(mono.nvars(), ctx.nvars());
        let terms = if coeff.is_zero() {
            Vec::new()
        } else {
            vec![Term { mono, coeff }]
        };
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated,
    /// unsorted, zero) terms.
    pub fn from_terms(ctx: &Arc<RingContext>, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        let order = ctx.order();
        terms.sort_by(|a, b| order.cmp(&b.mono, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => last.coeff = &last.coeff + &t.coeff,
                _ => {
                    if let Some(last) = out.last() {
                        if last.coeff.is_zero() {
                            out.pop();
                        }
                    }
                    out.push(t);
                }
            }
        }
        if out.last().is_some_and(|t| t.coeff.is_zero()) {
            out.pop();
        }
        Polynomial {
            ctx: ctx.clone(),
            terms: out,
        }
    }

    /// Trusts that `terms` are already sorted, distinct and nonzero.
    pub(crate) fn from_sorted_terms(ctx: &Arc<RingContext>, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ctx.order().cmp(&w[0].mono, &w[1].mono) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.coeff.is_zero()));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one()
    }

    pub fn leading_term(&self) -> Result<&Term, RingError> {
        self.terms
            .first()
            .ok_or(RingError::ZeroPolynomial("leading term"))
    }

    /// Leading monomial; panics on zero.
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].mono
    }

    pub fn lc(&self) -> &Scalar {
        &self.terms[0].coeff
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| w[0].mono.degree() == w[1].mono.degree())
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms
            .iter()
            .find(|t| &t.mono == mono)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(|| self.ctx.field().zero())
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some(t) if t.coeff.is_one() => self.clone(),
            Some(t) => self.scale(&t.coeff.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.clone(),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.mul(mono),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    /// `self + c * mono * g`, computed by a single merge.
    pub fn add_scaled_shifted(&self, c: &Scalar, mono: &Monomial, g: &Polynomial) -> Polynomial {
        debug_assert!(self.ctx.same_ring(&g.ctx));
        if c.is_zero() || g.is_zero() {
            return self.clone();
        }
        let order = self.ctx.order();
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|t| (t.mono.mul(mono), t)).peekable();
        loop {
            let step = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some((m, _))) => order.cmp(&x.mono, m),
            };
            match step {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let (m, t) = b.next().unwrap();
                    out.push(Term {
                        mono: m,
                        coeff: &t.coeff * c,
                    });
                }
                Ordering::Equal => {
                    let x = a.next().unwrap();
                    let (m, t) = b.next().unwrap();
                    let coeff = &x.coeff + &(&t.coeff * c);
                    if !coeff.is_zero() {
                        out.push(Term { mono: m, coeff });
                    }
                }
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_ring(other)?;
        Ok(self.add_scaled_shifted(
            &self.ctx.field().one(),
            &Monomial::one(self.ctx.nvars()),
            other,
        ))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_ring(other)?;
        Ok(self.add_scaled_shifted(
            &-&self.ctx.field().one(),
            &Monomial::one(self.ctx.nvars()),
            other,
        ))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_ring(other)?;
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Polynomial::zero(&self.ctx);
        for t in &small.terms {
            acc = acc.add_scaled_shifted(&t.coeff, &t.mono, big);
        }
        Ok(acc)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), RingError> {
        if self.ctx.same_ring(&other.ctx) {
            Ok(())
        } else {
            Err(RingError::ContextMismatch)
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `(x-degree, w-degree)` shared by all terms.
    pub fn bidegree(&self) -> Result<Bidegree, RingError> {
        let mut it = self.terms.iter().map(|t| self.term_bidegree(&t.mono));
        let first = it.next().ok_or(RingError::ZeroPolynomial("bidegree"))?;
        if it.all(|b| b == first) {
            Ok(first)
        } else {
            Err(RingError::NotBihomogeneous)
        }
    }

    fn term_bidegree(&self, m: &Monomial) -> Bidegree {
        let mut b = Bidegree {
            x_degree: 0,
            w_degree: 0,
        };
        for (i, &e) in m.exponents().iter().enumerate() {
            match self.ctx.kind(i) {
                VarKind::Base => b.x_degree += e as u32,
                VarKind::Dual => b.w_degree += e as u32,
                VarKind::Aux => {}
            }
        }
        b
    }

    /// Highest power of variable `var` occurring.
    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms
            .iter()
            .map(|t| t.mono.exponent(var))
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.degree_in(var) > 0
    }

    /// Sets each listed variable to zero.
    pub fn kill_vars(&self, vars: &[usize]) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| vars.iter().all(|&v| t.mono.exponent(v) == 0))
                .cloned()
                .collect(),
        }
    }

    /// Moves the polynomial into `target`, which must have at least as many
    /// variables with the same leading names and the same field.
    pub fn embed(&self, target: &Arc<RingContext>) -> Polynomial {
        assert!(target.nvars() >= self.ctx.nvars());
        assert_eq!(target.field(), self.ctx.field());
        let terms = self.terms.iter().map(|t| Term {
            mono: t.mono.extend_to(target.nvars()),
            coeff: t.coeff.clone(),
        });
        if target.nvars() == self.ctx.nvars() && target.order() == self.ctx.order() {
            return Polynomial::from_sorted_terms(target, terms.collect());
        }
        Polynomial::from_terms(target, terms)
    }

    /// Inverse of [`embed`](Self::embed); `None` when an extra variable occurs.
    pub fn restrict(&self, target: &Arc<RingContext>) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term {
                mono: t.mono.truncate_to(target.nvars())?,
                coeff: t.coeff.clone(),
            });
        }
        Some(Polynomial::from_terms(target, terms))
    }

    /// Exact quotient `self / g`; `None` when `g` does not divide `self`.
    pub fn exact_div(&self, g: &Polynomial) -> Option<Polynomial> {
        if g.is_zero() {
            return None;
        }
        let lc_inv = g.lc().inv()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(t) = rem.terms.first() {
            let m = t.mono.checked_div(g.lm())?;
            let c = &t.coeff * &lc_inv;
            rem = rem.add_scaled_shifted(&-&c, &m, g);
            quot.push(Term { mono: m, coeff: c });
        }
        Some(Polynomial::from_terms(&self.ctx, quot))
    }

    /// Substitutes each variable `i` by `images[i]` (all in `target`).
    pub fn substitute(&self, target: &Arc<RingContext>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ctx.nvars());
        let mut acc = Polynomial::zero(target);
        for t in &self.terms {
            let mut p = Polynomial::constant(target, t.coeff.clone());
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e > 0 {
                    p = &p * &images[i].pow(e as u32);
                }
            }
            acc = &acc + &p;
        }
        acc
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.ctx.names()[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = if neg { -&t.coeff } else { t.coeff.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if t.mono.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                self.fmt_monomial(&t.mono, f)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("ring mismatch in multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-&self.ctx.field().one())
    }
}
