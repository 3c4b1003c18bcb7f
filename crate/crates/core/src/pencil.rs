//! Linear pencils `xA + yB` over `k[x, y]`: invariant factors through gcds
//! of minors, elementary divisors, and the block summary of `φ'`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{
    Field, Monomial, PolyMatrix, Polynomial, RingContext, RingError, Scalar, ScalarMatrix, VarKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PencilError {
    #[error("entry ({row}, {col}) = {entry} is not a linear form in x, y")]
    NotLinear {
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("invariant factor {0} does not split into linear forms over the base field")]
    NeedsFieldExtension(String),
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The pencil `xA + yB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    ctx: Arc<RingContext>,
    a: ScalarMatrix,
    b: ScalarMatrix,
}

impl Pencil {
    pub fn new(ctx: &Arc<RingContext>, a: ScalarMatrix, b: ScalarMatrix) -> Self {
        assert_eq!(
            (a.rows(), a.cols()),
            (b.rows(), b.cols()),
            "pencil shape mismatch"
        );
        Pencil {
            ctx: ctx.clone(),
            a,
            b,
        }
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &ScalarMatrix {
        &self.a
    }

    pub fn b(&self) -> &ScalarMatrix {
        &self.b
    }

    pub fn to_matrix(&self) -> PolyMatrix {
        let ctx = &self.ctx;
        let x = Polynomial::var(ctx, ctx.x());
        let y = Polynomial::var(ctx, ctx.y());
        let mut m = PolyMatrix::zeros(ctx, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let e = &x.scale(self.a.get(i, j)) + &y.scale(self.b.get(i, j));
                m.set(i, j, e);
            }
        }
        m
    }

    /// `C (xA + yB) D`.
    pub fn transform(&self, c: &ScalarMatrix, d: &ScalarMatrix) -> Pencil {
        Pencil {
            ctx: self.ctx.clone(),
            a: c.mul(&self.a).mul(d),
            b: c.mul(&self.b).mul(d),
        }
    }
}

/// Splits a matrix of linear forms in `x, y` into its pencil.
pub fn pencil_from_matrix(m: &PolyMatrix) -> Result<Pencil, PencilError> {
    let ctx = m.ctx();
    let field = ctx.field();
    let mut a = ScalarMatrix::zeros(field, m.rows(), m.cols());
    let mut b = ScalarMatrix::zeros(field, m.rows(), m.cols());
    let mx = Monomial::var(ctx.nvars(), ctx.x());
    let my = Monomial::var(ctx.nvars(), ctx.y());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            for t in e.terms() {
                if t.mono == mx {
                    a.set(i, j, t.coeff.clone());
                } else if t.mono == my {
                    b.set(i, j, t.coeff.clone());
                } else {
                    return Err(PencilError::NotLinear {
                        row: i,
                        col: j,
                        entry: e.to_string(),
                    });
                }
            }
        }
    }
    Ok(Pencil::new(ctx, a, b))
}

/// A power of a linear form dividing an invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryDivisor {
    /// The linear form, `y` or `x - r*y`.
    pub form: String,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "r_primes")]
pub enum PencilSummary {
    /// No elementary divisors: a single `L'` block.
    SingleLPrime,
    /// One `L'` block plus `M` blocks of the listed sizes (descending).
    LPrimeWithM(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilInvariants {
    pub normal_rank: usize,
    /// `d_i / d_{i-1}`, normalized so the highest power of `x` has
    /// coefficient 1.
    pub invariant_factors: Vec<String>,
    pub elementary_divisors: Vec<ElementaryDivisor>,
    pub has_zero_block: bool,
    pub summary: PencilSummary,
}

impl PencilInvariants {
    /// Size of the `L'` block implied by the column count.
    pub fn l_prime_size(&self, cols: usize) -> usize {
        cols - self
            .elementary_divisors
            .iter()
            .map(|e| e.power as usize)
            .sum::<usize>()
    }
}

/// Univariate polynomial in the dehomogenized variable, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Uni(Vec<Scalar>);

impl Uni {
    fn trim(mut self) -> Uni {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &Scalar {
        self.0.last().unwrap()
    }

    fn monic(&self) -> Uni {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().unwrap();
        Uni(self.0.iter().map(|c| c * &inv).collect())
    }

    fn rem(&self, d: &Uni) -> Uni {
        let mut r = self.0.clone();
        let inv = d.lc().inv().unwrap();
        while r.len() >= d.0.len() && !r.is_empty() {
            let shift = r.len() - d.0.len();
            let f = r.last().unwrap() * &inv;
            for (k, c) in d.0.iter().enumerate() {
                r[shift + k] = &r[shift + k] - &(&f * c);
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Uni(r)
    }

    fn gcd(&self, other: &Uni) -> Uni {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = t.field().zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// Divides by `(x - r)`; caller ensures `r` is a root.
    fn deflate(&self, r: &Scalar) -> Uni {
        let n = self.0.len();
        let mut q = vec![r.field().zero(); n - 1];
        let mut carry = r.field().zero();
        for k in (1..n).rev() {
            carry = &self.0[k] + &(&carry * r);
            q[k - 1] = carry.clone();
        }
        Uni(q)
    }
}

/// `f(x, 1)` and the exponent of the `y` power dividing `f`.
fn dehomogenize(f: &Polynomial) -> (Uni, usize) {
    let ctx = f.ctx();
    let field = ctx.field();
    let Some(d) = f.total_degree() else {
        return (Uni(Vec::new()), 0);
    };
    let d = d as usize;
    let mut coeffs = vec![field.zero(); d + 1];
    for t in f.terms() {
        let j = t.mono.exponent(ctx.x()) as usize;
        coeffs[j] = &coeffs[j] + &t.coeff;
    }
    let u = Uni(coeffs).trim();
    let v = d - u.degree();
    (u, v)
}

fn homogenize(ctx: &Arc<RingContext>, u: &Uni, ypow: usize) -> Polynomial {
    let deg = u.degree();
    let terms =
        u.0.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let mut e = vec![0u16; ctx.nvars()];
                e[ctx.x()] = j as u16;
                e[ctx.y()] = (deg - j + ypow) as u16;
                crate::ring::Term {
                    mono: Monomial::from_exponents(e),
                    coeff: c.clone(),
                }
            });
    Polynomial::from_terms(ctx, terms)
}

/// Binary form scaled so that its highest power of `x` has coefficient 1.
pub fn normalize_form(f: &Polynomial) -> Polynomial {
    let (u, v) = dehomogenize(f);
    if u.is_zero() {
        return f.clone();
    }
    homogenize(f.ctx(), &u.monic(), v)
}

/// gcd of homogeneous binary forms: univariate gcd after `y -> 1`, times
/// the common power of `y`.
pub fn form_gcd(ctx: &Arc<RingContext>, forms: &[Polynomial]) -> Polynomial {
    let mut g = Uni(Vec::new());
    let mut ypow = usize::MAX;
    for f in forms.iter().filter(|f| !f.is_zero()) {
        let (u, v) = dehomogenize(f);
        g = g.gcd(&u);
        ypow = ypow.min(v);
    }
    if ypow == usize::MAX {
        return Polynomial::zero(ctx);
    }
    homogenize(ctx, &g, ypow)
}

/// Determinantal divisors `d_0 = 1, d_1, ..., d_rank` of a pencil.
pub fn determinantal_divisors(p: &Pencil) -> Result<Vec<Polynomial>, PencilError> {
    let m = p.to_matrix();
    let ctx = m.ctx();
    let mut out = vec![Polynomial::one(ctx)];
    for k in 1..=p.rows().min(p.cols()) {
        let d = form_gcd(ctx, &m.minors(k)?);
        if d.is_zero() {
            break;
        }
        out.push(d);
    }
    Ok(out)
}

/// Invariant factors `d_i / d_{i-1}`, i = 1..=normal rank.
pub fn invariant_factors(p: &Pencil) -> Result<Vec<Polynomial>, PencilError> {
    let d = determinantal_divisors(p)?;
    Ok(d.windows(2)
        .map(|w| normalize_form(&w[1].exact_div(&w[0]).expect("d_{i-1} divides d_i")))
        .collect())
}

/// Roots of `u` with multiplicity, and the unsplit remainder.
fn linear_factors(u: &Uni) -> Result<(Vec<(Scalar, u32)>, Uni), PencilError> {
    let field = u.0[0].field();
    let mut rest = u.monic();
    let mut roots: Vec<(Scalar, u32)> = Vec::new();
    let mut push = |rest: &mut Uni, r: Scalar| {
        let mut e = 0;
        while rest.degree() > 0 && rest.eval(&r).is_zero() {
            *rest = rest.deflate(&r);
            e += 1;
        }
        if e > 0 {
            roots.push((r, e));
        }
    };
    match field {
        Field::Prime(p) => {
            for v in 0..p {
                if rest.degree() == 0 {
                    break;
                }
                push(&mut rest, field.from_i64(v as i64));
            }
        }
        Field::Rational => {
            push(&mut rest, field.zero());
            if rest.degree() > 0 {
                for r in rational_root_candidates(&rest)? {
                    if rest.degree() == 0 {
                        break;
                    }
                    push(&mut rest, r);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok((roots, rest))
}

fn rational_root_candidates(u: &Uni) -> Result<Vec<Scalar>, PencilError> {
    let rats: Vec<_> = u.0.iter().map(|c| c.to_rational().unwrap()).collect();
    let den_lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * num_rational::BigRational::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let a0 = ints[0].abs();
    let ad = ints.last().unwrap().abs();
    let too_big = || PencilError::NeedsFieldExtension("coefficients too large to factor".into());
    let ps = divisors(a0.to_u64().ok_or_else(too_big)?).ok_or_else(too_big)?;
    let qs = divisors(ad.to_u64().ok_or_else(too_big)?).ok_or_else(too_big)?;
    let mut out = Vec::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let s = Field::Rational
                    .from_ratio(&(BigInt::from(*p) * sign), &BigInt::from(*q))
                    .unwrap();
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by(|a: &Scalar, b| a.total_cmp(b));
    Ok(out)
}

fn divisors(n: u64) -> Option<Vec<u64>> {
    if n == 0 || n > 1 << 40 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

/// Splits a binary form into powers of linear forms (normalized
/// `y` or `x - r*y`), sorted by form.
pub fn split_form(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>, PencilError> {
    let ctx = f.ctx();
    let (u, v) = dehomogenize(f);
    let mut out = Vec::new();
    if v > 0 {
        out.push((Polynomial::var(ctx, ctx.y()), v as u32));
    }
    if u.degree() > 0 {
        let (roots, rest) = linear_factors(&u)?;
        if rest.degree() > 0 {
            return Err(PencilError::NeedsFieldExtension(f.to_string()));
        }
        let x = Polynomial::var(ctx, ctx.x());
        let y = Polynomial::var(ctx, ctx.y());
        for (r, e) in roots {
            out.push((&x - &y.scale(&r), e));
        }
    }
    Ok(out)
}

/// Normal rank, invariant factors and elementary divisors.
pub fn pencil_invariants(p: &Pencil) -> Result<PencilInvariants, PencilError> {
    let factors = invariant_factors(p)?;
    let mut eds = Vec::new();
    for s in &factors {
        for (form, power) in split_form(s)? {
            eds.push(ElementaryDivisor {
                form: form.to_string(),
                power,
            });
        }
    }
    eds.sort_by(|a, b| a.form.cmp(&b.form).then(a.power.cmp(&b.power)));
    let normal_rank = factors.len();
    let mut powers: Vec<u32> = eds.iter().map(|e| e.power).collect();
    powers.sort_unstable_by(|a, b| b.cmp(a));
    let summary = if powers.is_empty() {
        PencilSummary::SingleLPrime
    } else {
        PencilSummary::LPrimeWithM(powers)
    };
    Ok(PencilInvariants {
        normal_rank,
        invariant_factors: factors.iter().map(|f| f.to_string()).collect(),
        elementary_divisors: eds,
        has_zero_block: normal_rank < p.cols(),
        summary,
    })
}

/// Invariants of `φ'`, which must be `(m + 1) x m` of full column rank.
pub fn classify_phi_prime(p: &Pencil) -> Result<PencilInvariants, PencilError> {
    if p.rows() != p.cols() + 1 {
        return Err(PencilError::InvalidSetting(format!(
            "expected an (m+1) x m pencil, got {} x {}",
            p.rows(),
            p.cols()
        )));
    }
    let inv = pencil_invariants(p)?;
    if inv.has_zero_block {
        return Err(PencilError::InvalidSetting(format!(
            "normal rank {} below column count {}: zero or L blocks present",
            inv.normal_rank,
            p.cols()
        )));
    }
    Ok(inv)
}

/// `φ'`: rows `1..n` and the `n - 2` linear columns of `φ`.
pub fn phi_prime(phi: &PolyMatrix) -> PolyMatrix {
    let rows: Vec<usize> = (1..phi.rows()).collect();
    let cols: Vec<usize> = (0..phi.cols() - 1).collect();
    phi.submatrix(&rows, &cols)
}

/// Whether every variable of `ctx` other than `x`, `y` is unused in `m`.
pub fn is_xy_matrix(m: &PolyMatrix) -> bool {
    let ctx = m.ctx();
    m.entries().iter().all(|e| {
        (0..ctx.nvars())
            .filter(|&v| v != ctx.x() && v != ctx.y())
            .all(|v| !e.involves(v) || ctx.kind(v) == VarKind::Aux)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<RingContext> {
        RingContext::rees(5, Field::Rational).unwrap()
    }

    fn pencil(rows: &[&[&str]]) -> Pencil {
        pencil_from_matrix(&PolyMatrix::from_rows(&ctx(), rows).unwrap()).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        crate::ring::parse_poly(s, &ctx()).unwrap()
    }

    #[test]
    fn split_rejects_nonlinear_entries() {
        let m = PolyMatrix::from_rows(&ctx(), &[&["x^2"]]).unwrap();
        assert!(matches!(
            pencil_from_matrix(&m),
            Err(PencilError::NotLinear { .. })
        ));
        let m = PolyMatrix::from_rows(&ctx(), &[&["x + z"]]).unwrap();
        assert!(pencil_from_matrix(&m).is_err());
        let z = PolyMatrix::zeros(&ctx(), 2, 3);
        let pz = pencil_from_matrix(&z).unwrap();
        assert!(pz.a().is_zero() && pz.b().is_zero());
        assert_eq!(pz.to_matrix(), z);
    }

    #[test]
    fn staircase_has_trivial_divisors() {
        let l = pencil(&[&["x", "y", "0"], &["0", "x", "y"]]);
        let d = determinantal_divisors(&l).unwrap();
        assert!(d.iter().all(|f| f.is_constant()));
        let inv = pencil_invariants(&l).unwrap();
        assert!(inv.elementary_divisors.is_empty());
    }

    #[test]
    fn one_by_one_pencil() {
        let inv = pencil_invariants(&pencil(&[&["2*x + 3*y"]])).unwrap();
        assert_eq!(inv.invariant_factors, vec!["3/2*y + x".to_string()]);
        assert_eq!(inv.elementary_divisors.len(), 1);
        assert_eq!(inv.elementary_divisors[0].power, 1);
    }

    #[test]
    fn form_gcd_restores_y_power() {
        let c = ctx();
        let g = form_gcd(&c, &[p("x*y^2 + y^3"), p("x^2*y + x*y^2")]);
        assert_eq!(g, p("x*y + y^2"));
        let g = form_gcd(&c, &[p("y^2"), p("x*y")]);
        assert_eq!(g, p("y"));
    }

    #[test]
    fn split_over_rationals_and_prime_fields() {
        let parts = split_form(&p("x^3 - x*y^2")).unwrap();
        let shown: Vec<_> = parts.iter().map(|(f, e)| format!("{f}^{e}")).collect();
        assert_eq!(shown, vec!["y + x^1", "x^1", "-y + x^1"]);
        assert!(matches!(
            split_form(&p("x^2 + y^2")),
            Err(PencilError::NeedsFieldExtension(_))
        ));
        let c7 = RingContext::rees(5, Field::Prime(7)).unwrap();
        let f = crate::ring::parse_poly("x^2 + y^2", &c7).unwrap();
        assert!(split_form(&f).is_err());
        let f = crate::ring::parse_poly("x^2 + 3*y^2", &c7).unwrap();
        assert_eq!(split_form(&f).unwrap().len(), 2);
    }

    #[test]
    fn synthetic_blocks() {
        // [L'_3, M_1 = [x]]: 5 x 4
        let p1 = pencil(&[
            &["x", "0", "0", "0"],
            &["y", "x", "0", "0"],
            &["0", "y", "x", "0"],
            &["0", "0", "y", "0"],
            &["0", "0", "0", "x"],
        ]);
        let inv = classify_phi_prime(&p1).unwrap();
        assert_eq!(inv.summary, PencilSummary::LPrimeWithM(vec![1]));
        assert_eq!(inv.l_prime_size(4), 3);
        // [L'_2, M_2] with double root x
        let p2 = pencil(&[
            &["x", "0", "0", "0"],
            &["y", "x", "0", "0"],
            &["0", "y", "0", "0"],
            &["0", "0", "x", "y"],
            &["0", "0", "0", "x"],
        ]);
        let inv = classify_phi_prime(&p2).unwrap();
        assert_eq!(inv.summary, PencilSummary::LPrimeWithM(vec![2]));
        // L'_4 alone
        let p3 = pencil(&[
            &["x", "0", "0", "0"],
            &["y", "x", "0", "0"],
            &["0", "y", "x", "0"],
            &["0", "0", "y", "x"],
            &["0", "0", "0", "y"],
        ]);
        assert_eq!(
            classify_phi_prime(&p3).unwrap().summary,
            PencilSummary::SingleLPrime
        );
        // zero column
        let p4 = pencil(&[&["x", "0"], &["y", "0"], &["0", "0"]]);
        assert!(matches!(
            classify_phi_prime(&p4),
            Err(PencilError::InvalidSetting(_))
        ));
    }
}
