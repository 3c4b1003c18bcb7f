//! Colon, saturation, intersection, radical membership, dimension and the
//! Fitting-ideal tests built on top of them.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::groebner::{buchberger, GroebnerBasis, Ideal};
use crate::ring::{MonomialOrder, PolyMatrix, Polynomial, RingContext, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealsError {
    #[error("the unit ideal has no dimension")]
    UnitIdeal,
    #[error("colon or saturation by the zero ideal")]
    ZeroDivisorIdeal,
    #[error("Fitting index {i} out of range for a matrix with {rows} rows")]
    IndexOutOfRange { i: usize, rows: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `I : J^m` at the first `m` where the chain stabilizes.
#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub ideal: Ideal,
    pub exponent: usize,
}

fn t_ring(ctx: &Arc<RingContext>) -> (Arc<RingContext>, usize) {
    let t = ctx.nvars();
    let ext = ctx.with_aux_vars(&["t"], MonomialOrder::Elimination { block: vec![t] });
    (ext, t)
}

/// Keeps the `t`-free part of a basis computed in `t_ring(ctx)`.
fn drop_t(ctx: &Arc<RingContext>, gb: &GroebnerBasis, t: usize) -> Ideal {
    let kept: Vec<Polynomial> = gb
        .elements()
        .iter()
        .filter(|g| !g.involves(t))
        .map(|g| g.restrict(ctx).unwrap())
        .collect();
    if *ctx.order() == MonomialOrder::DegRevLex {
        Ideal::from_basis(GroebnerBasis::from_reduced(ctx, kept))
    } else {
        Ideal::new(ctx, kept)
    }
}

/// `I ∩ J`, from `t·I + (1-t)·J` by eliminating `t`.
pub fn intersect(i: &Ideal, j: &Ideal) -> Ideal {
    let ctx = i.ctx();
    assert!(ctx.same_ring(j.ctx()), "ideals live in different rings");
    if i.is_zero() || j.is_zero() {
        return Ideal::zero(ctx);
    }
    let (ext, t) = t_ring(ctx);
    let tv = Polynomial::var(&ext, t);
    let one_minus_t = &Polynomial::one(&ext) - &tv;
    let gens: Vec<Polynomial> = i
        .generators()
        .iter()
        .map(|f| &f.embed(&ext) * &tv)
        .chain(j.generators().iter().map(|g| &g.embed(&ext) * &one_minus_t))
        .collect();
    let (gb, _) = buchberger(&ext, &gens);
    drop_t(ctx, &gb, t)
}

fn is_homogeneous_ideal(i: &Ideal) -> bool {
    i.generators().iter().all(|g| g.is_homogeneous())
}

/// The support of `g` with multiplicity when `g` is a monomial.
fn monomial_vars(g: &Polynomial) -> Option<Vec<usize>> {
    if g.len() != 1 {
        return None;
    }
    let mut out = Vec::new();
    for (v, &e) in g.lm().exponents().iter().enumerate() {
        out.extend(std::iter::repeat_n(v, e as usize));
    }
    Some(out)
}

fn swap_vars(f: &Polynomial, a: usize, b: usize) -> Polynomial {
    if a == b {
        return f.clone();
    }
    let ctx = f.ctx();
    let images: Vec<Polynomial> = (0..ctx.nvars())
        .map(|k| {
            Polynomial::var(
                ctx,
                if k == a {
                    b
                } else if k == b {
                    a
                } else {
                    k
                },
            )
        })
        .collect();
    f.substitute(ctx, &images)
}

/// `I : v` or `I : v^∞` for a homogeneous `I` under degrevlex: swap `v`
/// into the last position of the order and strip powers of it from a
/// Gröbner basis.
fn colon_var_graded(i: &Ideal, v: usize, saturate: bool) -> Ideal {
    let ctx = i.ctx();
    let last = 0;
    let swapped = if v == last {
        Ideal::from_basis(i.gb().clone())
    } else {
        Ideal::new(ctx, i.generators().iter().map(|g| swap_vars(g, v, last)))
    };
    let stripped = swapped.gb().elements().iter().map(|g| {
        let k = g
            .terms()
            .iter()
            .map(|t| t.mono.exponent(last))
            .min()
            .unwrap_or(0);
        let k = if saturate { k } else { k.min(1) };
        if k == 0 {
            g.clone()
        } else {
            let xk = Polynomial::var(ctx, last).pow(k as u32);
            g.exact_div(&xk).expect("common power of the variable")
        }
    });
    if v == last {
        let out = Ideal::new(ctx, stripped);
        Ideal::from_basis(out.gb().clone())
    } else {
        let back: Vec<Polynomial> = stripped.map(|g| swap_vars(&g, v, last)).collect();
        Ideal::new(ctx, back)
    }
}

fn graded_fast_path(i: &Ideal) -> bool {
    *i.ctx().order() == MonomialOrder::DegRevLex && is_homogeneous_ideal(i)
}

/// `I : g` as `(I ∩ (g)) / g`; monomial `g` over a homogeneous `I` goes one
/// variable at a time instead.
pub fn colon_poly(i: &Ideal, g: &Polynomial) -> Ideal {
    let ctx = i.ctx();
    if g.is_zero() {
        return Ideal::unit(ctx);
    }
    if g.is_constant() {
        return Ideal::from_basis(i.gb().clone());
    }
    if graded_fast_path(i) {
        if let Some(vars) = monomial_vars(g) {
            let mut cur = i.clone();
            for v in vars {
                cur = colon_var_graded(&cur, v, false);
            }
            return Ideal::from_basis(cur.gb().clone());
        }
    }
    let meet = intersect(i, &Ideal::new(ctx, [g.clone()]));
    let quotients = meet
        .gb()
        .elements()
        .iter()
        .map(|h| h.exact_div(g).expect("element of (g) is divisible by g"));
    let out = Ideal::new(ctx, quotients);
    Ideal::from_basis(out.gb().clone())
}

fn meet_all(parts: impl IntoIterator<Item = Ideal>) -> Ideal {
    let mut parts = parts.into_iter();
    let first = parts.next().unwrap();
    let out = parts.fold(first, |acc, next| {
        if acc.contains_ideal(&next) {
            next
        } else if next.contains_ideal(&acc) {
            acc
        } else {
            intersect(&acc, &next)
        }
    });
    Ideal::from_basis(out.gb().clone())
}

/// `I : J`, the intersection of `I : g` over the generators `g` of `J`.
pub fn colon(i: &Ideal, j: &Ideal) -> Result<Ideal, IdealsError> {
    if j.is_zero() {
        return Err(IdealsError::ZeroDivisorIdeal);
    }
    Ok(meet_all(j.generators().iter().map(|g| colon_poly(i, g))))
}

/// Iterates `I ← I : J` until the ideal stops growing. For a homogeneous
/// `I` and a monomial `J` the limit is `∩ I : g^∞` and the exponent is the
/// least `m` with `J^m · (I : J^∞) ⊆ I`.
pub fn saturate(i: &Ideal, j: &Ideal) -> Result<SaturationResult, IdealsError> {
    if j.is_zero() {
        return Err(IdealsError::ZeroDivisorIdeal);
    }
    let monomial = j
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .all(|g| monomial_vars(g).is_some());
    if monomial && graded_fast_path(i) {
        return Ok(saturate_monomial(i, j));
    }
    let mut current = Ideal::from_basis(i.gb().clone());
    let mut exponent = 0;
    loop {
        let next = colon(&current, j)?;
        if next == current {
            return Ok(SaturationResult {
                ideal: current,
                exponent,
            });
        }
        current = next;
        exponent += 1;
    }
}

fn saturate_monomial(i: &Ideal, j: &Ideal) -> SaturationResult {
    let gens: Vec<&Polynomial> = j.generators().iter().filter(|g| !g.is_zero()).collect();
    let sat = meet_all(gens.iter().map(|g| {
        let mut vars = monomial_vars(g).unwrap();
        vars.dedup();
        let mut cur = i.clone();
        for v in vars {
            cur = colon_var_graded(&cur, v, true);
        }
        Ideal::from_basis(cur.gb().clone())
    }));
    let ctx = i.ctx();
    let mut power: Vec<Polynomial> = vec![Polynomial::one(ctx)];
    let mut exponent = 0;
    loop {
        let inside = power
            .iter()
            .all(|u| sat.gb().elements().iter().all(|s| i.contains(&(u * s))));
        if inside {
            return SaturationResult {
                ideal: sat,
                exponent,
            };
        }
        let mut next: Vec<Polynomial> = Vec::new();
        for u in &power {
            for g in &gens {
                let p = (u * *g).monic();
                if !next.contains(&p) {
                    next.push(p);
                }
            }
        }
        power = next;
        exponent += 1;
    }
}

/// `f ∈ √I`, decided by `1 ∈ I + (1 - t·f)`.
pub fn radical_member(f: &Polynomial, i: &Ideal) -> bool {
    if f.is_zero() {
        return true;
    }
    let ctx = i.ctx();
    let ext = ctx.with_aux_vars(&["t"], MonomialOrder::DegRevLex);
    let t = Polynomial::var(&ext, ctx.nvars());
    let rabinowitsch = &Polynomial::one(&ext) - &(&t * &f.embed(&ext));
    let gens: Vec<Polynomial> = i
        .generators()
        .iter()
        .map(|g| g.embed(&ext))
        .chain([rabinowitsch])
        .collect();
    buchberger(&ext, &gens).0.is_unit()
}

/// Krull dimension of `S/I`: the largest set of variables containing the
/// support of no leading monomial of the Groebner basis.
pub fn dimension(i: &Ideal) -> Result<usize, IdealsError> {
    let gb = i.gb();
    if gb.is_unit() {
        return Err(IdealsError::UnitIdeal);
    }
    let nvars = i.ctx().nvars();
    assert!(nvars <= 64, "dimension supports at most 64 variables");
    let masks: Vec<u64> = gb
        .elements()
        .iter()
        .map(|g| crate::groebner::support_mask(g.lm()))
        .collect();
    let mut best = 0;
    independent_sets(&masks, nvars, 0, 0, 0, &mut best);
    Ok(best)
}

fn independent_sets(
    masks: &[u64],
    nvars: usize,
    var: usize,
    set: u64,
    size: usize,
    best: &mut usize,
) {
    if size > *best {
        *best = size;
    }
    if var == nvars || size + (nvars - var) <= *best {
        return;
    }
    let with = set | (1 << var);
    if masks.iter().all(|&m| m & !with != 0) {
        independent_sets(masks, nvars, var + 1, with, size + 1, best);
    }
    independent_sets(masks, nvars, var + 1, set, size, best);
}

/// `#vars - dim(S/I)`; the unit ideal has infinite height, reported as
/// `None`.
pub fn height(i: &Ideal) -> Option<usize> {
    dimension(i).ok().map(|d| i.ctx().nvars() - d)
}

/// `Fitt_i = I_{rows-i}(φ)`, with `(1)` for non-positive minor size and
/// `(0)` when the minor size exceeds the column count.
pub fn fitting_ideal(phi: &PolyMatrix, i: usize) -> Result<Ideal, IdealsError> {
    let rows = phi.rows();
    if i > rows {
        return Err(IdealsError::IndexOutOfRange { i, rows });
    }
    let k = rows - i;
    let ctx = phi.ctx();
    if k == 0 {
        return Ok(Ideal::unit(ctx));
    }
    if k > phi.cols() {
        return Ok(Ideal::zero(ctx));
    }
    Ok(Ideal::new(ctx, phi.minors(k)?))
}

/// One Fitting index examined by [`gs_report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GsIndex {
    pub i: usize,
    pub minor_size: usize,
    pub height: Option<usize>,
    pub required: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GsReport {
    pub s: usize,
    pub height_of_i: usize,
    /// Indices below `height_of_i`; vacuous for primes containing `I`.
    pub skipped: Vec<usize>,
    pub checked: Vec<GsIndex>,
    pub holds: bool,
}

/// Details of the `G_s` test: `ht I_{n-i}(φ) ≥ i + 1` for
/// `ht I ≤ i ≤ s - 1`, where `I = I_{n-1}(φ)` must have height 2.
pub fn gs_report(phi: &PolyMatrix, s: usize) -> Result<GsReport, IdealsError> {
    let n = phi.rows();
    if n < 2 || phi.cols() != n - 1 {
        return Err(IdealsError::Precondition(format!(
            "expected an n x (n-1) matrix, got {} x {}",
            n,
            phi.cols()
        )));
    }
    let ideal = fitting_ideal(phi, 1)?;
    let h = height(&ideal);
    if h != Some(2) {
        return Err(IdealsError::Precondition(format!(
            "maximal minors have height {h:?}, expected 2"
        )));
    }
    let mut checked = Vec::new();
    for i in 2..s.max(2) {
        if i > n {
            break;
        }
        let fitt = fitting_ideal(phi, i)?;
        let height = height(&fitt);
        let ok = height.is_none_or(|v| v > i);
        checked.push(GsIndex {
            i,
            minor_size: n - i,
            height,
            required: i + 1,
            ok,
        });
    }
    let holds = checked.iter().all(|c| c.ok);
    Ok(GsReport {
        s,
        height_of_i: 2,
        skipped: (0..2.min(s)).collect(),
        checked,
        holds,
    })
}

pub fn gs_check(phi: &PolyMatrix, s: usize) -> Result<bool, IdealsError> {
    Ok(gs_report(phi, s)?.holds)
}

/// `Min(I_{n-2}(φ)) = {(x, y)}`: the minors lie in `(x, y)` and both `x`
/// and `y` lie in their radical.
pub fn min_prime_check(phi: &PolyMatrix) -> Result<bool, IdealsError> {
    let n = phi.rows();
    if n < 3 {
        return Err(IdealsError::Precondition("need at least 3 rows".into()));
    }
    let ctx = phi.ctx();
    let minors = fitting_ideal(phi, 2)?;
    let (x, y) = (ctx.x(), ctx.y());
    let inside = minors
        .generators()
        .iter()
        .all(|g| g.kill_vars(&[x, y]).is_zero());
    if !inside || minors.is_zero() {
        return Ok(false);
    }
    Ok(radical_member(&Polynomial::var(ctx, x), &minors)
        && radical_member(&Polynomial::var(ctx, y), &minors))
}
