use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::jdual::{
    alpha_system, jacobian_dual, symmetric_equations, AlphaSystem, Frame, JacobianDual,
};
use super::shape::{Case, CaseLabel};
use super::ReesError;
use crate::groebner::Ideal;
use crate::ideals::{colon, height, saturate};
use crate::pencil::{
    classify_phi_prime, pencil_from_matrix, phi_prime, PencilInvariants, PencilSummary,
};
use crate::ring::{PolyMatrix, Polynomial, RingContext, Scalar};

/// Which closed-form generator list applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaBranch {
    /// `φ'` is a single `L'` block and `w0 ∉ I_2(B(φ''))`.
    SingleW0Regular,
    /// `φ'` is a single `L'` block and `w0 ∈ I_2(B(φ''))`.
    SingleW0ZeroDivisor,
    /// `φ'` has an `M` block of size at least 2.
    LongM,
    /// `φ' ~ [L', M_1]` and `w0 ∉ I_2(B(φ''))`.
    M1W0Regular,
    /// `φ' ~ [L', M_1]` and `w0 ∈ I_2(B(φ''))`.
    M1W0ZeroDivisor,
    /// The `z^2` column shape, where no block data is needed.
    ZSquaredColumn,
}

impl FormulaBranch {
    pub fn name(self) -> &'static str {
        match self {
            FormulaBranch::SingleW0Regular => "single_w0_regular",
            FormulaBranch::SingleW0ZeroDivisor => "single_w0_zero_divisor",
            FormulaBranch::LongM => "long_m",
            FormulaBranch::M1W0Regular => "m1_w0_regular",
            FormulaBranch::M1W0ZeroDivisor => "m1_w0_zero_divisor",
            FormulaBranch::ZSquaredColumn => "z_squared_column",
        }
    }

    fn select(summary: &PencilSummary, w0_in_i2: bool) -> Result<FormulaBranch, ReesError> {
        Ok(match summary {
            PencilSummary::SingleLPrime if w0_in_i2 => FormulaBranch::SingleW0ZeroDivisor,
            PencilSummary::SingleLPrime => FormulaBranch::SingleW0Regular,
            PencilSummary::LPrimeWithM(p) if p[0] >= 2 => FormulaBranch::LongM,
            PencilSummary::LPrimeWithM(p) if p.len() == 1 => {
                if w0_in_i2 {
                    FormulaBranch::M1W0ZeroDivisor
                } else {
                    FormulaBranch::M1W0Regular
                }
            }
            PencilSummary::LPrimeWithM(p) => {
                return Err(ReesError::Unsupported(format!(
                    "phi' has {} blocks M_1; the closed forms cover a single one",
                    p.len()
                )))
            }
        })
    }
}

impl fmt::Display for FormulaBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NKind {
    N1,
    N2,
    N3,
    N4,
}

/// `l(n-2) = z*w0 + x*(c*w(n-2) + a*w(n-1)) + y*(d*w(n-2) + b*w(n-1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastEquationCoeffs {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    /// False when `g1` or `g2` involve other dual variables; the
    /// coefficients are then only the `w(n-2)`, `w(n-1)` parts.
    pub exact: bool,
}

/// `𝒥` with, in the `z^2` column shape, the verdict of
/// `J : (x, y) = J + I_2(B(φ''))`.
#[derive(Clone, Debug)]
pub struct JIdeal {
    pub ideal: Ideal,
    pub identity_holds: Option<bool>,
}

/// Everything the auxiliary ideals are built from, computed once per
/// normalized matrix.
#[derive(Clone, Debug)]
pub struct KData {
    pub ctx: Arc<RingContext>,
    pub n: usize,
    pub label: CaseLabel,
    /// `l1, ..., l(n-1)`.
    pub ls: Vec<Polynomial>,
    pub j: JIdeal,
    /// Dual of `φ''`: frame `(x, y, z*w0)` in Cases I and II, `(x, y)` in
    /// Case III.
    pub bpp: JacobianDual,
    pub alphas: Option<AlphaSystem>,
    pub pencil: PencilInvariants,
    pub w0_in_i2: bool,
    pub coeffs: Option<LastEquationCoeffs>,
    pub branch: FormulaBranch,
}

/// An auxiliary ideal lifted to `S` (so it contains `𝒥`), with the
/// generators beyond `𝒥` and notes on omitted or degenerate items.
#[derive(Clone, Debug)]
pub struct KResult {
    pub ideal: Ideal,
    pub extra: Vec<Polynomial>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMethod {
    Formula,
    Oracle,
    /// Both, with GB equality enforced.
    Both,
}

fn w(ctx: &Arc<RingContext>, i: usize) -> Polynomial {
    Polynomial::var(ctx, ctx.w(i))
}

fn zw0_power(ctx: &Arc<RingContext>, z: u32, w0: u32) -> Polynomial {
    &Polynomial::var(ctx, ctx.z()).pow(z) * &w(ctx, 0).pow(w0)
}

/// `(x, y, z*w0)`.
pub(crate) fn frame_ideal(ctx: &Arc<RingContext>, frame: Frame) -> Ideal {
    Ideal::new(ctx, frame.generators(ctx))
}

/// Some generator of `a` not in `b`, or of `b` not in `a`.
pub(crate) fn difference_witness(a: &Ideal, b: &Ideal) -> Option<String> {
    if let Some(g) = a.gb().elements().iter().find(|g| !b.contains(g)) {
        return Some(format!("{g} (only in the first)"));
    }
    b.gb()
        .elements()
        .iter()
        .find(|g| !a.contains(g))
        .map(|g| format!("{g} (only in the second)"))
}

pub(crate) fn require_equal(what: &str, a: &Ideal, b: &Ideal) -> Result<(), ReesError> {
    match difference_witness(a, b) {
        None => Ok(()),
        Some(witness) => Err(ReesError::Mismatch {
            what: what.to_string(),
            witness,
        }),
    }
}

/// Whether `w0 ∈ I_2(B(φ''))` for the full three-row dual.
pub fn w0_in_i2(bpp: &JacobianDual) -> Result<bool, ReesError> {
    let ctx = bpp.matrix.ctx();
    Ok(bpp.minors_ideal(2)?.contains(&w(ctx, 0)))
}

fn split_coeffs(
    ctx: &Arc<RingContext>,
    n: usize,
    g1: &Polynomial,
    g2: &Polynomial,
) -> LastEquationCoeffs {
    let coeff = |g: &Polynomial, i: usize| {
        g.coefficient(&crate::ring::Monomial::var(ctx.nvars(), ctx.w(i)))
    };
    let allowed = |g: &Polynomial| {
        g.terms().iter().all(|t| {
            t.mono.degree() == 1
                && (t.mono.exponent(ctx.w(n - 2)) == 1 || t.mono.exponent(ctx.w(n - 1)) == 1)
        })
    };
    LastEquationCoeffs {
        a: coeff(g1, n - 1),
        b: coeff(g2, n - 1),
        c: coeff(g1, n - 2),
        d: coeff(g2, n - 2),
        exact: allowed(g1) && allowed(g2),
    }
}

/// `𝒥`: `(l1, ..., l(n-2)) : (x, y, z*w0)` in Cases I and II and
/// `(l1, ..., l(n-2)) : (x, y)` in Case III, where the latter is checked
/// against `J + I_2(B(φ''))`.
pub fn ideal_j(phi: &PolyMatrix, label: &CaseLabel) -> Result<JIdeal, ReesError> {
    let ctx = phi.ctx();
    let ls = symmetric_equations(phi);
    let jgen = Ideal::new(ctx, ls[..ls.len() - 1].iter().cloned());
    match label.case {
        Case::I | Case::II => Ok(JIdeal {
            ideal: colon(&jgen, &frame_ideal(ctx, Frame::XYZW0))?,
            identity_holds: None,
        }),
        Case::III => {
            let j = colon(&jgen, &frame_ideal(ctx, Frame::XY))?;
            let bpp = jacobian_dual(&phi_double_prime(phi), Frame::XY)?;
            let alt = jgen.sum(&bpp.minors_ideal(2)?);
            let holds = alt == j;
            Ok(JIdeal {
                ideal: j,
                identity_holds: Some(holds),
            })
        }
    }
}

/// `φ''`: `φ` without its last column.
pub fn phi_double_prime(phi: &PolyMatrix) -> PolyMatrix {
    let rows: Vec<usize> = (0..phi.rows()).collect();
    let cols: Vec<usize> = (0..phi.cols() - 1).collect();
    phi.submatrix(&rows, &cols)
}

impl KData {
    /// `phi` must already be normalized and `label` its case.
    pub fn new(phi: &PolyMatrix, label: &CaseLabel) -> Result<KData, ReesError> {
        let ctx = phi.ctx().clone();
        let n = phi.rows();
        let ls = symmetric_equations(phi);
        let j = ideal_j(phi, label)?;
        let pencil = classify_phi_prime(&pencil_from_matrix(&phi_prime(phi))?)?;
        let pp = phi_double_prime(phi);
        let (bpp, alphas, coeffs) = match label.case {
            Case::I | Case::II => {
                let bpp = jacobian_dual(&pp, Frame::XYZW0)?;
                let al = alpha_system(&bpp)?;
                let coeffs = split_coeffs(&ctx, n, &al.g1, &al.g2);
                (bpp, Some(al), Some(coeffs))
            }
            Case::III => (jacobian_dual(&pp, Frame::XY)?, None, None),
        };
        let w0_in = w0_in_i2(&bpp)?;
        let branch = match label.case {
            Case::III => FormulaBranch::ZSquaredColumn,
            _ => FormulaBranch::select(&pencil.summary, w0_in)
                .unwrap_or(FormulaBranch::SingleW0Regular),
        };
        Ok(KData {
            ctx,
            n,
            label: label.clone(),
            ls,
            j,
            bpp,
            alphas,
            pencil,
            w0_in_i2: w0_in,
            coeffs,
            branch,
        })
    }

    fn require_case(&self, ok: &[Case], what: &str) -> Result<(), ReesError> {
        if ok.contains(&self.label.case) {
            Ok(())
        } else {
            Err(ReesError::WrongCase {
                expected: what.to_string(),
                actual: format!("Case {}", self.label.case),
            })
        }
    }

    fn alphas(&self) -> &AlphaSystem {
        self.alphas
            .as_ref()
            .expect("alpha system exists in Cases I and II")
    }

    /// The branch, or `Unsupported` when the block structure falls outside
    /// the closed forms.
    pub fn checked_branch(&self) -> Result<FormulaBranch, ReesError> {
        match self.label.case {
            Case::III => Ok(FormulaBranch::ZSquaredColumn),
            _ => FormulaBranch::select(&self.pencil.summary, self.w0_in_i2),
        }
    }

    fn lift(&self, extra: Vec<Polynomial>, notes: Vec<String>) -> KResult {
        let extra: Vec<Polynomial> = extra.into_iter().filter(|p| !p.is_zero()).collect();
        KResult {
            ideal: self.j.ideal.with_generators(extra.iter().cloned()),
            extra,
            notes,
        }
    }

    /// Generators of `K` modulo `𝒥`: `I_2(A)` and `z*w0`.
    fn k_bar(&self) -> Vec<Polynomial> {
        let mut g = self.alphas().i2();
        g.push(zw0_power(&self.ctx, 1, 1));
        g
    }

    /// Pairwise products of the `K` generators.
    fn k_bar_squared(&self) -> Vec<Polynomial> {
        let g = self.k_bar();
        let mut out = Vec::new();
        for i in 0..g.len() {
            for j in i..g.len() {
                out.push(&g[i] * &g[j]);
            }
        }
        out
    }

    fn coeffs(&self) -> Result<&LastEquationCoeffs, ReesError> {
        let c = self
            .coeffs
            .as_ref()
            .expect("coefficients exist in Cases I and II");
        if c.exact {
            Ok(c)
        } else {
            Err(ReesError::Unsupported(format!(
                "l{} = z*w0 + x*g1 + y*g2 with g1 = {}, g2 = {} outside span(w{}, w{})",
                self.n - 2,
                self.alphas().g1,
                self.alphas().g2,
                self.n - 2,
                self.n - 1
            )))
        }
    }

    /// `P = d*w(n-2) + b*w(n-1)` and `Q = c*w(n-2) + a*w(n-1)`.
    fn pq(&self) -> Result<(Polynomial, Polynomial), ReesError> {
        let c = self.coeffs()?;
        let (wa, wb) = (w(&self.ctx, self.n - 2), w(&self.ctx, self.n - 1));
        let p = &wa.scale(&c.d) + &wb.scale(&c.b);
        let q = &wa.scale(&c.c) + &wb.scale(&c.a);
        Ok((p, q))
    }

    /// `{u*α(i+1) + v*α(i)}` for `1 <= i <= n-4`.
    fn consecutive(&self, u: &Polynomial, v: &Polynomial) -> Vec<Polynomial> {
        let al = &self.alphas().alphas;
        (0..al.len().saturating_sub(1))
            .map(|i| &(u * &al[i + 1]) + &(v * &al[i]))
            .collect()
    }

    /// `{u*(α(i+1) - α(i)) + v*(α(i+2) - α(i+1))}` for `1 <= i <= n-5`.
    fn second_differences(&self, u: &Polynomial, v: &Polynomial) -> Vec<Polynomial> {
        let al = &self.alphas().alphas;
        (0..al.len().saturating_sub(2))
            .map(|i| {
                let d1 = &al[i + 1] - &al[i];
                let d2 = &al[i + 2] - &al[i + 1];
                &(u * &d1) + &(v * &d2)
            })
            .collect()
    }

    fn alpha_products(&self) -> Vec<Polynomial> {
        let al = &self.alphas().alphas;
        let mut out = Vec::new();
        for i in 0..al.len() {
            for j in i..al.len() {
                out.push(&al[i] * &al[j]);
            }
        }
        out
    }

    fn z_alphas(&self) -> Vec<Polynomial> {
        let z = Polynomial::var(&self.ctx, self.ctx.z());
        self.alphas().alphas.iter().map(|a| &z * a).collect()
    }

    /// The three families shared by the long-`M` lists, with notes for
    /// items whose α's do not exist at this `n`.
    fn long_m_families(&self) -> Result<(Vec<Polynomial>, Vec<String>), ReesError> {
        let (p, q) = self.pq()?;
        let al = &self.alphas().alphas;
        let m = al.len();
        let mut gens = Vec::new();
        let mut notes = Vec::new();
        if m >= 2 {
            gens.push(&(&p * &al[0]) - &(&q * &al[1]));
        } else {
            notes.push("P*alpha1 - Q*alpha2 omitted: alpha2 does not exist".into());
        }
        if m >= 3 {
            gens.push(&(&(&q * &al[2]) - &(&p * &al[1])) + &(&q * &al[0]));
        } else {
            notes.push(format!(
                "Q*alpha3 - P*alpha2 + Q*alpha1 omitted: only {m} alphas at n = {}",
                self.n
            ));
        }
        // 3 <= i <= n-5 in one-based indexing.
        let upper = self.n.saturating_sub(5);
        if upper < 3 {
            notes.push(format!(
                "family P*alpha(i+1) - Q*alpha(i), 3 <= i <= {upper}: empty"
            ));
        }
        for i in 3..=upper {
            gens.push(&(&p * &al[i]) - &(&q * &al[i - 1]));
        }
        Ok((gens, notes))
    }

    /// The listed generators of `N_kind` (lifted by adding `𝒥`).
    pub fn build_n(&self, kind: NKind) -> Result<KResult, ReesError> {
        self.require_case(&[Case::I, Case::II], "Case I or II")?;
        let ctx = &self.ctx;
        let n = self.n;
        let (wa, wb) = (w(ctx, n - 2), w(ctx, n - 1));
        let z = Polynomial::var(ctx, ctx.z());
        let z2w02 = zw0_power(ctx, 2, 2);
        let mut notes = Vec::new();
        if n < 6 && matches!(kind, NKind::N2 | NKind::N4) {
            notes.push(format!("second-difference family empty at n = {n}"));
        }
        let gens = match kind {
            NKind::N1 => self.consecutive(&-&wa, &wb),
            NKind::N2 => {
                let mut g = self.k_bar_squared();
                g.extend(self.consecutive(&-&(&z * &wa), &(&z * &wb)));
                g.extend(self.second_differences(&wb, &-&wa));
                g
            }
            NKind::N3 | NKind::N4 => {
                let c = self.coeffs()?;
                let aw = wb.scale(&c.a);
                let bw = wb.scale(&c.b);
                let mut g = vec![z2w02];
                if kind == NKind::N3 {
                    g.extend(self.consecutive(&-&aw, &bw));
                } else {
                    g.extend(self.consecutive(&-&(&z * &aw), &(&z * &bw)));
                    g.extend(self.second_differences(&bw, &-&aw));
                }
                g
            }
        };
        Ok(self.lift(gens, notes))
    }
}

/// `K = (l1, ..., l(n-2)) + I_2(A) + (z*w0)` with the verdict of
/// `ht(𝒥 + K) = n - 1`.
pub fn ideal_k(data: &KData) -> Result<(Ideal, bool), ReesError> {
    data.require_case(&[Case::I, Case::II], "Case I or II")?;
    let k = Ideal::new(
        &data.ctx,
        data.ls[..data.n - 2].iter().cloned().chain(data.k_bar()),
    );
    let ok = height(&data.j.ideal.sum(&k)) == Some(data.n - 1);
    Ok((k, ok))
}

/// Free function form of [`KData::build_n`].
pub fn build_n(kind: NKind, data: &KData) -> Result<KResult, ReesError> {
    data.build_n(kind)
}

fn symbolic_square_formula(data: &KData) -> Result<KResult, ReesError> {
    let branch = data.checked_branch()?;
    let n = data.n;
    let ctx = &data.ctx;
    let z2w02 = zw0_power(ctx, 2, 2);
    match branch {
        FormulaBranch::SingleW0Regular => {
            let mut r = data.build_n(NKind::N1)?;
            r.extra.insert(0, z2w02.clone());
            r.ideal = r.ideal.with_generators([z2w02]);
            Ok(r)
        }
        FormulaBranch::SingleW0ZeroDivisor => data.build_n(NKind::N2),
        FormulaBranch::LongM => {
            let mut g = data.k_bar_squared();
            let last_alpha = data.alphas().alphas.last().unwrap();
            g.push(&(&Polynomial::var(ctx, ctx.z()) * &w(ctx, n - 2)) * last_alpha);
            let (fam, notes) = data.long_m_families()?;
            g.extend(fam);
            Ok(data.lift(g, notes))
        }
        FormulaBranch::M1W0Regular => data.build_n(NKind::N3),
        FormulaBranch::M1W0ZeroDivisor => {
            let mut r = data.build_n(NKind::N4)?;
            let sq = data.k_bar_squared();
            r.ideal = r.ideal.with_generators(sq.iter().cloned());
            r.extra.extend(sq);
            Ok(r)
        }
        FormulaBranch::ZSquaredColumn => unreachable!("guarded by the case check"),
    }
}

/// `(𝒥 + K^2) : x^∞`.
fn symbolic_square_oracle(data: &KData) -> Result<Ideal, ReesError> {
    let sq = data.j.ideal.with_generators(data.k_bar_squared());
    let x = Ideal::new(&data.ctx, [Polynomial::var(&data.ctx, data.ctx.x())]);
    Ok(saturate(&sq, &x)?.ideal)
}

/// `K^(2)` lifted to `S`, by the closed form for the branch, by
/// `x`-saturation of the square, or both with equality enforced.
pub fn symbolic_square_k(data: &KData, method: KMethod) -> Result<KResult, ReesError> {
    data.require_case(&[Case::I], "Case I")?;
    match method {
        KMethod::Formula => symbolic_square_formula(data),
        KMethod::Oracle => Ok(KResult {
            ideal: symbolic_square_oracle(data)?,
            extra: Vec::new(),
            notes: Vec::new(),
        }),
        KMethod::Both => {
            let f = symbolic_square_formula(data)?;
            let o = symbolic_square_oracle(data)?;
            require_equal("symbolic square of K", &f.ideal, &o)?;
            Ok(f)
        }
    }
}

fn kprime_formula(data: &KData) -> Result<KResult, ReesError> {
    let branch = data.checked_branch()?;
    let ctx = &data.ctx;
    let n = data.n;
    let (wa, wb) = (w(ctx, n - 2), w(ctx, n - 1));
    let mut g = vec![zw0_power(ctx, 2, 1)];
    g.extend(data.z_alphas());
    let mut notes = Vec::new();
    if n < 6 && branch != FormulaBranch::SingleW0Regular && branch != FormulaBranch::M1W0Regular {
        notes.push(format!("second-difference family empty at n = {n}"));
    }
    match branch {
        FormulaBranch::SingleW0Regular => g.extend(data.consecutive(&-&wa, &wb)),
        FormulaBranch::SingleW0ZeroDivisor => {
            g.extend(data.alpha_products());
            g.extend(data.second_differences(&wb, &-&wa));
        }
        FormulaBranch::LongM => {
            g.extend(data.alpha_products());
            let (fam, more) = data.long_m_families()?;
            g.extend(fam);
            notes.extend(more);
        }
        FormulaBranch::M1W0Regular | FormulaBranch::M1W0ZeroDivisor => {
            let c = data.coeffs()?;
            let aw = wb.scale(&c.a);
            let bw = wb.scale(&c.b);
            if branch == FormulaBranch::M1W0Regular {
                g.extend(data.consecutive(&-&aw, &bw));
            } else {
                g.extend(data.alpha_products());
                g.extend(data.second_differences(&bw, &-&aw));
            }
        }
        FormulaBranch::ZSquaredColumn => unreachable!("guarded by the case check"),
    }
    Ok(data.lift(g, notes))
}

/// `((z^2*w0) + 𝒥) : U : U` with `U = (x, y, z*w0)`.
fn kprime_oracle(data: &KData) -> Result<Ideal, ReesError> {
    let u = frame_ideal(&data.ctx, Frame::XYZW0);
    let base = data.j.ideal.with_generators([zw0_power(&data.ctx, 2, 1)]);
    Ok(colon(&colon(&base, &u)?, &u)?)
}

/// `K'` lifted to `S` (Case II).
pub fn ideal_kprime(data: &KData, method: KMethod) -> Result<KResult, ReesError> {
    data.require_case(&[Case::II], "Case II")?;
    match method {
        KMethod::Formula => kprime_formula(data),
        KMethod::Oracle => Ok(KResult {
            ideal: kprime_oracle(data)?,
            extra: Vec::new(),
            notes: Vec::new(),
        }),
        KMethod::Both => {
            let f = kprime_formula(data)?;
            let o = kprime_oracle(data)?;
            require_equal("K'", &f.ideal, &o)?;
            Ok(f)
        }
    }
}

/// `K'' = (z^2*w0) + 𝒥` (Case III), after checking it equals
/// `((z^2*w0) + 𝒥) : (x, y, z^2*w0)`.
pub fn ideal_kdoubleprime(data: &KData) -> Result<KResult, ReesError> {
    data.require_case(&[Case::III], "Case III")?;
    let g = zw0_power(&data.ctx, 2, 1);
    let r = data.lift(vec![g], Vec::new());
    let c = colon(&r.ideal, &frame_ideal(&data.ctx, Frame::XYZ2W0))?;
    if c != r.ideal {
        return Err(ReesError::SettingViolation(format!(
            "(z^2*w0) : (x, y, z^2*w0) differs from (z^2*w0) in B; witness {}",
            difference_witness(&c, &r.ideal).unwrap_or_default()
        )));
    }
    Ok(r)
}
