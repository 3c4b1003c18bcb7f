use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ReesError;
use crate::groebner::Ideal;
use crate::ring::{Monomial, PolyMatrix, Polynomial, RingContext};

/// Generator list a Jacobian dual is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// `(x, y, z*w0)`
    XYZW0,
    /// `(x, y, z^2*w0)`
    XYZ2W0,
    /// `(x, y)`
    XY,
}

impl Frame {
    pub fn len(self) -> usize {
        match self {
            Frame::XY => 2,
            _ => 3,
        }
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// The monomial of the third frame element, if any.
    fn third(self, ctx: &Arc<RingContext>) -> Option<Monomial> {
        let z_power = match self {
            Frame::XYZW0 => 1,
            Frame::XYZ2W0 => 2,
            Frame::XY => return None,
        };
        let mut e = vec![0u16; ctx.nvars()];
        e[ctx.z()] = z_power;
        e[ctx.w(0)] = 1;
        Some(Monomial::from_exponents(e))
    }

    pub fn generators(self, ctx: &Arc<RingContext>) -> Vec<Polynomial> {
        let mut g = vec![Polynomial::var(ctx, ctx.x()), Polynomial::var(ctx, ctx.y())];
        if let Some(m) = self.third(ctx) {
            g.push(Polynomial::monomial(ctx, m, ctx.field().one()));
        }
        g
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::XYZW0 => "(x, y, z*w0)",
            Frame::XYZ2W0 => "(x, y, z^2*w0)",
            Frame::XY => "(x, y)",
        })
    }
}

/// The row vector `[w0 ... w(n-1)] * φ`.
pub fn symmetric_equations(phi: &PolyMatrix) -> Vec<Polynomial> {
    let ctx = phi.ctx();
    (0..phi.cols())
        .map(|j| {
            let mut l = Polynomial::zero(ctx);
            for i in 0..phi.rows() {
                l = &l + &(&Polynomial::var(ctx, ctx.w(i)) * phi.get(i, j));
            }
            l
        })
        .collect()
}

/// `ℒ = (l1, ..., l(n-1))`. A zero column means the presentation is not
/// minimal and is rejected.
pub fn symmetric_ideal(phi: &PolyMatrix) -> Result<Ideal, ReesError> {
    let ls = symmetric_equations(phi);
    if let Some(j) = ls.iter().position(Polynomial::is_zero) {
        return Err(ReesError::ZeroColumn(j));
    }
    Ok(Ideal::new(phi.ctx(), ls))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianDual {
    pub frame: Frame,
    /// `frame.len() x cols` matrix `B` with `[w] * φ = frame * B`.
    pub matrix: PolyMatrix,
}

impl JacobianDual {
    /// `I_k(B)`.
    pub fn minors_ideal(&self, k: usize) -> Result<Ideal, ReesError> {
        Ok(Ideal::new(self.matrix.ctx(), self.matrix.minors(k)?))
    }
}

/// Splits every `l_j` along the frame: terms divisible by the third frame
/// monomial go to the last row, the rest to `x` when divisible by `x`,
/// otherwise to `y`.
pub fn jacobian_dual(phi: &PolyMatrix, frame: Frame) -> Result<JacobianDual, ReesError> {
    let ctx = phi.ctx();
    let ls = symmetric_equations(phi);
    let third = frame.third(ctx);
    let x = Monomial::var(ctx.nvars(), ctx.x());
    let y = Monomial::var(ctx.nvars(), ctx.y());
    let mut b = PolyMatrix::zeros(ctx, frame.len(), ls.len());
    for (j, l) in ls.iter().enumerate() {
        let mut rows = vec![Vec::new(); frame.len()];
        for t in l.terms() {
            let (row, q) = if let Some(q) = third.as_ref().and_then(|m| t.mono.checked_div(m)) {
                (2, q)
            } else if let Some(q) = t.mono.checked_div(&x) {
                (0, q)
            } else if let Some(q) = t.mono.checked_div(&y) {
                (1, q)
            } else {
                let term = Polynomial::monomial(ctx, t.mono.clone(), t.coeff.clone());
                return Err(ReesError::FrameMismatch {
                    column: j + 1,
                    term: term.to_string(),
                    frame: frame.to_string(),
                });
            };
            rows[row].push(crate::ring::Term {
                mono: q,
                coeff: t.coeff.clone(),
            });
        }
        for (r, terms) in rows.into_iter().enumerate() {
            b.set(r, j, Polynomial::from_terms(ctx, terms));
        }
    }
    let gens = frame.generators(ctx);
    for (j, l) in ls.iter().enumerate() {
        let mut acc = Polynomial::zero(ctx);
        for (r, g) in gens.iter().enumerate() {
            acc = &acc + &(g * b.get(r, j));
        }
        assert_eq!(&acc, l, "Jacobian dual identity fails in column {j}");
    }
    Ok(JacobianDual { frame, matrix: b })
}

/// The 2x2 determinants built from `A`, the top two rows of `B(φ'')` with
/// frame `(x, y, z*w0)`. Indices here start at 0, so `alphas[i]` is `α_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSystem {
    pub a: PolyMatrix,
    pub alphas: Vec<Polynomial>,
    /// `(i, j, c_ij)` for `i < j` among the first `n - 3` columns.
    pub cijs: Vec<(usize, usize, Polynomial)>,
    /// With `x*α_i ≡ z*w0*alpha_x[i]` modulo `(l_i, l(n-2))`.
    pub alpha_x: Vec<Polynomial>,
    /// With `y*α_i ≡ z*w0*alpha_y[i]` modulo `(l_i, l(n-2))`.
    pub alpha_y: Vec<Polynomial>,
    /// `l(n-2) = z*w0 + x*g1 + y*g2`.
    pub g1: Polynomial,
    pub g2: Polynomial,
}

impl AlphaSystem {
    /// `I_2(A)`.
    pub fn i2(&self) -> Vec<Polynomial> {
        self.alphas
            .iter()
            .cloned()
            .chain(self.cijs.iter().map(|c| c.2.clone()))
            .collect()
    }
}

/// Builds the α's from the dual of `φ''` (frame `(x, y, z*w0)`).
pub fn alpha_system(bpp: &JacobianDual) -> Result<AlphaSystem, ReesError> {
    if bpp.frame != Frame::XYZW0 {
        return Err(ReesError::WrongCase {
            expected: "a dual with frame (x, y, z*w0)".into(),
            actual: format!("frame {}", bpp.frame),
        });
    }
    let m = &bpp.matrix;
    let cols = m.cols();
    if cols < 2 {
        return Err(ReesError::NotNormalized(
            "phi'' needs at least two columns".into(),
        ));
    }
    let last = cols - 1;
    let ctx = m.ctx();
    for j in 0..last {
        if !m.get(2, j).is_zero() {
            return Err(ReesError::NotNormalized(format!(
                "column {} of phi'' carries z",
                j + 1
            )));
        }
    }
    if m.get(2, last) != &Polynomial::one(ctx) {
        return Err(ReesError::NotNormalized(format!(
            "l{} does not contain z*w0 with coefficient 1",
            cols
        )));
    }
    let a = m.submatrix(&[0, 1], &(0..cols).collect::<Vec<_>>());
    let det = |i: usize, j: usize| &(a.get(0, i) * a.get(1, j)) - &(a.get(1, i) * a.get(0, j));
    let alphas = (0..last).map(|i| det(i, last)).collect();
    let mut cijs = Vec::new();
    for i in 0..last {
        for j in i + 1..last {
            cijs.push((i, j, det(i, j)));
        }
    }
    Ok(AlphaSystem {
        alphas,
        cijs,
        alpha_x: (0..last).map(|i| a.get(1, i).clone()).collect(),
        alpha_y: (0..last).map(|i| -a.get(0, i)).collect(),
        g1: a.get(0, last).clone(),
        g2: a.get(1, last).clone(),
        a,
    })
}
