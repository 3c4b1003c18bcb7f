use std::fmt;

use serde::{Deserialize, Serialize};

use super::jdual::symmetric_equations;
use super::ReesError;
use crate::groebner::Ideal;
use crate::ring::{Monomial, PolyMatrix, Polynomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub case: Case,
    /// For I and II: whether `l(n-1)` lies in `(x, y, z*w0)^2`.
    pub in_u_squared: Option<bool>,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub matrix: PolyMatrix,
    /// Human-readable log of the operations applied, empty when the input
    /// was already in shape.
    pub operations: Vec<String>,
}

fn z_mono(phi: &PolyMatrix, power: u16) -> Monomial {
    let ctx = phi.ctx();
    let mut e = vec![0u16; ctx.nvars()];
    e[ctx.z()] = power;
    Monomial::from_exponents(e)
}

/// Coefficient of `z` (linear columns) or `z^2` (last column).
fn z_coeff(phi: &PolyMatrix, i: usize, j: usize) -> Scalar {
    let power = if j + 1 == phi.cols() { 2 } else { 1 };
    phi.get(i, j).coefficient(&z_mono(phi, power))
}

fn constant(phi: &PolyMatrix, c: &Scalar) -> Polynomial {
    Polynomial::constant(phi.ctx(), c.clone())
}

/// Moves `z` to `(0, n-3)` and clears it elsewhere using scalar row and
/// column operations; cancels a `z^2` in the last column against the
/// `z` column when both are present.
pub fn normalize_shape(phi: &PolyMatrix) -> Result<Normalized, ReesError> {
    let mut m = phi.clone();
    let mut ops = Vec::new();
    let n = m.rows();
    if n < 3 || m.cols() + 1 != n {
        return Err(ReesError::NormalizationFailed(format!(
            "expected an n x (n-1) matrix, got {} x {}",
            n,
            m.cols()
        )));
    }
    let last = m.cols() - 1;
    let zcol = last - 1;

    let pivot = (0..last)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .find(|&(i, j)| !z_coeff(&m, i, j).is_zero());
    if let Some((pi, pj)) = pivot {
        if pi != 0 {
            m.swap_rows(0, pi);
            ops.push(format!("swap rows 0 and {pi}"));
        }
        if pj != zcol {
            m.swap_cols(zcol, pj);
            ops.push(format!("swap columns {pj} and {zcol}"));
        }
        let c = z_coeff(&m, 0, zcol);
        if !c.is_one() {
            m.scale_col(zcol, &constant(&m, &c.inv().unwrap()));
            ops.push(format!("scale column {zcol} by 1/({c})"));
        }
        for i in 1..n {
            let c = z_coeff(&m, i, zcol);
            if !c.is_zero() {
                m.add_row_multiple(i, 0, &constant(&m, &-&c));
                ops.push(format!("row {i} -= ({c}) * row 0"));
            }
        }
        for j in 0..zcol {
            let c = z_coeff(&m, 0, j);
            if !c.is_zero() {
                m.add_col_multiple(j, zcol, &constant(&m, &-&c));
                ops.push(format!("column {j} -= ({c}) * column {zcol}"));
            }
        }
        if let Some((i, j)) = (0..zcol)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .chain((1..n).map(|i| (i, zcol)))
            .find(|&(i, j)| !z_coeff(&m, i, j).is_zero())
        {
            return Err(ReesError::NormalizationFailed(format!(
                "z survives at ({i}, {j}): linear part of phi mod (x,y) has rank above 1"
            )));
        }
        let f = z_coeff(&m, 0, last);
        if !f.is_zero() {
            let factor = &Polynomial::var(m.ctx(), m.ctx().z()) * &constant(&m, &-&f);
            m.add_col_multiple(last, zcol, &factor);
            ops.push(format!("column {last} -= ({f})*z * column {zcol}"));
        }
        if let Some(i) = (0..n).find(|&i| !z_coeff(&m, i, last).is_zero()) {
            return Err(ReesError::NormalizationFailed(format!(
                "z^2 survives in row {i} of the last column"
            )));
        }
    } else {
        let Some(pi) = (0..n).find(|&i| !z_coeff(&m, i, last).is_zero()) else {
            return Err(ReesError::NormalizationFailed(
                "phi vanishes modulo (x, y)".into(),
            ));
        };
        if pi != 0 {
            m.swap_rows(0, pi);
            ops.push(format!("swap rows 0 and {pi}"));
        }
        let c = z_coeff(&m, 0, last);
        if !c.is_one() {
            m.scale_col(last, &constant(&m, &c.inv().unwrap()));
            ops.push(format!("scale column {last} by 1/({c})"));
        }
        for i in 1..n {
            let c = z_coeff(&m, i, last);
            if !c.is_zero() {
                m.add_row_multiple(i, 0, &constant(&m, &-&c));
                ops.push(format!("row {i} -= ({c}) * row 0"));
            }
        }
    }
    Ok(Normalized {
        matrix: m,
        operations: ops,
    })
}

/// `(x, y, z*w0)^2` as an ideal of the ring of `phi`.
pub(crate) fn u_squared(phi: &PolyMatrix) -> Ideal {
    let ctx = phi.ctx();
    let x = Polynomial::var(ctx, ctx.x());
    let y = Polynomial::var(ctx, ctx.y());
    let zw0 = &Polynomial::var(ctx, ctx.z()) * &Polynomial::var(ctx, ctx.w(0));
    let u = [x, y, zw0];
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            gens.push(&u[i] * &u[j]);
        }
    }
    Ideal::new(ctx, gens)
}

/// Reads the case off a normalized matrix.
pub fn classify_case(phi: &PolyMatrix) -> Result<CaseLabel, ReesError> {
    let n = phi.rows();
    if n < 3 || phi.cols() + 1 != n {
        return Err(ReesError::NotNormalized(format!(
            "expected an n x (n-1) matrix, got {} x {}",
            n,
            phi.cols()
        )));
    }
    let last = phi.cols() - 1;
    let zcol = last - 1;
    let ctx = phi.ctx();
    let z = ctx.z();
    let z_in_linear: Vec<(usize, usize)> = (0..last)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .filter(|&(i, j)| phi.get(i, j).involves(z))
        .collect();
    let z2_rows: Vec<usize> = (0..n)
        .filter(|&i| !z_coeff(phi, i, last).is_zero())
        .collect();

    if z_in_linear.is_empty() {
        if z2_rows == [0] {
            return Ok(CaseLabel {
                case: Case::III,
                in_u_squared: None,
                evidence: format!("z^2 at (0, {last}): {}", phi.get(0, last)),
            });
        }
        return Err(ReesError::NotNormalized(
            "no z in the linear columns and z^2 not isolated in the top row of the last column"
                .into(),
        ));
    }
    if z_in_linear != [(0, zcol)] {
        return Err(ReesError::NotNormalized(format!(
            "z must appear in the linear columns only at (0, {zcol}); found at {z_in_linear:?}"
        )));
    }
    if !z2_rows.is_empty() {
        return Err(ReesError::NotNormalized(
            "z^2 in the last column next to a z column; normalize first".into(),
        ));
    }
    let l_last = symmetric_equations(phi).pop().unwrap();
    let member = u_squared(phi).contains(&l_last);
    Ok(CaseLabel {
        case: if member { Case::I } else { Case::II },
        in_u_squared: Some(member),
        evidence: format!(
            "l{} = {} {} (x,y,z*w0)^2",
            n - 1,
            l_last,
            if member { "in" } else { "not in" }
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::fitting_ideal;
    use crate::ring::{Field, RingContext};

    fn mat(rows: &[&[&str]]) -> PolyMatrix {
        let ctx = RingContext::rees(rows.len(), Field::Rational).unwrap();
        PolyMatrix::from_rows(&ctx, rows).unwrap()
    }

    const EX71: &[&[&str]] = &[
        &["x", "y", "z", "x*z"],
        &["x", "0", "0", "x^2"],
        &["y", "x", "0", "y^2"],
        &["0", "y", "x", "x*y"],
        &["0", "0", "y", "y^2"],
    ];

    #[test]
    fn canonical_input_is_unchanged() {
        let phi = mat(EX71);
        let nm = normalize_shape(&phi).unwrap();
        assert!(nm.operations.is_empty());
        assert_eq!(nm.matrix, phi);
        assert_eq!(classify_case(&phi).unwrap().case, Case::I);
    }

    #[test]
    fn swapped_rows_are_restored() {
        let phi = mat(EX71);
        let mut swapped = phi.clone();
        swapped.swap_rows(0, 1);
        let nm = normalize_shape(&swapped).unwrap();
        assert_eq!(nm.matrix, phi);
    }

    #[test]
    fn third_form_cancels_z_squared() {
        let phi = mat(&[
            &["x", "y", "z", "z^2 + x*y"],
            &["x", "0", "0", "x^2"],
            &["y", "x", "0", "y^2"],
            &["0", "y", "x", "x*y"],
            &["0", "0", "y", "y^2"],
        ]);
        let nm = normalize_shape(&phi).unwrap();
        let last = nm.matrix.column(3);
        assert!(last.iter().all(|e| e.degree_in(phi.ctx().z()) < 2));
        assert_eq!(
            fitting_ideal(&phi, 1).unwrap(),
            fitting_ideal(&nm.matrix, 1).unwrap()
        );
        assert_eq!(classify_case(&nm.matrix).unwrap().case, Case::II);
    }

    #[test]
    fn case_three_detected() {
        let phi = mat(&[
            &["x", "x", "0", "z^2"],
            &["x", "0", "0", "x^2"],
            &["y", "x", "0", "y^2"],
            &["0", "y", "x", "x*y"],
            &["0", "0", "y", "y^2"],
        ]);
        assert_eq!(classify_case(&phi).unwrap().case, Case::III);
    }
}
