use serde::{Deserialize, Serialize};

use crate::groebner::Ideal;
use crate::ideals::{fitting_ideal, gs_report, height, min_prime_check, radical_member};
use crate::ring::{PolyMatrix, Polynomial, ScalarMatrix, VarKind};

/// One named condition of the setting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Offending entry, minor or measured value when `passed` is false;
    /// informational otherwise.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SettingReport {
    pub checks: Vec<Check>,
    /// `Min(I_{n-2}(φ)) = {(x, y)}`; implied by the setting, reported
    /// separately.
    pub min_prime_xy: Option<bool>,
}

impl SettingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn check(name: &str, passed: bool, witness: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        witness,
    }
}

fn homogeneous_of_degree(e: &Polynomial, d: u32) -> bool {
    e.is_zero() || (e.is_homogeneous() && e.total_degree() == Some(d))
}

/// Runs every condition of the setting on `φ`; never fails, failures are
/// report entries.
pub fn validate_setting(phi: &PolyMatrix) -> SettingReport {
    let ctx = phi.ctx();
    let n = phi.rows();
    let mut checks = Vec::new();

    let base_only = phi
        .entries()
        .iter()
        .all(|e| (0..ctx.nvars()).all(|v| ctx.kind(v) == VarKind::Base || !e.involves(v)));
    let shape_ok = n >= 2 && phi.cols() + 1 == n && base_only && ctx.n() == n;
    checks.push(check(
        "shape",
        shape_ok,
        (!shape_ok).then(|| {
            format!(
                "{}x{} matrix over a ring with {} dual variables",
                n,
                phi.cols(),
                ctx.n()
            )
        }),
    ));
    checks.push(check("mu_gt_4", n > 4, Some(format!("n = {n}"))));
    if !shape_ok {
        return SettingReport {
            checks,
            min_prime_xy: None,
        };
    }

    let last = phi.cols() - 1;
    let mut bad_entry = None;
    'scan: for j in 0..phi.cols() {
        let d = if j == last { 2 } else { 1 };
        for i in 0..n {
            if !homogeneous_of_degree(phi.get(i, j), d) {
                bad_entry = Some(format!("phi[{i}][{j}] = {}", phi.get(i, j)));
                break 'scan;
            }
        }
    }
    let almost_linear = bad_entry.is_none();
    checks.push(check("almost_linear", almost_linear, bad_entry));

    let i_max = fitting_ideal(phi, 1).expect("index 1 in range");
    let h = height(&i_max);
    checks.push(check(
        "height_two_perfect",
        h == Some(2),
        Some(format!("ht I_{}(phi) = {}", n - 1, fmt_height(h))),
    ));

    // I_1(φ) = m up to radical: x, y, z all lie in the radical of the
    // entry ideal.
    let entries = Ideal::new(ctx, phi.entries().iter().cloned());
    let missing: Vec<String> = [ctx.x(), ctx.y(), ctx.z()]
        .into_iter()
        .filter(|&v| !radical_member(&Polynomial::var(ctx, v), &entries))
        .map(|v| ctx.names()[v].clone())
        .collect();
    let strict = [ctx.x(), ctx.y(), ctx.z()]
        .into_iter()
        .all(|v| entries.contains(&Polynomial::var(ctx, v)));
    checks.push(check(
        "i1_is_m",
        missing.is_empty(),
        Some(if missing.is_empty() {
            format!("radical of I_1 is (x,y,z); I_1 = m exactly: {strict}")
        } else {
            format!("not in the radical of I_1: {}", missing.join(", "))
        }),
    ));

    let coeffs = z_coefficients(phi);
    let rank = coeffs.rank();
    checks.push(check(
        "rank_mod_xy_le_1",
        rank <= 1,
        Some(format!("rank of phi mod (x,y) over k(z) = {rank}")),
    ));

    let mut min_prime_xy = None;
    if h == Some(2) && almost_linear {
        let g2 = gs_report(phi, 2);
        let g3 = gs_report(phi, 3);
        let (ok, witness) = match (&g2, &g3) {
            (Ok(a), Ok(b)) => {
                let h3 = b.checked.first().and_then(|c| c.height);
                (
                    a.holds && !b.holds,
                    Some(format!(
                        "G2 = {}, G3 = {}, ht I_{}(phi) = {}",
                        a.holds,
                        b.holds,
                        n - 2,
                        fmt_height(h3)
                    )),
                )
            }
            (Err(e), _) | (_, Err(e)) => (false, Some(e.to_string())),
        };
        checks.push(check("g2_not_g3", ok, witness));
        min_prime_xy = min_prime_check(phi).ok();
    } else {
        checks.push(check(
            "g2_not_g3",
            false,
            Some("skipped: needs height_two_perfect and almost_linear".into()),
        ));
    }
    SettingReport {
        checks,
        min_prime_xy,
    }
}

fn fmt_height(h: Option<usize>) -> String {
    h.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// `φ mod (x, y)` divided by the column powers of `z`: the coefficient of
/// `z^deg` in each entry.
pub(crate) fn z_coefficients(phi: &PolyMatrix) -> ScalarMatrix {
    let ctx = phi.ctx();
    let field = ctx.field();
    let mut m = ScalarMatrix::zeros(field, phi.rows(), phi.cols());
    for i in 0..phi.rows() {
        for j in 0..phi.cols() {
            let e = phi.get(i, j);
            let reduced = e.kill_vars(&[ctx.x(), ctx.y()]);
            if let Some(t) = reduced.terms().first() {
                m.set(i, j, t.coeff.clone());
            }
        }
    }
    m
}
