use serde::{Deserialize, Serialize};

use super::jdual::{jacobian_dual, symmetric_equations, symmetric_ideal, Frame};
use super::kideals::{
    difference_witness, frame_ideal, ideal_kdoubleprime, ideal_kprime, require_equal,
    symbolic_square_k, FormulaBranch, KData, KMethod,
};
use super::setting::{validate_setting, SettingReport};
use super::shape::{classify_case, normalize_shape, Case, CaseLabel, Normalized};
use super::ReesError;
use crate::groebner::Ideal;
use crate::ideals::{colon, colon_poly, saturate};
use crate::ring::{PolyMatrix, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Saturation,
    Formula,
    Both,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "saturation" => Ok(Method::Saturation),
            "formula" => Ok(Method::Formula),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// A validated, normalized and classified instance together with the data
/// every later stage reads.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub original: PolyMatrix,
    pub setting: SettingReport,
    pub normalized: Normalized,
    pub label: CaseLabel,
    pub data: KData,
    /// `ℒ` of the normalized matrix.
    pub l: Ideal,
}

impl Pipeline {
    /// Fails with `SettingViolation` naming the first failed check.
    pub fn new(phi: &PolyMatrix) -> Result<Pipeline, ReesError> {
        let setting = validate_setting(phi);
        if let Some(c) = setting.first_failure() {
            return Err(ReesError::SettingViolation(format!(
                "{}{}",
                c.name,
                c.witness
                    .as_ref()
                    .map(|w| format!(": {w}"))
                    .unwrap_or_default()
            )));
        }
        Self::with_report(phi, setting)
    }

    /// Skips the setting checks; for matrices already known to satisfy
    /// them.
    pub fn with_report(phi: &PolyMatrix, setting: SettingReport) -> Result<Pipeline, ReesError> {
        let normalized = normalize_shape(phi)?;
        let label = classify_case(&normalized.matrix)?;
        let data = KData::new(&normalized.matrix, &label)?;
        let l = symmetric_ideal(&normalized.matrix)?;
        Ok(Pipeline {
            original: phi.clone(),
            setting,
            normalized,
            label,
            data,
            l,
        })
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.normalized.matrix
    }

    pub fn case(&self) -> Case {
        self.label.case
    }

    fn l_last(&self) -> Polynomial {
        symmetric_equations(self.phi()).pop().unwrap()
    }

    /// `(x, y)`.
    fn xy(&self) -> Ideal {
        frame_ideal(self.phi().ctx(), Frame::XY)
    }

    /// `ℒ + I_3(B(φ))` for the frame of the case.
    pub fn l_plus_i3(&self) -> Result<Ideal, ReesError> {
        let frame = match self.case() {
            Case::III => Frame::XYZ2W0,
            _ => Frame::XYZW0,
        };
        let b = jacobian_dual(self.phi(), frame)?;
        Ok(self.l.sum(&b.minors_ideal(3)?))
    }
}

#[derive(Clone, Debug)]
pub struct DefiningIdeal {
    pub ideal: Ideal,
    pub method: Method,
    /// From the saturation route.
    pub saturation_exponent: Option<usize>,
    /// From the formula route.
    pub branch: Option<FormulaBranch>,
    pub notes: Vec<String>,
    /// Set by `Method::Both`; always true on success.
    pub agreement: Option<bool>,
}

fn by_saturation(p: &Pipeline) -> Result<(Ideal, usize), ReesError> {
    let r = saturate(&p.l, &p.xy())?;
    Ok((r.ideal, r.exponent))
}

fn by_formula(p: &Pipeline) -> Result<(Ideal, FormulaBranch, Vec<String>), ReesError> {
    let ctx = p.phi().ctx();
    let l_last = p.l_last();
    let w0 = Polynomial::var(ctx, ctx.w(0));
    let z = Polynomial::var(ctx, ctx.z());
    let z2w0 = &(&z * &z) * &w0;
    let data = &p.data;
    let branch = data.checked_branch()?;
    let (num, den, notes) = match p.case() {
        Case::I => {
            let k2 = symbolic_square_k(data, KMethod::Formula)?;
            let gens = k2.extra.iter().map(|g| &l_last * g);
            (data.j.ideal.with_generators(gens), &z2w0 * &w0, k2.notes)
        }
        Case::II => {
            let kp = ideal_kprime(data, KMethod::Formula)?;
            let gens = kp.extra.iter().map(|g| &l_last * g);
            (data.j.ideal.with_generators(gens), z2w0, kp.notes)
        }
        Case::III => {
            let kpp = ideal_kdoubleprime(data)?;
            let gens = kpp.extra.iter().map(|g| &l_last * g);
            let quotient = colon_poly(&data.j.ideal.with_generators(gens), &z2w0);
            let direct = p.l_plus_i3()?;
            require_equal(
                "L + I_3(B(phi)) against the K'' quotient",
                &direct,
                &quotient,
            )?;
            return Ok((direct, branch, kpp.notes));
        }
    };
    Ok((colon_poly(&num, &den), branch, notes))
}

/// `𝒜` by saturation of `ℒ` at `(x, y)`, by the closed form of the case,
/// or both; with `Both` the two routes run on separate threads and must
/// agree as reduced Gröbner bases.
pub fn defining_ideal(p: &Pipeline, method: Method) -> Result<DefiningIdeal, ReesError> {
    match method {
        Method::Saturation => {
            let (ideal, m) = by_saturation(p)?;
            Ok(DefiningIdeal {
                ideal,
                method,
                saturation_exponent: Some(m),
                branch: None,
                notes: Vec::new(),
                agreement: None,
            })
        }
        Method::Formula => {
            let (ideal, branch, notes) = by_formula(p)?;
            Ok(DefiningIdeal {
                ideal,
                method,
                saturation_exponent: None,
                branch: Some(branch),
                notes,
                agreement: None,
            })
        }
        Method::Both => {
            let (sat, formula) = std::thread::scope(|s| {
                let h = s.spawn(|| {
                    let r = by_saturation(p);
                    if let Ok((i, _)) = &r {
                        i.gb();
                    }
                    r
                });
                let f = by_formula(p);
                if let Ok((i, _, _)) = &f {
                    i.gb();
                }
                (h.join().expect("saturation thread panicked"), f)
            });
            let (sat, m) = sat?;
            let (formula, branch, notes) = formula?;
            if let Some(witness) = difference_witness(&formula, &sat) {
                return Err(ReesError::Mismatch {
                    what: "defining ideal (formula vs saturation)".into(),
                    witness,
                });
            }
            Ok(DefiningIdeal {
                ideal: sat,
                method,
                saturation_exponent: Some(m),
                branch: Some(branch),
                notes,
                agreement: Some(true),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColonCheck {
    /// `ℒ : U = ℒ + I_3(B(φ))` where `U` is `(x, y, z*w0)` in Cases I and
    /// II and `(x, y)` in Case III.
    pub holds: bool,
    /// First `m` with `ℒ : U^m = ℒ : U^(m+1)`.
    pub exponent: usize,
    /// `m >= 2` in Cases I and II, `m = 1` in Case III.
    pub exponent_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

/// Compares `ℒ : U` with `ℒ + I_3(B(φ))` and measures the saturation
/// exponent of `ℒ` at `U`.
pub fn verify_obs_colon(p: &Pipeline) -> Result<ColonCheck, ReesError> {
    let ctx = p.phi().ctx();
    let u = match p.case() {
        Case::III => frame_ideal(ctx, Frame::XY),
        _ => frame_ideal(ctx, Frame::XYZW0),
    };
    let lhs = colon(&p.l, &u)?;
    let rhs = p.l_plus_i3()?;
    let witness = difference_witness(&lhs, &rhs);
    let exponent = saturate(&p.l, &u)?.exponent;
    let exponent_ok = match p.case() {
        Case::III => exponent == 1,
        _ => exponent >= 2,
    };
    Ok(ColonCheck {
        holds: witness.is_none(),
        exponent,
        exponent_ok,
        witness,
    })
}
