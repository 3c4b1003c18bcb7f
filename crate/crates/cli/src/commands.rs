use std::sync::Arc;

use rees_core::groebner::Ideal;
use rees_core::ideals::{colon_poly, gs_check, height, min_prime_check};
use rees_core::instance::{expected_ideal, Instance};
use rees_core::rees::{
    defining_ideal, ideal_k, ideal_kdoubleprime, ideal_kprime, jacobian_dual, symbolic_square_k,
    symmetric_equations, validate_setting, verify_obs_colon, Case, Frame, KMethod, Method,
    Pipeline, ReesError,
};
use rees_core::ring::{Field, MonomialOrder, PolyMatrix, Polynomial, RingContext};

use crate::report::{FailureKind, RunReport, Status};

#[derive(Clone, Debug)]
pub struct Opts {
    pub field: Field,
    pub order: MonomialOrder,
    pub method: Method,
    pub frame: Option<Frame>,
    pub deterministic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Classify,
    Pencil,
    Sym,
    Jdual,
    Defining,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Classify => "classify",
            Command::Pencil => "pencil",
            Command::Sym => "sym",
            Command::Jdual => "jdual",
            Command::Defining => "defining",
            Command::Verify => "verify",
        }
    }
}

/// Errors that stop a command before a report exists.
#[derive(Debug)]
pub enum RunError {
    Io(String),
}

pub fn run(inst: &Instance, cmd: Command, opts: &Opts) -> Result<RunReport, RunError> {
    let ctx = inst
        .ring(opts.field, opts.order.clone())
        .map_err(|e| RunError::Io(e.to_string()))?;
    let phi = inst.matrix(&ctx).map_err(|e| RunError::Io(e.to_string()))?;
    let mut r = RunReport::new(
        &inst.id,
        cmd.name(),
        inst.n(),
        opts.field.to_string(),
        opts.order.name(),
    );
    if let Err(e) = dispatch(&mut r, inst, &ctx, &phi, cmd, opts) {
        let kind = match e {
            ReesError::SettingViolation(_) => FailureKind::Validation,
            ReesError::Mismatch { .. } => FailureKind::Mismatch,
            _ => FailureKind::Validation,
        };
        r.fail("pipeline", kind, Some(e.to_string()));
        r.error = Some(e.to_string());
    }
    if opts.deterministic {
        r.timings_ms = None;
    }
    r.finish();
    Ok(r)
}

fn dispatch(
    r: &mut RunReport,
    inst: &Instance,
    ctx: &Arc<RingContext>,
    phi: &PolyMatrix,
    cmd: Command,
    opts: &Opts,
) -> Result<(), ReesError> {
    let setting = r.timed("setting", || validate_setting(phi));
    for c in &setting.checks {
        if c.passed {
            r.check(
                format!("setting.{}", c.name),
                Status::Passed,
                c.witness.clone(),
            );
        } else {
            r.fail(
                format!("setting.{}", c.name),
                FailureKind::Validation,
                c.witness.clone(),
            );
        }
    }
    let passed = setting.passed();
    r.setting = Some(setting.clone());
    if cmd == Command::Validate || !passed {
        return Ok(());
    }
    let p = r.timed("pipeline", || Pipeline::with_report(phi, setting))?;
    r.case = Some(p.label.clone());
    r.pencil = Some(p.data.pencil.clone());
    r.normalization = p.normalized.operations.clone();
    match p.data.checked_branch() {
        Ok(b) => r.branch = Some(b.name().to_string()),
        Err(e) => r.notes.push(e.to_string()),
    }
    match cmd {
        Command::Validate | Command::Classify => {}
        Command::Pencil => {
            r.matrix("phi_prime", &rees_core::pencil::phi_prime(p.phi()));
        }
        Command::Sym => {
            r.matrix("phi", p.phi());
            let ls = symmetric_equations(p.phi());
            r.ideals.insert(
                "L_generators".into(),
                ls.iter().map(|l| l.to_string()).collect(),
            );
            r.timed("L", || p.l.gb().len());
            r.ideal("L", &p.l);
        }
        Command::Jdual => {
            let frame = opts.frame.unwrap_or(match p.case() {
                Case::III => Frame::XYZ2W0,
                _ => Frame::XYZW0,
            });
            let b = r.timed("jdual", || jacobian_dual(p.phi(), frame))?;
            r.notes.push(format!("frame {frame}"));
            r.matrix("B", &b.matrix);
            if b.matrix.rows() == 3 {
                let i3 = r.timed("I3", || b.minors_ideal(3))?;
                r.ideal("I3", &i3);
            }
            r.matrix("B_phi_double_prime", &p.data.bpp.matrix);
        }
        Command::Defining => defining(r, &p, opts.method)?,
        Command::Verify => verify(r, inst, ctx, &p)?,
    }
    Ok(())
}

fn defining(r: &mut RunReport, p: &Pipeline, method: Method) -> Result<(), ReesError> {
    let d = r.timed("defining", || {
        let d = defining_ideal(p, method);
        if let Ok(d) = &d {
            d.ideal.gb();
        }
        d
    });
    match d {
        Ok(d) => {
            r.ideal("A", &d.ideal);
            r.saturation_exponent = d.saturation_exponent;
            r.notes.extend(d.notes);
            if d.agreement == Some(true) {
                r.check("defining.formula_vs_saturation", Status::Passed, None);
            }
            Ok(())
        }
        Err(ReesError::Unsupported(msg)) => {
            r.check("defining.formula", Status::Skipped, Some(msg));
            Ok(())
        }
        Err(e @ ReesError::Mismatch { .. }) => {
            r.fail(
                "defining.formula_vs_saturation",
                FailureKind::Mismatch,
                Some(e.to_string()),
            );
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn record_equal(r: &mut RunReport, name: &str, a: &Ideal, b: &Ideal, informational: bool) {
    let holds = a == b;
    let detail = if holds {
        None
    } else {
        let missing = a.gb().elements().iter().find(|g| !b.contains(g));
        let extra = b.generators().iter().find(|g| !a.contains(g));
        Some(match (extra, missing) {
            (Some(g), _) => format!("expected generator {g} not in the computed ideal"),
            (None, Some(g)) => format!("{g} not in the expected ideal"),
            (None, None) => "ideals differ".into(),
        })
    };
    match (holds, informational) {
        (true, false) => r.check(name, Status::Passed, None),
        (false, false) => r.fail(name, FailureKind::Mismatch, detail),
        (_, true) => r.check(
            name,
            Status::Noted,
            Some(format!(
                "holds: {holds}{}",
                detail.map(|d| format!("; {d}")).unwrap_or_default()
            )),
        ),
    }
}

fn verify(
    r: &mut RunReport,
    inst: &Instance,
    ctx: &Arc<RingContext>,
    p: &Pipeline,
) -> Result<(), ReesError> {
    let phi = p.phi();
    let data = &p.data;
    r.ideal("L", &p.l);
    r.ideal("J", &data.j.ideal);
    match data.j.identity_holds {
        Some(true) => r.check("J.identity", Status::Passed, None),
        Some(false) => r.fail("J.identity", FailureKind::Mismatch, None),
        None => {}
    }
    let g2 = r.timed("gs", || gs_check(phi, 2))?;
    let g3 = r.timed("gs", || gs_check(phi, 3))?;
    r.check(
        "gs.G2_not_G3",
        if g2 && !g3 {
            Status::Passed
        } else {
            Status::Noted
        },
        Some(format!("G2 = {g2}, G3 = {g3}")),
    );
    let i3 = Ideal::new(ctx, phi.minors(3)?);
    let h = r.timed("heights", || height(&i3));
    let mp = r.timed("heights", || min_prime_check(phi))?;
    r.check(
        "ht_I3_and_min_prime",
        if h == Some(2) && mp {
            Status::Passed
        } else {
            Status::Noted
        },
        Some(format!("ht I_3(phi) = {h:?}, Min(I_3) = {{(x, y)}}: {mp}")),
    );

    // auxiliary ideal: formula against oracle
    let k_name = match p.case() {
        Case::I => "K2",
        Case::II => "Kprime",
        Case::III => "Kdoubleprime",
    };
    let k = r.timed("K", || match p.case() {
        Case::I => symbolic_square_k(data, KMethod::Oracle).map(|k| k.ideal),
        Case::II => ideal_kprime(data, KMethod::Oracle).map(|k| k.ideal),
        Case::III => ideal_kdoubleprime(data).map(|k| k.ideal),
    })?;
    r.ideal(k_name, &k);
    if p.case() != Case::III {
        let (kbar, ht_ok) = r.timed("K", || ideal_k(data))?;
        let jk = data.j.ideal.sum(&kbar);
        let x = Polynomial::var(ctx, ctx.x());
        let x_regular = r.timed("K", || colon_poly(&jk, &x) == jk);
        r.check(
            "K.height_and_x_regular",
            if ht_ok && x_regular {
                Status::Passed
            } else {
                Status::Noted
            },
            Some(format!(
                "ht(J + K) = n - 1: {ht_ok}, x regular mod J + K: {x_regular}"
            )),
        );
        let f = r.timed("K", || match p.case() {
            Case::I => symbolic_square_k(data, KMethod::Formula),
            _ => ideal_kprime(data, KMethod::Formula),
        });
        match f {
            Ok(f) => {
                r.notes.extend(f.notes.iter().cloned());
                record_equal(
                    r,
                    &format!("{k_name}.formula_vs_oracle"),
                    &f.ideal,
                    &k,
                    false,
                );
            }
            Err(ReesError::Unsupported(m)) => r.check(
                format!("{k_name}.formula_vs_oracle"),
                Status::Skipped,
                Some(m),
            ),
            Err(e) => return Err(e),
        }
    } else {
        r.check("Kdoubleprime.colon_identity", Status::Passed, None);
    }

    defining(r, p, Method::Both)?;
    if !r.ideals.contains_key("A") {
        let d = r.timed("defining", || defining_ideal(p, Method::Saturation))?;
        r.ideal("A", &d.ideal);
        r.saturation_exponent = d.saturation_exponent;
    }
    let obs = r.timed("obs_colon", || verify_obs_colon(p))?;
    if obs.holds {
        r.check("obs_colon", Status::Passed, None);
    } else {
        r.fail("obs_colon", FailureKind::Mismatch, obs.witness.clone());
    }
    let detail = Some(format!("m = {}", obs.exponent));
    if obs.exponent_ok {
        r.check("obs_colon.exponent", Status::Passed, detail);
    } else {
        r.fail("obs_colon.exponent", FailureKind::Mismatch, detail);
    }

    if let Some(exp) = &inst.expected {
        if let Some(c) = &exp.case {
            let got = p.case().to_string();
            if got == *c {
                r.check("expected.case", Status::Passed, None);
            } else {
                r.fail(
                    "expected.case",
                    FailureKind::Mismatch,
                    Some(format!("got {got}")),
                );
            }
        }
        if let Some(m) = exp.saturation_exponent {
            let got = r.saturation_exponent;
            if got == Some(m) {
                r.check("expected.saturation_exponent", Status::Passed, None);
            } else {
                r.fail(
                    "expected.saturation_exponent",
                    FailureKind::Mismatch,
                    Some(format!("got {got:?}")),
                );
            }
        }
        let entries = exp.ideals.iter().map(|(k, v)| (k, v, false)).chain(
            exp.discrepancies
                .iter()
                .map(|(k, d)| (k, &d.generators, true)),
        );
        for (name, gens, informational) in entries {
            let prefix = if informational {
                "printed_display"
            } else {
                "expected"
            };
            let check = format!("{prefix}.{name}");
            let Some((computed, base)) = computed_for(name, p, &k, r)? else {
                r.check(
                    check,
                    Status::Skipped,
                    Some(format!("unknown ideal name {name}")),
                );
                continue;
            };
            match expected_ideal(gens, ctx, base.as_ref()) {
                Ok(e) => record_equal(r, &check, &computed, &e, informational),
                Err(err) => r.fail(check, FailureKind::Validation, Some(err.to_string())),
            }
        }
    }
    Ok(())
}

/// The computed ideal an expectation name refers to, with the base the
/// listed generators are added to.
fn computed_for(
    name: &str,
    p: &Pipeline,
    k: &Ideal,
    r: &RunReport,
) -> Result<Option<(Ideal, Option<Ideal>)>, ReesError> {
    let j = p.data.j.ideal.clone();
    Ok(match name {
        "L" => Some((p.l.clone(), None)),
        "J" => Some((j, None)),
        "K2" | "Kprime" | "Kdoubleprime" => Some((k.clone(), Some(j))),
        "I3" => {
            let frame = match p.case() {
                Case::III => Frame::XYZ2W0,
                _ => Frame::XYZW0,
            };
            Some((jacobian_dual(p.phi(), frame)?.minors_ideal(3)?, None))
        }
        "A" => {
            let gens = r.ideals.get("A").cloned().unwrap_or_default();
            let ctx = p.phi().ctx();
            let a = expected_ideal(&gens, ctx, None).map_err(ReesError::from)?;
            Some((a, None))
        }
        _ => None,
    })
}
