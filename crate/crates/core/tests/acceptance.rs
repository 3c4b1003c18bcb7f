//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria whose failure is a recorded defect of the source listings are
//! in `KNOWN_FAILURES`; the run exits non-zero when the observed set of
//! failures differs from it in either direction.

mod common;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use common::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rees_core::groebner::Ideal;
use rees_core::ideals::{colon, gs_check, height, min_prime_check, saturate};
use rees_core::pencil::{classify_phi_prime, pencil_from_matrix, phi_prime};
use rees_core::rees::{
    defining_ideal, generate, ideal_kdoubleprime, ideal_kprime, jacobian_dual, symbolic_square_k,
    verify_obs_colon, Case, Frame, Generated, KMethod, Method, Pipeline, ReesError, Target,
};
use rees_core::ring::{Field, Polynomial, ScalarMatrix};

const KNOWN_FAILURES: [(usize, &str); 3] = [
    (1, "printed alpha_2 does not give an element of the symbolic square"),
    (3, "printed symmetric ideal belongs to a different matrix"),
    (6, "long M lists, the second-difference family and M_1 blocks with x a zero divisor disagree with the oracles"),
];

const SEED: u64 = 7;
const SIZES: [usize; 2] = [5, 6];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

/// Ideals computed along the way, for the engine self-checks.
static BASES: Mutex<Vec<(String, Ideal)>> = Mutex::new(Vec::new());

fn keep(label: &str, i: &Ideal) {
    BASES.lock().unwrap().push((label.to_string(), i.clone()));
}

fn normalized(gens: &[Polynomial]) -> BTreeSet<String> {
    gens.iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic().to_string())
        .collect()
}

fn within(t: Instant, budget: u64) -> (bool, String) {
    let e = t.elapsed();
    (
        e <= Duration::from_secs(budget),
        format!("{:.1}s of {budget}s", e.as_secs_f64()),
    )
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let (_, ctx, phi) = load("ex71");
    let pl = Pipeline::new(&phi).unwrap();
    let j = &pl.data.j.ideal;
    keep("ex71 J", j);
    let j_printed = ideal(
        &ctx,
        &[
            "x*w0 + x*w1 + y*w2",
            "y*w0 + x*w2 + y*w3",
            "z*w0 + x*w3 + y*w4",
            "w0^2 + w0*w1 - w2^2 + w0*w3 + w1*w3",
        ],
    );
    let j_ok = *j == j_printed;
    let k2 = symbolic_square_k(&pl.data, KMethod::Both).map(|r| r.ideal);
    let Ok(k2) = k2 else {
        return Outcome::new(false, format!("symbolic square: {}", k2.unwrap_err()));
    };
    keep("ex71 K2", &k2);
    let (w3, w4) = (p(&ctx, "w3"), p(&ctx, "w4"));
    let a1 = p(&ctx, "w0*w4 + w1*w4 - w2*w3");
    let a2_printed = p(&ctx, "w2*w4 - w0*w3 - w2*w3");
    let eta = |a2: &Polynomial| &(&w4 * &a1) - &(&w3 * a2);
    let z2w02 = p(&ctx, "z^2*w0^2");
    let printed_ok = k2 == j.with_generators([z2w02.clone(), eta(&a2_printed)]);
    let al = &pl.data.alphas.as_ref().unwrap().alphas;
    let computed_ok = k2 == j.with_generators([z2w02, eta(&al[1])]);
    let a = defining_ideal(&pl, Method::Both);
    let a_ok = a.as_ref().is_ok_and(|d| d.agreement == Some(true));
    if let Ok(d) = &a {
        keep("ex71 A", &d.ideal);
    }
    let (time_ok, time) = within(t, 30);
    Outcome::new(
        j_ok && printed_ok && a_ok && time_ok,
        format!(
            "J {j_ok}; K2 with printed alphas {printed_ok}; K2 with alpha_2 = {} {computed_ok}; formula = saturation {a_ok}; {time}",
            al[1]
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let (_, ctx, phi) = load("ex72");
    let pl = Pipeline::new(&phi).unwrap();
    let j = &pl.data.j.ideal;
    keep("ex72 J", j);
    let kp = match ideal_kprime(&pl.data, KMethod::Both) {
        Ok(r) => r.ideal,
        Err(e) => return Outcome::new(false, format!("K': {e}")),
    };
    keep("ex72 K'", &kp);
    let al = &pl.data.alphas.as_ref().unwrap().alphas;
    let z = p(&ctx, "z");
    let eta = &(&p(&ctx, "w4") * &al[0]) - &(&p(&ctx, "w3") * &al[1]);
    let k_ok = kp == j.with_generators([p(&ctx, "z^2*w0"), &z * &al[0], &z * &al[1], eta]);
    let a = defining_ideal(&pl, Method::Both);
    let a_ok = a.as_ref().is_ok_and(|d| d.agreement == Some(true));
    if let Ok(d) = &a {
        keep("ex72 A", &d.ideal);
    }
    let (time_ok, time) = within(t, 30);
    Outcome::new(
        k_ok && a_ok && time_ok,
        format!("K' {k_ok}; formula = saturation {a_ok}; {time}"),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let (_, ctx, phi) = load("ex73");
    let pl = Pipeline::new(&phi).unwrap();
    keep("ex73 L", &pl.l);
    let l_printed = [
        "x*w2 + (-x - y)*w3 + y*w4",
        "x*w1 - y*w2",
        "x*w0 - y*w1 + x*w3 - y*w4",
        "z^2*w0 - z^2*w1 + x^2*w3 + y*x*w4",
    ]
    .map(|s| p(&ctx, s));
    let l_ok = normalized(pl.l.generators()) == normalized(&l_printed);
    let b = jacobian_dual(&phi, Frame::XYZ2W0).unwrap();
    let i3_printed = [
        "-w0*w2 - w2^2 + w0*w3 + w1*w3",
        "-w2*w3 + w0*w4 + w1*w4",
        "-w3^2 + w0*w4 + w2*w4",
    ]
    .map(|s| p(&ctx, s));
    let minors = b.matrix.minors(3).unwrap();
    let i3_ok = normalized(&minors) == normalized(&i3_printed);
    let i3 = Ideal::new(&ctx, minors);
    keep("ex73 I3", &i3);
    let l_plus = pl.l.sum(&i3);
    let xy = ideal(&ctx, &["x", "y"]);
    let c = colon(&pl.l, &xy).unwrap();
    let s = saturate(&pl.l, &xy).unwrap();
    let a = defining_ideal(&pl, Method::Both);
    let a_ok = a
        .as_ref()
        .is_ok_and(|d| d.agreement == Some(true) && d.ideal == l_plus);
    let chain_ok = l_plus == c && c == s.ideal && s.exponent == 1;
    keep("ex73 A", &l_plus);
    let (time_ok, time) = within(t, 10);
    Outcome::new(
        l_ok && i3_ok && a_ok && chain_ok && time_ok,
        format!(
            "L as printed {l_ok}; I3 as printed {i3_ok}; A = L + I3 = L:(x,y) = L:(x,y)^inf {chain_ok} (exponent {}); formula = saturation {a_ok}; {time}",
            s.exponent
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["ex71", "ex72", "ex73"] {
        let (_, ctx, phi) = load(name);
        let g2 = gs_check(&phi, 2).unwrap();
        let g3 = gs_check(&phi, 3).unwrap();
        let i3 = Ideal::new(&ctx, phi.minors(3).unwrap());
        let h = height(&i3);
        let mp = min_prime_check(&phi).unwrap();
        keep(&format!("{name} I3(phi)"), &i3);
        ok &= g2 && !g3 && h == Some(2) && mp;
        parts.push(format!(
            "{name}: G2 {g2}, G3 {g3}, ht I3 {h:?}, min prime {mp}"
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["ex71", "ex72"] {
        let t = Instant::now();
        let (_, _, phi) = load(name);
        let pl = Pipeline::new(&phi).unwrap();
        let c = verify_obs_colon(&pl).unwrap();
        if let Ok(i) = pl.l_plus_i3() {
            keep(&format!("{name} L + I3"), &i);
        }
        let (time_ok, time) = within(t, 60);
        ok &= c.holds && c.exponent >= 2 && time_ok;
        parts.push(format!(
            "{name}: colon {}, exponent {}, {time}",
            c.holds, c.exponent
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

/// Formula against oracle for the auxiliary ideal and for `𝒜`.
fn certify(g: &Generated) -> Result<(), String> {
    let pl = Pipeline::new(&g.matrix).map_err(|e| e.to_string())?;
    let label = format!("{} n={}", g.target, g.n);
    let aux = match pl.case() {
        Case::I => symbolic_square_k(&pl.data, KMethod::Both).map(|r| r.ideal),
        Case::II => ideal_kprime(&pl.data, KMethod::Both).map(|r| r.ideal),
        Case::III => ideal_kdoubleprime(&pl.data).map(|r| r.ideal),
    };
    let a = defining_ideal(&pl, Method::Both);
    if let Ok(k) = &aux {
        keep(&format!("{label} aux"), k);
    }
    if let Ok(d) = &a {
        keep(&format!("{label} A"), &d.ideal);
    }
    let show = |r: Result<(), ReesError>| r.map_err(|e| e.to_string());
    match (show(aux.map(|_| ())), show(a.map(|_| ()))) {
        (Ok(()), Ok(())) => Ok(()),
        (Err(e), Ok(())) => Err(format!("aux: {e}")),
        (Ok(()), Err(e)) => Err(format!("A: {e}")),
        (Err(e), Err(f)) => Err(format!("aux: {e}; A: {f}")),
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let count = Target::ALL.len() * SIZES.len();
    let generated = generate(SEED, count, &SIZES, Field::Rational);
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(count);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(g) = generated.get(k) else { break };
                let (name, r) = match g {
                    Ok(g) => (format!("{} n={}", g.target, g.n), certify(g)),
                    Err(e) => (format!("#{k}"), Err(e.to_string())),
                };
                results.lock().unwrap().push((k, name, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|r| r.0);
    let mut failed = Vec::new();
    for (_, name, r) in &results {
        match r {
            Ok(()) => println!("    {name}: certified"),
            Err(e) => {
                println!("    {name}: {e}");
                failed.push(name.clone());
            }
        }
    }
    let (time_ok, time) = within(t, 1800);
    Outcome::new(
        failed.is_empty() && time_ok,
        format!(
            "seed {SEED}, n in {SIZES:?}: {} of {count} certified; failing: [{}]; {time}",
            count - failed.len(),
            failed.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let bases = BASES.lock().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for (label, i) in &bases {
        let gb = i.gb().elements().to_vec();
        let closed = s_pairs_vanish(&gb);
        let reference = sorted_gb(i);
        let mut stable = true;
        for _ in 0..10 {
            let mut gens = i.generators().to_vec();
            gens.shuffle(&mut rng);
            stable &= sorted_gb(&Ideal::new(i.ctx(), gens)) == reference;
        }
        if !(closed && stable) {
            bad.push(format!("{label} (S-pairs {closed}, shuffles {stable})"));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{} bases, 10 shuffles each; failing: [{}]",
            bases.len(),
            bad.join(", ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["ex71", "ex72", "ex73"] {
        let (_, _, phi) = load(name);
        let pencil = pencil_from_matrix(&phi_prime(&phi)).unwrap();
        let base = classify_phi_prime(&pencil).unwrap();
        let field = Field::Rational;
        let same = (0..100)
            .filter(|_| {
                let c = ScalarMatrix::random_invertible(field, pencil.rows(), 7, &mut rng);
                let d = ScalarMatrix::random_invertible(field, pencil.cols(), 7, &mut rng);
                classify_phi_prime(&pencil.transform(&c, &d)).as_ref() == Ok(&base)
            })
            .count();
        ok &= same == 100;
        parts.push(format!("{name}: {same}/100 ({:?})", base.summary));
    }
    Outcome::new(ok, parts.join("; "))
}

type Criterion = (usize, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "first example", criterion_1),
        (2, "second example", criterion_2),
        (3, "third example", criterion_3),
        (4, "G_s calibration", criterion_4),
        (5, "colon observation", criterion_5),
        (6, "branch coverage", criterion_6),
        (7, "Groebner self-checks", criterion_7),
        (8, "pencil invariance", criterion_8),
    ];
    let mut failing = BTreeSet::new();
    for (k, title, run) in criteria {
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {k} {verdict}: {title}: {}", o.detail);
        if !o.passed {
            failing.insert(k);
        }
    }
    let known: BTreeSet<usize> = KNOWN_FAILURES.iter().map(|f| f.0).collect();
    for (k, why) in KNOWN_FAILURES {
        if failing.contains(&k) {
            println!("criterion {k} fails as recorded: {why}");
        }
    }
    if failing != known {
        println!("unexpected outcome: failing {failing:?}, recorded {known:?}");
        std::process::exit(1);
    }
}
