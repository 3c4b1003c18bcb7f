use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rees_core::instance::Instance;
use rees_core::rees::{generate, random_instance, Target};

use crate::commands::{run, Command, Opts, RunError};
use crate::report::{FailureKind, RunReport, Status, SuiteReport, Verdict};

pub struct SuiteSpec {
    pub corpus: Vec<Instance>,
    pub random: usize,
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub target: Option<Target>,
}

/// Worker count: `REES_KIT_THREADS` if set, else the available cores.
pub fn worker_count() -> usize {
    std::env::var("REES_KIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn random_instances(spec: &SuiteSpec, opts: &Opts) -> Vec<Result<Instance, RunReport>> {
    let label =
        |k: usize, t: Target, n: usize| format!("random-s{}-{k:03}-{}-n{n}", spec.seed, t.name());
    match spec.target {
        None => generate(spec.seed, spec.random, &spec.sizes, opts.field)
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                let t = Target::ALL[k % Target::ALL.len()];
                let n = spec.sizes[(k / Target::ALL.len()) % spec.sizes.len()];
                g.map(|g| Instance::from_matrix(label(k, t, n), &g.matrix))
                    .map_err(|e| generation_failure(label(k, t, n), n, opts, e.to_string()))
            })
            .collect(),
        Some(t) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(spec.seed);
            (0..spec.random)
                .map(|k| {
                    let n = spec.sizes[k % spec.sizes.len()];
                    random_instance(t, n, opts.field, &mut rng)
                        .map(|g| Instance::from_matrix(label(k, t, n), &g.matrix))
                        .map_err(|e| generation_failure(label(k, t, n), n, opts, e.to_string()))
                })
                .collect()
        }
    }
}

fn generation_failure(id: String, n: usize, opts: &Opts, msg: String) -> RunReport {
    let mut r = RunReport::new(&id, "verify", n, opts.field.to_string(), opts.order.name());
    r.fail("generator", FailureKind::Validation, Some(msg.clone()));
    r.error = Some(msg);
    r.timings_ms = None;
    r.finish();
    r
}

/// Verifies every corpus instance and `spec.random` generated ones on a
/// worker pool; reports come back sorted by instance id.
pub fn run_suite(spec: &SuiteSpec, opts: &Opts) -> Result<SuiteReport, RunError> {
    let mut jobs: Vec<Instance> = spec.corpus.clone();
    let mut reports: Vec<RunReport> = Vec::new();
    for r in random_instances(spec, opts) {
        match r {
            Ok(i) => jobs.push(i),
            Err(rep) => reports.push(rep),
        }
    }
    let next = AtomicUsize::new(0);
    let out = Mutex::new(Vec::new());
    let first_error = Mutex::new(None);
    let workers = worker_count().min(jobs.len()).max(1);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(inst) = jobs.get(k) else { break };
                match run(inst, Command::Verify, opts) {
                    Ok(r) => out.lock().unwrap().push(r),
                    Err(e) => {
                        first_error.lock().unwrap().get_or_insert(e);
                    }
                }
            });
        }
    });
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    reports.extend(out.into_inner().unwrap());
    reports.sort_by(|a, b| a.instance.cmp(&b.instance));
    let failed = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .count();
    Ok(SuiteReport {
        seed: spec.seed,
        random: spec.random,
        passed: reports.len() - failed,
        failed,
        verdict: if failed == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        reports,
    })
}

pub fn suite_failure(s: &SuiteReport) -> Option<FailureKind> {
    s.reports
        .iter()
        .filter_map(|r| {
            r.worst_failure()
                .or((r.verdict == Verdict::Fail).then_some(FailureKind::Mismatch))
        })
        .max()
}

pub fn summary_line(r: &RunReport) -> String {
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| c.status == Status::Failed)
        .map(|c| c.name.as_str())
        .collect();
    let verdict = match r.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    };
    if failed.is_empty() {
        format!("{verdict} {}", r.instance)
    } else {
        format!("{verdict} {} ({})", r.instance, failed.join(", "))
    }
}
