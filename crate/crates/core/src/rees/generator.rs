//! Seeded random instances aimed at a chosen case and formula branch.
//!
//! The linear part is drawn in block form (`[L'_(n-2)]`, `[L'_r, M_r']`)
//! with a random top row; the last column is a random quadric column of
//! the requested case. Draws failing the setting or landing on another
//! branch are rejected.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::defining::Pipeline;
use super::kideals::FormulaBranch;
use super::setting::validate_setting;
use super::shape::Case;
use crate::ring::{Field, PolyMatrix, Polynomial, RingContext, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Target {
    pub case: Case,
    pub branch: FormulaBranch,
}

impl Target {
    pub const ALL: [Target; 11] = {
        use FormulaBranch::*;
        const fn t(case: Case, branch: FormulaBranch) -> Target {
            Target { case, branch }
        }
        [
            t(Case::I, SingleW0Regular),
            t(Case::I, SingleW0ZeroDivisor),
            t(Case::I, LongM),
            t(Case::I, M1W0Regular),
            t(Case::I, M1W0ZeroDivisor),
            t(Case::II, SingleW0Regular),
            t(Case::II, SingleW0ZeroDivisor),
            t(Case::II, LongM),
            t(Case::II, M1W0Regular),
            t(Case::II, M1W0ZeroDivisor),
            t(Case::III, ZSquaredColumn),
        ]
    };

    pub fn name(&self) -> String {
        format!("case{}_{}", self.case, self.branch.name()).to_lowercase()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("no instance for {target} at n = {n} after {attempts} draws")]
    Exhausted {
        target: String,
        n: usize,
        attempts: usize,
    },
    #[error("{target} needs n >= {min}, got {n}")]
    TooSmall {
        target: String,
        n: usize,
        min: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub target: Target,
    pub n: usize,
    pub attempts: usize,
    pub matrix: PolyMatrix,
}

const MAX_ATTEMPTS: usize = 400;

struct Draw<'a, R: Rng> {
    ctx: &'a Arc<RingContext>,
    rng: &'a mut R,
}

impl<R: Rng> Draw<'_, R> {
    fn small(&mut self) -> i64 {
        self.rng.gen_range(-2..=2)
    }

    fn nonzero(&mut self) -> i64 {
        *[-2i64, -1, 1, 2].choose(self.rng).unwrap()
    }

    fn var(&self, v: usize) -> Polynomial {
        Polynomial::var(self.ctx, v)
    }

    fn lin(&self, a: i64, b: i64) -> Polynomial {
        let f = self.ctx.field();
        let x = self.var(self.ctx.x()).scale(&f.from_i64(a));
        let y = self.var(self.ctx.y()).scale(&f.from_i64(b));
        &x + &y
    }

    /// Random combination of the given degree-2 monomials in x, y, z.
    fn quadric(&mut self, monos: &[(usize, usize)]) -> Polynomial {
        let mut q = Polynomial::zero(self.ctx);
        for &(u, v) in monos {
            let c: Scalar = self.ctx.field().from_i64(self.small());
            q = &q + &(&self.var(u) * &self.var(v)).scale(&c);
        }
        q
    }
}

/// Size `r'` of the `M` block the target needs, `0` for a single `L'`.
fn m_size<R: Rng>(branch: FormulaBranch, n: usize, rng: &mut R) -> usize {
    match branch {
        FormulaBranch::LongM => rng.gen_range(2..=n - 3),
        FormulaBranch::M1W0Regular | FormulaBranch::M1W0ZeroDivisor => 1,
        _ => 0,
    }
}

/// One unfiltered draw for `target`.
fn draw<R: Rng>(ctx: &Arc<RingContext>, target: Target, n: usize, rng: &mut R) -> PolyMatrix {
    let (x, y, z) = (ctx.x(), ctx.y(), ctx.z());
    let mut d = Draw { ctx, rng };
    let mut phi = PolyMatrix::zeros(ctx, n, n - 1);
    let lin_cols = n - 2;
    let zcol = lin_cols - 1;
    let rp = m_size(target.branch, n, d.rng);
    let r = lin_cols - rp;

    // φ' = [L'_r, M_r'] in rows 1..n.
    for j in 0..r {
        phi.set(1 + j, j, d.var(x));
        phi.set(2 + j, j, d.var(y));
    }
    if rp > 0 {
        let (a, b) = loop {
            let (a, b) = (d.small(), d.small());
            if a != 0 || b != 0 {
                break (a, b);
            }
        };
        let (c, dd) = loop {
            let (c, dd) = (d.small(), d.small());
            if a * dd - b * c != 0 {
                break (c, dd);
            }
        };
        for k in 0..rp {
            phi.set(r + 2 + k, r + k, d.lin(a, b));
            if k + 1 < rp {
                phi.set(r + 2 + k, r + k + 1, d.lin(c, dd));
            }
        }
    }

    // Top row: coefficients (a_i, b_i) of the first n - 3 columns. A
    // regular w0 needs a_i = b_(i-1) along the L' chain.
    let m = n - 3;
    let mut a: Vec<i64> = (0..m).map(|_| d.small()).collect();
    let mut b: Vec<i64> = (0..m).map(|_| d.small()).collect();
    let chain = r.min(m);
    let regular = matches!(
        target.branch,
        FormulaBranch::SingleW0Regular | FormulaBranch::M1W0Regular
    );
    let zero_divisor = matches!(
        target.branch,
        FormulaBranch::SingleW0ZeroDivisor | FormulaBranch::M1W0ZeroDivisor
    );
    match target.branch {
        FormulaBranch::SingleW0Regular => {
            // a_1 = 1, b_(n-3) = 1, the rest zero.
            a.iter_mut().for_each(|v| *v = 0);
            b.iter_mut().for_each(|v| *v = 0);
            a[0] = 1;
            b[m - 1] = 1;
        }
        FormulaBranch::SingleW0ZeroDivisor => {
            // a_2 = 0, b_1 = 1, a_i = b_(i-1) = 0 for i >= 3.
            for i in 1..m {
                a[i] = 0;
                b[i - 1] = 0;
            }
            if m >= 2 {
                b[0] = 1;
            }
        }
        _ => {
            if regular {
                b[..chain - 1].clone_from_slice(&a[1..chain]);
            }
            if zero_divisor && chain >= 2 {
                let i = d.rng.gen_range(1..chain);
                if a[i] == b[i - 1] {
                    b[i - 1] = a[i] + d.nonzero();
                }
            }
        }
    }
    for i in 0..m {
        phi.set(0, i, d.lin(a[i], b[i]));
    }

    let last = n - 2;
    match target.case {
        Case::I | Case::II => {
            phi.set(0, zcol, d.var(z));
            let pure = [(x, x), (x, y), (y, y)];
            let mixed = [(x, x), (x, y), (y, y), (x, z), (y, z)];
            phi.set(0, last, d.quadric(&mixed));
            for i in 1..n {
                let q = if target.case == Case::II {
                    d.quadric(&mixed)
                } else {
                    d.quadric(&pure)
                };
                phi.set(i, last, q);
            }
            if target.case == Case::II {
                let i = d.rng.gen_range(1..n);
                let v = if d.rng.gen_bool(0.5) { x } else { y };
                let bump = (&d.var(v) * &d.var(z)).scale(&ctx.field().from_i64(d.nonzero()));
                let e = phi.get(i, last) + &bump;
                phi.set(i, last, e);
            }
        }
        Case::III => {
            let (ta, tb) = (d.small(), d.small());
            phi.set(0, zcol, d.lin(ta, tb));
            let top = &(&d.var(z) * &d.var(z)) + &d.quadric(&[(x, x), (x, y), (y, y)]);
            phi.set(0, last, top);
            for i in 1..n {
                let q = d.quadric(&[(x, x), (x, y), (y, y)]);
                phi.set(i, last, q);
            }
        }
    }
    phi
}

const MIN_N: usize = 5;

/// Draws until a matrix satisfies the setting and lands on `target`.
pub fn random_instance<R: Rng>(
    target: Target,
    n: usize,
    field: Field,
    rng: &mut R,
) -> Result<Generated, GeneratorError> {
    if n < MIN_N {
        return Err(GeneratorError::TooSmall {
            target: target.name(),
            n,
            min: MIN_N,
        });
    }
    let ctx = RingContext::rees(n, field).expect("valid ring");
    for attempt in 1..=MAX_ATTEMPTS {
        let phi = draw(&ctx, target, n, rng);
        let report = validate_setting(&phi);
        if !report.passed() {
            continue;
        }
        let Ok(p) = Pipeline::with_report(&phi, report) else {
            continue;
        };
        if p.case() == target.case && p.data.checked_branch() == Ok(target.branch) {
            return Ok(Generated {
                target,
                n,
                attempts: attempt,
                matrix: phi,
            });
        }
    }
    Err(GeneratorError::Exhausted {
        target: target.name(),
        n,
        attempts: MAX_ATTEMPTS,
    })
}

/// `count` instances cycling through every target and the given sizes,
/// reproducible from `seed`.
pub fn generate(
    seed: u64,
    count: usize,
    sizes: &[usize],
    field: Field,
) -> Vec<Result<Generated, GeneratorError>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let target = Target::ALL[k % Target::ALL.len()];
            let n = sizes[(k / Target::ALL.len()) % sizes.len()];
            random_instance(target, n, field, &mut rng)
        })
        .collect()
}
