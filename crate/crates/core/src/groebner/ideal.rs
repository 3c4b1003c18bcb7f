use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{buchberger, GroebnerBasis};
use crate::ring::{MonomialOrder, Polynomial, RingContext};

/// Ideal given by generators; its reduced Groebner basis is computed on
/// first use and cached.
pub struct Ideal {
    ctx: Arc<RingContext>,
    generators: Vec<Polynomial>,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal {
            ctx: self.ctx.clone(),
            generators: self.generators.clone(),
            gb,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Equality of ideals, decided by comparing reduced Groebner bases.
impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_ring(&other.ctx) && self.gb().elements() == other.gb().elements()
    }
}

impl Eq for Ideal {}

impl Ideal {
    pub fn new(ctx: &Arc<RingContext>, generators: impl IntoIterator<Item = Polynomial>) -> Self {
        let generators: Vec<Polynomial> = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .inspect(|g| assert!(g.ctx().same_ring(ctx), "generator lives in another ring"))
            .collect();
        Ideal {
            ctx: ctx.clone(),
            generators,
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Ideal::new(ctx, [])
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Self {
        Ideal::new(ctx, [Polynomial::one(ctx)])
    }

    /// Ideal generated by a reduced basis, with the cache pre-filled.
    pub fn from_basis(gb: GroebnerBasis) -> Self {
        let ideal = Ideal {
            ctx: gb.ctx().clone(),
            generators: gb.elements().to_vec(),
            gb: OnceLock::new(),
        };
        let _ = ideal.gb.set(gb);
        ideal
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.gb
            .get_or_init(|| buchberger(&self.ctx, &self.generators).0)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.gb().normal_form(f)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        f.is_zero() || self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        Ideal::new(
            &self.ctx,
            self.generators.iter().chain(&other.generators).cloned(),
        )
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        Ideal::new(&self.ctx, self.generators.iter().cloned().chain(extra))
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut out = Vec::with_capacity(self.generators.len() * other.generators.len());
        for f in &self.generators {
            for g in &other.generators {
                out.push(f * g);
            }
        }
        Ideal::new(&self.ctx, out)
    }

    pub fn scale_by(&self, f: &Polynomial) -> Ideal {
        Ideal::new(&self.ctx, self.generators.iter().map(|g| g * f))
    }

    /// Copy of the ideal in another ring with compatible variables.
    pub fn embed(&self, target: &Arc<RingContext>) -> Ideal {
        Ideal::new(target, self.generators.iter().map(|g| g.embed(target)))
    }

    /// Generators with those already implied by earlier ones removed.
    pub fn trimmed(&self) -> Ideal {
        let mut kept: Vec<Polynomial> = Vec::new();
        for g in &self.generators {
            let current = Ideal::new(&self.ctx, kept.iter().cloned());
            if kept.is_empty() || !current.contains(g) {
                kept.push(g.clone());
            }
        }
        let out = Ideal::new(&self.ctx, kept);
        if let Some(gb) = self.gb.get() {
            let _ = out.gb.set(gb.clone());
        }
        out
    }
}

/// Intersection of `ideal` with the subring omitting the variables in
/// `vars`, computed with a block order that ranks `vars` first.
pub fn eliminate(ideal: &Ideal, vars: &[usize]) -> Ideal {
    let ctx = ideal.ctx();
    let order = MonomialOrder::Elimination {
        block: vars.to_vec(),
    };
    let ext = ctx.with_order(order);
    let gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.embed(&ext)).collect();
    let (gb, _) = buchberger(&ext, &gens);
    let kept: Vec<Polynomial> = gb
        .elements()
        .iter()
        .filter(|g| vars.iter().all(|&v| !g.involves(v)))
        .map(|g| g.embed(ctx))
        .collect();
    if *ctx.order() == MonomialOrder::DegRevLex {
        return Ideal::from_basis(GroebnerBasis::from_reduced(ctx, kept));
    }
    Ideal::new(ctx, kept)
}
