//! The ambient polynomial ring `k[x, y, z, w0, ..., w(n-1)]`, its elements
//! and matrices over it.

mod linalg;
mod matrix;
mod monomial;
mod parse;
mod poly;
mod scalar;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use linalg::ScalarMatrix;
pub use matrix::{MatrixJson, PolyMatrix};
pub use monomial::{Exponents, Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use poly::{Bidegree, Polynomial, Term};
pub use scalar::{is_prime, Field, Rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed polynomial at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero")]
    DenominatorZero,
    #[error("operands live in different rings")]
    ContextMismatch,
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("polynomial is not bihomogeneous")]
    NotBihomogeneous,
    #[error("minor size {k} out of range for a {rows}x{cols} matrix")]
    MinorSize { k: usize, rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

/// Which part of the bigrading a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `x`, `y`, `z`: degree (1, 0).
    Base,
    /// `w_i`: degree (0, 1).
    Dual,
    /// Auxiliary variables introduced by elimination tricks; degree (0, 0).
    Aux,
}

/// Polynomial ring with a fixed variable ranking, coefficient field and
/// monomial order. Variables are ranked by position: `x < y < z < w0 < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    n: usize,
    field: Field,
    order: MonomialOrder,
}

impl RingContext {
    /// `S = k[x, y, z, w0, ..., w(n-1)]` with degrevlex.
    pub fn rees(n: usize, field: Field) -> Result<Arc<RingContext>, RingError> {
        Self::rees_with_order(n, field, MonomialOrder::DegRevLex)
    }

    pub fn rees_with_order(
        n: usize,
        field: Field,
        order: MonomialOrder,
    ) -> Result<Arc<RingContext>, RingError> {
        if n == 0 {
            return Err(RingError::InvalidRing("n must be positive".into()));
        }
        if let Field::Prime(p) = field {
            if !is_prime(p) {
                return Err(RingError::InvalidRing(format!("{p} is not prime")));
            }
            if p as usize <= n {
                return Err(RingError::InvalidRing(format!(
                    "characteristic {p} must exceed n = {n}"
                )));
            }
        }
        let mut names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let mut kinds = vec![VarKind::Base; 3];
        for i in 0..n {
            names.push(format!("w{i}"));
            kinds.push(VarKind::Dual);
        }
        Ok(Arc::new(RingContext {
            names,
            kinds,
            n,
            field,
            order,
        }))
    }

    /// A ring with arbitrary variable names, all of base kind. Mostly useful
    /// for tests of the generic machinery.
    pub fn generic(names: &[&str], field: Field, order: MonomialOrder) -> Arc<RingContext> {
        Arc::new(RingContext {
            names: names.iter().map(|s| s.to_string()).collect(),
            kinds: vec![VarKind::Base; names.len()],
            n: 0,
            field,
            order,
        })
    }

    /// Same ring plus auxiliary variables appended at the top of the ranking,
    /// under the given order.
    pub fn with_aux_vars(&self, extra: &[&str], order: MonomialOrder) -> Arc<RingContext> {
        let mut names = self.names.clone();
        let mut kinds = self.kinds.clone();
        for name in extra {
            let mut candidate = name.to_string();
            while names.contains(&candidate) {
                candidate.push('_');
            }
            names.push(candidate);
            kinds.push(VarKind::Aux);
        }
        Arc::new(RingContext {
            names,
            kinds,
            n: self.n,
            field: self.field,
            order,
        })
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<RingContext> {
        Arc::new(RingContext {
            order,
            ..self.clone()
        })
    }

    pub fn with_field(&self, field: Field) -> Arc<RingContext> {
        Arc::new(RingContext {
            field,
            ..self.clone()
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Number of dual variables `w_i` (the number of ideal generators).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, var: usize) -> VarKind {
        self.kinds[var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn x(&self) -> usize {
        0
    }

    pub fn y(&self) -> usize {
        1
    }

    pub fn z(&self) -> usize {
        2
    }

    /// Index of `w_i`.
    pub fn w(&self, i: usize) -> usize {
        assert!(i < self.n, "w{i} out of range");
        3 + i
    }

    /// Same variables, field and order (ignoring pointer identity).
    pub fn same_ring(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] ({})",
            self.field,
            self.names.join(","),
            self.order.name()
        )
    }
}
