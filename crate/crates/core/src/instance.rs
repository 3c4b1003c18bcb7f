//! Instance files: a presentation matrix plus optional expected values.
//!
//! ```json
//! {
//!   "id": "ex71",
//!   "matrix": [["x", "y", "z", "x*z"], ...],
//!   "expected": {
//!     "case": "I",
//!     "ideals": { "J": ["..."] },
//!     "discrepancies": { "K2": { "generators": ["..."], "note": "..." } }
//!   }
//! }
//! ```
//!
//! Expected ideals are compared by reduced Gröbner basis. `K2` and
//! `Kprime` list generators beyond `𝒥`; the rest are ideals of `S`.
//! Discrepancies are displayed values known not to hold; they are
//! evaluated and reported but do not decide a verdict.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::Ideal;
use crate::ring::{
    parse_poly, Field, MonomialOrder, PolyMatrix, Polynomial, RingContext, RingError,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation_exponent: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideals: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub discrepancies: BTreeMap<String, Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub generators: Vec<String>,
    pub note: String,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed instance {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("instance {id}: {source}")]
    Ring { id: String, source: RingError },
    #[error("instance {id}: empty or ragged matrix")]
    Shape { id: String },
}

impl Instance {
    pub fn load(path: &Path) -> Result<Instance, InstanceError> {
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| InstanceError::Json {
            path: path.display().to_string(),
            source,
        })
    }

    /// Every `*.json` file of `dir`, sorted by id.
    pub fn load_dir(dir: &Path) -> Result<Vec<Instance>, InstanceError> {
        let io = |source| InstanceError::Io {
            path: dir.display().to_string(),
            source,
        };
        let mut out = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(io)? {
            let path = entry.map_err(io)?.path();
            if path.extension().is_some_and(|e| e == "json") {
                out.push(Instance::load(&path)?);
            }
        }
        out.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(out)
    }

    /// Number of rows, which is the number of generators of `I`.
    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn ring(
        &self,
        field: Field,
        order: MonomialOrder,
    ) -> Result<Arc<RingContext>, InstanceError> {
        RingContext::rees_with_order(self.n(), field, order).map_err(|source| InstanceError::Ring {
            id: self.id.clone(),
            source,
        })
    }

    pub fn matrix(&self, ctx: &Arc<RingContext>) -> Result<PolyMatrix, InstanceError> {
        let cols = self.matrix.first().map_or(0, Vec::len);
        if cols == 0 || self.matrix.iter().any(|r| r.len() != cols) {
            return Err(InstanceError::Shape {
                id: self.id.clone(),
            });
        }
        let rows: Vec<Vec<&str>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        PolyMatrix::from_rows(ctx, &refs).map_err(|source| InstanceError::Ring {
            id: self.id.clone(),
            source,
        })
    }

    pub fn from_matrix(id: impl Into<String>, phi: &PolyMatrix) -> Instance {
        let matrix = (0..phi.rows())
            .map(|i| (0..phi.cols()).map(|j| phi.get(i, j).to_string()).collect())
            .collect();
        Instance {
            id: id.into(),
            description: None,
            matrix,
            expected: None,
        }
    }
}

pub fn parse_generators(
    gens: &[String],
    ctx: &Arc<RingContext>,
) -> Result<Vec<Polynomial>, RingError> {
    gens.iter().map(|g| parse_poly(g, ctx)).collect()
}

/// The ideal an expectation describes: `base + (gens)` when a base is
/// given, `(gens)` otherwise.
pub fn expected_ideal(
    gens: &[String],
    ctx: &Arc<RingContext>,
    base: Option<&Ideal>,
) -> Result<Ideal, RingError> {
    let g = parse_generators(gens, ctx)?;
    Ok(match base {
        Some(b) => b.with_generators(g),
        None => Ideal::new(ctx, g),
    })
}
