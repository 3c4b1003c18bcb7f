use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{parse_poly, Polynomial, RingContext, RingError};

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ctx: Arc<RingContext>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

/// Wire form: `{ "rows": r, "cols": c, "entries": ["poly", ...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl PolyMatrix {
    pub fn new(
        ctx: &Arc<RingContext>,
        rows: usize,
        cols: usize,
        entries: Vec<Polynomial>,
    ) -> Result<Self, RingError> {
        if entries.len() != rows * cols {
            return Err(RingError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.ctx().same_ring(ctx)) {
            return Err(RingError::ContextMismatch);
        }
        Ok(PolyMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(ctx: &Arc<RingContext>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(ctx); rows * cols],
        }
    }

    pub fn from_rows(ctx: &Arc<RingContext>, rows: &[&[&str]]) -> Result<Self, RingError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(RingError::Shape("ragged rows".into()));
            }
            for s in *row {
                entries.push(parse_poly(s, ctx)?);
            }
        }
        Self::new(ctx, r, c, entries)
    }

    pub fn from_json(json: &MatrixJson, ctx: &Arc<RingContext>) -> Result<Self, RingError> {
        let entries = json
            .entries
            .iter()
            .map(|s| parse_poly(s, ctx))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ctx, json.rows, json.cols, entries)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_string()).collect(),
        }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Polynomial) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Polynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix {
            ctx: self.ctx.clone(),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix {
            ctx: self.ctx.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, RingError> {
        if self.cols != other.rows {
            return Err(RingError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(&self.ctx, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(&self.ctx);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Polynomial) {
        for c in 0..self.cols {
            let v = self.get(target, c) + &(factor * self.get(source, c));
            self.set(target, c, v);
        }
    }

    /// `col[target] += factor * col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Polynomial) {
        for r in 0..self.rows {
            let v = self.get(r, target) + &(factor * self.get(r, source));
            self.set(r, target, v);
        }
    }

    pub fn scale_row(&mut self, r: usize, factor: &Polynomial) {
        for c in 0..self.cols {
            let v = self.get(r, c) * factor;
            self.set(r, c, v);
        }
    }

    pub fn scale_col(&mut self, c: usize, factor: &Polynomial) {
        for r in 0..self.rows {
            let v = self.get(r, c) * factor;
            self.set(r, c, v);
        }
    }

    pub fn determinant(&self) -> Result<Polynomial, RingError> {
        if self.rows != self.cols {
            return Err(RingError::Shape(
                "determinant of a non-square matrix".into(),
            ));
        }
        let rows: Vec<usize> = (0..self.rows).collect();
        let mut memo = MinorMemo::default();
        Ok(self.minor_det(&rows, &rows, &mut memo))
    }

    /// All `k x k` minors, ordered lexicographically by (row set, column set).
    /// `k = 0` yields `[1]`.
    pub fn minors(&self, k: usize) -> Result<Vec<Polynomial>, RingError> {
        if k > self.rows.min(self.cols) {
            return Err(RingError::MinorSize {
                k,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if k == 0 {
            return Ok(vec![Polynomial::one(&self.ctx)]);
        }
        let row_sets = combinations(self.rows, k);
        let col_sets = combinations(self.cols, k);
        let mut memo = MinorMemo::default();
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.minor_det(rs, cs, &mut memo));
            }
        }
        Ok(out)
    }

    /// Laplace expansion along the first listed column, memoizing every
    /// sub-determinant by its (row mask, column mask).
    fn minor_det(&self, rows: &[usize], cols: &[usize], memo: &mut MinorMemo) -> Polynomial {
        let key = (mask(rows), mask(cols));
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        let result = if rows.len() == 1 {
            self.get(rows[0], cols[0]).clone()
        } else {
            let c0 = cols[0];
            let rest_cols = &cols[1..];
            let mut acc = Polynomial::zero(&self.ctx);
            for (i, &r) in rows.iter().enumerate() {
                let entry = self.get(r, c0);
                if entry.is_zero() {
                    continue;
                }
                let rest_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
                let sub = self.minor_det(&rest_rows, rest_cols, memo);
                if sub.is_zero() {
                    continue;
                }
                let term = entry * &sub;
                acc = if i % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        };
        memo.insert(key, result.clone());
        result
    }
}

type MinorMemo = HashMap<(u128, u128), Polynomial>;

fn mask(idx: &[usize]) -> u128 {
    idx.iter().fold(0u128, |m, &i| m | (1u128 << i))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;

    fn ctx() -> Arc<RingContext> {
        RingContext::rees(5, Field::Rational).unwrap()
    }

    #[test]
    fn empty_minor_and_identity() {
        let c = ctx();
        let id = PolyMatrix::from_rows(&c, &[&["1", "0"], &["0", "1"]]).unwrap();
        assert_eq!(id.minors(0).unwrap(), vec![Polynomial::one(&c)]);
        assert_eq!(id.minors(2).unwrap(), vec![Polynomial::one(&c)]);
        assert!(matches!(id.minors(3), Err(RingError::MinorSize { .. })));
    }

    #[test]
    fn minors_of_jacobian_dual_block() {
        let c = ctx();
        let b =
            PolyMatrix::from_rows(&c, &[&["w0+w1", "w0+w2", "w3"], &["w2", "w3", "w4"]]).unwrap();
        let m: Vec<String> = b.minors(2).unwrap().iter().map(|p| p.to_string()).collect();
        let expect = [
            "-w2^2 + w1*w3 + w0*w3 - w0*w2",
            "-w2*w3 + w1*w4 + w0*w4",
            "-w3^2 + w2*w4 + w0*w4",
        ];
        let expect: Vec<String> = expect
            .iter()
            .map(|s| parse_poly(s, &c).unwrap().to_string())
            .collect();
        assert_eq!(m, expect);
    }

    #[test]
    fn json_round_trip() {
        let c = ctx();
        let m = PolyMatrix::from_rows(&c, &[&["x", "y*z"], &["0", "x^2 - 1/2*y^2"]]).unwrap();
        let j = m.to_json();
        assert_eq!(PolyMatrix::from_json(&j, &c).unwrap(), m);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
