//! Exact integer/rational sparse matrices and the columns-property
//! decision procedure.
//!
//! Matrices are stored row-sparse with arbitrary-precision integer
//! coefficients. All linear algebra is exact rational arithmetic; there is
//! no floating point anywhere in this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Hard ceiling on `n_cols` for [`columns_property`]; the partition search
/// is exponential in the number of columns.
pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("column index {index} out of range for {n_cols} columns")]
    IndexOutOfRange { index: usize, n_cols: usize },
    #[error("matrix has {n_cols} columns, above the enumeration bound {bound}")]
    TooManyColumns { n_cols: usize, bound: usize },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
}

/// Integer matrix with finitely many nonzeros per row.
///
/// Internally 0-based; the JSON wire format is 1-based to match the usual
/// `[n]` column-labelling convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    n_rows: usize,
    n_cols: usize,
    // each row: (col, coeff), cols strictly increasing, coeffs nonzero
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    /// Build from sparse rows, validating the structural invariants.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        rows: Vec<Vec<(usize, BigInt)>>,
    ) -> Result<Self, MatrixError> {
        if rows.len() != n_rows {
            return Err(MatrixError::Malformed(format!(
                "declared {n_rows} rows but got {}",
                rows.len()
            )));
        }
        for row in &rows {
            let mut prev: Option<usize> = None;
            for (col, coeff) in row {
                if *col >= n_cols {
                    return Err(MatrixError::IndexOutOfRange {
                        index: *col,
                        n_cols,
                    });
                }
                if coeff.is_zero() {
                    return Err(MatrixError::Malformed("stored zero coefficient".into()));
                }
                if let Some(p) = prev {
                    if *col <= p {
                        return Err(MatrixError::Malformed(
                            "column indices not strictly increasing within a row".into(),
                        ));
                    }
                }
                prev = Some(*col);
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            rows,
        })
    }

    /// Build from dense integer rows, dropping zeros.
    pub fn from_dense_rows(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(j, c)| (j, BigInt::from(*c)))
                    .collect()
            })
            .collect();
        Self {
            n_rows,
            n_cols,
            rows,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[Vec<(usize, BigInt)>] {
        &self.rows
    }

    /// Coefficient at (row, col); zero if not stored.
    pub fn get(&self, row: usize, col: usize) -> BigInt {
        self.rows[row]
            .iter()
            .find(|(c, _)| *c == col)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// Column `j` as a dense rational vector of length `n_rows`.
    pub fn column(&self, j: usize) -> RationalVector {
        let mut v = vec![BigRational::zero(); self.n_rows];
        for (i, row) in self.rows.iter().enumerate() {
            for (col, coeff) in row {
                if *col == j {
                    v[i] = BigRational::from_integer(coeff.clone());
                }
            }
        }
        RationalVector::new(v)
    }

    /// Sum of the columns indexed by `cols`.
    pub fn column_sum(&self, cols: &[usize]) -> RationalVector {
        let mut v = vec![BigRational::zero(); self.n_rows];
        for (i, row) in self.rows.iter().enumerate() {
            for (col, coeff) in row {
                if cols.contains(col) {
                    v[i] += BigRational::from_integer(coeff.clone());
                }
            }
        }
        RationalVector::new(v)
    }

    /// Permute columns: entry at old column `j` moves to `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self, MatrixError> {
        if perm.len() != self.n_cols {
            return Err(MatrixError::DimensionMismatch {
                expected: self.n_cols,
                got: perm.len(),
            });
        }
        let mut rows = Vec::with_capacity(self.n_rows);
        for row in &self.rows {
            let mut new_row: Vec<(usize, BigInt)> = row
                .iter()
                .map(|(c, v)| (perm[*c], v.clone()))
                .collect();
            new_row.sort_by_key(|(c, _)| *c);
            rows.push(new_row);
        }
        Self::new(self.n_rows, self.n_cols, rows)
    }
}

/// Dense vector of arbitrary-precision rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        Self(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Self(
            entries
                .iter()
                .map(|x| BigRational::from_integer(BigInt::from(*x)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Row-echelon basis for an exact rational span, grown one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct SpanBasis {
    // reduced rows, each with the column index of its leading 1
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduce `v` against the basis; returns the residual.
    fn reduce(&self, v: &RationalVector) -> Vec<BigRational> {
        let mut w = v.0.clone();
        for (lead, row) in &self.rows {
            let factor = w[*lead].clone();
            if !factor.is_zero() {
                for (wi, ri) in w.iter_mut().zip(row.iter()) {
                    *wi -= &factor * ri;
                }
            }
        }
        w
    }

    /// True iff `v` lies in the current span.
    pub fn contains(&self, v: &RationalVector) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Insert `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &RationalVector) -> bool {
        let w = self.reduce(v);
        let lead = match w.iter().position(|x| !x.is_zero()) {
            Some(i) => i,
            None => return false,
        };
        let pivot = w[lead].clone();
        let normalized: Vec<BigRational> = w.into_iter().map(|x| x / &pivot).collect();
        // back-reduce existing rows so the basis stays reduced
        for (_, row) in &mut self.rows {
            let factor = row[lead].clone();
            if !factor.is_zero() {
                for (ri, ni) in row.iter_mut().zip(normalized.iter()) {
                    *ri -= &factor * ni;
                }
            }
        }
        self.rows.push((lead, normalized));
        true
    }
}

/// Decide membership of `v` in the rational span of `basis`, exactly.
///
/// ```
/// use rado::matrix::{in_span, RationalVector};
///
/// let basis = [RationalVector::from_i64(&[1, 0]), RationalVector::from_i64(&[1, 1])];
/// assert!(in_span(&RationalVector::from_i64(&[3, 2]), &basis).unwrap());
/// assert!(!in_span(&RationalVector::from_i64(&[0, 0, 1]), &[]).unwrap());
/// ```
pub fn in_span(v: &RationalVector, basis: &[RationalVector]) -> Result<bool, MatrixError> {
    let dim = v.dim();
    let mut span = SpanBasis::new();
    for b in basis {
        if b.dim() != dim {
            return Err(MatrixError::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        span.insert(b);
    }
    Ok(span.contains(v))
}

/// Ordered partition `I_1, ..., I_t` of the column indices witnessing the
/// columns property. Indices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnsCertificate {
    pub partition: Vec<Vec<usize>>,
}

impl ColumnsCertificate {
    /// Blocks with 1-based indices, for user-facing output.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.partition
            .iter()
            .map(|b| b.iter().map(|i| i + 1).collect())
            .collect()
    }
}

/// Check both columns-property conditions for `cert` against `A`,
/// independently of how the certificate was produced.
pub fn verify_certificate(
    a: &SparseIntMatrix,
    cert: &ColumnsCertificate,
) -> Result<bool, MatrixError> {
    let n = a.n_cols();
    let mut seen = vec![false; n];
    for block in &cert.partition {
        if block.is_empty() {
            return Err(MatrixError::MalformedPartition("empty block".into()));
        }
        for &i in block {
            if i >= n {
                return Err(MatrixError::IndexOutOfRange { index: i, n_cols: n });
            }
            if seen[i] {
                return Err(MatrixError::MalformedPartition(format!(
                    "column {} appears twice",
                    i + 1
                )));
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(MatrixError::MalformedPartition(
            "partition does not cover all columns".into(),
        ));
    }

    if !a.column_sum(&cert.partition[0]).is_zero() {
        return Ok(false);
    }
    let mut span = SpanBasis::new();
    for &i in &cert.partition[0] {
        span.insert(&a.column(i));
    }
    for block in &cert.partition[1..] {
        if !span.contains(&a.column_sum(block)) {
            return Ok(false);
        }
        for &i in block {
            span.insert(&a.column(i));
        }
    }
    Ok(true)
}

/// Subsets of `pool` in lexicographic order on their sorted index lists:
/// {0} < {0,1} < {0,1,2} < {0,2} < {1} < ...
fn subsets_lex(pool: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(pool: &[usize], from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for k in from..pool.len() {
            current.push(pool[k]);
            out.push(current.clone());
            rec(pool, k + 1, current, out);
            current.pop();
        }
    }
    rec(pool, 0, &mut current, &mut out);
    out
}

/// Search for a columns-property certificate under the canonical order:
/// candidate first blocks are zero-sum subsets in lexicographic order, then
/// each later block is the lexicographically least subset of the remaining
/// columns whose sum lies in the span so far, with full backtracking.
pub fn columns_property(
    a: &SparseIntMatrix,
) -> Result<Option<ColumnsCertificate>, MatrixError> {
    columns_property_bounded(a, DEFAULT_ENUMERATION_BOUND)
}

pub fn columns_property_bounded(
    a: &SparseIntMatrix,
    bound: usize,
) -> Result<Option<ColumnsCertificate>, MatrixError> {
    let n = a.n_cols();
    if n > bound {
        return Err(MatrixError::TooManyColumns { n_cols: n, bound });
    }
    if n == 0 {
        return Ok(None);
    }

    let all: Vec<usize> = (0..n).collect();
    for first in subsets_lex(&all) {
        if !a.column_sum(&first).is_zero() {
            continue;
        }
        let mut span = SpanBasis::new();
        for &i in &first {
            span.insert(&a.column(i));
        }
        let remaining: Vec<usize> = all.iter().copied().filter(|i| !first.contains(i)).collect();
        let mut blocks = vec![first.clone()];
        if extend_partition(a, &remaining, &span, &mut blocks) {
            return Ok(Some(ColumnsCertificate { partition: blocks }));
        }
    }
    Ok(None)
}

fn extend_partition(
    a: &SparseIntMatrix,
    remaining: &[usize],
    span: &SpanBasis,
    blocks: &mut Vec<Vec<usize>>,
) -> bool {
    if remaining.is_empty() {
        return true;
    }
    for block in subsets_lex(remaining) {
        if !span.contains(&a.column_sum(&block)) {
            continue;
        }
        let mut next_span = span.clone();
        for &i in &block {
            next_span.insert(&a.column(i));
        }
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|i| !block.contains(i))
            .collect();
        blocks.push(block);
        if extend_partition(a, &rest, &next_span, blocks) {
            return true;
        }
        blocks.pop();
    }
    false
}

/// Exact matrix-vector product `A x` over arbitrary-precision integers.
pub fn evaluate_image(a: &SparseIntMatrix, x: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
    if x.len() != a.n_cols() {
        return Err(MatrixError::DimensionMismatch {
            expected: a.n_cols(),
            got: x.len(),
        });
    }
    Ok(a.rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|(col, coeff)| coeff * &x[*col])
                .sum::<BigInt>()
        })
        .collect())
}

// --- JSON wire format -----------------------------------------------------
//
// {"n_rows": R, "n_cols": C, "rows": [[[col, "coeff"], ...], ...]}
// with 1-based column indices and coefficients as decimal strings.

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, String)>>,
}

impl SparseIntMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        let wire = MatrixWire {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows: self
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(c, v)| (c + 1, v.to_string()))
                        .collect()
                })
                .collect(),
        };
        serde_json::to_value(wire).expect("matrix serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, MatrixError> {
        let wire: MatrixWire = serde_json::from_value(value.clone())
            .map_err(|e| MatrixError::Malformed(e.to_string()))?;
        let mut rows = Vec::with_capacity(wire.rows.len());
        for row in &wire.rows {
            let mut parsed = Vec::with_capacity(row.len());
            for (col, coeff) in row {
                if *col == 0 {
                    return Err(MatrixError::Malformed(
                        "column indices are 1-based; got 0".into(),
                    ));
                }
                let v = BigInt::from_str(coeff)
                    .map_err(|e| MatrixError::Malformed(format!("bad coefficient: {e}")))?;
                parsed.push((col - 1, v));
            }
            rows.push(parsed);
        }
        Self::new(wire.n_rows, wire.n_cols, rows)
    }
}
