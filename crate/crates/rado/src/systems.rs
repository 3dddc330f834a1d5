//! Generators for the finite truncations of the linear systems under
//! study: the main image system, the kernel system it almost reduces to,
//! the near-miss kernel variant, and the auxiliary finite kernel system
//! used in the constructive argument.
//!
//! Every generator fixes the same canonical variable order
//! `(y; x_{ni} lex; u_n; v_{ni} lex; z_n; xt_{ni} lex)` so generated
//! matrices are byte-reproducible.

use crate::matrix::{evaluate_image, MatrixError, SparseIntMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum SystemError {
    #[error("n_max must be at least 1, got {0}")]
    BadDepth(usize),
    #[error("need at least {need} coefficients, got {got}")]
    CoeffsTooShort { need: usize, got: usize },
    #[error("assignment is not a valid kernel witness: row {row} evaluates to {value}, not 0")]
    NotAKernelWitness { row: usize, value: BigInt },
    #[error("assignment missing variable {0}")]
    MissingVariable(VarName),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("malformed system: {0}")]
    Malformed(String),
}

/// Variable in one of the generated systems.
///
/// `X(n, i)` requires `1 <= i <= n`; likewise `V` and `XTilde`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarName {
    Y,
    X(usize, usize),
    U(usize),
    V(usize, usize),
    Z(usize),
    XTilde(usize, usize),
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::Y => write!(f, "y"),
            VarName::X(n, i) => write!(f, "x_{n}_{i}"),
            VarName::U(n) => write!(f, "u_{n}"),
            VarName::V(n, i) => write!(f, "v_{n}_{i}"),
            VarName::Z(n) => write!(f, "z_{n}"),
            VarName::XTilde(n, i) => write!(f, "xt_{n}_{i}"),
        }
    }
}

impl std::str::FromStr for VarName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "y" {
            return Ok(VarName::Y);
        }
        let parts: Vec<&str> = s.split('_').collect();
        let idx = |p: &str| p.parse::<usize>().map_err(|e| format!("bad index in {s:?}: {e}"));
        match parts.as_slice() {
            ["x", n, i] => Ok(VarName::X(idx(n)?, idx(i)?)),
            ["u", n] => Ok(VarName::U(idx(n)?)),
            ["v", n, i] => Ok(VarName::V(idx(n)?, idx(i)?)),
            ["z", n] => Ok(VarName::Z(idx(n)?)),
            ["xt", n, i] => Ok(VarName::XTilde(idx(n)?, idx(i)?)),
            _ => Err(format!("unrecognized variable name {s:?}")),
        }
    }
}

/// Whether a system's rows are expressions to be coloured (image) or
/// equations to be solved in a single colour class (kernel).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemMode {
    Image,
    Kernel,
}

/// A finite linear system over named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub variables: Vec<VarName>,
    pub matrix: SparseIntMatrix,
    pub mode: SystemMode,
    pub coeffs: Vec<i64>,
}

impl LinearSystem {
    pub fn var_index(&self, v: VarName) -> Option<usize> {
        self.variables.iter().position(|w| *w == v)
    }

    /// Dense i64 rows for the search engine. Errors if any coefficient
    /// does not fit in i64 (not reachable for the generated systems).
    pub fn dense_rows_i64(&self) -> Result<Vec<Vec<i64>>, SystemError> {
        let n = self.variables.len();
        let mut out = Vec::with_capacity(self.matrix.n_rows());
        for row in self.matrix.rows() {
            let mut dense = vec![0i64; n];
            for (col, coeff) in row {
                dense[*col] = i64::try_from(coeff.clone())
                    .map_err(|_| SystemError::Malformed("coefficient exceeds i64".into()))?;
            }
            out.push(dense);
        }
        Ok(out)
    }

    /// Evaluate every row at `assignment` (which must cover all variables).
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<VarName, BigInt>,
    ) -> Result<Vec<BigInt>, SystemError> {
        let x: Vec<BigInt> = self
            .variables
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .cloned()
                    .ok_or(SystemError::MissingVariable(*v))
            })
            .collect::<Result<_, _>>()?;
        Ok(evaluate_image(&self.matrix, &x)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.matrix.to_json();
        let obj = v.as_object_mut().expect("matrix json is an object");
        obj.insert(
            "variables".into(),
            serde_json::json!(self
                .variables
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()),
        );
        obj.insert(
            "mode".into(),
            serde_json::to_value(self.mode).expect("mode serializes"),
        );
        obj.insert("coeffs".into(), serde_json::json!(self.coeffs));
        v
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SystemError> {
        let matrix = SparseIntMatrix::from_json(value)?;
        let names = value
            .get("variables")
            .and_then(|v| v.as_array())
            .ok_or_else(|| SystemError::Malformed("missing \"variables\" array".into()))?;
        let variables: Vec<VarName> = names
            .iter()
            .map(|n| {
                n.as_str()
                    .ok_or_else(|| SystemError::Malformed("variable name not a string".into()))
                    .and_then(|s| s.parse().map_err(SystemError::Malformed))
            })
            .collect::<Result<_, _>>()?;
        if variables.len() != matrix.n_cols() {
            return Err(SystemError::Malformed(format!(
                "{} variables for {} columns",
                variables.len(),
                matrix.n_cols()
            )));
        }
        let mode: SystemMode = serde_json::from_value(
            value
                .get("mode")
                .cloned()
                .ok_or_else(|| SystemError::Malformed("missing \"mode\"".into()))?,
        )
        .map_err(|e| SystemError::Malformed(e.to_string()))?;
        let coeffs: Vec<i64> = match value.get("coeffs") {
            Some(c) => serde_json::from_value(c.clone())
                .map_err(|e| SystemError::Malformed(e.to_string()))?,
            None => Vec::new(),
        };
        Ok(Self {
            variables,
            matrix,
            mode,
            coeffs,
        })
    }
}

fn check_depth(n_max: usize, a: &[i64]) -> Result<(), SystemError> {
    if n_max < 1 {
        return Err(SystemError::BadDepth(n_max));
    }
    if a.len() < n_max {
        return Err(SystemError::CoeffsTooShort {
            need: n_max,
            got: a.len(),
        });
    }
    Ok(())
}

/// Shared builder for the image system over blocks `(label, size, coeff)`:
/// per block, the sum row `x_{n1} + ... + x_{nn}`, then `x_{ni} + a_n y`
/// for each i, and a final row equal to `y` alone.
fn build_image_system(blocks: &[(usize, usize, i64)], coeffs: Vec<i64>) -> LinearSystem {
    let mut variables = vec![VarName::Y];
    for &(n, size, _) in blocks {
        for i in 1..=size {
            variables.push(VarName::X(n, i));
        }
    }
    let index: BTreeMap<VarName, usize> = variables
        .iter()
        .enumerate()
        .map(|(j, v)| (*v, j))
        .collect();

    let mut rows: Vec<Vec<(usize, BigInt)>> = Vec::new();
    for &(n, size, a_n) in blocks {
        let sum_row: Vec<(usize, BigInt)> = (1..=size)
            .map(|i| (index[&VarName::X(n, i)], BigInt::from(1)))
            .collect();
        rows.push(sum_row);
        for i in 1..=size {
            let mut row = Vec::new();
            if a_n != 0 {
                row.push((0, BigInt::from(a_n)));
            }
            row.push((index[&VarName::X(n, i)], BigInt::from(1)));
            row.sort_by_key(|(c, _)| *c);
            rows.push(row);
        }
    }
    rows.push(vec![(0, BigInt::from(1))]);

    let n_rows = rows.len();
    let n_cols = variables.len();
    LinearSystem {
        variables,
        matrix: SparseIntMatrix::new(n_rows, n_cols, rows).expect("generator rows are valid"),
        mode: SystemMode::Image,
        coeffs,
    }
}

/// Truncation of the main image system to blocks `n = 1..n_max`:
/// `n_max + n_max(n_max+1)/2 + 1` rows over `y` and the `x_{ni}`.
///
/// ```
/// use rado::systems::gen_dh_truncation;
///
/// let sys = gen_dh_truncation(2, &[1, 2]).unwrap();
/// // variables: y, x_1_1, x_2_1, x_2_2
/// assert_eq!(
///     sys.dense_rows_i64().unwrap(),
///     vec![
///         vec![0, 1, 0, 0], // x_1_1
///         vec![1, 1, 0, 0], // x_1_1 + y
///         vec![0, 0, 1, 1], // x_2_1 + x_2_2
///         vec![2, 0, 1, 0], // x_2_1 + 2y
///         vec![2, 0, 0, 1], // x_2_2 + 2y
///         vec![1, 0, 0, 0], // y
///     ],
/// );
/// ```
pub fn gen_dh_truncation(n_max: usize, a: &[i64]) -> Result<LinearSystem, SystemError> {
    check_depth(n_max, a)?;
    let blocks: Vec<(usize, usize, i64)> = (1..=n_max).map(|n| (n, n, a[n - 1])).collect();
    Ok(build_image_system(&blocks, a[..n_max].to_vec()))
}

/// Power-of-two block variant: blocks sized `1, 2, 4, ..., 2^(k_max-1)`
/// with coefficient equal to the block size.
pub fn gen_dh_pow2(k_max: usize) -> Result<LinearSystem, SystemError> {
    if k_max < 1 {
        return Err(SystemError::BadDepth(k_max));
    }
    let blocks: Vec<(usize, usize, i64)> = (0..k_max)
        .map(|k| {
            let n = 1usize << k;
            (n, n, n as i64)
        })
        .collect();
    let coeffs = blocks.iter().map(|&(_, _, c)| c).collect();
    Ok(build_image_system(&blocks, coeffs))
}

/// Kernel system `x_{n1} + ... + x_{nn} + a_n y - z_n = 0` for `n <= n_max`.
pub fn gen_bhl_kernel(n_max: usize, a: &[i64]) -> Result<LinearSystem, SystemError> {
    check_depth(n_max, a)?;
    let mut variables = vec![VarName::Y];
    for n in 1..=n_max {
        for i in 1..=n {
            variables.push(VarName::X(n, i));
        }
    }
    for n in 1..=n_max {
        variables.push(VarName::Z(n));
    }
    let index: BTreeMap<VarName, usize> = variables
        .iter()
        .enumerate()
        .map(|(j, v)| (*v, j))
        .collect();

    let mut rows = Vec::new();
    for n in 1..=n_max {
        let mut row: Vec<(usize, BigInt)> = Vec::new();
        if a[n - 1] != 0 {
            row.push((0, BigInt::from(a[n - 1])));
        }
        for i in 1..=n {
            row.push((index[&VarName::X(n, i)], BigInt::from(1)));
        }
        row.push((index[&VarName::Z(n)], BigInt::from(-1)));
        row.sort_by_key(|(c, _)| *c);
        rows.push(row);
    }
    let n_rows = rows.len();
    let n_cols = variables.len();
    Ok(LinearSystem {
        variables,
        matrix: SparseIntMatrix::new(n_rows, n_cols, rows)?,
        mode: SystemMode::Kernel,
        coeffs: a[..n_max].to_vec(),
    })
}

/// Near-miss kernel system
/// `xt_{n1} + ... + xt_{nn} - n a_n y - z_n = 0` for `n <= n_max`.
pub fn gen_nearmiss_kernel(n_max: usize, a: &[i64]) -> Result<LinearSystem, SystemError> {
    check_depth(n_max, a)?;
    let mut variables = vec![VarName::Y];
    for n in 1..=n_max {
        variables.push(VarName::Z(n));
    }
    for n in 1..=n_max {
        for i in 1..=n {
            variables.push(VarName::XTilde(n, i));
        }
    }
    let index: BTreeMap<VarName, usize> = variables
        .iter()
        .enumerate()
        .map(|(j, v)| (*v, j))
        .collect();

    let mut rows = Vec::new();
    for n in 1..=n_max {
        let y_coeff = -(n as i64) * a[n - 1];
        let mut row: Vec<(usize, BigInt)> = Vec::new();
        if y_coeff != 0 {
            row.push((0, BigInt::from(y_coeff)));
        }
        row.push((index[&VarName::Z(n)], BigInt::from(-1)));
        for i in 1..=n {
            row.push((index[&VarName::XTilde(n, i)], BigInt::from(1)));
        }
        row.sort_by_key(|(c, _)| *c);
        rows.push(row);
    }
    let n_rows = rows.len();
    let n_cols = variables.len();
    Ok(LinearSystem {
        variables,
        matrix: SparseIntMatrix::new(n_rows, n_cols, rows)?,
        mode: SystemMode::Kernel,
        coeffs: a[..n_max].to_vec(),
    })
}

/// Auxiliary finite kernel system over `(y, x, u, v)`:
/// `u_n - (x_{n1} + ... + x_{nn}) = 0` and `v_{ni} - x_{ni} - a_n y = 0`
/// for `n <= N`. Stored with this sign, i.e. as `(-B | I)` where `B` is
/// the top-left corner of the [`gen_dh_truncation`] matrix.
pub fn gen_finite_system(n: usize, a: &[i64]) -> Result<LinearSystem, SystemError> {
    check_depth(n, a)?;
    let big_n = n;
    let mut variables = vec![VarName::Y];
    for n in 1..=big_n {
        for i in 1..=n {
            variables.push(VarName::X(n, i));
        }
    }
    for n in 1..=big_n {
        variables.push(VarName::U(n));
    }
    for n in 1..=big_n {
        for i in 1..=n {
            variables.push(VarName::V(n, i));
        }
    }
    let index: BTreeMap<VarName, usize> = variables
        .iter()
        .enumerate()
        .map(|(j, v)| (*v, j))
        .collect();

    let mut rows = Vec::new();
    for n in 1..=big_n {
        let mut u_row: Vec<(usize, BigInt)> = (1..=n)
            .map(|i| (index[&VarName::X(n, i)], BigInt::from(-1)))
            .collect();
        u_row.push((index[&VarName::U(n)], BigInt::from(1)));
        u_row.sort_by_key(|(c, _)| *c);
        rows.push(u_row);
        for i in 1..=n {
            let mut row: Vec<(usize, BigInt)> = Vec::new();
            if a[n - 1] != 0 {
                row.push((0, BigInt::from(-a[n - 1])));
            }
            row.push((index[&VarName::X(n, i)], BigInt::from(-1)));
            row.push((index[&VarName::V(n, i)], BigInt::from(1)));
            row.sort_by_key(|(c, _)| *c);
            rows.push(row);
        }
    }
    let n_rows = rows.len();
    let n_cols = variables.len();
    Ok(LinearSystem {
        variables,
        matrix: SparseIntMatrix::new(n_rows, n_cols, rows)?,
        mode: SystemMode::Kernel,
        coeffs: a[..big_n].to_vec(),
    })
}

/// Result of pushing a near-miss kernel witness through
/// `x_{ni} = xt_{ni} - a_n y`.
#[derive(Debug, Clone)]
pub struct NearMissTransform {
    /// Assignment for the image system, in canonical variable order.
    pub assignment: BTreeMap<VarName, BigInt>,
    /// The image rows evaluated at the assignment.
    pub image_values: Vec<BigInt>,
    /// Variables with value < 1, in canonical order.
    pub nonpositive: Vec<VarName>,
}

impl NearMissTransform {
    pub fn positivity_ok(&self) -> bool {
        self.nonpositive.is_empty()
    }
}

/// Substitute a valid near-miss kernel witness into the image system:
/// `x_{ni} = xt_{ni} - a_n y`. The evaluated image rows then reproduce the
/// witness values `z_n`, `xt_{ni}` and `y` exactly; positivity of the new
/// variables is reported, not assumed.
///
/// ```
/// use std::collections::BTreeMap;
/// use num_bigint::BigInt;
/// use rado::systems::{transform_nearmiss, VarName};
///
/// let mut w: BTreeMap<VarName, BigInt> = BTreeMap::new();
/// w.insert(VarName::Y, 1.into());
/// w.insert(VarName::XTilde(1, 1), 5.into());
/// w.insert(VarName::Z(1), 4.into()); // 5 - 1*1*1
/// let t = transform_nearmiss(&w, 1, &[1]).unwrap();
/// assert_eq!(t.assignment[&VarName::X(1, 1)], 4.into());
/// assert!(t.positivity_ok());
/// ```
pub fn transform_nearmiss(
    witness: &BTreeMap<VarName, BigInt>,
    n_max: usize,
    a: &[i64],
) -> Result<NearMissTransform, SystemError> {
    let nearmiss = gen_nearmiss_kernel(n_max, a)?;
    let residuals = nearmiss.evaluate(witness)?;
    for (row, value) in residuals.iter().enumerate() {
        if !value.is_zero() {
            return Err(SystemError::NotAKernelWitness {
                row,
                value: value.clone(),
            });
        }
    }

    let y = witness[&VarName::Y].clone();
    let mut assignment = BTreeMap::new();
    assignment.insert(VarName::Y, y.clone());
    for n in 1..=n_max {
        let a_n = BigInt::from(a[n - 1]);
        for i in 1..=n {
            let xt = witness
                .get(&VarName::XTilde(n, i))
                .ok_or(SystemError::MissingVariable(VarName::XTilde(n, i)))?;
            assignment.insert(VarName::X(n, i), xt - &a_n * &y);
        }
    }

    let image = gen_dh_truncation(n_max, a)?;
    let image_values = image.evaluate(&assignment)?;
    let nonpositive = image
        .variables
        .iter()
        .filter(|v| assignment[v] < BigInt::from(1))
        .copied()
        .collect();

    Ok(NearMissTransform {
        assignment,
        image_values,
        nonpositive,
    })
}
