//! A workbench for computational Ramsey theory at finite scale.
//!
//! The crate provides:
//!
//! - exact sparse integer matrices and a decision procedure for Rado's
//!   columns property ([`matrix`]);
//! - generators for the families of linear systems under study, as image
//!   systems (expressions to be monochromatic) or kernel systems
//!   (equations) ([`systems`]);
//! - finite-window set arithmetic, density proxies, and verifiers for the
//!   sumset lemmas ([`windows`]);
//! - an exhaustive search engine for partition regularity over `[1..N]`,
//!   with DIMACS CNF export for external SAT solvers ([`search`]);
//! - an executor that runs the constructive partition-regularity argument
//!   step by step against a concrete coloring ([`proof`]).
//!
//! ```
//! use rado::matrix::{columns_property, verify_certificate, SparseIntMatrix};
//!
//! // the Schur equation x + y = z as a single matrix row
//! let schur = SparseIntMatrix::from_dense_rows(&[vec![1, 1, -1]]);
//! let cert = columns_property(&schur).unwrap().expect("Schur has the columns property");
//! assert_eq!(cert.one_based(), vec![vec![1, 3], vec![2]]);
//! assert!(verify_certificate(&schur, &cert).unwrap());
//! ```

pub mod coloring;
pub mod matrix;
pub mod proof;
pub mod search;
pub mod systems;
pub mod windows;
