//! Optimal rank-1 approximation of real matrices in the Chebyshev (entrywise
//! maximum) norm.
//!
//! For a matrix `A` whose rows and columns each have a unique entry of
//! largest modulus, alternating minimization started from a `+-1` vector
//! converges to an error that depends only on the starting sign pattern, and
//! the best such error over all patterns is the distance from `A` to the
//! rank-1 matrices. [`globalopt::optimize`] searches the patterns while
//! discarding whole families of them with two-dimensional alternance
//! certificates.
//!
//! ```
//! use chebrank::globalopt::{optimize, OptimizeOptions};
//! use chebrank::matcore::DenseMatrix;
//!
//! let a = DenseMatrix::identity(2).unwrap();
//! let res = optimize(&a, &OptimizeOptions::default()).unwrap();
//! assert_eq!(res.error, 0.5);
//! ```

pub mod alternance;
pub mod altmin;
pub mod bench;
pub mod chebline;
pub mod error;
pub mod globalopt;
pub mod io;
pub mod matcore;
pub mod oracle;
pub mod random;
pub mod report;
pub mod signgraph;

pub use error::{Error, Result};
