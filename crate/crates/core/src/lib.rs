//! Exact q-series engine: truncated power series, eta quotients, bracket
//! products, zero-sum lattice theta sums, and a catalog of coefficient-level
//! identity and nonnegativity checks.

pub mod bivar;
pub mod bracket;
pub mod cyclo;
pub mod dsl;
pub mod error;
pub mod lattice;
pub mod partitions;
pub mod products;
pub mod series;
pub mod verify;

pub use bivar::{Coeff, Mode, ScanVerdict, Specialized, ZBound, ZTarget, ZqSeries};
pub use bracket::{BracketSpec, Monomial, PochFactor};
pub use cyclo::{cyclotomic_poly, CycInt, CycSeries};
pub use error::{Error, Result};
pub use series::{euler_e, euler_e_at, pochhammer_inf, QSeries};
