//! Exact symbolic verification for Lie conformal algebras.

pub mod cderiv;
pub mod classify;
pub mod cmodules;
pub mod coeff;
pub mod error;
pub mod lca;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod report;
pub mod solve;
pub mod suites;
pub mod sym;

pub use error::{Error, Result};
pub use lca::{ConformalAlgebra, Element, GenId};
pub use par::Exec;
pub use poly::{parse, parse_with, ParseContext, Poly, Q};
pub use report::{Check, Report, Status};
pub use sym::{Sym, Var};
