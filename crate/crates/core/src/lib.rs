//! Exact computations with Q-tilde functions and the cohomology of the
//! Lagrangian Grassmannian, with the Thom polynomials of Lagrange and
//! Legendre singularities up to codimension 6.
//!
//! Everything is computed over the integers with arbitrary precision.
//! Polynomials in the Chern classes `c_1, c_2, ...` are [`SymPoly`] values;
//! [`qtilde`] builds the Q-tilde functions, [`basisconv`] changes basis,
//! [`schubert`] works in `H*(LG(n))` and [`thomtables`] holds the tables.

pub mod basisconv;
pub mod error;
pub mod exec;
pub mod exprio;
pub mod linalg;
pub mod partitions;
pub mod qtilde;
pub mod schubert;
pub mod symfunc;
pub mod thomtables;
pub mod wire;

pub use basisconv::{expand_in_qtilde, module_expand, ModuleExpansion, QExpansion};
pub use error::{Error, Result};
pub use exec::Exec;
pub use exprio::{elaborate, parse, Expr, ParseError, TPoly};
pub use partitions::{complement, enumerate_partitions, is_strict, Partition, StrictPartition};
pub use qtilde::{pfaffian, qtilde, qtilde_one, qtilde_pair, schur_q, SkewMatrix};
pub use schubert::{betti, integrate, multiply, pair, reduce, LGRing, SchubertClass};
pub use symfunc::{ChernSeries, SymPoly, XPoly};
pub use thomtables::{
    builtin_records, positivity_check, specialize, to_chern, verify_record, TExpansion, ThomRecord,
    VerificationReport,
};
