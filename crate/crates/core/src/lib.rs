//! Exact symbolic engine for the bicovariant differential calculus on GL_q(N).

pub mod expr;
pub mod hopfpair;
pub mod linalg;
pub mod lincomb;
pub mod ncalg;
pub mod qfield;
pub mod report;
pub mod rtensor;
pub mod suite;
pub mod wcalc;

pub use expr::{parse, Expr, ParseError};
pub use hopfpair::{AElem, DualElem, Functionals, PairingEngine};
pub use lincomb::{LinComb, Word};
pub use qfield::{FieldError, LaurentPoly, Rat, RatFunc};
pub use report::{Report, ReportEntry, Status, Witness};
pub use rtensor::{IndexedTensor, RBundle, StructureConstants};
pub use suite::{Config, Constant, Suite};
