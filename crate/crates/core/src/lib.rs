//! Exact workbench for formal group laws, formal group algebras over the
//! weight lattices of types B_n and D_n, their Weyl invariants, and the
//! integer-lattice exponents attached to their graded pieces.

pub mod error;
pub mod exactnum;
pub mod fga;
pub mod fgl;
pub mod lattice;
pub mod report;
pub mod rootdata;
pub mod series;

pub use error::{Error, Result};
pub use exactnum::{two_adic_valuation, Coeff, CoeffRing, Dyadic, ParamPoly};
pub use fga::{FgaContext, FgaElement, ThetaProduct};
pub use fgl::{FglKind, FormalGroupLaw};
pub use lattice::{ExponentReport, IntLattice, Tau};
pub use report::{Instance, Status, VerificationReport};
pub use rootdata::{Constants, Family, HalfVector, RootSystem, Weight, WeylElement};
pub use series::{Monomial, TruncSeries};
