//! Energy-equality criteria for Navier–Stokes solutions with a singular set
//! of given dimension, in the plane of reciprocal exponents `x = 1/p`,
//! `y = 1/q` for the space `L^q_t L^p_x`.

pub mod alpha;
pub mod constraint;
pub mod criteria;
pub mod cutoff;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod point;
pub mod region;
pub mod scenario;
pub mod spectral;

pub use constraint::{ConstraintId, ConstraintSpec};
pub use criteria::closed_form::{CaseLabel, Membership, RegionModel};
pub use criteria::family::{check_at_alpha, constraint_family, AlphaCheck, ConstraintFamily};
pub use criteria::{final_verdict, type_i_verdict, Source, Status, TypeIKind, Verdict, Witness};
pub use error::{Error, Result};
pub use numeric::{Rational, Real};
pub use point::{Exponent, ExponentPoint, Point};
pub use scenario::{Scenario, SingularityKind};
