//! Exact combinatorics of toric fans and their Stanley–Reisner complexes,
//! bounded-multiplicity polynomial systems, confluent Vandermonde rank
//! certification and closed-form stability bounds for spaces of rational
//! curves on toric varieties.

pub mod complex;
pub mod error;
pub mod fan;
pub mod gauss;
pub mod hermite;
pub mod intmat;
pub mod lp;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod stability;
pub mod system;

pub use complex::{complex_power, primitive_collections, r_min, underlying_complex, Face, SimplicialComplex};
pub use error::{Error, Result};
pub use fan::{builtin_fan, BuiltinFan, Cone, DegreeVector, Fan, LatticeVector};
pub use gauss::GaussRat;
pub use poly::RationalPoly;
pub use system::{is_member, stabilize, PolySystem, RootPoly};
