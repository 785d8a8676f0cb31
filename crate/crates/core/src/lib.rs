//! Geometric invariants of the smooth dual of p-adic `GL(n)`.
//!
//! - [`scalars`]: exact points `q^a e^{2 pi i t}` of `C^x`
//! - [`parameters`]: L-parameters, orbits under unramified twisting, and
//!   their classification predicates
//! - [`bernstein`]: components by exponents, strata of the extended quotient,
//!   and the orbit/stratum bijection
//! - [`cohomology`]: invariant exterior-algebra dimensions and periodic cyclic
//!   homology dimensions
//! - [`qproj`]: the q-projection and exact fiber enumeration
//! - [`retract`]: the tempering retraction and its homotopy
//! - [`symfun`]: elementary-symmetric coordinates on `Sym^n C^x`
//!
//! ```
//! use smooth_dual::{Component, QScalar, Rational, SymPoint};
//! use smooth_dual::cohomology::hp_dims;
//! use smooth_dual::qproj::fiber;
//!
//! # fn main() -> smooth_dual::Result<()> {
//! let c = Component::from_exponents(&[3])?;
//! let dims = hp_dims(&c, 20)?;
//! assert_eq!((dims.hp0, dims.hp1, dims.lemma22), (4, 4, 4));
//!
//! let q = |a| QScalar::q_power(Rational::from_integer(a));
//! let y = SymPoint::new(vec![vec![q(-1), q(0), q(1)]]);
//! assert_eq!(fiber(&y, &c)?.len(), 4);
//! # Ok(())
//! # }
//! ```

pub mod bernstein;
pub mod cohomology;
mod error;
pub mod parameters;
pub mod qproj;
pub mod regression;
pub mod retract;
pub mod scalars;
pub mod symfun;

pub use bernstein::{Block, Component, CycleType, Partition, Stratum};
pub use cohomology::{HpDims, PermutationAction, PoincarePolynomial};
pub use error::{Error, Result};
pub use parameters::{InertialClass, LParameter, OrbitDescriptor, Spin, Summand, WeilLabel};
pub use qproj::{QProjection, StratumPoint, SymPoint};
pub use scalars::{QScalar, Rational};
pub use symfun::SymCoords;
