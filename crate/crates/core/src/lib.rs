//! Volumes of two solids bounded by cones:
//!
//! * the part of the unit cylinder above `z = 0` and below a cone whose vertex
//!   is shifted by `k` along x ([`cone_cylinder`]);
//! * the part of a unit ball shifted by `−k` along x that lies inside an
//!   upright cone ([`cone_sphere`]).
//!
//! Each volume is available through several independent routes (closed form,
//! elliptic-integral reductions, series, direct quadrature, Monte Carlo) so
//! that they can check one another.

pub mod cli;
pub mod cone_cylinder;
pub mod cone_sphere;
pub mod dispatch;
pub mod elliptic;
pub mod error;
pub mod oracle;
pub mod volume;

pub use cone_cylinder::ConeCylinderParams;
pub use cone_sphere::{ConeSphereParams, SeriesBreakdown};
pub use dispatch::{evaluate, EvalOptions, Evaluation, Problem};
pub use elliptic::{AgmConfig, Modulus};
pub use error::{Error, Result};
pub use oracle::{McEstimate, QuadratureResult};
pub use volume::{Method, VolumeResult};
