//! Independent verification engines: adaptive quadrature, region membership
//! predicates and a seeded Monte Carlo volume estimator.

pub mod monte_carlo;
pub mod quadrature;
pub mod region;

pub use monte_carlo::{mc_volume, BoundingBox, CounterRng, McEstimate};
pub use quadrature::{integrate_adaptive, QuadratureResult};
pub use region::{
    cone_cylinder_box, cone_sphere_box, in_cone_cylinder_region, in_cone_sphere_region, Point3,
};
