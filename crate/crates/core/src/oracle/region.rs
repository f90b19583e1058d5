//! Point-membership tests for both solids, plus the canonical sampling boxes.

use crate::cone_cylinder::ConeCylinderParams;
use crate::cone_sphere::ConeSphereParams;
use crate::volume::cot;

use super::monte_carlo::BoundingBox;

pub type Point3 = [f64; 3];

/// Inside the unit cylinder, above `z = 0`, below the offset cone.
pub fn in_cone_cylinder_region(p: Point3, params: &ConeCylinderParams) -> bool {
    let [x, y, z] = p;
    let dx = x - params.k();
    x * x + y * y <= 1.0 && z >= 0.0 && z <= cot(params.alpha()) * (dx * dx + y * y).sqrt()
}

/// Inside the offset unit ball and inside the upward cone of half-angle α.
pub fn in_cone_sphere_region(p: Point3, params: &ConeSphereParams) -> bool {
    let [x, y, z] = p;
    let cx = x + params.k();
    cx * cx + y * y + z * z <= 1.0 && z >= 0.0 && z >= cot(params.alpha()) * (x * x + y * y).sqrt()
}

/// `[−1, 1]² × [0, cot α · (1 + k)]`: the cone's height over the disk peaks
/// at the far rim point `(−1, 0)`.
pub fn cone_cylinder_box(params: &ConeCylinderParams) -> BoundingBox {
    let height = cot(params.alpha()) * (1.0 + params.k());
    BoundingBox::new([-1.0, -1.0, 0.0], [1.0, 1.0, height])
}

/// `[−1 − k, 1 − k] × [−1, 1] × [0, 1]`.
pub fn cone_sphere_box(params: &ConeSphereParams) -> BoundingBox {
    let k = params.k();
    BoundingBox::new([-1.0 - k, -1.0, 0.0], [1.0 - k, 1.0, 1.0])
}
