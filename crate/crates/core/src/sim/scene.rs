//! Signed-distance scenes built from boxes, half-space walls, and spheres.
//!
//! The scene distance at a point is the minimum over all primitives:
//! negative inside solid matter, positive in free space.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::sim::SimError;

/// One solid primitive. Coordinates are meters in the world frame
/// (x right, y down, z forward, matching the camera at identity pose).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    /// Axis-aligned solid box.
    Box {
        center: [f64; 3],
        half_extents: [f64; 3],
    },
    /// Half-space wall: solid behind the plane, free space on the side the
    /// unit normal points to.
    Plane { point: [f64; 3], normal: [f64; 3] },
    Sphere { center: [f64; 3], radius: f64 },
}

impl Primitive {
    pub fn sdf(&self, p: &Vector3<f64>) -> f64 {
        match self {
            Primitive::Box {
                center,
                half_extents,
            } => {
                let c = Vector3::from(*center);
                let h = Vector3::from(*half_extents);
                let d = (p - c).abs() - h;
                let outside = d.map(|x| x.max(0.0)).norm();
                let inside = d.x.max(d.y).max(d.z).min(0.0);
                outside + inside
            }
            Primitive::Plane { point, normal } => {
                let n = Vector3::from(*normal);
                (p - Vector3::from(*point)).dot(&n)
            }
            Primitive::Sphere { center, radius } => (p - Vector3::from(*center)).norm() - radius,
        }
    }
}

/// Axis-aligned bounding box of the scene, in meters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Bounds {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Bounds {
    pub fn contains(&self, p: &Vector3<f64>) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn center(&self) -> Vector3<f64> {
        (Vector3::from(self.min) + Vector3::from(self.max)) / 2.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scene {
    pub primitives: Vec<Primitive>,
    pub bounds: Bounds,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene, SimError> {
        let scene: Scene =
            serde_json::from_str(text).map_err(|e| SimError::InvalidSpec(e.to_string()))?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.primitives.is_empty() {
            return Err(SimError::InvalidSpec(
                "scene needs at least one primitive".into(),
            ));
        }
        for i in 0..3 {
            if self.bounds.min[i] >= self.bounds.max[i] {
                return Err(SimError::InvalidSpec("degenerate scene bounds".into()));
            }
        }
        if let Some(p) = self.primitives.iter().find_map(|p| match p {
            Primitive::Plane { normal, .. } => {
                let n = Vector3::from(*normal).norm();
                ((n - 1.0).abs() > 1e-6).then_some("plane normal must be unit length")
            }
            Primitive::Sphere { radius, .. } => (*radius <= 0.0).then_some("sphere radius must be positive"),
            Primitive::Box { half_extents, .. } => half_extents
                .iter()
                .any(|&h| h <= 0.0)
                .then_some("box half extents must be positive"),
        }) {
            return Err(SimError::InvalidSpec(p.into()));
        }
        Ok(())
    }

    /// Signed distance to the nearest surface: exact per primitive, combined
    /// by minimum.
    pub fn sdf(&self, p: &Vector3<f64>) -> f64 {
        self.primitives
            .iter()
            .map(|prim| prim.sdf(p))
            .fold(f64::INFINITY, f64::min)
    }
}
