//! Rigid-body math and the camera model shared by the whole pipeline.
//!
//! Conventions, used everywhere without exception:
//!
//! * [`Pose`] maps camera coordinates to world coordinates (camera-to-world).
//! * Camera frame: x right, y down, z forward (depth is camera-frame z).
//! * Composition is a left multiplication: `a.compose(&t)` equals the
//!   homogeneous product `T * A`, i.e. `t` is applied *after* `a`.
//! * Rotations are stored as 3x3 matrices; quaternions appear only in
//!   trajectory file I/O.

use nalgebra::{Matrix3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

/// Rigid-body camera pose: rotation plus translation, camera-to-world.
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

/// Relative rigid-body motion between two poses. Same layout as [`Pose`],
/// kept as a separate type so absolute and relative quantities cannot be
/// mixed up silently.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

/// Six-vector increment used by the ICP solver: linear part in meters,
/// angular part in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Twist {
    pub linear: Vector3<f64>,
    pub angular: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Pose {
            rotation,
            translation,
        }
    }

    /// Applies `t` after `self`: the homogeneous matrix product `T * Self`.
    pub fn compose(&self, t: &Transform) -> Pose {
        Pose {
            rotation: t.rotation * self.rotation,
            translation: t.rotation * self.translation + t.translation,
        }
    }

    /// The transform undoing this pose: `self.compose(&self.inverse())` is
    /// the identity.
    pub fn inverse(&self) -> Transform {
        let rt = self.rotation.transpose();
        Transform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// Relative motion from `prev` to `self`, so that
    /// `prev.compose(&delta) == self`.
    pub fn delta_from(&self, prev: &Pose) -> Transform {
        let prev_inv = prev.inverse();
        Transform {
            rotation: self.rotation * prev_inv.rotation,
            translation: self.rotation * prev_inv.translation + self.translation,
        }
    }

    /// Maps a point from camera coordinates to world coordinates.
    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// Re-projects the rotation onto the orthonormal group. Composition
    /// chains drift by roughly one ulp per product; call this when a chain
    /// grows very long.
    pub fn orthonormalized(&self) -> Pose {
        Pose {
            rotation: orthonormalize(&self.rotation),
            translation: self.translation,
        }
    }

    pub fn rotation_quaternion(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_matrix(&self.rotation)
    }

    pub fn from_quaternion(q: UnitQuaternion<f64>, translation: Vector3<f64>) -> Pose {
        Pose {
            rotation: q.to_rotation_matrix().into_inner(),
            translation,
        }
    }
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Speed proxy of this inter-frame motion: the Euclidean norm of the
    /// translation component, in meters per frame. Rotation is deliberately
    /// excluded; rotational speed is thresholded separately by the
    /// controller.
    pub fn velocity(&self) -> f64 {
        self.translation.norm()
    }

    /// Rotation angle in radians, in `[0, pi]`.
    pub fn rotation_angle(&self) -> f64 {
        let c = (self.rotation.trace() - 1.0) / 2.0;
        c.clamp(-1.0, 1.0).acos()
    }

    pub fn inverse(&self) -> Transform {
        let rt = self.rotation.transpose();
        Transform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// `t` applied after `self`, as a relative motion.
    pub fn compose(&self, t: &Transform) -> Transform {
        Transform {
            rotation: t.rotation * self.rotation,
            translation: t.rotation * self.translation + t.translation,
        }
    }
}

impl Twist {
    pub fn zero() -> Self {
        Twist {
            linear: Vector3::zeros(),
            angular: Vector3::zeros(),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.linear.norm_squared() + self.angular.norm_squared()
    }

    /// Exponential map onto a rigid-body transform.
    ///
    /// The rotation is the matrix exponential of the angular skew matrix
    /// (Rodrigues); the translation is coupled through the usual left
    /// Jacobian so that the result matches the exponential of the 4x4
    /// twist matrix.
    pub fn exp(&self) -> Transform {
        let theta_sq = self.angular.norm_squared();
        let k = skew(&self.angular);
        let k2 = k * k;

        // Series coefficients a = sin t / t, b = (1 - cos t) / t^2,
        // c = (t - sin t) / t^3, with Taylor fallbacks near zero.
        let (a, b, c) = if theta_sq < 1e-12 {
            (
                1.0 - theta_sq / 6.0,
                0.5 - theta_sq / 24.0,
                1.0 / 6.0 - theta_sq / 120.0,
            )
        } else {
            let theta = theta_sq.sqrt();
            (
                theta.sin() / theta,
                (1.0 - theta.cos()) / theta_sq,
                (theta - theta.sin()) / (theta_sq * theta),
            )
        };

        let rotation = Matrix3::identity() + k * a + k2 * b;
        let v = Matrix3::identity() + k * b + k2 * c;
        Transform {
            rotation,
            translation: v * self.linear,
        }
    }
}

/// Skew-symmetric cross-product matrix of `v`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Gram-Schmidt re-orthonormalization preserving the first column direction.
fn orthonormalize(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c0 = m.column(0).normalize();
    let c1_raw = m.column(1).into_owned();
    let c1 = (c1_raw - c0 * c0.dot(&c1_raw)).normalize();
    let c2 = c0.cross(&c1);
    Matrix3::from_columns(&[c0, c1, c2])
}

/// Pinhole camera model. `fx`, `fy`, `cx`, `cy` are in pixels; a pixel
/// `(u, v)` has its sample position exactly at coordinate `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: usize, height: usize) -> Self {
        assert!(fx > 0.0 && fy > 0.0, "focal lengths must be positive");
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        CameraIntrinsics {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        }
    }

    /// Intrinsics of the same camera after downsampling by `factor`
    /// (all pixel quantities divide by the factor).
    pub fn scaled(&self, factor: u32) -> Self {
        let f = f64::from(factor);
        CameraIntrinsics {
            fx: self.fx / f,
            fy: self.fy / f,
            cx: self.cx / f,
            cy: self.cy / f,
            width: self.width / factor as usize,
            height: self.height / factor as usize,
        }
    }

    /// Projects a camera-frame point to pixel coordinates. The caller is
    /// responsible for checking `p.z > 0` and image bounds.
    pub fn project(&self, p: &Vector3<f64>) -> (f64, f64) {
        (
            self.fx * p.x / p.z + self.cx,
            self.fy * p.y / p.z + self.cy,
        )
    }

    /// Back-projects pixel `(u, v)` at camera-frame depth `z` (meters).
    pub fn backproject(&self, u: f64, v: f64, z: f64) -> Vector3<f64> {
        Vector3::new((u - self.cx) / self.fx * z, (v - self.cy) / self.fy * z, z)
    }

    /// Unit ray direction through pixel `(u, v)`, in the camera frame.
    pub fn ray_direction(&self, u: f64, v: f64) -> Vector3<f64> {
        Vector3::new((u - self.cx) / self.fx, (v - self.cy) / self.fy, 1.0).normalize()
    }
}
