//! Synthetic depth camera: per-pixel sphere tracing against the scene SDF.

use nalgebra::Vector3;

use crate::frame::DepthFrameRaw;
use crate::geometry::{CameraIntrinsics, Pose};
use crate::sim::scene::Scene;
use crate::sim::SimError;

/// Distance below which a march counts as a surface hit, in meters.
pub const HIT_EPSILON: f64 = 1e-4;
/// Maximum sphere-tracing steps per ray before declaring a miss.
pub const MAX_STEPS: usize = 128;
/// Maximum ray length in meters before declaring a miss.
pub const MAX_RANGE: f64 = 8.0;

/// Renders a depth frame from `pose` by sphere tracing each pixel's ray.
///
/// Depth is the camera-frame z of the hit point in millimeters, rounded to
/// the nearest integer; misses (step or range exhaustion, or rays leaving
/// the scene bounds) produce 0.
pub fn render_depth(
    scene: &Scene,
    pose: &Pose,
    intr: &CameraIntrinsics,
) -> Result<DepthFrameRaw, SimError> {
    if scene.sdf(&pose.translation) <= 0.0 {
        return Err(SimError::CameraInsideGeometry);
    }
    let mut data = vec![0u16; intr.width * intr.height];
    for v in 0..intr.height {
        for u in 0..intr.width {
            let dir_cam = intr.ray_direction(u as f64, v as f64);
            let dir_world = pose.rotation * dir_cam;
            if let Some(t) = march(scene, &pose.translation, &dir_world) {
                // z-depth, not ray length: scale by the camera-frame z
                // component of the unit ray.
                let depth_m = t * dir_cam.z;
                let mm = (depth_m * 1000.0).round();
                if mm >= 1.0 && mm <= f64::from(u16::MAX) {
                    data[v * intr.width + u] = mm as u16;
                }
            }
        }
    }
    Ok(DepthFrameRaw::new(intr.width, intr.height, data))
}

fn march(scene: &Scene, origin: &Vector3<f64>, dir: &Vector3<f64>) -> Option<f64> {
    let mut t = 0.0;
    for _ in 0..MAX_STEPS {
        let p = origin + dir * t;
        if !scene.bounds.contains(&p) {
            return None;
        }
        let d = scene.sdf(&p);
        if d < HIT_EPSILON {
            return Some(t);
        }
        t += d;
        if t > MAX_RANGE {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::scene::{Bounds, Primitive};
    use approx::assert_relative_eq;

    fn wall_scene() -> Scene {
        Scene {
            primitives: vec![Primitive::Plane {
                point: [0.0, 0.0, 2.0],
                normal: [0.0, 0.0, -1.0],
            }],
            bounds: Bounds {
                min: [-5.0, -5.0, -1.0],
                max: [5.0, 5.0, 3.0],
            },
        }
    }

    fn test_intrinsics() -> CameraIntrinsics {
        CameraIntrinsics::new(277.0, 277.0, 159.5, 119.5, 320, 240)
    }

    #[test]
    fn principal_pixel_hits_wall_at_2000mm() {
        let frame = render_depth(&wall_scene(), &Pose::identity(), &test_intrinsics()).unwrap();
        // cx = 159.5 lies between pixels 159 and 160; both rays are a tiny
        // bit off-axis but still round to 2000 mm.
        assert_eq!(frame.at(159, 119), 2000);
        assert_eq!(frame.at(160, 120), 2000);
    }

    #[test]
    fn off_center_pixel_reports_z_depth_not_ray_length() {
        let intr = test_intrinsics();
        let frame = render_depth(&wall_scene(), &Pose::identity(), &intr).unwrap();
        // Analytic oracle: a ray through pixel (u, v) hits the plane z = 2
        // at camera z exactly 2, whatever the ray length is.
        for (u, v) in [(0usize, 0usize), (40, 200), (310, 7)] {
            assert_eq!(frame.at(u, v), 2000, "pixel ({u}, {v})");
            let dir = intr.ray_direction(u as f64, v as f64);
            let ray_len = 2.0 / dir.z;
            assert!(ray_len > 2.0, "oblique ray must be longer than its z-depth");
        }
    }

    #[test]
    fn ray_leaving_bounds_is_invalid() {
        // A wall covering only half the view: rays past its edge leave the
        // scene bounds and must produce 0.
        let scene = Scene {
            primitives: vec![Primitive::Box {
                center: [-2.0, 0.0, 2.0],
                half_extents: [2.0, 5.0, 0.2],
            }],
            bounds: Bounds {
                min: [-5.0, -6.0, -1.0],
                max: [5.0, 6.0, 4.0],
            },
        };
        let frame = render_depth(&scene, &Pose::identity(), &test_intrinsics()).unwrap();
        assert_eq!(frame.at(0, 120), 1800); // box front face at z = 1.8
        assert_eq!(frame.at(319, 120), 0); // past the box edge
    }

    #[test]
    fn camera_inside_geometry_is_rejected() {
        let scene = Scene {
            primitives: vec![Primitive::Sphere {
                center: [0.0; 3],
                radius: 1.0,
            }],
            bounds: Bounds {
                min: [-2.0; 3],
                max: [2.0; 3],
            },
        };
        let err = render_depth(&scene, &Pose::identity(), &test_intrinsics());
        assert!(matches!(err, Err(SimError::CameraInsideGeometry)));
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render_depth(&wall_scene(), &Pose::identity(), &test_intrinsics()).unwrap();
        let b = render_depth(&wall_scene(), &Pose::identity(), &test_intrinsics()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hit_points_lie_on_the_surface() {
        // Back-project every valid pixel and check it is within the hit
        // tolerance plus millimeter rounding of the surface.
        let scene = Scene {
            primitives: vec![
                Primitive::Plane {
                    point: [0.0, 0.0, 2.0],
                    normal: [0.0, 0.0, -1.0],
                },
                Primitive::Sphere {
                    center: [0.3, 0.0, 1.2],
                    radius: 0.4,
                },
            ],
            bounds: Bounds {
                min: [-5.0, -5.0, -1.0],
                max: [5.0, 5.0, 3.0],
            },
        };
        let intr = test_intrinsics();
        let pose = Pose::identity();
        let frame = render_depth(&scene, &pose, &intr).unwrap();
        let mut checked = 0;
        for v in (0..intr.height).step_by(7) {
            for u in (0..intr.width).step_by(7) {
                let mm = frame.at(u, v);
                if mm == 0 {
                    continue;
                }
                let p_cam = intr.backproject(u as f64, v as f64, f64::from(mm) / 1000.0);
                let p_world = pose.transform_point(&p_cam);
                assert!(
                    scene.sdf(&p_world).abs() < 2e-3,
                    "pixel ({u}, {v}) off surface by {}",
                    scene.sdf(&p_world)
                );
                checked += 1;
            }
        }
        assert!(checked > 500);
    }
}
