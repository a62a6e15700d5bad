//! Ground-truth camera trajectories: keyframes interpolated with linear
//! positions and spherical-linear rotations.

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::Pose;
use crate::sim::scene::Bounds;
use crate::sim::SimError;

/// Keyframe orientation, either an explicit quaternion or a look-at target.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Orientation {
    /// `[qx, qy, qz, qw]`, camera-to-world.
    Quaternion { quaternion: [f64; 4] },
    /// Aim the optical axis at a world point. `up` is the world direction
    /// mapped to image-up; it defaults to -y (the world is y-down).
    LookAt {
        look_at: [f64; 3],
        #[serde(default = "default_up")]
        up: [f64; 3],
    },
}

fn default_up() -> [f64; 3] {
    [0.0, -1.0, 0.0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Keyframe {
    pub position: [f64; 3],
    #[serde(flatten)]
    pub orientation: Orientation,
}

impl Keyframe {
    pub fn pose(&self) -> Result<Pose, SimError> {
        let position = Vector3::from(self.position);
        match &self.orientation {
            Orientation::Quaternion { quaternion: q } => {
                let quat = Quaternion::new(q[3], q[0], q[1], q[2]);
                if quat.norm() < 1e-9 {
                    return Err(SimError::InvalidSpec("zero quaternion in keyframe".into()));
                }
                Ok(Pose::from_quaternion(
                    UnitQuaternion::from_quaternion(quat),
                    position,
                ))
            }
            Orientation::LookAt { look_at, up } => {
                look_at_pose(&position, &Vector3::from(*look_at), &Vector3::from(*up))
            }
        }
    }
}

/// Builds a camera-to-world pose whose optical axis points from `eye`
/// toward `target`.
pub fn look_at_pose(
    eye: &Vector3<f64>,
    target: &Vector3<f64>,
    up: &Vector3<f64>,
) -> Result<Pose, SimError> {
    let forward = target - eye;
    if forward.norm() < 1e-9 {
        return Err(SimError::InvalidSpec("look_at target equals position".into()));
    }
    let z = forward.normalize();
    let down = -up;
    let x = down.cross(&z);
    if x.norm() < 1e-9 {
        return Err(SimError::InvalidSpec(
            "look_at direction parallel to up vector".into(),
        ));
    }
    let x = x.normalize();
    let y = z.cross(&x);
    Ok(Pose::new(
        nalgebra::Matrix3::from_columns(&[x, y, z]),
        *eye,
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub keyframes: Vec<Keyframe>,
    pub frame_count: usize,
}

impl TrajectorySpec {
    pub fn from_json(text: &str) -> Result<TrajectorySpec, SimError> {
        let spec: TrajectorySpec =
            serde_json::from_str(text).map_err(|e| SimError::InvalidSpec(e.to_string()))?;
        spec.validate(None)?;
        Ok(spec)
    }

    pub fn validate(&self, bounds: Option<&Bounds>) -> Result<(), SimError> {
        if self.frame_count < 2 {
            return Err(SimError::InvalidSpec("frame_count must be at least 2".into()));
        }
        if self.keyframes.is_empty() {
            return Err(SimError::InvalidSpec("trajectory needs keyframes".into()));
        }
        if let Some(bounds) = bounds {
            for (i, kf) in self.keyframes.iter().enumerate() {
                if !bounds.contains(&Vector3::from(kf.position)) {
                    return Err(SimError::InvalidSpec(format!(
                        "keyframe {i} lies outside the scene bounds"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Interpolates the keyframes into one pose per frame. Frame 0 is the
    /// first keyframe and the last frame is the last keyframe; keyframes
    /// are spaced uniformly in frame index.
    pub fn interpolate(&self) -> Result<Vec<Pose>, SimError> {
        self.validate(None)?;
        let poses: Vec<Pose> = self
            .keyframes
            .iter()
            .map(|kf| kf.pose())
            .collect::<Result<_, _>>()?;
        if poses.len() == 1 {
            return Ok(vec![poses[0].clone(); self.frame_count]);
        }
        let quats: Vec<UnitQuaternion<f64>> =
            poses.iter().map(|p| p.rotation_quaternion()).collect();
        let segments = (poses.len() - 1) as f64;
        let mut out = Vec::with_capacity(self.frame_count);
        for i in 0..self.frame_count {
            let s = i as f64 / (self.frame_count - 1) as f64;
            let u = s * segments;
            let seg = (u.floor() as usize).min(poses.len() - 2);
            let local = u - seg as f64;
            let pos = poses[seg].translation * (1.0 - local) + poses[seg + 1].translation * local;
            let rot = quats[seg].slerp(&quats[seg + 1], local);
            out.push(Pose::from_quaternion(rot, pos));
        }
        Ok(out)
    }
}
