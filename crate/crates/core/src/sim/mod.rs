//! Synthetic scene simulator: SDF scenes, ground-truth trajectories, noisy
//! depth rendering, and dataset file I/O. Stands in for a real depth camera
//! so ground truth is always available.

pub mod dataset;
pub mod noise;
pub mod render;
pub mod scene;
pub mod trajectory;

use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::CameraIntrinsics;

pub use dataset::Dataset;
pub use noise::{apply_noise, NoiseModel};
pub use render::render_depth;
pub use scene::{Bounds, Primitive, Scene};
pub use trajectory::{Keyframe, Orientation, TrajectorySpec};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("camera position is inside scene geometry")]
    CameraInsideGeometry,
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("malformed file {path}: {detail}")]
    MalformedHeader { path: PathBuf, detail: String },
    #[error("{path}: expected {expected:?} pixels, found {found:?}")]
    DimensionMismatch {
        path: PathBuf,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("frame count {frames} does not match ground-truth count {poses}")]
    LengthMismatch { frames: usize, poses: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Desk-scale default camera: half Kinect resolution, ~47 degree vertical
/// field of view.
pub fn default_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics::new(277.0, 277.0, 159.5, 119.5, 320, 240)
}

/// Mild Kinect-flavored sensor noise.
pub fn default_noise(seed: u64) -> NoiseModel {
    NoiseModel {
        sigma0: 0.002,
        sigma1: 0.002,
        dropout_prob: 0.005,
        seed,
    }
}

/// Renders a full dataset: one noisy depth frame per interpolated pose.
pub fn generate_dataset(
    scene: &Scene,
    trajectory: &TrajectorySpec,
    noise: &NoiseModel,
    intrinsics: CameraIntrinsics,
) -> Result<Dataset, SimError> {
    trajectory.validate(Some(&scene.bounds))?;
    let poses = trajectory.interpolate()?;
    let mut frames = Vec::with_capacity(poses.len());
    for (i, pose) in poses.iter().enumerate() {
        let clean = render_depth(scene, pose, &intrinsics)?;
        frames.push(apply_noise(&clean, &noise.for_frame(i)));
    }
    Ok(Dataset {
        intrinsics,
        frames,
        ground_truth: Some(poses),
        scene_bounds: Some(scene.bounds),
    })
}
