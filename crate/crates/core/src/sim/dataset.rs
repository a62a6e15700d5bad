//! On-disk dataset layout and the readers/writers for it.
//!
//! A dataset directory contains:
//!
//! * `dataset.json` - manifest: frame count, intrinsics, scene bounds.
//! * `depth_NNNNNN.pgm` - one binary PGM (P5, maxval 65535, big-endian
//!   16-bit samples, millimeters) per frame, zero-padded index names.
//! * `groundtruth.txt` - optional; one line per frame:
//!   `frame_index tx ty tz qx qy qz qw` (meters, unit quaternion), with
//!   `#` comment lines.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::frame::DepthFrameRaw;
use crate::geometry::{CameraIntrinsics, Pose};
use crate::sim::scene::Bounds;
use crate::sim::SimError;

pub const GROUND_TRUTH_FILE: &str = "groundtruth.txt";
pub const MANIFEST_FILE: &str = "dataset.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub frame_count: usize,
    pub intrinsics: CameraIntrinsics,
    /// Bounding box of the scene the dataset was rendered from; used to
    /// center the reconstruction volume.
    pub scene_bounds: Option<Bounds>,
}

/// A depth sequence with optional ground truth, fully resident in memory.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub intrinsics: CameraIntrinsics,
    pub frames: Vec<DepthFrameRaw>,
    pub ground_truth: Option<Vec<Pose>>,
    pub scene_bounds: Option<Bounds>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn write(&self, dir: &Path) -> Result<(), SimError> {
        if let Some(gt) = &self.ground_truth {
            if gt.len() != self.frames.len() {
                return Err(SimError::LengthMismatch {
                    frames: self.frames.len(),
                    poses: gt.len(),
                });
            }
        }
        fs::create_dir_all(dir)?;
        let manifest = DatasetManifest {
            frame_count: self.frames.len(),
            intrinsics: self.intrinsics,
            scene_bounds: self.scene_bounds,
        };
        fs::write(
            dir.join(MANIFEST_FILE),
            serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
        )?;
        for (i, frame) in self.frames.iter().enumerate() {
            write_pgm(&depth_path(dir, i), frame)?;
        }
        if let Some(gt) = &self.ground_truth {
            write_trajectory(&dir.join(GROUND_TRUTH_FILE), gt)?;
        }
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Dataset, SimError> {
        let manifest_path = dir.join(MANIFEST_FILE);
        if !manifest_path.exists() {
            return Err(SimError::MissingFile(manifest_path));
        }
        let manifest: DatasetManifest = serde_json::from_str(&fs::read_to_string(&manifest_path)?)
            .map_err(|e| SimError::InvalidSpec(format!("bad manifest: {e}")))?;
        let mut frames = Vec::with_capacity(manifest.frame_count);
        for i in 0..manifest.frame_count {
            let path = depth_path(dir, i);
            if !path.exists() {
                return Err(SimError::MissingFile(path));
            }
            let frame = read_pgm(&path)?;
            if frame.width != manifest.intrinsics.width || frame.height != manifest.intrinsics.height
            {
                return Err(SimError::DimensionMismatch {
                    path,
                    expected: (manifest.intrinsics.width, manifest.intrinsics.height),
                    found: (frame.width, frame.height),
                });
            }
            frames.push(frame);
        }
        let gt_path = dir.join(GROUND_TRUTH_FILE);
        let ground_truth = if gt_path.exists() {
            let poses = read_trajectory(&gt_path)?;
            if poses.len() != frames.len() {
                return Err(SimError::LengthMismatch {
                    frames: frames.len(),
                    poses: poses.len(),
                });
            }
            Some(poses)
        } else {
            None
        };
        Ok(Dataset {
            intrinsics: manifest.intrinsics,
            frames,
            ground_truth,
            scene_bounds: manifest.scene_bounds,
        })
    }
}

pub fn depth_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("depth_{index:06}.pgm"))
}

/// Writes a 16-bit big-endian binary PGM (P5, maxval 65535).
pub fn write_pgm(path: &Path, frame: &DepthFrameRaw) -> Result<(), SimError> {
    let mut bytes = Vec::with_capacity(32 + frame.data.len() * 2);
    bytes.extend_from_slice(format!("P5\n{} {}\n65535\n", frame.width, frame.height).as_bytes());
    for &sample in &frame.data {
        bytes.extend_from_slice(&sample.to_be_bytes());
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

pub fn read_pgm(path: &Path) -> Result<DepthFrameRaw, SimError> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .map_err(|_| SimError::MissingFile(path.to_path_buf()))?
        .read_to_end(&mut bytes)?;
    parse_pgm(&bytes).map_err(|detail| SimError::MalformedHeader {
        path: path.to_path_buf(),
        detail,
    })
}

fn parse_pgm(bytes: &[u8]) -> Result<DepthFrameRaw, String> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos).ok_or("missing magic number")?;
    if magic != b"P5" {
        return Err("not a P5 binary PGM".into());
    }
    let width: usize = parse_token(bytes, &mut pos, "width")?;
    let height: usize = parse_token(bytes, &mut pos, "height")?;
    let maxval: usize = parse_token(bytes, &mut pos, "maxval")?;
    if maxval != 65535 {
        return Err(format!("expected maxval 65535, found {maxval}"));
    }
    // Exactly one whitespace byte separates the header from the samples.
    pos += 1;
    let needed = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(2))
        .ok_or("image dimensions overflow")?;
    let rest = bytes.len().saturating_sub(pos);
    if rest < needed {
        return Err(format!("truncated pixel data: need {needed} bytes, found {rest}"));
    }
    let data = bytes[pos..pos + needed]
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok(DepthFrameRaw::new(width, height, data))
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    // Skip whitespace and '#' comment lines.
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start).then(|| &bytes[start..*pos])
}

fn parse_token(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize, String> {
    let token = next_token(bytes, pos).ok_or(format!("missing {what}"))?;
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or(format!("unparseable {what}"))
}

/// Writes one pose per line as `frame_index tx ty tz qx qy qz qw`. Floats
/// use the shortest representation that round-trips exactly.
pub fn write_trajectory(path: &Path, poses: &[Pose]) -> Result<(), SimError> {
    let mut out = String::from("# frame_index tx ty tz qx qy qz qw\n");
    for (i, pose) in poses.iter().enumerate() {
        let t = pose.translation;
        let q = pose.rotation_quaternion().into_inner();
        out.push_str(&format!(
            "{i} {} {} {} {} {} {} {}\n",
            t.x, t.y, t.z, q.i, q.j, q.k, q.w
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_trajectory(path: &Path) -> Result<Vec<Pose>, SimError> {
    let text = fs::read_to_string(path).map_err(|_| SimError::MissingFile(path.to_path_buf()))?;
    parse_trajectory(&text).map_err(|detail| SimError::MalformedHeader {
        path: path.to_path_buf(),
        detail,
    })
}

pub fn parse_trajectory(text: &str) -> Result<Vec<Pose>, String> {
    let mut poses = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(format!(
                "line {}: expected 8 fields, found {}",
                lineno + 1,
                fields.len()
            ));
        }
        let nums: Vec<f64> = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let quat = Quaternion::new(nums[6], nums[3], nums[4], nums[5]);
        if quat.norm() < 1e-9 {
            return Err(format!("line {}: zero quaternion", lineno + 1));
        }
        poses.push(Pose::from_quaternion(
            UnitQuaternion::from_quaternion(quat),
            Vector3::new(nums[0], nums[1], nums[2]),
        ));
    }
    Ok(poses)
}
