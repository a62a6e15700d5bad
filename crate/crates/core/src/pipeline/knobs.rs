//! The approximation control surface of the pipeline.

use serde::{Deserialize, Serialize};

/// Number of image-pyramid levels used by tracking.
pub const PYRAMID_LEVELS: usize = 3;

/// All algorithmic parameters that trade accuracy for compute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnobSettings {
    /// Compute size ratio: depth-frame downsampling factor, one of
    /// {1, 2, 4, 8}.
    pub csr: u32,
    /// Early-exit bound on the squared norm of the incremental ICP twist.
    pub icp_threshold: f64,
    /// Per-level ICP iteration caps, finest level first.
    pub pd: [u32; PYRAMID_LEVELS],
    /// Tracking rate in frames (1 = track every frame).
    pub tr: u32,
    /// Integration rate in frames (1 = integrate every frame).
    pub ir: u32,
    /// Voxels per axis of the reconstruction volume.
    pub vr: usize,
    /// Truncation distance of the volume, meters.
    pub mu: f64,
}

impl KnobSettings {
    /// The most accurate configuration at desk scale.
    pub fn accurate(vr: usize, mu: f64) -> Self {
        KnobSettings {
            csr: 1,
            icp_threshold: 1e-8,
            pd: [10, 5, 4],
            tr: 1,
            ir: 1,
            vr,
            mu,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if ![1, 2, 4, 8].contains(&self.csr) {
            return Err(format!("csr must be one of 1, 2, 4, 8; found {}", self.csr));
        }
        if self.pd.iter().any(|&p| p < 1) {
            return Err("pyramid iteration caps must be at least 1".into());
        }
        if self.mu <= 0.0 {
            return Err("mu must be positive".into());
        }
        if self.vr < 8 {
            return Err("vr must be at least 8".into());
        }
        if self.icp_threshold < 0.0 {
            return Err("icp threshold must be non-negative".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accurate_settings_validate() {
        assert!(KnobSettings::accurate(64, 0.1).validate().is_ok());
    }

    #[test]
    fn bad_csr_rejected() {
        let mut k = KnobSettings::accurate(64, 0.1);
        k.csr = 3;
        assert!(k.validate().is_err());
    }
}
