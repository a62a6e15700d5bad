//! Depth preprocessing: millimeter-to-meter normalization, resolution
//! reduction by stride subsampling, and an edge-preserving bilateral filter.

use crate::frame::{DepthFrame, DepthFrameRaw};
use crate::pipeline::PipelineError;

/// Bilateral filter window radius in pixels.
pub const FILTER_RADIUS: i32 = 2;
/// Spatial kernel standard deviation, pixels.
pub const SIGMA_SPATIAL: f32 = 2.0;
/// Range kernel standard deviation, meters.
pub const SIGMA_RANGE: f32 = 0.1;

/// Converts a raw frame to meters, subsamples it by the compute size ratio
/// (keeping pixel `(csr*i, csr*j)`), and bilateral-filters the result over
/// valid pixels only. Invalid pixels stay invalid.
pub fn preprocess(raw: &DepthFrameRaw, csr: u32) -> Result<DepthFrame, PipelineError> {
    let csr = csr as usize;
    if raw.width % csr != 0 || raw.height % csr != 0 {
        return Err(PipelineError::IndivisibleDimensions {
            width: raw.width,
            height: raw.height,
            csr: csr as u32,
        });
    }
    let width = raw.width / csr;
    let height = raw.height / csr;
    let mut meters = vec![0.0f32; width * height];
    for v in 0..height {
        for u in 0..width {
            let sample = raw.at(u * csr, v * csr);
            if sample > 0 {
                meters[v * width + u] = f32::from(sample) / 1000.0;
            }
        }
    }
    let subsampled = DepthFrame::new(width, height, meters);
    Ok(bilateral(&subsampled))
}

fn bilateral(frame: &DepthFrame) -> DepthFrame {
    let (w, h) = (frame.width as i32, frame.height as i32);
    let spatial = spatial_kernel();
    let inv_2sr2 = 1.0 / (2.0 * SIGMA_RANGE * SIGMA_RANGE);
    let mut out = vec![0.0f32; frame.data.len()];
    for v in 0..h {
        for u in 0..w {
            let center = frame.data[(v * w + u) as usize];
            if center <= 0.0 {
                continue;
            }
            let mut weight_sum = 0.0f32;
            let mut value_sum = 0.0f32;
            for dv in -FILTER_RADIUS..=FILTER_RADIUS {
                let vv = v + dv;
                if vv < 0 || vv >= h {
                    continue;
                }
                for du in -FILTER_RADIUS..=FILTER_RADIUS {
                    let uu = u + du;
                    if uu < 0 || uu >= w {
                        continue;
                    }
                    let sample = frame.data[(vv * w + uu) as usize];
                    if sample <= 0.0 {
                        continue;
                    }
                    let diff = sample - center;
                    let weight = spatial
                        [((dv + FILTER_RADIUS) * (2 * FILTER_RADIUS + 1) + du + FILTER_RADIUS)
                            as usize]
                        * (-diff * diff * inv_2sr2).exp();
                    weight_sum += weight;
                    value_sum += weight * sample;
                }
            }
            out[(v * w + u) as usize] = value_sum / weight_sum;
        }
    }
    DepthFrame::new(frame.width, frame.height, out)
}

fn spatial_kernel() -> Vec<f32> {
    let side = 2 * FILTER_RADIUS + 1;
    let inv_2ss2 = 1.0 / (2.0 * SIGMA_SPATIAL * SIGMA_SPATIAL);
    let mut kernel = Vec::with_capacity((side * side) as usize);
    for dv in -FILTER_RADIUS..=FILTER_RADIUS {
        for du in -FILTER_RADIUS..=FILTER_RADIUS {
            kernel.push((-((du * du + dv * dv) as f32) * inv_2ss2).exp());
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_frame_stays_constant() {
        let raw = DepthFrameRaw::filled(32, 16, 2000);
        let out = preprocess(&raw, 1).unwrap();
        for &d in &out.data {
            assert!((d - 2.0).abs() < 1e-6, "expected 2.0 m, got {d}");
        }
    }

    #[test]
    fn csr_reduces_shape() {
        let raw = DepthFrameRaw::filled(320, 240, 1500);
        let out = preprocess(&raw, 4).unwrap();
        assert_eq!((out.width, out.height), (80, 60));
    }

    #[test]
    fn indivisible_dimensions_rejected() {
        let raw = DepthFrameRaw::filled(30, 20, 1500);
        assert!(matches!(
            preprocess(&raw, 4),
            Err(PipelineError::IndivisibleDimensions { .. })
        ));
    }

    #[test]
    fn subsampling_picks_stride_pixels() {
        let mut raw = DepthFrameRaw::filled(8, 8, 1000);
        raw.data[0] = 3000; // pixel (0, 0)
        raw.data[2] = 4000; // pixel (2, 0)
        let out = preprocess(&raw, 2).unwrap();
        // Before filtering these map to (0,0) and (1,0); the filter mixes
        // them with neighbors but the picked values dominate their pixel.
        assert!(out.at(0, 0) > 1.5);
        assert!(out.at(1, 0) > 1.5);
        assert!(out.at(3, 3) < 1.5);
    }

    #[test]
    fn invalid_pixels_stay_invalid() {
        let mut raw = DepthFrameRaw::filled(16, 16, 2000);
        raw.data[5 * 16 + 5] = 0;
        let out = preprocess(&raw, 1).unwrap();
        assert_eq!(out.at(5, 5), 0.0);
        // Neighbors remain valid and close to 2 m.
        assert!((out.at(6, 5) - 2.0).abs() < 1e-5);
    }

    /// Naive double-loop bilateral oracle, written independently of the
    /// implementation above.
    fn bilateral_oracle(frame: &DepthFrame, u: usize, v: usize) -> f32 {
        let mut wsum = 0.0f64;
        let mut vsum = 0.0f64;
        let c = f64::from(frame.at(u, v));
        for q_v in v.saturating_sub(2)..=(v + 2).min(frame.height - 1) {
            for q_u in u.saturating_sub(2)..=(u + 2).min(frame.width - 1) {
                let s = f64::from(frame.at(q_u, q_v));
                if s <= 0.0 {
                    continue;
                }
                let d2 = (q_u as f64 - u as f64).powi(2) + (q_v as f64 - v as f64).powi(2);
                let r = s - c;
                let w = (-d2 / (2.0 * 4.0)).exp() * (-r * r / (2.0 * 0.01)).exp();
                wsum += w;
                vsum += w * s;
            }
        }
        (vsum / wsum) as f32
    }

    #[test]
    fn step_edge_resists_cross_mixing() {
        // Left half at 1 m, right half at 3 m.
        let (w, h) = (32, 8);
        let mut data = vec![0u16; w * h];
        for v in 0..h {
            for u in 0..w {
                data[v * w + u] = if u < w / 2 { 1000 } else { 3000 };
            }
        }
        let raw = DepthFrameRaw::new(w, h, data);
        let out = preprocess(&raw, 1).unwrap();
        for v in 0..h {
            let left_edge = out.at(w / 2 - 1, v);
            let right_edge = out.at(w / 2, v);
            assert!((left_edge - 1.0).abs() < 0.05, "left edge drifted to {left_edge}");
            assert!((right_edge - 3.0).abs() < 0.05, "right edge drifted to {right_edge}");
        }
        // Cross-check a column of pixels against the naive oracle.
        let meters = DepthFrame::new(
            w,
            h,
            raw.data.iter().map(|&d| f32::from(d) / 1000.0).collect(),
        );
        for v in 0..h {
            for u in [0, w / 2 - 1, w / 2, w - 1, 7] {
                let expected = bilateral_oracle(&meters, u, v);
                let got = out.at(u, v);
                assert!(
                    (got - expected).abs() < 1e-5,
                    "pixel ({u}, {v}): {got} vs oracle {expected}"
                );
            }
        }
    }
}
