//! Frame containers: raw millimeter depth, normalized metric depth, and
//! per-pixel vertex/normal maps.
//!
//! All grids are row-major with `index = v * width + u`. The value 0 marks
//! an invalid pixel in both depth representations.

use nalgebra::Vector3;

/// Depth frame as acquired: unsigned 16-bit millimeters, 0 = invalid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFrameRaw {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u16>,
}

impl DepthFrameRaw {
    pub fn new(width: usize, height: usize, data: Vec<u16>) -> Self {
        assert_eq!(data.len(), width * height, "depth buffer size mismatch");
        DepthFrameRaw {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, value: u16) -> Self {
        DepthFrameRaw {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn at(&self, u: usize, v: usize) -> u16 {
        self.data[v * self.width + u]
    }
}

/// Normalized depth frame: 32-bit float meters, 0.0 = invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthFrame {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f32>,
}

impl DepthFrame {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), width * height, "depth buffer size mismatch");
        DepthFrame {
            width,
            height,
            data,
        }
    }

    pub fn invalid(width: usize, height: usize) -> Self {
        DepthFrame {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    #[inline]
    pub fn at(&self, u: usize, v: usize) -> f32 {
        self.data[v * self.width + u]
    }

    #[inline]
    pub fn is_valid(&self, u: usize, v: usize) -> bool {
        self.data[v * self.width + u] > 0.0
    }

    pub fn valid_count(&self) -> usize {
        self.data.iter().filter(|&&d| d > 0.0).count()
    }
}

/// Per-pixel 3D points and unit normals in the camera frame, with a
/// validity mask. An entry is valid only when both the vertex and its
/// normal could be computed.
#[derive(Debug, Clone)]
pub struct VertexNormalMap {
    pub width: usize,
    pub height: usize,
    pub vertices: Vec<Vector3<f64>>,
    pub normals: Vec<Vector3<f64>>,
    pub valid: Vec<bool>,
}

impl VertexNormalMap {
    pub fn invalid(width: usize, height: usize) -> Self {
        VertexNormalMap {
            width,
            height,
            vertices: vec![Vector3::zeros(); width * height],
            normals: vec![Vector3::zeros(); width * height],
            valid: vec![false; width * height],
        }
    }

    #[inline]
    pub fn index(&self, u: usize, v: usize) -> usize {
        v * self.width + u
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }
}
