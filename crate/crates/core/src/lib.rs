//! Dense depth-fusion SLAM at desk scale, with an online controller that
//! trades accuracy for compute through a set of approximation knobs.
//!
//! The crate is organized around the per-frame pipeline
//! (preprocess -> track -> integrate -> raycast), a controller that picks
//! knob settings each frame from a velocity feedback loop plus scene-aware
//! triggers, a synthetic scene simulator that provides ground truth, and an
//! evaluation harness for trajectory-error metrics and knob studies.

pub mod frame;
pub mod geometry;
pub mod sim;
