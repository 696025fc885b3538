//! Simulation core for an electronic Mach-Zehnder quantum eraser.
//!
//! A two-path interferometer (splitters S1, S2) is capacitively coupled to a
//! detector (splitter S3, and optionally S4 which turns the detector into a
//! second interferometer). When both electrons are transmitted the Coulomb
//! interaction adds a phase `delta_phi` to the doubly-transmitted component,
//! entangling the interferometer path with the detector state. This crate
//! builds that two-electron state, evaluates single and joint detection
//! probabilities, visibility and distinguishability, and provides the seeded
//! Monte Carlo machinery used to estimate them from coincidence counts.
//!
//! The crate is `no_std` and only needs `alloc`. IO, configuration and the
//! command-line front end live in the `eraser-sim` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dephasing;
pub mod device;
pub mod engine;
mod error;
pub mod fringe;
pub mod observables;
pub mod protocol;
pub mod sampling;
pub mod sweep;
pub mod unitary;

pub use device::{DeviceSpec, Interaction, SweepParameter};
pub use engine::{
    apply_interaction, apply_output_stage, delta_phi_from_geometry, detector_overlap_nu, evolve,
    initial_state, uv_coefficients, DetLead, DetectorOverlap, EraserSetup, FieldGeometry, MziLead,
    TwoParticleState, UvCoefficients, FLUX_QUANTUM,
};
pub use error::{Error, Result};
pub use fringe::{fit_fringe, FringeFit};
pub use observables::{
    closed_form_p_alpha, cross_correlation, current, distinguishability, duality_check,
    joint_probabilities, single_probabilities, visibility, BiasConfig, DualityReport,
    DualitySource, JointProbabilities, LeadPair, SingleProbabilities,
};
pub use sampling::{
    estimate_cross_correlation, estimate_probabilities, sample_shots, CoincidenceCounts, Estimate,
    ProbabilityEstimates,
};
pub use unitary::{
    build_beam_splitter, check_unitary, loop_phase, normalize_angle, BeamSplitterSpec,
    ComplexAmplitude, Unitary2,
};
