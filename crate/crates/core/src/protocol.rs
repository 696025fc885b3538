//! Distinguishability from two calibration runs.
//!
//! With S1 replaced by a fully reflecting (resp. fully transmitting)
//! splitter, the interferometer electron takes only the upper (resp. lower)
//! arm, and the detector current at lead B measures `|u_B|^2` (resp.
//! `|v_B|^2`). Combining these with the splitter weights of the original
//! device gives the distinguishability without observing any fringe.

use num_complex::Complex64;

use crate::engine::{DetLead, EraserSetup, MziLead};
use crate::error::{Error, Result};
use crate::observables::{distinguishability_from_weights, LeadPair};
use crate::sampling::{sample_from, stream_rng, Estimate};
use crate::unitary::Unitary2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolResult {
    /// Estimated `|u_B|^2` from the upper-arm run.
    pub u_sq: Estimate,
    /// Estimated `|v_B|^2` from the lower-arm run.
    pub v_sq: Estimate,
    pub distinguishability: Estimate,
}

/// S1 replacement that routes the selected input entirely into `arm`
/// (0 = upper, 1 = lower).
fn routing_splitter(input: MziLead, arm: usize) -> Unitary2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let straight = input.index() == arm;
    if straight {
        Unitary2::identity()
    } else {
        // r = r' = 0, t = 1, t' = -1 (fully transmitting canonical splitter)
        Unitary2::new(zero, -one, one, zero).expect("finite entries")
    }
}

fn detector_frequency(
    setup: &EraserSetup,
    lead: DetLead,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Estimate {
    let probs = crate::observables::joint_probabilities(&crate::engine::evolve(setup));
    let counts = sample_from(&probs, shots, &mut stream_rng(seed, stream));
    let hits: u64 = MziLead::ALL
        .iter()
        .map(|&m| counts.get(LeadPair::new(m, lead)))
        .sum();
    let p = hits as f64 / shots as f64;
    Estimate {
        value: p,
        stderr: libm::sqrt((p * (1.0 - p)).max(0.0) / shots as f64),
    }
}

/// Estimate the distinguishability at `leads` from `shots` coincidences in
/// each of the two calibration runs (streams 0 and 1 of `seed`).
pub fn measure_distinguishability_protocol(
    setup: &EraserSetup,
    leads: LeadPair,
    shots: u64,
    seed: u64,
) -> Result<ProtocolResult> {
    if shots == 0 {
        return Err(Error::EmptyCounts);
    }
    let mut upper_run = *setup;
    upper_run.s1 = routing_splitter(setup.input_mzi, 0);
    let mut lower_run = *setup;
    lower_run.s1 = routing_splitter(setup.input_mzi, 1);

    let u_sq = detector_frequency(&upper_run, leads.det, shots, seed, 0);
    let v_sq = detector_frequency(&lower_run, leads.det, shots, seed, 1);

    let [upper, lower] = setup.mzi_column();
    let row = leads.mzi.index();
    let k_u = upper.norm_sqr() * setup.s2.entry(row, 0).norm_sqr();
    let k_v = lower.norm_sqr() * setup.s2.entry(row, 1).norm_sqr();
    let (x, y) = (k_u * u_sq.value, k_v * v_sq.value);
    let d = distinguishability_from_weights(x, y)?;

    let total = x + y;
    let sign = if x >= y { 1.0 } else { -1.0 };
    let dx = sign * 2.0 * y / (total * total);
    let dy = -sign * 2.0 * x / (total * total);
    let (ex, ey) = (dx * k_u * u_sq.stderr, dy * k_v * v_sq.stderr);
    let var = ex * ex + ey * ey;

    Ok(ProtocolResult {
        u_sq,
        v_sq,
        distinguishability: Estimate {
            value: d,
            stderr: libm::sqrt(var),
        },
    })
}
