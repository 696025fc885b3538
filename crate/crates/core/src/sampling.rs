//! Monte Carlo coincidence counting.
//!
//! Random streams come from ChaCha8 (`rand_chacha`): the 64-bit seed is
//! expanded into the 256-bit key with `seed_from_u64`, and independent
//! streams (one per sweep point, one per protocol run) are selected with the
//! generator's 64-bit stream id. Output is therefore bit-exact for a given
//! `(seed, stream)` regardless of how work is scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardUniform};

use crate::engine::{evolve, EraserSetup};
use crate::error::{Error, Result};
use crate::observables::{
    cross_correlation, joint_probabilities, BiasConfig, JointProbabilities, LeadPair,
    SingleProbabilities,
};

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Tallies of the four joint outcomes, in basis order `ag, ad, bg, bd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct CoincidenceCounts {
    pub n: [u64; 4],
    pub total: u64,
}

impl CoincidenceCounts {
    pub fn from_cells(n: [u64; 4]) -> Self {
        Self {
            n,
            total: n.iter().sum(),
        }
    }

    pub fn get(&self, leads: LeadPair) -> u64 {
        self.n[leads.index()]
    }
}

/// Draw `shots` joint outcomes from `probs` using `rng`.
pub fn sample_from<R: RngCore + ?Sized>(
    probs: &JointProbabilities,
    shots: u64,
    rng: &mut R,
) -> CoincidenceCounts {
    let total = probs.total();
    let mut thresholds = [0.0; 3];
    let mut acc = 0.0;
    for (k, t) in thresholds.iter_mut().enumerate() {
        acc += probs.p[k];
        *t = acc / total;
    }
    let mut n = [0u64; 4];
    for _ in 0..shots {
        let u: f64 = StandardUniform.sample(rng);
        let cell = thresholds.iter().position(|&t| u < t).unwrap_or(3);
        n[cell] += 1;
    }
    CoincidenceCounts { n, total: shots }
}

/// Sample `shots` coincidences from the evolved state of `setup`.
///
/// Uses stream 0 of `seed`.
pub fn sample_shots(setup: &EraserSetup, shots: u64, seed: u64) -> CoincidenceCounts {
    let probs = joint_probabilities(&evolve(setup));
    sample_from(&probs, shots, &mut stream_rng(seed, 0))
}

/// A value with its one-sigma standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Maximum-likelihood frequencies with binomial standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEstimates {
    pub single: SingleProbabilities,
    pub joint: JointProbabilities,
    pub single_stderr: SingleProbabilities,
    pub joint_stderr: [f64; 4],
    pub total: u64,
}

fn binomial_se(p: f64, n: u64) -> f64 {
    libm::sqrt((p * (1.0 - p)).max(0.0) / n as f64)
}

pub fn estimate_probabilities(counts: &CoincidenceCounts) -> Result<ProbabilityEstimates> {
    if counts.total == 0 {
        return Err(Error::EmptyCounts);
    }
    let n = counts.total;
    let joint = JointProbabilities {
        p: counts.n.map(|k| k as f64 / n as f64),
    };
    let single = joint.marginals();
    Ok(ProbabilityEstimates {
        single,
        joint,
        single_stderr: SingleProbabilities {
            p_alpha: binomial_se(single.p_alpha, n),
            p_beta: binomial_se(single.p_beta, n),
            p_gamma: binomial_se(single.p_gamma, n),
            p_delta: binomial_se(single.p_delta, n),
        },
        joint_stderr: joint.p.map(|p| binomial_se(p, n)),
        total: n,
    })
}

/// Plug-in estimate of `S_AB` with a first-order (delta-method) error under
/// multinomial sampling.
pub fn estimate_cross_correlation(
    counts: &CoincidenceCounts,
    leads: LeadPair,
    bias: &BiasConfig,
) -> Result<Estimate> {
    let est = estimate_probabilities(counts)?;
    let p_a = est.single.mzi(leads.mzi);
    let p_b = est.single.det(leads.det);
    let p_ab = est.joint.get(leads);
    let value = cross_correlation(p_a, p_b, p_ab, bias);

    let mut mean = 0.0;
    let mut second = 0.0;
    for cell in LeadPair::ALL {
        let mut g = 0.0;
        if cell == leads {
            g += 1.0;
        }
        if cell.mzi == leads.mzi {
            g -= p_b;
        }
        if cell.det == leads.det {
            g -= p_a;
        }
        let p = est.joint.get(cell);
        mean += g * p;
        second += g * g * p;
    }
    let var = (second - mean * mean).max(0.0) / est.total as f64;
    Ok(Estimate {
        value,
        stderr: bias.noise_scale() * libm::sqrt(var),
    })
}
