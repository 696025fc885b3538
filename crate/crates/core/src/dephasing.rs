//! Classical dephasing of the interaction phase.
//!
//! The environment is modelled as Gaussian jitter of `delta_phi`: joint
//! probabilities are averaged over an ensemble of draws (a classical mixture
//! of pure states), which pushes `V^2 + D^2` below one. This is an extension
//! model; reports produced here are tagged [`DualitySource::Estimated`].

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_distr::{Distribution, Normal};

use crate::engine::{evolve, EraserSetup};
use crate::error::{Error, Result};
use crate::fringe::{fit_fringe, FringeFit};
use crate::observables::{
    distinguishability_from_weights, joint_probabilities, path_weights, DualityReport,
    DualitySource, LeadPair,
};
use crate::sampling::stream_rng;
use crate::sweep::period_grid;

/// Number of loop-phase samples used to reconstruct the averaged fringe.
pub const FRINGE_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingModel {
    sigma: f64,
    ensemble: usize,
    seed: u64,
}

impl DephasingModel {
    pub fn new(sigma: f64, ensemble: usize, seed: u64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::OutOfRange {
                field: "sigma",
                value: sigma,
            });
        }
        if ensemble == 0 {
            return Err(Error::OutOfRange {
                field: "ensemble",
                value: 0.0,
            });
        }
        Ok(Self {
            sigma,
            ensemble,
            seed,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn ensemble(&self) -> usize {
        self.ensemble
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Ensemble of interaction phases centred on `delta_phi`.
    pub fn draws(&self, delta_phi: f64) -> Vec<f64> {
        let normal = Normal::new(delta_phi, self.sigma).expect("validated sigma");
        let mut rng = stream_rng(self.seed, 0);
        (0..self.ensemble)
            .map(|_| normal.sample(&mut rng))
            .collect()
    }
}

/// Duality report for the ensemble together with the fit behind its visibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasedDuality {
    pub report: DualityReport,
    pub fringe: FringeFit,
}

/// Shift the interferometer loop phase by `shift` (lower arm of S1 picks up
/// `e^{i shift}`).
fn with_loop_shift(setup: &EraserSetup, shift: f64) -> EraserSetup {
    let s1 = setup.s1;
    let phase = Complex64::cis(shift);
    let mut out = *setup;
    out.s1 =
        crate::unitary::Unitary2::new(s1.r(), s1.t_prime(), s1.t() * phase, s1.r_prime() * phase)
            .expect("finite entries");
    out
}

pub fn dephased_duality_detailed(
    setup: &EraserSetup,
    model: &DephasingModel,
    leads: LeadPair,
) -> Result<DephasedDuality> {
    let draws = model.draws(setup.delta_phi);
    let grid = period_grid(FRINGE_POINTS);
    let mut fringe = alloc::vec![0.0; grid.len()];
    let mut w_u = 0.0;
    let mut w_v = 0.0;
    let weight = 1.0 / draws.len() as f64;
    for &dphi in &draws {
        let mut member = *setup;
        member.delta_phi = dphi;
        let (u, v) = path_weights(&member, leads);
        w_u += weight * u;
        w_v += weight * v;
        for (acc, &x) in fringe.iter_mut().zip(&grid) {
            *acc += weight * joint_probabilities(&evolve(&with_loop_shift(&member, x))).get(leads);
        }
    }
    let fit = fit_fringe(&grid, &fringe)?;
    let visibility = fit.visibility.ok_or(Error::UndefinedVisibility)?;
    let distinguishability = distinguishability_from_weights(w_u, w_v)?;
    Ok(DephasedDuality {
        report: DualityReport::new(visibility, distinguishability, DualitySource::Estimated),
        fringe: fit,
    })
}

/// `V` from the ensemble-averaged fringe, `D` from ensemble-averaged path weights.
pub fn dephased_duality(
    setup: &EraserSetup,
    model: &DephasingModel,
    leads: LeadPair,
) -> Result<DualityReport> {
    dephased_duality_detailed(setup, model, leads).map(|d| d.report)
}
