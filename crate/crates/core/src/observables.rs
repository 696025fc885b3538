//! Detection probabilities, currents, cross-correlations and the
//! visibility/distinguishability pair.

use num_complex::Complex64;

use crate::engine::{DetLead, EraserSetup, MziLead, TwoParticleState};
use crate::error::{Error, Result};

/// Elementary charge in coulombs.
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Conductance quantum `e^2/h` in siemens (single spin channel).
pub const E_SQ_OVER_H: f64 = 3.8740458649318244e-5;

/// Path weights below this are treated as exactly zero.
const DEGENERATE_WEIGHT: f64 = f64::EPSILON * f64::EPSILON;

/// Probability of finding one electron at each lead.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SingleProbabilities {
    pub p_alpha: f64,
    pub p_beta: f64,
    pub p_gamma: f64,
    pub p_delta: f64,
}

impl SingleProbabilities {
    pub fn mzi(&self, lead: MziLead) -> f64 {
        match lead {
            MziLead::Alpha => self.p_alpha,
            MziLead::Beta => self.p_beta,
        }
    }

    pub fn det(&self, lead: DetLead) -> f64 {
        match lead {
            DetLead::Gamma => self.p_gamma,
            DetLead::Delta => self.p_delta,
        }
    }
}

/// One interferometer lead and one detector lead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LeadPair {
    pub mzi: MziLead,
    pub det: DetLead,
}

impl LeadPair {
    pub const ALPHA_GAMMA: Self = Self::new(MziLead::Alpha, DetLead::Gamma);
    pub const ALPHA_DELTA: Self = Self::new(MziLead::Alpha, DetLead::Delta);
    pub const BETA_GAMMA: Self = Self::new(MziLead::Beta, DetLead::Gamma);
    pub const BETA_DELTA: Self = Self::new(MziLead::Beta, DetLead::Delta);

    /// In basis order.
    pub const ALL: [Self; 4] = [
        Self::ALPHA_GAMMA,
        Self::ALPHA_DELTA,
        Self::BETA_GAMMA,
        Self::BETA_DELTA,
    ];

    pub const fn new(mzi: MziLead, det: DetLead) -> Self {
        Self { mzi, det }
    }

    pub fn index(self) -> usize {
        TwoParticleState::index(self.mzi, self.det)
    }

    /// Short label such as `ag` for alpha-gamma.
    pub fn label(self) -> &'static str {
        match (self.mzi, self.det) {
            (MziLead::Alpha, DetLead::Gamma) => "ag",
            (MziLead::Alpha, DetLead::Delta) => "ad",
            (MziLead::Beta, DetLead::Gamma) => "bg",
            (MziLead::Beta, DetLead::Delta) => "bd",
        }
    }
}

/// Joint-detection probabilities in basis order `ag, ad, bg, bd`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointProbabilities {
    pub p: [f64; 4],
}

impl JointProbabilities {
    pub fn get(&self, leads: LeadPair) -> f64 {
        self.p[leads.index()]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn marginals(&self) -> SingleProbabilities {
        let [ag, ad, bg, bd] = self.p;
        SingleProbabilities {
            p_alpha: ag + ad,
            p_beta: bg + bd,
            p_gamma: ag + bg,
            p_delta: ad + bd,
        }
    }
}

pub fn single_probabilities(state: &TwoParticleState) -> SingleProbabilities {
    joint_probabilities(state).marginals()
}

pub fn joint_probabilities(state: &TwoParticleState) -> JointProbabilities {
    JointProbabilities {
        p: state.amp.map(|a| a.norm_sqr()),
    }
}

/// Fringe law for the interferometer output alpha:
/// `P = R1 R2 + T1 T2 + 2 |nu| sqrt(R1 T1 R2 T2) cos(phi - phi_nu)`.
///
/// `R1`, `T1` and the loop phase refer to the column of S1 selected by the
/// injection lead. The value does not depend on S4.
pub fn closed_form_p_alpha(setup: &EraserSetup) -> f64 {
    let [upper, lower] = setup.mzi_column();
    let r2 = setup.s2.r();
    let t2p = setup.s2.t_prime();
    let nu = setup.detector_overlap();
    let direct = upper.norm_sqr() * r2.norm_sqr() + lower.norm_sqr() * t2p.norm_sqr();
    let loop_product = lower * t2p * upper.conj() * r2.conj();
    let amplitude = 2.0 * nu.magnitude * loop_product.norm();
    if amplitude == 0.0 {
        return direct;
    }
    direct + amplitude * libm::cos(loop_product.arg() - nu.phase)
}

/// Conversion between probabilities and measured currents/noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasConfig {
    pub voltage: f64,
    pub e_sq_over_h: f64,
    pub dimensionless: bool,
}

impl BiasConfig {
    pub const fn dimensionless() -> Self {
        Self {
            voltage: 1.0,
            e_sq_over_h: E_SQ_OVER_H,
            dimensionless: true,
        }
    }

    pub fn si(voltage: f64) -> Result<Self> {
        if !voltage.is_finite() || voltage < 0.0 {
            return Err(Error::OutOfRange {
                field: "voltage",
                value: voltage,
            });
        }
        Ok(Self {
            voltage,
            e_sq_over_h: E_SQ_OVER_H,
            dimensionless: false,
        })
    }

    /// Factor converting `P_AB - P_A P_B` into `S_AB`.
    pub fn noise_scale(&self) -> f64 {
        if self.dimensionless {
            1.0
        } else {
            2.0 * self.e_sq_over_h * ELEMENTARY_CHARGE * self.voltage
        }
    }
}

impl Default for BiasConfig {
    fn default() -> Self {
        Self::dimensionless()
    }
}

/// `I = (e^2/h) P V`, or `P` in dimensionless mode.
pub fn current(p: f64, bias: &BiasConfig) -> f64 {
    if bias.dimensionless {
        p
    } else {
        bias.e_sq_over_h * p * bias.voltage
    }
}

/// Zero-frequency cross-correlation `S_AB = (2e^2/h) eV (P_AB - P_A P_B)`.
pub fn cross_correlation(p_a: f64, p_b: f64, p_ab: f64, bias: &BiasConfig) -> f64 {
    bias.noise_scale() * (p_ab - p_a * p_b)
}

/// The two path weights `(w_u, w_v)` whose interference produces the joint
/// fringe at `leads`.
///
/// For `(alpha, gamma)` these are `R1 R2 |u_gamma|^2` and `T1 T2 |v_gamma|^2`.
pub fn path_weights(setup: &EraserSetup, leads: LeadPair) -> (f64, f64) {
    let [upper, lower] = setup.mzi_column();
    let uv = setup.uv();
    let row = leads.mzi.index();
    let w_u = upper.norm_sqr() * setup.s2.entry(row, 0).norm_sqr() * uv.u(leads.det).norm_sqr();
    let w_v = lower.norm_sqr() * setup.s2.entry(row, 1).norm_sqr() * uv.v(leads.det).norm_sqr();
    (w_u, w_v)
}

/// Two-path amplitudes `(upper, lower)` reaching `leads`; their sum is the
/// joint-detection amplitude.
pub fn path_amplitudes(setup: &EraserSetup, leads: LeadPair) -> (Complex64, Complex64) {
    let [upper, lower] = setup.mzi_column();
    let uv = setup.uv();
    let row = leads.mzi.index();
    (
        upper * setup.s2.entry(row, 0) * uv.u(leads.det),
        lower * setup.s2.entry(row, 1) * uv.v(leads.det),
    )
}

pub(crate) fn visibility_from_weights(w_u: f64, w_v: f64) -> Result<f64> {
    let total = w_u + w_v;
    if total <= DEGENERATE_WEIGHT {
        return Err(Error::UndefinedVisibility);
    }
    Ok(2.0 * libm::sqrt(w_u * w_v) / total)
}

pub(crate) fn distinguishability_from_weights(w_u: f64, w_v: f64) -> Result<f64> {
    let total = w_u + w_v;
    if total <= DEGENERATE_WEIGHT {
        return Err(Error::UndefinedVisibility);
    }
    Ok((w_u - w_v).abs() / total)
}

/// `V = 2 sqrt(w_u w_v) / (w_u + w_v)`.
pub fn visibility(setup: &EraserSetup, leads: LeadPair) -> Result<f64> {
    let (w_u, w_v) = path_weights(setup, leads);
    visibility_from_weights(w_u, w_v)
}

/// `D = |w_u - w_v| / (w_u + w_v)`.
pub fn distinguishability(setup: &EraserSetup, leads: LeadPair) -> Result<f64> {
    let (w_u, w_v) = path_weights(setup, leads);
    distinguishability_from_weights(w_u, w_v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualitySource {
    Analytic,
    /// Averaged over a dephasing ensemble; not a pure-state quantity.
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub visibility: f64,
    pub distinguishability: f64,
    pub sum_of_squares: f64,
    pub source: DualitySource,
}

impl DualityReport {
    pub fn new(visibility: f64, distinguishability: f64, source: DualitySource) -> Self {
        Self {
            visibility,
            distinguishability,
            sum_of_squares: visibility * visibility + distinguishability * distinguishability,
            source,
        }
    }
}

pub fn duality_check(setup: &EraserSetup, leads: LeadPair) -> Result<DualityReport> {
    let (w_u, w_v) = path_weights(setup, leads);
    Ok(DualityReport::new(
        visibility_from_weights(w_u, w_v)?,
        distinguishability_from_weights(w_u, w_v)?,
        DualitySource::Analytic,
    ))
}
