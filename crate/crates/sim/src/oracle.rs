//! Brute-force cross-checks of the simulation core.
//!
//! The reference here builds the full 4x4 propagator
//! `kron(S2, S4) diag(1, 1, 1, e^{i dphi})` explicitly and applies it to the
//! Kronecker product of the injected columns. Closed forms are re-derived
//! from matrix entries rather than taken from the core.

use std::f64::consts::PI;

use eraser_core::observables::path_weights;
use eraser_core::{
    closed_form_p_alpha, detector_overlap_nu, duality_check, evolve, joint_probabilities,
    BeamSplitterSpec, DetLead, DeviceSpec, EraserSetup, Interaction, LeadPair, MziLead, Unitary2,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Agreement required for every check.
pub const ORACLE_TOL: f64 = 1e-12;

type Mat4 = [[Complex64; 4]; 4];

fn kron(a: &Unitary2, b: &Unitary2) -> Mat4 {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a.entry(i / 2, j / 2) * b.entry(i % 2, j % 2);
        }
    }
    m
}

fn mat_vec(m: &Mat4, v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += m[i][j] * v[j];
        }
    }
    out
}

/// Final amplitudes by explicit matrix products.
pub fn reference_amplitudes(setup: &EraserSetup) -> [Complex64; 4] {
    let a = setup.s1.column(setup.input_mzi.index());
    let b = setup.s3.column(setup.input_det.index());
    let product = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    let mut interaction = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (k, row) in interaction.iter_mut().enumerate() {
        row[k] = Complex64::new(1.0, 0.0);
    }
    interaction[3][3] = Complex64::from_polar(1.0, setup.delta_phi);
    mat_vec(
        &kron(&setup.s2, &setup.s4),
        &mat_vec(&interaction, &product),
    )
}

fn random_splitter(rng: &mut ChaCha8Rng) -> BeamSplitterSpec {
    let reflectance = match rng.random_range(0..20) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random_range(0.0..=1.0),
    };
    BeamSplitterSpec::new(
        reflectance,
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
    )
    .expect("valid random splitter")
}

/// Random device; alternates between single-splitter and interferometric
/// detectors and covers both injection leads.
pub fn random_device(rng: &mut ChaCha8Rng) -> DeviceSpec {
    let mut splitters = [(); 4].map(|_| random_splitter(rng));
    if rng.random_bool(0.5) {
        splitters[3] = BeamSplitterSpec::reflecting();
    }
    DeviceSpec {
        splitters,
        interaction: Interaction::Phase(rng.random_range(-2.0 * PI..2.0 * PI)),
        input_mzi: if rng.random_bool(0.5) {
            MziLead::Alpha
        } else {
            MziLead::Beta
        },
        input_det: if rng.random_bool(0.5) {
            DetLead::Gamma
        } else {
            DetLead::Delta
        },
    }
}

pub fn random_setups(count: usize, seed: u64) -> Vec<EraserSetup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            random_device(&mut rng)
                .build()
                .expect("random device builds")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_error: f64,
    pub evaluated: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error <= ORACLE_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub setups: usize,
    pub checks: Vec<CheckResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

struct Tracker {
    name: &'static str,
    max_error: f64,
    evaluated: usize,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            max_error: 0.0,
            evaluated: 0,
        }
    }

    fn record(&mut self, err: f64) {
        self.evaluated += 1;
        // NaN must fail the check.
        if err.is_nan() || err > self.max_error {
            self.max_error = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            max_error: self.max_error,
            evaluated: self.evaluated,
        }
    }
}

/// Run every cross-check over `count` random setups drawn from `seed`.
pub fn run_oracle_suite(count: usize, seed: u64) -> OracleReport {
    let mut amplitudes = Tracker::new("evolve vs kron/diag propagator");
    let mut norm = Tracker::new("norm preservation");
    let mut joints = Tracker::new("joint probabilities vs |amplitude|^2");
    let mut closed = Tracker::new("closed-form P_alpha vs state");
    let mut overlap = Tracker::new("detector overlap R3 + T3 e^{-i dphi}");
    let mut two_path = Tracker::new("P_alpha_gamma = |r1 r2 u + t1 t2' v|^2");
    let mut duality = Tracker::new("D^2 + V^2 = 1");

    for setup in random_setups(count, seed) {
        let state = evolve(&setup);
        let reference = reference_amplitudes(&setup);
        let amp_err = state
            .amp
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        amplitudes.record(amp_err);
        norm.record((reference.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs());

        let joint = joint_probabilities(&state);
        let joint_err = joint
            .p
            .iter()
            .zip(&reference)
            .map(|(p, a)| (p - a.norm_sqr()).abs())
            .fold(0.0, f64::max);
        joints.record(joint_err);

        let p_alpha = reference[0].norm_sqr() + reference[1].norm_sqr();
        closed.record((closed_form_p_alpha(&setup) - p_alpha).abs());

        let s3 = &setup.s3;
        let nu = Complex64::new(s3.r().norm_sqr(), 0.0)
            + s3.t().norm_sqr() * Complex64::from_polar(1.0, -setup.delta_phi);
        overlap.record((detector_overlap_nu(s3, setup.delta_phi).nu - nu).norm());

        if setup.input_mzi == MziLead::Alpha && setup.input_det == DetLead::Gamma {
            let (s1, s2, s4) = (&setup.s1, &setup.s2, &setup.s4);
            let phase = Complex64::from_polar(1.0, setup.delta_phi);
            let u = s3.r() * s4.r() + s3.t() * s4.t_prime();
            let v = s3.r() * s4.r() + s3.t() * s4.t_prime() * phase;
            let amp = s1.r() * s2.r() * u + s1.t() * s2.t_prime() * v;
            two_path.record((amp.norm_sqr() - reference[0].norm_sqr()).abs());
        }

        for leads in LeadPair::ALL {
            let (w_u, w_v) = path_weights(&setup, leads);
            if w_u + w_v > 1e-6 {
                let r = duality_check(&setup, leads).expect("non-degenerate weights");
                duality.record((r.sum_of_squares - 1.0).abs());
            }
        }
    }

    OracleReport {
        setups: count,
        checks: vec![
            amplitudes.finish(),
            norm.finish(),
            joints.finish(),
            closed.finish(),
            overlap.finish(),
            two_path.finish(),
            duality.finish(),
        ],
    }
}
