//! Two-electron state of the interferometer + detector pair.
//!
//! Amplitudes are stored over the product basis in the fixed order
//! `(alpha, gamma), (alpha, delta), (beta, gamma), (beta, delta)`. Before the
//! output stage the same slots refer to the intermediate modes `b_alpha`,
//! `b_beta` of the interferometer and `c_gamma`, `c_delta` of the detector.

use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::unitary::{check_unitary, normalize_angle, Unitary2, UNITARY_TOL};

/// Magnetic flux quantum `h/e` in webers.
pub const FLUX_QUANTUM: f64 = 4.135667696e-15;

/// Output (or intermediate) lead of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MziLead {
    Alpha,
    Beta,
}

/// Output (or intermediate) lead of the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetLead {
    Gamma,
    Delta,
}

impl MziLead {
    pub const ALL: [MziLead; 2] = [MziLead::Alpha, MziLead::Beta];

    pub fn index(self) -> usize {
        match self {
            MziLead::Alpha => 0,
            MziLead::Beta => 1,
        }
    }
}

impl DetLead {
    pub const ALL: [DetLead; 2] = [DetLead::Gamma, DetLead::Delta];

    pub fn index(self) -> usize {
        match self {
            DetLead::Gamma => 0,
            DetLead::Delta => 1,
        }
    }
}

/// Full device: interferometer splitters `s1`, `s2`, detector splitters `s3`,
/// `s4`, the interaction phase and the injection leads.
///
/// `input_mzi` selects the column of `s1` that is fed (`Alpha` is the lead
/// written alpha-bar), `input_det` likewise for `s3`. With `s4` equal to the
/// identity the detector is a single beam splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EraserSetup {
    pub s1: Unitary2,
    pub s2: Unitary2,
    pub s3: Unitary2,
    pub s4: Unitary2,
    pub delta_phi: f64,
    pub input_mzi: MziLead,
    pub input_det: DetLead,
}

impl EraserSetup {
    pub fn new(
        s1: Unitary2,
        s2: Unitary2,
        s3: Unitary2,
        s4: Unitary2,
        delta_phi: f64,
        input_mzi: MziLead,
        input_det: DetLead,
    ) -> Result<Self> {
        for s in [&s1, &s2, &s3, &s4] {
            if !check_unitary(s, UNITARY_TOL) {
                return Err(Error::NotUnitary {
                    max_deviation: s.unitarity_deviation(),
                });
            }
        }
        ensure_finite(delta_phi, "delta_phi")?;
        Ok(Self {
            s1,
            s2,
            s3,
            s4,
            delta_phi,
            input_mzi,
            input_det,
        })
    }

    /// Single-splitter detector (`s4` = identity), fed from alpha-bar and gamma-bar.
    pub fn single_detector(
        s1: Unitary2,
        s2: Unitary2,
        s3: Unitary2,
        delta_phi: f64,
    ) -> Result<Self> {
        Self::new(
            s1,
            s2,
            s3,
            Unitary2::identity(),
            delta_phi,
            MziLead::Alpha,
            DetLead::Gamma,
        )
    }

    /// Interferometric detector, fed from alpha-bar and gamma-bar.
    pub fn interferometric_detector(
        s1: Unitary2,
        s2: Unitary2,
        s3: Unitary2,
        s4: Unitary2,
        delta_phi: f64,
    ) -> Result<Self> {
        Self::new(s1, s2, s3, s4, delta_phi, MziLead::Alpha, DetLead::Gamma)
    }

    pub fn is_single_detector(&self) -> bool {
        self.s4 == Unitary2::identity()
    }

    /// Amplitudes `(upper, lower)` of the interferometer electron after `s1`.
    pub fn mzi_column(&self) -> [Complex64; 2] {
        self.s1.column(self.input_mzi.index())
    }

    /// Amplitudes `(gamma, delta)` of the detector electron after `s3`.
    pub fn det_column(&self) -> [Complex64; 2] {
        self.s3.column(self.input_det.index())
    }

    pub fn detector_overlap(&self) -> DetectorOverlap {
        overlap_from_column(self.det_column(), self.delta_phi)
    }

    pub fn uv(&self) -> UvCoefficients {
        uv_from_column(self.det_column(), &self.s4, self.delta_phi)
    }
}

/// Amplitudes over `(alpha, gamma), (alpha, delta), (beta, gamma), (beta, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleState {
    pub amp: [Complex64; 4],
}

impl TwoParticleState {
    pub fn new(amp: [Complex64; 4]) -> Self {
        Self { amp }
    }

    pub fn index(mzi: MziLead, det: DetLead) -> usize {
        2 * mzi.index() + det.index()
    }

    pub fn amplitude(&self, mzi: MziLead, det: DetLead) -> Complex64 {
        self.amp[Self::index(mzi, det)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Determinant of the amplitude matrix reshaped as `[mzi][det]`; zero iff
    /// the state is a product state.
    pub fn determinant(&self) -> Complex64 {
        self.amp[0] * self.amp[3] - self.amp[1] * self.amp[2]
    }
}

/// Geometry that sets the interaction phase through an Aharonov-Bohm area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGeometry {
    field_tesla: f64,
    delta_area_m2: f64,
    flux_quantum: f64,
}

impl FieldGeometry {
    pub fn new(field_tesla: f64, delta_area_m2: f64) -> Result<Self> {
        Self::with_flux_quantum(field_tesla, delta_area_m2, FLUX_QUANTUM)
    }

    pub fn with_flux_quantum(
        field_tesla: f64,
        delta_area_m2: f64,
        flux_quantum: f64,
    ) -> Result<Self> {
        ensure_finite(field_tesla, "H")?;
        ensure_finite(delta_area_m2, "delta_area")?;
        ensure_finite(flux_quantum, "flux_quantum")?;
        if field_tesla < 0.0 {
            return Err(Error::OutOfRange {
                field: "H",
                value: field_tesla,
            });
        }
        if delta_area_m2 < 0.0 {
            return Err(Error::OutOfRange {
                field: "delta_area",
                value: delta_area_m2,
            });
        }
        if flux_quantum <= 0.0 {
            return Err(Error::OutOfRange {
                field: "flux_quantum",
                value: flux_quantum,
            });
        }
        Ok(Self {
            field_tesla,
            delta_area_m2,
            flux_quantum,
        })
    }

    pub fn field_tesla(&self) -> f64 {
        self.field_tesla
    }

    pub fn delta_area_m2(&self) -> f64 {
        self.delta_area_m2
    }

    pub fn flux_quantum(&self) -> f64 {
        self.flux_quantum
    }
}

/// `2 pi H dA / Phi_0`, not range-reduced.
pub fn delta_phi_from_geometry(g: &FieldGeometry) -> f64 {
    TAU * (g.field_tesla * g.delta_area_m2 / g.flux_quantum)
}

/// Overlap of the two detector states conditioned on the interferometer path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOverlap {
    pub nu: Complex64,
    pub magnitude: f64,
    pub phase: f64,
}

fn overlap_from_column(col: [Complex64; 2], delta_phi: f64) -> DetectorOverlap {
    // <chi_t|chi_r> with chi_r = c g + d d, chi_t = c g + d e^{i dphi} d.
    let nu =
        Complex64::new(col[0].norm_sqr(), 0.0) + Complex64::cis(-delta_phi) * col[1].norm_sqr();
    DetectorOverlap {
        nu,
        magnitude: nu.norm(),
        phase: normalize_angle(nu.arg()),
    }
}

/// `nu = R3 + T3 e^{-i delta_phi}` for a detector fed through gamma-bar.
pub fn detector_overlap_nu(s3: &Unitary2, delta_phi: f64) -> DetectorOverlap {
    overlap_from_column(s3.column(0), delta_phi)
}

/// Amplitudes for the detector electron to reach each detector lead, given
/// that the interferometer electron took the upper (`u`) or lower (`v`) arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvCoefficients {
    /// Indexed by [`DetLead::index`].
    pub u: [Complex64; 2],
    pub v: [Complex64; 2],
}

impl UvCoefficients {
    pub fn u(&self, lead: DetLead) -> Complex64 {
        self.u[lead.index()]
    }

    pub fn v(&self, lead: DetLead) -> Complex64 {
        self.v[lead.index()]
    }

    pub fn u_gamma(&self) -> Complex64 {
        self.u[0]
    }

    pub fn v_gamma(&self) -> Complex64 {
        self.v[0]
    }

    pub fn u_delta(&self) -> Complex64 {
        self.u[1]
    }

    pub fn v_delta(&self) -> Complex64 {
        self.v[1]
    }
}

fn uv_from_column(col: [Complex64; 2], s4: &Unitary2, delta_phi: f64) -> UvCoefficients {
    let shifted = col[1] * Complex64::cis(delta_phi);
    let mut u = [Complex64::new(0.0, 0.0); 2];
    let mut v = [Complex64::new(0.0, 0.0); 2];
    for b in 0..2 {
        u[b] = s4.entry(b, 0) * col[0] + s4.entry(b, 1) * col[1];
        v[b] = s4.entry(b, 0) * col[0] + s4.entry(b, 1) * shifted;
    }
    UvCoefficients { u, v }
}

/// `u_gamma = r3 r4 + t3 t4'`, `v_gamma = r3 r4 + t3 t4' e^{i dphi}` and the
/// delta-lead counterparts built from `t4`, `r4'`.
pub fn uv_coefficients(s3: &Unitary2, s4: &Unitary2, delta_phi: f64) -> UvCoefficients {
    uv_from_column(s3.column(0), s4, delta_phi)
}

/// Product state injected through the selected input leads.
pub fn initial_state(setup: &EraserSetup) -> TwoParticleState {
    let m = setup.mzi_column();
    let d = setup.det_column();
    TwoParticleState::new([m[0] * d[0], m[0] * d[1], m[1] * d[0], m[1] * d[1]])
}

/// Controlled phase on the doubly-transmitted `(beta, delta)` component.
pub fn apply_interaction(state: &TwoParticleState, delta_phi: f64) -> TwoParticleState {
    let mut amp = state.amp;
    amp[3] *= Complex64::cis(delta_phi);
    TwoParticleState::new(amp)
}

/// `(S2 (x) S4) amp`.
pub fn apply_output_stage(
    state: &TwoParticleState,
    s2: &Unitary2,
    s4: &Unitary2,
) -> TwoParticleState {
    let a = &state.amp;
    // s4 on the detector index of each interferometer block, then s2 across blocks.
    let upper = s4.apply([a[0], a[1]]);
    let lower = s4.apply([a[2], a[3]]);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for det in 0..2 {
        let mixed = s2.apply([upper[det], lower[det]]);
        out[det] = mixed[0];
        out[2 + det] = mixed[1];
    }
    TwoParticleState::new(out)
}

/// Injection, interaction and output stage in sequence.
pub fn evolve(setup: &EraserSetup) -> TwoParticleState {
    let injected = initial_state(setup);
    let entangled = apply_interaction(&injected, setup.delta_phi);
    apply_output_stage(&entangled, &setup.s2, &setup.s4)
}
