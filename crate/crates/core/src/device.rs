//! Parametric description of a device, from which [`EraserSetup`]s are built.

use core::f64::consts::PI;

use crate::engine::{delta_phi_from_geometry, DetLead, EraserSetup, FieldGeometry, MziLead};
use crate::error::{ensure_finite, Error, Result};
use crate::unitary::{build_beam_splitter, normalize_angle, BeamSplitterSpec};

/// Source of the interaction phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interaction {
    Phase(f64),
    Geometry(FieldGeometry),
}

impl Interaction {
    pub fn delta_phi(&self) -> f64 {
        match self {
            Interaction::Phase(p) => *p,
            Interaction::Geometry(g) => delta_phi_from_geometry(g),
        }
    }
}

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    /// Loop phase of the interferometer (set through the transmission phase of S1).
    MziPhase,
    /// Loop phase of the detector interferometer (set through the transmission phase of S3).
    DetectorPhase,
    /// Interaction phase.
    DeltaPhi,
    /// Reflectance of splitter 1..=4.
    Reflectance(u8),
    /// Magnetic field in tesla; requires a geometry-based interaction.
    Field,
}

/// Four splitter specifications, the interaction and the injection leads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceSpec {
    pub splitters: [BeamSplitterSpec; 4],
    pub interaction: Interaction,
    pub input_mzi: MziLead,
    pub input_det: DetLead,
}

impl DeviceSpec {
    /// All four splitters 50/50 with zero phases.
    pub fn symmetric(delta_phi: f64) -> Self {
        Self {
            splitters: [BeamSplitterSpec::symmetric(); 4],
            interaction: Interaction::Phase(delta_phi),
            input_mzi: MziLead::Alpha,
            input_det: DetLead::Gamma,
        }
    }

    /// Symmetric interferometer, symmetric detector splitter and S4 = identity.
    pub fn symmetric_single_detector(delta_phi: f64) -> Self {
        let mut d = Self::symmetric(delta_phi);
        d.splitters[3] = BeamSplitterSpec::reflecting();
        d
    }

    pub fn build(&self) -> Result<EraserSetup> {
        let [s1, s2, s3, s4] = self.splitters.map(|s| build_beam_splitter(&s));
        EraserSetup::new(
            s1,
            s2,
            s3,
            s4,
            self.interaction.delta_phi(),
            self.input_mzi,
            self.input_det,
        )
    }

    /// Loop phase of the interferometer computed from the splitter phases.
    ///
    /// Equals `loop_phase(S1, S2)` whenever the latter is defined, but stays
    /// meaningful for fully reflecting or transmitting splitters.
    pub fn mzi_phase(&self) -> f64 {
        canonical_loop_phase(&self.splitters[0], &self.splitters[1])
    }

    /// Loop phase of the detector interferometer, from the phases of S3 and S4.
    pub fn detector_phase(&self) -> f64 {
        canonical_loop_phase(&self.splitters[2], &self.splitters[3])
    }

    pub fn with_mzi_phase(mut self, phi: f64) -> Result<Self> {
        ensure_finite(phi, "phi")?;
        let s1 = self.splitters[0];
        let shift = normalize_angle(phi - self.mzi_phase());
        self.splitters[0] = s1.with_phase_t(s1.phase_t() + shift)?;
        Ok(self)
    }

    pub fn with_detector_phase(mut self, phi_d: f64) -> Result<Self> {
        ensure_finite(phi_d, "phi_d")?;
        let s3 = self.splitters[2];
        let shift = normalize_angle(phi_d - self.detector_phase());
        self.splitters[2] = s3.with_phase_t(s3.phase_t() + shift)?;
        Ok(self)
    }

    pub fn with_delta_phi(mut self, delta_phi: f64) -> Result<Self> {
        ensure_finite(delta_phi, "delta_phi")?;
        self.interaction = Interaction::Phase(delta_phi);
        Ok(self)
    }

    /// Copy with one parameter replaced.
    pub fn with_parameter(self, parameter: SweepParameter, value: f64) -> Result<Self> {
        match parameter {
            SweepParameter::MziPhase => self.with_mzi_phase(value),
            SweepParameter::DetectorPhase => self.with_detector_phase(value),
            SweepParameter::DeltaPhi => self.with_delta_phi(value),
            SweepParameter::Reflectance(i @ 1..=4) => {
                let mut next = self;
                let k = usize::from(i - 1);
                next.splitters[k] = next.splitters[k].with_reflectance(value)?;
                Ok(next)
            }
            SweepParameter::Reflectance(_) => {
                Err(Error::UnsupportedParameter("splitter index must be 1..=4"))
            }
            SweepParameter::Field => match self.interaction {
                Interaction::Geometry(g) => {
                    let geometry = FieldGeometry::with_flux_quantum(
                        value,
                        g.delta_area_m2(),
                        g.flux_quantum(),
                    )?;
                    Ok(Self {
                        interaction: Interaction::Geometry(geometry),
                        ..self
                    })
                }
                Interaction::Phase(_) => Err(Error::UnsupportedParameter(
                    "field sweep needs a geometry-based interaction",
                )),
            },
        }
    }
}

// arg(t_in) + arg(t'_out) - arg(r_in) - arg(r_out) for the canonical form;
// global phases cancel and t'_out carries the extra pi.
fn canonical_loop_phase(s_in: &BeamSplitterSpec, s_out: &BeamSplitterSpec) -> f64 {
    normalize_angle(s_in.phase_t() - s_in.phase_r() - s_out.phase_t() - s_out.phase_r() + PI)
}
