//! Parameter sweeps over a device.
//!
//! Every grid point is evaluated independently and samples from its own
//! random stream (the point index), so a table is identical whether points
//! are evaluated in order here or concurrently by a caller that reassembles
//! them with [`SweepSpec::evaluate_point`].

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::device::{DeviceSpec, SweepParameter};
use crate::engine::evolve;
use crate::error::{Error, Result};
use crate::fringe::{fit_fringe, FringeFit};
use crate::observables::{
    cross_correlation, joint_probabilities, BiasConfig, JointProbabilities, LeadPair,
    SingleProbabilities,
};
use crate::sampling::{
    estimate_cross_correlation, estimate_probabilities, sample_from, stream_rng, CoincidenceCounts,
    Estimate, ProbabilityEstimates,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub base: DeviceSpec,
    /// Shots per grid point; zero skips sampling.
    pub shots: u64,
    pub seed: u64,
    pub bias: BiasConfig,
}

impl SweepSpec {
    pub fn analytic(parameter: SweepParameter, grid: Vec<f64>, base: DeviceSpec) -> Self {
        Self {
            parameter,
            grid,
            base,
            shots: 0,
            seed: 0,
            bias: BiasConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() || self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid);
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid);
        }
        Ok(())
    }

    /// Evaluate grid point `index`.
    pub fn evaluate_point(&self, index: usize) -> Result<SweepRow> {
        let value = *self.grid.get(index).ok_or(Error::InvalidGrid)?;
        self.point(index, value).map_err(|e| Error::Row {
            index,
            source: Box::new(e),
        })
    }

    fn point(&self, index: usize, value: f64) -> Result<SweepRow> {
        let setup = self.base.with_parameter(self.parameter, value)?.build()?;
        let joint = joint_probabilities(&evolve(&setup));
        let single = joint.marginals();
        let cross = LeadPair::ALL.map(|l| {
            cross_correlation(
                single.mzi(l.mzi),
                single.det(l.det),
                joint.get(l),
                &self.bias,
            )
        });
        let sampled = if self.shots > 0 {
            let mut rng = stream_rng(self.seed, index as u64);
            let counts = sample_from(&joint, self.shots, &mut rng);
            let estimates = estimate_probabilities(&counts)?;
            let mut cross = [Estimate::default(); 4];
            for (slot, leads) in cross.iter_mut().zip(LeadPair::ALL) {
                *slot = estimate_cross_correlation(&counts, leads, &self.bias)?;
            }
            Some(SampledRow {
                counts,
                estimates,
                cross,
            })
        } else {
            None
        };
        Ok(SweepRow {
            index,
            value,
            single,
            joint,
            cross,
            sampled,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledRow {
    pub counts: CoincidenceCounts,
    pub estimates: ProbabilityEstimates,
    /// In [`LeadPair::ALL`] order.
    pub cross: [Estimate; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub single: SingleProbabilities,
    pub joint: JointProbabilities,
    /// Analytic cross-correlations in [`LeadPair::ALL`] order.
    pub cross: [f64; 4],
    pub sampled: Option<SampledRow>,
}

/// Observable tracked along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    PAlpha,
    PBeta,
    PGamma,
    PDelta,
    Joint(LeadPair),
    Cross(LeadPair),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub quantity: Quantity,
    pub sampled: bool,
}

impl Column {
    pub const fn analytic(quantity: Quantity) -> Self {
        Self {
            quantity,
            sampled: false,
        }
    }

    pub const fn sampled(quantity: Quantity) -> Self {
        Self {
            quantity,
            sampled: true,
        }
    }
}

impl SweepRow {
    /// Value of `column`, `None` for sampled columns of unsampled rows.
    pub fn get(&self, column: Column) -> Option<f64> {
        let (single, joint, cross) = if column.sampled {
            let s = self.sampled.as_ref()?;
            (
                s.estimates.single,
                s.estimates.joint,
                s.cross.map(|e| e.value),
            )
        } else {
            (self.single, self.joint, self.cross)
        };
        Some(match column.quantity {
            Quantity::PAlpha => single.p_alpha,
            Quantity::PBeta => single.p_beta,
            Quantity::PGamma => single.p_gamma,
            Quantity::PDelta => single.p_delta,
            Quantity::Joint(l) => joint.get(l),
            Quantity::Cross(l) => cross[l.index()],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn column(&self, column: Column) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| r.get(column)).collect()
    }

    /// Fringe fit of `column` against the swept parameter.
    pub fn fit(&self, column: Column) -> Result<FringeFit> {
        let y = self.column(column).ok_or(Error::FitFailure {
            reason: "column not sampled",
            condition: f64::INFINITY,
        })?;
        fit_fringe(&self.values(), &y)
    }
}

/// Evaluate every grid point in order.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let rows = (0..spec.grid.len())
        .map(|i| spec.evaluate_point(i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter: spec.parameter,
        rows,
    })
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|k| {
                    if k == points - 1 {
                        stop
                    } else {
                        start + step * k as f64
                    }
                })
                .collect()
        }
    }
}

/// `points` evenly spaced phases covering one period, `[0, 2 pi)`.
pub fn period_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| core::f64::consts::TAU * k as f64 / points as f64)
        .collect()
}
