//! Mode dispatch: turns a [`RunConfig`] into output records.

use std::io::Write;
use std::path::Path;

use eraser_core::dephasing::dephased_duality;
use eraser_core::sampling::{estimate_cross_correlation, estimate_probabilities, sample_shots};
use eraser_core::sweep::{linspace, SampledRow, SweepSpec};
use eraser_core::{
    cross_correlation, duality_check, evolve, joint_probabilities, BiasConfig, DualityReport,
    DualitySource, EraserSetup, JointProbabilities, LeadPair, SingleProbabilities,
};

use crate::config::{sweep_parameter_name, Mode, RunConfig};
use crate::error::SimError;
use crate::output::{emit, OutputRecord};
use crate::parallel::par_sweep;

fn put_analytic(
    rec: &mut OutputRecord,
    single: &SingleProbabilities,
    joint: &JointProbabilities,
    bias: &BiasConfig,
) {
    rec.set_float("p_alpha", single.p_alpha)
        .set_float("p_beta", single.p_beta)
        .set_float("p_gamma", single.p_gamma)
        .set_float("p_delta", single.p_delta);
    for leads in LeadPair::ALL {
        let tag = leads.label();
        rec.set_float(&format!("p_{tag}"), joint.get(leads));
        let s = cross_correlation(
            single.mzi(leads.mzi),
            single.det(leads.det),
            joint.get(leads),
            bias,
        );
        rec.set_float(&format!("s_{tag}"), s);
    }
}

fn put_duality(rec: &mut OutputRecord, report: &DualityReport) {
    rec.set_float("visibility", report.visibility)
        .set_float("distinguishability", report.distinguishability)
        .set_float("sum_of_squares", report.sum_of_squares)
        .set_text(
            "source",
            match report.source {
                DualitySource::Analytic => "analytic",
                DualitySource::Estimated => "estimated",
            },
        );
}

fn put_sampled(rec: &mut OutputRecord, sampled: &SampledRow) {
    let est = &sampled.estimates;
    rec.set_int("shots", sampled.counts.total)
        .set_float("phat_alpha", est.single.p_alpha)
        .set_float("phat_beta", est.single.p_beta)
        .set_float("phat_gamma", est.single.p_gamma)
        .set_float("phat_delta", est.single.p_delta);
    for (k, leads) in LeadPair::ALL.into_iter().enumerate() {
        let tag = leads.label();
        rec.set_int(&format!("n_{tag}"), sampled.counts.n[k])
            .set_float(&format!("phat_{tag}"), est.joint.p[k])
            .set_float(&format!("se_{tag}"), est.joint_stderr[k])
            .set_float(&format!("shat_{tag}"), sampled.cross[k].value)
            .set_float(&format!("se_shat_{tag}"), sampled.cross[k].stderr);
    }
}

/// Analytic record for one setup; visibility columns stay empty when the
/// lead pair is degenerate.
fn analytic_record(setup: &EraserSetup, bias: &BiasConfig, leads: LeadPair) -> OutputRecord {
    let joint = joint_probabilities(&evolve(setup));
    let mut rec = OutputRecord::new();
    put_analytic(&mut rec, &joint.marginals(), &joint, bias);
    if let Ok(report) = duality_check(setup, leads) {
        put_duality(&mut rec, &report);
    } else {
        rec.set_text("source", "analytic");
    }
    rec
}

fn sample_record(setup: &EraserSetup, cfg: &RunConfig) -> Result<OutputRecord, SimError> {
    let sample = cfg.sample.expect("validated sample block");
    let counts = sample_shots(setup, sample.shots, sample.seed);
    let estimates = estimate_probabilities(&counts)?;
    let mut cross = [Default::default(); 4];
    for (slot, leads) in cross.iter_mut().zip(LeadPair::ALL) {
        *slot = estimate_cross_correlation(&counts, leads, &cfg.bias)?;
    }
    let mut rec = analytic_record(setup, &cfg.bias, cfg.duality.leads);
    put_sampled(
        &mut rec,
        &SampledRow {
            counts,
            estimates,
            cross,
        },
    );
    Ok(rec)
}

/// Evaluate `cfg`; sweeps use up to `threads` workers.
pub fn execute(cfg: &RunConfig, threads: Option<usize>) -> Result<Vec<OutputRecord>, SimError> {
    match cfg.mode {
        Mode::Eval => {
            let setup = cfg.device.build()?;
            Ok(vec![analytic_record(&setup, &cfg.bias, cfg.duality.leads)])
        }
        Mode::Sample => {
            let setup = cfg.device.build()?;
            Ok(vec![sample_record(&setup, cfg)?])
        }
        Mode::Duality => {
            let setup = cfg.device.build()?;
            let leads = cfg.duality.leads;
            let mut records = Vec::new();
            let mut rec = analytic_record(&setup, &cfg.bias, leads);
            put_duality(&mut rec, &duality_check(&setup, leads)?);
            records.push(rec);
            if let Some(model) = &cfg.duality.dephasing {
                let mut rec = analytic_record(&setup, &cfg.bias, leads);
                put_duality(&mut rec, &dephased_duality(&setup, model, leads)?);
                records.push(rec);
            }
            Ok(records)
        }
        Mode::Sweep => {
            let sw = cfg.sweep.expect("validated sweep block");
            let spec = SweepSpec {
                parameter: sw.parameter,
                grid: linspace(sw.start, sw.stop, sw.points),
                base: cfg.device,
                shots: sw.shots,
                seed: cfg.sample.map(|s| s.seed).unwrap_or(0),
                bias: cfg.bias,
            };
            let table = par_sweep(&spec, threads)?;
            let name = sweep_parameter_name(sw.parameter);
            table
                .rows
                .iter()
                .map(|row| {
                    let setup = cfg
                        .device
                        .with_parameter(sw.parameter, row.value)?
                        .build()?;
                    let mut rec = OutputRecord::new();
                    rec.set_text("parameter", name)
                        .set_float("value", row.value);
                    put_analytic(&mut rec, &row.single, &row.joint, &cfg.bias);
                    match duality_check(&setup, cfg.duality.leads) {
                        Ok(report) => put_duality(&mut rec, &report),
                        Err(_) => {
                            rec.set_text("source", "analytic");
                        }
                    }
                    if let Some(sampled) = &row.sampled {
                        put_sampled(&mut rec, sampled);
                    }
                    Ok(rec)
                })
                .collect()
        }
        Mode::VerifyOracle => Ok(Vec::new()),
    }
}

/// Encode `records` and write them to `path`, or stdout when `path` is `None`.
pub fn write_records(
    records: &[OutputRecord],
    cfg: &RunConfig,
    path: Option<&Path>,
) -> Result<(), SimError> {
    let bytes = emit(records, cfg.output.format);
    match path {
        Some(p) => std::fs::write(p, &bytes).map_err(|source| SimError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|source| SimError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
