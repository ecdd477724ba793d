//! Thin adapters from a [`RunConfig`] to the library, each returning the
//! serialized data and a one-line summary.

use ecp_core::analysis::{
    dark_count_threshold, papd_integral, papd_sweep, t_p_grid, write_curves_csv,
    FeasibilityReport, PapdCurve,
};
use ecp_core::analysis::quadrature::Quadrature;
use ecp_core::protocol::{
    generate_remote_bell, herald_probability_sweep, monte_carlo, write_sweep_csv, Detector,
    EcpLayout, EcpResult, EcpRun, MonteCarloStats, OutcomeStrategy, Pipeline, ProtocolReport,
    RemoteBellHerald, SweepPoint,
};
use ecp_core::SystemParams;
use serde::Serialize;

use crate::args::{CommandKind, Format};
use crate::config::{AmplitudeInput, RunConfig};
use crate::error::CliError;

pub struct Output {
    pub data: Vec<u8>,
    pub summary: String,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    command: &'static str,
    seed: u64,
    params: &'a SystemParams,
    input: &'a AmplitudeInput,
    result: T,
}

fn json<T: Serialize>(cfg: &RunConfig, result: T) -> Result<Vec<u8>, CliError> {
    let env = Envelope {
        command: cfg.command.as_str(),
        seed: cfg.seed,
        params: &cfg.params,
        input: &cfg.amplitudes,
        result,
    };
    let mut buf = serde_json::to_vec_pretty(&env).map_err(|e| CliError::Io(e.to_string()))?;
    buf.push(b'\n');
    Ok(buf)
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

fn fmt_outcome(o: &[u8]) -> String {
    o.iter().map(u8::to_string).collect::<Vec<_>>().join("-")
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        CommandKind::Bell => ecp(cfg, Pipeline::Bell),
        CommandKind::Ghz => ecp(cfg, Pipeline::Ghz),
        CommandKind::Generate => generate(cfg),
        CommandKind::Papd => papd(cfg),
        CommandKind::Sweep => sweep(cfg),
        CommandKind::Montecarlo => montecarlo(cfg),
    }
}

#[derive(Serialize)]
struct EcpOutput<'a> {
    gt: f64,
    t: f64,
    mode: &'static str,
    report: &'a EcpResult,
}

const ECP_CSV_HEADER: [&str; 7] = [
    "outcome",
    "parity",
    "outcome_probability",
    "correction_applied",
    "target_fidelity",
    "herald_probability",
    "analytic_probability",
];

fn ecp_rows(reports: &[ProtocolReport]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(ECP_CSV_HEADER).map_err(io)?;
        for r in reports {
            w.write_record([
                fmt_outcome(&r.detector_outcomes),
                serde_json::to_value(r.parity).map_err(io)?.as_str().unwrap_or_default().to_string(),
                format!("{:?}", r.outcome_probability),
                r.correction_applied.to_string(),
                format!("{:?}", r.target_fidelity),
                format!("{:?}", r.herald_probability),
                format!("{:?}", r.analytic_probability),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    Ok(buf)
}

fn ecp(cfg: &RunConfig, pipeline: Pipeline) -> Result<Output, CliError> {
    let run = EcpRun::new(EcpLayout::for_pipeline(pipeline), cfg.params, cfg.t)?;
    let strategy = if cfg.exhaustive {
        OutcomeStrategy::Exhaustive
    } else {
        OutcomeStrategy::Sampled { seed: cfg.seed }
    };
    let name = pipeline.as_str();
    let report = match run.run(strategy) {
        Err(ecp_core::Error::HeraldFailed) => {
            let why = if cfg.exhaustive {
                format!("{name}: the dark port is never reached at g t = {}", cfg.gt)
            } else {
                format!("{name}: no dark-port click with seed {}", cfg.seed)
            };
            return Err(CliError::HeraldFailed(why));
        }
        r => r?,
    };
    let summary = match &report {
        EcpResult::Exhaustive(r) => {
            let min_fid = r.outcomes.iter().map(|o| o.target_fidelity).fold(f64::INFINITY, f64::min);
            format!(
                "{name}: herald probability {:.6} (analytic {:.6}), {} outcomes, min fidelity {:.12}",
                r.herald_probability,
                r.analytic_probability,
                r.outcomes.len(),
                min_fid
            )
        }
        EcpResult::Single(r) => format!(
            "{name}: herald probability {:.6}, outcome {} ({:?}), correction {}, fidelity {:.12}",
            r.herald_probability,
            fmt_outcome(&r.detector_outcomes),
            r.parity,
            if r.correction_applied { "applied" } else { "none" },
            r.target_fidelity
        ),
    };
    let data = match cfg.format {
        Format::Json => json(
            cfg,
            EcpOutput {
                gt: cfg.gt,
                t: cfg.t,
                mode: if cfg.exhaustive { "exhaustive" } else { "sampled" },
                report: &report,
            },
        )?,
        Format::Csv => match &report {
            EcpResult::Exhaustive(r) => ecp_rows(&r.outcomes)?,
            EcpResult::Single(r) => ecp_rows(std::slice::from_ref(r))?,
        },
    };
    Ok(Output { data, summary })
}

#[derive(Serialize)]
struct GenerateOutput<'a> {
    heralds: &'a [RemoteBellHerald],
}

const GENERATE_CSV_HEADER: [&str; 8] = [
    "detector",
    "second_order",
    "p_p",
    "herald_probability",
    "fidelity",
    "other_port_photons",
    "branch_probability",
    "branch_fidelity",
];

fn generate(cfg: &RunConfig) -> Result<Output, CliError> {
    let detectors = match cfg.detector {
        Some(d) => vec![d],
        None => vec![Detector::D6, Detector::D7],
    };
    let heralds = detectors
        .iter()
        .map(|&d| generate_remote_bell(&cfg.params, d, cfg.second_order))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(h) = heralds.iter().find(|h| h.fidelity.is_none()) {
        return Err(CliError::HeraldFailed(format!(
            "generate: {:?} never clicks at p_p = {}",
            h.detector, h.p_p
        )));
    }
    let summary = heralds
        .iter()
        .map(|h| {
            format!(
                "{:?} herald probability {:.6e}, fidelity {:.12}",
                h.detector,
                h.herald_probability,
                h.fidelity.unwrap_or(f64::NAN)
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    let summary = format!("generate: {summary}");
    let data = match cfg.format {
        Format::Json => json(cfg, GenerateOutput { heralds: &heralds })?,
        Format::Csv => {
            let mut buf = Vec::new();
            {
                let mut w = csv_writer(&mut buf);
                w.write_record(GENERATE_CSV_HEADER).map_err(io)?;
                for h in &heralds {
                    for b in &h.branches {
                        w.write_record([
                            format!("{:?}", h.detector),
                            h.second_order.to_string(),
                            format!("{:?}", h.p_p),
                            format!("{:?}", h.herald_probability),
                            h.fidelity.map(|f| format!("{f:?}")).unwrap_or_default(),
                            b.other_port_photons.to_string(),
                            format!("{:?}", b.probability),
                            format!("{:?}", b.fidelity),
                        ])
                        .map_err(io)?;
                    }
                }
                w.flush().map_err(io)?;
            }
            buf
        }
    };
    Ok(Output { data, summary })
}

#[derive(Serialize)]
struct CurveOutput<'a> {
    #[serde(flatten)]
    curve: &'a PapdCurve,
    envelope_ratio: f64,
    integral: Quadrature,
}

#[derive(Serialize)]
struct PapdOutput<'a> {
    t_p_max: f64,
    t_p_step: f64,
    feasibility: FeasibilityReport,
    curves: Vec<CurveOutput<'a>>,
}

fn papd(cfg: &RunConfig) -> Result<Output, CliError> {
    let grid = t_p_grid(cfg.t_p_max, cfg.t_p_step)?;
    let curves = papd_sweep(&cfg.ratios, &grid, &cfg.params)?;
    let feasibility = dark_count_threshold(&cfg.params)?;
    let ratios = cfg.ratios.iter().map(|r| format!("{r}")).collect::<Vec<_>>().join(",");
    let summary = format!(
        "papd: {} curves (ratios {ratios}), {} points each; min |alpha beta|^2 for {} Hz dark counts: {:.4e}",
        curves.len(),
        grid.len(),
        cfg.params.dark_rate,
        feasibility.min_alpha_beta_sq
    );
    let data = match cfg.format {
        Format::Json => {
            let out = curves
                .iter()
                .map(|c| {
                    Ok(CurveOutput {
                        curve: c,
                        envelope_ratio: c.envelope_ratio(),
                        integral: papd_integral(&c.params_used)?,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            json(
                cfg,
                PapdOutput {
                    t_p_max: cfg.t_p_max,
                    t_p_step: cfg.t_p_step,
                    feasibility,
                    curves: out,
                },
            )?
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_curves_csv(&curves, &mut buf).map_err(io)?;
            buf
        }
    };
    Ok(Output { data, summary })
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    pipeline: Pipeline,
    max_abs_error: f64,
    points: &'a [SweepPoint],
}

fn sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let points = herald_probability_sweep(cfg.pipeline, &cfg.params, &cfg.alpha_sq, &cfg.gt_list)?;
    let max_abs_error = points.iter().map(|p| p.abs_error).fold(0.0, f64::max);
    let summary = format!(
        "sweep: {} {} points, max |simulated - analytic| = {max_abs_error:.3e}",
        points.len(),
        cfg.pipeline.as_str()
    );
    let data = match cfg.format {
        Format::Json => json(
            cfg,
            SweepOutput {
                pipeline: cfg.pipeline,
                max_abs_error,
                points: &points,
            },
        )?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&points, &mut buf).map_err(io)?;
            buf
        }
    };
    Ok(Output { data, summary })
}

#[derive(Serialize)]
struct MonteCarloOutput<'a> {
    gt: f64,
    t: f64,
    stats: &'a MonteCarloStats,
}

fn montecarlo(cfg: &RunConfig) -> Result<Output, CliError> {
    let stats = monte_carlo(cfg.pipeline, &cfg.params, cfg.t, cfg.trials, cfg.seed, cfg.noise)?;
    let fid = |v: Option<f64>| v.map(|f| format!("{f:.12}")).unwrap_or_else(|| "n/a".into());
    let summary = format!(
        "montecarlo: {} {} trials, herald rate {:.5} +/- {:.5} (analytic {:.5}), {} false heralds, mean fidelity {}, effective {}",
        cfg.trials,
        cfg.pipeline.as_str(),
        stats.herald_rate,
        stats.herald_rate_stderr,
        stats.analytic_probability,
        stats.false_heralds,
        fid(stats.mean_final_fidelity),
        fid(stats.effective_heralded_fidelity)
    );
    let data = match cfg.format {
        Format::Json => json(
            cfg,
            MonteCarloOutput {
                gt: cfg.gt,
                t: cfg.t,
                stats: &stats,
            },
        )?,
        Format::Csv => {
            let mut buf = Vec::new();
            stats.write_csv(&mut buf).map_err(io)?;
            buf
        }
    };
    Ok(Output { data, summary })
}
