//! Declarative simulation runs: a [`ScenarioConfig`] in, a [`Table`] out.

mod config;
mod output;

pub use config::{
    Grid, InitialState, Measure, Model, ModelParams, PreparedState, RandomFieldSection, RtnSection,
    ScenarioConfig, StaticNoiseSection, StroboscopicSection,
};
pub use output::{format_number, write_sweep_csv, Table};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::DensityOperator;
use crate::measures::{
    average_entanglement, concurrence, entanglement_of_formation, information_decomposition,
};
use crate::noise::mc::{McState, BLOCKS, PRNG_NAME};
use crate::noise::{dephasing, random_field, stroboscopic, telegraph};
use crate::quadrature::CONVERGENCE_TOL;
use crate::tripartite::{embed_initial, evolve_abe};

/// Modelling choices recorded in every output header.
pub const DESIGN_TOGGLES: &[(&str, &str)] = &[
    ("frame", "rotating; free single-qubit terms dropped"),
    (
        "quadrature",
        "gauss-hermite, order doubling, max entry change 1e-8",
    ),
    ("rabi-distribution", "gaussian, normalized weights"),
    ("echo", "instantaneous sigma_x between propagation segments"),
    (
        "ou-update",
        "exact conditional; dt <= min(tau/20, 0.05/sigma); midpoint phase",
    ),
    (
        "rtn",
        "exponential waiting times at flip rate gamma; correlation exp(-2 gamma t)",
    ),
    ("stroboscopic-phases", "stationary AR(1), unclamped"),
    ("mc-error", "jackknife over 20 contiguous trajectory blocks"),
];

/// Values of one grid point before they are laid out as columns.
struct Point {
    state: DensityOperator,
    abe: Option<DensityOperator>,
    average: Option<f64>,
    mc: Option<McState>,
}

fn wants(cfg: &ScenarioConfig, f: impl Fn(Measure) -> bool) -> bool {
    cfg.measures.iter().any(|&m| f(m))
}

fn needs_tripartite(cfg: &ScenarioConfig) -> bool {
    wants(cfg, |m| {
        matches!(m, Measure::Tripartite | Measure::InfoDecomposition)
    })
}

fn needs_ensemble(cfg: &ScenarioConfig) -> bool {
    wants(cfg, |m| {
        matches!(
            m,
            Measure::HiddenEntanglement | Measure::AverageEntanglement
        )
    })
}

fn columns(cfg: &ScenarioConfig) -> Vec<String> {
    let mc = cfg.model.is_monte_carlo();
    let mut out = vec![cfg.model.time_label().to_string()];
    for m in &cfg.measures {
        let names: &[&str] = match (m, mc) {
            (Measure::Concurrence, false) => &["concurrence"],
            (Measure::Concurrence, true) => &["concurrence", "concurrence_se"],
            (Measure::Eof, false) => &["eof"],
            (Measure::Eof, true) => &["eof", "eof_se"],
            (Measure::Tripartite, _) => &["tripartite"],
            (Measure::InfoDecomposition, _) => &[
                "info_total",
                "info_local",
                "info_tripartite",
                "info_bipartite_max",
                "info_residual",
            ],
            (Measure::HiddenEntanglement, _) => &["hidden_entanglement"],
            (Measure::AverageEntanglement, _) => &["average_entanglement"],
        };
        out.extend(names.iter().map(|s| s.to_string()));
    }
    out
}

fn row(cfg: &ScenarioConfig, x: f64, p: &Point) -> Result<Vec<f64>> {
    let mut out = vec![x];
    for m in &cfg.measures {
        match m {
            Measure::Concurrence => {
                out.push(concurrence(&p.state)?);
                if let Some(mc) = &p.mc {
                    out.push(mc.stderr(concurrence)?);
                }
            }
            Measure::Eof => {
                out.push(entanglement_of_formation(&p.state)?);
                if let Some(mc) = &p.mc {
                    out.push(mc.stderr(entanglement_of_formation)?);
                }
            }
            Measure::Tripartite => {
                let abe = p.abe.as_ref().expect("tripartite state computed");
                out.push(information_decomposition(abe)?.tripartite);
            }
            Measure::InfoDecomposition => {
                let d =
                    information_decomposition(p.abe.as_ref().expect("tripartite state computed"))?;
                out.extend([d.total, d.local, d.tripartite, d.bipartite_max, d.residual]);
            }
            Measure::HiddenEntanglement => {
                let avg = p.average.expect("ensemble computed");
                out.push(avg - entanglement_of_formation(&p.state)?);
            }
            Measure::AverageEntanglement => out.push(p.average.expect("ensemble computed")),
        }
    }
    Ok(out)
}

fn analytic_point(
    cfg: &ScenarioConfig,
    params: &ModelParams,
    init: &PreparedState,
    t: f64,
) -> Result<Point> {
    let order = cfg.quadrature_order;
    let rho0 = &init.density;
    let ket = init.ket.as_ref().filter(|_| needs_ensemble(cfg));
    let (state, channel, abe) = match params {
        ModelParams::RandomField(p) => {
            let abe = if needs_tripartite(cfg) || cfg.model == Model::TripartiteFlows {
                Some(evolve_abe(&embed_initial(rho0)?, p, t, order)?)
            } else {
                None
            };
            let state = match &abe {
                Some(s) if cfg.model == Model::TripartiteFlows => s.two_qubit(),
                _ => random_field::evolve(rho0, p, t, order)?,
            };
            let channel = ket
                .map(|_| random_field::channel(p, t, order))
                .transpose()?;
            (state, channel, abe.map(|s| s.state().clone()))
        }
        ModelParams::StaticNoise(p) => {
            let state = dephasing::static_noise_evolve(rho0, p, t, order)?;
            let channel = ket
                .map(|_| dephasing::static_noise_channel(p, t, order))
                .transpose()?;
            (state, channel, None)
        }
        ModelParams::Rtn(p) => {
            let state = telegraph::rtn_evolve(rho0, p, t)?;
            let q = telegraph::rtn_coherence(p, t).clamp(-1.0, 1.0);
            let channel = ket.map(|_| telegraph::telegraph_channel(q)).transpose()?;
            (state, channel, None)
        }
        ModelParams::Stroboscopic(_) => unreachable!("Monte-Carlo model"),
    };
    let average = match (channel, ket) {
        (Some(ch), Some(psi)) => Some(average_entanglement(&ch.ensemble(psi)?)),
        _ => None,
    };
    Ok(Point {
        state,
        abe,
        average,
        mc: None,
    })
}

fn mc_points(
    cfg: &ScenarioConfig,
    params: &ModelParams,
    init: &PreparedState,
    times: &[f64],
) -> Result<Vec<Point>> {
    let ket = init.ket.as_ref().filter(|_| needs_ensemble(cfg));
    let states = match params {
        ModelParams::StaticNoise(p) => dephasing::ou_noise_series(
            &init.density,
            ket,
            p,
            times,
            cfg.trajectories.expect("validated"),
            cfg.seed,
        )?,
        ModelParams::Stroboscopic(p) => stroboscopic::stroboscopic_series(&init.density, ket, p)?,
        _ => unreachable!("analytic model"),
    };
    Ok(states
        .into_iter()
        .map(|s| Point {
            state: s.state.clone(),
            abe: None,
            average: s.average_entanglement,
            mc: Some(s),
        })
        .collect())
}

/// Physical time per unit of the grid axis.
fn time_unit(params: &ModelParams) -> f64 {
    match params {
        ModelParams::RandomField(p) => 1.0 / p.rabi(),
        ModelParams::StaticNoise(p) => 1.0 / p.sigma(),
        ModelParams::Rtn(p) => 1.0 / p.rate(),
        ModelParams::Stroboscopic(_) => 1.0,
    }
}

pub fn metadata(cfg: &ScenarioConfig) -> Vec<(String, String)> {
    let canonical = cfg.to_canonical_toml();
    let hash: String = Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let mut out = vec![
        (
            "generator".to_string(),
            format!("revival {}", env!("CARGO_PKG_VERSION")),
        ),
        ("model".to_string(), cfg.model.to_string()),
        ("config-sha256".to_string(), hash),
        ("seed".to_string(), cfg.seed.to_string()),
        (
            "quadrature-order".to_string(),
            cfg.quadrature_order.to_string(),
        ),
        (
            "quadrature-tolerance".to_string(),
            format!("{CONVERGENCE_TOL:e}"),
        ),
        ("prng".to_string(), PRNG_NAME.to_string()),
        ("mc-blocks".to_string(), BLOCKS.to_string()),
    ];
    for (k, v) in DESIGN_TOGGLES {
        out.push((format!("design.{k}"), v.to_string()));
    }
    for line in canonical.lines().filter(|l| !l.trim().is_empty()) {
        out.push(("config".to_string(), line.to_string()));
    }
    out
}

/// Runs one scenario. Rows follow the grid order regardless of how the
/// work is scheduled.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Table> {
    cfg.validate()?;
    let params = cfg.model_params()?;
    let init = cfg.initial_state.prepare()?;

    let axis: Vec<f64> = match (&params, &cfg.grid) {
        (ModelParams::Stroboscopic(p), _) => (0..=p.steps).map(|k| k as f64).collect(),
        (_, Some(g)) => g.values(),
        (_, None) => return Err(Error::config("grid", "section is required")),
    };
    let unit = time_unit(&params);
    let times: Vec<f64> = axis.iter().map(|x| x * unit).collect();

    let points = if cfg.model.is_monte_carlo() {
        mc_points(cfg, &params, &init, &times)?
    } else {
        times
            .par_iter()
            .map(|&t| analytic_point(cfg, &params, &init, t))
            .collect::<Result<Vec<_>>>()?
    };
    let rows = axis
        .par_iter()
        .zip(points.par_iter())
        .map(|(&x, p)| row(cfg, x, p))
        .collect::<Result<Vec<_>>>()?;

    Ok(Table {
        metadata: metadata(cfg),
        columns: columns(cfg),
        rows,
    })
}

/// One table per value of a numeric model parameter, in the given order.
pub fn sweep(cfg: &ScenarioConfig, parameter: &str, values: &[f64]) -> Result<Vec<(f64, Table)>> {
    if !cfg.sweepable().contains(&parameter) {
        // reuse the error message of an actual override
        cfg.with_parameter(parameter, f64::NAN)?;
    }
    values
        .iter()
        .map(|&v| Ok((v, run_scenario(&cfg.with_parameter(parameter, v)?)?)))
        .collect()
}
