//! Runners behind each experiment name. Every runner reads its own strict
//! parameter block, returns tables and records the knobs it used.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{Experiment, ExperimentConfig};
use super::output::{Column, Table};
use super::CliError;
use crate::analytic2le::{
    asymptotic_amplitudes, g2_transmitted, one_photon_amplitudes, one_photon_spectrum, two_photon_bound_state,
    SPECTRAL_CUTOFF,
};
use crate::error::Error;
use crate::grid::{linspace, make_grid, Grid2d};
use crate::lattice::{
    analytic_transmission, build_model, transmission_from_run, two_photon_g2_map, Interaction, LatticeModel,
    LatticeState, PacketSpec, TwoPhotonOptions, CLEARANCE_WIDTHS, EDGE_TOLERANCE, NORM_BUDGET,
};
use crate::numerics::brent;
use crate::params::{CoherentInput, EmitterParams, ThreeLevelParams};
use crate::router3le::{
    ats_splitting, bloch_steady_state_oracle, driven_qubit_steady_state, router_amplitude, DrivenQubitParams,
    ATS_SCAN_POINTS,
};
use crate::rydberg::{
    bound_state_overlap, bound_states_with, even_ground_root, evolve_psi, g2_and_phase, ground_state_on, step_limit,
    suggested_half_width, BoundStateOptions, PsiField, RydbergMedium, SolverOptions, DEFAULT_CELLS_PER_RADIUS,
    WALL_TOLERANCE,
};

/// Tables plus the bookkeeping that goes into the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub knobs: Value,
    pub diagnostics: Value,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.experiment {
        Experiment::Spectrum2le => spectrum2le(cfg.params()?),
        Experiment::TwoPhoton2le => twophoton2le(cfg.params()?),
        Experiment::G2Coherent => g2coherent(cfg.params()?),
        Experiment::Router => router(cfg.params()?),
        Experiment::LatticeT => lattice_t(cfg.params()?),
        Experiment::LatticeG2 => lattice_g2(cfg.params()?),
        Experiment::RydbergRun => rydberg_run(cfg.params()?),
        Experiment::RydbergBound => rydberg_bound(cfg.params()?),
        Experiment::BlochCheck => bloch_check(cfg.params()?, cfg.seed),
    }
}

fn cols(spec: &[(&str, &str)]) -> Vec<Column> {
    spec.iter().map(|(n, u)| Column::new(n, u)).collect()
}

fn count(name: &'static str, n: usize, min: usize) -> Result<usize, Error> {
    if n < min {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{n} < {min}"),
        });
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Spectrum2leParams {
    pub guided_rate: f64,
    pub loss_rate: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_points: usize,
}

impl Default for Spectrum2leParams {
    fn default() -> Self {
        Self {
            guided_rate: 1.0,
            loss_rate: 0.0,
            delta_min: -5.0,
            delta_max: 5.0,
            n_points: 1001,
        }
    }
}

fn spectrum2le(p: Spectrum2leParams) -> Result<Outcome, CliError> {
    let e = EmitterParams::new(0.0, p.loss_rate, p.guided_rate, 1.0)?;
    let g = e.guided_rate();
    let units = make_grid(p.delta_min, p.delta_max, p.n_points)?;
    let grid = make_grid(p.delta_min * g, p.delta_max * g, p.n_points)?;
    let s = one_photon_spectrum(&e, &grid);
    let mut table = Table::new(
        "spectrum2le",
        "one-photon transmission and reflection of a two-level emitter",
        cols(&[("delta_over_Gamma", "1"), ("T", "1"), ("R", "1")]),
    )
    .plotted(&[1, 2]);
    for ((x, t), r) in units.iter().zip(s.transmission()).zip(s.reflection()) {
        table.push(vec![x, t, r]);
    }
    let r0 = one_photon_amplitudes(&e, 0.0).reflection();
    let half = |d: f64| one_photon_amplitudes(&e, d).reflection() - 0.5 * r0;
    let hwhm = if r0 > 0.0 {
        Some(brent(half, 0.0, 1e3 * e.linewidth(), 1e-15)?)
    } else {
        None
    };
    Ok(Outcome {
        tables: vec![table],
        knobs: json!({ "params": p, "scale": "Gamma" }),
        diagnostics: json!({
            "R_at_resonance": r0,
            "hwhm_over_Gamma": hwhm.map(|h| h / g),
            "hwhm_expected_over_Gamma": e.linewidth() / g,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoPhoton2leParams {
    pub guided_rate: f64,
    pub x_max: f64,
    pub dx: f64,
    pub k1_detuning: f64,
    pub k2_detuning: f64,
}

impl Default for TwoPhoton2leParams {
    fn default() -> Self {
        Self {
            guided_rate: 1.0,
            x_max: 5.0,
            dx: 0.01,
            k1_detuning: 0.5,
            k2_detuning: -0.5,
        }
    }
}

fn twophoton2le(p: TwoPhoton2leParams) -> Result<Outcome, CliError> {
    let e = EmitterParams::lossless(0.0, p.guided_rate)?;
    let g = e.guided_rate();
    if !(p.dx > 0.0 && p.x_max > p.dx) {
        return Err(Error::InvalidParameter {
            name: "dx",
            reason: "need 0 < dx < x_max".into(),
        }
        .into());
    }
    let half = (p.x_max / p.dx).round() as i64;
    let xs: Vec<f64> = (-half..=half).map(|i| i as f64 * p.dx).collect();

    let mut asym = Table::new(
        "twophoton2le_asymptotic",
        "outgoing two-photon densities versus separation at zero centre coordinate",
        cols(&[
            ("x_Gamma_over_vg", "1"),
            ("abs_t2_sq", "1/length^2"),
            ("abs_r2_sq", "1/length^2"),
        ]),
    )
    .plotted(&[1, 2]);
    let mut centre = Table::new(
        "twophoton2le_rt",
        "one-transmitted one-reflected density versus centre coordinate at zero separation",
        cols(&[("xc_Gamma_over_vg", "1"), ("abs_rt_sq", "1/length^2")]),
    )
    .plotted(&[1]);
    for &x in &xs {
        let (t2, r2, _) = asymptotic_amplitudes(&e, 0.5 * x / g, -0.5 * x / g);
        asym.push(vec![x, t2.norm_sqr(), r2.norm_sqr()]);
        let (_, _, rt) = asymptotic_amplitudes(&e, x / g, x / g);
        centre.push(vec![x, rt.norm_sqr()]);
    }
    let mid = half as usize;
    let t_sq = asym.column(1);
    let left_slope = (t_sq[mid] - t_sq[mid - 1]) / p.dx;
    let right_slope = (t_sq[mid + 1] - t_sq[mid]) / p.dx;
    let r2_mid = asym.rows[mid][2];
    let peak = t_sq
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > t_sq[b] { i } else { b });

    let k1 = e.wavevector_of(p.k1_detuning * g);
    let k2 = e.wavevector_of(p.k2_detuning * g);
    let grid = Grid2d::new(xs.iter().map(|x| x / g).collect(), vec![0.0])?;
    let bs = two_photon_bound_state(&e, k1, k2, &grid)?;
    let mut bound = Table::new(
        "twophoton2le_bound",
        "two-photon eigenstate along x1 with x2 = 0",
        cols(&[
            ("x1_Gamma_over_vg", "1"),
            ("abs_g_rr", "1/length"),
            ("abs_bound", "1/length"),
            ("abs_e_r", "1/sqrt(length)"),
        ]),
    )
    .plotted(&[1, 2]);
    for (i, &x) in xs.iter().enumerate() {
        bound.push(vec![
            x,
            bs.g_rr.get(i, 0).norm(),
            bs.bound.get(i, 0).norm(),
            bs.e_r[i].norm(),
        ]);
    }
    Ok(Outcome {
        tables: vec![asym, centre, bound],
        knobs: json!({ "params": p, "points": xs.len(), "scale": "Gamma, v_g = 1" }),
        diagnostics: json!({
            "r2_at_coincidence": r2_mid,
            "t2_peak_at": xs[peak],
            "t2_left_slope": left_slope,
            "t2_right_slope": right_slope,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct G2CoherentParams {
    pub omega_e: f64,
    pub k0: f64,
    pub delta_k: f64,
    pub n_bar: f64,
    pub allow_high_occupancy: bool,
    pub ratios: Vec<f64>,
    pub tau_max: f64,
    pub n_points: usize,
}

impl Default for G2CoherentParams {
    fn default() -> Self {
        Self {
            omega_e: 10.0,
            k0: 10.0,
            delta_k: 1.0,
            n_bar: 0.5,
            allow_high_occupancy: false,
            ratios: vec![0.2, 1.6, 3.0],
            tau_max: 5.0,
            n_points: 501,
        }
    }
}

fn g2coherent(p: G2CoherentParams) -> Result<Outcome, CliError> {
    let input = if p.allow_high_occupancy {
        CoherentInput::with_high_occupancy(p.k0, p.delta_k, p.n_bar)?
    } else {
        CoherentInput::new(p.k0, p.delta_k, p.n_bar)?
    };
    if p.ratios.is_empty() {
        return Err(Error::InvalidParameter {
            name: "ratios",
            reason: "empty".into(),
        }
        .into());
    }
    count("n_points", p.n_points, 2)?;
    let taus = linspace(-p.tau_max, p.tau_max, p.n_points);
    let curves: Vec<Vec<f64>> = p
        .ratios
        .par_iter()
        .map(|&ratio| {
            let e = EmitterParams::new(p.omega_e, 1.0, ratio, 1.0)?;
            g2_transmitted(&e, &input, &taus)
        })
        .collect::<Result<_, Error>>()?;
    let mut columns = vec![Column::new("tau_gamma", "1")];
    columns.extend(p.ratios.iter().map(|r| Column::new(&format!("g2_ratio_{r}"), "1")));
    let plot: Vec<usize> = (1..columns.len()).collect();
    let mut table = Table::new(
        "g2coherent",
        "transmitted g2 of a weak coherent packet, one column per Gamma/gamma",
        columns,
    )
    .plotted(&plot);
    for (i, &tau) in taus.iter().enumerate() {
        let mut row = vec![tau];
        row.extend(curves.iter().map(|c| c[i]));
        table.push(row);
    }
    let summary: Vec<Value> = p
        .ratios
        .iter()
        .zip(&curves)
        .map(|(r, c)| {
            let at0 = g2_transmitted(&EmitterParams::new(p.omega_e, 1.0, *r, 1.0).unwrap(), &input, &[0.0]);
            json!({
                "ratio": r,
                "g2_at_zero": at0.ok().map(|v| v[0]),
                "min": c.iter().copied().fold(f64::INFINITY, f64::min),
                "max_abs_dev_from_one": c.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max),
            })
        })
        .collect();
    Ok(Outcome {
        tables: vec![table],
        knobs: json!({ "params": p, "spectral_cutoff_widths": SPECTRAL_CUTOFF, "scale": "gamma, v_g = 1" }),
        diagnostics: json!({ "curves": summary }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RouterParams {
    pub loss_rate: f64,
    pub metastable_loss: f64,
    pub control_detuning: f64,
    pub control_rabi: Vec<f64>,
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_points: usize,
}

impl Default for RouterParams {
    fn default() -> Self {
        Self {
            loss_rate: 0.25,
            metastable_loss: 0.025,
            control_detuning: -0.5,
            control_rabi: vec![0.0, 0.5, 4.0, 8.0],
            delta_min: -8.0,
            delta_max: 8.0,
            n_points: 1601,
        }
    }
}

fn router(p: RouterParams) -> Result<Outcome, CliError> {
    let base = EmitterParams::new(0.0, p.loss_rate, 1.0, 1.0)?;
    let models: Vec<ThreeLevelParams> = p
        .control_rabi
        .iter()
        .map(|&w| ThreeLevelParams::new(base, p.metastable_loss, w, p.control_detuning))
        .collect::<Result<_, Error>>()?;
    let grid = make_grid(p.delta_min, p.delta_max, p.n_points)?;
    let mut columns = vec![
        Column::new("Delta_over_Gamma", "1"),
        Column::new("raman_delta_over_Gamma", "1"),
    ];
    columns.extend(p.control_rabi.iter().map(|w| Column::new(&format!("T_omega_{w}"), "1")));
    let plot: Vec<usize> = (2..columns.len()).collect();
    let mut spectra = Table::new(
        "router",
        "three-level router transmission versus probe and Raman detuning, one column per Omega_c/Gamma",
        columns,
    )
    .plotted(&plot);
    for d in grid.iter() {
        let mut row = vec![d, d - p.control_detuning];
        row.extend(models.iter().map(|m| router_amplitude(m, d).transmission()));
        spectra.push(row);
    }
    let mut ats = Table::new(
        "router_ats",
        "Autler-Townes doublet positions and splitting (NaN when no doublet)",
        cols(&[
            ("omega_c_over_Gamma", "1"),
            ("lower", "Gamma"),
            ("upper", "Gamma"),
            ("splitting", "Gamma"),
            ("splitting_over_omega_c", "1"),
        ]),
    );
    let mut regimes = Vec::new();
    for m in &models {
        let w = m.control_rabi();
        match ats_splitting(m) {
            Ok(a) => {
                ats.push(vec![w, a.lower, a.upper, a.splitting, a.splitting / w]);
                regimes.push(json!({ "omega_c": w, "regime": a.regime }));
            }
            Err(Error::NoDoublet) => {
                ats.push(vec![w, f64::NAN, f64::NAN, f64::NAN, f64::NAN]);
                regimes.push(json!({ "omega_c": w, "regime": Value::Null }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let at_raman: Vec<Value> = models
        .iter()
        .map(|m| json!({ "omega_c": m.control_rabi(), "T": router_amplitude(m, p.control_detuning).transmission() }))
        .collect();
    Ok(Outcome {
        tables: vec![spectra, ats],
        knobs: json!({ "params": p, "ats_scan_points": ATS_SCAN_POINTS, "ats_scan_range_omega_c": 3.0, "scale": "Gamma" }),
        diagnostics: json!({ "regimes": regimes, "transmission_at_raman_resonance": at_raman }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeTParams {
    pub n_sites: usize,
    pub hopping: f64,
    /// `Gamma / J` at the carrier.
    pub guided_rates: Vec<f64>,
    /// Carrier detunings in units of `Gamma`.
    pub detunings: Vec<f64>,
    pub sigma: f64,
    pub k0: f64,
    pub snapshot: bool,
}

impl Default for LatticeTParams {
    fn default() -> Self {
        Self {
            n_sites: 2048,
            hopping: 1.0,
            guided_rates: vec![0.05, 0.1],
            detunings: (0..11).map(|i| -4.0 + 0.8 * i as f64).collect(),
            sigma: 80.0,
            k0: FRAC_PI_2,
            snapshot: false,
        }
    }
}

/// Lattice whose emitter sits `delta * Gamma` below the carrier energy.
pub fn detuned_model(
    n_sites: usize,
    hopping: f64,
    k0: f64,
    guided_rate: f64,
    delta: f64,
) -> Result<LatticeModel, Error> {
    let probe = build_model(hopping, 0.0, 0.0, Interaction::HardCore, n_sites)?;
    let v0 = (guided_rate * hopping * probe.group_velocity(k0)).sqrt();
    let omega_e = probe.dispersion(k0) - delta * guided_rate * hopping;
    build_model(hopping, omega_e, v0, Interaction::HardCore, n_sites)
}

fn lattice_t(p: LatticeTParams) -> Result<Outcome, CliError> {
    if p.guided_rates.is_empty() || p.detunings.is_empty() {
        return Err(Error::InvalidParameter {
            name: "detunings",
            reason: "empty sweep".into(),
        }
        .into());
    }
    let packet = PacketSpec::new(p.k0, p.sigma)?;
    let jobs: Vec<(f64, f64)> = p
        .guided_rates
        .iter()
        .flat_map(|&g| p.detunings.iter().map(move |&d| (g, d)))
        .collect();
    // Validate every model before spending time on any run.
    for &(g, d) in &jobs {
        detuned_model(p.n_sites, p.hopping, p.k0, g, d)?;
    }
    let results = jobs
        .par_iter()
        .map(|&(g, d)| {
            let model = detuned_model(p.n_sites, p.hopping, p.k0, g, d)?;
            let run = transmission_from_run(&model, &packet)?;
            let a = analytic_transmission(&model, &packet)?;
            Ok((run, a))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut table = Table::new(
        "latticeT",
        "tight-binding wave-packet transmission against the linear-dispersion prediction",
        cols(&[
            ("Gamma_over_J", "1"),
            ("delta_over_Gamma", "1"),
            ("T_lattice", "1"),
            ("R_lattice", "1"),
            ("T_analytic", "1"),
            ("T_plane_wave", "1"),
            ("abs_diff", "1"),
            ("drift_per_1e4_steps", "1"),
        ]),
    );
    let mut max_diff: f64 = 0.0;
    let mut max_drift: f64 = 0.0;
    for (&(g, d), (run, a)) in jobs.iter().zip(&results) {
        let diff = (run.transmission - a.packet_average).abs();
        max_diff = max_diff.max(diff);
        max_drift = max_drift.max(run.drift_per_1e4);
        table.push(vec![
            g,
            d,
            run.transmission,
            run.reflection,
            a.packet_average,
            a.plane_wave,
            diff,
            run.drift_per_1e4,
        ]);
    }
    let mut tables = vec![table];
    if p.snapshot {
        let model = detuned_model(p.n_sites, p.hopping, p.k0, jobs[0].0, jobs[0].1)?;
        tables.push(initial_snapshot(&model, &packet));
    }
    let steps: Vec<usize> = results.iter().map(|(r, _)| r.steps).collect();
    Ok(Outcome {
        tables,
        knobs: json!({
            "params": p,
            "integrator": "rk4",
            "dt": results[0].0.dt,
            "norm_budget_per_1e4": NORM_BUDGET,
            "edge_tolerance": EDGE_TOLERANCE,
            "clearance_widths": CLEARANCE_WIDTHS,
            "packet_delta_k": packet.delta_k(),
        }),
        diagnostics: json!({
            "max_abs_diff": max_diff,
            "tolerance": 1e-2,
            "within_tolerance": max_diff < 1e-2,
            "max_drift_per_1e4": max_drift,
            "steps": steps,
        }),
    })
}

fn initial_snapshot(model: &LatticeModel, packet: &PacketSpec) -> Table {
    let start = model.emitter_site() as f64 - CLEARANCE_WIDTHS * packet.sigma;
    let state = LatticeState::one_photon(crate::lattice::gaussian_orbital(model, start, packet.sigma, packet.k0));
    let mut t = Table::new(
        "latticeT_snapshot",
        "initial one-photon amplitudes of the first run (last row is the emitter)",
        cols(&[("site", "1"), ("re_psi", "1"), ("im_psi", "1")]),
    );
    for (i, re, im) in state.snapshot_rows() {
        t.push(vec![i as f64, re, im]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionName {
    HardCore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InteractionConfig {
    Named(InteractionName),
    Finite(f64),
}

impl InteractionConfig {
    fn resolve(&self) -> Interaction {
        match self {
            InteractionConfig::Named(InteractionName::HardCore) => Interaction::HardCore,
            InteractionConfig::Finite(u) => Interaction::Finite(*u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeG2Params {
    pub n_sites: usize,
    pub hopping: f64,
    pub guided_rate: f64,
    pub sigma: f64,
    pub dt: f64,
    pub interaction: InteractionConfig,
    pub profile_widths: f64,
    pub u_sweep: Vec<f64>,
    pub sweep_sites: usize,
    pub sweep_sigma: f64,
}

impl Default for LatticeG2Params {
    fn default() -> Self {
        Self {
            n_sites: 256,
            hopping: 1.0,
            guided_rate: 0.3,
            sigma: 10.0,
            dt: 0.01,
            interaction: InteractionConfig::Named(InteractionName::HardCore),
            profile_widths: 2.0,
            u_sweep: vec![10.0, 100.0, 1000.0],
            sweep_sites: 64,
            sweep_sigma: 2.0,
        }
    }
}

fn lattice_g2(p: LatticeG2Params) -> Result<Outcome, CliError> {
    if !(p.dt > 0.0 && p.dt <= crate::lattice::MAX_DT_J) {
        return Err(Error::StepTooLarge {
            step: p.dt,
            limit: crate::lattice::MAX_DT_J,
        }
        .into());
    }
    let opts_for = |m: &LatticeModel| TwoPhotonOptions {
        dt: p.dt / m.hopping(),
        profile_widths: p.profile_widths,
    };
    let model = detuned_model(p.n_sites, p.hopping, FRAC_PI_2, p.guided_rate, 0.0)?
        .with_interaction(p.interaction.resolve())?;
    let packet = PacketSpec::resonant(p.sigma)?;
    let sweep_packet = PacketSpec::resonant(p.sweep_sigma)?;
    let sweep_models: Vec<LatticeModel> = p
        .u_sweep
        .iter()
        .map(|&u| {
            detuned_model(p.sweep_sites, p.hopping, FRAC_PI_2, p.guided_rate, 0.0)?
                .with_interaction(Interaction::Finite(u * p.hopping))
        })
        .collect::<Result<_, Error>>()?;

    let (main, sweep) = rayon::join(
        || two_photon_g2_map(&model, &packet, opts_for(&model)),
        || {
            sweep_models
                .par_iter()
                .map(|m| two_photon_g2_map(m, &sweep_packet, opts_for(m)))
                .collect::<Result<Vec<_>, Error>>()
        },
    );
    let main = main?;
    let sweep = sweep?;

    let mut profile = Table::new(
        "latticeG2",
        "two-photon coincidences versus separation in the transmitted and reflected regions",
        cols(&[
            ("separation", "sites"),
            ("g2_TT", "1"),
            ("g2_RR", "1"),
            ("P_TT", "1"),
            ("P_RR", "1"),
        ]),
    )
    .plotted(&[1, 2]);
    for (i, d) in main.transmitted.separations.iter().enumerate() {
        profile.push(vec![
            *d as f64,
            main.transmitted.g2[i],
            main.reflected.g2[i],
            main.transmitted.probability[i],
            main.reflected.probability[i],
        ]);
    }
    let mut conv = Table::new(
        "latticeG2_sweep",
        "largest emitter double-occupancy amplitude for finite on-site interaction",
        cols(&[
            ("U_over_J", "1"),
            ("max_double_occupancy", "1"),
            ("dt", "1/J"),
            ("steps", "1"),
        ]),
    );
    for (u, r) in p.u_sweep.iter().zip(&sweep) {
        conv.push(vec![*u, r.max_double_occupancy, r.dt * p.hopping, r.steps as f64]);
    }
    Ok(Outcome {
        tables: vec![profile, conv],
        knobs: json!({
            "params": p,
            "integrator": "rk4",
            "dt_used": main.dt,
            "norm_budget_per_1e4": NORM_BUDGET,
            "edge_tolerance": EDGE_TOLERANCE,
            "max_interaction_phase": crate::lattice::MAX_INTERACTION_PHASE,
        }),
        diagnostics: json!({
            "g2_TT_at_zero": main.transmitted.at(0),
            "g2_RR_at_zero": main.reflected.at(0),
            "weight_TT": main.transmitted.weight,
            "weight_RR": main.reflected.weight,
            "drift_per_1e4": main.drift_per_1e4,
            "edge_weight": main.edge_weight,
            "max_asymmetry": main.max_asymmetry,
            "max_double_occupancy": main.max_double_occupancy,
            "steps": main.steps,
        }),
    })
}

// Serde cannot combine `flatten` with `deny_unknown_fields`, so the medium
// fields are repeated in both Rydberg parameter blocks.
macro_rules! medium_accessor {
    ($t:ty) => {
        impl $t {
            fn medium(&self) -> Result<RydbergMedium, Error> {
                RydbergMedium::from_optical_depths(self.od, self.od_b, self.r_b, self.gamma, self.delta, self.omega_c)
            }
        }
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RydbergRunParams {
    pub od: f64,
    pub od_b: f64,
    pub r_b: f64,
    pub gamma: f64,
    pub delta: f64,
    pub omega_c: f64,
    pub half_width: Option<f64>,
    pub cells_per_radius: usize,
    pub step: Option<f64>,
    pub smoothing: bool,
    pub dissipative: bool,
    pub free: bool,
    pub tau_max: f64,
    pub n_tau: usize,
}

impl Default for RydbergRunParams {
    fn default() -> Self {
        Self {
            od: 40.0,
            od_b: 10.0,
            r_b: 1.0,
            gamma: 1.0,
            delta: 4.6,
            omega_c: 1.0,
            half_width: None,
            cells_per_radius: DEFAULT_CELLS_PER_RADIUS,
            step: None,
            smoothing: false,
            dissipative: false,
            free: false,
            tau_max: 100.0,
            n_tau: 201,
        }
    }
}

medium_accessor!(RydbergRunParams);

fn rydberg_run(p: RydbergRunParams) -> Result<Outcome, CliError> {
    let m = p.medium()?;
    count("cells_per_radius", p.cells_per_radius, 4)?;
    count("n_tau", p.n_tau, 2)?;
    let w = p.half_width.unwrap_or_else(|| suggested_half_width(&m));
    let n = ((2.0 * w / m.r_b()).round() as usize).max(1) * p.cells_per_radius;
    let psi0 = PsiField::uniform(w, n)?;
    let opts = SolverOptions {
        step: p.step,
        smoothing: p.smoothing,
        dissipative: p.dissipative,
        free: p.free,
    };
    let run = evolve_psi(&m, &psi0, opts)?;
    let taus = linspace(0.0, p.tau_max, p.n_tau);
    let curves = g2_and_phase(&m, &run.psi, &taus)?;
    let mut table = Table::new(
        "rydbergRun",
        "pair correlation and conditional phase at the medium exit",
        cols(&[("tau", "1/gamma"), ("r", "r_B"), ("g2", "1"), ("phi", "rad")]),
    )
    .plotted(&[2]);
    for i in 0..taus.len() {
        table.push(vec![
            curves.tau[i],
            m.v_eit() * curves.tau[i] / m.r_b(),
            curves.g2[i],
            curves.phase[i],
        ]);
    }
    let mut profile = Table::new(
        "rydbergRun_psi",
        "exit wavefunction over the relative coordinate",
        cols(&[("r", "r_B"), ("abs_psi_sq", "1"), ("re_psi", "1"), ("im_psi", "1")]),
    )
    .plotted(&[1]);
    for (r, z) in run.psi.r.iter().zip(&run.psi.values) {
        profile.push(vec![r / m.r_b(), z.norm_sqr(), z.re, z.im]);
    }
    let overlap = if m.delta() != 0.0 {
        let ground = ground_state_on(&m, &run.psi)?;
        Some(bound_state_overlap(&run.psi, &ground, 0.8))
    } else {
        None
    };
    Ok(Outcome {
        tables: vec![table, profile],
        knobs: json!({
            "params": p,
            "half_width": w,
            "grid_points": n,
            "step": run.step,
            "step_limit": step_limit(&m),
            "steps": run.steps,
            "wall_tolerance": WALL_TOLERANCE,
            "scheme": "crank-nicolson, neumann walls, cell-centred grid",
        }),
        diagnostics: json!({
            "flags": run.flags,
            "g2_at_zero": curves.g2[0],
            "centre_phase_unwrapped": run.centre_phase,
            "phase_estimate": crate::rydberg::conditional_phase_estimate(&m).ok(),
            "ground_state_overlap": overlap,
            "norm_drift": run.norm_drift,
            "wall_deviation": run.wall_deviation,
            "length": m.length(),
            "v_eit": m.v_eit(),
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RydbergBoundParams {
    pub od: f64,
    pub od_b: f64,
    pub r_b: f64,
    pub gamma: f64,
    pub delta: f64,
    pub omega_c: f64,
    pub cells_per_radius: usize,
    pub decay_lengths: f64,
    pub sample_step: f64,
}

impl Default for RydbergBoundParams {
    fn default() -> Self {
        let d = BoundStateOptions::default();
        Self {
            od: 40.0,
            od_b: 10.0,
            r_b: 1.0,
            gamma: 1.0,
            delta: 4.6,
            omega_c: 1.0,
            cells_per_radius: d.cells_per_radius,
            decay_lengths: d.decay_lengths,
            sample_step: 0.05,
        }
    }
}

medium_accessor!(RydbergBoundParams);

fn rydberg_bound(p: RydbergBoundParams) -> Result<Outcome, CliError> {
    let m = p.medium()?;
    if !(p.sample_step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sample_step",
            reason: "must be positive".into(),
        }
        .into());
    }
    let opts = BoundStateOptions {
        cells_per_radius: p.cells_per_radius,
        decay_lengths: p.decay_lengths,
    };
    let states = bound_states_with(&m, opts)?;
    let a = m.kinetic().abs();
    let z0 = m.well_strength();
    let root = even_ground_root(z0)?;
    let mut eig = Table::new(
        "rydbergBound",
        "bound states of the effective square well",
        cols(&[
            ("index", "1"),
            ("eigenvalue", "1/length"),
            ("kappa", "1/r_B"),
            ("even", "1"),
            ("xi", "1"),
        ]),
    );
    for (j, s) in states.iter().enumerate() {
        let xi = ((m.potential().abs() + s.eigenvalue) / a).max(0.0).sqrt() * m.r_b();
        eig.push(vec![
            j as f64,
            s.eigenvalue,
            s.kappa * m.r_b(),
            if s.even { 1.0 } else { 0.0 },
            xi,
        ]);
    }
    let ground_xi = eig.rows[0][4];

    let reach = m.r_b() + 8.0 / states.last().map(|s| s.kappa).unwrap_or(1.0).max(1e-12);
    let first = &states[0];
    let h = first.r[1] - first.r[0];
    let stride = ((p.sample_step * m.r_b() / h).round() as usize).max(1);
    let mut columns = vec![Column::new("r", "r_B")];
    columns.extend((0..states.len()).map(|j| Column::new(&format!("phi_{j}"), "1/sqrt(length)")));
    let plot: Vec<usize> = (1..columns.len()).collect();
    let mut samples = Table::new("rydbergBound_states", "bound-state eigenfunctions", columns).plotted(&plot);
    let centre = first.r.len() / 2;
    // Sample symmetrically about r = 0 so the rows are parity-paired.
    let offsets: Vec<usize> = (0..).map(|k| k * stride).take_while(|&o| o < centre).collect();
    let mut idx: Vec<usize> = offsets.iter().rev().map(|o| centre - 1 - o).collect();
    idx.extend(offsets.iter().map(|o| centre + o));
    for i in idx.into_iter().filter(|&i| first.r[i].abs() <= reach) {
        let mut row = vec![first.r[i] / m.r_b()];
        row.extend(states.iter().map(|s| s.eigenfunction[i]));
        samples.push(row);
    }
    Ok(Outcome {
        tables: vec![eig, samples],
        knobs: json!({
            "params": p,
            "grid_spacing": h,
            "method": "sturm bisection, richardson h and h/2",
        }),
        diagnostics: json!({
            "count": states.len(),
            "well_strength": z0,
            "ground_xi": ground_xi,
            "transcendental_root": root,
            "relative_error": (ground_xi - root).abs() / root,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlochCheckParams {
    pub n_points: usize,
    pub r0: f64,
    pub gamma1_max: f64,
    pub gamma_phi_max: f64,
    pub omega_max: f64,
    pub delta_max: f64,
}

impl Default for BlochCheckParams {
    fn default() -> Self {
        Self {
            n_points: 100,
            r0: 1.0,
            gamma1_max: 2.0,
            gamma_phi_max: 1.0,
            omega_max: 3.0,
            delta_max: 4.0,
        }
    }
}

fn bloch_check(p: BlochCheckParams, seed: u64) -> Result<Outcome, CliError> {
    count("n_points", p.n_points, 1)?;
    for (name, v) in [
        ("gamma1_max", p.gamma1_max),
        ("gamma_phi_max", p.gamma_phi_max),
        ("omega_max", p.omega_max),
        ("delta_max", p.delta_max),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter {
                name: "range",
                reason: format!("{name} must be positive"),
            }
            .into());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(
        "blochCheck",
        "driven-qubit reflection, closed form against the Bloch steady state",
        cols(&[
            ("gamma1", "1"),
            ("gamma_phi", "1"),
            ("omega", "1"),
            ("delta", "1"),
            ("re_r", "1"),
            ("im_r", "1"),
            ("re_r_bloch", "1"),
            ("im_r_bloch", "1"),
            ("abs_diff", "1"),
            ("abs_t_plus_r_minus_1", "1"),
        ]),
    );
    let mut worst: f64 = 0.0;
    for _ in 0..p.n_points {
        let g1 = rng.random_range(1e-2 * p.gamma1_max..p.gamma1_max);
        let gp = rng.random_range(0.0..p.gamma_phi_max);
        let om = rng.random_range(0.0..p.omega_max);
        let d = rng.random_range(-p.delta_max..p.delta_max);
        let q = DrivenQubitParams::with_r0(g1, gp, om, p.r0)?;
        let a = driven_qubit_steady_state(&q, d)?;
        let b = bloch_steady_state_oracle(&q, d)?;
        let diff = (a.r - b.r).norm();
        worst = worst.max(diff);
        table.push(vec![
            g1,
            gp,
            om,
            d,
            a.r.re,
            a.r.im,
            b.r.re,
            b.r.im,
            diff,
            (a.t + a.r - 1.0).norm(),
        ]);
    }
    Ok(Outcome {
        tables: vec![table],
        knobs: json!({ "params": p, "rng": "chacha8", "solver": "lu 3x3" }),
        diagnostics: json!({ "max_abs_diff": worst, "tolerance": 1e-8, "within_tolerance": worst <= 1e-8 }),
    })
}
