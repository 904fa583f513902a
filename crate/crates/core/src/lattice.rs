//! Tight-binding waveguide with a side-coupled bosonic emitter site, evolved
//! in time for one- and two-photon wave packets.
//!
//! The chain has hard walls and hopping `J`, so its band is `-2J cos k`. The
//! emitter is an extra site with energy `omega_e` and an on-site
//! interaction that is either finite or hard-core (double occupancy
//! projected out). Two-photon states are stored as full symmetric matrices
//! over the `n_sites + 1` single-particle orbitals; the update keeps them
//! exactly symmetric.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analytic2le::one_photon_amplitudes;
use crate::error::{finite, non_negative, positive, Error, Result};
use crate::grid::{Grid2d, TwoPhotonField};
use crate::numerics::{integrate_real, QuadOptions};
use crate::params::EmitterParams;

pub const MIN_SITES: usize = 64;
/// Largest stable-and-accurate step in units of `1/J`.
pub const MAX_DT_J: f64 = 0.02;
pub const DEFAULT_DT_J: f64 = 0.01;
/// Allowed norm drift per 10^4 steps.
pub const NORM_BUDGET: f64 = 1e-9;
/// Largest `U * dt` accepted for finite interactions.
pub const MAX_INTERACTION_PHASE: f64 = 0.2;
/// Edge weight beyond which a run counts as having hit a wall.
pub const EDGE_TOLERANCE: f64 = 1e-7;
/// Packets start and finish this many spatial widths from the emitter.
pub const CLEARANCE_WIDTHS: f64 = 6.0;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    HardCore,
    Finite(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeModel {
    n_sites: usize,
    hopping: f64,
    omega_e: f64,
    coupling: f64,
    interaction: Interaction,
    emitter_site: usize,
}

/// Builds a chain of `n_sites` with the emitter attached to the middle site.
pub fn build_model(
    hopping: f64,
    omega_e: f64,
    coupling: f64,
    interaction: Interaction,
    n_sites: usize,
) -> Result<LatticeModel> {
    if n_sites < MIN_SITES {
        return Err(Error::invalid("n_sites", format!("{n_sites} < {MIN_SITES}")));
    }
    if let Interaction::Finite(u) = interaction {
        non_negative("U", u)?;
    }
    Ok(LatticeModel {
        n_sites,
        hopping: positive("J", hopping)?,
        omega_e: finite("omega_e", omega_e)?,
        coupling: finite("V0", coupling)?,
        interaction,
        emitter_site: n_sites / 2,
    })
}

impl LatticeModel {
    pub fn with_emitter_site(mut self, site: usize) -> Result<Self> {
        if site == 0 || site + 1 >= self.n_sites {
            return Err(Error::invalid("emitter_site", format!("{site} not an interior site")));
        }
        self.emitter_site = site;
        Ok(self)
    }

    pub fn with_interaction(mut self, interaction: Interaction) -> Result<Self> {
        if let Interaction::Finite(u) = interaction {
            non_negative("U", u)?;
        }
        self.interaction = interaction;
        Ok(self)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn interaction(&self) -> Interaction {
        self.interaction
    }

    pub fn emitter_site(&self) -> usize {
        self.emitter_site
    }

    /// Index of the emitter orbital (after all chain sites).
    pub fn emitter_index(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.n_sites + 1
    }

    /// Band energy `-2J cos k`.
    pub fn dispersion(&self, k: f64) -> f64 {
        -2.0 * self.hopping * k.cos()
    }

    /// `d omega / dk = 2J sin k`.
    pub fn group_velocity(&self, k: f64) -> f64 {
        2.0 * self.hopping * k.sin()
    }

    /// Guided decay rate `V0^2 / v_g(k)`.
    pub fn guided_rate(&self, k: f64) -> f64 {
        self.coupling * self.coupling / self.group_velocity(k)
    }

    /// Detuning `omega(k) - omega_e` of a carrier at `k`.
    pub fn detuning(&self, k: f64) -> f64 {
        self.dispersion(k) - self.omega_e
    }

    /// Exact lattice transmission amplitude at wavevector `k`.
    pub fn transmission_amplitude(&self, k: f64) -> C64 {
        let d = self.detuning(k);
        let g = self.guided_rate(k);
        if g == 0.0 {
            return C64::new(1.0, 0.0);
        }
        C64::new(d, 0.0) / C64::new(d, g)
    }

    /// Single-particle Hamiltonian as `(row, col, value)` triples.
    pub fn one_photon_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(2 * self.n_sites + 3);
        for i in 0..self.n_sites - 1 {
            out.push((i, i + 1, -self.hopping));
            out.push((i + 1, i, -self.hopping));
        }
        let e = self.emitter_index();
        out.push((e, e, self.omega_e));
        out.push((self.emitter_site, e, self.coupling));
        out.push((e, self.emitter_site, self.coupling));
        out
    }

    /// `out = (h - shift) psi` for a single-particle vector.
    fn apply_one(&self, psi: &[C64], shift: f64, out: &mut [C64]) {
        let n = self.n_sites;
        let j = self.hopping;
        let e = self.emitter_index();
        for i in 0..n {
            let mut acc = psi[i] * (-shift);
            if i > 0 {
                acc -= psi[i - 1] * j;
            }
            if i + 1 < n {
                acc -= psi[i + 1] * j;
            }
            out[i] = acc;
        }
        out[self.emitter_site] += psi[e] * self.coupling;
        out[e] = psi[e] * (self.omega_e - shift) + psi[self.emitter_site] * self.coupling;
    }

    /// `out = (h x 1 + 1 x h + U P_ee - shift) psi` for a symmetric matrix.
    fn apply_two(&self, psi: &[C64], shift: f64, scratch: &mut [C64], out: &mut [C64]) {
        let m = self.dim();
        let n = self.n_sites;
        let j = self.hopping;
        let e = self.emitter_index();
        let es = self.emitter_site;
        // scratch = h psi, row by row.
        for i in 0..m {
            let row = &mut scratch[i * m..(i + 1) * m];
            if i < n {
                row.iter_mut().for_each(|z| *z = ZERO);
                if i > 0 {
                    for (z, p) in row.iter_mut().zip(&psi[(i - 1) * m..i * m]) {
                        *z -= p * j;
                    }
                }
                if i + 1 < n {
                    for (z, p) in row.iter_mut().zip(&psi[(i + 1) * m..(i + 2) * m]) {
                        *z -= p * j;
                    }
                }
                if i == es {
                    for (z, p) in row.iter_mut().zip(&psi[e * m..(e + 1) * m]) {
                        *z += p * self.coupling;
                    }
                }
            } else {
                for ((z, p), q) in row
                    .iter_mut()
                    .zip(&psi[e * m..(e + 1) * m])
                    .zip(&psi[es * m..(es + 1) * m])
                {
                    *z = p * self.omega_e + q * self.coupling;
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] = scratch[a * m + b] + scratch[b * m + a] - psi[a * m + b] * shift;
            }
        }
        match self.interaction {
            Interaction::HardCore => out[e * m + e] = ZERO,
            Interaction::Finite(u) => out[e * m + e] += psi[e * m + e] * u,
        }
    }
}

/// Wavefunction in the one- or two-photon sector.
#[derive(Debug, Clone, PartialEq)]
pub enum Sector {
    One(Vec<C64>),
    /// Row-major symmetric `(n_sites + 1)^2` matrix; `psi[a][b]` is the
    /// amplitude for one photon on orbital `a` and one on `b`.
    Two(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub sector: Sector,
    pub time: f64,
}

/// Normalized Gaussian `exp(-(x-x0)^2/(4 sigma^2) + i k0 x)` on the chain.
pub fn gaussian_orbital(model: &LatticeModel, x0: f64, sigma: f64, k0: f64) -> Vec<C64> {
    let mut v = vec![ZERO; model.dim()];
    for (x, z) in v.iter_mut().take(model.n_sites).enumerate() {
        let d = x as f64 - x0;
        *z = C64::from_polar((-(d * d) / (4.0 * sigma * sigma)).exp(), k0 * x as f64);
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

impl LatticeState {
    pub fn one_photon(amplitudes: Vec<C64>) -> Self {
        Self {
            sector: Sector::One(amplitudes),
            time: 0.0,
        }
    }

    /// Symmetrized, normalized product of two orbitals.
    pub fn two_photon(model: &LatticeModel, a: &[C64], b: &[C64]) -> Result<Self> {
        let m = model.dim();
        if a.len() != m || b.len() != m {
            return Err(Error::Precondition("orbital length does not match the model".into()));
        }
        let mut psi = vec![ZERO; m * m];
        for i in 0..m {
            for j in 0..m {
                psi[i * m + j] = a[i] * b[j] + b[i] * a[j];
            }
        }
        if model.interaction == Interaction::HardCore {
            psi[m * m - 1] = ZERO;
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Precondition("two-photon state vanishes".into()));
        }
        psi.iter_mut().for_each(|z| *z /= norm);
        Ok(Self {
            sector: Sector::Two(psi),
            time: 0.0,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        match &self.sector {
            Sector::One(v) | Sector::Two(v) => v,
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|psi[a][b] - psi[b][a]|`; zero for one-photon states.
    pub fn asymmetry(&self) -> f64 {
        match &self.sector {
            Sector::One(_) => 0.0,
            Sector::Two(psi) => {
                let m = (psi.len() as f64).sqrt().round() as usize;
                let mut worst: f64 = 0.0;
                for a in 0..m {
                    for b in 0..a {
                        worst = worst.max((psi[a * m + b] - psi[b * m + a]).norm());
                    }
                }
                worst
            }
        }
    }

    /// Probability density per chain site (one photon: `|psi|^2`; two
    /// photons: mean occupation).
    pub fn site_density(&self, model: &LatticeModel) -> Vec<f64> {
        let m = model.dim();
        match &self.sector {
            Sector::One(v) => v.iter().map(|z| z.norm_sqr()).collect(),
            Sector::Two(psi) => (0..m)
                .map(|a| {
                    let row: f64 = psi[a * m..(a + 1) * m].iter().map(|z| z.norm_sqr()).sum();
                    2.0 * row
                })
                .collect(),
        }
    }

    /// Weight on the `band` outermost sites at either end of the chain.
    pub fn edge_weight(&self, model: &LatticeModel, band: usize) -> f64 {
        let n = model.n_sites;
        let dens = self.site_density(model);
        let norm = match self.sector {
            Sector::One(_) => 1.0,
            Sector::Two(_) => 2.0,
        };
        (dens[..band].iter().sum::<f64>() + dens[n - band..n].iter().sum::<f64>()) / norm
    }

    /// `(site, Re psi, Im psi)` rows for one-photon snapshots.
    pub fn snapshot_rows(&self) -> Vec<(usize, f64, f64)> {
        match &self.sector {
            Sector::One(v) => v.iter().enumerate().map(|(i, z)| (i, z.re, z.im)).collect(),
            Sector::Two(_) => Vec::new(),
        }
    }
}

/// Integrator knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveOptions {
    pub dt: f64,
    /// Constant subtracted from the Hamiltonian (the carrier energy); only a
    /// global phase.
    pub energy_shift: f64,
    pub norm_budget: f64,
}

impl EvolveOptions {
    pub fn new(model: &LatticeModel) -> Self {
        Self {
            dt: DEFAULT_DT_J / model.hopping,
            energy_shift: 0.0,
            norm_budget: NORM_BUDGET,
        }
    }
}

fn validate_step(model: &LatticeModel, dt: f64, two_photon: bool) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("{dt} must be positive")));
    }
    let limit = MAX_DT_J / model.hopping;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step: dt, limit });
    }
    if let (true, Interaction::Finite(u)) = (two_photon, model.interaction) {
        if u > 0.0 && u * dt > MAX_INTERACTION_PHASE * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge {
                step: dt,
                limit: MAX_INTERACTION_PHASE / u,
            });
        }
    }
    Ok(())
}

struct Rk4Workspace {
    k: [Vec<C64>; 4],
    stage: Vec<C64>,
    scratch: Vec<C64>,
}

impl Rk4Workspace {
    fn new(len: usize) -> Self {
        Self {
            k: [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]],
            stage: vec![ZERO; len],
            scratch: vec![ZERO; len],
        }
    }
}

fn rk4_step(model: &LatticeModel, psi: &mut [C64], dt: f64, shift: f64, two: bool, ws: &mut Rk4Workspace) {
    let apply = |input: &[C64], out: &mut [C64], scratch: &mut [C64]| {
        if two {
            model.apply_two(input, shift, scratch, out);
        } else {
            model.apply_one(input, shift, out);
        }
        // d psi / dt = -i H psi
        out.iter_mut().for_each(|z| *z *= -I);
    };
    let Rk4Workspace { k, stage, scratch } = ws;
    apply(psi, &mut k[0], scratch);
    for (s, (p, d)) in stage.iter_mut().zip(psi.iter().zip(&k[0])) {
        *s = p + d * (0.5 * dt);
    }
    apply(stage, &mut k[1], scratch);
    for (s, (p, d)) in stage.iter_mut().zip(psi.iter().zip(&k[1])) {
        *s = p + d * (0.5 * dt);
    }
    apply(stage, &mut k[2], scratch);
    for (s, (p, d)) in stage.iter_mut().zip(psi.iter().zip(&k[2])) {
        *s = p + d * dt;
    }
    apply(stage, &mut k[3], scratch);
    for (i, p) in psi.iter_mut().enumerate() {
        *p += (k[0][i] + k[1][i] * 2.0 + k[2][i] * 2.0 + k[3][i]) * (dt / 6.0);
    }
}

/// Per-run integrator diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveReport {
    pub steps: usize,
    pub norm_drift: f64,
    /// Drift scaled to 10^4 steps.
    pub drift_per_1e4: f64,
}

/// Fixed-step RK4 propagation with a norm monitor.
pub fn evolve(model: &LatticeModel, state: &LatticeState, dt: f64, steps: usize) -> Result<LatticeState> {
    let opts = EvolveOptions {
        dt,
        ..EvolveOptions::new(model)
    };
    evolve_with(model, state, opts, steps, |_, _| Ok(())).map(|(s, _)| s)
}

/// [`evolve`] with explicit options and an observer called after every
/// step with `(step_index, state_amplitudes)`.
pub fn evolve_with<F>(
    model: &LatticeModel,
    state: &LatticeState,
    opts: EvolveOptions,
    steps: usize,
    mut observe: F,
) -> Result<(LatticeState, EvolveReport)>
where
    F: FnMut(usize, &[C64]) -> Result<()>,
{
    let two = matches!(state.sector, Sector::Two(_));
    let m = model.dim();
    let expected = if two { m * m } else { m };
    if state.amplitudes().len() != expected {
        return Err(Error::Precondition("state size does not match the model".into()));
    }
    validate_step(model, opts.dt, two)?;
    let norm0 = state.norm();
    if (norm0 - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!("state is not normalized (norm {norm0})")));
    }
    let mut psi = state.amplitudes().to_vec();
    let mut ws = Rk4Workspace::new(psi.len());
    let check = |done: usize, psi: &[C64]| -> Result<f64> {
        let drift = (psi.iter().map(|z| z.norm_sqr()).sum::<f64>() - norm0).abs();
        let budget = opts.norm_budget * (done as f64 / 1e4).max(1.0);
        if !drift.is_finite() || drift > budget {
            return Err(Error::NormDrift {
                drift,
                steps: done,
                budget,
            });
        }
        Ok(drift)
    };
    for step in 0..steps {
        rk4_step(model, &mut psi, opts.dt, opts.energy_shift, two, &mut ws);
        observe(step, &psi)?;
        if (step + 1) % 1000 == 0 {
            check(step + 1, &psi)?;
        }
    }
    let drift = check(steps, &psi)?;
    let sector = if two { Sector::Two(psi) } else { Sector::One(psi) };
    Ok((
        LatticeState {
            sector,
            time: state.time + opts.dt * steps as f64,
        },
        EvolveReport {
            steps,
            norm_drift: drift,
            drift_per_1e4: drift * 1e4 / (steps.max(1) as f64),
        },
    ))
}

/// Gaussian one-photon wave packet incident from the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketSpec {
    pub k0: f64,
    /// Spatial width in sites (intensity standard deviation).
    pub sigma: f64,
}

impl PacketSpec {
    pub fn new(k0: f64, sigma: f64) -> Result<Self> {
        let k0 = finite("k0", k0)?;
        if !(k0 > 0.0 && k0 < PI) {
            return Err(Error::invalid(
                "k0",
                format!("{k0} outside the right-moving band (0, pi)"),
            ));
        }
        Ok(Self {
            k0,
            sigma: positive("sigma", sigma)?,
        })
    }

    pub fn resonant(sigma: f64) -> Result<Self> {
        Self::new(FRAC_PI_2, sigma)
    }

    /// Wavevector width `1 / (2 sigma)` of the intensity spectrum.
    pub fn delta_k(&self) -> f64 {
        0.5 / self.sigma
    }
}

/// Placement of a packet relative to the emitter and the walls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunGeometry {
    pub start: f64,
    pub travel_time: f64,
    pub edge_band: usize,
}

fn geometry(model: &LatticeModel, packet: &PacketSpec) -> Result<RunGeometry> {
    let edge_band = (model.n_sites / 64).max(4);
    let span = CLEARANCE_WIDTHS * packet.sigma;
    let start = model.emitter_site as f64 - span;
    let v = model.group_velocity(packet.k0);
    let travel_time = 2.0 * span / v;
    let need_left = start - span;
    let need_right = model.emitter_site as f64 + 2.0 * span;
    if need_left < edge_band as f64 || need_right > (model.n_sites - edge_band) as f64 {
        let fit = (model.n_sites as f64 / 2.0 - edge_band as f64) / (2.0 * CLEARANCE_WIDTHS);
        return Err(Error::invalid(
            "sigma",
            format!(
                "packet of width {} does not fit {} sites (largest width {fit:.1})",
                packet.sigma, model.n_sites
            ),
        ));
    }
    Ok(RunGeometry {
        start,
        travel_time,
        edge_band,
    })
}

/// Scattering result of a single one-photon run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionRun {
    pub transmission: f64,
    pub reflection: f64,
    /// Weight left on the emitter and its chain site.
    pub residual: f64,
    pub time: f64,
    pub dt: f64,
    pub steps: usize,
    pub norm_drift: f64,
    pub drift_per_1e4: f64,
    pub edge_weight: f64,
}

/// Sends a packet at the emitter and integrates the weight on either side
/// once the scattered parts have cleared it by [`CLEARANCE_WIDTHS`] widths.
pub fn transmission_from_run(model: &LatticeModel, packet: &PacketSpec) -> Result<TransmissionRun> {
    let geo = geometry(model, packet)?;
    let mut opts = EvolveOptions::new(model);
    opts.energy_shift = model.dispersion(packet.k0);
    let state = LatticeState::one_photon(gaussian_orbital(model, geo.start, packet.sigma, packet.k0));
    let steps = (geo.travel_time / opts.dt).ceil() as usize;
    let (mut state, mut report) = evolve_with(model, &state, opts, steps, |_, _| Ok(()))?;
    let mut total_steps = steps;
    let mut total_drift = report.norm_drift;

    let split = |s: &LatticeState| {
        let d = s.site_density(model);
        let es = model.emitter_site;
        let r: f64 = d[..es].iter().sum();
        let t: f64 = d[es + 1..model.n_sites].iter().sum();
        (t, r, d[es] + d[model.emitter_index()])
    };
    let (mut t, mut r, mut residual) = split(&state);
    // Let the emitter finish re-emitting before reading off (T, R).
    let extra = (0.5 * packet.sigma / model.group_velocity(packet.k0) / opts.dt).ceil() as usize;
    let mut rounds = 0;
    while residual > 1e-7 {
        rounds += 1;
        if rounds > 40 {
            return Err(Error::Precondition(format!(
                "emitter did not relax; residual weight {residual}"
            )));
        }
        let edge = state.edge_weight(model, geo.edge_band);
        if edge > EDGE_TOLERANCE {
            return Err(Error::BoundaryHit { edge_weight: edge });
        }
        (state, report) = evolve_with(model, &state, opts, extra, |_, _| Ok(()))?;
        total_steps += extra;
        total_drift = report.norm_drift.max(total_drift);
        (t, r, residual) = split(&state);
    }
    let edge = state.edge_weight(model, geo.edge_band);
    if edge > EDGE_TOLERANCE {
        return Err(Error::BoundaryHit { edge_weight: edge });
    }
    let total = t + r;
    Ok(TransmissionRun {
        transmission: t / total,
        reflection: r / total,
        residual,
        time: state.time,
        dt: opts.dt,
        steps: total_steps,
        norm_drift: total_drift,
        drift_per_1e4: total_drift * 1e4 / total_steps as f64,
        edge_weight: edge,
    })
}

/// Linear-dispersion emitter parameters matching the lattice at `k0`:
/// `v_g = 2J sin k0`, `Gamma = V0^2 / v_g`.
pub fn linearized_params(model: &LatticeModel, k0: f64) -> Result<EmitterParams> {
    let v = model.group_velocity(k0);
    EmitterParams::new(0.0, 0.0, model.guided_rate(k0), v)
}

/// Linear-dispersion prediction for a packet: the plane-wave coefficient
/// `T(delta)` averaged over the packet's Gaussian intensity spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticTransmission {
    pub plane_wave: f64,
    pub packet_average: f64,
}

pub fn analytic_transmission(model: &LatticeModel, packet: &PacketSpec) -> Result<AnalyticTransmission> {
    let p = linearized_params(model, packet.k0)?;
    let d0 = model.detuning(packet.k0);
    let v = p.group_velocity();
    let sk = packet.delta_k();
    let weight = |q: f64| (-(q * q) / (2.0 * sk * sk)).exp() / ((2.0 * PI).sqrt() * sk);
    let lim = 8.0 * sk;
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 2000,
    };
    let (avg, _) = integrate_real(
        |q| weight(q) * one_photon_amplitudes(&p, d0 + v * q).transmission(),
        -lim,
        lim,
        opts,
    )?;
    Ok(AnalyticTransmission {
        plane_wave: one_photon_amplitudes(&p, d0).transmission(),
        packet_average: avg,
    })
}

/// Coincidence profile over photon separation `d = x1 - x2` (in sites)
/// within one output region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceProfile {
    pub separations: Vec<i64>,
    /// Joint probability summed along each diagonal.
    pub probability: Vec<f64>,
    /// The same quantity for an uncorrelated pair with identical marginal.
    pub uncorrelated: Vec<f64>,
    /// `probability / uncorrelated`.
    pub g2: Vec<f64>,
    /// Total two-photon weight in the region.
    pub weight: f64,
}

impl CoincidenceProfile {
    pub fn at(&self, d: i64) -> Option<f64> {
        self.separations.iter().position(|&s| s == d).map(|i| self.g2[i])
    }
}

fn coincidence(psi: &[C64], m: usize, sites: &[usize], max_sep: i64) -> CoincidenceProfile {
    let weight: f64 = sites
        .iter()
        .flat_map(|&a| sites.iter().map(move |&b| psi[a * m + b].norm_sqr()))
        .sum();
    let marginal: Vec<f64> = sites
        .iter()
        .map(|&a| sites.iter().map(|&b| psi[a * m + b].norm_sqr()).sum())
        .collect();
    let lo = sites[0] as i64;
    let hi = *sites.last().unwrap_or(&0) as i64;
    let mut profile = CoincidenceProfile {
        separations: Vec::new(),
        probability: Vec::new(),
        uncorrelated: Vec::new(),
        g2: Vec::new(),
        weight,
    };
    for d in -max_sep..=max_sep {
        let (mut p, mut c) = (0.0, 0.0);
        for (ia, &a) in sites.iter().enumerate() {
            let b = a as i64 - d;
            if b < lo || b > hi {
                continue;
            }
            let ib = (b - lo) as usize;
            p += psi[a * m + b as usize].norm_sqr();
            c += marginal[ia] * marginal[ib];
        }
        let c = if weight > 0.0 { c / weight } else { 0.0 };
        profile.separations.push(d);
        profile.probability.push(p);
        profile.uncorrelated.push(c);
        profile.g2.push(if c > 0.0 { p / c } else { f64::NAN });
    }
    profile
}

/// Result of a two-photon scattering run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPhotonRun {
    #[serde(skip)]
    pub field: TwoPhotonField,
    pub transmitted: CoincidenceProfile,
    pub reflected: CoincidenceProfile,
    /// Largest `|psi[e][e]|` seen during the run.
    pub max_double_occupancy: f64,
    pub time: f64,
    pub dt: f64,
    pub steps: usize,
    pub norm_drift: f64,
    pub drift_per_1e4: f64,
    pub edge_weight: f64,
    pub max_asymmetry: f64,
}

/// Two-photon options: the step is reduced automatically when a finite
/// interaction would make `U dt` exceed [`MAX_INTERACTION_PHASE`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPhotonOptions {
    pub dt: f64,
    /// Profile range in packet widths.
    pub profile_widths: f64,
}

impl TwoPhotonOptions {
    pub fn new(model: &LatticeModel) -> Self {
        Self {
            dt: DEFAULT_DT_J / model.hopping,
            profile_widths: 2.0,
        }
    }
}

/// Scatters a symmetrized pair of identical resonant packets and returns
/// transmitted-transmitted and reflected-reflected coincidence profiles.
pub fn two_photon_g2_map(model: &LatticeModel, packet: &PacketSpec, opts: TwoPhotonOptions) -> Result<TwoPhotonRun> {
    let geo = geometry(model, packet)?;
    let mut dt = opts.dt;
    if let Interaction::Finite(u) = model.interaction {
        if u > 0.0 {
            dt = dt.min(MAX_INTERACTION_PHASE / u);
        }
    }
    let evolve_opts = EvolveOptions {
        dt,
        energy_shift: 2.0 * model.dispersion(packet.k0),
        norm_budget: NORM_BUDGET,
    };
    let orbital = gaussian_orbital(model, geo.start, packet.sigma, packet.k0);
    let state = LatticeState::two_photon(model, &orbital, &orbital)?;
    let m = model.dim();
    let e = model.emitter_index();
    let steps = (geo.travel_time / dt).ceil() as usize;
    let mut max_double: f64 = 0.0;
    let (state, report) = evolve_with(model, &state, evolve_opts, steps, |_, psi| {
        max_double = max_double.max(psi[e * m + e].norm());
        Ok(())
    })?;
    let edge = state.edge_weight(model, geo.edge_band);
    if edge > EDGE_TOLERANCE {
        return Err(Error::BoundaryHit { edge_weight: edge });
    }
    let psi = state.amplitudes();
    let es = model.emitter_site;
    let right: Vec<usize> = (es + 1..model.n_sites).collect();
    let left: Vec<usize> = (0..es).collect();
    let max_sep = (opts.profile_widths * packet.sigma).round() as i64;
    let n = model.n_sites;
    let grid = Grid2d::new((0..n).map(|x| x as f64).collect(), (0..n).map(|x| x as f64).collect())?;
    let field = grid.map(|a, b| psi[a as usize * m + b as usize]);
    Ok(TwoPhotonRun {
        transmitted: coincidence(psi, m, &right, max_sep),
        reflected: coincidence(psi, m, &left, max_sep),
        max_asymmetry: state.asymmetry(),
        field,
        max_double_occupancy: max_double,
        time: state.time,
        dt,
        steps,
        norm_drift: report.norm_drift,
        drift_per_1e4: report.drift_per_1e4,
        edge_weight: edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_validation() {
        assert!(build_model(1.0, 0.0, 0.2, Interaction::HardCore, 32).is_err());
        assert!(build_model(0.0, 0.0, 0.2, Interaction::HardCore, 64).is_err());
        assert!(build_model(1.0, 0.0, 0.2, Interaction::Finite(-1.0), 64).is_err());
        let m = build_model(1.0, 0.0, 0.2, Interaction::HardCore, 64).unwrap();
        assert_eq!(m.emitter_site(), 32);
        assert_eq!(m.dim(), 65);
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let m = build_model(1.3, 0.4, 0.7, Interaction::Finite(5.0), 64).unwrap();
        let entries = m.one_photon_entries();
        for &(a, b, v) in &entries {
            assert!(entries.iter().any(|&(c, d, w)| c == b && d == a && w == v));
        }
    }

    #[test]
    fn decoupled_chain_spectrum() {
        let n = 64;
        let m = build_model(1.0, 0.3, 0.0, Interaction::HardCore, n).unwrap();
        let mut diag = vec![0.0; n];
        let off = vec![-1.0; n - 1];
        diag.iter_mut().for_each(|d| *d = 0.0);
        let chain = crate::numerics::SymTridiagonal::new(diag, off).unwrap();
        for j in [0usize, 10, 63] {
            let k = (j + 1) as f64 * PI / (n + 1) as f64;
            assert!((chain.eigenvalue(j) - m.dispersion(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn group_velocity_matches_finite_difference() {
        let m = build_model(0.8, 0.0, 0.1, Interaction::HardCore, 64).unwrap();
        let h = 1e-5;
        let fd = (m.dispersion(FRAC_PI_2 + h) - m.dispersion(FRAC_PI_2 - h)) / (2.0 * h);
        assert!((fd - 1.6).abs() < 1e-9);
        assert!((m.group_velocity(FRAC_PI_2) - 1.6).abs() < 1e-15);
    }

    #[test]
    fn zero_steps_is_identity() {
        let m = build_model(1.0, 0.0, 0.3, Interaction::HardCore, 64).unwrap();
        let s = LatticeState::one_photon(gaussian_orbital(&m, 20.0, 3.0, FRAC_PI_2));
        let out = evolve(&m, &s, 0.01, 0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn rejects_large_steps() {
        let m = build_model(1.0, 0.0, 0.3, Interaction::HardCore, 64).unwrap();
        let s = LatticeState::one_photon(gaussian_orbital(&m, 20.0, 3.0, FRAC_PI_2));
        assert!(matches!(evolve(&m, &s, 0.05, 1), Err(Error::StepTooLarge { .. })));
        let u = m.clone().with_interaction(Interaction::Finite(100.0)).unwrap();
        let a = gaussian_orbital(&u, 20.0, 3.0, FRAC_PI_2);
        let pair = LatticeState::two_photon(&u, &a, &a).unwrap();
        assert!(matches!(evolve(&u, &pair, 0.01, 1), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn two_photon_update_stays_symmetric() {
        let m = build_model(1.0, 0.1, 0.6, Interaction::Finite(3.0), 64).unwrap();
        let a = gaussian_orbital(&m, 24.0, 3.0, FRAC_PI_2);
        let b = gaussian_orbital(&m, 28.0, 2.0, 1.2);
        let s = LatticeState::two_photon(&m, &a, &b).unwrap();
        let out = evolve(&m, &s, 0.01, 500).unwrap();
        assert_eq!(out.asymmetry(), 0.0);
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hard_core_never_doubly_occupies() {
        let m = build_model(1.0, 0.0, 0.6, Interaction::HardCore, 64).unwrap();
        let a = gaussian_orbital(&m, 26.0, 3.0, FRAC_PI_2);
        let s = LatticeState::two_photon(&m, &a, &a).unwrap();
        let mut worst: f64 = 0.0;
        let dim = m.dim();
        evolve_with(&m, &s, EvolveOptions::new(&m), 800, |_, psi| {
            worst = worst.max(psi[dim * dim - 1].norm());
            Ok(())
        })
        .unwrap();
        assert_eq!(worst, 0.0);
    }

    #[test]
    fn decoupled_emitter_is_transparent() {
        let m = build_model(1.0, 0.0, 0.0, Interaction::HardCore, 256).unwrap();
        let run = transmission_from_run(&m, &PacketSpec::resonant(8.0).unwrap()).unwrap();
        assert!((run.transmission - 1.0).abs() < 1e-8, "{run:?}");
        assert!(run.reflection < 1e-8);
    }

    #[test]
    fn oversized_packet_is_rejected() {
        let m = build_model(1.0, 0.0, 0.3, Interaction::HardCore, 128).unwrap();
        let err = transmission_from_run(&m, &PacketSpec::resonant(40.0).unwrap()).unwrap_err();
        assert!(err.is_validation());
    }
}
