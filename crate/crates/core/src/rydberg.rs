//! Two-photon propagation through a Rydberg-EIT medium in the dispersive
//! regime.
//!
//! The relative-coordinate wavefunction `psi(r, R)` obeys
//! `i d psi/dR = a d^2 psi/dr^2 + b U(r) psi` with `a = 4 l_a Delta / gamma`
//! and `b = gamma / (l_a Delta)`, where the mean coordinate `R` plays the
//! role of time. The blockade potential `U` is a unit step of radius `r_B`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{finite, non_negative, positive, Error, Result};
use crate::numerics::{brent, solve_complex, SymTridiagonal};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Smallest `|Delta| / gamma` treated as dispersive.
pub const DISPERSIVE_MIN_RATIO: f64 = 2.0;
/// Largest `Omega_c / |Delta|` inside the validity window.
pub const CONTROL_MAX_RATIO: f64 = 0.5;
/// Wall deviation `|psi - 1|` above which a run is flagged.
pub const WALL_TOLERANCE: f64 = 1e-6;
/// Smoothing width of the optional soft step, in units of `r_B`.
pub const SMOOTHING_WIDTH: f64 = 0.05;
/// Step limit factor: `dR <= STEP_FACTOR / max(|b|, |a| / r_B^2)`.
pub const STEP_FACTOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RydbergMedium {
    od: f64,
    od_b: f64,
    r_b: f64,
    length: f64,
    gamma: f64,
    delta: f64,
    omega_c: f64,
}

impl RydbergMedium {
    /// Checks that the two attenuation lengths `L / OD` and `2 r_B / OD_B`
    /// agree to 1e-9 (relative).
    pub fn new(od: f64, od_b: f64, r_b: f64, length: f64, gamma: f64, delta: f64, omega_c: f64) -> Result<Self> {
        let m = Self {
            od: positive("OD", od)?,
            od_b: positive("OD_B", od_b)?,
            r_b: positive("r_B", r_b)?,
            length: positive("L", length)?,
            gamma: positive("gamma", gamma)?,
            delta: finite("Delta", delta)?,
            omega_c: non_negative("Omega_c", omega_c)?,
        };
        let (la, lb) = (length / od, 2.0 * r_b / od_b);
        if (la - lb).abs() > 1e-9 * la.max(lb) {
            return Err(Error::invalid(
                "L",
                format!("L/OD = {la} differs from 2 r_B/OD_B = {lb}"),
            ));
        }
        Ok(m)
    }

    /// Derives `L = OD * 2 r_B / OD_B`.
    pub fn from_optical_depths(od: f64, od_b: f64, r_b: f64, gamma: f64, delta: f64, omega_c: f64) -> Result<Self> {
        let l_a = 2.0 * positive("r_B", r_b)? / positive("OD_B", od_b)?;
        Self::new(od, od_b, r_b, positive("OD", od)? * l_a, gamma, delta, omega_c)
    }

    pub fn od(&self) -> f64 {
        self.od
    }

    pub fn od_b(&self) -> f64 {
        self.od_b
    }

    pub fn r_b(&self) -> f64 {
        self.r_b
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// `l_a = 2 r_B / OD_B`.
    pub fn attenuation_length(&self) -> f64 {
        2.0 * self.r_b / self.od_b
    }

    /// `v_EIT = l_a Omega_c^2 / (2 gamma)`.
    pub fn v_eit(&self) -> f64 {
        self.attenuation_length() * self.omega_c * self.omega_c / (2.0 * self.gamma)
    }

    /// Kinetic coefficient `a = 4 l_a Delta / gamma`.
    pub fn kinetic(&self) -> f64 {
        4.0 * self.attenuation_length() * self.delta / self.gamma
    }

    /// Potential coefficient `b = gamma / (l_a Delta)`.
    pub fn potential(&self) -> f64 {
        self.gamma / (self.attenuation_length() * self.delta)
    }

    /// Dimensionless well strength `r_B sqrt(|b| / |a|) = (gamma/|Delta|) OD_B / 4`.
    pub fn well_strength(&self) -> f64 {
        self.gamma / self.delta.abs() * self.od_b / 4.0
    }

    pub fn with_od(&self, od: f64) -> Result<Self> {
        Self::from_optical_depths(od, self.od_b, self.r_b, self.gamma, self.delta, self.omega_c)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(
            self.od,
            self.od_b,
            self.r_b,
            self.length,
            self.gamma,
            delta,
            self.omega_c,
        )
    }

    /// Inside the dispersive window `|Delta| >> gamma`, `Omega_c << |Delta|`.
    pub fn is_dispersive(&self) -> bool {
        self.delta.abs() >= DISPERSIVE_MIN_RATIO * self.gamma && self.omega_c <= CONTROL_MAX_RATIO * self.delta.abs()
    }
}

/// Blockade potential: 1 on the closed interval `|r| <= r_B`, else 0.
pub fn effective_potential(r: f64, r_b: f64) -> f64 {
    if r.abs() <= r_b {
        1.0
    } else {
        0.0
    }
}

/// Step of width [`SMOOTHING_WIDTH`]` * r_B` for convergence studies.
pub fn smoothed_potential(r: f64, r_b: f64) -> f64 {
    0.5 * (1.0 - ((r.abs() - r_b) / (SMOOTHING_WIDTH * r_b)).tanh())
}

/// Cell-centred grid on `[-W, W]`.
pub fn cell_centres(half_width: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * half_width / n as f64;
    (0..n).map(|i| -half_width + (i as f64 + 0.5) * h).collect()
}

/// Default grid spacing in units of `r_B`.
pub const DEFAULT_CELLS_PER_RADIUS: usize = 50;

/// Half-width that keeps the walls out of reach of waves scattered off
/// the step edge up to `R = L`: `r_B (24 + 8 |a| L / r_B^2)`, rounded
/// up to a whole number of blockade radii.
pub fn suggested_half_width(m: &RydbergMedium) -> f64 {
    let reach = 24.0 + 8.0 * m.kinetic().abs() * m.length / (m.r_b * m.r_b);
    reach.max(10.0).ceil() * m.r_b
}

/// Uniform initial field on [`suggested_half_width`] with
/// [`DEFAULT_CELLS_PER_RADIUS`] cells per blockade radius.
pub fn default_field(m: &RydbergMedium) -> Result<PsiField> {
    let w = suggested_half_width(m);
    let n = (2.0 * w / m.r_b).round() as usize * DEFAULT_CELLS_PER_RADIUS;
    PsiField::uniform(w, n)
}

/// Wavefunction over the relative coordinate at mean coordinate `big_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiField {
    pub r: Vec<f64>,
    pub values: Vec<C64>,
    pub big_r: f64,
}

impl PsiField {
    /// `psi = 1` on a cell-centred grid of `n` points over `[-W, W]`.
    pub fn uniform(half_width: f64, n: usize) -> Result<Self> {
        positive("W", half_width)?;
        if n < 4 {
            return Err(Error::invalid("n_points", format!("{n} < 4")));
        }
        Ok(Self {
            r: cell_centres(half_width, n),
            values: vec![C64::new(1.0, 0.0); n],
            big_r: 0.0,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.r[1] - self.r[0]
    }

    pub fn half_width(&self) -> f64 {
        self.r[self.r.len() - 1] + 0.5 * self.spacing()
    }

    /// `h * sum |psi|^2`.
    pub fn norm(&self) -> f64 {
        self.spacing() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Largest `|psi(r) - psi(-r)|`.
    pub fn parity_defect(&self) -> f64 {
        let n = self.values.len();
        (0..n / 2)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|psi - 1|` over the outermost cell at each end.
    pub fn wall_deviation(&self) -> f64 {
        let n = self.values.len();
        (self.values[0] - 1.0).norm().max((self.values[n - 1] - 1.0).norm())
    }

    /// Linear interpolation at `r`.
    pub fn sample(&self, r: f64) -> Result<C64> {
        let n = self.r.len();
        let (lo, hi) = (self.r[0], self.r[n - 1]);
        if !(r >= lo && r <= hi) {
            return Err(Error::OutOfGrid {
                value: r,
                min: lo,
                max: hi,
            });
        }
        let pos = (r - lo) / self.spacing();
        let i = (pos.floor() as usize).min(n - 2);
        let w = pos - i as f64;
        Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }
}

/// Solver knobs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Step in `R`; `None` picks half the stability-equivalent limit.
    pub step: Option<f64>,
    pub smoothing: bool,
    /// Replace `Delta` by `Delta + i gamma` (outside the model's validity).
    pub dissipative: bool,
    /// Drop the interaction term (`U = 0`); the reference for free propagation.
    pub free: bool,
}

/// Flags describing how far a run can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityFlags {
    pub outside_dispersive_window: bool,
    pub wall_contaminated: bool,
    pub dissipative_extrapolation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RydbergRun {
    pub psi: PsiField,
    pub flags: ValidityFlags,
    pub step: f64,
    pub steps: usize,
    /// `|norm(L) - norm(0)| / norm(0)`.
    pub norm_drift: f64,
    pub wall_deviation: f64,
    /// `psi(0, R)` after every step, starting with `R = 0`.
    pub centre_trace: Vec<(f64, C64)>,
    /// Continuously unwrapped `arg psi(0, R)` at `R = L`.
    pub centre_phase: f64,
}

fn coefficients(m: &RydbergMedium, dissipative: bool) -> Result<(C64, C64)> {
    let delta = if dissipative {
        C64::new(m.delta, m.gamma)
    } else {
        C64::new(m.delta, 0.0)
    };
    if delta.norm() == 0.0 {
        return Err(Error::invalid(
            "Delta",
            "zero detuning has no dispersive limit; enable the dissipative extrapolation",
        ));
    }
    let la = m.attenuation_length();
    Ok((4.0 * la * delta / m.gamma, m.gamma / (la * delta)))
}

/// Largest step in `R` accepted by [`evolve_psi`].
pub fn step_limit(m: &RydbergMedium) -> f64 {
    step_limit_for(m.kinetic().into(), m.potential().into(), m.r_b)
}

fn step_limit_for(a: C64, b: C64, r_b: f64) -> f64 {
    STEP_FACTOR / b.norm().max(a.norm() / (r_b * r_b))
}

/// Crank-Nicolson propagation from `R = psi0.big_r` to `R = L`.
///
/// Neumann walls make the constant function an exact stationary state of
/// the free problem, and the discrete generator is symmetric so the scheme
/// is unitary for real `Delta`.
pub fn evolve_psi(m: &RydbergMedium, psi0: &PsiField, opts: SolverOptions) -> Result<RydbergRun> {
    if psi0.values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("psi0", "initial data must be finite"));
    }
    let (a, b) = coefficients(m, opts.dissipative)?;
    let limit = step_limit_for(a, b, m.r_b);
    let span = m.length - psi0.big_r;
    if span < 0.0 {
        return Err(Error::Precondition(format!(
            "initial R = {} beyond L = {}",
            psi0.big_r, m.length
        )));
    }
    let target = opts.step.unwrap_or(0.5 * limit);
    if !(target > 0.0) {
        return Err(Error::invalid("step", format!("{target} must be positive")));
    }
    if target > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step: target, limit });
    }
    let steps = (span / target).ceil().max(if span > 0.0 { 1.0 } else { 0.0 }) as usize;
    let dr = if steps > 0 { span / steps as f64 } else { 0.0 };

    let n = psi0.values.len();
    let h = psi0.spacing();
    let pot: Vec<f64> = psi0
        .r
        .iter()
        .map(|&r| match (opts.free, opts.smoothing) {
            (true, _) => 0.0,
            (false, true) => smoothed_potential(r, m.r_b),
            (false, false) => effective_potential(r, m.r_b),
        })
        .collect();
    let off = a / (h * h);
    let diag: Vec<C64> = (0..n)
        .map(|i| {
            let lap = if i == 0 || i == n - 1 { -1.0 } else { -2.0 };
            off * lap + b * pot[i]
        })
        .collect();

    // (1 + i dR/2 H) psi' = (1 - i dR/2 H) psi
    let half = I * (0.5 * dr);
    let lhs_off = vec![half * off; n - 1];
    let lhs_diag: Vec<C64> = diag.iter().map(|d| 1.0 + half * d).collect();
    let rhs_off = -half * off;
    let rhs_diag: Vec<C64> = diag.iter().map(|d| 1.0 - half * d).collect();

    let centre = |psi: &PsiField| psi.sample(0.0).unwrap_or(C64::new(f64::NAN, 0.0));
    let norm0 = psi0.norm();
    let mut psi = psi0.clone();
    let mut trace = vec![(psi.big_r, centre(&psi))];
    let mut phase = trace[0].1.arg();
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    for s in 0..steps {
        for i in 0..n {
            let mut acc = rhs_diag[i] * psi.values[i];
            if i > 0 {
                acc += rhs_off * psi.values[i - 1];
            }
            if i + 1 < n {
                acc += rhs_off * psi.values[i + 1];
            }
            rhs[i] = acc;
        }
        psi.values = solve_complex(&lhs_off, &lhs_diag, &lhs_off, &rhs)?;
        psi.big_r = psi0.big_r + dr * (s + 1) as f64;
        let c = centre(&psi);
        let prev = trace[trace.len() - 1].1;
        if prev.norm() > 0.0 && c.norm() > 0.0 {
            phase += (c / prev).arg();
        }
        trace.push((psi.big_r, c));
    }
    let norm_drift = (psi.norm() - norm0).abs() / norm0;
    let wall_deviation = psi.wall_deviation();
    let flags = ValidityFlags {
        outside_dispersive_window: !m.is_dispersive(),
        wall_contaminated: wall_deviation > WALL_TOLERANCE,
        dissipative_extrapolation: opts.dissipative,
    };
    if flags.outside_dispersive_window {
        log::warn!(
            "Rydberg run outside the dispersive window (Delta/gamma = {})",
            m.delta / m.gamma
        );
    }
    if flags.wall_contaminated {
        log::warn!("|psi - 1| = {wall_deviation:.3e} at the walls; widen the domain");
    }
    Ok(RydbergRun {
        psi,
        flags,
        step: dr,
        steps,
        norm_drift,
        wall_deviation,
        centre_trace: trace,
        centre_phase: phase,
    })
}

/// Bound state of the effective square well.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundState {
    /// Eigenvalue of `K = |a| (-d^2/dr^2) - |b| U` (negative), in units of
    /// inverse length along `R`.
    pub eigenvalue: f64,
    /// Decay constant `sqrt(-eigenvalue / |a|)` outside the well.
    pub kappa: f64,
    pub even: bool,
    pub r: Vec<f64>,
    /// Normalized so that `h * sum phi^2 = 1`.
    pub eigenfunction: Vec<f64>,
}

/// Grid knobs for the bound-state solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundStateOptions {
    /// Cells per blockade radius on the coarse grid (the fine grid doubles it).
    pub cells_per_radius: usize,
    /// Domain reaches this many decay lengths past the well edge.
    pub decay_lengths: f64,
}

impl Default for BoundStateOptions {
    fn default() -> Self {
        Self {
            cells_per_radius: 64,
            decay_lengths: 36.0,
        }
    }
}

fn well_operator(m: &RydbergMedium, half_width: f64, cells: usize) -> Result<(SymTridiagonal, Vec<f64>)> {
    let (a, b) = (m.kinetic().abs(), m.potential().abs());
    let r = cell_centres(half_width, cells);
    let h = 2.0 * half_width / cells as f64;
    let diag: Vec<f64> = r
        .iter()
        .map(|&x| 2.0 * a / (h * h) - b * effective_potential(x, m.r_b))
        .collect();
    let off = vec![-a / (h * h); cells - 1];
    Ok((SymTridiagonal::new(diag, off)?, r))
}

/// Negative eigenvalues of the well operator on a grid whose cell faces
/// fall on `|r| = r_B`.
fn well_eigenvalues(m: &RydbergMedium, radii: usize, per_radius: usize) -> Result<Vec<f64>> {
    let (op, _) = well_operator(m, radii as f64 * m.r_b, 2 * radii * per_radius)?;
    let count = op.count_below(0.0);
    Ok((0..count).map(|j| op.eigenvalue(j)).collect())
}

/// Bound states of the effective well with the step potential, sorted from
/// most to least bound.
///
/// Eigenvalues are Richardson-extrapolated from grids with `h` and `h/2`
/// (the discretization error is `O(h^2)` because the well edge sits on a
/// cell face); eigenfunctions come from the fine grid.
pub fn bound_states(m: &RydbergMedium) -> Result<Vec<BoundState>> {
    bound_states_with(m, BoundStateOptions::default())
}

pub fn bound_states_with(m: &RydbergMedium, opts: BoundStateOptions) -> Result<Vec<BoundState>> {
    if m.delta == 0.0 {
        return Err(Error::invalid("Delta", "bound states need a finite detuning"));
    }
    let a = m.kinetic().abs();
    let per = opts.cells_per_radius.max(8);
    // A first pass on a generous box fixes the decay length of the
    // shallowest state, which sets the domain.
    let z0 = m.well_strength();
    let kappa_guess = (z0 * z0).min(z0) / m.r_b;
    let mut radii = (1.0 + opts.decay_lengths / (kappa_guess * m.r_b)).ceil() as usize;
    radii = radii.clamp(2, 4096);
    let coarse = well_eigenvalues(m, radii, per / 2)?;
    if let Some(&shallow) = coarse.last() {
        let kappa = (-shallow / a).sqrt();
        radii = ((1.0 + opts.decay_lengths / (kappa * m.r_b)).ceil() as usize).clamp(2, 4096);
    }
    let e_h = well_eigenvalues(m, radii, per)?;
    let e_h2 = well_eigenvalues(m, radii, 2 * per)?;
    let count = e_h.len().min(e_h2.len()).max(1);
    let half_width = radii as f64 * m.r_b;
    let cells = 2 * radii * 2 * per;
    let (op, r) = well_operator(m, half_width, cells)?;
    let h = 2.0 * half_width / cells as f64;
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let fine = op.eigenvalue(j);
        let extrapolated = match (e_h.get(j), e_h2.get(j)) {
            (Some(c), Some(f)) => (4.0 * f - c) / 3.0,
            _ => fine,
        };
        let mut v = op.eigenvector(fine)?;
        let scale = 1.0 / h.sqrt();
        v.iter_mut().for_each(|x| *x *= scale);
        let n = v.len();
        let even = v[0..n / 2]
            .iter()
            .zip(v[n / 2..].iter().rev())
            .map(|(x, y)| x * y)
            .sum::<f64>()
            >= 0.0;
        out.push(BoundState {
            eigenvalue: extrapolated.min(0.0),
            kappa: (-extrapolated / a).max(0.0).sqrt(),
            even,
            r: r.clone(),
            eigenfunction: v,
        });
    }
    Ok(out)
}

/// Even ground state of a finite square well of half-width `r_B` and
/// strength `z0`: the root `xi` of `xi tan xi = sqrt(z0^2 - xi^2)` on
/// `(0, min(z0, pi/2))`.
pub fn even_ground_root(z0: f64) -> Result<f64> {
    positive("z0", z0)?;
    let hi = z0.min(std::f64::consts::FRAC_PI_2) * (1.0 - 1e-15);
    brent(|xi| xi * xi.tan() - (z0 * z0 - xi * xi).max(0.0).sqrt(), 0.0, hi, 1e-15)
}

/// Ground state of the well operator on the grid of an existing field.
pub fn ground_state_on(m: &RydbergMedium, field: &PsiField) -> Result<Vec<f64>> {
    let n = field.r.len();
    let h = field.spacing();
    let (a, b) = (m.kinetic().abs(), m.potential().abs());
    let diag: Vec<f64> = field
        .r
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let lap = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            lap * a / (h * h) - b * effective_potential(x, m.r_b)
        })
        .collect();
    let op = SymTridiagonal::new(diag, vec![-a / (h * h); n - 1])?;
    let mut v = op.eigenvector(op.eigenvalue(0))?;
    let scale = 1.0 / h.sqrt();
    v.iter_mut().for_each(|x| *x *= scale);
    Ok(v)
}

/// Overlap `|<phi0 | psi - background>| / ||psi - background||` where the
/// background is the mean of `psi` over `|r| > fraction * W`.
pub fn bound_state_overlap(field: &PsiField, ground: &[f64], fraction: f64) -> f64 {
    let w = field.half_width();
    let outer: Vec<C64> = field
        .r
        .iter()
        .zip(&field.values)
        .filter(|(r, _)| r.abs() > fraction * w)
        .map(|(_, v)| *v)
        .collect();
    let background = outer.iter().sum::<C64>() / outer.len().max(1) as f64;
    let h = field.spacing();
    let excess: Vec<C64> = field.values.iter().map(|v| v - background).collect();
    let norm = (h * excess.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
    let proj: C64 = excess.iter().zip(ground).map(|(z, g)| z * g).sum::<C64>() * h;
    if norm == 0.0 {
        0.0
    } else {
        proj.norm() / norm
    }
}

/// Pair correlation and conditional phase versus delay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationCurves {
    pub tau: Vec<f64>,
    pub g2: Vec<f64>,
    pub phase: Vec<f64>,
}

/// `g2(tau) = |psi(v_EIT tau, L)|^2`, `phi(tau) = arg psi(v_EIT tau, L)`.
pub fn g2_and_phase(m: &RydbergMedium, psi_out: &PsiField, taus: &[f64]) -> Result<CorrelationCurves> {
    let v = m.v_eit();
    let mut out = CorrelationCurves {
        tau: Vec::new(),
        g2: Vec::new(),
        phase: Vec::new(),
    };
    for &tau in taus {
        let z = psi_out.sample(v * tau)?;
        out.tau.push(tau);
        out.g2.push(z.norm_sqr());
        out.phase.push(z.arg());
    }
    Ok(out)
}

/// `p = 1 - OD^{-1/2} exp(-OD_B)`.
pub fn blockade_probability(od: f64, od_b: f64) -> Result<f64> {
    if od == 0.0 {
        return Err(Error::invalid("OD", "blockade probability is undefined at OD = 0"));
    }
    positive("OD", od)?;
    non_negative("OD_B", od_b)?;
    Ok(1.0 - (-od_b).exp() / od.sqrt())
}

/// Weak-interaction phase across one blockade sphere,
/// `phi = -(gamma / Delta) OD_B / 2`. Not the result of the propagation.
pub fn conditional_phase_estimate(m: &RydbergMedium) -> Result<f64> {
    if m.delta == 0.0 {
        return Err(Error::invalid("Delta", "phase estimate diverges at zero detuning"));
    }
    Ok(-(m.gamma / m.delta) * m.od_b / 2.0)
}
