use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;

use super::one_photon::one_photon_amplitudes;
use crate::error::{Error, Result};
use crate::grid::{Grid2d, TwoPhotonField};
use crate::params::EmitterParams;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Outgoing two-photon amplitudes for the resonant lossless case, split into
/// both-transmitted, both-reflected and one-of-each channels.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonAsymptotics {
    pub t2: TwoPhotonField,
    pub r2: TwoPhotonField,
    pub rt: TwoPhotonField,
}

impl TwoPhotonAsymptotics {
    pub fn grid(&self) -> &Grid2d {
        self.t2.grid()
    }

    /// Center coordinate `(x1 + x2) / 2` at grid point `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> f64 {
        0.5 * (self.grid().x1()[i] + self.grid().x2()[j])
    }

    /// Relative coordinate `x1 - x2` at grid point `(i, j)`.
    pub fn separation(&self, i: usize, j: usize) -> f64 {
        self.grid().x1()[i] - self.grid().x2()[j]
    }
}

/// Pointwise closed forms `(t2, r2, rt)` at `(x1, x2)`.
pub fn asymptotic_amplitudes(p: &EmitterParams, x1: f64, x2: f64) -> (C64, C64, C64) {
    let (w, g, v) = (p.omega_e(), p.guided_rate(), p.group_velocity());
    let xc = 0.5 * (x1 + x2);
    let x = x1 - x2;
    let pref = 1.0 / (SQRT_2 * PI);
    let decay = (-g * x.abs() / v).exp();
    let t2 = -pref * C64::from_polar(1.0, 2.0 * w * xc / v) * decay;
    let r2 = pref * C64::from_polar(1.0, -2.0 * w * xc / v) * (1.0 - decay);
    let rt = -(1.0 / PI) * C64::from_polar(1.0, w * x / v) * (-2.0 * g * xc.abs() / v).exp();
    (t2, r2, rt)
}

/// Two-photon asymptotic amplitudes on `grid` for two photons at the
/// emitter resonance. Only the lossless case has a closed form.
pub fn two_photon_asymptotics(p: &EmitterParams, grid: &Grid2d) -> Result<TwoPhotonAsymptotics> {
    if p.loss_rate() != 0.0 {
        return Err(Error::LossNotSupported { gamma: p.loss_rate() });
    }
    Ok(TwoPhotonAsymptotics {
        t2: grid.map(|a, b| asymptotic_amplitudes(p, a, b).0),
        r2: grid.map(|a, b| asymptotic_amplitudes(p, a, b).1),
        rt: grid.map(|a, b| asymptotic_amplitudes(p, a, b).2),
    })
}

/// Like [`two_photon_asymptotics`] but checks that the requested incident
/// wavevectors sit on the emitter resonance.
pub fn two_photon_asymptotics_for(p: &EmitterParams, k1: f64, k2: f64, grid: &Grid2d) -> Result<TwoPhotonAsymptotics> {
    let tol = 1e-12 * p.omega_e().abs().max(p.guided_rate()).max(1.0);
    for (name, k) in [("k1", k1), ("k2", k2)] {
        let delta = p.detuning_of(k);
        if !delta.is_finite() || delta.abs() > tol {
            return Err(Error::invalid(
                name,
                format!("closed form exists only on resonance (v_g k = omega_e); detuning is {delta}"),
            ));
        }
    }
    two_photon_asymptotics(p, grid)
}

/// Step function with the symmetric convention `theta(0) = 1/2`.
pub fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// Single-photon scattering-state pieces for incident wavevector `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePhotonMode {
    pub k: f64,
    pub t: C64,
    /// Emitter amplitude `e_k`.
    pub e: C64,
}

impl OnePhotonMode {
    pub fn new(p: &EmitterParams, k: f64) -> Self {
        let delta = p.detuning_of(k);
        let t = one_photon_amplitudes(p, delta).t;
        let e = p.coupling() / (2.0 * PI).sqrt() / C64::new(delta, p.linewidth());
        Self { k, t, e }
    }

    /// Right-moving photon amplitude `g_k(x)`.
    pub fn g(&self, x: f64) -> C64 {
        let wave = C64::from_polar(1.0 / (2.0 * PI).sqrt(), self.k * x);
        wave * (step(-x) + self.t * step(x))
    }
}

/// Two-photon scattering eigenstate built from the one-photon modes `k1`
/// and `k2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateAmplitudes {
    pub mode1: OnePhotonMode,
    pub mode2: OnePhotonMode,
    /// Symmetric right-moving amplitude `g_RR(x1, x2)`.
    pub g_rr: TwoPhotonField,
    /// Symmetrized bound part of `g_RR` alone.
    pub bound: TwoPhotonField,
    /// Emitter-excited amplitude `e_R(x)` sampled on the `x1` axis.
    pub e_r: Vec<C64>,
}

/// Unsymmetrized bound-state term at `(x1, x2)`.
fn bound_term(p: &EmitterParams, m1: &OnePhotonMode, m2: &OnePhotonMode, x1: f64, x2: f64) -> C64 {
    let v = p.group_velocity();
    let x = x1 - x2;
    let theta = step(x) * step(x2);
    if theta == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let ksum = m1.k + m2.k;
    let xc = 0.5 * (x1 + x2);
    let phase = ksum * xc + 0.5 * (ksum - 2.0 * p.omega_e() / v) * x;
    2.0 * (p.guided_rate() / v) * m1.e * m2.e * C64::from_polar(1.0, phase) * (-p.linewidth() * x / v).exp() * theta
}

/// Pointwise `g_RR(x1, x2)` and its bound part.
pub fn g_rr_at(p: &EmitterParams, m1: &OnePhotonMode, m2: &OnePhotonMode, x1: f64, x2: f64) -> (C64, C64) {
    let plane = m1.g(x1) * m2.g(x2) + m1.g(x2) * m2.g(x1);
    let bound = bound_term(p, m1, m2, x1, x2) + bound_term(p, m1, m2, x2, x1);
    ((plane + bound) / SQRT_2, bound / SQRT_2)
}

/// Pointwise `e_R(x)`.
pub fn e_r_at(p: &EmitterParams, m1: &OnePhotonMode, m2: &OnePhotonMode, x: f64) -> C64 {
    let v = p.group_velocity();
    let exponent = C64::new(v * (m1.k + m2.k) - p.omega_e(), p.linewidth()) * (x / v);
    let tail = 2.0 * I * (p.coupling() / v) * m1.e * m2.e * (I * exponent).exp() * step(x);
    m1.g(x) * m2.e + m2.g(x) * m1.e + tail
}

/// Evaluates `g_RR`, its bound part and `e_R` on `grid`.
pub fn two_photon_bound_state(p: &EmitterParams, k1: f64, k2: f64, grid: &Grid2d) -> Result<BoundStateAmplitudes> {
    for (name, k) in [("k1", k1), ("k2", k2)] {
        if !k.is_finite() {
            return Err(Error::invalid(name, "incident wavevector must be finite"));
        }
    }
    let m1 = OnePhotonMode::new(p, k1);
    let m2 = OnePhotonMode::new(p, k2);
    Ok(BoundStateAmplitudes {
        g_rr: grid.map(|a, b| g_rr_at(p, &m1, &m2, a, b).0),
        bound: grid.map(|a, b| g_rr_at(p, &m1, &m2, a, b).1),
        e_r: grid.x1().iter().map(|&x| e_r_at(p, &m1, &m2, x)).collect(),
        mode1: m1,
        mode2: m2,
    })
}
