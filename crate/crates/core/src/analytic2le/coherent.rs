use num_complex::Complex64 as C64;

use super::one_photon::{one_photon_amplitudes, OnePhotonAmplitudes};
use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadOptions};
use crate::params::{CoherentInput, EmitterParams};

/// Half-width of the wavevector window in units of `Delta_k`.
pub const SPECTRAL_CUTOFF: f64 = 6.0;

/// A quadrature-derived value with its propagated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn window(input: &CoherentInput) -> (f64, f64) {
    let half = SPECTRAL_CUTOFF * input.delta_k();
    (input.k0() - half, input.k0() + half)
}

fn amplitudes_at(p: &EmitterParams, k: f64) -> OnePhotonAmplitudes {
    one_photon_amplitudes(p, p.detuning_of(k))
}

/// Transmission of a weak coherent wave packet observed at `x > 0`.
///
/// Only the one-photon sector contributes at this order:
/// `T = |int alpha t_k e^{ikx}|^2 / |int alpha e^{ikx}|^2`.
pub fn coherent_transmission(p: &EmitterParams, input: &CoherentInput, x: f64) -> Result<Estimate> {
    coherent_transmission_with(p, input, x, QuadOptions::default())
}

pub fn coherent_transmission_with(
    p: &EmitterParams,
    input: &CoherentInput,
    x: f64,
    opts: QuadOptions,
) -> Result<Estimate> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(
            "x",
            format!("observation point must lie past the emitter, got {x}"),
        ));
    }
    let (a, b) = window(input);
    let phase = |k: f64| C64::from_polar(input.amplitude(k), k * x);
    let num = integrate(|k| phase(k) * amplitudes_at(p, k).t, a, b, opts)?;
    let den = integrate(phase, a, b, opts)?;
    let d2 = den.value.norm_sqr();
    if d2 == 0.0 || !d2.is_finite() {
        return Err(Error::Precondition(format!("incident intensity vanishes at x = {x}")));
    }
    let value = num.value.norm_sqr() / d2;
    let error = 2.0 * (num.error * num.value.norm() + value * den.error * den.value.norm()) / d2;
    Ok(Estimate { value, error })
}

/// Packet-averaged amplitudes `A_t = int alpha t dk` and `A_r = int alpha r dk`.
pub fn packet_amplitudes(p: &EmitterParams, input: &CoherentInput, opts: QuadOptions) -> Result<(C64, C64)> {
    let (a, b) = window(input);
    let at = integrate(|k| amplitudes_at(p, k).t * input.amplitude(k), a, b, opts)?;
    let ar = integrate(|k| amplitudes_at(p, k).r * input.amplitude(k), a, b, opts)?;
    Ok((at.value, ar.value))
}

/// Transmitted `g2(tau)` for a weak coherent wave packet.
///
/// The double wavevector integrals in numerator and denominator separate
/// into products of single integrals, so
/// `g2 = |A_t^2 - A_r^2 e^{-(Gamma+gamma)|tau|}|^2 / |A_t|^4`.
pub fn g2_transmitted(p: &EmitterParams, input: &CoherentInput, taus: &[f64]) -> Result<Vec<f64>> {
    let (at, ar) = packet_amplitudes(p, input, QuadOptions::default())?;
    g2_from_amplitudes(p, at, ar, taus)
}

/// Monochromatic limit `|t^2 - r^2 e^{-(Gamma+gamma)|tau|}|^2 / |t|^4` at
/// detuning `delta`.
pub fn g2_monochromatic(p: &EmitterParams, delta: f64, taus: &[f64]) -> Result<Vec<f64>> {
    let a = one_photon_amplitudes(p, delta);
    g2_from_amplitudes(p, a.t, a.r, taus)
}

fn g2_from_amplitudes(p: &EmitterParams, t: C64, r: C64, taus: &[f64]) -> Result<Vec<f64>> {
    if t.norm() == 0.0 {
        return Err(Error::PerfectMirrorDivergence);
    }
    let (t2, r2) = (t * t, r * r);
    let den = t2.norm_sqr();
    taus.iter()
        .map(|&tau| {
            if !tau.is_finite() {
                return Err(Error::invalid("tau", "delay must be finite"));
            }
            Ok((t2 - r2 * (-p.linewidth() * tau.abs()).exp()).norm_sqr() / den)
        })
        .collect()
}
