use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::{Coefficients, DetuningGrid, Spectrum};
use crate::params::EmitterParams;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Single-photon transmission and reflection amplitudes.
///
/// The reflection convention is `r = t - 1`. Driven-qubit expressions
/// elsewhere in the crate use the opposite sign for `r`; see
/// [`crate::router3le::driven_qubit_steady_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePhotonAmplitudes {
    pub t: C64,
    pub r: C64,
}

impl OnePhotonAmplitudes {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }
}

/// `t = (delta + i gamma) / (delta + i (gamma + Gamma))`, `r = t - 1`.
pub fn one_photon_amplitudes(p: &EmitterParams, delta: f64) -> OnePhotonAmplitudes {
    if p.guided_rate() == 0.0 {
        return OnePhotonAmplitudes {
            t: C64::new(1.0, 0.0),
            r: C64::new(0.0, 0.0),
        };
    }
    let t = C64::new(delta, p.loss_rate()) / C64::new(delta, p.linewidth());
    OnePhotonAmplitudes { t, r: t - 1.0 }
}

/// Amplitudes sampled over a detuning grid.
pub fn one_photon_spectrum(p: &EmitterParams, grid: &DetuningGrid) -> Spectrum {
    let amps: Vec<OnePhotonAmplitudes> = grid.iter().map(|d| one_photon_amplitudes(p, d)).collect();
    Spectrum {
        detunings: grid.values().to_vec(),
        transmission_amplitude: amps.iter().map(|a| a.t).collect(),
        reflection_amplitude: amps.iter().map(|a| a.r).collect(),
    }
}

/// Lorentzian coefficients `R = Gamma^2 / (delta^2 + (gamma+Gamma)^2)` and
/// `T = (delta^2 + gamma^2) / (delta^2 + (gamma+Gamma)^2)`.
pub fn one_photon_coefficients(p: &EmitterParams, grid: &DetuningGrid) -> Coefficients {
    let (gamma, big) = (p.loss_rate(), p.guided_rate());
    let mut transmission = Vec::with_capacity(grid.len());
    let mut reflection = Vec::with_capacity(grid.len());
    for d in grid.iter() {
        if big == 0.0 {
            transmission.push(1.0);
            reflection.push(0.0);
            continue;
        }
        let denom = d * d + (gamma + big) * (gamma + big);
        reflection.push(big * big / denom);
        transmission.push((d * d + gamma * gamma) / denom);
    }
    Coefficients {
        detunings: grid.values().to_vec(),
        transmission,
        reflection,
    }
}

/// Stationary response `A` of `ds/dt = -decay * s + drive * exp(-i w t)`,
/// i.e. the particular solution `s(t) = A exp(-i w t)`.
pub fn driven_response(decay: C64, drive: C64, frequency: f64) -> Result<C64> {
    let denom = decay - I * frequency;
    if denom.norm() == 0.0 {
        return Err(Error::SingularSystem(
            "undamped resonant drive has no stationary response".into(),
        ));
    }
    Ok(drive / denom)
}

/// Single-photon amplitudes from the Heisenberg-picture input-output
/// equations.
///
/// The emitter matrix element `<0|sigma_-(t)|k+>` obeys
/// `d/dt s = -(i omega_e + Gamma) s + i V sigma_z b_in(t)` with
/// `sigma_z -> -1` on the vacuum and `b_in(t) = exp(-i v_g k t)/sqrt(2 pi)`.
/// Its stationary solution feeds `b_out = b_in - i (V / v_g) sigma_-` in both
/// output channels. The derivation drops the non-guided loss, so `gamma`
/// must be zero.
pub fn input_output_one_photon(p: &EmitterParams, delta: f64) -> Result<OnePhotonAmplitudes> {
    if p.loss_rate() != 0.0 {
        return Err(Error::LossNotSupported { gamma: p.loss_rate() });
    }
    let v_g = p.group_velocity();
    let coupling = p.coupling();
    let k = p.wavevector_of(delta);
    let norm = 1.0 / (2.0 * PI).sqrt();

    let decay = C64::new(p.guided_rate(), p.omega_e());
    let drive = I * coupling * (-1.0) * norm;
    if p.guided_rate() == 0.0 {
        return Ok(OnePhotonAmplitudes {
            t: C64::new(1.0, 0.0),
            r: C64::new(0.0, 0.0),
        });
    }
    let emitter = driven_response(decay, drive, v_g * k)?;

    let right_out = norm - I * (coupling / v_g) * emitter;
    let left_out = -I * (coupling / v_g) * emitter;
    Ok(OnePhotonAmplitudes {
        t: right_out / norm,
        r: left_out / norm,
    })
}
