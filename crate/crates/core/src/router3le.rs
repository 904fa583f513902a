//! Driven three-level emitter (EIT and Autler-Townes regimes) and the
//! steady state of a driven two-level emitter with pure dephasing.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analytic2le::OnePhotonAmplitudes;
use crate::error::{finite, non_negative, Error, Result};
use crate::grid::{linspace, DetuningGrid, Spectrum};
use crate::numerics::golden_max;
use crate::params::ThreeLevelParams;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Effective detuning `chi` of the dressed probe transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Susceptibility {
    Finite(C64),
    /// Pole at two-photon resonance with a stable metastable state.
    Divergent,
}

/// `chi = delta + i gamma - Omega_c^2 / (4 (delta_R + i gamma_s))`, where
/// `delta_R` is the Raman detuning.
pub fn susceptibility_chi(p: &ThreeLevelParams, delta: f64) -> Susceptibility {
    let base = C64::new(delta, p.base().loss_rate());
    let omega = p.control_rabi();
    if omega == 0.0 {
        return Susceptibility::Finite(base);
    }
    let raman = C64::new(p.raman_detuning(delta), p.metastable_loss());
    if raman.norm() == 0.0 {
        return Susceptibility::Divergent;
    }
    Susceptibility::Finite(base - omega * omega / (4.0 * raman))
}

/// Transmission and reflection at probe detuning `delta`.
pub fn router_amplitude(p: &ThreeLevelParams, delta: f64) -> OnePhotonAmplitudes {
    let big = p.base().guided_rate();
    match susceptibility_chi(p, delta) {
        Susceptibility::Divergent => OnePhotonAmplitudes {
            t: C64::new(1.0, 0.0),
            r: C64::new(0.0, 0.0),
        },
        Susceptibility::Finite(chi) => {
            if big == 0.0 {
                return OnePhotonAmplitudes {
                    t: C64::new(1.0, 0.0),
                    r: C64::new(0.0, 0.0),
                };
            }
            let den = chi + I * big;
            OnePhotonAmplitudes {
                t: chi / den,
                r: -I * big / den,
            }
        }
    }
}

/// `t' = chi / (chi + i Gamma)`, `r' = -i Gamma / (chi + i Gamma)` on a grid.
pub fn router_amplitudes(p: &ThreeLevelParams, grid: &DetuningGrid) -> Spectrum {
    let amps: Vec<OnePhotonAmplitudes> = grid.iter().map(|d| router_amplitude(p, d)).collect();
    Spectrum {
        detunings: grid.values().to_vec(),
        transmission_amplitude: amps.iter().map(|a| a.t).collect(),
        reflection_amplitude: amps.iter().map(|a| a.r).collect(),
    }
}

/// Which side of the EIT/ATS crossover the control field sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DressingRegime {
    /// `Omega_c` below the total linewidth: a narrow window inside one line.
    Eit,
    /// `Omega_c` above the total linewidth: two resolved dressed lines.
    AutlerTownes,
}

/// Autler-Townes doublet located on the extinction spectrum `1 - |t'|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtsSplitting {
    pub lower: f64,
    pub upper: f64,
    pub splitting: f64,
    pub regime: DressingRegime,
}

pub const ATS_SCAN_POINTS: usize = 2001;

/// Separation of the two dressed-state lines.
///
/// The doublet shows up as two extinction maxima (transmission dips) on
/// either side of the transparency window. They are bracketed by a scan of
/// [`ATS_SCAN_POINTS`] points over `[-3 Omega_c, 3 Omega_c]` and refined by
/// golden-section search.
pub fn ats_splitting(p: &ThreeLevelParams) -> Result<AtsSplitting> {
    let omega = p.control_rabi();
    if omega == 0.0 || p.base().guided_rate() == 0.0 {
        return Err(Error::NoDoublet);
    }
    let extinction = |d: f64| 1.0 - router_amplitude(p, d).transmission();
    let xs = linspace(-3.0 * omega, 3.0 * omega, ATS_SCAN_POINTS);
    let ys: Vec<f64> = xs.iter().map(|&d| extinction(d)).collect();
    let step = xs[1] - xs[0];

    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..xs.len() - 1 {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            let x = golden_max(extinction, xs[i - 1], xs[i + 1], 1e-12 * omega.max(step));
            peaks.push((x, extinction(x)));
        }
    }
    if peaks.len() < 2 {
        return Err(Error::NoDoublet);
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (mut lower, mut upper) = (peaks[0].0, peaks[1].0);
    if lower > upper {
        std::mem::swap(&mut lower, &mut upper);
    }
    let regime = if omega > p.base().linewidth() {
        DressingRegime::AutlerTownes
    } else {
        DressingRegime::Eit
    };
    if regime == DressingRegime::Eit {
        log::warn!("Omega_c = {omega} does not exceed the linewidth; doublet is not well resolved");
    }
    Ok(AtsSplitting {
        lower,
        upper,
        splitting: upper - lower,
        regime,
    })
}

/// Two-level emitter probed by a coherent field, with energy relaxation,
/// pure dephasing and a configurable maximal reflection amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrivenQubitParams {
    gamma1: f64,
    gamma_phi: f64,
    omega: f64,
    r0: f64,
}

impl DrivenQubitParams {
    pub fn new(gamma1: f64, gamma_phi: f64, omega: f64) -> Result<Self> {
        Self::with_r0(gamma1, gamma_phi, omega, 1.0)
    }

    pub fn with_r0(gamma1: f64, gamma_phi: f64, omega: f64, r0: f64) -> Result<Self> {
        let gamma1 = non_negative("Gamma1", gamma1)?;
        let gamma_phi = non_negative("Gamma_phi", gamma_phi)?;
        let omega = finite("Omega", omega)?;
        if !(0.0..=1.0).contains(&r0) {
            return Err(Error::invalid("r0", format!("{r0} outside [0, 1]")));
        }
        Ok(Self {
            gamma1,
            gamma_phi,
            omega,
            r0,
        })
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma_phi(&self) -> f64 {
        self.gamma_phi
    }

    /// `Gamma2 = Gamma1 / 2 + Gamma_phi`.
    pub fn gamma2(&self) -> f64 {
        self.gamma1 / 2.0 + self.gamma_phi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }
}

/// Reflection and transmission of the driven qubit.
///
/// Reflection here uses the opposite sign to
/// [`crate::analytic2le::OnePhotonAmplitudes`]: `t = 1 - r`, so a resonant
/// weak probe gives `r = +r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitResponse {
    pub r: C64,
    pub t: C64,
}

/// `r = r0 (1 + i delta/Gamma2) / (1 + (delta/Gamma2)^2 + Omega^2/(Gamma1 Gamma2))`.
pub fn driven_qubit_steady_state(q: &DrivenQubitParams, delta: f64) -> Result<QubitResponse> {
    let (g1, g2) = (q.gamma1(), q.gamma2());
    if g1 == 0.0 || g2 == 0.0 {
        return Err(Error::SingularSystem(
            "steady state undefined without relaxation".into(),
        ));
    }
    let x = delta / g2;
    let r = q.r0() * C64::new(1.0, x) / (1.0 + x * x + q.omega() * q.omega() / (g1 * g2));
    Ok(QubitResponse { r, t: 1.0 - r })
}

/// Independent steady state from the optical Bloch equations.
///
/// With `u, v` the in-phase and quadrature coherences (scaled by `1/Omega`)
/// and `w` the inversion, the stationary equations
/// `[-G2, -delta, 0; delta, -G2, 1; 0, -Omega^2, -G1] (u, v, w) = (0, 0, G1)`
/// are solved by LU decomposition; the coherence maps to
/// `r = r0 * i * G2 * (u + i v)`.
pub fn bloch_steady_state_oracle(q: &DrivenQubitParams, delta: f64) -> Result<QubitResponse> {
    let (g1, g2, om) = (q.gamma1(), q.gamma2(), q.omega());
    let m = Matrix3::new(-g2, -delta, 0.0, delta, -g2, 1.0, 0.0, -om * om, -g1);
    let rhs = Vector3::new(0.0, 0.0, g1);
    let lu = m.lu();
    let sol = lu
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::SingularSystem("Bloch steady-state matrix is singular".into()))?;
    let r = q.r0() * I * g2 * C64::new(sol[0], sol[1]);
    Ok(QubitResponse { r, t: 1.0 - r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic2le::one_photon_amplitudes;
    use crate::grid::make_grid;
    use crate::params::EmitterParams;
    use proptest::prelude::*;

    fn fig7(omega: f64) -> ThreeLevelParams {
        let base = EmitterParams::new(0.0, 0.25, 1.0, 1.0).unwrap();
        ThreeLevelParams::new(base, 1.0 / 40.0, omega, -0.5).unwrap()
    }

    #[test]
    fn chi_examples() {
        let p = fig7(0.0);
        assert_eq!(susceptibility_chi(&p, 0.7), Susceptibility::Finite(C64::new(0.7, 0.25)));
        let base = EmitterParams::new(0.0, 0.25, 1.0, 1.0).unwrap();
        let pole = ThreeLevelParams::new(base, 0.0, 2.0, 0.3).unwrap();
        assert_eq!(susceptibility_chi(&pole, 0.3), Susceptibility::Divergent);
        assert_eq!(router_amplitude(&pole, 0.3).t, C64::new(1.0, 0.0));

        let matched = ThreeLevelParams::new(base, 0.25, 2.0, 0.0).unwrap();
        let expected = I * 0.25 - 4.0 / (4.0 * I * 0.25);
        match susceptibility_chi(&matched, 0.0) {
            Susceptibility::Finite(chi) => assert!((chi - expected).norm() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn control_off_reduces_to_two_level() {
        let p = fig7(0.0);
        let grid = make_grid(-5.0, 5.0, 101).unwrap();
        let s = router_amplitudes(&p, &grid);
        for (i, d) in grid.iter().enumerate() {
            let a = one_photon_amplitudes(p.base(), d);
            assert!((s.transmission_amplitude[i] - a.t).norm() < 1e-14);
            assert!((s.reflection_amplitude[i] - a.r).norm() < 1e-14);
        }
    }

    #[test]
    fn transparency_window_at_raman_resonance() {
        let base = EmitterParams::new(0.0, 0.25, 1.0, 1.0).unwrap();
        let p = ThreeLevelParams::new(base, 1.0 / 40.0, 0.5, 0.0).unwrap();
        let centre = router_amplitude(&p, 0.0).transmission();
        assert!(centre > router_amplitude(&p, 1.0).transmission());
        assert!(centre > router_amplitude(&p, -1.0).transmission());
        assert!(centre > 10.0 * one_photon_amplitudes(&base, 0.0).transmission());
    }

    #[test]
    fn doublet_tracks_control_rabi() {
        for omega in [4.0, 8.0] {
            let s = ats_splitting(&fig7(omega)).unwrap();
            assert_eq!(s.regime, DressingRegime::AutlerTownes);
            let ratio = s.splitting / omega;
            assert!((0.9..=1.1).contains(&ratio), "omega={omega} ratio={ratio}");
        }
        assert_eq!(ats_splitting(&fig7(0.0)), Err(Error::NoDoublet));
    }

    #[test]
    fn doublet_matches_dense_grid_oracle() {
        // Independent oracle: arg-max of the extinction on a fine grid in
        // each half of the scan window, split at the Raman resonance.
        let p = fig7(4.0);
        let xs = linspace(-12.0, 12.0, 240_001);
        let ext = |d: f64| 1.0 - router_amplitude(&p, d).transmission();
        let best = |pred: &dyn Fn(f64) -> bool| {
            xs.iter()
                .copied()
                .filter(|&x| pred(x))
                .max_by(|a, b| ext(*a).total_cmp(&ext(*b)))
                .unwrap()
        };
        let lo = best(&|x| x < -0.5);
        let hi = best(&|x| x > -0.5);
        let s = ats_splitting(&p).unwrap();
        assert!((s.lower - lo).abs() < 2e-4);
        assert!((s.upper - hi).abs() < 2e-4);
    }

    #[test]
    fn driven_qubit_examples() {
        let weak = DrivenQubitParams::with_r0(1.0, 0.2, 0.0, 0.8).unwrap();
        assert!((driven_qubit_steady_state(&weak, 0.0).unwrap().r - 0.8).norm() < 1e-15);
        let q = DrivenQubitParams::new(1.0, 0.0, 0.0).unwrap();
        let sat = DrivenQubitParams::new(1.0, 0.0, (q.gamma1() * q.gamma2()).sqrt()).unwrap();
        assert!((driven_qubit_steady_state(&sat, 0.0).unwrap().r - 0.5).norm() < 1e-15);
        assert!(DrivenQubitParams::with_r0(1.0, 0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn bloch_oracle_fixed_points() {
        for (g1, gphi, om, d) in [(1.0, 0.0, 1.0, 0.25), (1.0, 3.0, 0.7, -2.0), (2.0, 0.1, 1e-9, 1.3)] {
            let q = DrivenQubitParams::new(g1, gphi, om).unwrap();
            let a = driven_qubit_steady_state(&q, d).unwrap();
            let b = bloch_steady_state_oracle(&q, d).unwrap();
            assert!((a.r - b.r).norm() < 1e-8);
        }
        let dead = DrivenQubitParams::new(0.0, 0.0, 0.0).unwrap();
        assert!(bloch_steady_state_oracle(&dead, 0.0).is_err());
    }

    #[test]
    fn weak_drive_shape_matches_waveguide_lineshape() {
        // Gamma1 = 2 Gamma, Gamma_phi = gamma gives Gamma2 = Gamma + gamma;
        // |r| normalised to its peak is the same Lorentzian amplitude.
        let (big, gamma) = (1.0, 0.3);
        let q = DrivenQubitParams::new(2.0 * big, gamma, 0.0).unwrap();
        let e = EmitterParams::new(0.0, gamma, big, 1.0).unwrap();
        let r0_q = driven_qubit_steady_state(&q, 0.0).unwrap().r.norm();
        let r0_e = one_photon_amplitudes(&e, 0.0).r.norm();
        for d in linspace(-6.0, 6.0, 61) {
            let a = driven_qubit_steady_state(&q, d).unwrap().r.norm() / r0_q;
            let b = one_photon_amplitudes(&e, d).r.norm() / r0_e;
            assert!((a - b).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn bloch_matches_closed_form(
            g1 in 0.01f64..10.0, gphi in 0.0f64..10.0, om in 0.0f64..10.0, d in -20.0f64..20.0, r0 in 0.0f64..=1.0
        ) {
            let q = DrivenQubitParams::with_r0(g1, gphi, om, r0).unwrap();
            let a = driven_qubit_steady_state(&q, d).unwrap();
            let b = bloch_steady_state_oracle(&q, d).unwrap();
            prop_assert!((a.r - b.r).norm() < 1e-8);
            prop_assert!((a.t + a.r - 1.0).norm() <= f64::EPSILON);
        }
    }
}
