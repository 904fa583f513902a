//! Parameter records shared by the physics modules.
//!
//! Every record is an immutable value validated at construction. Rates are
//! angular frequencies, detunings are measured from the emitter transition
//! (`delta = v_g * k - omega_e`), so the linearisation frequency never shows
//! up numerically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{finite, non_negative, positive, Error, Result};

/// Two-level emitter side-coupled to a waveguide with linear dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmitterParams {
    omega_e: f64,
    loss_rate: f64,
    guided_rate: f64,
    group_velocity: f64,
}

impl EmitterParams {
    /// `omega_e` transition frequency, `loss_rate` decay into non-guided modes
    /// (gamma), `guided_rate` decay into the waveguide (Gamma = V^2 / v_g).
    ///
    /// `guided_rate == 0` is accepted and describes a decoupled emitter.
    pub fn new(omega_e: f64, loss_rate: f64, guided_rate: f64, group_velocity: f64) -> Result<Self> {
        Ok(Self {
            omega_e: finite("omega_e", omega_e)?,
            loss_rate: non_negative("gamma", loss_rate)?,
            guided_rate: non_negative("Gamma", guided_rate)?,
            group_velocity: positive("v_g", group_velocity)?,
        })
    }

    /// Builds the record from the bare coupling amplitude `V`.
    pub fn from_coupling(omega_e: f64, loss_rate: f64, coupling: f64, group_velocity: f64) -> Result<Self> {
        finite("V", coupling)?;
        let v_g = positive("v_g", group_velocity)?;
        Self::new(omega_e, loss_rate, coupling * coupling / v_g, v_g)
    }

    /// Lossless emitter with unit group velocity, the common figure setting.
    pub fn lossless(omega_e: f64, guided_rate: f64) -> Result<Self> {
        Self::new(omega_e, 0.0, guided_rate, 1.0)
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }

    pub fn loss_rate(&self) -> f64 {
        self.loss_rate
    }

    pub fn guided_rate(&self) -> f64 {
        self.guided_rate
    }

    pub fn group_velocity(&self) -> f64 {
        self.group_velocity
    }

    /// Coupling amplitude `V = sqrt(Gamma * v_g)`.
    pub fn coupling(&self) -> f64 {
        (self.guided_rate * self.group_velocity).sqrt()
    }

    /// Total linewidth `gamma + Gamma`.
    pub fn linewidth(&self) -> f64 {
        self.loss_rate + self.guided_rate
    }

    /// Probe detuning of a photon with wavevector `k`.
    pub fn detuning_of(&self, k: f64) -> f64 {
        self.group_velocity * k - self.omega_e
    }

    /// Wavevector of a photon with probe detuning `delta`.
    pub fn wavevector_of(&self, delta: f64) -> f64 {
        (delta + self.omega_e) / self.group_velocity
    }

    pub fn with_loss_rate(&self, loss_rate: f64) -> Result<Self> {
        Self::new(self.omega_e, loss_rate, self.guided_rate, self.group_velocity)
    }

    /// Re-expresses every rate (and the velocity) in units of `scale`.
    pub fn scaled(&self, scale: Scale) -> Self {
        Self {
            omega_e: scale.to_units(self.omega_e),
            loss_rate: scale.to_units(self.loss_rate),
            guided_rate: scale.to_units(self.guided_rate),
            group_velocity: scale.to_units(self.group_velocity),
        }
    }
}

/// Driven three-level emitter: a two-level probe transition plus a control
/// field on the upper transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelParams {
    base: EmitterParams,
    metastable_loss: f64,
    control_rabi: f64,
    control_detuning: f64,
}

impl ThreeLevelParams {
    pub fn new(base: EmitterParams, metastable_loss: f64, control_rabi: f64, control_detuning: f64) -> Result<Self> {
        Ok(Self {
            base,
            metastable_loss: non_negative("gamma_s", metastable_loss)?,
            control_rabi: non_negative("Omega_c", control_rabi)?,
            control_detuning: finite("Delta_c", control_detuning)?,
        })
    }

    pub fn base(&self) -> &EmitterParams {
        &self.base
    }

    pub fn metastable_loss(&self) -> f64 {
        self.metastable_loss
    }

    pub fn control_rabi(&self) -> f64 {
        self.control_rabi
    }

    pub fn control_detuning(&self) -> f64 {
        self.control_detuning
    }

    pub fn with_control_rabi(&self, control_rabi: f64) -> Result<Self> {
        Self::new(self.base, self.metastable_loss, control_rabi, self.control_detuning)
    }

    /// Raman detuning `delta - Delta_c`.
    pub fn raman_detuning(&self, delta: f64) -> f64 {
        delta - self.control_detuning
    }
}

/// Weak Gaussian coherent-state wave packet incident from the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentInput {
    k0: f64,
    delta_k: f64,
    n_bar: f64,
}

impl CoherentInput {
    /// Rejects `n_bar > 1`: the few-photon expressions drop the N >= 3
    /// sectors and are only meaningful for weak inputs.
    pub fn new(k0: f64, delta_k: f64, n_bar: f64) -> Result<Self> {
        let input = Self::unchecked_occupancy(k0, delta_k, n_bar)?;
        if n_bar > 1.0 {
            return Err(Error::invalid(
                "n_bar",
                format!("{n_bar} > 1; use `with_high_occupancy` to override"),
            ));
        }
        Ok(input)
    }

    /// Accepts `n_bar > 1` and logs a warning instead of failing.
    pub fn with_high_occupancy(k0: f64, delta_k: f64, n_bar: f64) -> Result<Self> {
        let input = Self::unchecked_occupancy(k0, delta_k, n_bar)?;
        if n_bar > 1.0 {
            log::warn!("coherent input with n_bar = {n_bar} > 1: N >= 3 photon sectors are neglected");
        }
        Ok(input)
    }

    fn unchecked_occupancy(k0: f64, delta_k: f64, n_bar: f64) -> Result<Self> {
        Ok(Self {
            k0: finite("k0", k0)?,
            delta_k: positive("Delta_k", delta_k)?,
            n_bar: positive("n_bar", n_bar)?,
        })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn delta_k(&self) -> f64 {
        self.delta_k
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    /// Spectral amplitude `alpha(k)`; `|alpha|^2` integrates to `n_bar`.
    pub fn amplitude(&self, k: f64) -> f64 {
        let norm = self.n_bar.sqrt() / (2.0 * PI * self.delta_k * self.delta_k).powf(0.25);
        let dk = k - self.k0;
        norm * (-(dk * dk) / (4.0 * self.delta_k * self.delta_k)).exp()
    }
}

/// Reference rate used to make a module dimensionless.
///
/// Conversions are pure divisions/multiplications by the reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    reference: f64,
}

impl Scale {
    pub fn new(reference: f64) -> Result<Self> {
        Ok(Self {
            reference: positive("reference", reference)?,
        })
    }

    pub fn reference(&self) -> f64 {
        self.reference
    }

    pub fn to_units(&self, value: f64) -> f64 {
        value / self.reference
    }

    pub fn from_units(&self, value: f64) -> f64 {
        value * self.reference
    }
}
