//! Closed-form scattering of one and two photons from a two-level emitter
//! side-coupled to a waveguide with linear dispersion.

mod coherent;
mod one_photon;
mod two_photon;

pub use coherent::{
    coherent_transmission, coherent_transmission_with, g2_monochromatic, g2_transmitted, packet_amplitudes, Estimate,
    SPECTRAL_CUTOFF,
};
pub use one_photon::{
    driven_response, input_output_one_photon, one_photon_amplitudes, one_photon_coefficients, one_photon_spectrum,
    OnePhotonAmplitudes,
};
pub use two_photon::{
    asymptotic_amplitudes, e_r_at, g_rr_at, step, two_photon_asymptotics, two_photon_asymptotics_for,
    two_photon_bound_state, BoundStateAmplitudes, OnePhotonMode, TwoPhotonAsymptotics,
};
