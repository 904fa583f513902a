use std::fmt::Write as _;

use super::config::Experiment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub experiment: Experiment,
    pub summary: &'static str,
    pub target: &'static str,
    /// `(key, default)` pairs accepted in `params`.
    pub params: &'static [(&'static str, &'static str)],
}

pub fn catalog() -> [CatalogEntry; 9] {
    [
        CatalogEntry {
            experiment: Experiment::Spectrum2le,
            summary: "single-photon T and R of a side-coupled two-level emitter versus detuning",
            target: "R(0) = 1 without loss; Lorentzian R with HWHM = Gamma + gamma",
            params: &[("guided_rate", "1"), ("loss_rate", "0"), ("delta_min", "-5"), ("delta_max", "5"), ("n_points", "1001")],
        },
        CatalogEntry {
            experiment: Experiment::TwoPhoton2le,
            summary: "outgoing two-photon amplitudes t2, r2, rt and the bound-state part of g_RR",
            target: "r2 = 0 at x1 = x2; |t2|^2 peaks with a cusp at x1 = x2",
            params: &[
                ("guided_rate", "1"),
                ("x_max", "5"),
                ("dx", "0.01"),
                ("k1_detuning", "0.5"),
                ("k2_detuning", "-0.5"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::G2Coherent,
            summary: "transmitted g2(tau) of a weak Gaussian coherent packet for several Gamma/gamma",
            target: "bunching at Gamma/gamma = 3, antibunching dip below 0.9 at 1.6, |g2 - 1| < 0.1 at 0.2",
            params: &[
                ("omega_e", "10"),
                ("k0", "10"),
                ("delta_k", "1"),
                ("n_bar", "0.5"),
                ("allow_high_occupancy", "false"),
                ("ratios", "[0.2, 1.6, 3]"),
                ("tau_max", "5"),
                ("n_points", "501"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::Router,
            summary: "three-level router transmission versus probe detuning for several control strengths",
            target: "EIT window at Raman resonance (Delta = Delta_c) for weak control; ATS splitting of the doublet within 10% of Omega_c",
            params: &[
                ("loss_rate", "0.25"),
                ("metastable_loss", "0.025"),
                ("control_detuning", "-0.5"),
                ("control_rabi", "[0, 0.5, 4, 8]"),
                ("delta_min", "-8"),
                ("delta_max", "8"),
                ("n_points", "1601"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::LatticeT,
            summary: "tight-binding wave-packet transmission compared with the linear-dispersion closed form",
            target: "|T_lattice - T_analytic| < 1e-2 at 11 detunings; norm drift < 1e-9 per 1e4 steps",
            params: &[
                ("n_sites", "2048"),
                ("hopping", "1"),
                ("guided_rates", "[0.05, 0.1]"),
                ("detunings", "[-4, -3.2, ..., 4]"),
                ("sigma", "80"),
                ("k0", "pi/2"),
                ("snapshot", "false"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::LatticeG2,
            summary: "two-photon lattice scattering: coincidence profiles and a finite-U convergence sweep",
            target: "reflected-reflected minimum and transmitted-transmitted maximum at x1 = x2; double occupancy -> 0 as U grows",
            params: &[
                ("n_sites", "256"),
                ("hopping", "1"),
                ("guided_rate", "0.3"),
                ("sigma", "10"),
                ("dt", "0.01"),
                ("interaction", "\"hard_core\""),
                ("u_sweep", "[10, 100, 1000]"),
                ("sweep_sites", "64"),
                ("sweep_sigma", "2"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::RydbergRun,
            summary: "Rydberg-polariton pair propagation: g2(tau) and conditional phase at the medium exit",
            target: "bunching g2(0) > 1 in the dispersive regime; overlap with the ground bound state >= 0.9",
            params: &[
                ("od", "40"),
                ("od_b", "10"),
                ("r_b", "1"),
                ("gamma", "1"),
                ("delta", "4.6"),
                ("omega_c", "1"),
                ("half_width", "auto"),
                ("cells_per_radius", "50"),
                ("step", "auto"),
                ("smoothing", "false"),
                ("dissipative", "false"),
                ("free", "false"),
                ("tau_max", "100"),
                ("n_tau", "201"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::RydbergBound,
            summary: "bound states of the effective square well seen by the photon pair",
            target: "ground eigenvalue matches the finite-well transcendental root to 1e-6",
            params: &[
                ("od", "40"),
                ("od_b", "10"),
                ("r_b", "1"),
                ("gamma", "1"),
                ("delta", "4.6"),
                ("omega_c", "1"),
                ("cells_per_radius", "64"),
                ("decay_lengths", "36"),
                ("sample_step", "0.05"),
            ],
        },
        CatalogEntry {
            experiment: Experiment::BlochCheck,
            summary: "driven-qubit reflection: closed form against the steady state of the Bloch equations",
            target: "agreement to 1e-8 on random parameter points; t + r = 1",
            params: &[
                ("n_points", "100"),
                ("r0", "1"),
                ("gamma1_max", "2"),
                ("gamma_phi_max", "1"),
                ("omega_max", "3"),
                ("delta_max", "4"),
            ],
        },
    ]
}

pub fn entry(e: Experiment) -> CatalogEntry {
    catalog()
        .into_iter()
        .find(|c| c.experiment == e)
        .expect("every experiment has an entry")
}

pub fn render_catalog() -> String {
    let mut s = String::new();
    for c in catalog() {
        let _ = writeln!(s, "{}", c.experiment);
        let _ = writeln!(s, "    {}", c.summary);
        let _ = writeln!(s, "    target: {}", c.target);
        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "    params: {}", params.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_every_experiment_once() {
        let c = catalog();
        for e in Experiment::ALL {
            assert_eq!(c.iter().filter(|x| x.experiment == e).count(), 1);
        }
        assert!(entry(Experiment::Router).target.contains("ATS splitting"));
        assert!(entry(Experiment::LatticeT).target.contains("1e-2"));
    }
}
