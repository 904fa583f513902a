//! Sampling grids and sampled fields.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing list of probe detunings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetuningGrid {
    values: Vec<f64>,
}

impl DetuningGrid {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("grid", "empty"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("grid", format!("non-finite value {bad}")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid", "values must be strictly increasing"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }
}

/// Uniform grid of `n` points from `min` to `max` inclusive.
pub fn make_grid(min: f64, max: f64, n: usize) -> Result<DetuningGrid> {
    if !min.is_finite() || !max.is_finite() {
        return Err(Error::invalid(
            "grid",
            format!("bounds must be finite, got [{min}, {max}]"),
        ));
    }
    if min >= max {
        return Err(Error::invalid("grid", format!("min {min} must be < max {max}")));
    }
    if n < 2 {
        return Err(Error::invalid("grid", format!("need at least 2 points, got {n}")));
    }
    Ok(DetuningGrid {
        values: linspace(min, max, n),
    })
}

/// Evenly spaced points; the last point is exactly `max`.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { max } else { min + step * i as f64 })
                .collect()
        }
    }
}

/// Complex amplitudes and real coefficients sampled on a detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub detunings: Vec<f64>,
    pub transmission_amplitude: Vec<C64>,
    pub reflection_amplitude: Vec<C64>,
}

impl Spectrum {
    pub fn transmission(&self) -> Vec<f64> {
        self.transmission_amplitude.iter().map(|t| t.norm_sqr()).collect()
    }

    pub fn reflection(&self) -> Vec<f64> {
        self.reflection_amplitude.iter().map(|r| r.norm_sqr()).collect()
    }
}

/// Real coefficients `T = |t|^2`, `R = |r|^2` on a detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub detunings: Vec<f64>,
    pub transmission: Vec<f64>,
    pub reflection: Vec<f64>,
}

/// Tensor-product grid over two photon coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2d {
    x1: Vec<f64>,
    x2: Vec<f64>,
}

impl Grid2d {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>) -> Result<Self> {
        if x1.is_empty() || x2.is_empty() {
            return Err(Error::invalid("grid2d", "empty axis"));
        }
        if x1.iter().chain(x2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid2d", "non-finite coordinate"));
        }
        Ok(Self { x1, x2 })
    }

    /// Square grid with identical axes.
    pub fn square(min: f64, max: f64, n: usize) -> Result<Self> {
        let axis = make_grid(min, max, n)?.values;
        Self::new(axis.clone(), axis)
    }

    pub fn x1(&self) -> &[f64] {
        &self.x1
    }

    pub fn x2(&self) -> &[f64] {
        &self.x2
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x1.len(), self.x2.len())
    }

    /// Evaluates `f(x1, x2)` at every grid node.
    pub fn map<F: Fn(f64, f64) -> C64>(&self, f: F) -> TwoPhotonField {
        let values = self
            .x1
            .iter()
            .flat_map(|&a| self.x2.iter().map(move |&b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        TwoPhotonField {
            grid: self.clone(),
            values,
        }
    }
}

/// Complex two-photon amplitude on a [`Grid2d`], stored row-major in `x1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonField {
    grid: Grid2d,
    values: Vec<C64>,
}

impl TwoPhotonField {
    pub fn grid(&self) -> &Grid2d {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.grid.x2.len() + j]
    }

    /// `max |f(i,j) - f(j,i)|` on a square grid with identical axes.
    pub fn asymmetry(&self) -> f64 {
        let (n1, n2) = self.grid.shape();
        let n = n1.min(n2);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        worst
    }
}
