use crate::error::{Error, Result};

/// A function sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Input(format!(
                "grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 3 {
            return Err(Error::Input("a sampled curve needs at least 3 points".into()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Input("grid must be strictly increasing".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Where `A − B` changes sign: between the last sample of the old sign and the
/// first sample of the new one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    /// Linear interpolation of the zero of `A − B` inside `[lo, hi]`.
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub count: usize,
    pub locations: Vec<Crossing>,
    pub dead_band: f64,
}

/// Dead band used by [`crossing_count`]: `1e-9 · (max|A| + max|B|)`.
pub fn default_dead_band(a: &SampledCurve, b: &SampledCurve) -> f64 {
    1e-9 * (a.max_abs() + b.max_abs())
}

/// Counts strict sign changes of `A − B`, ignoring samples with `|A − B|`
/// inside the default dead band.
pub fn crossing_count(a: &SampledCurve, b: &SampledCurve) -> Result<CrossingReport> {
    crossing_count_with(a, b, default_dead_band(a, b))
}

pub fn crossing_count_with(a: &SampledCurve, b: &SampledCurve, dead_band: f64) -> Result<CrossingReport> {
    if a.grid != b.grid {
        return Err(Error::Input("curves are sampled on different grids".into()));
    }
    let mut locations = Vec::new();
    // (abscissa, difference) of the last sample outside the dead band
    let mut last: Option<(f64, f64)> = None;
    for ((&x, &va), &vb) in a.grid.iter().zip(&a.values).zip(&b.values) {
        let d = va - vb;
        if d.abs() <= dead_band {
            continue;
        }
        if let Some((x0, d0)) = last {
            if d0.signum() != d.signum() {
                let estimate = x0 + (x - x0) * d0 / (d0 - d);
                locations.push(Crossing { lo: x0, hi: x, estimate });
            }
        }
        last = Some((x, d));
    }
    Ok(CrossingReport {
        count: locations.len(),
        locations,
        dead_band,
    })
}
