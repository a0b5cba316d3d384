//! Spherical grid of normalized Hermitian test operators.
//!
//! Independent components of a Hermitian operator are swept over a polar
//! lattice — magnitudes in steps of Δr, phases in steps of Δφ — and each
//! resulting operator is renormalized to ‖Â‖_max = 1. Any unit-max-norm
//! Hermitian operator then lies within ε = √(Δr² + Δφ²) of some grid member,
//! so finitely many optimal witnesses test entanglement to precision ε.
//! Hermiticity fixes the lower triangle, and the diagonal is real, so only
//! the upper triangle is enumerated and diagonal phases reduce to a sign.
//!
//! Grids grow combinatorially; operators stream lazily in a deterministic
//! lexicographic order, and generation refuses to start above a configured
//! cap. Scans are resumable by grid index.

use serde::Serialize;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::linalg::{BipartiteOperator, DensityOperator, Dims};
use crate::solver::{f_ab, SolverConfig};
use crate::{tol, Result};

const DEFAULT_CAP: u128 = 1_000_000;
const LATTICE_EPS: f64 = 1e-12;

/// Lattice resolution for the operator grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub dims: Dims,
    pub delta_r: f64,
    pub delta_phi: f64,
    pub cap: u128,
}

impl GridSpec {
    pub fn new(dims: Dims, delta_r: f64, delta_phi: f64) -> Result<Self> {
        if !(delta_r > 0.0 && delta_r <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "delta_r must lie in (0, 1], got {delta_r}"
            )));
        }
        if !(delta_phi > 0.0 && delta_phi <= TAU) {
            return Err(Error::InvalidParam(format!(
                "delta_phi must lie in (0, 2pi], got {delta_phi}"
            )));
        }
        Ok(GridSpec {
            dims,
            delta_r,
            delta_phi,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    /// Covering radius ε = √(Δr² + Δφ²) in the max-norm.
    pub fn epsilon(&self) -> f64 {
        (self.delta_r * self.delta_r + self.delta_phi * self.delta_phi).sqrt()
    }

    /// Magnitude lattice {0, Δr, 2Δr, …} with 1 always included.
    pub fn magnitudes(&self) -> Vec<f64> {
        let mut mags = Vec::new();
        let mut k = 0usize;
        loop {
            let m = k as f64 * self.delta_r;
            if m > 1.0 + LATTICE_EPS {
                break;
            }
            mags.push(m.min(1.0));
            k += 1;
        }
        if 1.0 - mags[mags.len() - 1] > LATTICE_EPS {
            mags.push(1.0);
        }
        mags
    }

    /// Phase lattice {0, Δφ, 2Δφ, …} below 2π.
    pub fn phases(&self) -> Vec<f64> {
        let mut phases = Vec::new();
        let mut k = 0usize;
        loop {
            let p = k as f64 * self.delta_phi;
            if p >= TAU - LATTICE_EPS {
                break;
            }
            phases.push(p);
            k += 1;
        }
        phases
    }

    /// Values a diagonal component can take (phase restricted to {0, π}).
    pub fn diagonal_values(&self) -> Vec<f64> {
        let mags = self.magnitudes();
        let mut vals = vec![0.0];
        for &m in &mags[1..] {
            vals.push(m);
            vals.push(-m);
        }
        vals
    }

    /// Values an upper-triangle component can take.
    pub fn offdiagonal_values(&self) -> Vec<Complex64> {
        let mags = self.magnitudes();
        let phases = self.phases();
        let mut vals = vec![Complex64::default()];
        for &m in &mags[1..] {
            for &p in &phases {
                vals.push(Complex64::from_polar(m, p));
            }
        }
        vals
    }

    /// Exact member count (zero operator excluded), saturating at u128::MAX.
    pub fn grid_size(&self) -> u128 {
        let d = self.dims.total() as u32;
        let n_diag = self.diagonal_values().len() as u128;
        let n_off = self.offdiagonal_values().len() as u128;
        let pairs = (d * (d - 1) / 2) as u32;
        let total = n_diag
            .checked_pow(d)
            .and_then(|x| n_off.checked_pow(pairs).and_then(|y| x.checked_mul(y)));
        match total {
            Some(t) => t - 1,
            None => u128::MAX,
        }
    }

    /// Lazy stream of grid operators. Refuses when the member count exceeds
    /// the cap.
    pub fn operators(&self) -> Result<GridStream> {
        let count = self.grid_size();
        if count > self.cap {
            return Err(Error::GridCapExceeded {
                count,
                cap: self.cap,
            });
        }
        Ok(GridStream::new(self))
    }

    /// Whether a unit-max-norm operator is a renormalized member of this
    /// lattice (used to verify that refinements keep every coarse member).
    pub fn contains_direction(&self, op: &BipartiteOperator) -> bool {
        if op.dims() != self.dims {
            return false;
        }
        let diag_vals = self.diagonal_values();
        let off_vals = self.offdiagonal_values();
        let n = self.dims.total();
        'scales: for &s in &self.magnitudes()[1..] {
            for i in 0..n {
                let v = op.entries()[(i, i)] * s;
                if v.im.abs() > 1e-9 || !diag_vals.iter().any(|&d| (d - v.re).abs() < 1e-9) {
                    continue 'scales;
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = op.entries()[(i, j)] * s;
                    if !off_vals.iter().any(|&w| (w - v).norm() < 1e-9) {
                        continue 'scales;
                    }
                }
            }
            return true;
        }
        false
    }
}

/// One grid member with its position in the enumeration.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub index: u64,
    pub op: BipartiteOperator,
}

/// Odometer over the component lattice; diagonal digits first, then the
/// upper triangle row-major, last digit fastest.
pub struct GridStream {
    dims: Dims,
    diag_vals: Vec<f64>,
    off_vals: Vec<Complex64>,
    radices: Vec<usize>,
    digits: Vec<usize>,
    index: u64,
    exhausted: bool,
}

impl GridStream {
    fn new(spec: &GridSpec) -> Self {
        let d = spec.dims.total();
        let diag_vals = spec.diagonal_values();
        let off_vals = spec.offdiagonal_values();
        let mut radices = vec![diag_vals.len(); d];
        radices.extend(vec![off_vals.len(); d * (d - 1) / 2]);
        GridStream {
            dims: spec.dims,
            diag_vals,
            off_vals,
            digits: vec![0; radices.len()],
            radices,
            index: 0,
            exhausted: false,
        }
    }

    /// Jump so the next yielded point has `index >= target`.
    pub fn seek(&mut self, target: u64) {
        if target <= 1 {
            return;
        }
        let mut rem = (target - 1) as u128;
        for pos in (0..self.digits.len()).rev() {
            let r = self.radices[pos] as u128;
            self.digits[pos] = (rem % r) as usize;
            rem /= r;
        }
        if rem > 0 {
            self.exhausted = true;
        }
        self.index = target - 1;
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.digits.len()).rev() {
            self.digits[pos] += 1;
            if self.digits[pos] < self.radices[pos] {
                self.index += 1;
                return true;
            }
            self.digits[pos] = 0;
        }
        false
    }

    fn build(&self) -> BipartiteOperator {
        let n = self.dims.total();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self.diag_vals[self.digits[i]], 0.0);
        }
        let mut pos = n;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.off_vals[self.digits[pos]];
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
                pos += 1;
            }
        }
        let max_norm = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        BipartiteOperator::new(self.dims, m.unscale(max_norm)).expect("lattice op is hermitian")
    }
}

impl Iterator for GridStream {
    type Item = GridPoint;

    fn next(&mut self) -> Option<GridPoint> {
        if self.exhausted || !self.advance() {
            self.exhausted = true;
            return None;
        }
        Some(GridPoint {
            index: self.index,
            op: self.build(),
        })
    }
}

/// One detecting operator of a scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub index: u64,
    pub margin: f64,
    pub f_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub detections: Vec<ScanRecord>,
    pub scanned: usize,
    /// Largest margin over all scanned operators, detection or not.
    pub best_margin: f64,
    pub epsilon: f64,
}

/// Solve f_AB for every grid operator and report those with
/// tr(ϱÂᵢ) − f_AB(Âᵢ) above the decision margin. Detections are delivered
/// in index order through `on_detection` as soon as their chunk completes,
/// so partial output survives an interrupted run.
pub fn scan_with(
    rho: &DensityOperator,
    spec: &GridSpec,
    cfg: &SolverConfig,
    resume_from: u64,
    mut on_detection: impl FnMut(&ScanRecord),
) -> Result<ScanReport> {
    if rho.dims() != spec.dims {
        return Err(Error::dims(format!(
            "state dims {} vs grid dims {}",
            rho.dims(),
            spec.dims
        )));
    }
    let mut stream = spec.operators()?;
    stream.seek(resume_from);

    const CHUNK: usize = 256;
    let mut detections = Vec::new();
    let mut scanned = 0usize;
    let mut best_margin = f64::NEG_INFINITY;

    loop {
        let batch: Vec<GridPoint> = stream.by_ref().take(CHUNK).collect();
        if batch.is_empty() {
            break;
        }
        let results: Vec<(u64, f64, f64)> = batch
            .par_iter()
            .map(|p| -> Result<(u64, f64, f64)> {
                let f = f_ab(&p.op, cfg)?;
                let trace = p.op.expectation(rho)?;
                Ok((p.index, trace - f, f))
            })
            .collect::<Result<Vec<_>>>()?;
        for (index, margin, f_value) in results {
            scanned += 1;
            best_margin = best_margin.max(margin);
            if margin > tol::DECISION_MARGIN {
                let rec = ScanRecord {
                    index,
                    margin,
                    f_value,
                };
                on_detection(&rec);
                detections.push(rec);
            }
        }
    }

    Ok(ScanReport {
        detections,
        scanned,
        best_margin,
        epsilon: spec.epsilon(),
    })
}

/// [`scan_with`] without a streaming sink.
pub fn scan(
    rho: &DensityOperator,
    spec: &GridSpec,
    cfg: &SolverConfig,
    resume_from: u64,
) -> Result<ScanReport> {
    scan_with(rho, spec, cfg, resume_from, |_| {})
}
