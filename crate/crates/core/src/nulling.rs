//! RIS phase-shift design for interference nulling.
//!
//! A set of paths is nulled when `Aᵀv = 0`, where the columns of `A` are the
//! cascade vectors of the paths and every entry of `v` has unit modulus. Two
//! alternating-projection solvers are provided: the plain one, which
//! alternates between the null space of `Aᵀ` and the unit-modulus torus, and
//! the tangent-space variant, which first removes the radial part of the
//! correction and then takes a double step before renormalizing.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, C64};
use crate::error::{Error, Result};

/// Default convergence threshold on the linear interference power (−100 dB).
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 500;
/// Gram matrices with a larger condition number are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;
/// Floor applied before taking `10·log10` so that a perfect null stays finite.
pub const POWER_FLOOR: f64 = 1e-300;
/// Nudge applied to an exactly-zero entry before renormalizing.
pub const ZERO_PERTURBATION: f64 = 1e-12;

const UNIT_MODULUS_TOL: f64 = 1e-12;

/// RIS reflection vector; every entry lies on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftVector(DVector<C64>);

impl PhaseShiftVector {
    pub fn new(v: DVector<C64>) -> Result<Self> {
        if let Some(i) = v.iter().position(|z| (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL) {
            return Err(Error::InvalidParameter(format!(
                "entry {i} has modulus {}, expected 1",
                v[i].norm()
            )));
        }
        Ok(Self(v))
    }

    pub fn ones(len: usize) -> Self {
        Self(DVector::from_element(len, C64::new(1.0, 0.0)))
    }

    /// Phases drawn i.i.d. uniform on `[0, 2π)` from `ChaCha8Rng::seed_from_u64(seed)`.
    pub fn random(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self(DVector::from_fn(len, |_, _| {
            C64::from_polar(1.0, rng.random_range(0.0..TAU))
        }))
    }

    pub fn from_phases(phases: &[f64]) -> Self {
        Self(DVector::from_iterator(
            phases.len(),
            phases.iter().map(|w| C64::from_polar(1.0, *w)),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.0
    }

    pub fn phases(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.arg()).collect()
    }
}

/// Ordered list of (user, antenna) paths to be nulled, 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    paths: Vec<(usize, usize)>,
}

impl PathSet {
    pub fn new(paths: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(paths.len());
        for &(user, antenna) in &paths {
            if !seen.insert((user, antenna)) {
                return Err(Error::DuplicatePath { user, antenna });
            }
        }
        Ok(Self { paths })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// All cross paths of a square `K`-transmitter `K`-user interference channel:
    /// user `k` must not hear antenna `j ≠ k`. Ordered user-major.
    pub fn interference_channel(num_users: usize) -> Self {
        let paths = (0..num_users)
            .flat_map(|k| (0..num_users).filter(move |&j| j != k).map(move |j| (k, j)))
            .collect();
        Self { paths }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.paths.iter()
    }

    pub fn as_slice(&self) -> &[(usize, usize)] {
        &self.paths
    }
}

/// RIS size for nulling `paths` paths: `⌈2·paths·margin⌉`.
pub fn ris_units_for(paths: usize, margin: f64) -> usize {
    (2.0 * paths as f64 * margin - 1e-9).ceil().max(0.0) as usize
}

/// Path matrix plus the stopping rule.
#[derive(Debug, Clone)]
pub struct NullingProblem {
    a: DMatrix<C64>,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl NullingProblem {
    pub fn new(a: DMatrix<C64>) -> Result<Self> {
        if a.ncols() > a.nrows() {
            return Err(Error::TooManyPaths {
                paths: a.ncols(),
                units: a.nrows(),
            });
        }
        Ok(Self {
            a,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// G×p matrix whose columns are the cascade vectors.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn num_units(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_paths(&self) -> usize {
        self.a.ncols()
    }

    pub fn projector(&self) -> Result<Projector> {
        Projector::new(&self.a)
    }
}

/// Stacks the cascade vectors of `paths` (in order) into a [`NullingProblem`].
pub fn build_path_matrix(ch: &ChannelRealization, paths: &PathSet) -> Result<NullingProblem> {
    let units = ch.num_units();
    if paths.len() > units {
        return Err(Error::TooManyPaths {
            paths: paths.len(),
            units,
        });
    }
    let columns = paths
        .iter()
        .map(|&(k, j)| ch.cascade_vector(k, j).map(|c| c.a))
        .collect::<Result<Vec<_>>>()?;
    let a = if columns.is_empty() {
        DMatrix::zeros(units, 0)
    } else {
        DMatrix::from_columns(&columns)
    };
    NullingProblem::new(a)
}

/// Orthogonal projector onto `{w : Aᵀw = 0}`, with the Gram matrix
/// `AᵀA*` factored once.
#[derive(Debug, Clone)]
pub struct Projector {
    a_t: DMatrix<C64>,
    a_conj: DMatrix<C64>,
    gram: Option<nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl Projector {
    pub fn new(a: &DMatrix<C64>) -> Result<Self> {
        let a_t = a.transpose();
        let a_conj = a.map(|z| z.conj());
        if a.ncols() == 0 {
            return Ok(Self { a_t, a_conj, gram: None });
        }
        let gram = &a_t * &a_conj;
        let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
        let max = eig.max();
        let min = eig.min();
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::RankDeficient { condition });
        }
        Ok(Self {
            a_t,
            a_conj,
            gram: Some(gram.lu()),
        })
    }

    /// Returns `(Aᵀv, A*(AᵀA*)⁻¹Aᵀv)`: the path gains and the component of
    /// `v` orthogonal to the feasible subspace.
    fn gains_and_complement(&self, v: &DVector<C64>) -> (DVector<C64>, DVector<C64>) {
        let gains = &self.a_t * v;
        let complement = match &self.gram {
            None => DVector::zeros(v.len()),
            Some(lu) => {
                let coeffs = lu.solve(&gains).expect("Gram matrix checked non-singular");
                &self.a_conj * coeffs
            }
        };
        (gains, complement)
    }

    pub fn project(&self, v: &DVector<C64>) -> DVector<C64> {
        let (_, complement) = self.gains_and_complement(v);
        v - complement
    }

    /// Linear interference power `‖Aᵀv‖²`.
    pub fn power(&self, v: &DVector<C64>) -> f64 {
        (&self.a_t * v).norm_squared()
    }
}

/// Projection onto the feasible subspace `Aᵀw = 0`.
pub fn project_feasible_subspace(v: &DVector<C64>, a: &DMatrix<C64>) -> Result<DVector<C64>> {
    if v.len() != a.nrows() {
        return Err(Error::LengthMismatch {
            expected: a.nrows(),
            got: v.len(),
        });
    }
    Ok(Projector::new(a)?.project(v))
}

/// Entry-wise normalization onto the unit circle.
pub fn project_unit_modulus(v: &DVector<C64>) -> Result<PhaseShiftVector> {
    if let Some(i) = v.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::ZeroEntry(i));
    }
    Ok(PhaseShiftVector(v.map(|z| z / z.norm())))
}

/// Normalizes, nudging exact zeros first; returns the number of nudges.
fn normalize_with_perturbation(v: &mut DVector<C64>) -> usize {
    let mut nudged = 0;
    for z in v.iter_mut() {
        if z.norm() == 0.0 {
            *z += C64::new(ZERO_PERTURBATION, 0.0);
            nudged += 1;
        }
        *z /= z.norm();
    }
    nudged
}

/// Interference power after each iteration, starting from the initial point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub interference_linear: Vec<f64>,
    pub interference_db: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Zero entries nudged before renormalization.
    pub perturbations: usize,
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.max(POWER_FLOOR).log10()
}

impl ConvergenceTrace {
    fn push(&mut self, linear: f64) {
        self.interference_linear.push(linear);
        self.interference_db.push(to_db(linear));
    }

    pub fn initial_db(&self) -> f64 {
        self.interference_db.first().copied().unwrap_or(f64::NAN)
    }

    pub fn final_linear(&self) -> f64 {
        self.interference_linear.last().copied().unwrap_or(f64::NAN)
    }

    pub fn final_db(&self) -> f64 {
        self.interference_db.last().copied().unwrap_or(f64::NAN)
    }

    /// First iteration index at which the trace is at or below `threshold_db`.
    pub fn iterations_to_reach(&self, threshold_db: f64) -> Option<usize> {
        self.interference_db.iter().position(|&d| d <= threshold_db)
    }

    /// CSV with header `iteration,interference_linear,interference_db`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,interference_linear,interference_db\n");
        for (i, (lin, db)) in self
            .interference_linear
            .iter()
            .zip(&self.interference_db)
            .enumerate()
        {
            let _ = writeln!(out, "{i},{lin:e},{db}");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Baseline,
    Improved,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::Improved => "improved",
        }
    }
}

/// Runs `algorithm` from `v0` until the interference power drops to the
/// problem tolerance or the iteration limit is hit.
pub fn solve(
    prob: &NullingProblem,
    v0: &PhaseShiftVector,
    algorithm: Algorithm,
) -> Result<(PhaseShiftVector, ConvergenceTrace)> {
    if v0.len() != prob.num_units() {
        return Err(Error::LengthMismatch {
            expected: prob.num_units(),
            got: v0.len(),
        });
    }
    let proj = prob.projector()?;
    let mut v = v0.as_vector().clone();
    let mut trace = ConvergenceTrace::default();

    let (mut gains, mut complement) = proj.gains_and_complement(&v);
    trace.push(gains.norm_squared());
    while trace.final_linear() > prob.tolerance && trace.iterations < prob.max_iterations {
        match algorithm {
            Algorithm::Baseline => {
                v -= &complement;
            }
            Algorithm::Improved => {
                // Drop the radial part Re(v̄ ⊙ y)·v so only the tangent
                // component of the correction remains, then double it.
                let tangent = complement.zip_map(&v, |y, vi| y - vi * (vi.conj() * y).re);
                v.axpy(C64::new(-2.0, 0.0), &tangent, C64::new(1.0, 0.0));
            }
        }
        trace.perturbations += normalize_with_perturbation(&mut v);
        trace.iterations += 1;
        (gains, complement) = proj.gains_and_complement(&v);
        trace.push(gains.norm_squared());
    }
    trace.converged = trace.final_linear() <= prob.tolerance;
    Ok((PhaseShiftVector(v), trace))
}

pub fn baseline_alternating_projection(
    prob: &NullingProblem,
    v0: &PhaseShiftVector,
) -> Result<(PhaseShiftVector, ConvergenceTrace)> {
    solve(prob, v0, Algorithm::Baseline)
}

pub fn improved_alternating_projection(
    prob: &NullingProblem,
    v0: &PhaseShiftVector,
) -> Result<(PhaseShiftVector, ConvergenceTrace)> {
    solve(prob, v0, Algorithm::Improved)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferencePower {
    pub linear: f64,
    pub db: f64,
}

/// `Σ |aᵀv|²` over the paths of `paths`.
pub fn interference_power(
    ch: &ChannelRealization,
    v: &PhaseShiftVector,
    paths: &PathSet,
) -> Result<InterferencePower> {
    let mut linear = 0.0;
    for &(k, j) in paths.iter() {
        linear += ch.effective_gain(v, k, j)?.norm_sqr();
    }
    Ok(InterferencePower {
        linear,
        db: to_db(linear),
    })
}
