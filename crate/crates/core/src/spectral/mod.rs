//! Discrete Schrödinger operators `L + V` on weighted graphs, Rayleigh
//! quotients and estimates of the bottom of the spectrum.
//!
//! For a function `f` the energy is
//! `Σ_edges w (f(u) - f(v))² + Σ_v m_v V(v) f(v)²` and the mass is
//! `Σ_v m_v f(v)²`. On a finite graph the bottom of the spectrum is the
//! smallest generalized eigenvalue of `(L + diag(mV), diag(m))` on the
//! non-Dirichlet vertices; it is solved in the symmetrized form
//! `M^{-1/2} (L + diag(mV)) M^{-1/2}`.

mod exhaustion;
pub mod jacobi;
pub mod lanczos;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::function::TestFunction;
use crate::graph::Graph;

pub use exhaustion::{lambda0_exhaustion, ExhaustionOptions};
pub use lanczos::LanczosOptions;

/// Largest problem the dense path accepts.
pub const DENSE_ORACLE_LIMIT: usize = 2048;

/// Dirichlet form of `f` (edge terms plus potential term).
pub fn energy<G: Graph>(g: &G, f: &TestFunction) -> f64 {
    let mut e = 0.0;
    for (v, fv) in f.iter() {
        e += g.measure(v) * g.potential(v) * fv * fv;
        for (w, weight) in g.neighbors(v) {
            let fw = f.get(w);
            let d = fv - fw;
            // edges inside the support are visited from both ends
            e += if fw != 0.0 { 0.5 } else { 1.0 } * weight * d * d;
        }
    }
    e
}

/// Edge part of the energy only.
pub fn gradient_energy<G: Graph>(g: &G, f: &TestFunction) -> f64 {
    let mut e = 0.0;
    for (v, fv) in f.iter() {
        for (w, weight) in g.neighbors(v) {
            let fw = f.get(w);
            let d = fv - fw;
            e += if fw != 0.0 { 0.5 } else { 1.0 } * weight * d * d;
        }
    }
    e
}

/// `Σ m V f²`
pub fn potential_energy<G: Graph>(g: &G, f: &TestFunction) -> f64 {
    f.iter().map(|(v, x)| g.measure(v) * g.potential(v) * x * x).sum()
}

/// `Σ m f²`
pub fn mass<G: Graph>(g: &G, f: &TestFunction) -> f64 {
    f.iter().map(|(v, x)| g.measure(v) * x * x).sum()
}

/// Rayleigh quotient `energy(f) / mass(f)`, computed over the support and
/// its edge neighborhood only.
pub fn rayleigh<G: Graph>(g: &G, f: &TestFunction) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::EmptyCompetitor);
    }
    f.check_admissible(g)?;
    Ok(energy(g, f) / mass(g, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Lanczos,
    Exhaustion,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub radius: usize,
    pub value: f64,
    pub residual: f64,
}

/// An estimate of the bottom of the spectrum.
///
/// `residual` is `‖(L+V)φ − λ m φ‖ / ‖φ‖`, both norms taken in the
/// symmetrized (measure-weighted) coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEstimate {
    pub value: f64,
    pub residual: f64,
    pub method: Method,
    pub trace: Vec<TracePoint>,
}

impl Serialize for SpectralEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectralEstimate", 5)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("method", &self.method)?;
        let trace: Vec<(usize, f64)> = self.trace.iter().map(|t| (t.radius, t.value)).collect();
        st.serialize_field("trace", &trace)?;
        let residuals: Vec<f64> = self.trace.iter().map(|t| t.residual).collect();
        st.serialize_field("trace_residuals", &residuals)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SpectralEstimate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            value: f64,
            residual: f64,
            method: Method,
            #[serde(default)]
            trace: Vec<(usize, f64)>,
            #[serde(default)]
            trace_residuals: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        let trace = raw
            .trace
            .iter()
            .enumerate()
            .map(|(i, &(radius, value))| TracePoint {
                radius,
                value,
                residual: raw.trace_residuals.get(i).copied().unwrap_or(f64::NAN),
            })
            .collect();
        Ok(SpectralEstimate {
            value: raw.value,
            residual: raw.residual,
            method: raw.method,
            trace,
        })
    }
}

/// The symmetrized operator `M^{-1/2}(L + diag(mV))M^{-1/2}` restricted to
/// free vertices, in compressed sparse rows.
#[derive(Clone, Debug)]
pub struct SymmetricOperator {
    free: Vec<usize>,
    diag: Vec<f64>,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    inv_sqrt_m: Vec<f64>,
}

impl SymmetricOperator {
    /// Assembles the operator on vertices that are neither in the graph's
    /// Dirichlet set nor flagged by `extra_dirichlet`.
    pub fn assemble<G: Graph>(g: &G, extra_dirichlet: impl Fn(usize) -> bool) -> Result<Self> {
        let n = g.vertex_count();
        let mut local = vec![u32::MAX; n];
        let mut free = Vec::new();
        for v in 0..n {
            if !g.is_dirichlet(v) && !extra_dirichlet(v) {
                local[v] = free.len() as u32;
                free.push(v);
            }
        }
        if free.is_empty() {
            return Err(Error::NoFreeVertex);
        }
        let inv_sqrt_m: Vec<f64> = free.iter().map(|&v| 1.0 / g.measure(v).sqrt()).collect();
        let mut diag = Vec::with_capacity(free.len());
        let mut offsets = Vec::with_capacity(free.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for (i, &v) in free.iter().enumerate() {
            let mut d = g.measure(v) * g.potential(v);
            for (w, weight) in g.neighbors(v) {
                if w == v {
                    continue;
                }
                d += weight;
                let j = local[w];
                if j != u32::MAX {
                    cols.push(j);
                    vals.push(-weight * inv_sqrt_m[i] * inv_sqrt_m[j as usize]);
                }
            }
            diag.push(d * inv_sqrt_m[i] * inv_sqrt_m[i]);
            offsets.push(cols.len());
        }
        Ok(SymmetricOperator {
            free,
            diag,
            offsets,
            cols,
            vals,
            inv_sqrt_m,
        })
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Graph vertex of each free index.
    pub fn free_vertices(&self) -> &[usize] {
        &self.free
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.free.len() {
            let mut acc = self.diag[i] * x[i];
            for k in self.offsets[i]..self.offsets[i + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            y[i] = acc;
        }
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.free.len() {
            let r: f64 = self.vals[self.offsets[i]..self.offsets[i + 1]].iter().map(|v| v.abs()).sum();
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] += self.diag[i];
            for k in self.offsets[i]..self.offsets[i + 1] {
                a[i * n + self.cols[k] as usize] += self.vals[k];
            }
        }
        a
    }

    /// `‖Bψ − λψ‖ / ‖ψ‖`
    pub fn residual(&self, value: f64, psi: &[f64]) -> f64 {
        let mut y = vec![0.0; psi.len()];
        self.apply(psi, &mut y);
        let r: f64 = y.iter().zip(psi).map(|(a, b)| (a - value * b).powi(2)).sum();
        let p: f64 = psi.iter().map(|b| b * b).sum();
        (r / p).sqrt()
    }

    /// Converts a symmetrized vector `ψ` back to the vertex function
    /// `φ = M^{-1/2} ψ`.
    pub fn to_function(&self, psi: &[f64]) -> Result<TestFunction> {
        TestFunction::from_pairs(self.free.iter().zip(psi.iter().zip(&self.inv_sqrt_m)).map(|(&v, (p, s))| (v, p * s)))
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    /// Free-vertex count up to which the dense path is used.
    pub dense_limit: usize,
    pub max_sweeps: usize,
    pub lanczos: LanczosOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            dense_limit: 512,
            max_sweeps: 100,
            lanczos: LanczosOptions::default(),
        }
    }
}

/// Smallest eigenpair with the eigenvector in symmetrized coordinates.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub residual: f64,
    pub method: Method,
    pub vector: Vec<f64>,
}

pub fn dense_eigenpair(op: &SymmetricOperator, opts: &SolverOptions) -> Result<Eigenpair> {
    let n = op.dim();
    if n > DENSE_ORACLE_LIMIT {
        return Err(Error::SizeOverflow {
            size: n,
            limit: DENSE_ORACLE_LIMIT,
        });
    }
    let (vals, vecs) = jacobi::symmetric_eigen(&op.to_dense(), n, opts.max_sweeps).ok_or(Error::NoConvergence {
        iterations: opts.max_sweeps,
        residual: f64::NAN,
    })?;
    let vector: Vec<f64> = (0..n).map(|k| vecs[k * n]).collect();
    let residual = op.residual(vals[0], &vector);
    Ok(Eigenpair {
        value: vals[0],
        residual,
        method: Method::Dense,
        vector,
    })
}

pub fn lanczos_eigenpair(op: &SymmetricOperator, start: Option<&[f64]>, opts: &SolverOptions) -> Result<Eigenpair> {
    let (lo, _) = op.gershgorin();
    let lopts = LanczosOptions {
        tol: opts.tol,
        ..opts.lanczos.clone()
    };
    let res = lanczos::smallest_eigenpair(op, lo, start, &lopts);
    if !res.converged {
        return Err(Error::NoConvergence {
            iterations: res.matvecs,
            residual: res.residual,
        });
    }
    Ok(Eigenpair {
        value: res.value,
        residual: res.residual,
        method: Method::Lanczos,
        vector: res.vector,
    })
}

/// Dense for small problems, Lanczos above `opts.dense_limit`.
pub fn smallest_eigenpair(op: &SymmetricOperator, start: Option<&[f64]>, opts: &SolverOptions) -> Result<Eigenpair> {
    if op.dim() <= opts.dense_limit {
        let pair = dense_eigenpair(op, opts)?;
        if pair.residual <= opts.tol {
            return Ok(pair);
        }
        return Err(Error::NoConvergence {
            iterations: opts.max_sweeps,
            residual: pair.residual,
        });
    }
    lanczos_eigenpair(op, start, opts)
}

/// Bottom of the spectrum of a finite graph with its Dirichlet set.
pub fn lambda0_finite<G: Graph>(g: &G, opts: &SolverOptions) -> Result<SpectralEstimate> {
    ground_state(g, opts).map(|(est, _)| est)
}

/// Like [`lambda0_finite`], also returning the minimizing vertex function.
pub fn ground_state<G: Graph>(g: &G, opts: &SolverOptions) -> Result<(SpectralEstimate, TestFunction)> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("solver tolerance must be positive".into()));
    }
    let op = SymmetricOperator::assemble(g, |_| false)?;
    let pair = smallest_eigenpair(&op, None, opts)?;
    let f = op.to_function(&pair.vector)?;
    Ok((
        SpectralEstimate {
            value: pair.value,
            residual: pair.residual,
            method: pair.method,
            trace: Vec::new(),
        },
        f,
    ))
}

/// Full Jacobi eigen-decomposition; the independent check for Lanczos.
pub fn dense_oracle<G: Graph>(g: &G) -> Result<SpectralEstimate> {
    let op = SymmetricOperator::assemble(g, |_| false)?;
    let pair = dense_eigenpair(&op, &SolverOptions::default())?;
    Ok(SpectralEstimate {
        value: pair.value,
        residual: pair.residual,
        method: Method::Dense,
        trace: Vec::new(),
    })
}
