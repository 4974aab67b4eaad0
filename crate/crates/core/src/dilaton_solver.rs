//! Monotone sub/supersolution iteration for `−∇²u + u² − w = 0` on discrete
//! compact domains.
//!
//! A domain is a weighted graph: `(L₀u)_i = (1/m_i) Σ_j c_ij (u_j − u_i)` with
//! symmetric couplings `c_ij ≥ 0` and node weights `m_i > 0`. Then `−L₀` is an
//! M-matrix, self-adjoint for the weighted inner product, and kills constants.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDomain {
    pub weights: Vec<f64>,
    /// Adjacency lists `(j, c_ij)`.
    pub couplings: Vec<Vec<(usize, f64)>>,
    /// Grid shape and spacing when the domain is a periodic lattice.
    pub grid: Option<(Vec<usize>, f64)>,
}

impl DiscreteDomain {
    /// Validates positivity of weights, nonnegativity and symmetry of couplings.
    pub fn from_graph(weights: Vec<f64>, couplings: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 || couplings.len() != n {
            return Err(GeometryError::InvalidDomain(format!(
                "{n} weights but {} adjacency lists",
                couplings.len()
            )));
        }
        if let Some(i) = weights.iter().position(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(GeometryError::InvalidDomain(format!("node {i} has non-positive weight")));
        }
        for (i, row) in couplings.iter().enumerate() {
            for &(j, c) in row {
                if j >= n || j == i {
                    return Err(GeometryError::InvalidDomain(format!("bad edge {i} -> {j}")));
                }
                if !(c.is_finite() && c >= 0.0) {
                    return Err(GeometryError::InvalidDomain(format!(
                        "coupling {i} -> {j} is {c}; the M-matrix property needs c ≥ 0"
                    )));
                }
                let back: f64 = couplings[j].iter().filter(|(k, _)| *k == i).map(|(_, v)| v).sum();
                let fwd: f64 = row.iter().filter(|(k, _)| *k == j).map(|(_, v)| v).sum();
                if (back - fwd).abs() > 1e-12 * fwd.abs().max(1.0) {
                    return Err(GeometryError::InvalidDomain(format!("couplings {i} <-> {j} are not symmetric")));
                }
            }
        }
        Ok(Self {
            weights,
            couplings,
            grid: None,
        })
    }

    /// Periodic lattice with the nearest-neighbour stencil, any dimension.
    pub fn torus(shape: &[usize], spacing: f64) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&s| s < 3) {
            return Err(GeometryError::InvalidDomain(format!(
                "every grid side must be at least 3, got {shape:?}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GeometryError::InvalidDomain(format!("spacing must be positive, got {spacing}")));
        }
        let n: usize = shape.iter().product();
        let c = 1.0 / (spacing * spacing);
        let mut couplings = vec![Vec::with_capacity(2 * shape.len()); n];
        let mut stride = 1;
        for &side in shape {
            for (i, row) in couplings.iter_mut().enumerate() {
                let coord = (i / stride) % side;
                let base = i - coord * stride;
                let up = base + ((coord + 1) % side) * stride;
                let down = base + ((coord + side - 1) % side) * stride;
                row.push((up, c));
                row.push((down, c));
            }
            stride *= side;
        }
        Ok(Self {
            weights: vec![1.0; n],
            couplings,
            grid: Some((shape.to_vec(), spacing)),
        })
    }

    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn apply_laplacian(&self, u: &[f64]) -> Vec<f64> {
        self.couplings
            .iter()
            .zip(&self.weights)
            .enumerate()
            .map(|(i, (row, m))| row.iter().map(|&(j, c)| c * (u[j] - u[i])).sum::<f64>() / m)
            .collect()
    }

    /// Grid coordinates of node `i` (first axis fastest).
    pub fn coordinates(&self, i: usize) -> Option<Vec<f64>> {
        let (shape, h) = self.grid.as_ref()?;
        let mut rest = i;
        Some(
            shape
                .iter()
                .map(|&s| {
                    let k = rest % s;
                    rest /= s;
                    k as f64 * h
                })
                .collect(),
        )
    }

    fn check_field(&self, f: &[f64], what: &str) -> Result<()> {
        if f.len() != self.node_count() {
            return Err(GeometryError::InvalidField(format!(
                "{what} has {} values for {} nodes",
                f.len(),
                self.node_count()
            )));
        }
        if let Some(i) = f.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidField(format!("{what} is not finite at node {i}")));
        }
        Ok(())
    }
}

/// Periodic 5-point grid on an `n1 × n2` torus.
pub fn build_flat_torus(n1: usize, n2: usize, spacing: f64) -> Result<DiscreteDomain> {
    DiscreteDomain::torus(&[n1, n2], spacing)
}

/// `a = ½√(min w)`, `b = √(max w)`.
pub fn bounds(w: &[f64]) -> Result<(f64, f64)> {
    if w.is_empty() {
        return Err(GeometryError::InvalidField("empty source field".into()));
    }
    if let Some(i) = w.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(GeometryError::InvalidField(format!(
            "w must be strictly positive; w[{i}] = {}",
            w[i]
        )));
    }
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0.5 * lo.sqrt(), hi.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaPolicy {
    Explicit(f64),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl LambdaPolicy {
    pub const AUTO: LambdaPolicy = LambdaPolicy::Auto(AutoTag::Auto);
}

/// `2b + 1` for auto; explicit values must exceed `2b`.
pub fn pick_lambda(b: f64, policy: LambdaPolicy) -> Result<f64> {
    if !(b > 0.0) {
        return Err(GeometryError::InvalidConfig(format!("upper bound must be positive, got {b}")));
    }
    match policy {
        LambdaPolicy::Auto(_) => Ok(2.0 * b + 1.0),
        LambdaPolicy::Explicit(l) if l.is_finite() && l > 2.0 * b => Ok(l),
        LambdaPolicy::Explicit(l) => Err(GeometryError::InvalidConfig(format!(
            "λ = {l} must be strictly greater than 2b = {}",
            2.0 * b
        ))),
    }
}

/// Solves `(−L₀ + λ)u = rhs` by conjugate gradients in the weighted inner product.
pub fn linear_solve(domain: &DiscreteDomain, lambda: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    linear_solve_from(domain, lambda, rhs, None)
}

fn linear_solve_from(domain: &DiscreteDomain, lambda: f64, rhs: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
    if !(lambda > 0.0) {
        return Err(GeometryError::InvalidConfig(format!("λ must be positive, got {lambda}")));
    }
    domain.check_field(rhs, "right-hand side")?;
    let n = domain.node_count();
    let m = &domain.weights;
    let op = |u: &[f64]| -> Vec<f64> {
        let lu = domain.apply_laplacian(u);
        (0..n).map(|i| lambda * u[i] - lu[i]).collect()
    };
    let dot = |x: &[f64], y: &[f64]| (0..n).map(|i| m[i] * x[i] * y[i]).sum::<f64>();

    let mut u: Vec<f64> = match guess {
        Some(g) => g.to_vec(),
        None => rhs.iter().map(|r| r / lambda).collect(),
    };
    let au = op(&u);
    let mut r: Vec<f64> = (0..n).map(|i| rhs[i] - au[i]).collect();
    let scale = rhs.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let target = 1e-14 * scale;
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let max_iter = 20 * n + 100;
    for _ in 0..max_iter {
        if sup(&r) <= target {
            return Ok(u);
        }
        let ap = op(&p);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            u[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    // recompute the true residual before giving up
    let au = op(&u);
    let res = (0..n).fold(0.0f64, |a, i| a.max((rhs[i] - au[i]).abs()));
    if res <= 10.0 * target {
        return Ok(u);
    }
    Err(GeometryError::NoConvergence {
        iterations: max_iter,
        residual: res,
    })
}

/// `G(u) = −∇²u + u² − w` pointwise.
pub fn residual(domain: &DiscreteDomain, u: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    domain.check_field(u, "u")?;
    domain.check_field(w, "w")?;
    let lu = domain.apply_laplacian(u);
    Ok((0..u.len()).map(|i| -lu[i] + u[i] * u[i] - w[i]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub lambda: LambdaPolicy,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: LambdaPolicy::AUTO,
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// `sup |u_{n+1} − u_n|`
    pub delta: f64,
    pub min: f64,
    pub max: f64,
    /// `sup |G(u_{n+1})|`
    pub residual: f64,
    pub monotone_ok: bool,
    pub bounds_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub steps: Vec<StepRecord>,
}

impl IterationTrace {
    pub fn all_ok(&self) -> bool {
        self.steps.iter().all(|s| s.monotone_ok && s.bounds_ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilatonSolution {
    pub u: Vec<f64>,
    pub trace: IterationTrace,
    pub residual_sup: f64,
}

/// `u₀ = a`, `(−L₀ + λ)u_{n+1} = w − u_n² + λu_n`, checking
/// `a ≤ u_n ≤ u_{n+1} ≤ b` at every step.
pub fn monotone_iterate(domain: &DiscreteDomain, w: &[f64], cfg: &SolverConfig) -> Result<DilatonSolution> {
    domain.check_field(w, "w")?;
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
        return Err(GeometryError::InvalidConfig(format!(
            "tol must be positive and max_iter nonzero (tol = {}, max_iter = {})",
            cfg.tol, cfg.max_iter
        )));
    }
    let (a, b) = bounds(w)?;
    let lambda = pick_lambda(b, cfg.lambda)?;
    let n = domain.node_count();
    // slack for the linear-solve roundoff in the order checks
    let slack = 1e-11 * (b + lambda);
    let mut trace = IterationTrace {
        a,
        b,
        lambda,
        steps: Vec::new(),
    };
    let mut u = vec![a; n];
    let mut last_delta = f64::INFINITY;
    for step in 1..=cfg.max_iter {
        let rhs: Vec<f64> = (0..n).map(|i| w[i] - u[i] * u[i] + lambda * u[i]).collect();
        let next = linear_solve_from(domain, lambda, &rhs, Some(&u))?;
        let mut delta = 0.0f64;
        let mut monotone_ok = true;
        let mut bounds_ok = true;
        for i in 0..n {
            let d = next[i] - u[i];
            delta = delta.max(d.abs());
            monotone_ok &= d >= -slack;
            bounds_ok &= next[i] >= a - slack && next[i] <= b + slack;
        }
        let g = residual(domain, &next, w)?;
        let rec = StepRecord {
            step,
            delta,
            min: next.iter().copied().fold(f64::INFINITY, f64::min),
            max: next.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            residual: g.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            monotone_ok,
            bounds_ok,
        };
        trace.steps.push(rec.clone());
        if !monotone_ok || !bounds_ok {
            let detail = if !monotone_ok {
                format!("iterate decreased (min step {:.3e})", (0..n).map(|i| next[i] - u[i]).fold(f64::INFINITY, f64::min))
            } else {
                format!("iterate left [a, b] = [{a}, {b}] (range [{}, {}])", rec.min, rec.max)
            };
            return Err(GeometryError::MonotonicityViolation { step, detail });
        }
        u = next;
        last_delta = delta;
        if delta < cfg.tol {
            return Ok(DilatonSolution {
                u,
                trace,
                residual_sup: rec.residual,
            });
        }
    }
    Err(GeometryError::MaxIterations {
        max_iter: cfg.max_iter,
        last_delta,
    })
}

/// Named source fields on periodic grids of side length `L = n·spacing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourcePreset {
    /// `w ≡ 4`
    Constant,
    /// `w = 4 + sin(2πx/L) sin(2πy/L)`
    SinBump,
    /// `w = 4 + 2 exp(−|x − c|²/(2σ²))`, `σ = L/8`, periodised by the nearest image
    Gaussian,
}

impl SourcePreset {
    pub fn sample(self, domain: &DiscreteDomain) -> Result<Vec<f64>> {
        let (shape, h) = domain
            .grid
            .as_ref()
            .ok_or_else(|| GeometryError::InvalidField("presets need a grid domain".into()))?;
        let lengths: Vec<f64> = shape.iter().map(|&s| s as f64 * h).collect();
        Ok((0..domain.node_count())
            .map(|i| {
                let x = domain.coordinates(i).unwrap();
                match self {
                    SourcePreset::Constant => 4.0,
                    SourcePreset::SinBump => {
                        let tau = std::f64::consts::TAU;
                        let sx = (tau * x[0] / lengths[0]).sin();
                        let sy = x.get(1).map_or(1.0, |y| (tau * y / lengths[1]).sin());
                        4.0 + sx * sy
                    }
                    SourcePreset::Gaussian => {
                        let sigma = lengths[0] / 8.0;
                        let r2: f64 = x
                            .iter()
                            .zip(&lengths)
                            .map(|(xi, li)| {
                                let d = (xi - li / 2.0).abs();
                                let d = d.min(li - d);
                                d * d
                            })
                            .sum();
                        4.0 + 2.0 * (-r2 / (2.0 * sigma * sigma)).exp()
                    }
                }
            })
            .collect())
    }
}
