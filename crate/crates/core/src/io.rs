//! JSON file formats. Indices are 0-based; component lists are sparse and list
//! each independent component once with strictly increasing antisymmetric indices.
//!
//! Geometry:
//! ```json
//! { "name": "su2", "dim": 3,
//!   "brackets": [[0, 1, 2, 1.0], [1, 0, 2, -1.0], [2, 0, 1, 1.0]],
//!   "torsion": [[0, 1, 2, -1.0]],
//!   "orientation": 1,
//!   "structures": { "hypercomplex": [[[0, 1, 1.0], ...], [...], [...]] } }
//! ```
//! `brackets` entries are `[a, b, c, c^a_{bc}]` with `b < c`; `torsion` entries are
//! `[i, j, k, H_{ijk}]` with `i < j < k`; complex structures are `[a, b, J[a][b]]`.

use serde::{Deserialize, Serialize};

use crate::catalog::{Example, Structures};
use crate::dilaton_solver::{
    build_flat_torus, DilatonSolution, DiscreteDomain, IterationTrace, LambdaPolicy, SolverConfig, SourcePreset,
};
use crate::error::{GeometryError, Result};
use crate::fibration_topology::{FiberMode, TopologyData};
use crate::frame_algebra::{EpsilonOrientation, Form, FrameTensor};
use crate::invariant_geometry::LieFrameGeometry;
use crate::special_structures::{AlmostComplexStructure, CayleyData, G2Data, HypercomplexTriple};

type Entries2 = Vec<(usize, usize, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub name: String,
    pub dim: usize,
    pub brackets: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    pub torsion: Vec<(usize, usize, usize, f64)>,
    #[serde(default = "positive")]
    pub orientation: i8,
    #[serde(default, skip_serializing_if = "StructuresFile::is_empty")]
    pub structures: StructuresFile,
}

fn positive() -> i8 {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuresFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<Entries2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypercomplex: Option<[Entries2; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<Vec<(usize, usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin7: Option<Vec<(usize, usize, usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub su3_fibration: bool,
}

impl StructuresFile {
    fn is_empty(&self) -> bool {
        *self == StructuresFile::default()
    }
}

fn bad(msg: String) -> GeometryError {
    GeometryError::Parse(msg)
}

fn check_index(i: usize, n: usize, what: &str) -> Result<()> {
    if i >= n {
        return Err(bad(format!("{what}: index {i} out of range for dimension {n}")));
    }
    Ok(())
}

fn check_value(v: f64, what: &str) -> Result<()> {
    if !v.is_finite() {
        return Err(bad(format!("{what}: non-finite value")));
    }
    Ok(())
}

fn form_from_entries(n: usize, entries: &[Vec<usize>], values: &[f64], what: &str) -> Result<Form> {
    let p = entries.first().map_or(0, |e| e.len());
    let mut f = Form::zero(n, p);
    let mut seen = std::collections::HashSet::new();
    for (idx, &v) in entries.iter().zip(values) {
        for &i in idx {
            check_index(i, n, what)?;
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad(format!("{what}: indices {idx:?} must be strictly increasing")));
        }
        if !seen.insert(idx.clone()) {
            return Err(bad(format!("{what}: duplicate entry {idx:?}")));
        }
        check_value(v, what)?;
        f.add_component(idx, v);
    }
    Ok(f)
}

fn form_entries(f: &Form) -> Vec<(Vec<usize>, f64)> {
    f.iter().filter(|(_, v)| *v != 0.0).collect()
}

fn matrix_from_entries(n: usize, entries: &Entries2, what: &str) -> Result<nalgebra::DMatrix<f64>> {
    let mut m = nalgebra::DMatrix::zeros(n, n);
    let mut seen = std::collections::HashSet::new();
    for &(a, b, v) in entries {
        check_index(a, n, what)?;
        check_index(b, n, what)?;
        check_value(v, what)?;
        if !seen.insert((a, b)) {
            return Err(bad(format!("{what}: duplicate entry ({a}, {b})")));
        }
        m[(a, b)] = v;
    }
    Ok(m)
}

fn matrix_entries(m: &nalgebra::DMatrix<f64>) -> Entries2 {
    let mut out = Vec::new();
    for a in 0..m.nrows() {
        for b in 0..m.ncols() {
            if m[(a, b)] != 0.0 {
                out.push((a, b, m[(a, b)]));
            }
        }
    }
    out
}

impl GeometryFile {
    /// Validates indices and builds the geometry; structural failures of the
    /// attached complex structures are left to the verifiers.
    pub fn to_example(&self) -> Result<Example> {
        let n = self.dim;
        if n == 0 {
            return Err(bad("dim must be positive".into()));
        }
        let mut c = FrameTensor::zeros(n, 3);
        let mut seen = std::collections::HashSet::new();
        for &(a, b, d, v) in &self.brackets {
            for i in [a, b, d] {
                check_index(i, n, "brackets")?;
            }
            if b >= d {
                return Err(bad(format!("brackets: lower indices ({b}, {d}) must be increasing")));
            }
            if !seen.insert((a, b, d)) {
                return Err(bad(format!("brackets: duplicate entry ({a}, {b}, {d})")));
            }
            check_value(v, "brackets")?;
            c.set(&[a, b, d], v);
            c.set(&[a, d, b], -v);
        }
        let (idx, vals): (Vec<Vec<usize>>, Vec<f64>) =
            self.torsion.iter().map(|&(i, j, k, v)| (vec![i, j, k], v)).unzip();
        let h = if idx.is_empty() {
            Form::zero(n, 3)
        } else {
            form_from_entries(n, &idx, &vals, "torsion")?
        };
        let orient = EpsilonOrientation::new(n, self.orientation).map_err(|e| bad(e.to_string()))?;
        let geometry = LieFrameGeometry::new(self.name.clone(), c, h)?;

        let s = &self.structures;
        let mut out = Structures {
            su3_fibration: s.su3_fibration,
            ..Default::default()
        };
        if let Some(e) = &s.complex {
            out.complex = Some(AlmostComplexStructure::unchecked(matrix_from_entries(n, e, "complex")?));
        }
        if let Some([a, b, c3]) = &s.hypercomplex {
            out.hypercomplex = Some(HypercomplexTriple::unchecked(
                AlmostComplexStructure::unchecked(matrix_from_entries(n, a, "hypercomplex")?),
                AlmostComplexStructure::unchecked(matrix_from_entries(n, b, "hypercomplex")?),
                AlmostComplexStructure::unchecked(matrix_from_entries(n, c3, "hypercomplex")?),
            ));
        }
        if let Some(e) = &s.g2 {
            if n != 7 {
                return Err(bad(format!("g2 structure needs dim 7, got {n}")));
            }
            let (idx, vals): (Vec<Vec<usize>>, Vec<f64>) = e.iter().map(|&(i, j, k, v)| (vec![i, j, k], v)).unzip();
            let phi = if idx.is_empty() { Form::zero(7, 3) } else { form_from_entries(7, &idx, &vals, "g2")? };
            out.g2 = Some(G2Data { phi, orient });
        }
        if let Some(e) = &s.spin7 {
            if n != 8 {
                return Err(bad(format!("spin7 structure needs dim 8, got {n}")));
            }
            let (idx, vals): (Vec<Vec<usize>>, Vec<f64>) =
                e.iter().map(|&(i, j, k, l, v)| (vec![i, j, k, l], v)).unzip();
            let phi = if idx.is_empty() { Form::zero(8, 4) } else { form_from_entries(8, &idx, &vals, "spin7")? };
            out.spin7 = Some(CayleyData { phi, orient });
        }
        if out.su3_fibration && n != 8 {
            return Err(bad("su3_fibration applies to the 8-dimensional SU(3) frame only".into()));
        }
        Ok(Example {
            name: self.name.clone(),
            description: String::new(),
            geometry,
            orient,
            structures: out,
        })
    }

    pub fn from_example(e: &Example) -> Self {
        let g = &e.geometry;
        let n = g.dim();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for d in b + 1..n {
                    let v = g.c(a, b, d);
                    if v != 0.0 {
                        brackets.push((a, b, d, v));
                    }
                }
            }
        }
        let torsion = form_entries(g.torsion())
            .into_iter()
            .map(|(i, v)| (i[0], i[1], i[2], v))
            .collect();
        let s = &e.structures;
        let structures = StructuresFile {
            complex: s.complex.as_ref().map(|j| matrix_entries(j.matrix())),
            hypercomplex: s.hypercomplex.as_ref().map(|t| {
                [
                    matrix_entries(t.i1.matrix()),
                    matrix_entries(t.i2.matrix()),
                    matrix_entries(t.i3.matrix()),
                ]
            }),
            g2: s.g2.as_ref().map(|d| {
                form_entries(&d.phi).into_iter().map(|(i, v)| (i[0], i[1], i[2], v)).collect()
            }),
            spin7: s.spin7.as_ref().map(|d| {
                form_entries(&d.phi)
                    .into_iter()
                    .map(|(i, v)| (i[0], i[1], i[2], i[3], v))
                    .collect()
            }),
            su3_fibration: s.su3_fibration,
        };
        Self {
            name: e.name.clone(),
            dim: n,
            brackets,
            torsion,
            orientation: e.orient.sign,
            structures,
        }
    }
}

pub fn parse_geometry(text: &str) -> Result<Example> {
    let f: GeometryFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    f.to_example()
}

pub fn geometry_to_json(e: &Example) -> String {
    serde_json::to_string_pretty(&GeometryFile::from_example(e)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyFile {
    pub k: u32,
    pub n: Vec<i64>,
    pub chi: i64,
    pub tau: i64,
    #[serde(default = "su2_mode")]
    pub mode: FiberMode,
}

fn su2_mode() -> FiberMode {
    FiberMode::Su2
}

pub fn parse_topology(text: &str) -> Result<(TopologyData, FiberMode)> {
    let f: TopologyFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    Ok((TopologyData::new(f.k, f.n, f.chi, f.tau)?, f.mode))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceSpec {
    Preset(SourcePreset),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilatonProblem {
    pub grid: [usize; 2],
    pub spacing: f64,
    pub w: SourceSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "auto")]
    pub lambda: LambdaPolicy,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    SolverConfig::default().tol
}

fn auto() -> LambdaPolicy {
    LambdaPolicy::AUTO
}

fn default_max_iter() -> usize {
    SolverConfig::default().max_iter
}

impl DilatonProblem {
    pub fn domain(&self) -> Result<DiscreteDomain> {
        build_flat_torus(self.grid[0], self.grid[1], self.spacing)
    }

    pub fn source(&self, domain: &DiscreteDomain) -> Result<Vec<f64>> {
        match &self.w {
            SourceSpec::Preset(p) => p.sample(domain),
            SourceSpec::Values(v) => {
                if v.len() != domain.node_count() {
                    return Err(bad(format!(
                        "w has {} values for a {}×{} grid",
                        v.len(),
                        self.grid[0],
                        self.grid[1]
                    )));
                }
                Ok(v.clone())
            }
        }
    }

    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            lambda: self.lambda,
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

pub fn parse_dilaton_problem(text: &str) -> Result<DilatonProblem> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub final_delta: f64,
    pub monotone: bool,
    pub bounded: bool,
}

impl From<&IterationTrace> for TraceSummary {
    fn from(t: &IterationTrace) -> Self {
        Self {
            a: t.a,
            b: t.b,
            lambda: t.lambda,
            iterations: t.steps.len(),
            final_delta: t.steps.last().map_or(f64::NAN, |s| s.delta),
            monotone: t.steps.iter().all(|s| s.monotone_ok),
            bounded: t.steps.iter().all(|s| s.bounds_ok),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilatonOutput {
    pub u: Vec<f64>,
    pub trace: TraceSummary,
    pub residual_sup: f64,
}

impl From<&DilatonSolution> for DilatonOutput {
    fn from(s: &DilatonSolution) -> Self {
        Self {
            u: s.u.clone(),
            trace: (&s.trace).into(),
            residual_sup: s.residual_sup,
        }
    }
}
