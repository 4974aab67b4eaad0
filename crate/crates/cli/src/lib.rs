//! Command pipelines behind the `tg` binary.

use serde::Serialize;
use serde_json::{json, Value};

use tgeom::catalog::{example, Example, NAMES};
use tgeom::decomposition::{decompose, DecomposeOptions};
use tgeom::dilaton_solver::{monotone_iterate, SourcePreset};
use tgeom::fibration_topology::{build_su3_fibration, chern_topology, enumerate_diophantine, fibration_report, FiberMode, TopologyData};
use tgeom::invariant_geometry::{
    bianchi_report, bochner_report, curvature, d_invariant, levi_civita, soliton_report, with_torsion, BianchiKind,
};
use tgeom::io::{self, DilatonOutput, DilatonProblem, SourceSpec};
use tgeom::special_structures::{bryant_positivity, g2_report, hkt_report, kt_report, spin7_report};
use tgeom::{GeometryError, StructureReport};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub subject: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub sections: Vec<StructureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl Report {
    fn new(command: &str, subject: &str) -> Self {
        Self {
            tool: "tg".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            subject: subject.into(),
            passed: true,
            verdict: None,
            sections: Vec::new(),
            data: None,
        }
    }

    fn push(&mut self, section: StructureReport) {
        self.passed &= section.passed();
        self.sections.push(section);
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tg {} {}: {}\n", self.command, self.subject, if self.passed { "PASS" } else { "FAIL" });
        for s in &self.sections {
            out.push_str(&s.to_text());
        }
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        if let Some(d) = &self.data {
            if let Some(extra) = d.get("summary") {
                out.push_str(&format!("summary: {extra}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Input problems (exit 2) versus reports (exit 0 or 1).
#[derive(Debug)]
pub enum Failure {
    Input(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

#[derive(Debug, Clone, Default)]
pub struct Source {
    pub example: Option<String>,
    pub input: Option<std::path::PathBuf>,
}

impl Source {
    fn read(&self) -> Result<Option<String>, Failure> {
        match (&self.example, &self.input) {
            (Some(_), Some(_)) => Err(Failure::Input("give either --example or --input, not both".into())),
            (None, Some(p)) => std::fs::read_to_string(p)
                .map(Some)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
            _ => Ok(None),
        }
    }

    fn geometry(&self) -> Result<Example, Failure> {
        match (self.read()?, &self.example) {
            (Some(text), _) => io::parse_geometry(&text).map_err(input),
            (None, Some(name)) => example(name).map_err(input),
            (None, None) => Err(Failure::Input("one of --example or --input is required".into())),
        }
    }
}

fn structural(e: GeometryError) -> Failure {
    input(e)
}

/// Bianchi identities, connection diagnostics and every attached structure.
pub fn run_verify(src: &Source, tol: f64) -> Result<Report, Failure> {
    let ex = src.geometry()?;
    let g = &ex.geometry;
    let mut rep = Report::new("verify", &ex.name);
    for kind in [BianchiKind::First, BianchiKind::Second, BianchiKind::PairSymmetry, BianchiKind::Lccc] {
        rep.push(bianchi_report(g, kind, tol).map_err(structural)?);
    }

    let mut conn = StructureReport::new(format!("connections on {}", g.name));
    let hat = curvature(g, &with_torsion(g, 1));
    let lc = curvature(g, &levi_civita(g));
    conn.info("flat_hat", "|R̂| (∇̂ curvature)", hat.riemann.sup_norm());
    conn.info("scalar_lc", "Levi-Civita scalar curvature", lc.scalar);
    conn.info("scalar_hat", "∇̂ scalar curvature", hat.scalar);
    if hat.riemann.sup_norm() <= tol {
        conn.note("the torsion connection is flat (parallelizing)");
    }
    let dh = d_invariant(g.torsion(), g).map_err(structural)?.sup_norm();
    if dh <= tol {
        // the soliton equation with V = 0 is recorded, not required
        let s = soliton_report(g, &vec![0.0; g.dim()], tol).map_err(structural)?;
        for row in s.rows {
            conn.info(&format!("soliton_v0/{}", row.label), &row.check, row.value);
        }
    }
    rep.push(conn);

    let boch = bochner_report(g, &ex.orient, tol).map_err(structural)?;
    if g.is_unimodular(1e-12) {
        rep.push(boch);
    } else {
        let mut b = StructureReport::new(boch.name.clone());
        for row in boch.rows {
            b.info(&row.label, &row.check, row.value);
        }
        b.note("non-unimodular: Weitzenböck rows informational");
        rep.push(b);
    }

    let s = &ex.structures;
    if let Some(j) = &s.complex {
        rep.push(kt_report(g, j, &ex.orient, tol).map_err(structural)?);
    }
    if let Some(t) = &s.hypercomplex {
        rep.push(hkt_report(g, t, &ex.orient, tol).map_err(structural)?);
    }
    if let Some(g2) = &s.g2 {
        let mut r = g2_report(g, g2, tol).map_err(structural)?;
        let b = bryant_positivity(g2);
        let id = nalgebra::DMatrix::<f64>::identity(7, 7);
        r.info("bryant_minus_identity", "|B − 1|", (&b - &id).amax());
        rep.push(r);
    }
    if let Some(c) = &s.spin7 {
        rep.push(spin7_report(c, tol.max(1e-12)).map_err(structural)?);
    }
    if s.su3_fibration {
        rep.push(fibration_report(&build_su3_fibration(), tol.max(1e-12)).map_err(structural)?);
    }
    rep.verdict = Some(if rep.passed {
        "all asserted residuals vanish".into()
    } else {
        let fails: Vec<String> = rep
            .sections
            .iter()
            .flat_map(|s| s.failures().into_iter().map(move |r| format!("{}:{}", s.name, r.label)))
            .collect();
        format!("failing residuals: {}", fails.join(", "))
    });
    Ok(rep)
}

pub fn run_decompose(src: &Source, tol: f64) -> Result<Report, Failure> {
    let ex = src.geometry()?;
    let mut rep = Report::new("decompose", &ex.name);
    let opts = DecomposeOptions {
        tol,
        ..DecomposeOptions::default()
    };
    match decompose(&ex.geometry, opts) {
        Ok(res) => {
            let mut s = StructureReport::new(format!("decomposition of {}", ex.name));
            s.assert_small("dH", "dH = 0", res.diagnostics.dh, tol);
            s.assert_small("nabla_hat_H", "∇̂H = 0", res.diagnostics.nabla_hat_h, tol);
            s.assert_small(
                "kernel_transversality",
                "brackets of the kernel with everything vanish",
                res.diagnostics.kernel_transversality,
                tol,
            );
            s.assert_small("cross_block_mixing", "distinct blocks commute", res.diagnostics.cross_block_mixing, tol);
            for (k, b) in res.blocks.iter().enumerate() {
                s.assert_small(&format!("block{k}/jacobi"), "Jacobi on the block", b.jacobi_residual, tol);
                s.assert_small(
                    &format!("block{k}/killing"),
                    "−½ tr(ad ad) equals the torsion Gram form",
                    b.killing_defect,
                    tol,
                );
            }
            rep.push(s);
            let names: Vec<&str> = res.block_names();
            rep.verdict = Some(res.verdict.clone());
            rep.data = Some(json!({
                "summary": format!("kernel {}, blocks [{}]", res.kernel_dim, names.join(", ")),
                "decomposition": res,
            }));
        }
        Err(GeometryError::HypothesesNotMet(msg)) => {
            let g = &ex.geometry;
            let mut s = StructureReport::new(format!("decomposition of {}", ex.name));
            let dh = d_invariant(g.torsion(), g).map_err(structural)?.sup_norm();
            let nh = tgeom::invariant_geometry::nabla_form(g.torsion(), &with_torsion(g, 1)).sup_norm();
            s.assert_small("dH", "dH = 0", dh, tol);
            s.assert_small("nabla_hat_H", "∇̂H = 0", nh, tol);
            s.hypotheses_met = Some(false);
            s.note(msg);
            rep.push(s);
            rep.passed = false;
            rep.verdict = Some("hypotheses not met: no product decomposition is asserted".into());
        }
        Err(e) => return Err(input(e)),
    }
    Ok(rep)
}

pub fn run_topology(src: &Source, k_max: u32) -> Result<Report, Failure> {
    let text = src
        .read()?
        .ok_or_else(|| Failure::Input("topology needs --input with {k, n, chi, tau}".into()))?;
    let (top, mode) = io::parse_topology(&text).map_err(input)?;
    topology_report(&top, mode, k_max)
}

pub fn topology_report(top: &TopologyData, mode: FiberMode, k_max: u32) -> Result<Report, Failure> {
    let c = chern_topology(top, mode).map_err(input)?;
    let subject = if top.k == 0 { "S4".to_string() } else { format!("#{} CP2bar", top.k) };
    let mut rep = Report::new("topology", &subject);
    let mut s = StructureReport::new("characteristic classes");
    s.assert_small("obstruction", "3c1² + 2χ + 3τ = 0", c.obstruction as f64, 0.0);
    s.assert_small("c1_sq_nonpositive", "c1(L)² ≤ 0", (c.c1_sq.max(0)) as f64, 0.0);
    s.assert_small("p1_divisible", "3 divides 2χ + 3τ", (c.p1_adj.rem_euclid(3)) as f64, 0.0);
    s.assert_small("c2e_integral", "c2(E) is an integer", (c.c2e - c.c2e.round()).abs(), 0.0);
    s.info("c1_sq", "c1(L)²", c.c1_sq as f64);
    s.info("p1_adj", "2χ + 3τ", c.p1_adj as f64);
    s.info("c2E", "c2(E) = (c1² − (2χ + 3τ))/4", c.c2e);
    rep.push(s);
    let sols = enumerate_diophantine(k_max.max(1)).map_err(input)?;
    rep.verdict = Some(if c.admissible() {
        format!("obstruction vanishes, c2(E) = {}: topology admits the HKT fibration", c.c2e)
    } else {
        format!("obstruction {}: no HKT fibration", c.obstruction)
    });
    rep.data = Some(json!({
        "summary": format!("obstruction {}, c2E {}", c.obstruction, c.c2e),
        "classes": c,
        "diophantine_k_max": k_max.max(1),
        "diophantine_solutions": sols,
    }));
    Ok(rep)
}

pub fn dilaton_preset(name: &str) -> Result<DilatonProblem, Failure> {
    let preset = match name {
        "constant" => SourcePreset::Constant,
        "sin-bump" => SourcePreset::SinBump,
        "gaussian" => SourcePreset::Gaussian,
        other => {
            return Err(Failure::Input(format!(
                "unknown dilaton preset '{other}'; available: constant, sin-bump, gaussian"
            )))
        }
    };
    Ok(DilatonProblem {
        grid: [64, 64],
        spacing: 1.0 / 64.0,
        w: SourceSpec::Preset(preset),
        tol: DEFAULT_TOL,
        lambda: tgeom::dilaton_solver::LambdaPolicy::AUTO,
        max_iter: 10_000,
    })
}

pub fn run_dilaton(src: &Source, tol: Option<f64>) -> Result<Report, Failure> {
    let mut problem = match (src.read()?, &src.example) {
        (Some(text), _) => io::parse_dilaton_problem(&text).map_err(input)?,
        (None, Some(name)) => dilaton_preset(name)?,
        (None, None) => return Err(Failure::Input("one of --example or --input is required".into())),
    };
    if let Some(t) = tol {
        problem.tol = t;
    }
    let domain = problem.domain().map_err(input)?;
    let w = problem.source(&domain).map_err(input)?;
    let subject = format!("{}x{} torus", problem.grid[0], problem.grid[1]);
    let mut rep = Report::new("dilaton", &subject);
    match monotone_iterate(&domain, &w, &problem.config()) {
        Ok(sol) => {
            let out = DilatonOutput::from(&sol);
            let bound = 10.0 * problem.tol * (out.trace.lambda + 2.0 * out.trace.b);
            let mut s = StructureReport::new("monotone iteration");
            s.assert_small("step", "sup |u_{n+1} − u_n| < tol", out.trace.final_delta, problem.tol);
            s.assert_small("residual", "sup |−∇²u + u² − w| within 10·tol·(λ + 2b)", out.residual_sup, bound);
            s.assert_small("monotone", "u_n ≤ u_{n+1} at every step", if out.trace.monotone { 0.0 } else { 1.0 }, 0.0);
            s.assert_small("bounded", "a ≤ u_n ≤ b at every step", if out.trace.bounded { 0.0 } else { 1.0 }, 0.0);
            s.info("iterations", "accepted steps", out.trace.iterations as f64);
            s.info("lambda", "λ", out.trace.lambda);
            rep.push(s);
            let min_u = out.u.iter().copied().fold(f64::INFINITY, f64::min);
            rep.verdict = Some(format!(
                "converged in {} steps, u ∈ [{min_u:.6}, {:.6}]",
                out.trace.iterations,
                out.u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            ));
            rep.data = Some(json!({
                "summary": format!("{} steps, residual {:.3e}", out.trace.iterations, out.residual_sup),
                "solution": out,
            }));
        }
        Err(e @ (GeometryError::MonotonicityViolation { .. }
        | GeometryError::MaxIterations { .. }
        | GeometryError::NoConvergence { .. })) => {
            let mut s = StructureReport::new("monotone iteration");
            s.note(e.to_string());
            s.assert_small("converged", "iteration finished", 1.0, 0.0);
            rep.push(s);
            rep.verdict = Some(format!("solver failure: {e}"));
        }
        Err(e) => return Err(input(e)),
    }
    Ok(rep)
}

/// Catalog listing, or the JSON geometry of one entry.
pub fn run_catalog(name: Option<&str>) -> Result<String, Failure> {
    match name {
        Some(n) => Ok(io::geometry_to_json(&example(n).map_err(input)?)),
        None => {
            let mut out = String::new();
            for n in NAMES {
                let e = example(n).map_err(input)?;
                out.push_str(&format!("{n:<20} dim {:<2} {}\n", e.geometry.dim(), e.description));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(name: &str) -> Source {
        Source {
            example: Some(name.into()),
            input: None,
        }
    }

    #[test]
    fn every_catalog_entry_verifies() {
        for n in NAMES {
            let r = run_verify(&ex(n), DEFAULT_TOL).unwrap();
            assert!(r.passed, "{}", r.to_text());
        }
    }

    #[test]
    fn decompose_verdicts() {
        let r = run_decompose(&ex("su2-plus-abelian3"), DEFAULT_TOL).unwrap();
        assert!(r.passed);
        assert_eq!(r.data.as_ref().unwrap()["summary"], "kernel 3, blocks [su(2)]");
        let r = run_decompose(&ex("su3-hkt"), DEFAULT_TOL).unwrap();
        assert_eq!(r.data.as_ref().unwrap()["summary"], "kernel 0, blocks [su(3)]");
        let r = run_decompose(&ex("su2su2"), DEFAULT_TOL).unwrap();
        assert_eq!(r.data.as_ref().unwrap()["summary"], "kernel 2, blocks [su(2), su(2)]");
    }

    #[test]
    fn topology_verdicts() {
        let r = topology_report(&TopologyData::connected_sum(vec![1]), FiberMode::Su2, 12).unwrap();
        assert!(r.passed);
        let r = topology_report(&TopologyData::s4(), FiberMode::Su2, 12).unwrap();
        assert!(!r.passed);
        assert!(r.verdict.unwrap().contains("no HKT fibration"));
    }

    #[test]
    fn unknown_names_are_input_errors() {
        assert!(matches!(run_verify(&ex("nope"), 1e-10), Err(Failure::Input(_))));
        assert!(matches!(run_dilaton(&ex("nope"), None), Err(Failure::Input(_))));
        assert!(matches!(run_catalog(Some("nope")), Err(Failure::Input(_))));
    }
}
