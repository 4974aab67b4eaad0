//! Curvature of principal fibrations over 4-dimensional bases and the
//! characteristic-class arithmetic of the resulting bundles.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::frame_algebra::{hodge_star, top_coefficient, wedge, EpsilonOrientation, Form, FrameTensor};
use crate::invariant_geometry::structure_jacobi_residual;
use crate::report::StructureReport;
use crate::special_structures::{
    build_su3, commutator, compact_metric, AlmostComplexStructure, HypercomplexTriple, ROOT_ALPHA, ROOT_BETA,
};

/// Fiber-valued curvature 2-form on a 4-dimensional horizontal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalCurvature {
    /// `F^α` with the fiber index raised.
    pub f: Vec<Form>,
    pub fiber_metric: DMatrix<f64>,
    /// `c^γ_{αβ}` of the fiber algebra in the same basis.
    pub fiber_structure: FrameTensor,
}

impl PrincipalCurvature {
    pub fn new(f: Vec<Form>, fiber_metric: DMatrix<f64>, fiber_structure: FrameTensor) -> Result<Self> {
        let k = f.len();
        for form in &f {
            if form.dim() != 4 || form.degree() != 2 {
                return Err(GeometryError::InvalidStructure(
                    "curvature components must be 2-forms on a 4-dimensional base".into(),
                ));
            }
        }
        if fiber_metric.nrows() != k || fiber_metric.ncols() != k {
            return Err(GeometryError::DimensionMismatch {
                expected: k,
                got: fiber_metric.nrows(),
            });
        }
        if fiber_structure.dim() != k || fiber_structure.rank() != 3 {
            return Err(GeometryError::DimensionMismatch {
                expected: k,
                got: fiber_structure.dim(),
            });
        }
        if (&fiber_metric - fiber_metric.transpose()).amax() > 1e-12 {
            return Err(GeometryError::InvalidStructure("fiber metric must be symmetric".into()));
        }
        if k > 0 && fiber_metric.clone().cholesky().is_none() {
            return Err(GeometryError::InvalidStructure("fiber metric must be positive definite".into()));
        }
        Ok(Self {
            f,
            fiber_metric,
            fiber_structure,
        })
    }

    pub fn base_dim(&self) -> usize {
        4
    }

    pub fn fiber_dim(&self) -> usize {
        self.f.len()
    }

    /// `F_α = h_{αβ} F^β`.
    pub fn lowered(&self, alpha: usize) -> Form {
        let mut out = Form::zero(4, 2);
        for (beta, fb) in self.f.iter().enumerate() {
            out += &fb.scale(self.fiber_metric[(alpha, beta)]);
        }
        out
    }

    pub fn fiber_jacobi_residual(&self) -> f64 {
        structure_jacobi_residual(&self.fiber_structure)
    }
}

/// `F± = ½(F ± *F)`.
pub fn sd_asd_split(f: &Form, orient: &EpsilonOrientation) -> Result<(Form, Form)> {
    if f.dim() != 4 || f.degree() != 2 || orient.dim != 4 {
        return Err(GeometryError::InvalidStructure(
            "self-dual split needs a 2-form on dimension 4".into(),
        ));
    }
    let star = hodge_star(f, orient)?;
    Ok(((f + &star).scale(0.5), (f - &star).scale(0.5)))
}

/// The orientation in which `(1/3) Σ ω_r ∧ ω_r` is the positive volume form.
pub fn quaternionic_orientation(triple: &HypercomplexTriple) -> Result<EpsilonOrientation> {
    if triple.dim() != 4 {
        return Err(GeometryError::DimensionMismatch {
            expected: 4,
            got: triple.dim(),
        });
    }
    let mut top = Form::zero(4, 4);
    for j in triple.members() {
        let w = j.hermitian_form();
        top += &wedge(&w, &w)?;
    }
    let v = top_coefficient(&top, &EpsilonOrientation::positive(4)) / 3.0;
    EpsilonOrientation::new(4, if v >= 0.0 { 1 } else { -1 })
}

/// Sup over `α, r, a, b` of
/// `−F_{αca}(I_r)^c_b + F_{αcb}(I_r)^c_a − (B_α)^s_r I_{s ab}`, with `F_α` lowered
/// by the fiber metric and `(B_α)^s_r = b[α][(s, r)]`.
pub fn frestrict_residual(pc: &PrincipalCurvature, b: &[DMatrix<f64>], i_perp: &HypercomplexTriple) -> Result<f64> {
    if b.len() != pc.fiber_dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: pc.fiber_dim(),
            got: b.len(),
        });
    }
    if i_perp.dim() != 4 {
        return Err(GeometryError::DimensionMismatch {
            expected: 4,
            got: i_perp.dim(),
        });
    }
    if let Some(m) = b.iter().find(|m| m.nrows() != 3 || m.ncols() != 3) {
        return Err(GeometryError::DimensionMismatch {
            expected: 3,
            got: m.nrows().max(m.ncols()),
        });
    }
    let is: Vec<&DMatrix<f64>> = i_perp.members().iter().map(|j| j.matrix()).collect();
    let mut worst: f64 = 0.0;
    for (alpha, ba) in b.iter().enumerate() {
        let f = pc.lowered(alpha).to_tensor().to_matrix();
        for r in 0..3 {
            // the left side is the commutator [F_α, I_r] of matrices
            let mut resid = &f * is[r] - is[r] * &f;
            for s in 0..3 {
                resid -= is[s] * ba[(s, r)];
            }
            worst = worst.max(resid.amax());
        }
    }
    Ok(worst)
}

/// `B_0 = 0`, `(B_r)^s_t = κ ε_{rst}` for a `u(1) ⊕ su(2)` fiber.
pub fn quaternionic_b(kappa: f64) -> Vec<DMatrix<f64>> {
    let mut out = vec![DMatrix::zeros(3, 3)];
    for r in 0..3 {
        out.push(DMatrix::from_fn(3, 3, |s, t| {
            kappa * EpsilonOrientation::positive(3).epsilon(&[r, s, t])
        }));
    }
    out
}

/// `h_{αβ} F^α ∧ F^β`.
pub fn wedge_trace(pc: &PrincipalCurvature) -> Result<Form> {
    let mut out = Form::zero(4, 4);
    for (alpha, fa) in pc.f.iter().enumerate() {
        out += &wedge(fa, &pc.lowered(alpha))?;
    }
    Ok(out)
}

/// SU(3) → SU(3)/U(2) with its horizontal hypercomplex data.
#[derive(Debug, Clone)]
pub struct Su3Fibration {
    pub curvature: PrincipalCurvature,
    /// Restriction of the SU(3) triple to the horizontal frame.
    pub base_triple: HypercomplexTriple,
    pub orient: EpsilonOrientation,
    /// `|T_r|²` of the su(2) fiber generators, the scale of the ε-representation.
    pub kappa: f64,
}

/// Horizontal frame `U_α, V_α, U_β, V_β`; fiber basis `T0 = i h_{α−β}`,
/// `T1 = −i h_{α+β}`, `T2 = e_{α+β} − e_{−α−β}`, `T3 = i(e_{α+β} + e_{−α−β})`, with
/// `|T0|² = 6` and `|T_r|² = 2`. The curvature is `F(X, Y) = −λ([X, Y])`.
pub fn build_su3_fibration() -> Su3Fibration {
    let su3 = build_su3();
    let ch = &su3.chevalley;
    let basis = ch.compact_basis();
    let i = Complex::new(0.0, 1.0);
    let diff = [ROOT_ALPHA[0] - ROOT_BETA[0], ROOT_ALPHA[1] - ROOT_BETA[1]];
    let sum = [ROOT_ALPHA[0] + ROOT_BETA[0], ROOT_ALPHA[1] + ROOT_BETA[1]];
    let t = [
        ch.coroot(diff) * i,
        ch.coroot(sum) * (-i),
        ch.pos[2] - ch.neg[2],
        (ch.pos[2] + ch.neg[2]) * i,
    ];
    let h = DMatrix::from_fn(4, 4, |a, b| compact_metric(&t[a], &t[b]));
    let hinv = h.clone().try_inverse().expect("fiber metric is definite");

    let lowered: Vec<DMatrix<f64>> = (0..4)
        .map(|al| DMatrix::from_fn(4, 4, |a, b| -compact_metric(&t[al], &commutator(&basis[a], &basis[b]))))
        .collect();
    let f: Vec<Form> = (0..4)
        .map(|al| {
            Form::from_fn(4, 2, |idx| {
                (0..4).map(|be| hinv[(al, be)] * lowered[be][(idx[0], idx[1])]).sum()
            })
        })
        .collect();
    let fs = FrameTensor::from_fn(4, 3, |idx| {
        let br = commutator(&t[idx[1]], &t[idx[2]]);
        (0..4).map(|d| hinv[(idx[0], d)] * compact_metric(&t[d], &br)).sum()
    });
    let curvature = PrincipalCurvature::new(f, h, fs).expect("fiber data is consistent");

    let restrict = |j: &AlmostComplexStructure| AlmostComplexStructure::unchecked(j.matrix().view((0, 0), (4, 4)).into_owned());
    let base_triple = HypercomplexTriple::unchecked(
        restrict(&su3.triple.i1),
        restrict(&su3.triple.i2),
        restrict(&su3.triple.i3),
    );
    let orient = quaternionic_orientation(&base_triple).expect("4-dimensional triple");
    Su3Fibration {
        curvature,
        base_triple,
        orient,
        kappa: 2.0,
    }
}

/// Component-wise checks of the fibration: fiber Jacobi, the horizontal
/// constraint with the ε-representation, anti-self-duality of the u(1) part,
/// self-dual su(2) parts along the quaternionic forms and `h F ∧ F = 0`.
pub fn fibration_report(fib: &Su3Fibration, tol: f64) -> Result<StructureReport> {
    let pc = &fib.curvature;
    let mut rep = StructureReport::new("su3 fibration over the quaternionic base");
    let (anti, prod) = fib.base_triple.quaternion_defects();
    rep.assert_small("base_quaternion", "horizontal triple satisfies I1I2 = −I2I1 = I3", anti.max(prod), tol);
    rep.assert_small("fiber_jacobi", "Jacobi of u(1) ⊕ su(2)", pc.fiber_jacobi_residual(), tol);
    rep.assert_small(
        "frestrict",
        "[F_α, I_r] = (B_α)^s_r I_s with B_0 = 0, B_r = κε_r",
        frestrict_residual(pc, &quaternionic_b(fib.kappa), &fib.base_triple)?,
        tol,
    );
    let (plus0, _) = sd_asd_split(&pc.f[0], &fib.orient)?;
    rep.assert_small("u1_asd", "F^{u(1)} is anti-self-dual", plus0.sup_norm(), tol);
    let mut sd_off = 0.0f64;
    let mut asd_su2 = 0.0f64;
    for r in 1..4 {
        let (plus, minus) = sd_asd_split(&pc.lowered(r), &fib.orient)?;
        let w = fib.base_triple.members()[r - 1].hermitian_form();
        sd_off = sd_off.max((&plus + &w.scale(fib.kappa / 2.0)).sup_norm());
        asd_su2 = asd_su2.max(minus.sup_norm());
    }
    rep.assert_small("su2_sd", "F_{r+} = −(κ/2) ω_r", sd_off, tol);
    rep.info("su2_asd_norm", "|F^r_−|", asd_su2);
    rep.assert_small("wedge_trace", "h_{αβ} F^α ∧ F^β = 0", wedge_trace(pc)?.sup_norm(), tol);
    rep.info("orientation_sign", "quaternionic orientation relative to e0123", fib.orient.sign as f64);
    Ok(rep)
}

/// Base `S⁴` (`k = 0`) or `#k CP̄²` with `c1(L) = Σ n_p x_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyData {
    pub k: u32,
    pub n: Vec<i64>,
    pub chi: i64,
    pub tau: i64,
}

impl TopologyData {
    pub fn new(k: u32, n: Vec<i64>, chi: i64, tau: i64) -> Result<Self> {
        let t = Self { k, n, chi, tau };
        t.validate()?;
        Ok(t)
    }

    pub fn s4() -> Self {
        Self {
            k: 0,
            n: vec![],
            chi: 2,
            tau: 0,
        }
    }

    pub fn connected_sum(n: Vec<i64>) -> Self {
        let k = n.len() as u32;
        Self {
            k,
            n,
            chi: 2 + k as i64,
            tau: -(k as i64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.len() != self.k as usize {
            return Err(GeometryError::InvalidTopology(format!(
                "expected {} components of c1, got {}",
                self.k,
                self.n.len()
            )));
        }
        let k = self.k as i64;
        if self.chi != 2 + k || self.tau != -k {
            return Err(GeometryError::InvalidTopology(format!(
                "#{k} CP̄² has χ = {} and τ = {}, got χ = {}, τ = {}",
                2 + k,
                -k,
                self.chi,
                self.tau
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberMode {
    /// `SU(2) × U(1)` fiber: obstruction `3c1(L)² + 2χ + 3τ`.
    Su2,
    /// `U(2)` fiber: obstruction `3c1(E)² + 2χ + 3τ`.
    U2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernClasses {
    pub mode: FiberMode,
    pub c1_sq: i64,
    pub p1_adj: i64,
    pub obstruction: i64,
    /// `(c1² − p1)/4`; fractional values mean no such bundle exists.
    pub c2e: f64,
    pub obstruction_vanishes: bool,
    pub c1_sq_nonpositive: bool,
    pub p1_divisible_by_3: bool,
    pub c2e_integral: bool,
}

impl ChernClasses {
    pub fn admissible(&self) -> bool {
        self.obstruction_vanishes && self.c1_sq_nonpositive && self.p1_divisible_by_3 && self.c2e_integral
    }
}

/// `c1² = −Σn²`, `p1 = 2χ + 3τ`, obstruction `3c1² + 2χ + 3τ` and
/// `c2(E) = (c1² − p1)/4` using `c1(E) = −c1(L)`.
pub fn chern_topology(top: &TopologyData, mode: FiberMode) -> Result<ChernClasses> {
    top.validate()?;
    let c1_sq = -top.n.iter().map(|x| x * x).sum::<i64>();
    let p1_adj = 2 * top.chi + 3 * top.tau;
    // c1(E)² = c1(L)², so both modes share the arithmetic
    let obstruction = 3 * c1_sq + p1_adj;
    let num = c1_sq - p1_adj;
    Ok(ChernClasses {
        mode,
        c1_sq,
        p1_adj,
        obstruction,
        c2e: num as f64 / 4.0,
        obstruction_vanishes: obstruction == 0,
        c1_sq_nonpositive: c1_sq <= 0,
        p1_divisible_by_3: p1_adj % 3 == 0,
        c2e_integral: num % 4 == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophantineSolution {
    pub k: u32,
    /// Non-decreasing representative of the multiset.
    pub n: Vec<i64>,
}

/// All `1 ≤ k ≤ k_max` and multisets `n` with `3 Σ n_p² = 4 − k`.
pub fn enumerate_diophantine(k_max: u32) -> Result<Vec<DiophantineSolution>> {
    if k_max < 1 {
        return Err(GeometryError::InvalidTopology("k_max must be at least 1".into()));
    }
    let mut out = Vec::new();
    for k in 1..=k_max {
        let rhs = 4 - k as i64;
        if rhs < 0 || rhs % 3 != 0 {
            continue;
        }
        let target = rhs / 3;
        let bound = (target as f64).sqrt().ceil() as i64;
        let mut cur = Vec::with_capacity(k as usize);
        collect(k as usize, -bound, bound, target, &mut cur, &mut out, k);
    }
    Ok(out)
}

fn collect(
    left: usize,
    lo: i64,
    hi: i64,
    target: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<DiophantineSolution>,
    k: u32,
) {
    if left == 0 {
        if target == 0 {
            out.push(DiophantineSolution { k, n: cur.clone() });
        }
        return;
    }
    for v in lo..=hi {
        if v * v > target {
            continue;
        }
        cur.push(v);
        collect(left - 1, v, hi, target - v * v, cur, out, k);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame_algebra::form_inner;
    use crate::random::{random_form, random_orthogonal, rng};
    use crate::special_structures::standard_quaternion_triple;

    fn e(i: usize, j: usize) -> Form {
        Form::basis(4, &[i, j])
    }

    #[test]
    fn split_of_basis_forms() {
        let o = EpsilonOrientation::positive(4);
        let (p, m) = sd_asd_split(&(&e(0, 1) + &e(2, 3)), &o).unwrap();
        assert!(m.is_zero(1e-15) && (&p - &(&e(0, 1) + &e(2, 3))).is_zero(1e-15));
        let (p, m) = sd_asd_split(&(&e(0, 1) - &e(2, 3)), &o).unwrap();
        assert!(p.is_zero(1e-15) && (&m - &(&e(0, 1) - &e(2, 3))).is_zero(1e-15));
        assert!(sd_asd_split(&Form::zero(5, 2), &EpsilonOrientation::positive(5)).is_err());
    }

    #[test]
    fn split_is_orthogonal_idempotent() {
        let o = EpsilonOrientation::positive(4);
        let mut r = rng(5);
        for _ in 0..10 {
            let f = random_form(4, 2, &mut r);
            let (p, m) = sd_asd_split(&f, &o).unwrap();
            assert!((&(&p + &m) - &f).sup_norm() < 1e-15);
            assert!(form_inner(&p, &m).unwrap().abs() < 1e-15);
            let (pp, pm) = sd_asd_split(&p, &o).unwrap();
            assert!((&pp - &p).sup_norm() < 1e-15 && pm.is_zero(1e-15));
        }
    }

    fn abelian_curvature(f: Vec<Form>) -> PrincipalCurvature {
        let k = f.len();
        PrincipalCurvature::new(f, DMatrix::identity(k, k), FrameTensor::zeros(k, 3)).unwrap()
    }

    #[test]
    fn wedge_trace_examples() {
        let pc = abelian_curvature(vec![&e(0, 1) - &e(2, 3)]);
        let w = wedge_trace(&pc).unwrap();
        assert!((top_coefficient(&w, &EpsilonOrientation::positive(4)) + 2.0).abs() < 1e-15);
        assert!(wedge_trace(&abelian_curvature(vec![Form::zero(4, 2)])).unwrap().is_zero(0.0));
    }

    #[test]
    fn wedge_trace_is_frame_invariant() {
        let mut r = rng(6);
        let f: Vec<Form> = (0..3).map(|_| random_form(4, 2, &mut r)).collect();
        let pc = abelian_curvature(f.clone());
        let q = random_orthogonal(4, &mut r);
        let rotated = abelian_curvature(f.iter().map(|x| x.transform(&q)).collect());
        let det = q.determinant();
        let o = EpsilonOrientation::positive(4);
        let a = top_coefficient(&wedge_trace(&pc).unwrap(), &o);
        let b = top_coefficient(&wedge_trace(&rotated).unwrap(), &o);
        assert!((a - det * b).abs() < 1e-12);
        // fiber basis change with consistent metric
        let p = random_orthogonal(3, &mut r) * 2.0;
        let pinv = p.clone().try_inverse().unwrap();
        let g: Vec<Form> = (0..3)
            .map(|a| (0..3).fold(Form::zero(4, 2), |acc, b| &acc + &f[b].scale(pinv[(a, b)])))
            .collect();
        let metric = p.transpose() * p;
        let changed = PrincipalCurvature::new(g, metric, FrameTensor::zeros(3, 3)).unwrap();
        let c = top_coefficient(&wedge_trace(&changed).unwrap(), &o);
        assert!((a - c).abs() < 1e-12);
    }

    #[test]
    fn frestrict_trivial_and_witness() {
        let t = standard_quaternion_triple();
        let o = quaternionic_orientation(&t).unwrap();
        // (1,1) for all I_r means anti-self-dual in the quaternionic orientation
        let mut r = rng(7);
        let f = random_form(4, 2, &mut r);
        let (_, asd) = sd_asd_split(&f, &o).unwrap();
        let pc = abelian_curvature(vec![asd]);
        let zero = vec![DMatrix::zeros(3, 3)];
        assert!(frestrict_residual(&pc, &zero, &t).unwrap() < 1e-14);
        let pc = abelian_curvature(vec![f]);
        assert!(frestrict_residual(&pc, &zero, &t).unwrap() > 1e-3);
        assert!(frestrict_residual(&pc, &[], &t).is_err());
    }

    #[test]
    fn frestrict_with_self_dual_quaternionic_curvature() {
        let t = standard_quaternion_triple();
        let h = 1.5;
        let mut f = vec![Form::zero(4, 2)];
        for j in t.members() {
            f.push(j.hermitian_form().scale(-h / 2.0));
        }
        let pc = PrincipalCurvature::new(f, DMatrix::identity(4, 4), FrameTensor::zeros(4, 3)).unwrap();
        let b = quaternionic_b(h);
        assert!(frestrict_residual(&pc, &b, &t).unwrap() < 1e-14);
        assert!(frestrict_residual(&pc, &quaternionic_b(-h), &t).unwrap() > 1.0);
    }

    #[test]
    fn su3_fibration_checks() {
        let fib = build_su3_fibration();
        assert_eq!(fib.curvature.fiber_metric[(0, 0)], 6.0);
        let rep = fibration_report(&fib, 1e-12).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(rep.value("su2_asd_norm").unwrap() < 1e-12);
        assert!(fib.curvature.f[0].sup_norm() > 0.1);
    }

    #[test]
    fn su3_fibration_sign_flip_is_detected() {
        let fib = build_su3_fibration();
        let mut pc = fib.curvature.clone();
        pc.f = pc.f.iter().map(|f| -f).collect();
        assert!(frestrict_residual(&pc, &quaternionic_b(fib.kappa), &fib.base_triple).unwrap() > 1.0);
        let flipped = EpsilonOrientation::new(4, -fib.orient.sign).unwrap();
        let (plus, _) = sd_asd_split(&fib.curvature.f[0], &flipped).unwrap();
        assert!(plus.sup_norm() > 0.1);
    }

    #[test]
    fn chern_examples() {
        let cp = chern_topology(&TopologyData::connected_sum(vec![1]), FiberMode::Su2).unwrap();
        assert_eq!((cp.c1_sq, cp.p1_adj, cp.obstruction), (-1, 3, 0));
        assert_eq!(cp.c2e, -1.0);
        assert!(cp.admissible());
        let s4 = chern_topology(&TopologyData::s4(), FiberMode::Su2).unwrap();
        assert_eq!((s4.c1_sq, s4.obstruction), (0, 4));
        assert!(!s4.admissible());
        let four = chern_topology(&TopologyData::connected_sum(vec![0; 4]), FiberMode::U2).unwrap();
        assert_eq!((four.obstruction, four.c2e), (0, 0.0));
        assert!(TopologyData::new(2, vec![1], 4, -2).is_err());
        assert!(TopologyData::new(1, vec![1], 2, 0).is_err());
    }

    #[test]
    fn diophantine_solutions() {
        let all = enumerate_diophantine(12).unwrap();
        let expect = vec![
            DiophantineSolution { k: 1, n: vec![-1] },
            DiophantineSolution { k: 1, n: vec![1] },
            DiophantineSolution { k: 4, n: vec![0, 0, 0, 0] },
        ];
        assert_eq!(all, expect);
        assert_eq!(enumerate_diophantine(1).unwrap(), expect[..2].to_vec());
        assert!(enumerate_diophantine(0).is_err());
    }

    #[test]
    fn obstruction_matches_diophantine_equation() {
        let sols = enumerate_diophantine(12).unwrap();
        for k in 1..=12u32 {
            let bound = 2i64;
            // every vector with entries in [−2, 2] up to k = 4; the equation has none beyond
            let mut n = vec![-bound; k as usize];
            if k > 4 {
                let c = chern_topology(&TopologyData::connected_sum(vec![0; k as usize]), FiberMode::Su2).unwrap();
                assert_eq!(c.obstruction, 4 - k as i64);
                continue;
            }
            loop {
                let c = chern_topology(&TopologyData::connected_sum(n.clone()), FiberMode::Su2).unwrap();
                let mut sorted = n.clone();
                sorted.sort();
                let listed = sols.iter().any(|s| s.k == k && s.n == sorted);
                assert_eq!(c.obstruction == 0, listed);
                assert_eq!(c.obstruction, 4 - k as i64 + 3 * c.c1_sq);
                let mut i = 0;
                while i < n.len() && n[i] == bound {
                    n[i] = -bound;
                    i += 1;
                }
                if i == n.len() {
                    break;
                }
                n[i] += 1;
            }
        }
    }
}
