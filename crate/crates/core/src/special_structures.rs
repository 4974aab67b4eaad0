//! Complex, hypercomplex, G2 and Spin(7) structures with torsion.
//!
//! An endomorphism `J` is stored as the matrix with `J e_b = Σ_a J[(a, b)] e_a`;
//! its Hermitian form is `ω_{ab} = g(e_a, J e_b) = J[(a, b)]`.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::frame_algebra::{
    form_inner, hodge_star, interior_product, top_coefficient, unit_vector, wedge,
    EpsilonOrientation, Form, FrameTensor,
};
use crate::invariant_geometry::{
    cartan_form, d_invariant, lee_form, nabla_form, nabla_invariant, with_torsion, LieFrameGeometry,
};
use crate::report::StructureReport;

#[derive(Debug, Clone, PartialEq)]
pub struct AlmostComplexStructure {
    j: DMatrix<f64>,
}

impl AlmostComplexStructure {
    /// Validates `J² = −1` and `JᵀJ = 1` to `tol`.
    pub fn new(j: DMatrix<f64>, tol: f64) -> Result<Self> {
        if j.nrows() != j.ncols() {
            return Err(GeometryError::InvalidStructure("complex structure must be square".into()));
        }
        let s = Self { j };
        let sq = s.square_defect();
        let orth = s.orthogonality_defect();
        if sq > tol || orth > tol {
            return Err(GeometryError::InvalidStructure(format!(
                "not an orthogonal almost complex structure (|J²+1| = {sq:.3e}, |JᵀJ−1| = {orth:.3e})"
            )));
        }
        Ok(s)
    }

    /// Skips validation; used to feed deliberately broken data to the verifiers.
    pub fn unchecked(j: DMatrix<f64>) -> Self {
        Self { j }
    }

    /// The structure whose Hermitian form is `omega`.
    pub fn from_hermitian_form(omega: &Form, tol: f64) -> Result<Self> {
        let t = omega.to_tensor();
        Self::new(t.to_matrix(), tol)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|a| (0..n).map(|b| self.j[(a, b)] * v[b]).sum()).collect()
    }

    pub fn hermitian_form(&self) -> Form {
        Form::from_fn(self.dim(), 2, |i| self.j[(i[0], i[1])])
    }

    pub fn tensor(&self) -> FrameTensor {
        FrameTensor::from_matrix(&self.j)
    }

    pub fn square_defect(&self) -> f64 {
        let n = self.dim();
        (&self.j * &self.j + DMatrix::identity(n, n)).amax()
    }

    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        (self.j.transpose() * &self.j - DMatrix::identity(n, n)).amax()
    }

    /// The same structure in the frame `e'_a = Q_{ia} e_i`.
    pub fn transform(&self, q: &DMatrix<f64>) -> Self {
        Self {
            j: q.transpose() * &self.j * q,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypercomplexTriple {
    pub i1: AlmostComplexStructure,
    pub i2: AlmostComplexStructure,
    pub i3: AlmostComplexStructure,
}

impl HypercomplexTriple {
    /// Validates `I1I2 = −I2I1` and `I3 = I1I2`.
    pub fn new(
        i1: AlmostComplexStructure,
        i2: AlmostComplexStructure,
        i3: AlmostComplexStructure,
        tol: f64,
    ) -> Result<Self> {
        let t = Self { i1, i2, i3 };
        let (anti, prod) = t.quaternion_defects();
        if anti > tol || prod > tol {
            return Err(GeometryError::InvalidStructure(format!(
                "quaternion relations fail (|I1I2+I2I1| = {anti:.3e}, |I3−I1I2| = {prod:.3e})"
            )));
        }
        Ok(t)
    }

    /// `I3 = I1 I2`.
    pub fn from_pair(i1: AlmostComplexStructure, i2: AlmostComplexStructure, tol: f64) -> Result<Self> {
        let i3 = AlmostComplexStructure::new(i1.matrix() * i2.matrix(), tol)?;
        Self::new(i1, i2, i3, tol)
    }

    pub fn unchecked(i1: AlmostComplexStructure, i2: AlmostComplexStructure, i3: AlmostComplexStructure) -> Self {
        Self { i1, i2, i3 }
    }

    pub fn members(&self) -> [&AlmostComplexStructure; 3] {
        [&self.i1, &self.i2, &self.i3]
    }

    pub fn dim(&self) -> usize {
        self.i1.dim()
    }

    /// `(|I1I2 + I2I1|, |I3 − I1I2|)`.
    pub fn quaternion_defects(&self) -> (f64, f64) {
        let a = self.i1.matrix();
        let b = self.i2.matrix();
        let anti = (a * b + b * a).amax();
        let prod = (self.i3.matrix() - a * b).amax();
        (anti, prod)
    }

    pub fn transform(&self, q: &DMatrix<f64>) -> Self {
        Self {
            i1: self.i1.transform(q),
            i2: self.i2.transform(q),
            i3: self.i3.transform(q),
        }
    }
}

/// The flat quaternionic triple on ℝ⁴ with `ω1 = e01 + e23`, `ω2 = e02 − e13`.
pub fn standard_quaternion_triple() -> HypercomplexTriple {
    let w1 = &Form::basis(4, &[0, 1]) + &Form::basis(4, &[2, 3]);
    let w2 = &Form::basis(4, &[0, 2]) - &Form::basis(4, &[1, 3]);
    let i1 = AlmostComplexStructure::from_hermitian_form(&w1, 1e-14).unwrap();
    let i2 = AlmostComplexStructure::from_hermitian_form(&w2, 1e-14).unwrap();
    HypercomplexTriple::from_pair(i1, i2, 1e-14).unwrap()
}

/// Frame components `N^a_{bc}` of
/// `N(X, Y) = [JX, JY] − J[JX, Y] − J[X, JY] − [X, Y]`.
pub fn nijenhuis(j: &AlmostComplexStructure, geom: &LieFrameGeometry) -> FrameTensor {
    let n = geom.dim();
    let cols: Vec<Vec<f64>> = (0..n).map(|b| j.apply(&unit_vector(n, b))).collect();
    let mut out = FrameTensor::zeros(n, 3);
    for b in 0..n {
        for c in 0..n {
            let x = unit_vector(n, b);
            let y = unit_vector(n, c);
            let t1 = geom.bracket(&cols[b], &cols[c]);
            let t2 = j.apply(&geom.bracket(&cols[b], &y));
            let t3 = j.apply(&geom.bracket(&x, &cols[c]));
            let t4 = geom.bracket(&x, &y);
            for a in 0..n {
                out.set(&[a, b, c], t1[a] - t2[a] - t3[a] - t4[a]);
            }
        }
    }
    out
}

/// The (3,0)+(0,3) part of a real 3-form with respect to `J`:
/// `¼(H(X,Y,Z) − H(JX,JY,Z) − H(JX,Y,JZ) − H(X,JY,JZ))`.
pub fn type_30_projection(h: &Form, j: &AlmostComplexStructure) -> Form {
    let n = h.dim();
    let t = h.to_tensor();
    let m = j.matrix();
    // H with one slot twisted by J: (H∘J_s)_{abc}
    let twist = |t: &FrameTensor, slot: usize| {
        FrameTensor::from_fn(n, 3, |i| {
            let mut src = [i[0], i[1], i[2]];
            let mut acc = 0.0;
            for p in 0..n {
                let w = m[(p, i[slot])];
                if w != 0.0 {
                    src[slot] = p;
                    acc += w * t.get(&src);
                }
            }
            acc
        })
    };
    let j01 = twist(&twist(&t, 0), 1);
    let j02 = twist(&twist(&t, 0), 2);
    let j12 = twist(&twist(&t, 1), 2);
    Form::from_fn(n, 3, |i| 0.25 * (t.get(i) - j01.get(i) - j02.get(i) - j12.get(i)))
}

/// Sup-norm of `∇T` for the connection with torsion `sign · H`.
pub fn parallel_residual(t: &FrameTensor, geom: &LieFrameGeometry, sign: i8) -> f64 {
    nabla_invariant(t, &with_torsion(geom, sign)).sup_norm()
}

/// Hermiticity, parallelism, integrability, strong condition and type of `H`
/// for a single complex structure.
pub fn kt_report(
    geom: &LieFrameGeometry,
    j: &AlmostComplexStructure,
    orient: &EpsilonOrientation,
    tol: f64,
) -> Result<StructureReport> {
    let n = geom.dim();
    if n % 2 != 0 {
        return Err(GeometryError::InvalidStructure(format!(
            "KT structures need even dimension, got {n}"
        )));
    }
    if j.dim() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            got: j.dim(),
        });
    }
    let mut rep = StructureReport::new(format!("kt on {}", geom.name));
    rep.assert_small("complex", "J² = −1", j.square_defect(), tol);
    rep.assert_small("hermitian", "g(JX, JY) = g(X, Y)", j.orthogonality_defect(), tol);
    rep.assert_small("parallel", "∇̂J = 0", parallel_residual(&j.tensor(), geom, 1), tol);
    rep.assert_small("integrable", "N_J = 0", nijenhuis(j, geom).sup_norm(), tol);
    rep.assert_small("strong", "dH = 0", d_invariant(geom.torsion(), geom)?.sup_norm(), tol);
    rep.assert_small(
        "type_21_12",
        "(3,0)+(0,3) part of H vanishes",
        type_30_projection(geom.torsion(), j).sup_norm(),
        tol,
    );
    rep.info(
        "lee_norm",
        "|θ| with θ = *(*ω ∧ δω)",
        lee_form(geom, &j.hermitian_form(), 1.0, orient)?.sup_norm(),
    );
    Ok(rep)
}

/// Quaternion relations, the KT conditions for each member and equality of
/// the three Lee forms.
pub fn hkt_report(
    geom: &LieFrameGeometry,
    triple: &HypercomplexTriple,
    orient: &EpsilonOrientation,
    tol: f64,
) -> Result<StructureReport> {
    let n = geom.dim();
    if n % 4 != 0 {
        return Err(GeometryError::InvalidStructure(format!(
            "HKT structures need dimension divisible by 4, got {n}"
        )));
    }
    let (anti, prod) = triple.quaternion_defects();
    let mut rep = StructureReport::new(format!("hkt on {}", geom.name));
    rep.assert_small("anticommute", "I1I2 + I2I1 = 0", anti, tol);
    rep.assert_small("product", "I3 = I1I2", prod, tol);
    let mut lee = Vec::new();
    for (r, j) in triple.members().into_iter().enumerate() {
        rep.absorb(&format!("I{}/", r + 1), kt_report(geom, j, orient, tol)?);
        lee.push(lee_form(geom, &j.hermitian_form(), 1.0, orient)?);
    }
    rep.assert_small("lee_12", "θ1 = θ2", (&lee[0] - &lee[1]).sup_norm(), tol);
    rep.assert_small("lee_13", "θ1 = θ3", (&lee[0] - &lee[2]).sup_norm(), tol);
    Ok(rep)
}

type C64 = Complex<f64>;
pub type Mat3 = Matrix3<C64>;

fn elem(i: usize, j: usize) -> Mat3 {
    let mut m = Mat3::zeros();
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

const I_UNIT: C64 = C64 { re: 0.0, im: 1.0 };

/// Chevalley data of sl(3, ℂ) as 3×3 matrices, normalised by the trace form so
/// that `⟨h_p, h_q⟩ = δ_pq`, `⟨e_γ, e_{−γ}⟩ = 1`, with simple roots
/// `α = (√2, 0)`, `β = (−1/√2, √(3/2))`.
#[derive(Debug, Clone)]
pub struct Chevalley {
    pub h: [Mat3; 2],
    /// `e_α, e_β, e_{α+β}`
    pub pos: [Mat3; 3],
    /// `e_{−α}, e_{−β}, e_{−α−β}`
    pub neg: [Mat3; 3],
}

impl Chevalley {
    pub fn new() -> Self {
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        let h1 = Mat3::from_diagonal(&nalgebra::Vector3::new(re(1.0 / s2), re(-1.0 / s2), re(0.0)));
        let h2 = Mat3::from_diagonal(&nalgebra::Vector3::new(re(1.0 / s6), re(1.0 / s6), re(-2.0 / s6)));
        Self {
            h: [h1, h2],
            pos: [elem(0, 1), elem(1, 2), elem(0, 2)],
            neg: [elem(1, 0), elem(2, 1), elem(2, 0)],
        }
    }

    /// Complex basis in the order `h1, h2, e_α, e_β, e_{α+β}, e_{−α}, e_{−β}, e_{−α−β}`.
    pub fn basis(&self) -> [Mat3; 8] {
        [
            self.h[0], self.h[1], self.pos[0], self.pos[1], self.pos[2], self.neg[0], self.neg[1], self.neg[2],
        ]
    }

    /// Coordinates of a traceless matrix in [`Chevalley::basis`].
    pub fn coordinates(&self, x: &Mat3) -> [C64; 8] {
        [
            killing(x, &self.h[0]),
            killing(x, &self.h[1]),
            x[(0, 1)],
            x[(1, 2)],
            x[(0, 2)],
            x[(1, 0)],
            x[(2, 1)],
            x[(2, 0)],
        ]
    }

    /// `h_γ = γ^p h_p` for the root with components `gamma`.
    pub fn coroot(&self, gamma: [f64; 2]) -> Mat3 {
        self.h[0] * re(gamma[0]) + self.h[1] * re(gamma[1])
    }

    /// Compact real basis `U_α, V_α, U_β, V_β, U_{α+β}, V_{α+β}, i h1, i h2`
    /// with `U_γ = (e_γ − e_{−γ})/√2`, `V_γ = i(e_γ + e_{−γ})/√2`.
    pub fn compact_basis(&self) -> [Mat3; 8] {
        let s = re(1.0 / 2f64.sqrt());
        let mut out = [Mat3::zeros(); 8];
        for k in 0..3 {
            out[2 * k] = (self.pos[k] - self.neg[k]) * s;
            out[2 * k + 1] = (self.pos[k] + self.neg[k]) * (I_UNIT * s);
        }
        out[6] = self.h[0] * I_UNIT;
        out[7] = self.h[1] * I_UNIT;
        out
    }
}

impl Default for Chevalley {
    fn default() -> Self {
        Self::new()
    }
}

pub const ROOT_ALPHA: [f64; 2] = [std::f64::consts::SQRT_2, 0.0];
pub const ROOT_BETA: [f64; 2] = [-std::f64::consts::FRAC_1_SQRT_2, 1.224_744_871_391_589];

/// The trace form `⟨X, Y⟩ = tr(XY)`.
pub fn killing(x: &Mat3, y: &Mat3) -> C64 {
    (x * y).trace()
}

pub fn commutator(x: &Mat3, y: &Mat3) -> Mat3 {
    x * y - y * x
}

/// Positive-definite metric `g = −⟨·,·⟩` on the compact real form.
pub fn compact_metric(x: &Mat3, y: &Mat3) -> f64 {
    -killing(x, y).re
}

/// Real components of a complex-linear map given by its images of the
/// Chevalley basis, as a matrix on the compact basis. The second value is the
/// largest imaginary part encountered.
fn real_matrix(chev: &Chevalley, images: &[Mat3; 8]) -> (DMatrix<f64>, f64) {
    let basis = chev.compact_basis();
    let mut m = DMatrix::zeros(8, 8);
    let mut imag: f64 = 0.0;
    for b in 0..8 {
        let coords = chev.coordinates(&basis[b]);
        let mut img = Mat3::zeros();
        for k in 0..8 {
            img += images[k] * coords[k];
        }
        for a in 0..8 {
            let v = -killing(&basis[a], &img);
            imag = imag.max(v.im.abs());
            m[(a, b)] = v.re;
        }
    }
    (m, imag)
}

/// The SU(3) HKT geometry in the compact basis.
#[derive(Debug, Clone)]
pub struct Su3Build {
    pub geometry: LieFrameGeometry,
    pub triple: HypercomplexTriple,
    pub chevalley: Chevalley,
    /// Largest imaginary part met while reading real components (should be roundoff).
    pub reality_defect: f64,
}

/// Builds su(3) with the bi-invariant metric `−⟨·,·⟩`, torsion `H = −c` (the
/// sign for which `∇̂` is the flat left-invariant connection) and the
/// hypercomplex triple `(I, J, IJ)`.
pub fn build_su3() -> Su3Build {
    let chev = Chevalley::new();
    let basis = chev.compact_basis();
    let mut c = FrameTensor::zeros(8, 3);
    let mut imag: f64 = 0.0;
    for b in 0..8 {
        for d in 0..8 {
            let br = commutator(&basis[b], &basis[d]);
            for a in 0..8 {
                let v = -killing(&basis[a], &br);
                imag = imag.max(v.im.abs());
                c.set(&[a, b, d], v.re);
            }
        }
    }
    let geom = LieFrameGeometry::new("su3", c, Form::zero(8, 3)).expect("su(3) brackets satisfy Jacobi");
    let h = cartan_form(&geom, -1.0).expect("bi-invariant metric");
    let geometry = geom.with_torsion_form(h).unwrap().renamed("su3-hkt");

    let [h1, h2, ea, eb, eab, fa, fb, fab] = chev.basis();
    let i_images = [
        -h2,
        h1,
        ea * I_UNIT,
        eb * I_UNIT,
        eab * I_UNIT,
        fa * (-I_UNIT),
        fb * (-I_UNIT),
        fab * (-I_UNIT),
    ];
    let (im, e1) = real_matrix(&chev, &i_images);
    let jm = quaternionic_partner(&geometry);
    let i1 = AlmostComplexStructure::unchecked(im);
    let i2 = AlmostComplexStructure::unchecked(jm);
    let i3 = AlmostComplexStructure::unchecked(i1.matrix() * i2.matrix());
    Su3Build {
        geometry,
        triple: HypercomplexTriple::unchecked(i1, i2, i3),
        chevalley: chev,
        reality_defect: imag.max(e1),
    }
}

/// Second complex structure on su(3) = b ⊕ d ⊕ f, where d is the su(2) of the
/// highest root, b its centraliser and f the remaining ℂ².
///
/// On b ⊕ d ≅ ℍ (with `T̂ ↦ 1`, `Ŷ1, Ŷ2, Ŷ3 ↦ i, j, k`) it is left multiplication
/// by `j`; on f it is `−√2 ad(Ŷ2)`.
fn quaternionic_partner(geom: &LieFrameGeometry) -> DMatrix<f64> {
    let s3 = 3f64.sqrt();
    let vec = |pairs: &[(usize, f64)]| {
        let mut v = [0.0; 8];
        for &(k, x) in pairs {
            v[k] = x;
        }
        v
    };
    let t0 = vec(&[(6, s3 / 2.0), (7, -0.5)]);
    let y1 = vec(&[(6, -0.5), (7, -s3 / 2.0)]);
    let y2 = vec(&[(4, 1.0)]);
    let y3 = vec(&[(5, 1.0)]);
    let mut j = DMatrix::zeros(8, 8);
    let lam = -std::f64::consts::SQRT_2;
    for a in 0..4 {
        for c in 0..4 {
            j[(a, c)] = lam * (0..8).map(|k| geom.c(a, k, c) * y2[k]).sum::<f64>();
        }
    }
    for (src, dst, s) in [(&t0, &y2, 1.0), (&y1, &y3, -1.0), (&y2, &t0, -1.0), (&y3, &y1, 1.0)] {
        for a in 0..8 {
            for c in 0..8 {
                j[(a, c)] += s * dst[a] * src[c];
            }
        }
    }
    j
}

/// Fundamental G2 form with the orientation used for its duals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct G2Data {
    pub phi: Form,
    pub orient: EpsilonOrientation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum G2Mode {
    /// `e123 + e145 + e167 + e274 + e265 + e364 + e357` (1-based labels).
    Standard,
    /// `λ¹∧λ²∧λ³ + λ^r ∧ ω_r`.
    Product { lambda: [Vec<f64>; 3], omegas: [Form; 3] },
}

/// Increasing 0-based index triples of the standard G2 form with their signs.
pub const G2_TERMS: [([usize; 3], f64); 7] = [
    ([0, 1, 2], 1.0),
    ([0, 3, 4], 1.0),
    ([0, 5, 6], 1.0),
    ([1, 3, 6], -1.0),
    ([1, 4, 5], -1.0),
    ([2, 3, 5], -1.0),
    ([2, 4, 6], 1.0),
];

pub fn standard_g2_form() -> Form {
    let mut phi = Form::zero(7, 3);
    for (idx, s) in G2_TERMS {
        phi.add_component(&idx, s);
    }
    phi
}

pub fn build_g2(mode: G2Mode, orient: EpsilonOrientation) -> Result<G2Data> {
    if orient.dim != 7 {
        return Err(GeometryError::DimensionMismatch {
            expected: 7,
            got: orient.dim,
        });
    }
    let phi = match mode {
        G2Mode::Standard => standard_g2_form(),
        G2Mode::Product { lambda, omegas } => {
            for l in &lambda {
                if l.len() != 7 {
                    return Err(GeometryError::DimensionMismatch {
                        expected: 7,
                        got: l.len(),
                    });
                }
            }
            for w in &omegas {
                if w.dim() != 7 || w.degree() != 2 {
                    return Err(GeometryError::InvalidStructure(
                        "product mode needs three 2-forms on dimension 7".into(),
                    ));
                }
                for l in &lambda {
                    let leak = interior_product(l, w)?.sup_norm();
                    if leak > 1e-12 {
                        return Err(GeometryError::InvalidStructure(format!(
                            "ω_r must be transverse to the λ-frame (|ι_L ω| = {leak:.3e})"
                        )));
                    }
                }
            }
            let l: Vec<Form> = lambda.iter().map(|v| Form::one_form(v)).collect();
            let mut phi = wedge(&wedge(&l[0], &l[1])?, &l[2])?;
            for r in 0..3 {
                phi += &wedge(&l[r], &omegas[r])?;
            }
            phi
        }
    };
    Ok(G2Data { phi, orient })
}

/// `B(X, Y) dvol = (1/6) ι_Xφ ∧ ι_Yφ ∧ φ` on the frame vectors.
pub fn bryant_positivity(g2: &G2Data) -> DMatrix<f64> {
    let n = g2.phi.dim();
    let contractions: Vec<Form> = (0..n)
        .map(|i| interior_product(&unit_vector(n, i), &g2.phi).unwrap())
        .collect();
    let mut b = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in x..n {
            let top = wedge(&wedge(&contractions[x], &contractions[y]).unwrap(), &g2.phi).unwrap();
            let v = top_coefficient(&top, &g2.orient) / 6.0;
            b[(x, y)] = v;
            b[(y, x)] = v;
        }
    }
    b
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn eigen_range(b: &DMatrix<f64>) -> (f64, f64) {
    let e = SymmetricEigen::new(b.clone()).eigenvalues;
    let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Positivity, parallelism and closure rows for a G2 structure on `geom`.
pub fn g2_report(geom: &LieFrameGeometry, g2: &G2Data, tol: f64) -> Result<StructureReport> {
    if geom.dim() != 7 {
        return Err(GeometryError::DimensionMismatch {
            expected: 7,
            got: geom.dim(),
        });
    }
    let (lo, _) = eigen_range(&bryant_positivity(g2));
    let mut rep = StructureReport::new(format!("g2 on {}", geom.name));
    rep.assert_large("bryant_positive", "min eigenvalue of B > 0", lo.max(0.0), tol);
    rep.assert_small("parallel", "∇̂φ = 0", nabla_form(&g2.phi, &with_torsion(geom, 1)).sup_norm(), tol);
    rep.assert_small("strong", "dH = 0", d_invariant(geom.torsion(), geom)?.sup_norm(), tol);
    rep.info("d_phi", "|dφ|", d_invariant(&g2.phi, geom)?.sup_norm());
    rep.info(
        "lee_norm",
        "|θ| with θ = *(*φ ∧ δφ)",
        lee_form(geom, &g2.phi, 1.0, &g2.orient)?.sup_norm(),
    );
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CayleyData {
    pub phi: Form,
    pub orient: EpsilonOrientation,
}

/// `Φ = e⁰ ∧ φ + *φ` with the 7-dimensional indices shifted by one.
pub fn build_spin7(g2: &G2Data) -> Result<CayleyData> {
    if g2.phi.dim() != 7 || g2.phi.degree() != 3 {
        return Err(GeometryError::InvalidStructure("expected a 3-form on dimension 7".into()));
    }
    let star = hodge_star(&g2.phi, &g2.orient)?;
    let e0 = Form::basis(8, &[0]);
    let phi = &wedge(&e0, &g2.phi.embed(8, 1))? + &star.embed(8, 1);
    Ok(CayleyData {
        phi,
        orient: EpsilonOrientation::new(8, g2.orient.sign)?,
    })
}

/// `Φ ∧ Φ` divided by the oriented volume form.
pub fn cayley_square(c: &CayleyData) -> f64 {
    top_coefficient(&wedge(&c.phi, &c.phi).unwrap(), &c.orient)
}

/// `ι_{L3} ι_{L2} ι_{L1} Φ` for three vectors.
pub fn triple_contraction(c: &CayleyData, l: [&[f64]; 3]) -> Result<Form> {
    let a = interior_product(l[0], &c.phi)?;
    let b = interior_product(l[1], &a)?;
    interior_product(l[2], &b)
}

pub fn spin7_report(c: &CayleyData, tol: f64) -> Result<StructureReport> {
    let mut rep = StructureReport::new("spin7 cayley form");
    let star = hodge_star(&c.phi, &c.orient)?;
    rep.assert_small("self_dual", "*Φ = Φ", (&star - &c.phi).sup_norm(), tol);
    rep.assert_small("square", "Φ∧Φ = 14 vol", cayley_square(c) - 14.0, tol);
    let e = |i| unit_vector(8, i);
    let (l1, l2, l3) = (e(1), e(2), e(3));
    let t = triple_contraction(c, [&l1, &l2, &l3])?;
    rep.assert_small(
        "triple_unit",
        "|ι_{L3}ι_{L2}ι_{L1}Φ| = 1 for an associative triple",
        form_inner(&t, &t)?.sqrt() - 1.0,
        tol,
    );
    rep.assert_small(
        "triple_transverse",
        "ι_{L3}ι_{L2}ι_{L1}Φ lies along e⁰",
        (1..8).map(|k| t.get(&[k]).abs()).fold(0.0, f64::max),
        tol,
    );
    Ok(rep)
}
