//! Algebraic splitting of a geometry with parallel closed torsion into a
//! torsion-free factor and semisimple blocks.
//!
//! The torsion Gram form `h_{ij} = ½ H_{ipq} H_{jpq}` is diagonalised; its
//! kernel is the torsion-free factor and each nonzero eigenspace carries the
//! Lie algebra with structure constants `H`. Eigenspaces are further split into
//! simple ideals through the commutant of the adjoint action, so equal-radius
//! factors are separated.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::frame_algebra::{interior_product, Form, FrameTensor};
use crate::invariant_geometry::{
    d_invariant, nabla_form, structure_jacobi_residual, with_torsion, LieFrameGeometry, DEFAULT_TOL,
};
use crate::random::rng;

/// Sup-norm of `T^p_{ij}T_{pkm} + T^p_{jk}T_{pim} + T^p_{ki}T_{pjm}`.
///
/// Accepts structure constants (antisymmetric in the last two slots) or the
/// dense array of a 3-form.
pub fn jacobi_residual(t: &FrameTensor) -> f64 {
    structure_jacobi_residual(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionGram {
    pub h: DMatrix<f64>,
}

pub fn torsion_gram(h: &Form) -> TorsionGram {
    let n = h.dim();
    let t = h.to_tensor();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for p in 0..n {
                for q in 0..n {
                    acc += t.get(&[i, p, q]) * t.get(&[j, p, q]);
                }
            }
            m[(i, j)] = 0.5 * acc;
            m[(j, i)] = 0.5 * acc;
        }
    }
    TorsionGram { h: m }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Orthonormal frame vectors spanning the eigenspace.
    pub basis: Vec<Vec<f64>>,
}

impl Cluster {
    pub fn is_kernel(&self, tol: f64) -> bool {
        self.eigenvalue.abs() < tol
    }
}

/// Eigenvalues in ascending order, grouped while consecutive gaps stay below
/// `cluster_tol` (absolute).
pub fn eigen_split(gram: &TorsionGram, cluster_tol: f64) -> Vec<Cluster> {
    let n = gram.h.nrows();
    if n == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(gram.h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &k in &order {
        let lam = eig.eigenvalues[k];
        let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        match clusters.last_mut() {
            Some(c) if lam - last < cluster_tol => {
                c.basis.push(v);
                c.multiplicity += 1;
                c.eigenvalue += (lam - c.eigenvalue) / c.multiplicity as f64;
            }
            _ => clusters.push(Cluster {
                eigenvalue: lam,
                multiplicity: 1,
                basis: vec![v],
            }),
        }
        last = lam;
    }
    clusters
}

/// A simple ideal of the algebra carried by the torsion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub dim: usize,
    /// The `h`-eigenvalue of the cluster containing the block.
    pub eigenvalue: f64,
    pub basis: Vec<Vec<f64>>,
    /// `H` restricted to the block, in the block basis (structure constants
    /// of the block algebra).
    pub structure: FrameTensor,
    pub jacobi_residual: f64,
    /// Sup-norm of `−½ tr(ad_i ad_j) − h_{ij}` on the block.
    pub killing_defect: f64,
    pub identification: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub dh: f64,
    pub nabla_hat_h: f64,
    /// `sup |ι_V H|` over the kernel basis.
    pub kernel_transversality: f64,
    /// Largest component of `H` coupling distinct clusters or blocks.
    pub cross_block_mixing: f64,
    pub gram_min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub clusters: Vec<Cluster>,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<Vec<f64>>,
    pub blocks: Vec<Block>,
    pub diagnostics: Diagnostics,
    pub verdict: String,
}

impl DecompositionResult {
    pub fn block_names(&self) -> Vec<&str> {
        self.blocks.iter().map(|b| b.identification.as_str()).collect()
    }

    /// Whether every structural diagnostic is within `tol`.
    pub fn certified(&self, tol: f64) -> bool {
        self.diagnostics.kernel_transversality <= tol
            && self.diagnostics.cross_block_mixing <= tol
            && self
                .blocks
                .iter()
                .all(|b| b.jacobi_residual <= tol && b.killing_defect <= tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    /// Tolerance for the hypotheses and diagnostics.
    pub tol: f64,
    /// Clustering tolerance relative to the largest eigenvalue.
    pub cluster_rel_tol: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            cluster_rel_tol: 1e-8,
        }
    }
}

pub fn identify(dim: usize) -> &'static str {
    match dim {
        3 => "su(2)",
        6 => "su(2)+su(2)",
        8 => "su(3)",
        _ => "semisimple, unidentified",
    }
}

/// Structure constants of `H` restricted to the span of orthonormal `basis`.
fn restrict(t: &FrameTensor, basis: &[Vec<f64>]) -> FrameTensor {
    let d = basis.len();
    let n = t.dim();
    FrameTensor::from_fn(d, 3, |i| {
        let (a, b, c) = (&basis[i[0]], &basis[i[1]], &basis[i[2]]);
        let mut acc = 0.0;
        for x in 0..n {
            if a[x] == 0.0 {
                continue;
            }
            for y in 0..n {
                for z in 0..n {
                    acc += a[x] * b[y] * c[z] * t.get(&[x, y, z]);
                }
            }
        }
        acc
    })
}

/// `ad` matrices of the algebra with structure constants `s`: `(ad_i)_{ab} = s^a_{ib}`.
fn ad_matrices(s: &FrameTensor) -> Vec<DMatrix<f64>> {
    let d = s.dim();
    (0..d)
        .map(|i| DMatrix::from_fn(d, d, |a, b| s.get(&[a, i, b])))
        .collect()
}

/// Splits an algebra into simple ideals using a generic element of the
/// commutant of its adjoint representation. Returns bases in local coordinates.
fn simple_ideals(s: &FrameTensor, tol: f64) -> Vec<Vec<Vec<f64>>> {
    let d = s.dim();
    let ads = ad_matrices(s);
    // rows: entries of M ad_i − ad_i M, as linear functions of vec(M)
    let mut sys = DMatrix::zeros(d * d * d, d * d);
    for (i, ad) in ads.iter().enumerate() {
        for r in 0..d {
            for c in 0..d {
                let row = i * d * d + r * d + c;
                for k in 0..d {
                    // (M ad)_{rc} = Σ_k M_{rk} ad_{kc}
                    sys[(row, r * d + k)] += ad[(k, c)];
                    // (ad M)_{rc} = Σ_k ad_{rk} M_{kc}
                    sys[(row, k * d + c)] -= ad[(r, k)];
                }
            }
        }
    }
    let svd = sys.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().fold(0.0f64, |m, v| m.max(*v)).max(1.0);
    let mut null: Vec<DMatrix<f64>> = Vec::new();
    for k in 0..vt.nrows() {
        let sing = if k < sv.len() { sv[k] } else { 0.0 };
        if sing <= 1e-9 * smax {
            null.push(DMatrix::from_fn(d, d, |r, c| vt[(k, r * d + c)]));
        }
    }
    // columns of v_t beyond the singular values are also null directions
    if null.len() <= 1 {
        return vec![(0..d).map(|i| unit(d, i)).collect()];
    }
    let mut r = rng(0x5eed);
    let mut m = DMatrix::zeros(d, d);
    for nk in &null {
        m += nk * r.gen_range(0.5..1.5);
    }
    let sym = (&m + m.transpose()) * 0.5;
    let gram = TorsionGram { h: sym };
    let scale = gram.h.amax().max(tol);
    eigen_split(&gram, 1e-6 * scale)
        .into_iter()
        .map(|c| c.basis)
        .collect()
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

fn lift(local: &[Vec<f64>], basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = basis.first().map_or(0, |b| b.len());
    local
        .iter()
        .map(|coeffs| {
            let mut v = vec![0.0; n];
            for (c, b) in coeffs.iter().zip(basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            v
        })
        .collect()
}

/// Runs the decomposition after checking `dH = 0` and `∇̂H = 0`.
pub fn decompose(geom: &LieFrameGeometry, opts: DecomposeOptions) -> Result<DecompositionResult> {
    let tol = opts.tol;
    let h = geom.torsion();
    let dh = d_invariant(h, geom)?.sup_norm();
    let nabla_hat_h = nabla_form(h, &with_torsion(geom, 1)).sup_norm();
    if dh > tol || nabla_hat_h > tol {
        return Err(GeometryError::HypothesesNotMet(format!(
            "decomposition needs dH = 0 and ∇̂H = 0 (|dH| = {dh:.3e}, |∇̂H| = {nabla_hat_h:.3e})"
        )));
    }
    decompose_unchecked(geom, opts, dh, nabla_hat_h)
}

fn decompose_unchecked(
    geom: &LieFrameGeometry,
    opts: DecomposeOptions,
    dh: f64,
    nabla_hat_h: f64,
) -> Result<DecompositionResult> {
    let n = geom.dim();
    let h = geom.torsion();
    let t = h.to_tensor();
    let gram = torsion_gram(h);
    let max_eig = gram.h.amax();
    let cluster_tol = if max_eig > 0.0 {
        opts.cluster_rel_tol * max_eig
    } else {
        opts.cluster_rel_tol
    };
    let kernel_tol = cluster_tol.max(opts.tol);
    let clusters = eigen_split(&gram, cluster_tol);
    let gram_min = clusters.first().map_or(0.0, |c| c.eigenvalue);

    let mut kernel_basis = Vec::new();
    let mut groups: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut blocks = Vec::new();
    for cl in &clusters {
        if cl.is_kernel(kernel_tol) {
            kernel_basis.extend(cl.basis.iter().cloned());
            continue;
        }
        let s = restrict(&t, &cl.basis);
        for local in simple_ideals(&s, opts.tol) {
            let basis = lift(&local, &cl.basis);
            let structure = restrict(&t, &basis);
            let d = basis.len();
            let ads = ad_matrices(&structure);
            let h_block = restrict_gram(&gram.h, &basis);
            let mut killing_defect: f64 = 0.0;
            for i in 0..d {
                for j in 0..d {
                    let k = (&ads[i] * &ads[j]).trace();
                    killing_defect = killing_defect.max((-0.5 * k - h_block[(i, j)]).abs());
                }
            }
            blocks.push(Block {
                dim: d,
                eigenvalue: cl.eigenvalue,
                jacobi_residual: jacobi_residual(&structure),
                killing_defect,
                identification: identify(d).to_string(),
                structure,
                basis: basis.clone(),
            });
            groups.push(basis);
        }
    }

    let mut kernel_transversality: f64 = 0.0;
    for v in &kernel_basis {
        kernel_transversality = kernel_transversality.max(interior_product(v, h)?.sup_norm());
    }

    // H in the adapted frame: any component touching two different blocks is mixing
    let mut label = Vec::with_capacity(n);
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
    for v in &kernel_basis {
        frame.push(v.clone());
        label.push(usize::MAX);
    }
    for (g, basis) in groups.iter().enumerate() {
        for v in basis {
            frame.push(v.clone());
            label.push(g);
        }
    }
    let adapted = restrict(&t, &frame);
    let mut cross_block_mixing: f64 = 0.0;
    crate::invariant_geometry::for_each_index(n, 3, |i| {
        let same = label[i[0]] == label[i[1]] && label[i[1]] == label[i[2]];
        if !same {
            cross_block_mixing = cross_block_mixing.max(adapted.get(i).abs());
        }
    });

    let names: Vec<String> = blocks.iter().map(|b| b.identification.clone()).collect();
    let kernel_dim = kernel_basis.len();
    let group_dim: usize = blocks.iter().map(|b| b.dim).sum();
    let verdict = format!(
        "kernel {kernel_dim}, blocks [{}]: locally isometric to N^{kernel_dim} x G with dim G = {group_dim}{}",
        names.join(", "),
        if blocks.is_empty() {
            String::from(" (no group factor)")
        } else {
            format!(", Lie(G) = {}", names.join(" + "))
        }
    );

    Ok(DecompositionResult {
        clusters,
        kernel_dim,
        kernel_basis,
        blocks,
        diagnostics: Diagnostics {
            dh,
            nabla_hat_h,
            kernel_transversality,
            cross_block_mixing,
            gram_min_eigenvalue: gram_min,
        },
        verdict,
    })
}

fn restrict_gram(h: &DMatrix<f64>, basis: &[Vec<f64>]) -> DMatrix<f64> {
    let d = basis.len();
    DMatrix::from_fn(d, d, |i, j| {
        let mut acc = 0.0;
        for (x, bx) in basis[i].iter().enumerate() {
            for (y, by) in basis[j].iter().enumerate() {
                acc += bx * h[(x, y)] * by;
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{su2, su2_direct_sum_abelian};
    use crate::frame_algebra::{form_inner, unit_vector};
    use crate::random::{random_form, random_orthogonal, random_parallel_torsion_geometry};

    fn eps3() -> Form {
        Form::basis(3, &[0, 1, 2])
    }

    #[test]
    fn jacobi_examples() {
        assert!(jacobi_residual(&eps3().to_tensor()) < 1e-15);
        let mut r = rng(2);
        let generic = random_form(6, 3, &mut r);
        assert!(jacobi_residual(&generic.to_tensor()) > 1e-3);
        let pair = &eps3().embed(6, 0) + &eps3().embed(6, 3);
        assert!(jacobi_residual(&pair.to_tensor()) < 1e-15);
    }

    #[test]
    fn gram_examples() {
        let g = torsion_gram(&eps3());
        assert!((&g.h - DMatrix::identity(3, 3)).amax() < 1e-15);
        assert_eq!(torsion_gram(&Form::zero(5, 3)).h.amax(), 0.0);
        let g7 = torsion_gram(&eps3().embed(7, 0));
        let mut expected = DMatrix::zeros(7, 7);
        for i in 0..3 {
            expected[(i, i)] = 1.0;
        }
        assert!((&g7.h - expected).amax() < 1e-15);
    }

    #[test]
    fn gram_matches_contraction_inner_product() {
        let mut r = rng(6);
        let h = random_form(6, 3, &mut r);
        let g = torsion_gram(&h);
        for i in 0..6 {
            for j in 0..6 {
                let a = interior_product(&unit_vector(6, i), &h).unwrap();
                let b = interior_product(&unit_vector(6, j), &h).unwrap();
                assert!((form_inner(&a, &b).unwrap() - g.h[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_split_examples() {
        let mut d = DMatrix::zeros(7, 7);
        for i in 0..3 {
            d[(i, i)] = 1.0;
        }
        let c = eigen_split(&TorsionGram { h: d }, 1e-9);
        assert_eq!(c.len(), 2);
        assert_eq!((c[0].multiplicity, c[1].multiplicity), (4, 3));
        assert!(c[0].is_kernel(1e-9));
        let id = eigen_split(&TorsionGram { h: DMatrix::identity(4, 4) }, 1e-9);
        assert_eq!(id.len(), 1);
        assert!(!id[0].is_kernel(1e-9));
        let close = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0 + 1e-14]));
        assert_eq!(eigen_split(&TorsionGram { h: close }, 1e-9).len(), 1);
    }

    #[test]
    fn su2_plus_abelian() {
        let res = decompose(&su2_direct_sum_abelian(3, 1.0), DecomposeOptions::default()).unwrap();
        assert_eq!(res.kernel_dim, 3);
        assert_eq!(res.block_names(), vec!["su(2)"]);
        assert!(res.certified(1e-10));
    }

    #[test]
    fn equal_radius_su2_pair_splits() {
        let g = su2(1.0, 1.0)
            .direct_sum(&su2(1.0, 1.0))
            .unwrap()
            .direct_sum(&LieFrameGeometry::abelian(2))
            .unwrap();
        let res = decompose(&g, DecomposeOptions::default()).unwrap();
        assert_eq!(res.kernel_dim, 2);
        assert_eq!(res.clusters.len(), 2);
        assert_eq!(res.block_names(), vec!["su(2)", "su(2)"]);
        assert!(res.certified(1e-10), "{:?}", res.diagnostics);
    }

    #[test]
    fn zero_torsion_is_all_kernel() {
        let res = decompose(&su2(1.0, 0.0), DecomposeOptions::default()).unwrap();
        assert_eq!(res.kernel_dim, 3);
        assert!(res.blocks.is_empty());
    }

    #[test]
    fn refuses_when_hypotheses_fail() {
        let mut r = rng(1);
        let g = su2(1.0, 1.0)
            .direct_sum(&LieFrameGeometry::abelian(2))
            .unwrap()
            .with_torsion_form(random_form(5, 3, &mut r))
            .unwrap();
        assert!(matches!(
            decompose(&g, DecomposeOptions::default()),
            Err(GeometryError::HypothesesNotMet(_))
        ));
    }

    #[test]
    fn frame_rotation_preserves_the_decomposition() {
        let mut r = rng(31);
        for _ in 0..5 {
            let g = random_parallel_torsion_geometry(7, &mut r);
            let a = decompose(&g, DecomposeOptions::default()).unwrap();
            let q = random_orthogonal(7, &mut r);
            let b = decompose(&g.transform(&q).unwrap(), DecomposeOptions::default()).unwrap();
            assert_eq!(a.kernel_dim, b.kernel_dim);
            let dims = |x: &DecompositionResult| {
                let mut d: Vec<usize> = x.blocks.iter().map(|b| b.dim).collect();
                d.sort();
                d
            };
            assert_eq!(dims(&a), dims(&b));
            assert!(a.certified(1e-9) && b.certified(1e-9));
        }
    }

    #[test]
    fn scaling_torsion_scales_eigenvalues_quadratically() {
        let g = su2_direct_sum_abelian(2, 1.0);
        let g3 = g.with_torsion_form(g.torsion().scale(3.0)).unwrap();
        let a = decompose(&g, DecomposeOptions::default()).unwrap();
        let b = decompose(&g3, DecomposeOptions::default()).unwrap();
        assert_eq!(a.kernel_dim, b.kernel_dim);
        assert!((b.blocks[0].eigenvalue - 9.0 * a.blocks[0].eigenvalue).abs() < 1e-12);
    }
}
