//! Seeded samplers for property tests: orthogonal frames, forms and
//! Jacobi-projected Lie algebras.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::frame_algebra::{binomial, combinations, Form, FrameTensor};
use crate::invariant_geometry::{cartan_form, structure_jacobi_residual, LieFrameGeometry};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut impl Rng) -> f64 {
    // Box–Muller
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix.
pub fn random_orthogonal(n: usize, r: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(r));
    let qr = g.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        if rr[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Form with independent uniform coefficients in `[-1, 1]`.
pub fn random_form(n: usize, p: usize, r: &mut impl Rng) -> Form {
    Form::from_fn(n, p, |_| r.gen_range(-1.0..1.0))
}

pub fn random_vector(n: usize, r: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

/// Unimodular building blocks as `(dim, brackets)` with `c^a_{bc}` entries.
fn block(kind: u32, s: f64) -> (usize, Vec<(usize, usize, usize, f64)>) {
    match kind {
        // su(2)
        0 => (3, vec![(0, 1, 2, s), (1, 2, 0, s), (2, 0, 1, s)]),
        // Heisenberg
        1 => (3, vec![(2, 0, 1, s)]),
        // Euclidean motions of the plane
        2 => (3, vec![(1, 2, 0, s), (0, 2, 1, -s)]),
        // sl(2, R): [h,x] = 2x, [h,y] = −2y, [x,y] = h
        3 => (3, vec![(1, 0, 1, 2.0 * s), (2, 0, 2, -2.0 * s), (0, 1, 2, s)]),
        // Minkowski motions (sol)
        4 => (3, vec![(0, 2, 0, s), (1, 2, 1, -s)]),
        _ => (1, vec![]),
    }
}

fn assemble(n: usize, pieces: &[(usize, Vec<(usize, usize, usize, f64)>)]) -> FrameTensor {
    let mut c = FrameTensor::zeros(n, 3);
    let mut offset = 0;
    for (d, br) in pieces {
        for &(a, b, e, v) in br {
            c.add_at(&[a + offset, b + offset, e + offset], v);
            c.add_at(&[a + offset, e + offset, b + offset], -v);
        }
        offset += d;
    }
    c
}

fn pack(c: &FrameTensor, pairs: &[Vec<usize>]) -> Vec<f64> {
    let n = c.dim();
    let mut x = Vec::with_capacity(n * pairs.len());
    for a in 0..n {
        for p in pairs {
            x.push(c.get(&[a, p[0], p[1]]));
        }
    }
    x
}

fn unpack(n: usize, x: &[f64], pairs: &[Vec<usize>]) -> FrameTensor {
    let mut c = FrameTensor::zeros(n, 3);
    let mut k = 0;
    for a in 0..n {
        for p in pairs {
            c.set(&[a, p[0], p[1]], x[k]);
            c.set(&[a, p[1], p[0]], -x[k]);
            k += 1;
        }
    }
    c
}

/// Jacobi components (increasing triples, all output indices) and ad-traces.
fn constraint_residual(c: &FrameTensor, triples: &[Vec<usize>]) -> Vec<f64> {
    let n = c.dim();
    let mut out = Vec::with_capacity(n * triples.len() + n);
    for t in triples {
        let (i, j, k) = (t[0], t[1], t[2]);
        for m in 0..n {
            let mut acc = 0.0;
            for p in 0..n {
                acc += c.get(&[p, i, j]) * c.get(&[m, p, k])
                    + c.get(&[p, j, k]) * c.get(&[m, p, i])
                    + c.get(&[p, k, i]) * c.get(&[m, p, j]);
            }
            out.push(acc);
        }
    }
    for b in 0..n {
        out.push((0..n).map(|a| c.get(&[a, a, b])).sum());
    }
    out
}

/// Gauss–Newton projection onto the unimodular Jacobi variety.
///
/// Returns `None` when the final residual exceeds `1e-12`.
pub fn project_to_jacobi(c: &FrameTensor) -> Option<FrameTensor> {
    let n = c.dim();
    let pairs = combinations(n, 2);
    let triples = combinations(n, 3);
    let mut x = pack(c, &pairs);
    let nv = x.len();
    let nr = n * binomial(n, 3) + n;
    let step = 1e-4;
    for _ in 0..30 {
        let cur = unpack(n, &x, &pairs);
        let r = constraint_residual(&cur, &triples);
        let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if norm < 1e-14 {
            break;
        }
        // residuals are quadratic, so central differences give the exact Jacobian up to roundoff
        let mut jac = DMatrix::zeros(nr, nv);
        for v in 0..nv {
            let mut xp = x.clone();
            xp[v] += step;
            let mut xm = x.clone();
            xm[v] -= step;
            let rp = constraint_residual(&unpack(n, &xp, &pairs), &triples);
            let rm = constraint_residual(&unpack(n, &xm, &pairs), &triples);
            for k in 0..nr {
                jac[(k, v)] = (rp[k] - rm[k]) / (2.0 * step);
            }
        }
        let rv = DVector::from_vec(r);
        let delta = jac.svd(true, true).solve(&rv, 1e-10).ok()?;
        for v in 0..nv {
            x[v] -= delta[v];
        }
    }
    let out = unpack(n, &x, &pairs);
    let final_res = constraint_residual(&out, &triples)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    (final_res <= 1e-12 && structure_jacobi_residual(&out) <= 1e-12).then_some(out)
}

/// A random unimodular Lie algebra of dimension `n` with zero torsion:
/// a direct sum of standard blocks in a random orthonormal frame, perturbed
/// and projected back onto the Jacobi variety.
pub fn random_unimodular_geometry(n: usize, r: &mut impl Rng) -> LieFrameGeometry {
    assert!(n >= 1);
    loop {
        let mut pieces = Vec::new();
        let mut used = 0;
        while used < n {
            let kind = if n - used >= 3 { r.gen_range(0..6) } else { 5 };
            let s = r.gen_range(0.5..1.5) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
            let b = block(kind, s);
            used += b.0;
            pieces.push(b);
        }
        let base = assemble(n, &pieces);
        let q = random_orthogonal(n, r);
        let mut c = base.transform(&q);
        for a in 0..n {
            for b in 0..n {
                for e in b + 1..n {
                    let eps = 1e-2 * r.gen_range(-1.0..1.0);
                    c.add_at(&[a, b, e], eps);
                    c.add_at(&[a, e, b], -eps);
                }
            }
        }
        if let Some(c) = project_to_jacobi(&c) {
            if let Ok(g) = LieFrameGeometry::new("random", c, Form::zero(n, 3)) {
                return g;
            }
        }
    }
}

/// A random geometry with arbitrary (generally non-closed) torsion.
pub fn random_geometry_with_torsion(n: usize, r: &mut impl Rng) -> LieFrameGeometry {
    let g = random_unimodular_geometry(n, r);
    let h = random_form(n, 3, r);
    g.with_torsion_form(h).expect("shapes agree")
}

/// Sums of scaled su(2) blocks and abelian lines with blockwise Cartan torsion
/// in a random orthonormal frame: these satisfy `dH = 0` and `∇̂H = 0`.
pub fn random_parallel_torsion_geometry(n: usize, r: &mut impl Rng) -> LieFrameGeometry {
    assert!(n >= 1);
    let mut g: Option<LieFrameGeometry> = None;
    let mut used = 0;
    while used < n {
        let piece = if n - used >= 3 && r.gen_bool(0.7) {
            let s = r.gen_range(0.5..2.0);
            let k = r.gen_range(-2.0..2.0);
            let b = LieFrameGeometry::from_brackets(
                "su2",
                3,
                &[(0, 1, 2, s), (1, 2, 0, s), (2, 0, 1, s)],
                Form::zero(3, 3),
            )
            .unwrap();
            let h = cartan_form(&b, k).unwrap();
            b.with_torsion_form(h).unwrap()
        } else {
            LieFrameGeometry::abelian(1)
        };
        used += piece.dim();
        g = Some(match g {
            None => piece,
            Some(prev) => prev.direct_sum(&piece).unwrap(),
        });
    }
    let g = g.unwrap();
    let q = random_orthogonal(n, r);
    g.transform(&q).unwrap().renamed("random-parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut r = rng(0);
        for n in 1..8 {
            let q = random_orthogonal(n, &mut r);
            let e = &q.transpose() * &q - DMatrix::identity(n, n);
            assert!(e.amax() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let a = random_form(5, 2, &mut rng(42));
        let b = random_form(5, 2, &mut rng(42));
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_algebras_satisfy_jacobi_and_unimodularity() {
        let mut r = rng(3);
        for n in 3..=6 {
            for _ in 0..3 {
                let g = random_unimodular_geometry(n, &mut r);
                assert!(structure_jacobi_residual(g.structure()) <= 1e-12);
                assert!(g.is_unimodular(1e-12));
            }
        }
    }

    #[test]
    fn projection_repairs_a_perturbed_algebra() {
        let (d, br) = block(0, 1.0);
        let mut c = assemble(d, &[(d, br)]);
        c.add_at(&[0, 0, 1], 1e-3);
        c.add_at(&[0, 1, 0], -1e-3);
        assert!(structure_jacobi_residual(&c) > 1e-6);
        let p = project_to_jacobi(&c).unwrap();
        assert!(structure_jacobi_residual(&p) <= 1e-12);
        assert!((&p - &c).sup_norm() < 1e-2);
    }
}
