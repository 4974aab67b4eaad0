//! Exterior and tensor algebra on components in an orthonormal frame.
//!
//! The frame metric is the identity, so upper and lower indices are
//! interchangeable and no raising/lowering machinery exists. Conventions:
//!
//! * a p-form is `χ = (1/p!) χ_{i1..ip} e^{i1}∧..∧e^{ip}`, so the basis form
//!   `e^1∧e^2` has components `(1,2) = +1`, `(2,1) = −1`;
//! * `(χ∧ψ)_{i1..i(p+q)} = ((p+q)!/(p! q!)) χ_{[i1..ip} ψ_{i(p+1)..i(p+q)]}`;
//! * `(χ, ψ) = (1/p!) χ_{i1..ip} ψ_{i1..ip}`;
//! * `(*χ)_{j1..j(n−p)} = (1/p!) χ_{i1..ip} ε_{i1..ip j1..j(n−p)}`.
//!
//! Totally antisymmetric forms are stored packed ([`Form`], one coefficient
//! per strictly increasing index tuple); general tensors are dense
//! ([`FrameTensor`], `dim^rank` entries, row-major).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing `p`-tuples drawn from `0..n`, in lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, p));
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // rightmost slot that can still advance
        let mut i = p;
        while i > 0 && cur[i - 1] == n - p + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Lexicographic rank of a strictly increasing tuple among `combinations(n, p)`.
fn combination_rank(n: usize, idx: &[usize]) -> usize {
    let p = idx.len();
    let mut rank = 0;
    let mut start = 0;
    for (i, &c) in idx.iter().enumerate() {
        for j in start..c {
            rank += binomial(n - 1 - j, p - 1 - i);
        }
        start = c + 1;
    }
    rank
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Dense multi-index array of frame components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameTensor {
    dim: usize,
    rank: usize,
    components: Vec<f64>,
    /// Set when the tensor was produced from a form and is totally antisymmetric.
    pub antisymmetric: bool,
}

impl FrameTensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Self {
            dim,
            rank,
            components: vec![0.0; dim.pow(rank as u32)],
            antisymmetric: false,
        }
    }

    pub fn from_vec(dim: usize, rank: usize, components: Vec<f64>) -> Result<Self> {
        let expected = dim.pow(rank as u32);
        if components.len() != expected {
            return Err(GeometryError::DimensionMismatch {
                expected,
                got: components.len(),
            });
        }
        Ok(Self {
            dim,
            rank,
            components,
            antisymmetric: false,
        })
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dim, rank);
        let mut idx = vec![0usize; rank];
        for flat in 0..t.components.len() {
            t.decode_into(flat, &mut idx);
            t.components[flat] = f(&idx);
        }
        t
    }

    /// The frame metric δ as a rank-2 tensor.
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, 2, |i| if i[0] == i[1] { 1.0 } else { 0.0 })
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
        Self::from_fn(m.nrows(), 2, |i| m[(i[0], i[1])])
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.rank, 2, "rank-2 tensor expected");
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    #[inline]
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn decode_into(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.components[self.flat_index(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: &[usize], value: f64) {
        let k = self.flat_index(idx);
        self.components[k] = value;
    }

    #[inline]
    pub fn add_at(&mut self, idx: &[usize], value: f64) {
        let k = self.flat_index(idx);
        self.components[k] += value;
    }

    pub fn sup_norm(&self) -> f64 {
        self.components.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Plain sum of squared components, `T_{i..} T^{i..}`.
    pub fn full_square(&self) -> f64 {
        self.components.iter().map(|v| v * v).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.components.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Largest deviation from total antisymmetry over all adjacent
    /// transpositions (which generate every permutation).
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut idx = vec![0usize; self.rank];
        let mut swapped = vec![0usize; self.rank];
        for flat in 0..self.components.len() {
            self.decode_into(flat, &mut idx);
            for s in 0..self.rank.saturating_sub(1) {
                swapped.copy_from_slice(&idx);
                swapped.swap(s, s + 1);
                let d = self.components[flat] + self.get(&swapped);
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    /// Components in the rotated frame `e'_a = Q_{ia} e_i` (Q orthogonal).
    pub fn transform(&self, q: &DMatrix<f64>) -> Self {
        assert_eq!(q.nrows(), self.dim);
        let n = self.dim;
        let mut cur = self.clone();
        let mut idx = vec![0usize; self.rank];
        let mut src = vec![0usize; self.rank];
        for slot in 0..self.rank {
            let mut next = FrameTensor::zeros(n, self.rank);
            for flat in 0..next.components.len() {
                next.decode_into(flat, &mut idx);
                src.copy_from_slice(&idx);
                let mut acc = 0.0;
                for i in 0..n {
                    src[slot] = i;
                    acc += q[(i, idx[slot])] * cur.get(&src);
                }
                next.components[flat] = acc;
            }
            cur = next;
        }
        cur.antisymmetric = self.antisymmetric;
        cur
    }

    /// Trace over two slots, returning a tensor of rank `rank − 2`.
    pub fn trace(&self, a: usize, b: usize) -> Self {
        assert!(a < b && b < self.rank);
        let n = self.dim;
        let mut out = FrameTensor::zeros(n, self.rank - 2);
        let mut idx = vec![0usize; out.rank];
        let mut full = vec![0usize; self.rank];
        for flat in 0..out.components.len() {
            out.decode_into(flat, &mut idx);
            let mut acc = 0.0;
            for k in 0..n {
                let mut it = idx.iter();
                for (s, slot) in full.iter_mut().enumerate() {
                    *slot = if s == a || s == b { k } else { *it.next().unwrap() };
                }
                acc += self.get(&full);
            }
            out.components[flat] = acc;
        }
        out
    }
}

impl Sub for &FrameTensor {
    type Output = FrameTensor;
    fn sub(self, rhs: &FrameTensor) -> FrameTensor {
        assert_eq!((self.dim, self.rank), (rhs.dim, rhs.rank));
        let components = self
            .components
            .iter()
            .zip(&rhs.components)
            .map(|(a, b)| a - b)
            .collect();
        FrameTensor {
            dim: self.dim,
            rank: self.rank,
            components,
            antisymmetric: self.antisymmetric && rhs.antisymmetric,
        }
    }
}

impl Add for &FrameTensor {
    type Output = FrameTensor;
    fn add(self, rhs: &FrameTensor) -> FrameTensor {
        assert_eq!((self.dim, self.rank), (rhs.dim, rhs.rank));
        let components = self
            .components
            .iter()
            .zip(&rhs.components)
            .map(|(a, b)| a + b)
            .collect();
        FrameTensor {
            dim: self.dim,
            rank: self.rank,
            components,
            antisymmetric: self.antisymmetric && rhs.antisymmetric,
        }
    }
}

/// A totally antisymmetric tensor stored by its strictly increasing components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Form {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            coeffs: vec![0.0; binomial(dim, degree)],
        }
    }

    /// `e^{i1}∧..∧e^{ip}` for indices in any order (zero if one repeats).
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut f = Self::zero(dim, indices.len());
        f.add_component(indices, 1.0);
        f
    }

    /// Builds a form from a function evaluated on strictly increasing tuples.
    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let coeffs = combinations(dim, degree).iter().map(|c| f(c)).collect();
        Self { dim, degree, coeffs }
    }

    /// The 1-form with the given frame components.
    pub fn one_form(v: &[f64]) -> Self {
        Self {
            dim: v.len(),
            degree: 1,
            coeffs: v.to_vec(),
        }
    }

    /// Reads a dense tensor, failing if it is not antisymmetric to `tol`.
    pub fn from_tensor(t: &FrameTensor, tol: f64) -> Result<Self> {
        let defect = t.antisymmetry_defect();
        if defect > tol {
            return Err(GeometryError::InvalidStructure(format!(
                "tensor is not antisymmetric (defect {defect:e})"
            )));
        }
        Ok(Self::from_fn(t.dim(), t.rank(), |c| t.get(c)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Component for an arbitrary index tuple.
    pub fn get(&self, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), self.degree);
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            Some(s) => s * self.coeffs[combination_rank(self.dim, &idx)],
            None => 0.0,
        }
    }

    /// Adds `value` to the component at `indices` (any order).
    pub fn add_component(&mut self, indices: &[usize], value: f64) {
        let mut idx = indices.to_vec();
        if let Some(s) = sort_with_sign(&mut idx) {
            let k = combination_rank(self.dim, &idx);
            self.coeffs[k] += s * value;
        }
    }

    /// Iterates over `(increasing tuple, coefficient)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        combinations(self.dim, self.degree)
            .into_iter()
            .zip(self.coeffs.iter().copied())
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.sup_norm() <= tol
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn to_tensor(&self) -> FrameTensor {
        let mut t = FrameTensor::from_fn(self.dim, self.degree, |i| self.get(i));
        t.antisymmetric = true;
        t
    }

    /// Re-indexes into a frame of dimension `new_dim` with every index shifted by `offset`.
    pub fn embed(&self, new_dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim <= new_dim);
        let mut out = Self::zero(new_dim, self.degree);
        for (idx, v) in self.iter() {
            if v != 0.0 {
                let shifted: Vec<usize> = idx.iter().map(|i| i + offset).collect();
                out.add_component(&shifted, v);
            }
        }
        out
    }

    /// Components in the rotated frame `e'_a = Q_{ia} e_i`.
    pub fn transform(&self, q: &DMatrix<f64>) -> Self {
        Self::from_fn(self.dim, self.degree, |c| {
            // sum over increasing source tuples of det of the Q minor
            self.iter()
                .filter(|(_, v)| *v != 0.0)
                .map(|(src, v)| v * minor_det(q, &src, c))
                .sum()
        })
    }
}

/// Determinant of the square submatrix of `q` with the given rows and columns.
fn minor_det(q: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    if k == 0 {
        return 1.0;
    }
    let m = DMatrix::from_fn(k, k, |i, j| q[(rows[i], cols[j])]);
    m.determinant()
}

fn zip_coeffs(a: &Form, b: &Form, f: impl Fn(f64, f64) -> f64) -> Form {
    assert_eq!((a.dim, a.degree), (b.dim, b.degree), "form shape mismatch");
    Form {
        dim: a.dim,
        degree: a.degree,
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(*x, *y)).collect(),
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        zip_coeffs(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        zip_coeffs(self, rhs, |x, y| x - y)
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree));
        self.coeffs.iter_mut().zip(&rhs.coeffs).for_each(|(x, y)| *x += y);
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(-1.0)
    }
}

impl Mul<&Form> for f64 {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        rhs.scale(self)
    }
}

/// Orientation of the frame: `ε_{0 1 .. n−1} = sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonOrientation {
    pub dim: usize,
    pub sign: i8,
}

impl EpsilonOrientation {
    pub fn new(dim: usize, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(GeometryError::InvalidStructure(format!(
                "orientation sign must be ±1, got {sign}"
            )));
        }
        Ok(Self { dim, sign })
    }

    pub fn positive(dim: usize) -> Self {
        Self { dim, sign: 1 }
    }

    pub fn flipped(self) -> Self {
        Self {
            dim: self.dim,
            sign: -self.sign,
        }
    }

    /// `ε` evaluated on an index tuple of length `dim`.
    pub fn epsilon(&self, indices: &[usize]) -> f64 {
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            Some(s) => s * self.sign as f64,
            None => 0.0,
        }
    }

    /// The oriented volume form.
    pub fn volume(&self) -> Form {
        let all: Vec<usize> = (0..self.dim).collect();
        Form::basis(self.dim, &all).scale(self.sign as f64)
    }
}

/// Exterior product. Degrees beyond the frame dimension give the zero form.
pub fn wedge(chi: &Form, psi: &Form) -> Result<Form> {
    if chi.dim != psi.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: chi.dim,
            got: psi.dim,
        });
    }
    let (p, q) = (chi.degree, psi.degree);
    let n = chi.dim;
    if p + q > n {
        return Ok(Form::zero(n, p + q));
    }
    let splits = combinations(p + q, p);
    let mut a = vec![0usize; p];
    let mut b = vec![0usize; q];
    Ok(Form::from_fn(n, p + q, |k| {
        let mut acc = 0.0;
        for pos in &splits {
            // shuffle sign: (−1)^{Σ (pos_i − i)}
            let parity: usize = pos.iter().enumerate().map(|(i, &x)| x - i).sum();
            let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
            let mut ia = 0;
            let mut ib = 0;
            for (s, &kk) in k.iter().enumerate() {
                if ia < p && pos[ia] == s {
                    a[ia] = kk;
                    ia += 1;
                } else {
                    b[ib] = kk;
                    ib += 1;
                }
            }
            acc += sign * chi.coeffs[combination_rank(n, &a)] * psi.coeffs[combination_rank(n, &b)];
        }
        acc
    }))
}

/// `(ι_v χ)_{i2..ip} = v^j χ_{j i2..ip}`.
pub fn interior_product(v: &[f64], chi: &Form) -> Result<Form> {
    if v.len() != chi.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: chi.dim,
            got: v.len(),
        });
    }
    if chi.degree == 0 {
        return Err(GeometryError::DegreeTooLow { min: 1, got: 0 });
    }
    let mut full = vec![0usize; chi.degree];
    Ok(Form::from_fn(chi.dim, chi.degree - 1, |rest| {
        full[1..].copy_from_slice(rest);
        (0..chi.dim)
            .filter(|&j| v[j] != 0.0)
            .map(|j| {
                full[0] = j;
                v[j] * chi.get(&full)
            })
            .sum()
    }))
}

/// Unit frame vector `e_i`.
pub fn unit_vector(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

/// Pointwise inner product `(1/p!) χ_{i..} ψ_{i..}`.
pub fn form_inner(chi: &Form, psi: &Form) -> Result<f64> {
    if chi.dim != psi.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: chi.dim,
            got: psi.dim,
        });
    }
    if chi.degree != psi.degree {
        return Err(GeometryError::DegreeMismatch {
            expected: chi.degree,
            got: psi.degree,
        });
    }
    Ok(chi.coeffs.iter().zip(&psi.coeffs).map(|(a, b)| a * b).sum())
}

/// Hodge dual with respect to the identity frame metric and `orient`.
pub fn hodge_star(chi: &Form, orient: &EpsilonOrientation) -> Result<Form> {
    if orient.dim != chi.dim {
        return Err(GeometryError::DimensionMismatch {
            expected: chi.dim,
            got: orient.dim,
        });
    }
    let n = chi.dim;
    let p = chi.degree;
    if p > n {
        return Err(GeometryError::DegreeMismatch {
            expected: n,
            got: p,
        });
    }
    let mut joined = vec![0usize; n];
    Ok(Form::from_fn(n, n - p, |j| {
        // the only contributing source tuple is the complement of j
        let comp: Vec<usize> = (0..n).filter(|x| !j.contains(x)).collect();
        joined[..p].copy_from_slice(&comp);
        joined[p..].copy_from_slice(j);
        orient.epsilon(&joined) * chi.coeffs[combination_rank(n, &comp)]
    }))
}

/// Coefficient of the oriented volume form in a top-degree form.
pub fn top_coefficient(top: &Form, orient: &EpsilonOrientation) -> f64 {
    assert_eq!(top.degree, top.dim, "top-degree form expected");
    top.coeffs[0] * orient.sign as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn combinations_are_ranked_lexicographically() {
        for n in 0..8 {
            for p in 0..=n {
                let all = combinations(n, p);
                assert_eq!(all.len(), binomial(n, p));
                for (r, c) in all.iter().enumerate() {
                    assert_eq!(combination_rank(n, c), r);
                }
            }
        }
    }

    #[test]
    fn basis_two_form_components() {
        let e12 = wedge(&Form::basis(4, &[0]), &Form::basis(4, &[1])).unwrap();
        assert_eq!(e12.get(&[0, 1]), 1.0);
        assert_eq!(e12.get(&[1, 0]), -1.0);
        assert_eq!(e12.get(&[0, 2]), 0.0);
        assert_eq!(e12, Form::basis(4, &[0, 1]));
    }

    #[test]
    fn one_by_two_wedge_is_cyclic_sum() {
        let chi = Form::one_form(&[0.3, -1.2, 0.7, 2.0]);
        let psi = Form::from_fn(4, 2, |c| (c[0] + 2 * c[1]) as f64 * 0.25 - 0.4);
        let w = wedge(&chi, &psi).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let cyclic = chi.get(&[i]) * psi.get(&[j, k])
                        + chi.get(&[j]) * psi.get(&[k, i])
                        + chi.get(&[k]) * psi.get(&[i, j]);
                    assert!((w.get(&[i, j, k]) - cyclic).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn odd_self_wedge_vanishes() {
        let chi = Form::one_form(&[1.0, 2.0, -3.0]);
        assert!(wedge(&chi, &chi).unwrap().is_zero(0.0));
    }

    #[test]
    fn overflowing_wedge_is_zero() {
        let a = Form::basis(3, &[0, 1]);
        let b = Form::basis(3, &[1, 2]);
        let w = wedge(&a, &b).unwrap();
        assert_eq!(w.degree(), 4);
        assert!(w.is_zero(0.0));
    }

    #[test]
    fn wedge_rejects_dimension_mismatch() {
        let err = wedge(&Form::basis(3, &[0]), &Form::basis(4, &[0])).unwrap_err();
        assert!(matches!(err, GeometryError::DimensionMismatch { .. }));
    }

    #[test]
    fn interior_product_basis_and_nilpotence() {
        let e12 = Form::basis(3, &[0, 1]);
        let r = interior_product(&unit_vector(3, 0), &e12).unwrap();
        assert_eq!(r, Form::basis(3, &[1]));
        let chi = Form::from_fn(5, 3, |c| (c[0] * 7 + c[1] * 3 + c[2]) as f64 - 8.0);
        let v = [0.4, -1.1, 0.3, 2.0, 0.9];
        let twice = interior_product(&v, &interior_product(&v, &chi).unwrap()).unwrap();
        assert!(twice.is_zero(TOL));
    }

    #[test]
    fn interior_product_of_zero_form_is_an_error() {
        let err = interior_product(&[1.0], &Form::zero(1, 0)).unwrap_err();
        assert!(matches!(err, GeometryError::DegreeTooLow { .. }));
    }

    #[test]
    fn inner_product_normalization() {
        let e12 = Form::basis(4, &[0, 1]);
        assert_eq!(form_inner(&e12, &e12).unwrap(), 1.0);
        // H = ε on dim 3 is e^{123}; (1/3!) Σ ε² = 1
        let eps = Form::basis(3, &[0, 1, 2]);
        let dense: f64 = eps.to_tensor().full_square() / 6.0;
        assert!((dense - 1.0).abs() < TOL);
        assert!((form_inner(&eps, &eps).unwrap() - 1.0).abs() < TOL);
        assert_eq!(form_inner(&e12, &Form::zero(4, 2)).unwrap(), 0.0);
        assert!(form_inner(&e12, &Form::basis(4, &[0])).is_err());
    }

    #[test]
    fn star_of_e12_in_four_dimensions() {
        let o = EpsilonOrientation::positive(4);
        let s = hodge_star(&Form::basis(4, &[0, 1]), &o).unwrap();
        assert_eq!(s, Form::basis(4, &[2, 3]));
        let s_neg = hodge_star(&Form::basis(4, &[0, 1]), &o.flipped()).unwrap();
        assert_eq!(s_neg, Form::basis(4, &[2, 3]).scale(-1.0));
    }

    #[test]
    fn star_matches_dense_definition() {
        // (*χ)_J = (1/p!) χ_I ε_{I J} summed over all I
        let o = EpsilonOrientation::positive(5);
        let chi = Form::from_fn(5, 2, |c| (c[0] as f64 - 1.5) * (c[1] as f64 + 0.5));
        let star = hodge_star(&chi, &o).unwrap();
        for j in combinations(5, 3) {
            let mut acc = 0.0;
            for a in 0..5 {
                for b in 0..5 {
                    acc += chi.get(&[a, b]) * o.epsilon(&[a, b, j[0], j[1], j[2]]);
                }
            }
            assert!((star.get(&j) - acc / 2.0).abs() < TOL);
        }
    }

    #[test]
    fn double_star_sign() {
        for n in 1..=7 {
            let o = EpsilonOrientation::positive(n);
            for p in 0..=n {
                let chi = Form::from_fn(n, p, |c| 1.0 + c.iter().sum::<usize>() as f64 * 0.1);
                let back = hodge_star(&hodge_star(&chi, &o).unwrap(), &o).unwrap();
                let sign = if (p * (n - p)) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((&back - &chi.scale(sign)).is_zero(TOL));
            }
        }
    }

    #[test]
    fn star_orientation_mismatch_is_an_error() {
        let o = EpsilonOrientation::positive(3);
        assert!(hodge_star(&Form::basis(4, &[0]), &o).is_err());
    }

    #[test]
    fn transform_of_form_matches_dense_transform() {
        let q = crate::random::random_orthogonal(5, &mut crate::random::rng(3));
        let chi = Form::from_fn(5, 3, |c| (c[0] + 2 * c[1] + 3 * c[2]) as f64 - 6.0);
        let via_form = chi.transform(&q).to_tensor();
        let via_dense = chi.to_tensor().transform(&q);
        assert!((&via_form - &via_dense).sup_norm() < 1e-12);
    }

    #[test]
    fn trace_contracts_slots() {
        let t = FrameTensor::from_fn(3, 3, |i| (i[0] * 9 + i[1] * 3 + i[2]) as f64);
        let tr = t.trace(0, 2);
        for j in 0..3 {
            let expected: f64 = (0..3).map(|k| t.get(&[k, j, k])).sum();
            assert_eq!(tr.get(&[j]), expected);
        }
    }
}
