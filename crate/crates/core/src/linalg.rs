//! Bilinear forms on ℝⁿ⁺¹ and the small amount of linear algebra the
//! geometries share: Gram determinants, numerical rank, and intersection of
//! 2-planes through the origin.
//!
//! Minkowski quantities are always real: the form has signature (n, 1) with
//! the last coordinate carrying the minus sign, and no imaginary norm is ever
//! formed.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Relative singular-value threshold used for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// A coordinate vector in ℝⁿ⁺¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(GeometryError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(RealVector(coords))
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        RealVector(coords)
    }

    pub fn zeros(len: usize) -> Self {
        RealVector(vec![0.0; len])
    }

    /// The i-th standard basis vector of ℝ^len.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = vec![0.0; len];
        v[i] = 1.0;
        RealVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// All coordinates except the last one.
    pub fn space_part(&self) -> &[f64] {
        &self.0[..self.0.len() - 1]
    }

    pub fn scale(&self, s: f64) -> RealVector {
        RealVector(self.0.iter().map(|x| x * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &RealVector) -> RealVector {
        RealVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// Euclidean norm of all n+1 coordinates.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    fn check_same_len(&self, other: &RealVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<&[f64]> for RealVector {
    fn from(s: &[f64]) -> Self {
        RealVector(s.to_vec())
    }
}

impl<'a> Add<&'a RealVector> for &'a RealVector {
    type Output = RealVector;

    fn add(self, rhs: &'a RealVector) -> RealVector {
        self.add_scaled(1.0, rhs)
    }
}

impl<'a> Sub<&'a RealVector> for &'a RealVector {
    type Output = RealVector;

    fn sub(self, rhs: &'a RealVector) -> RealVector {
        self.add_scaled(-1.0, rhs)
    }
}

impl Mul<f64> for &RealVector {
    type Output = RealVector;

    fn mul(self, s: f64) -> RealVector {
        self.scale(s)
    }
}

impl Neg for &RealVector {
    type Output = RealVector;

    fn neg(self) -> RealVector {
        self.scale(-1.0)
    }
}

/// Which bilinear form to evaluate on ℝⁿ⁺¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Euclidean,
    /// Signature (n, 1); the last coordinate is time-like.
    Minkowski,
}

impl FormKind {
    /// Sign of the i-th diagonal entry for a vector of length `len`.
    #[inline]
    fn sign(self, i: usize, len: usize) -> f64 {
        match self {
            FormKind::Minkowski if i + 1 == len => -1.0,
            _ => 1.0,
        }
    }
}

/// ⟨u, v⟩ in the chosen form.
pub fn dot(form: FormKind, u: &RealVector, v: &RealVector) -> Result<f64> {
    u.check_same_len(v)?;
    Ok(dot_unchecked(form, u.as_slice(), v.as_slice()))
}

pub(crate) fn dot_unchecked(form: FormKind, u: &[f64], v: &[f64]) -> f64 {
    let len = u.len();
    let space: f64 = u[..len - 1]
        .iter()
        .zip(&v[..len - 1])
        .map(|(a, b)| a * b)
        .sum();
    let time = u[len - 1] * v[len - 1];
    match form {
        FormKind::Euclidean => space + time,
        FormKind::Minkowski => space - time,
    }
}

/// ⟨u,u⟩⟨v,v⟩ − ⟨u,v⟩².
///
/// Evaluated through the Lagrange identity as a signed sum of squared 2×2
/// minors, Σ_{i<j} sᵢsⱼ (uᵢvⱼ − uⱼvᵢ)². This is algebraically the same
/// quantity but does not cancel catastrophically for nearly parallel inputs,
/// and `gram2(f, u, u)` is exactly zero.
pub fn gram2(form: FormKind, u: &RealVector, v: &RealVector) -> Result<f64> {
    u.check_same_len(v)?;
    Ok(gram2_unchecked(form, u.as_slice(), v.as_slice()))
}

pub(crate) fn gram2_unchecked(form: FormKind, u: &[f64], v: &[f64]) -> f64 {
    let len = u.len();
    let mut positive = 0.0;
    let mut negative = 0.0;
    for i in 0..len {
        for j in (i + 1)..len {
            let minor = u[i] * v[j] - u[j] * v[i];
            let sq = minor * minor;
            if form.sign(i, len) * form.sign(j, len) > 0.0 {
                positive += sq;
            } else {
                negative += sq;
            }
        }
    }
    positive - negative
}

/// Number of singular values of the stacked vectors exceeding
/// `tol` times the largest one.
pub fn numeric_rank(vectors: &[RealVector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols = vectors[0].len();
    let m = DMatrix::from_fn(vectors.len(), cols, |r, c| {
        vectors[r].as_slice().get(c).copied().unwrap_or(0.0)
    });
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 || !max.is_finite() {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// A 2-dimensional linear subspace of ℝⁿ⁺¹, given by a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPlane {
    basis: [RealVector; 2],
}

impl TwoPlane {
    pub fn new(a: RealVector, b: RealVector) -> Result<Self> {
        a.check_same_len(&b)?;
        if numeric_rank(&[a.clone(), b.clone()], DEFAULT_RANK_TOL) < 2 {
            return Err(GeometryError::DegeneratePair);
        }
        Ok(TwoPlane { basis: [a, b] })
    }

    pub fn basis(&self) -> &[RealVector; 2] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis[0].len()
    }

    /// Whether `v` lies in the plane at the default rank tolerance.
    pub fn contains(&self, v: &RealVector) -> bool {
        numeric_rank(
            &[self.basis[0].clone(), self.basis[1].clone(), v.clone()],
            DEFAULT_RANK_TOL,
        ) <= 2
    }

    /// Orthonormal basis (Euclidean) of the plane, by Gram–Schmidt with one
    /// reorthogonalization pass.
    pub(crate) fn orthonormal_basis(&self) -> [RealVector; 2] {
        let q1 = self.basis[0].scale(1.0 / self.basis[0].norm());
        let mut w = self.basis[1].clone();
        for _ in 0..2 {
            let c = dot_unchecked(FormKind::Euclidean, q1.as_slice(), w.as_slice());
            w = w.add_scaled(-c, &q1);
        }
        let q2 = w.scale(1.0 / w.norm());
        [q1, q2]
    }

    /// Euclidean orthogonal projection of `v` onto the plane.
    pub(crate) fn project_orthogonal(&self, v: &RealVector) -> RealVector {
        let [q1, q2] = self.orthonormal_basis();
        let c1 = dot_unchecked(FormKind::Euclidean, q1.as_slice(), v.as_slice());
        let c2 = dot_unchecked(FormKind::Euclidean, q2.as_slice(), v.as_slice());
        q1.scale(c1).add_scaled(c2, &q2)
    }
}

/// Fixes the sign of a direction: last coordinate non-negative, ties broken
/// by making the first nonzero coordinate positive.
pub(crate) fn canonical_sign(v: RealVector) -> RealVector {
    const ZERO: f64 = 1e-14;
    let scale = v.norm();
    let last = v.last();
    let flip = if last.abs() > ZERO * scale {
        last < 0.0
    } else {
        v.as_slice()
            .iter()
            .find(|x| x.abs() > ZERO * scale)
            .is_some_and(|x| *x < 0.0)
    };
    if flip {
        -&v
    } else {
        v
    }
}

/// Unit direction spanning `p1 ∩ p2` for two distinct planes inside a
/// common 3-dimensional subspace.
pub fn plane_intersect_in_3space(p1: &TwoPlane, p2: &TwoPlane) -> Result<RealVector> {
    if p1.dim() != p2.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    let [a1, a2] = p1.basis();
    let [b1, b2] = p2.basis();
    match numeric_rank(
        &[a1.clone(), a2.clone(), b1.clone(), b2.clone()],
        DEFAULT_RANK_TOL,
    ) {
        r if r <= 2 => return Err(GeometryError::IdenticalPlanes),
        3 => {}
        _ => return Err(GeometryError::NoCommon3Space),
    }

    // The components of b1, b2 orthogonal to p1 are parallel; combine b1, b2
    // so that they cancel.
    let r1 = b1 - &p1.project_orthogonal(b1);
    let r2 = b2 - &p1.project_orthogonal(b2);
    let e = FormKind::Euclidean;
    let r11 = dot_unchecked(e, r1.as_slice(), r1.as_slice());
    let r12 = dot_unchecked(e, r1.as_slice(), r2.as_slice());
    let r22 = dot_unchecked(e, r2.as_slice(), r2.as_slice());
    let x = if r11 >= r22 {
        b1.scale(r12).add_scaled(-r11, b2)
    } else {
        b1.scale(r22).add_scaled(-r12, b2)
    };
    let norm = x.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(GeometryError::IdenticalPlanes);
    }
    Ok(canonical_sign(x.scale(1.0 / norm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(c: &[f64]) -> RealVector {
        RealVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(
            dot(FormKind::Euclidean, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(),
            0.0
        );
        assert_eq!(
            dot(
                FormKind::Minkowski,
                &v(&[0.0, 0.0, 1.0]),
                &v(&[0.0, 0.0, 1.0])
            )
            .unwrap(),
            -1.0
        );
        assert_eq!(
            dot(
                FormKind::Minkowski,
                &v(&[3.0, 0.0, 1.0]),
                &v(&[0.0, 4.0, 1.0])
            )
            .unwrap(),
            -1.0
        );
    }

    #[test]
    fn dot_dimension_mismatch() {
        let err = dot(FormKind::Euclidean, &v(&[1.0, 0.0]), &v(&[1.0, 0.0, 0.0]));
        assert!(matches!(err, Err(GeometryError::DimensionMismatch { .. })));
        assert!(gram2(FormKind::Minkowski, &v(&[1.0, 0.0]), &v(&[1.0])).is_err());
    }

    #[test]
    fn gram2_examples() {
        let e = FormKind::Euclidean;
        assert_eq!(gram2(e, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 1.0);
        assert_eq!(
            gram2(e, &v(&[1.0, 1.0, 1.0]), &v(&[1.0, -1.0, 1.0])).unwrap(),
            8.0
        );
        assert_relative_eq!(
            gram2(
                FormKind::Minkowski,
                &v(&[0.0, 0.0, 1.0]),
                &v(&[0.5, 0.0, 1.0])
            )
            .unwrap(),
            -0.25,
            epsilon = 1e-15
        );
    }

    #[test]
    fn gram2_matches_expanded_definition() {
        let u = v(&[0.3, -1.2, 2.5, 0.7]);
        let w = v(&[1.1, 0.4, -0.6, 2.0]);
        for form in [FormKind::Euclidean, FormKind::Minkowski] {
            let uu = dot(form, &u, &u).unwrap();
            let ww = dot(form, &w, &w).unwrap();
            let uw = dot(form, &u, &w).unwrap();
            assert_relative_eq!(
                gram2(form, &u, &w).unwrap(),
                uu * ww - uw * uw,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn rank_examples() {
        let r = v(&[1.0, 2.0, 1.0]);
        assert_eq!(numeric_rank(&[r.clone(), r.clone(), r], 1e-9), 1);
        assert_eq!(
            numeric_rank(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])], 1e-9),
            2
        );
        let lifts: Vec<_> = [0.0, 1.0, 2.0, 4.0]
            .iter()
            .map(|&t| v(&[t, 0.0, 1.0]))
            .collect();
        assert_eq!(numeric_rank(&lifts, 1e-9), 2);
        assert_eq!(numeric_rank(&[], 1e-9), 0);
        assert_eq!(numeric_rank(&[RealVector::zeros(3)], 1e-9), 0);
    }

    #[test]
    fn intersect_examples() {
        let e = |i| RealVector::basis(3, i);
        let p = |a, b| TwoPlane::new(a, b).unwrap();
        assert_eq!(
            plane_intersect_in_3space(&p(e(0), e(2)), &p(e(1), e(2))).unwrap(),
            e(2)
        );
        assert_eq!(
            plane_intersect_in_3space(&p(e(0), e(1)), &p(e(1), e(2))).unwrap(),
            e(1)
        );
        let x = plane_intersect_in_3space(
            &p(v(&[1.0, 0.0, 1.0]), v(&[0.0, 1.0, 0.0])),
            &p(v(&[1.0, 0.0, 1.0]), v(&[1.0, 1.0, 0.0])),
        )
        .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(x.as_slice(), &[h, 0.0, h][..], epsilon = 1e-15);
    }

    #[test]
    fn intersect_errors() {
        let e = |i| RealVector::basis(4, i);
        let a = TwoPlane::new(e(0), e(1)).unwrap();
        let same = TwoPlane::new(&e(0) + &e(1), &e(0) - &e(1)).unwrap();
        assert_eq!(
            plane_intersect_in_3space(&a, &same),
            Err(GeometryError::IdenticalPlanes)
        );
        let far = TwoPlane::new(e(2), e(3)).unwrap();
        assert_eq!(
            plane_intersect_in_3space(&a, &far),
            Err(GeometryError::NoCommon3Space)
        );
    }

    #[test]
    fn degenerate_plane_rejected() {
        let a = v(&[1.0, 2.0, 3.0]);
        assert_eq!(
            TwoPlane::new(a.clone(), a.scale(-2.0)),
            Err(GeometryError::DegeneratePair)
        );
    }

    #[test]
    fn canonical_sign_tie_break() {
        assert_eq!(
            canonical_sign(v(&[0.0, -1.0, 0.0])).as_slice(),
            &[0.0, 1.0, 0.0]
        );
        assert_eq!(
            canonical_sign(v(&[1.0, 0.0, -2.0])).as_slice(),
            &[-1.0, 0.0, 2.0]
        );
    }
}
