//! Linear algebra of the fibre `Z(T, g)`: compatible complex structures on a
//! `2m`-dimensional Euclidean space, viewed inside the skew endomorphisms
//! `so(g)` with the metric `G(a, b) = -1/2 trace(ab)`.
//!
//! Coordinates are always orthonormal, so `g` is the identity form.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// Tolerance applied when a value is constructed from raw entries.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for identities that hold only up to accumulated rounding.
pub const VERIFY_TOL: f64 = 1e-10;
/// Default central finite-difference step for vector field derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Skewness tolerance for finite-difference derivatives of skew-valued fields.
pub const DERIVATIVE_TOL: f64 = 1e-6;

fn scaled(tol: f64, magnitude: f64) -> f64 {
    tol * (1.0 + magnitude)
}

/// `R^{2m}` with its standard inner product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EuclideanSpace {
    dim: usize,
}

impl EuclideanSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `m`, half the real dimension.
    pub fn half_dim(&self) -> usize {
        self.dim / 2
    }

    pub fn basis_vector(&self, i: usize) -> Vec<f64> {
        let mut e = alloc::vec![0.0; self.dim];
        e[i] = 1.0;
        e
    }
}

/// Element of `so(g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewEndomorphism(Matrix);

impl SkewEndomorphism {
    pub fn new(m: Matrix) -> Result<Self> {
        Self::with_tolerance(m, CONSTRUCTION_TOL)
    }

    pub(crate) fn with_tolerance(m: Matrix, tol: f64) -> Result<Self> {
        let residual = m.skew_residual();
        if residual > scaled(tol, m.max_abs()) {
            return Err(Error::NotSkew { residual });
        }
        Ok(Self(m))
    }

    pub fn zero(dim: usize) -> Self {
        Self(Matrix::zeros(dim))
    }

    /// `S_ab` with `S_ab e_c = δ_ac e_b - δ_bc e_a` (0-based indices).
    pub fn s_basis_element(dim: usize, a: usize, b: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        m[(b, a)] = 1.0;
        m[(a, b)] = -1.0;
        Self(m)
    }

    /// `S_ab` written in the orthonormal frame `frame`: maps `f_a ↦ f_b`,
    /// `f_b ↦ -f_a`.
    fn s_in_frame(frame: &[Vec<f64>], a: usize, b: usize) -> Matrix {
        let n = frame.len();
        Matrix::from_fn(n, |i, j| {
            frame[b][i] * frame[a][j] - frame[a][i] * frame[b][j]
        })
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `[a, b] = ab - ba`, again skew.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(self.0.mul(&other.0).sub(&other.0.mul(&self.0)))
    }
}

/// `G(a, b) = -1/2 trace(ab)`.
pub fn inner_g(a: &SkewEndomorphism, b: &SkewEndomorphism) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(-0.5 * a.0.mul(&b.0).trace())
}

/// A `g`-orthogonal complex structure `J`, i.e. a point of `Z(T, g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalComplexStructure(SkewEndomorphism);

impl OrthogonalComplexStructure {
    pub fn new(j: SkewEndomorphism) -> Result<Self> {
        let n = j.dim();
        let sq = j.0.mul(&j.0).add(&Matrix::identity(n));
        let residual = sq.max_abs();
        if residual > VERIFY_TOL {
            return Err(Error::NotComplexStructure { residual });
        }
        Ok(Self(j))
    }

    /// `J e_{2i-1} = e_{2i}`.
    pub fn standard(space: EuclideanSpace) -> Self {
        let n = space.dim();
        let mut m = Matrix::zeros(n);
        for i in 0..space.half_dim() {
            m[(2 * i + 1, 2 * i)] = 1.0;
            m[(2 * i, 2 * i + 1)] = -1.0;
        }
        Self(SkewEndomorphism(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_skew(&self) -> &SkewEndomorphism {
        &self.0
    }

    pub fn matrix(&self) -> &Matrix {
        self.0.matrix()
    }

    /// `max |JV + VJ|`.
    pub fn tangency_residual(&self, v: &Matrix) -> f64 {
        let j = self.matrix();
        j.mul(v).add(&v.mul(j)).max_abs()
    }

    /// Orthogonal projection of `so(g)` onto `T_J Z`: `W ↦ (W + JWJ)/2`.
    pub fn project_tangent(&self, w: &Matrix) -> Matrix {
        let j = self.matrix();
        w.add(&j.mul(w).mul(j)).scale(0.5)
    }
}

/// A vector of `T_J Z = {V ∈ so(g) : JV + VJ = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreTangentVector {
    base: OrthogonalComplexStructure,
    value: SkewEndomorphism,
}

impl FibreTangentVector {
    pub fn new(base: OrthogonalComplexStructure, value: SkewEndomorphism) -> Result<Self> {
        if base.dim() != value.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: value.dim(),
            });
        }
        let residual = base.tangency_residual(value.matrix());
        if residual > scaled(VERIFY_TOL, value.matrix().max_abs()) {
            return Err(Error::NotTangent { residual });
        }
        Ok(Self { base, value })
    }

    pub fn base(&self) -> &OrthogonalComplexStructure {
        &self.base
    }

    pub fn value(&self) -> &SkewEndomorphism {
        &self.value
    }
}

/// The basis `{S_ab : a < b}` of `so(g)` in lexicographic order.
pub fn s_basis(space: EuclideanSpace) -> Vec<SkewEndomorphism> {
    let n = space.dim();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(SkewEndomorphism::s_basis_element(n, a, b));
        }
    }
    out
}

/// The `G`-orthonormal basis `A_rs, B_rs` (`r < s`) of `T_J Z` built from a
/// `J`-adapted orthonormal frame (`J f_{2i-1} = f_{2i}`). The list is
/// interleaved: `A_12, B_12, A_13, B_13, …`.
pub fn ab_basis(
    j: &OrthogonalComplexStructure,
    frame: &[Vec<f64>],
) -> Result<Vec<FibreTangentVector>> {
    let n = j.dim();
    if frame.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: frame.len(),
        });
    }
    for (i, f) in frame.iter().enumerate() {
        if f.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.len(),
            });
        }
        for (k, h) in frame.iter().enumerate().skip(i) {
            let expected = if i == k { 1.0 } else { 0.0 };
            let residual = (dot(f, h) - expected).abs();
            if residual > VERIFY_TOL {
                return Err(Error::BadFrame {
                    identity: format!("g(f_{}, f_{}) = {}", i + 1, k + 1, expected),
                    residual,
                });
            }
        }
    }
    for i in 0..n / 2 {
        let image = j.matrix().apply(&frame[2 * i]);
        let residual = image
            .iter()
            .zip(&frame[2 * i + 1])
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if residual > VERIFY_TOL {
            return Err(Error::BadFrame {
                identity: format!("J f_{} = f_{}", 2 * i + 1, 2 * i + 2),
                residual,
            });
        }
    }
    let c = core::f64::consts::FRAC_1_SQRT_2;
    let m = n / 2;
    let mut out = Vec::with_capacity(m * (m - 1));
    for r in 0..m {
        for s in r + 1..m {
            let (r1, r2, s1, s2) = (2 * r, 2 * r + 1, 2 * s, 2 * s + 1);
            let a = SkewEndomorphism::s_in_frame(frame, r1, s1)
                .sub(&SkewEndomorphism::s_in_frame(frame, r2, s2))
                .scale(c);
            let b = SkewEndomorphism::s_in_frame(frame, r1, s2)
                .add(&SkewEndomorphism::s_in_frame(frame, r2, s1))
                .scale(c);
            out.push(FibreTangentVector::new(
                j.clone(),
                SkewEndomorphism::new(a)?,
            )?);
            out.push(FibreTangentVector::new(
                j.clone(),
                SkewEndomorphism::new(b)?,
            )?);
        }
    }
    Ok(out)
}

/// The fibre almost complex structure `K V = J ∘ V`.
pub fn kaehler_k(v: &FibreTangentVector) -> Result<FibreTangentVector> {
    let jv = v.base.matrix().mul(v.value.matrix());
    let skew = SkewEndomorphism::with_tolerance(jv, VERIFY_TOL)?;
    FibreTangentVector::new(v.base.clone(), skew)
}

/// A vector field on `Z`, extended to an `so(g)`-valued function on `so(g)`.
///
/// Only the derivative along directions tangent to `Z` enters the connection,
/// so any smooth extension off `Z` is acceptable.
pub trait FibreVectorField {
    fn evaluate(&self, at: &Matrix) -> Matrix;

    fn fd_step(&self) -> f64 {
        DEFAULT_FD_STEP
    }

    /// `Y'(at)(direction)`; central differences unless overridden.
    fn derivative(&self, at: &Matrix, direction: &Matrix) -> Matrix {
        let h = self.fd_step();
        let plus = self.evaluate(&at.add(&direction.scale(h)));
        let minus = self.evaluate(&at.sub(&direction.scale(h)));
        plus.sub(&minus).scale(0.5 / h)
    }
}

/// `(D_X Y)_J = 1/2 (Y'(J)(X) + J Y'(J)(X) J)` for the Levi-Civita
/// connection of `G` on `Z`.
pub fn fibre_levi_civita<F: FibreVectorField + ?Sized>(
    field: &F,
    x: &FibreTangentVector,
) -> Result<FibreTangentVector> {
    let j = &x.base;
    let dy = field.derivative(j.matrix(), x.value.matrix());
    // A finite-difference derivative is skew only to the accuracy of the
    // difference quotient; beyond that its symmetric part is a real error.
    SkewEndomorphism::with_tolerance(dy.clone(), DERIVATIVE_TOL)?;
    let dy = dy.sub(&dy.transpose()).scale(0.5);
    FibreTangentVector::new(j.clone(), SkewEndomorphism(j.project_tangent(&dy)))
}

/// `A ↦ (Q + AQA)/2`: the tangential projection of a fixed skew `Q`,
/// extended to all of `so(g)`.
#[derive(Clone, Debug)]
pub struct ProjectedConstant {
    pub q: Matrix,
}

impl FibreVectorField for ProjectedConstant {
    fn evaluate(&self, at: &Matrix) -> Matrix {
        self.q.add(&at.mul(&self.q).mul(at)).scale(0.5)
    }
}

/// The field `A ↦ A · Y(A)`, i.e. `K ∘ Y` on `Z`.
#[derive(Clone, Debug)]
pub struct KaehlerImage<F>(pub F);

impl<F: FibreVectorField> FibreVectorField for KaehlerImage<F> {
    fn evaluate(&self, at: &Matrix) -> Matrix {
        at.mul(&self.0.evaluate(at))
    }

    fn fd_step(&self) -> f64 {
        self.0.fd_step()
    }
}

/// A constant field; its covariant derivative vanishes.
#[derive(Clone, Debug)]
pub struct ConstantField(pub Matrix);

impl FibreVectorField for ConstantField {
    fn evaluate(&self, _at: &Matrix) -> Matrix {
        self.0.clone()
    }

    fn derivative(&self, at: &Matrix, _direction: &Matrix) -> Matrix {
        Matrix::zeros(at.dim())
    }
}

/// Coefficients of `a^∧` over `e_i ∧ e_j` (`i < j`, lexicographic), defined by
/// `g(a^∧, x ∧ y) = g(ax, y)`.
pub fn wedge_coefficients(a: &SkewEndomorphism) -> Vec<f64> {
    let n = a.dim();
    let m = a.matrix();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(m[(j, i)]);
        }
    }
    out
}

/// Inverse of [`wedge_coefficients`].
pub fn from_wedge_coefficients(dim: usize, coeffs: &[f64]) -> Result<SkewEndomorphism> {
    EuclideanSpace::new(dim)?;
    let expected = dim * (dim - 1) / 2;
    if coeffs.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: coeffs.len(),
        });
    }
    let mut m = Matrix::zeros(dim);
    let mut k = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            m[(j, i)] = coeffs[k];
            m[(i, j)] = -coeffs[k];
            k += 1;
        }
    }
    Ok(SkewEndomorphism(m))
}

/// Coefficients of the decomposable 2-vector `x ∧ y`.
pub fn decomposable(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(x[i] * y[j] - x[j] * y[i]);
        }
    }
    out
}

/// The induced inner product on 2-vectors, in coefficient form.
pub fn wedge_inner(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn s12_unit_and_s34_orthogonal() {
        let s12 = SkewEndomorphism::s_basis_element(4, 0, 1);
        let s34 = SkewEndomorphism::s_basis_element(4, 2, 3);
        assert_eq!(inner_g(&s12, &s12).unwrap(), 1.0);
        assert_eq!(inner_g(&s12, &s34).unwrap(), 0.0);
        assert_eq!(inner_g(&SkewEndomorphism::zero(4), &s34).unwrap(), 0.0);
    }

    #[test]
    fn inner_g_rejects_dimension_mismatch() {
        let a = SkewEndomorphism::zero(4);
        let b = SkewEndomorphism::zero(6);
        assert_eq!(
            inner_g(&a, &b),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 6
            })
        );
    }

    #[test]
    fn s_basis_sizes() {
        let two = s_basis(EuclideanSpace::new(2).unwrap());
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].matrix().apply(&[1.0, 0.0]), vec![0.0, 1.0]);
        assert_eq!(s_basis(EuclideanSpace::new(4).unwrap()).len(), 6);
        assert_eq!(s_basis(EuclideanSpace::new(6).unwrap()).len(), 15);
    }

    #[test]
    fn odd_dimension_rejected() {
        assert_eq!(EuclideanSpace::new(3), Err(Error::InvalidDimension(3)));
        assert_eq!(EuclideanSpace::new(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn asymmetric_matrix_is_not_skew() {
        let m = Matrix::from_fn(2, |i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 });
        assert!(matches!(
            SkewEndomorphism::new(m),
            Err(Error::NotSkew { .. })
        ));
    }

    fn standard_frame(n: usize) -> Vec<Vec<f64>> {
        let space = EuclideanSpace::new(n).unwrap();
        (0..n).map(|i| space.basis_vector(i)).collect()
    }

    #[test]
    fn ab_basis_dim_two_is_empty() {
        let space = EuclideanSpace::new(2).unwrap();
        let j = OrthogonalComplexStructure::standard(space);
        assert!(ab_basis(&j, &standard_frame(2)).unwrap().is_empty());
    }

    #[test]
    fn ab_basis_dim_four_gives_kaehler_pairs() {
        let space = EuclideanSpace::new(4).unwrap();
        let j = OrthogonalComplexStructure::standard(space);
        let basis = ab_basis(&j, &standard_frame(4)).unwrap();
        assert_eq!(basis.len(), 2);
        let kb = kaehler_k(&basis[0]).unwrap();
        assert!(kb.value().sub(basis[1].value()).matrix().max_abs() < 1e-15);
    }

    #[test]
    fn ab_basis_rejects_non_adapted_frame() {
        let space = EuclideanSpace::new(4).unwrap();
        let j = OrthogonalComplexStructure::standard(space);
        let mut frame = standard_frame(4);
        frame.swap(2, 3);
        match ab_basis(&j, &frame) {
            Err(Error::BadFrame { identity, .. }) => assert_eq!(identity, "J f_3 = f_4"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kaehler_of_zero_is_zero() {
        let j = OrthogonalComplexStructure::standard(EuclideanSpace::new(4).unwrap());
        let v = FibreTangentVector::new(j, SkewEndomorphism::zero(4)).unwrap();
        assert_eq!(kaehler_k(&v).unwrap().value().matrix().max_abs(), 0.0);
    }

    #[test]
    fn non_tangent_vector_rejected() {
        let j = OrthogonalComplexStructure::standard(EuclideanSpace::new(4).unwrap());
        let s12 = SkewEndomorphism::s_basis_element(4, 0, 1);
        assert!(matches!(
            FibreTangentVector::new(j, s12),
            Err(Error::NotTangent { .. })
        ));
    }

    #[test]
    fn constant_field_has_zero_derivative() {
        let j = OrthogonalComplexStructure::standard(EuclideanSpace::new(4).unwrap());
        let basis = ab_basis(&j, &standard_frame(4)).unwrap();
        let field = ConstantField(basis[0].value().matrix().clone());
        let d = fibre_levi_civita(&field, &basis[1]).unwrap();
        assert_eq!(d.value().matrix().max_abs(), 0.0);
    }

    #[test]
    fn wedge_of_s12_is_e1_e2() {
        let s12 = SkewEndomorphism::s_basis_element(4, 0, 1);
        assert_eq!(wedge_coefficients(&s12), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let back = from_wedge_coefficients(4, &wedge_coefficients(&s12)).unwrap();
        assert_eq!(back, s12);
        assert_eq!(wedge_coefficients(&SkewEndomorphism::zero(4)), vec![0.0; 6]);
    }
}
