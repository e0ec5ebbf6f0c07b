//! Dimension-four specifics: the Hodge splitting `Λ² = Λ²₊ ⊕ Λ²₋`, the
//! orthonormal bases `s_i^±`, the cross product on each half, and the
//! identification of the two components `Z±` with round 2-spheres of radius
//! `√2` in `Λ²±`.
//!
//! Every 6-vector in this crate uses the ordered basis
//! `(s₁⁺, s₂⁺, s₃⁺, s₁⁻, s₂⁻, s₃⁻)` where, for an oriented orthonormal
//! `(e₁, e₂, e₃, e₄)`,
//!
//! ```text
//! s₁± = (e₁∧e₂ ± e₃∧e₄)/√2,  s₂± = (e₁∧e₃ ± e₄∧e₂)/√2,  s₃± = (e₁∧e₄ ± e₂∧e₃)/√2.
//! ```

use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fibre::{OrthogonalComplexStructure, SkewEndomorphism, VERIFY_TOL};
use crate::linalg::{
    add4, cross3, dot4, mat4_to_matrix, matrix_to_mat4, max_abs4, mul4, Mat4, Vec4, ZERO4,
};

/// Which half of `Λ²` (equivalently, which component of `Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn offset(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Sign::Plus => "self-dual",
            Sign::Minus => "anti-self-dual",
        }
    }
}

/// A 2-vector on `R⁴` in the `s_i^±` basis.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct TwoVector(pub [f64; 6]);

impl TwoVector {
    pub const ZERO: TwoVector = TwoVector([0.0; 6]);

    /// `s_i^±`, `i ∈ {1, 2, 3}`.
    pub fn s(sign: Sign, i: usize) -> Self {
        assert!((1..=3).contains(&i), "s-basis index out of range");
        let mut c = [0.0; 6];
        c[sign.offset() + i - 1] = 1.0;
        TwoVector(c)
    }

    /// Embeds 3 coordinates in the given half.
    pub fn from_half(sign: Sign, v: [f64; 3]) -> Self {
        let mut c = [0.0; 6];
        c[sign.offset()..sign.offset() + 3].copy_from_slice(&v);
        TwoVector(c)
    }

    pub fn half(&self, sign: Sign) -> [f64; 3] {
        let o = sign.offset();
        [self.0[o], self.0[o + 1], self.0[o + 2]]
    }

    pub fn coeffs(&self) -> &[f64; 6] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    /// `x ∧ y`.
    pub fn wedge(x: &Vec4, y: &Vec4) -> Self {
        let e = |i: usize, j: usize| x[i] * y[j] - x[j] * y[i];
        Self::from_elementary([e(0, 1), e(0, 2), e(0, 3), e(1, 2), e(1, 3), e(2, 3)])
    }

    /// From coefficients over `(e12, e13, e14, e23, e24, e34)`.
    pub fn from_elementary(c: [f64; 6]) -> Self {
        let [e12, e13, e14, e23, e24, e34] = c;
        let r = FRAC_1_SQRT_2;
        TwoVector([
            r * (e12 + e34),
            r * (e13 - e24),
            r * (e14 + e23),
            r * (e12 - e34),
            r * (e13 + e24),
            r * (e14 - e23),
        ])
    }

    /// Coefficients over `(e12, e13, e14, e23, e24, e34)`.
    pub fn to_elementary(&self) -> [f64; 6] {
        let [p1, p2, p3, m1, m2, m3] = self.0;
        let r = FRAC_1_SQRT_2;
        [
            r * (p1 + m1),
            r * (p2 + m2),
            r * (p3 + m3),
            r * (p3 - m3),
            r * (m2 - p2),
            r * (p1 - m1),
        ]
    }

    /// `φ^∧` for a skew endomorphism of `R⁴`: `g(φ^∧, x∧y) = g(φx, y)`.
    pub fn from_endomorphism(a: &Mat4) -> Self {
        Self::from_elementary([a[1][0], a[2][0], a[3][0], a[2][1], a[3][1], a[3][2]])
    }

    /// The skew endomorphism `K_σ` with `g(K_σ x, y) = g(σ, x∧y)`.
    pub fn endomorphism(&self) -> Mat4 {
        let [e12, e13, e14, e23, e24, e34] = self.to_elementary();
        [
            [0.0, -e12, -e13, -e14],
            [e12, 0.0, -e23, -e24],
            [e13, e23, 0.0, -e34],
            [e14, e24, e34, 0.0],
        ]
    }

    /// Largest coefficient magnitude in the given half.
    fn half_max(&self, sign: Sign) -> f64 {
        self.half(sign).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn require_pure(&self, sign: Sign) -> Result<()> {
        let residual = self.half_max(sign.flip());
        if residual > VERIFY_TOL * (1.0 + self.half_max(sign)) {
            return Err(Error::MixedType {
                expected: sign.name(),
                residual,
            });
        }
        Ok(())
    }
}

impl Add for TwoVector {
    type Output = TwoVector;
    fn add(self, rhs: TwoVector) -> TwoVector {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0) {
            *a += b;
        }
        TwoVector(c)
    }
}

impl Sub for TwoVector {
    type Output = TwoVector;
    fn sub(self, rhs: TwoVector) -> TwoVector {
        self + (-rhs)
    }
}

impl Neg for TwoVector {
    type Output = TwoVector;
    fn neg(self) -> TwoVector {
        self * -1.0
    }
}

impl Mul<f64> for TwoVector {
    type Output = TwoVector;
    fn mul(self, s: f64) -> TwoVector {
        TwoVector(self.0.map(|v| v * s))
    }
}

/// The Hodge star: `+1` on `Λ²₊`, `-1` on `Λ²₋`.
pub fn hodge_star(sigma: &TwoVector) -> TwoVector {
    let c = sigma.0;
    TwoVector([c[0], c[1], c[2], -c[3], -c[4], -c[5]])
}

/// `σ = σ⁺ + σ⁻`.
pub fn split_pm(sigma: &TwoVector) -> (TwoVector, TwoVector) {
    (
        TwoVector::from_half(Sign::Plus, sigma.half(Sign::Plus)),
        TwoVector::from_half(Sign::Minus, sigma.half(Sign::Minus)),
    )
}

/// Cross product on the oriented 3-space `(Λ²±, g)`.
pub fn cross(sigma: &TwoVector, tau: &TwoVector, sign: Sign) -> Result<TwoVector> {
    sigma.require_pure(sign)?;
    tau.require_pure(sign)?;
    Ok(TwoVector::from_half(
        sign,
        cross3(&sigma.half(sign), &tau.half(sign)),
    ))
}

/// A compatible complex structure on oriented `R⁴` together with the
/// component `Z±` it lies in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedComplexStructure4 {
    j: Mat4,
    sign: Sign,
}

impl OrientedComplexStructure4 {
    /// Validates `J² = -Id`, skewness, and determines the component.
    pub fn new(j: Mat4) -> Result<Self> {
        let skew = SkewEndomorphism::new(mat4_to_matrix(&j))?;
        OrthogonalComplexStructure::new(skew)?;
        let w = TwoVector::from_endomorphism(&j);
        let sign = if w.half_max(Sign::Plus) >= w.half_max(Sign::Minus) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        w.require_pure(sign)?;
        Ok(Self { j, sign })
    }

    pub fn from_fibre(j: &OrthogonalComplexStructure) -> Result<Self> {
        let m = matrix_to_mat4(j.matrix()).ok_or(Error::DimensionMismatch {
            expected: 4,
            found: j.dim(),
        })?;
        Self::new(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.j
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `J^∧`, of norm `√2`.
    pub fn two_vector(&self) -> TwoVector {
        TwoVector::from_endomorphism(&self.j)
    }

    pub fn to_fibre(&self) -> OrthogonalComplexStructure {
        // J was validated at construction.
        OrthogonalComplexStructure::new(
            SkewEndomorphism::new(mat4_to_matrix(&self.j)).expect("validated skew"),
        )
        .expect("validated complex structure")
    }

    pub fn apply(&self, x: &Vec4) -> Vec4 {
        crate::linalg::apply4(&self.j, x)
    }
}

/// `J = K_{√2 u}` for a unit `u ∈ Λ²±`.
pub fn sphere_to_j(u: &TwoVector, sign: Sign) -> Result<OrientedComplexStructure4> {
    u.require_pure(sign)?;
    let norm = u.norm();
    if (norm - 1.0).abs() > VERIFY_TOL {
        return Err(Error::NotUnit { norm });
    }
    Ok(OrientedComplexStructure4 {
        j: (*u * SQRT_2).endomorphism(),
        sign,
    })
}

/// `J^∧/√2`, inverse of [`sphere_to_j`].
pub fn j_to_sphere(j: &OrientedComplexStructure4) -> TwoVector {
    j.two_vector() * FRAC_1_SQRT_2
}

/// Endomorphisms of an orthonormal pair `(u₂, u₃)` completing `J^∧/√2` to an
/// oriented orthonormal triad of `Λ²±`.
///
/// The triad is the image of `(s₁, s₂, s₃)` under the rotation taking `s₁` to
/// `J^∧/√2`: Rodrigues when `J^∧/√2` lies in the half-space around `s₁`,
/// otherwise the rotation by `π` about `s₂` followed by Rodrigues from `-s₁`.
pub fn vertical_basis(j: &OrientedComplexStructure4) -> [Mat4; 2] {
    let sign = j.sign;
    let u = j_to_sphere(j).half(sign);
    let rot = rotation_from_first_axis(&u);
    let col = |k: usize| [rot[0][k], rot[1][k], rot[2][k]];
    [
        TwoVector::from_half(sign, col(1)).endomorphism(),
        TwoVector::from_half(sign, col(2)).endomorphism(),
    ]
}

/// Rotation `R` with `R e₁ = u` for unit `u`.
fn rotation_from_first_axis(u: &[f64; 3]) -> [[f64; 3]; 3] {
    if u[0] >= 0.0 {
        return rodrigues(u);
    }
    // R = R' F with F = diag(-1, 1, -1) and R' e₁ = -u, well conditioned.
    let r = rodrigues(&[-u[0], -u[1], -u[2]]);
    let mut out = r;
    for row in out.iter_mut() {
        row[0] = -row[0];
        row[2] = -row[2];
    }
    out
}

/// `R = I + [k]× + [k]×² / (1 + c)` with `k = e₁ × u`, `c = u₁ ≥ 0`.
fn rodrigues(u: &[f64; 3]) -> [[f64; 3]; 3] {
    let c = u[0];
    let k = [0.0, -u[2], u[1]];
    let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let kk: f64 = (0..3).map(|l| kx[i][l] * kx[l][j]).sum();
            r[i][j] = if i == j { 1.0 } else { 0.0 } + kx[i][j] + kk / (1.0 + c);
        }
    }
    r
}

/// `g(x, y)` on `R⁴`.
pub fn g4(x: &Vec4, y: &Vec4) -> f64 {
    dot4(x, y)
}

/// `max |σ τ + τ σ|` for the endomorphisms of two 2-vectors.
pub fn anticommutator(sigma: &TwoVector, tau: &TwoVector) -> f64 {
    let (a, b) = (sigma.endomorphism(), tau.endomorphism());
    max_abs4(&add4(&mul4(&a, &b), &mul4(&b, &a)))
}

/// Orientation-reversing reflection `e₄ ↦ -e₄` acting on `R⁴`.
pub fn reflect_e4(x: &Vec4) -> Vec4 {
    [x[0], x[1], x[2], -x[3]]
}

/// Conjugation `q a q⁻¹` by the reflection `e₄ ↦ -e₄`.
pub fn reflect_endomorphism(a: &Mat4) -> Mat4 {
    let mut r = ZERO4;
    let s = [1.0, 1.0, 1.0, -1.0];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = s[i] * a[i][j] * s[j];
        }
    }
    r
}

/// The induced action of `e₄ ↦ -e₄` on 2-vectors: it swaps the halves,
/// `s₁± ↦ s₁∓`, `s₂± ↦ s₂∓`, `s₃± ↦ -s₃∓`.
pub fn reflect_two_vector(sigma: &TwoVector) -> TwoVector {
    let c = sigma.0;
    TwoVector([c[3], c[4], -c[5], c[0], c[1], -c[2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: [Vec4; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];

    fn close(a: &TwoVector, b: &TwoVector, tol: f64) -> bool {
        (*a - *b).norm() <= tol
    }

    #[test]
    fn hodge_of_e12_is_e34() {
        let e12 = TwoVector::wedge(&E[0], &E[1]);
        let e34 = TwoVector::wedge(&E[2], &E[3]);
        assert!(close(&hodge_star(&e12), &e34, 1e-15));
        assert_eq!(
            hodge_star(&TwoVector::s(Sign::Plus, 1)),
            TwoVector::s(Sign::Plus, 1)
        );
        assert_eq!(
            hodge_star(&TwoVector::s(Sign::Minus, 2)),
            -TwoVector::s(Sign::Minus, 2)
        );
    }

    #[test]
    fn split_of_e12() {
        let (p, m) = split_pm(&TwoVector::wedge(&E[0], &E[1]));
        let r = FRAC_1_SQRT_2;
        assert!(close(&p, &(TwoVector::s(Sign::Plus, 1) * r), 1e-15));
        assert!(close(&m, &(TwoVector::s(Sign::Minus, 1) * r), 1e-15));
        let (p, m) = split_pm(&TwoVector::s(Sign::Plus, 3));
        assert_eq!((p, m), (TwoVector::s(Sign::Plus, 3), TwoVector::ZERO));
        assert_eq!(
            split_pm(&TwoVector::ZERO),
            (TwoVector::ZERO, TwoVector::ZERO)
        );
    }

    #[test]
    fn cross_of_basis() {
        let c = cross(
            &TwoVector::s(Sign::Plus, 1),
            &TwoVector::s(Sign::Plus, 2),
            Sign::Plus,
        )
        .unwrap();
        assert_eq!(c, TwoVector::s(Sign::Plus, 3));
        let s = TwoVector::s(Sign::Minus, 2);
        assert_eq!(cross(&s, &s, Sign::Minus).unwrap(), TwoVector::ZERO);
    }

    #[test]
    fn cross_rejects_mixed_arguments() {
        let mixed = TwoVector::s(Sign::Plus, 1) + TwoVector::s(Sign::Minus, 1);
        assert!(matches!(
            cross(&mixed, &TwoVector::s(Sign::Plus, 2), Sign::Plus),
            Err(Error::MixedType { .. })
        ));
    }

    #[test]
    fn sphere_to_j_on_s1() {
        let near = |a: Vec4, b: Vec4| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        let jp = sphere_to_j(&TwoVector::s(Sign::Plus, 1), Sign::Plus).unwrap();
        assert!(near(jp.apply(&E[0]), E[1]));
        assert!(near(jp.apply(&E[2]), E[3]));
        let jm = sphere_to_j(&TwoVector::s(Sign::Minus, 1), Sign::Minus).unwrap();
        assert!(near(jm.apply(&E[0]), E[1]));
        assert!(near(jm.apply(&E[2]), [0.0, 0.0, 0.0, -1.0]));
        assert_eq!(jm.sign(), Sign::Minus);
    }

    #[test]
    fn sphere_to_j_rejects_bad_input() {
        let u = TwoVector::s(Sign::Plus, 1) * 2.0;
        assert!(matches!(
            sphere_to_j(&u, Sign::Plus),
            Err(Error::NotUnit { .. })
        ));
        assert!(matches!(
            sphere_to_j(&TwoVector::s(Sign::Minus, 1), Sign::Plus),
            Err(Error::MixedType { .. })
        ));
    }

    #[test]
    fn canonical_vertical_basis() {
        let j = sphere_to_j(&TwoVector::s(Sign::Plus, 1), Sign::Plus).unwrap();
        let [u2, u3] = vertical_basis(&j);
        assert_eq!(u2, TwoVector::s(Sign::Plus, 2).endomorphism());
        assert_eq!(u3, TwoVector::s(Sign::Plus, 3).endomorphism());
    }

    #[test]
    fn antipodal_vertical_basis_uses_fixed_rotation() {
        let j = sphere_to_j(&-TwoVector::s(Sign::Minus, 1), Sign::Minus).unwrap();
        let [u2, u3] = vertical_basis(&j);
        assert_eq!(u2, TwoVector::s(Sign::Minus, 2).endomorphism());
        assert_eq!(u3, (-TwoVector::s(Sign::Minus, 3)).endomorphism());
    }

    #[test]
    fn near_antipodal_vertical_basis_stays_vertical() {
        use crate::linalg::anticommutator_residual4;
        for e in [1e-3f64, 1e-6, 1e-9, 1e-12] {
            let n = libm::sqrt(1.0 + 2.0 * e * e);
            let u = [-1.0 / n, e / n, -e / n];
            let j = sphere_to_j(&TwoVector::from_half(Sign::Plus, u), Sign::Plus).unwrap();
            let [u2, u3] = vertical_basis(&j);
            assert!(anticommutator_residual4(j.matrix(), &u2) < 1e-14, "{e}");
            assert!(anticommutator_residual4(j.matrix(), &u3) < 1e-14, "{e}");
        }
    }

    #[test]
    fn elementary_round_trip() {
        let c = [1.0, -2.0, 3.0, 0.5, -0.25, 4.0];
        let back = TwoVector::from_elementary(c).to_elementary();
        for (a, b) in c.iter().zip(back) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn quaternionic_anticommutation() {
        for sign in [Sign::Plus, Sign::Minus] {
            for i in 1..=3 {
                for k in 1..=3 {
                    if i != k {
                        let r = anticommutator(&TwoVector::s(sign, i), &TwoVector::s(sign, k));
                        assert!(r < 1e-15);
                    }
                }
            }
        }
    }
}
