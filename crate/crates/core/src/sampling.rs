//! Seeded random draws of points, tangent vectors and curvature data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::curvature::{compose, CurvatureBlocks, CurvatureOperator};
use crate::four_dim::{sphere_to_j, OrientedComplexStructure4, Sign, TwoVector};
use crate::linalg::{Mat3, Mat4, Vec4};
use crate::twistor::{Component, GTangent, ProductTwistorPoint, TwistorTensors};

/// Deterministic sampler; the same seed always yields the same sequence.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn normals<const N: usize>(&mut self) -> [f64; N] {
        core::array::from_fn(|_| self.normal())
    }

    pub fn vec4(&mut self) -> Vec4 {
        self.normals()
    }

    /// Uniform on the unit sphere of `R³`.
    pub fn unit3(&mut self) -> [f64; 3] {
        loop {
            let v: [f64; 3] = self.normals();
            let n = libm::sqrt(v.iter().map(|a| a * a).sum());
            if n > 1e-8 {
                return v.map(|a| a / n);
            }
        }
    }

    /// Uniform on the unit sphere of `Λ²±`.
    pub fn unit_two_vector(&mut self, sign: Sign) -> TwoVector {
        TwoVector::from_half(sign, self.unit3())
    }

    pub fn complex_structure(&mut self, sign: Sign) -> OrientedComplexStructure4 {
        sphere_to_j(&self.unit_two_vector(sign), sign).expect("unit vector of the requested half")
    }

    pub fn point(&mut self, component: Component) -> ProductTwistorPoint {
        let j1 = self.complex_structure(component.first);
        let j2 = self.complex_structure(component.second);
        ProductTwistorPoint::new(j1, j2)
    }

    /// Standard-normal coefficients over the orthonormal frame of `tensors`.
    pub fn tangent(&mut self, tensors: &TwistorTensors) -> GTangent {
        tensors
            .frame()
            .iter()
            .fold(GTangent::ZERO, |acc, e| acc + *e * self.normal())
    }

    /// As [`Sampler::tangent`] with the second vertical part dropped.
    pub fn first_factor_tangent(&mut self, tensors: &TwistorTensors) -> GTangent {
        let mut a = self.tangent(tensors);
        a.v.v2 = [[0.0; 4]; 4];
        a
    }

    /// Skew endomorphism of `R⁴` with normal 2-vector coefficients.
    pub fn skew4(&mut self) -> Mat4 {
        TwoVector(self.normals()).endomorphism()
    }

    /// Unit 2-vector over all of `Λ²`, scaled by `√2` when used as `J^∧`.
    pub fn two_vector(&mut self) -> TwoVector {
        TwoVector(self.normals())
    }

    pub fn mat3(&mut self) -> Mat3 {
        core::array::from_fn(|_| self.normals())
    }

    pub fn symmetric3(&mut self) -> Mat3 {
        let a = self.mat3();
        core::array::from_fn(|i| core::array::from_fn(|j| 0.5 * (a[i][j] + a[j][i])))
    }

    pub fn traceless_symmetric3(&mut self) -> Mat3 {
        let mut a = self.symmetric3();
        let shift = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= shift;
        }
        a
    }

    /// A random symmetric operator on `Λ²` (generally non-strict).
    pub fn symmetric_operator(&mut self) -> CurvatureOperator {
        let a: [[f64; 6]; 6] = core::array::from_fn(|_| self.normals());
        let m = core::array::from_fn(|i| core::array::from_fn(|j| 0.5 * (a[i][j] + a[j][i])));
        CurvatureOperator::new(m).expect("symmetrized")
    }

    /// A random operator with traceless Weyl blocks.
    pub fn strict_operator(&mut self) -> CurvatureOperator {
        let s = 12.0 * self.normal();
        let blocks = CurvatureBlocks::new(
            s,
            self.mat3(),
            self.traceless_symmetric3(),
            self.traceless_symmetric3(),
        );
        compose(&blocks).expect("symmetric blocks")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        for _ in 0..10 {
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
        }
        assert_ne!(Sampler::new(1).normal(), Sampler::new(2).normal());
    }

    #[test]
    fn unit_vectors_are_unit() {
        let mut s = Sampler::new(3);
        for _ in 0..100 {
            let u = s.unit_two_vector(Sign::Minus);
            assert!((u.norm() - 1.0).abs() < 1e-14);
            assert_eq!(u.half(Sign::Plus), [0.0; 3]);
        }
    }

    #[test]
    fn strict_operator_is_strict() {
        let mut s = Sampler::new(9);
        for _ in 0..10 {
            assert!(crate::curvature::decompose(&s.strict_operator()).strict);
        }
    }
}
