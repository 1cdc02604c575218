use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::state::StateVector;
use crate::error::Result;

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_normal(rng: &mut impl RngCore) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl RngCore) -> DMatrix<Complex64> {
    // filled column by column so the draw order is fixed
    let data: Vec<Complex64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    DMatrix::from_vec(rows, cols, data)
}

/// Haar-random pure state.
pub fn random_state(num_qubits: usize, rng: &mut impl RngCore) -> Result<StateVector> {
    StateVector::normalized((0..1usize << num_qubits).map(|_| complex_normal(rng)).collect())
}

/// First `cols` columns of a Haar-random `dim x dim` unitary: QR of a
/// Ginibre matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_isometry(dim: usize, cols: usize, rng: &mut impl RngCore) -> DMatrix<Complex64> {
    let qr = ginibre(dim, cols, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols.min(dim) {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).scale_mut_complex(phase);
    }
    q
}

pub fn haar_unitary(dim: usize, rng: &mut impl RngCore) -> DMatrix<Complex64> {
    haar_isometry(dim, dim, rng)
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: Complex64);
}

impl<S> ScaleComplex for nalgebra::Matrix<Complex64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<Complex64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, s: Complex64) {
        self.iter_mut().for_each(|z| *z *= s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::gate::unitarity_deviation;
    use crate::statevec::rng_from_seed;

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_unitary(16, &mut rng_from_seed(3));
        assert!(unitarity_deviation(&u) < 1e-12);
    }

    #[test]
    fn isometry_matches_unitary_prefix() {
        let full = haar_unitary(8, &mut rng_from_seed(11));
        let mut rng = rng_from_seed(11);
        let part = haar_isometry(8, 8, &mut rng);
        assert!((full - part).camax() < 1e-14);
        let iso = haar_isometry(32, 2, &mut rng_from_seed(4));
        let gram = iso.adjoint() * &iso;
        assert!((gram - DMatrix::identity(2, 2)).camax() < 1e-12);
    }

    #[test]
    fn random_state_is_normalized() {
        let s = random_state(5, &mut rng_from_seed(1)).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
