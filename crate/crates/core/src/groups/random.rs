//! Seeded sampling of group elements.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::heisenberg::HeisenbergElement;
use super::jacobi::JacobiElement;
use super::star::JacobiStarElement;
use super::symplectic::SpElement;
use super::theta::theta_map;
use crate::cmatrix::RMatrix;
use crate::scalar::Real;

/// Generator stream for sample `index` under `master`. Streams are disjoint,
/// so samples never share random numbers and can be drawn in any order.
pub fn sample_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

pub(crate) fn uniform_matrix<T: Real>(rng: &mut impl Rng, rows: usize, cols: usize, half_width: f64) -> RMatrix<T> {
    RMatrix::from_fn(rows, cols, |_, _| T::lit(rng.gen_range(-half_width..half_width)))
}

pub(crate) fn uniform_symmetric<T: Real>(rng: &mut impl Rng, n: usize, half_width: f64) -> RMatrix<T> {
    let mut s = RMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = T::lit(rng.gen_range(-half_width..half_width));
            s[(i, j)] = x;
            s[(j, i)] = x;
        }
    }
    s
}

/// Product of 4–8 generators drawn from upper-unipotent `[[I,B],[0,I]]`
/// (B symmetric), block-diagonal `[[A,0],[0,ᵗA⁻¹]]` (A = I + 0.3·U(−1,1))
/// and `J_n`.
pub fn random_sp_with<T: Real>(rng: &mut impl Rng, n: usize) -> SpElement<T> {
    let count = rng.gen_range(4..=8);
    let mut acc = SpElement::identity(n);
    for _ in 0..count {
        let gen = match rng.gen_range(0..3) {
            0 => SpElement {
                a: RMatrix::identity(n),
                b: uniform_symmetric(rng, n, 1.0),
                c: RMatrix::zeros(n, n),
                d: RMatrix::identity(n),
            },
            1 => {
                let a = &RMatrix::identity(n) + &uniform_matrix::<T>(rng, n, n, 1.0).scale(T::lit(0.3));
                // ‖0.3·U(−1,1)‖₂ ≤ 0.9 for n ≤ 3, so A is invertible.
                let d = a.inverse().expect("A = I + small is invertible").transpose();
                SpElement {
                    a,
                    b: RMatrix::zeros(n, n),
                    c: RMatrix::zeros(n, n),
                    d,
                }
            }
            _ => SpElement::j(n),
        };
        acc = acc.mul(&gen).expect("same degree");
    }
    acc
}

/// `(λ, μ; S − μᵗλ)` with λ, μ, S uniform on (−1, 1), S symmetric.
pub fn random_heisenberg_with<T: Real>(rng: &mut impl Rng, n: usize, m: usize) -> HeisenbergElement<T> {
    let lambda = uniform_matrix(rng, m, n, 1.0);
    let mu = uniform_matrix(rng, m, n, 1.0);
    let s = uniform_symmetric(rng, m, 1.0);
    let kappa = &s - &(&mu * &lambda.transpose());
    HeisenbergElement { lambda, mu, kappa }
}

pub fn random_jacobi_with<T: Real>(rng: &mut impl Rng, n: usize, m: usize) -> JacobiElement<T> {
    let sp = random_sp_with(rng, n);
    let h = random_heisenberg_with(rng, n, m);
    JacobiElement { sp, h }
}

pub fn random_jacobi<T: Real>(n: usize, m: usize, seed: u64) -> JacobiElement<T> {
    random_jacobi_with(&mut ChaCha8Rng::seed_from_u64(seed), n, m)
}

/// Θ of a random real-model element.
pub fn random_jacobi_star_with<T: Real>(rng: &mut impl Rng, n: usize, m: usize) -> JacobiStarElement<T> {
    theta_map(&random_jacobi_with(rng, n, m))
}

pub fn random_jacobi_star<T: Real>(n: usize, m: usize, seed: u64) -> JacobiStarElement<T> {
    theta_map(&random_jacobi(n, m, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = random_jacobi::<f64>(2, 2, 9);
        assert_eq!(a, random_jacobi::<f64>(2, 2, 9));
        let b = random_jacobi::<f64>(2, 2, 10);
        assert!(a.dist(&b) > 1e-3);
    }

    #[test]
    fn samples_are_valid() {
        for seed in 0..200 {
            for (n, m) in [(1, 1), (2, 1), (3, 2)] {
                random_jacobi::<f64>(n, m, seed).validate().unwrap();
                random_jacobi_star::<f64>(n, m, seed).validate().unwrap();
            }
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = sample_rng(1, 0);
        let mut b = sample_rng(1, 1);
        assert_ne!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn single_precision_samples_are_valid() {
        for seed in 0..50 {
            random_jacobi::<f32>(2, 1, seed).validate().unwrap();
        }
    }
}
