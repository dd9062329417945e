//! The Siegel–Jacobi space and disk, the group actions on them, and the
//! partial Cayley transform between the two models.

mod actions;
mod cayley;
mod chart;
mod points;

pub use actions::{act_disk, act_disk_n, act_siegel, act_upper, hc_pplus_component, SYMMETRIZE_DEFECT};
pub use cayley::{
    cayley, cayley_differential, cayley_differential_inv, cayley_imaginary_parts, cayley_inv,
    check_cayley_compat,
};
pub use chart::{Chart, ORDERING_TAG};
pub use points::{DiskPoint, Model, Point, Tangent, UpperPoint, DOMAIN_MARGIN};

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::CMatrix;
use crate::scalar::Real;

/// `W = 0.45·S / max(1, ‖S‖₂)` with S complex symmetric, entries
/// `U(−1,1) + iU(−1,1)`; η entries `U(−2,2) + iU(−2,2)`. The spectral margin
/// of `I − W̄W` is at least `1 − 0.45² ≈ 0.80`.
pub fn random_disk_point_with<T: Real>(rng: &mut impl Rng, n: usize, m: usize) -> DiskPoint<T> {
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)));
            s[(i, j)] = z;
            s[(j, i)] = z;
        }
    }
    let norm = s.spectral_norm().max(T::one());
    let w = s.scale_re(T::lit(0.45) / norm);
    let eta = CMatrix::from_fn(m, n, |_, _| {
        Complex::new(T::lit(rng.gen_range(-2.0..2.0)), T::lit(rng.gen_range(-2.0..2.0)))
    });
    DiskPoint { w, eta }
}

/// `Φ` of a random disk point.
pub fn random_upper_point_with<T: Real>(rng: &mut impl Rng, n: usize, m: usize) -> UpperPoint<T> {
    cayley(&random_disk_point_with(rng, n, m)).expect("disk samples stay away from W = I")
}

pub fn random_point<T: Real>(model: Model, n: usize, m: usize, seed: u64) -> Point<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match model {
        Model::Disk => Point::Disk(random_disk_point_with(&mut rng, n, m)),
        Model::Upper => Point::Upper(random_upper_point_with(&mut rng, n, m)),
    }
}

/// A random tangent with entries in the unit square.
pub fn random_tangent_with<T: Real>(rng: &mut impl Rng, model: Model, n: usize, m: usize) -> Tangent<T> {
    let chart = Chart::new(n, m);
    let coords: Vec<T> = (0..chart.dim()).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
    chart.tangent_from_coords(model, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_points_are_valid_with_margin() {
        for seed in 0..1000 {
            let n = 1 + (seed as usize % 3);
            let p = random_point::<f64>(Model::Disk, n, 2, seed);
            assert!(p.as_disk().unwrap().margin() >= 0.1);
            Point::from_parts(Model::Disk, p.parts().0.clone(), p.parts().1.clone()).unwrap();
            let q = random_point::<f64>(Model::Upper, n, 2, seed);
            q.as_upper().unwrap().validate().unwrap();
        }
    }

    #[test]
    fn random_points_are_deterministic() {
        assert_eq!(random_point::<f64>(Model::Upper, 2, 1, 4), random_point::<f64>(Model::Upper, 2, 1, 4));
        assert_ne!(random_point::<f64>(Model::Upper, 2, 1, 4), random_point::<f64>(Model::Upper, 2, 1, 5));
    }
}
