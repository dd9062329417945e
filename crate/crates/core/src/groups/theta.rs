//! The isomorphism Θ between the real-model and disk-model Jacobi groups,
//! realized as conjugation by `T_* = (1/√2)[[I, I], [iI, −iI]]`.

use num_complex::Complex;

use super::heisenberg::HeisenbergElement;
use super::jacobi::JacobiElement;
use super::star::{GStarElement, JacobiStarElement};
use super::symplectic::SpElement;
use crate::cmatrix::CMatrix;
use crate::scalar::{imag_unit, Real};

/// `T_*` of size 2k×2k.
pub fn t_star<T: Real>(k: usize) -> CMatrix<T> {
    let s = T::FRAC_1_SQRT_2();
    let one = Complex::new(s, T::zero());
    let i = Complex::new(T::zero(), s);
    CMatrix::from_fn(2 * k, 2 * k, |r, c| {
        if r % k != c % k {
            return Complex::new(T::zero(), T::zero());
        }
        match (r < k, c < k) {
            (true, _) => one,
            (false, true) => i,
            (false, false) => -i,
        }
    })
}

/// `T_*⁻¹ = (1/√2)[[I, −iI], [I, iI]]`.
pub fn t_star_inv<T: Real>(k: usize) -> CMatrix<T> {
    let s = T::FRAC_1_SQRT_2();
    let one = Complex::new(s, T::zero());
    let i = Complex::new(T::zero(), s);
    CMatrix::from_fn(2 * k, 2 * k, |r, c| {
        if r % k != c % k {
            return Complex::new(T::zero(), T::zero());
        }
        match (r < k, c < k) {
            (_, true) => one,
            (true, false) => -i,
            (false, false) => i,
        }
    })
}

/// Θ(M, (λ, μ; κ)) = (P, Q, ξ = ½(λ + iμ), −κ/2) with
/// `P = ½{(A+D) + i(B−C)}` and `Q = ½{(A−D) − i(B+C)}`.
pub fn theta_map<T: Real>(g: &JacobiElement<T>) -> JacobiStarElement<T> {
    let half = T::lit(0.5);
    let i = imag_unit::<T>();
    let SpElement { a, b, c, d } = &g.sp;
    let p = &(a + d).to_complex() + &(b - c).to_complex().scale(i);
    let q = &(a - d).to_complex() - &(b + c).to_complex().scale(i);
    let xi = &g.h.lambda.to_complex() + &g.h.mu.to_complex().scale(i);
    JacobiStarElement {
        g: GStarElement {
            p: p.scale_re(half),
            q: q.scale_re(half),
        },
        xi: xi.scale_re(half),
        kappa: g.h.kappa.scale(-half),
    }
}

/// Inverse of [`theta_map`].
pub fn theta_inv<T: Real>(g: &JacobiStarElement<T>) -> JacobiElement<T> {
    let two = T::lit(2.0);
    let sum = &g.g.p + &g.g.q;
    let diff = &g.g.p - &g.g.q;
    JacobiElement {
        sp: SpElement {
            a: sum.re(),
            b: diff.im(),
            c: -sum.im(),
            d: diff.re(),
        },
        h: HeisenbergElement {
            lambda: g.xi.re().scale(two),
            mu: g.xi.im().scale(two),
            kappa: g.kappa.scale(-two),
        },
    }
}

/// `T_*⁻¹·E·T_*` for the Sp(m+n, ℝ) image `E` of `g`.
pub fn conjugate_embedding<T: Real>(g: &JacobiElement<T>) -> CMatrix<T> {
    let (n, m) = g.dims();
    let e = g.embed_sp().to_complex();
    &(&t_star_inv::<T>(n + m) * &e) * &t_star::<T>(n + m)
}

/// `‖T_*⁻¹ E T_* − (matrix form of Θ(g))‖_max`.
pub fn theta_conjugation_residual<T: Real>(g: &JacobiElement<T>) -> T {
    conjugate_embedding(g).dist(&theta_map(g).embedded())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_star_inverse_pair() {
        for k in 1..4 {
            let prod = &t_star::<f64>(k) * &t_star_inv::<f64>(k);
            assert!(prod.dist(&CMatrix::identity(2 * k)) < 1e-15);
        }
    }

    #[test]
    fn theta_of_identity_and_j() {
        let e = theta_map(&JacobiElement::<f64>::identity(2, 1));
        assert_eq!(e, JacobiStarElement::identity(2, 1));
        let j = JacobiElement {
            sp: SpElement::<f64>::j(2),
            h: HeisenbergElement::identity(2, 1),
        };
        let tj = theta_map(&j);
        assert!(tj.g.p.dist(&CMatrix::identity(2).scale(imag_unit())) < 1e-15);
        assert_eq!(tj.g.q.max_abs(), 0.0);
        assert_eq!(tj.xi.max_abs(), 0.0);
        assert!(theta_conjugation_residual(&j) < 1e-15);
    }

    #[test]
    fn theta_inverse_roundtrip_on_identity() {
        let g = JacobiElement::<f64>::identity(1, 2);
        assert_eq!(theta_inv(&theta_map(&g)), g);
    }
}
