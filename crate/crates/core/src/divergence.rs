//! Quantum relative entropy between qubit states, and the Bregman structure
//! generated by the negative von Neumann entropy `F = -S`.
//!
//! Everything is radial: `F` depends on the Bloch radius only, so its gradient
//! points along the state and has magnitude `atanh(r) / ln 2`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{radius_entropy_unchecked, von_neumann_entropy, BlochVector};

/// Reference states with radius at or beyond this are treated as pure.
pub const FULL_RANK_LIMIT: f64 = 1.0 - 1e-9;

/// Image of a Bloch vector under the generator gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientVector {
    pub gx: f64,
    pub gy: f64,
    pub gz: f64,
}

impl GradientVector {
    pub const ZERO: GradientVector = GradientVector {
        gx: 0.0,
        gy: 0.0,
        gz: 0.0,
    };

    pub fn norm(&self) -> f64 {
        (self.gx * self.gx + self.gy * self.gy + self.gz * self.gz).sqrt()
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.gx, self.gy, self.gz]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        GradientVector {
            gx: a[0],
            gy: a[1],
            gz: a[2],
        }
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &GradientVector, t: f64) -> GradientVector {
        GradientVector {
            gx: (1.0 - t) * self.gx + t * other.gx,
            gy: (1.0 - t) * self.gy + t * other.gy,
            gz: (1.0 - t) * self.gz + t * other.gz,
        }
    }
}

/// `atanh(r) / r`, continuous at zero.
fn atanh_over_r(r: f64) -> f64 {
    if r < 1e-8 {
        1.0 + r * r / 3.0
    } else {
        r.atanh() / r
    }
}

/// `Tr(rho log2 rho)` written as `1/2 log2((1 - r^2)/4) + (r/2) log2((1 + r)/(1 - r))`.
fn neg_entropy_closed_form(r: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    0.5 * ((-r * r).ln_1p() / LN_2 - 2.0) + r * r.atanh() / LN_2
}

fn check_reference(sigma: &BlochVector) -> Result<f64> {
    let r = sigma.radius();
    if r >= FULL_RANK_LIMIT {
        return Err(Error::SingularReference { radius: r });
    }
    Ok(r)
}

/// Quantum relative entropy `D(rho || sigma) = Tr[rho (log2 rho - log2 sigma)]`
/// in the closed Bloch-coordinate form.
///
/// The second argument must be full rank (`|sigma| < 1 - 1e-9`).
pub fn quantum_relative_entropy(rho: &BlochVector, sigma: &BlochVector) -> Result<f64> {
    let r_sigma = check_reference(sigma)?;
    Ok(relative_entropy_unchecked(rho, sigma, r_sigma))
}

pub(crate) fn relative_entropy_unchecked(
    rho: &BlochVector,
    sigma: &BlochVector,
    r_sigma: f64,
) -> f64 {
    let own = neg_entropy_closed_form(rho.radius());
    let reference = 0.5 * ((-r_sigma * r_sigma).ln_1p() / LN_2 - 2.0);
    let cross = rho.dot(sigma) * atanh_over_r(r_sigma) / LN_2;
    own - reference - cross
}

/// Generator `F(v) = -S(v)` in bits; ranges over `[-1, 0]`.
pub fn bregman_generator(v: &BlochVector) -> f64 {
    -von_neumann_entropy(v)
}

/// `grad F(v) = (atanh(r) / (r ln 2)) v`; diverges at pure states.
pub fn generator_gradient(v: &BlochVector) -> Result<GradientVector> {
    let r = v.radius();
    if r >= 1.0 {
        return Err(Error::SingularGradient { radius: r });
    }
    let s = atanh_over_r(r) / LN_2;
    Ok(GradientVector {
        gx: s * v.x(),
        gy: s * v.y(),
        gz: s * v.z(),
    })
}

/// Inverse gradient map: radius `tanh(|g| ln 2)`, i.e. `(4^m - 1)/(4^m + 1)`
/// with `m = |g|`, along the direction of `g`.
pub fn generator_gradient_inverse(g: &GradientVector) -> BlochVector {
    let m = g.norm();
    if m == 0.0 {
        return BlochVector::ORIGIN;
    }
    let r = (m * LN_2).tanh();
    let s = r / m;
    BlochVector::from_raw(s * g.gx, s * g.gy, s * g.gz)
}

/// `D_F(rho, sigma) = F(rho) - F(sigma) - <rho - sigma, grad F(sigma)>` with
/// the Bloch dot product. Agrees with [`quantum_relative_entropy`].
pub fn bregman_divergence(rho: &BlochVector, sigma: &BlochVector) -> Result<f64> {
    check_reference(sigma)?;
    let grad = generator_gradient(sigma)?;
    let diff = *rho - *sigma;
    let inner = diff.x() * grad.gx + diff.y() * grad.gy + diff.z() * grad.gz;
    Ok(bregman_generator(rho) - bregman_generator(sigma) - inner)
}

/// Divergence from any state to the maximally mixed state: `1 - S(rho)`.
pub fn divergence_to_origin(rho: &BlochVector) -> f64 {
    1.0 - radius_entropy_unchecked(rho.radius())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z).unwrap()
    }

    #[test]
    fn relative_entropy_examples() {
        let s = v(0.3, 0.1, 0.2);
        assert!(quantum_relative_entropy(&s, &s).unwrap().abs() < 1e-15);
        for pure in [v(1.0, 0.0, 0.0), v(0.0, -1.0, 0.0), v(0.6, 0.0, 0.8)] {
            let d = quantum_relative_entropy(&pure, &BlochVector::ORIGIN).unwrap();
            assert!((d - 1.0).abs() < 1e-15, "{d}");
        }
    }

    #[test]
    fn pure_reference_is_rejected() {
        let pure = v(0.0, 0.0, 1.0);
        assert!(matches!(
            quantum_relative_entropy(&BlochVector::ORIGIN, &pure),
            Err(Error::SingularReference { .. })
        ));
        assert!(bregman_divergence(&BlochVector::ORIGIN, &pure).is_err());
        assert!(matches!(
            generator_gradient(&pure),
            Err(Error::SingularGradient { .. })
        ));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(bregman_generator(&BlochVector::ORIGIN), -1.0);
        assert_eq!(bregman_generator(&v(0.0, 0.0, 1.0)), 0.0);
        // -H(0.75)
        assert!((bregman_generator(&v(0.5, 0.0, 0.0)) + 0.811_278_124_459_132_9).abs() < 1e-14);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(
            generator_gradient(&BlochVector::ORIGIN).unwrap(),
            GradientVector::ZERO
        );
        let g = generator_gradient(&v(0.6, 0.0, 0.0)).unwrap();
        assert!((g.gx - 1.0).abs() < 1e-14 && g.gy == 0.0 && g.gz == 0.0);
        let back = generator_gradient_inverse(&GradientVector {
            gx: 1.0,
            gy: 0.0,
            gz: 0.0,
        });
        assert!((back.x() - 0.6).abs() < 1e-15);
        assert_eq!(
            generator_gradient_inverse(&GradientVector::ZERO),
            BlochVector::ORIGIN
        );

        let s = v(-0.2, 0.4, 0.5);
        let g = generator_gradient(&s).unwrap();
        let cos = (g.gx * s.x() + g.gy * s.y() + g.gz * s.z()) / (g.norm() * s.radius());
        assert!((cos - 1.0).abs() < 1e-14);
    }

    #[test]
    fn divergence_to_origin_matches_entropy_gap() {
        let s = v(0.1, -0.5, 0.3);
        let expected = 1.0 - von_neumann_entropy(&s);
        assert_eq!(divergence_to_origin(&s), expected);
        assert!((bregman_divergence(&s, &BlochVector::ORIGIN).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn divergence_is_asymmetric() {
        let a = v(0.9, 0.0, 0.0);
        let b = v(0.0, 0.1, 0.0);
        let ab = quantum_relative_entropy(&a, &b).unwrap();
        let ba = quantum_relative_entropy(&b, &a).unwrap();
        assert!((ab - ba).abs() > 0.01, "{ab} vs {ba}");
    }

    #[test]
    fn maximally_mixed_limit() {
        let rho = v(0.3, -0.4, 0.5);
        let at_origin = quantum_relative_entropy(&rho, &BlochVector::ORIGIN).unwrap();
        let near = quantum_relative_entropy(&rho, &v(1e-6, 0.0, 0.0)).unwrap();
        assert!((at_origin - near).abs() < 1e-5);
    }
}
