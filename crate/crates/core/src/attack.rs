//! Collective beam-splitting attack on DPS QKD.
//!
//! Eve taps the fraction `1 - tau` of every pulse. The two pulses that carry
//! one bit leave her a product of two weak coherent states whose pairwise
//! overlap is `gamma^2` whenever their phases differ, with
//! `gamma = exp(-mu (1 - tau))`.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::state::{binary_entropy_unchecked, radius_entropy_unchecked, BlochVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttackParams {
    mu: f64,
    tau: f64,
    nu: f64,
}

impl AttackParams {
    /// `mu >= 0`, `tau` in `[0, 1]`, `nu > 0`.
    pub fn new(mu: f64, tau: f64, nu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(domain("mean photon number", mu));
        }
        if !(0.0..=1.0).contains(&tau) {
            return Err(domain("transmittance", tau));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(domain("repetition rate", nu));
        }
        Ok(AttackParams { mu, tau, nu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    fn tapped(&self) -> f64 {
        self.mu * (1.0 - self.tau)
    }
}

/// `gamma = exp(-mu (1 - tau))`.
pub fn gamma_param(p: &AttackParams) -> f64 {
    (-p.tapped()).exp()
}

/// `I_E = 2 H((1 - gamma^2)/2) - H((1 - gamma^4)/2)`, with the small
/// arguments formed by `expm1` so that `gamma` near one keeps full precision.
pub fn eve_info_closed_form(p: &AttackParams) -> f64 {
    let x = p.tapped();
    let one_minus_g2 = -(-2.0 * x).exp_m1();
    let one_minus_g4 = -(-4.0 * x).exp_m1();
    let info = 2.0 * binary_entropy_unchecked(one_minus_g2 / 2.0)
        - binary_entropy_unchecked(one_minus_g4 / 2.0);
    info.clamp(0.0, 1.0)
}

/// Entropies obtained by diagonalizing in the span of Eve's four states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramEntropies {
    pub s_e: f64,
    pub s_e0: f64,
    pub s_e1: f64,
    pub i_e: f64,
}

/// Phase pairs of Eve's two-mode states. Indices 0 and 1 carry bit 0
/// (equal phases), indices 2 and 3 carry bit 1.
const PHASE_PAIRS: [(bool, bool); 4] = [(true, true), (false, false), (true, false), (false, true)];

const PSD_TOL: f64 = 1e-12;

fn gram_matrix(gamma_sq: f64) -> Matrix4<f64> {
    let single = |a: bool, b: bool| if a == b { 1.0 } else { gamma_sq };
    Matrix4::from_fn(|i, j| {
        let (a1, a2) = PHASE_PAIRS[i];
        let (b1, b2) = PHASE_PAIRS[j];
        single(a1, b1) * single(a2, b2)
    })
}

/// Von Neumann entropy of `sum_i p_i |psi_i><psi_i|` from the Gram matrix of
/// the `|psi_i>`: its nonzero spectrum is that of `sqrt(P) G sqrt(P)`.
fn mixture_entropy(gram: &Matrix4<f64>, weights: [f64; 4]) -> Result<f64> {
    let sqrt_p: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let m = Matrix4::from_fn(|i, j| sqrt_p[i] * gram[(i, j)] * sqrt_p[j]);
    let eig = SymmetricEigen::new(m);
    let mut entropy = 0.0;
    for &lambda in eig.eigenvalues.iter() {
        if lambda < -PSD_TOL {
            return Err(Error::NumericalConsistency(format!(
                "Gram matrix has eigenvalue {lambda}"
            )));
        }
        if lambda > 0.0 {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy)
}

/// `S(rho_E) - S(rho_E|0)/2 - S(rho_E|1)/2` computed by eigenvalues.
pub fn eve_info_gram_oracle(p: &AttackParams) -> Result<GramEntropies> {
    let gram = gram_matrix((-2.0 * p.tapped()).exp());
    let s_e = mixture_entropy(&gram, [0.25; 4])?;
    let s_e0 = mixture_entropy(&gram, [0.5, 0.5, 0.0, 0.0])?;
    let s_e1 = mixture_entropy(&gram, [0.0, 0.0, 0.5, 0.5])?;
    Ok(GramEntropies {
        s_e,
        s_e0,
        s_e1,
        i_e: s_e - 0.5 * s_e0 - 0.5 * s_e1,
    })
}

/// Probability-weighted qubit states; weights are non-negative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitEnsemble {
    members: Vec<(f64, BlochVector)>,
}

impl QubitEnsemble {
    pub fn new(members: Vec<(f64, BlochVector)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut total = 0.0;
        for &(p, _) in &members {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(domain("probability", p));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain("probability total", total));
        }
        Ok(QubitEnsemble { members })
    }

    pub fn members(&self) -> &[(f64, BlochVector)] {
        &self.members
    }

    pub fn average_state(&self) -> BlochVector {
        let mut m = [0.0; 3];
        for (p, v) in &self.members {
            for (slot, c) in m.iter_mut().zip(v.to_array()) {
                *slot += p * c;
            }
        }
        BlochVector::new(m[0], m[1], m[2]).expect("convex combination stays in the ball")
    }
}

/// `chi = S(sum p_a rho_a) - sum p_a S(rho_a)`.
pub fn holevo_quantity(e: &QubitEnsemble) -> f64 {
    let mixed = radius_entropy_unchecked(e.average_state().radius());
    let average: f64 = e
        .members
        .iter()
        .map(|(p, v)| p * radius_entropy_unchecked(v.radius()))
        .sum();
    (mixed - average).max(0.0)
}

fn shannon(probs: impl Iterator<Item = f64>) -> f64 {
    probs.filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

fn check_joint(joint: &[Vec<f64>]) -> Result<()> {
    let cols = joint.first().map_or(0, |r| r.len());
    if cols == 0 || joint.iter().any(|r| r.len() != cols) {
        return Err(Error::Degenerate(
            "joint table must be a non-empty rectangle".into(),
        ));
    }
    let mut total = 0.0;
    for &p in joint.iter().flatten() {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(domain("joint probability", p));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(domain("joint probability total", total));
    }
    Ok(())
}

fn marginals(joint: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let rows = joint.iter().map(|r| r.iter().sum()).collect();
    let cols = (0..joint[0].len())
        .map(|j| joint.iter().map(|r| r[j]).sum())
        .collect();
    (rows, cols)
}

/// `I(X:Y) = H(X) + H(Y) - H(XY)` for a joint table indexed `[x][y]`.
pub fn mutual_information_classical(joint: &[Vec<f64>]) -> Result<f64> {
    check_joint(joint)?;
    let (px, py) = marginals(joint);
    let hxy = shannon(joint.iter().flatten().copied());
    Ok(shannon(px.into_iter()) + shannon(py.into_iter()) - hxy)
}

/// `H(X|Y) = -sum p(x, y) log2 p(x|y)`.
pub fn conditional_entropy(joint: &[Vec<f64>]) -> Result<f64> {
    check_joint(joint)?;
    let (_, py) = marginals(joint);
    let mut h = 0.0;
    for row in joint {
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 {
                h -= p * (p / py[j]).log2();
            }
        }
    }
    Ok(h)
}

pub fn shannon_entropy(probs: &[f64]) -> f64 {
    shannon(probs.iter().copied())
}

/// `K = nu (1 - e^{-mu tau}) (1 - I_E)` in bits per second.
pub fn key_rate(p: &AttackParams) -> f64 {
    let detection = -(-p.mu * p.tau).exp_m1();
    (p.nu * detection * (1.0 - eve_info_closed_form(p))).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuOptimum {
    pub mu_star: f64,
    pub k_star: f64,
    /// The maximum sits on the upper bracket edge.
    pub saturated: bool,
}

pub const DEFAULT_MU_BRACKET: (f64, f64) = (1e-4, 5.0);

/// Golden-section maximization of [`key_rate`] over `mu` in `bracket`.
pub fn optimize_mu(tau: f64, nu: f64, bracket: (f64, f64)) -> Result<MuOptimum> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(domain("transmittance", tau));
    }
    let (lo, hi) = bracket;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(domain("bracket width", hi - lo));
    }
    let rate = |mu: f64| key_rate(&AttackParams { mu, tau, nu });
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (rate(c), rate(d));
    while b - a > 1e-11 * (1.0 + b.abs()) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = rate(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = rate(d);
        }
    }
    let mut mu_star = 0.5 * (a + b);
    let mut k_star = rate(mu_star);
    for edge in [lo, hi] {
        let k = rate(edge);
        if k > k_star {
            mu_star = edge;
            k_star = k;
        }
    }
    let saturated = hi - mu_star <= 1e-6 * (1.0 + hi);
    Ok(MuOptimum {
        mu_star,
        k_star,
        saturated,
    })
}
