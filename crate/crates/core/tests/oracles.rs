//! Cross-checks against references computed outside the library: values
//! frozen from 40-digit arithmetic, a 2x2 complex matrix logarithm, and a
//! power series for the binary entropy.

use dps_infogeo::attack::{
    eve_info_closed_form, eve_info_gram_oracle, key_rate, optimize_mu, AttackParams,
    DEFAULT_MU_BRACKET,
};
use dps_infogeo::cloner::{
    informational_radius, optimal_cloner, phasecov_detection_radius, ClonerKind,
};
use dps_infogeo::divergence::quantum_relative_entropy;
use dps_infogeo::seb::{seb_bruteforce_oracle, seb_core_set, seb_improved, SiteSet};
use dps_infogeo::state::{bloch_to_density, radius_entropy, BlochVector};
use nalgebra::{Complex, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UCM_RADIUS: f64 = 0.349_977_578_351_645_8;
const PHASECOV_RADIUS: f64 = 0.399_123_963_307_143_9;
const ANTIPODAL_06_RADIUS: f64 = 0.278_071_905_112_637_63;
const PHASECOV_QUALITY_THRESHOLD: f64 = 0.441_884_765_380_789;
const PHASECOV_FIDELITY: f64 = 0.853_553_390_593_273_7;
const KEY_RATE_02_09: f64 = 0.157_591_184_604_622_6;
const EVE_INFO_02_09: f64 = 0.043_335_234_296_499_6;
const MU_STAR_TAU_09: f64 = 1.483_241_698_801_468_7;

type C2 = Matrix2<Complex<f64>>;

fn density(v: &BlochVector) -> C2 {
    let e = bloch_to_density(v).entries();
    C2::new(e[0][0], e[0][1], e[1][0], e[1][1])
}

/// `log2` of a positive definite Hermitian matrix through its eigenbasis.
fn log2_hermitian(m: &C2) -> C2 {
    let eig = m.symmetric_eigen();
    let logs = C2::from_diagonal(&eig.eigenvalues.map(|l| Complex::new(l.log2(), 0.0)));
    eig.eigenvectors * logs * eig.eigenvectors.adjoint()
}

/// `Tr[rho (log2 rho - log2 sigma)]`, dropping the null space of `rho`.
fn matrix_relative_entropy(rho: &BlochVector, sigma: &BlochVector) -> f64 {
    let r = density(rho);
    let eig = r.symmetric_eigen();
    let mut r_log_r = 0.0;
    for &l in eig.eigenvalues.iter() {
        if l > 1e-300 {
            r_log_r += l * l.log2();
        }
    }
    r_log_r - (r * log2_hermitian(&density(sigma))).trace().re
}

/// `H((1 - r)/2) = 1 - (1/ln 2) sum_k r^{2k} / (2k (2k - 1))`.
fn entropy_series(r: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = r * r;
    let mut k = 1.0;
    while power > 1e-30 {
        sum += power / (2.0 * k * (2.0 * k - 1.0));
        power *= r * r;
        k += 1.0;
    }
    1.0 - sum / std::f64::consts::LN_2
}

fn random_state(rng: &mut ChaCha8Rng, max_r: f64) -> BlochVector {
    let r = max_r * rng.gen::<f64>().cbrt();
    let cos_t: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    BlochVector::new(r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t).unwrap()
}

#[test]
fn optimal_cloner_radii() {
    let ucm = informational_radius(optimal_cloner(ClonerKind::Ucm).shrink_xy()).unwrap();
    let pc = informational_radius(optimal_cloner(ClonerKind::PhaseCovariant).shrink_xy()).unwrap();
    assert!((ucm - UCM_RADIUS).abs() < 1e-14);
    assert!((pc - PHASECOV_RADIUS).abs() < 1e-14);
    assert!((1.0 - entropy_series(2.0 / 3.0) - UCM_RADIUS).abs() < 1e-14);
    assert!((1.0 - entropy_series(0.5f64.sqrt()) - PHASECOV_RADIUS).abs() < 1e-14);
}

#[test]
fn phasecov_constants() {
    assert!((phasecov_detection_radius() - PHASECOV_QUALITY_THRESHOLD).abs() < 1e-15);
    assert!(
        (optimal_cloner(ClonerKind::PhaseCovariant).fidelity() - PHASECOV_FIDELITY).abs() < 1e-15
    );
}

#[test]
fn entropy_matches_series() {
    for i in 0..=180 {
        let r = i as f64 / 200.0;
        assert!(
            (radius_entropy(r).unwrap() - entropy_series(r)).abs() < 1e-13,
            "r = {r}"
        );
    }
}

#[test]
fn relative_entropy_matches_matrix_logarithm() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..2000 {
        let rho = random_state(&mut rng, 1.0);
        let sigma = random_state(&mut rng, 0.999);
        let closed = quantum_relative_entropy(&rho, &sigma).unwrap();
        let oracle = matrix_relative_entropy(&rho, &sigma);
        assert!(
            (closed - oracle).abs() < 1e-10,
            "{rho:?} {sigma:?}: {closed} vs {oracle}"
        );
    }
}

#[test]
fn antipodal_pair_ball() {
    let pair = SiteSet::new(vec![
        BlochVector::new(0.6, 0.0, 0.0).unwrap(),
        BlochVector::new(-0.6, 0.0, 0.0).unwrap(),
    ])
    .unwrap();
    let core = seb_core_set(&pair, 0.05).unwrap();
    assert!((core.radius - ANTIPODAL_06_RADIUS).abs() < 1e-9);
    let improved = seb_improved(&pair, 0.01).unwrap();
    assert!((improved.radius - ANTIPODAL_06_RADIUS).abs() < 1e-3);
    assert!(improved.center.radius() < 1e-2);
    let oracle = seb_bruteforce_oracle(&pair).unwrap();
    assert!((oracle.ball.radius - ANTIPODAL_06_RADIUS).abs() < 1e-9);
}

#[test]
fn beam_splitting_spot_values() {
    let p = AttackParams::new(0.2, 0.9, 1.0).unwrap();
    assert!((eve_info_closed_form(&p) - EVE_INFO_02_09).abs() < 1e-12);
    assert!((eve_info_gram_oracle(&p).unwrap().i_e - EVE_INFO_02_09).abs() < 1e-10);
    assert!((key_rate(&p) - KEY_RATE_02_09).abs() < 1e-12);
    let opt = optimize_mu(0.9, 1.0, DEFAULT_MU_BRACKET).unwrap();
    assert!((opt.mu_star - MU_STAR_TAU_09).abs() < 1e-6);
    assert!(!opt.saturated);
}
