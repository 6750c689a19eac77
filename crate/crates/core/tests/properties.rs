use dps_infogeo::attack::{eve_info_closed_form, eve_info_gram_oracle, key_rate, AttackParams};
use dps_infogeo::cloner::{
    apply_cloner, informational_radius, phasecov_detection, ucm_detection, ClonerKind, ClonerSpec,
};
use dps_infogeo::divergence::{
    bregman_divergence, generator_gradient, generator_gradient_inverse, quantum_relative_entropy,
};
use dps_infogeo::geometry::{
    laguerre_bisector, laguerre_distance, lift_site, regular_triangulation, WeightedSite,
};
use dps_infogeo::protocol::{b92_signal_states, decode_dps, encode_dps, LogicalBits};
use dps_infogeo::seb::{farthest_site, seb_core_set, seb_improved, SiteSet};
use dps_infogeo::state::{
    binary_entropy, bloch_to_density, density_to_bloch, parse_state_set, write_state_set,
    BlochVector,
};
use proptest::prelude::*;

fn bloch(max_r: f64) -> impl Strategy<Value = BlochVector> {
    (0.0..max_r, -1.0f64..1.0, 0.0..std::f64::consts::TAU).prop_map(|(r, cos_t, phi)| {
        let sin_t = (1.0 - cos_t * cos_t).sqrt();
        BlochVector::new(r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t).unwrap()
    })
}

fn sites(
    max_r: f64,
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<BlochVector>> {
    prop::collection::vec(bloch(max_r), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bloch_density_round_trip(v in bloch(1.0)) {
        let back = density_to_bloch(&bloch_to_density(&v)).unwrap();
        prop_assert!(v.distance(&back) <= 1e-12);
        let (hi, lo) = bloch_to_density(&v).eigenvalues();
        prop_assert!((hi - (1.0 + v.radius()) / 2.0).abs() <= 1e-12);
        prop_assert!((lo - (1.0 - v.radius()) / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn binary_entropy_is_symmetric(p in 0.0f64..=1.0) {
        prop_assert_eq!(binary_entropy(p).unwrap(), binary_entropy(1.0 - p).unwrap());
    }

    #[test]
    fn state_file_round_trip(vs in sites(1.0, 1..=8)) {
        let parsed = parse_state_set(&write_state_set(&vs)).unwrap();
        let back: Vec<BlochVector> = parsed.iter().map(|e| e.state).collect();
        prop_assert_eq!(back, vs);
    }

    #[test]
    fn divergence_is_nonnegative_and_forms_agree(rho in bloch(1.0), sigma in bloch(0.999)) {
        let closed = quantum_relative_entropy(&rho, &sigma).unwrap();
        let bregman = bregman_divergence(&rho, &sigma).unwrap();
        prop_assert!(closed >= -1e-12);
        prop_assert!((closed - bregman).abs() <= 1e-9);
    }

    #[test]
    fn gradient_inverse_round_trip(v in bloch(0.999)) {
        let back = generator_gradient_inverse(&generator_gradient(&v).unwrap());
        prop_assert!(v.distance(&back) <= 1e-10);
    }

    #[test]
    fn dps_encode_decode_round_trip(bits in prop::collection::vec(any::<bool>(), 1..=64), mu in 0.01f64..2.0) {
        let logical = LogicalBits::new(bits).unwrap();
        let seq = encode_dps(&logical, mu).unwrap();
        prop_assert_eq!(seq.len(), logical.len() + 1);
        prop_assert_eq!(decode_dps(&seq).unwrap(), logical);
    }

    #[test]
    fn b92_states_are_pure_mirror_images(mu in 0.0f64..5.0) {
        let (plus, minus) = b92_signal_states(mu).unwrap();
        prop_assert!((plus.radius() - 1.0).abs() <= 1e-12);
        prop_assert!((minus.radius() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(plus.x(), -minus.x());
        prop_assert_eq!(plus.z(), minus.z());
    }

    #[test]
    fn cloners_contract(v in bloch(1.0), eta in 1e-6f64..=1.0, kind_ucm in any::<bool>()) {
        let spec = if kind_ucm {
            ClonerSpec::new(ClonerKind::Ucm, eta, eta).unwrap()
        } else {
            ClonerSpec::new(ClonerKind::PhaseCovariant, eta, eta * eta).unwrap()
        };
        prop_assert!(apply_cloner(&spec, &v).radius() <= v.radius() + 1e-15);
    }

    #[test]
    fn eve_info_matches_gram_oracle(mu in 1e-3f64..3.0, tau in 0.0f64..=1.0) {
        let p = AttackParams::new(mu, tau, 1.0).unwrap();
        let closed = eve_info_closed_form(&p);
        prop_assert!((0.0..=1.0).contains(&closed));
        prop_assert!((closed - eve_info_gram_oracle(&p).unwrap().i_e).abs() <= 1e-9);
        prop_assert!(key_rate(&p) >= 0.0);
    }

    #[test]
    fn enclosing_balls_enclose(vs in sites(0.9, 1..=8), eps in 0.02f64..0.3) {
        let set = SiteSet::new(vs).unwrap();
        for ball in [seb_core_set(&set, eps).unwrap(), seb_improved(&set, eps).unwrap()] {
            let far = farthest_site(&ball.center, &set).unwrap();
            prop_assert!(far.distance <= ball.radius + 1e-9);
        }
    }

    #[test]
    fn solvers_are_deterministic(vs in sites(0.9, 1..=6)) {
        let set = SiteSet::new(vs).unwrap();
        prop_assert_eq!(seb_core_set(&set, 0.1).unwrap(), seb_core_set(&set, 0.1).unwrap());
        prop_assert_eq!(seb_improved(&set, 0.1).unwrap(), seb_improved(&set, 0.1).unwrap());
    }

    #[test]
    fn bisector_points_are_equidistant(
        p1 in prop::array::uniform3(-2.0f64..2.0),
        p2 in prop::array::uniform3(-2.0f64..2.0),
        w1 in 0.0f64..1.0,
        w2 in 0.0f64..1.0,
        q in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let d = [p1[0] - p2[0], p1[1] - p2[1], p1[2] - p2[2]];
        prop_assume!(d.iter().map(|c| c * c).sum::<f64>() > 1e-4);
        let (a, b) = (WeightedSite::new(p1, w1).unwrap(), WeightedSite::new(p2, w2).unwrap());
        let plane = laguerre_bisector(&a, &b).unwrap();
        let x = plane.project(&q);
        prop_assert!((laguerre_distance(&x, &a) - laguerre_distance(&x, &b)).abs() <= 1e-9);
    }

    #[test]
    fn triangulation_tiles_the_hull(vs in sites(0.8, 5..=12)) {
        let lifted: Vec<WeightedSite> = vs.iter().map(|v| lift_site(v).unwrap()).collect();
        let tri = match regular_triangulation(&lifted) {
            Ok(t) => t,
            Err(_) => return Ok(()),
        };
        prop_assert!(tri.hull_volume() > 0.0);
        prop_assert!((tri.total_volume() - tri.hull_volume()).abs() <= 1e-9 * tri.hull_volume().max(1.0));
        prop_assert!(tri.min_sphere_clearance().unwrap() >= -1e-9);
    }
}

#[test]
fn informational_radius_increases() {
    let values: Vec<f64> = (0..200)
        .map(|i| informational_radius(i as f64 / 199.0).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn detection_bounds_do_not_increase_with_quality_radius() {
    let ucm: Vec<f64> = (0..=300)
        .map(|i| ucm_detection(0.75 * i as f64 / 300.0).unwrap().r_star_bound)
        .collect();
    assert!(ucm.windows(2).all(|w| w[1] <= w[0]));
    let limit = (2.0 / 3.0 - 4.0 / (3.0 * 8f64.sqrt())).sqrt() * 1.5;
    let pc: Vec<f64> = (0..=300)
        .map(|i| {
            phasecov_detection(limit * i as f64 / 300.0)
                .unwrap()
                .r_star_bound
        })
        .collect();
    assert!(pc.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn asymmetric_pair_exists() {
    let rho = BlochVector::new(0.9, 0.0, 0.0).unwrap();
    let sigma = BlochVector::new(0.0, 0.0, 0.2).unwrap();
    let forward = quantum_relative_entropy(&rho, &sigma).unwrap();
    let backward = quantum_relative_entropy(&sigma, &rho).unwrap();
    assert!((forward - backward).abs() > 0.01);
}

#[test]
fn divergence_to_nearly_mixed_reference() {
    let rho = BlochVector::new(0.3, -0.4, 0.5).unwrap();
    let sigma = BlochVector::new(1e-6, 0.0, 0.0).unwrap();
    let near = quantum_relative_entropy(&rho, &sigma).unwrap();
    let at = quantum_relative_entropy(&rho, &BlochVector::ORIGIN).unwrap();
    assert!((near - at).abs() < 1e-6);
}
