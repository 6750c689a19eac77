//! Cloner channels acting on the Bloch ball, the cloner-quality ellipsoid and
//! the detection bounds derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::state::{radius_entropy_unchecked, BlochVector, STATE_TOL};

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClonerKind {
    #[serde(rename = "ucm")]
    Ucm,
    #[serde(rename = "phasecov")]
    PhaseCovariant,
}

impl ClonerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClonerKind::Ucm => "ucm",
            ClonerKind::PhaseCovariant => "phasecov",
        }
    }
}

/// Diagonal contraction of the Bloch ball. UCM specs are isotropic and
/// every scale lies in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ClonerSpec {
    kind: ClonerKind,
    shrink_xy: f64,
    shrink_z: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    kind: ClonerKind,
    shrink_xy: f64,
    shrink_z: f64,
}

impl TryFrom<RawSpec> for ClonerSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        ClonerSpec::new(raw.kind, raw.shrink_xy, raw.shrink_z)
    }
}

impl ClonerSpec {
    pub fn new(kind: ClonerKind, shrink_xy: f64, shrink_z: f64) -> Result<Self> {
        for s in [shrink_xy, shrink_z] {
            if !(s > 0.0 && s <= 1.0) {
                return Err(domain("cloner shrink factor", s));
            }
        }
        if kind == ClonerKind::Ucm && (shrink_xy - shrink_z).abs() > 1e-12 {
            return Err(Error::Degenerate(format!(
                "UCM must be isotropic, got shrink_xy {shrink_xy} and shrink_z {shrink_z}"
            )));
        }
        Ok(ClonerSpec {
            kind,
            shrink_xy,
            shrink_z,
        })
    }

    pub fn kind(&self) -> ClonerKind {
        self.kind
    }

    pub fn shrink_xy(&self) -> f64 {
        self.shrink_xy
    }

    pub fn shrink_z(&self) -> f64 {
        self.shrink_z
    }

    /// The shrink factor acting on an equatorial signal.
    pub fn principal_shrink(&self) -> f64 {
        self.shrink_xy
    }

    /// Fidelity `(1 + eta)/2` of an equatorial signal.
    pub fn fidelity(&self) -> f64 {
        (1.0 + self.shrink_xy) / 2.0
    }

    /// Channel seen by the eavesdropper when Bob's clone has this spec.
    ///
    /// UCM clones obey `a^2 + b^2 + ab = a + b`; phase-covariant clones obey
    /// `a^2 + b^2 = 1` on the equator. The symmetric cloner is its own
    /// complement in both families.
    pub fn complementary(&self) -> ClonerSpec {
        let b = self.shrink_xy;
        let eta = match self.kind {
            ClonerKind::Ucm => 0.5 * ((1.0 - b) + ((1.0 - b) * (1.0 + 3.0 * b)).sqrt()),
            ClonerKind::PhaseCovariant => (1.0 - b * b).max(0.0).sqrt(),
        };
        clone_from_principal(self.kind, eta)
    }
}

/// Builds the cloner of `kind` whose equatorial shrink is `eta`, floored just
/// above zero so the cloner stays a valid contraction.
fn clone_from_principal(kind: ClonerKind, eta: f64) -> ClonerSpec {
    let eta = eta.clamp(f64::MIN_POSITIVE, 1.0);
    let z = match kind {
        ClonerKind::Ucm => eta,
        ClonerKind::PhaseCovariant => (eta * eta).max(f64::MIN_POSITIVE),
    };
    ClonerSpec {
        kind,
        shrink_xy: eta,
        shrink_z: z,
    }
}

/// `(shrink_xy x, shrink_xy y, shrink_z z)`.
pub fn apply_cloner(spec: &ClonerSpec, v: &BlochVector) -> BlochVector {
    BlochVector::from_raw(
        spec.shrink_xy * v.x(),
        spec.shrink_xy * v.y(),
        spec.shrink_z * v.z(),
    )
}

/// Checked variant of [`apply_cloner`] for raw coordinates.
pub fn apply_cloner_raw(spec: &ClonerSpec, v: [f64; 3]) -> Result<BlochVector> {
    let v = BlochVector::from_array(v)?;
    Ok(apply_cloner(spec, &v))
}

pub fn optimal_cloner(kind: ClonerKind) -> ClonerSpec {
    match kind {
        ClonerKind::Ucm => ClonerSpec {
            kind,
            shrink_xy: 2.0 / 3.0,
            shrink_z: 2.0 / 3.0,
        },
        ClonerKind::PhaseCovariant => ClonerSpec {
            kind,
            shrink_xy: INV_SQRT2,
            shrink_z: 0.5,
        },
    }
}

/// `r* = 1 - S(r)` in bits.
pub fn informational_radius(r_bloch: f64) -> Result<f64> {
    if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&r_bloch) {
        return Err(domain("Bloch radius", r_bloch));
    }
    Ok(1.0 - radius_entropy_unchecked(r_bloch.clamp(0.0, 1.0)))
}

/// Point in cloner-quality space; lies on or inside the oblate ellipsoid
/// `x^2 + y^2 + z^2 + xy + xz + yz = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityPoint {
    x: f64,
    y: f64,
    z: f64,
}

impl QualityPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if ![x, y, z].iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let q = QualityPoint { x, y, z };
        let level = q.ellipsoid_form();
        if level > 0.5 + 1e-9 {
            return Err(domain("quality ellipsoid level", level));
        }
        Ok(q)
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `x^2 + y^2 + z^2 + xy + xz + yz`.
    pub fn ellipsoid_form(&self) -> f64 {
        let QualityPoint { x, y, z } = *self;
        x * x + y * y + z * z + x * y + x * z + y * z
    }
}

pub fn quality_radius(q: &QualityPoint) -> f64 {
    let [x, y, z] = q.coords();
    (x * x + y * y + z * z).sqrt()
}

/// Quality radius at which a UCM attack becomes detectable: the pole of the
/// ellipsoid, `|(1,1,1)/sqrt(12)| = 1/2`.
pub const UCM_DETECTION_RADIUS: f64 = 0.5;

/// Quality radii within this relative distance below a threshold count as on it.
const THRESHOLD_TOL: f64 = 1e-12;

fn reaches(r: f64, threshold: f64) -> bool {
    r >= threshold * (1.0 - THRESHOLD_TOL)
}

/// `sqrt(2/3 - 4/(3 sqrt 8))`.
pub fn phasecov_detection_radius() -> f64 {
    (2.0 / 3.0 - 4.0 / (3.0 * 8f64.sqrt())).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detection {
    pub detected: bool,
    pub r_star_bound: f64,
    /// The bound's Bloch-radius argument fell below zero and was clamped.
    pub clamped: bool,
}

fn bound_from_argument(arg: f64) -> (f64, bool) {
    let clamped = !(0.0..=1.0).contains(&arg);
    let arg = arg.clamp(0.0, 1.0);
    (1.0 - radius_entropy_unchecked(arg), clamped)
}

/// Detected iff `r_E >= 1/2`; bound `1 - S(1 - 4 r_E^2 / 3)`.
pub fn ucm_detection(r_e: f64) -> Result<Detection> {
    if !(r_e >= 0.0 && r_e.is_finite()) {
        return Err(domain("quality radius", r_e));
    }
    let (r_star_bound, clamped) = bound_from_argument(1.0 - 4.0 * r_e * r_e / 3.0);
    Ok(Detection {
        detected: reaches(r_e, UCM_DETECTION_RADIUS),
        r_star_bound,
        clamped,
    })
}

/// Detected iff `r_eps >= sqrt(2/3 - 4/(3 sqrt 8))`; bound `1 - S(1 - 3 r_eps^2 / 2)`.
pub fn phasecov_detection(r_eps: f64) -> Result<Detection> {
    if !(r_eps >= 0.0 && r_eps.is_finite()) {
        return Err(domain("quality radius", r_eps));
    }
    let (r_star_bound, clamped) = bound_from_argument(1.0 - 1.5 * r_eps * r_eps);
    Ok(Detection {
        detected: reaches(r_eps, phasecov_detection_radius()),
        r_star_bound,
        clamped,
    })
}

/// Inverse of the bound argument: the quality radius of a cloner with
/// equatorial shrink `eta`.
pub fn quality_radius_of(spec: &ClonerSpec) -> f64 {
    let eta = spec.shrink_xy;
    match spec.kind {
        ClonerKind::Ucm => (0.75 * (1.0 - eta)).max(0.0).sqrt(),
        ClonerKind::PhaseCovariant => (2.0 * (1.0 - eta) / 3.0).max(0.0).sqrt(),
    }
}

/// Detection verdict and bound for a concrete cloner.
pub fn detect(spec: &ClonerSpec) -> Detection {
    let r = quality_radius_of(spec);
    match spec.kind {
        ClonerKind::Ucm => ucm_detection(r),
        ClonerKind::PhaseCovariant => phasecov_detection(r),
    }
    .expect("quality radius of a valid cloner is finite and non-negative")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClonerComparison {
    pub r_e_ucm: f64,
    pub r_e_phasecov: f64,
    pub r_star_ucm: f64,
    pub r_star_phasecov: f64,
}

/// The phase-covariant attack has the smaller detection radius and leaves
/// Bob the larger informational ball.
pub fn compare_cloners() -> ClonerComparison {
    let report = ClonerComparison {
        r_e_ucm: UCM_DETECTION_RADIUS,
        r_e_phasecov: phasecov_detection_radius(),
        r_star_ucm: 1.0 - radius_entropy_unchecked(2.0 / 3.0),
        r_star_phasecov: 1.0 - radius_entropy_unchecked(INV_SQRT2),
    };
    debug_assert!(report.r_e_phasecov < report.r_e_ucm);
    debug_assert!(report.r_star_ucm <= report.r_star_phasecov);
    report
}

/// Cloner whose equatorial fidelity is `1 - D`, i.e. equatorial shrink
/// `1 - 2D`. The phase-covariant polar shrink is the square of the equatorial
/// one, which gives the identity at `D = 0` and `1/2` at the optimal cloner.
pub fn disturbance_to_cloner(d: f64, kind: ClonerKind) -> Result<ClonerSpec> {
    if !(0.0..=0.5).contains(&d) {
        return Err(domain("disturbance", d));
    }
    Ok(clone_from_principal(kind, 1.0 - 2.0 * d))
}
