//! Smallest enclosing quantum-informational balls.
//!
//! The ball of a site set minimizes `max_i D(s_i || c) + r_i` over full-rank
//! centers `c`. Written in gradient coordinates `theta = grad F(c)` every term
//! is `F(s_i) + r_i + F*(theta) - <s_i, theta>`, a convex function of
//! `theta`, with `F*(theta) = |theta| + log2(1 + 4^-|theta|)`. The concave
//! dual over site weights `lambda` is the Holevo quantity of the ensemble plus
//! `sum lambda_i r_i`, and its maximizer puts the center at `sum lambda_i s_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cloner::{apply_cloner, ClonerSpec};
use crate::divergence::{
    generator_gradient, generator_gradient_inverse, quantum_relative_entropy, GradientVector,
};
use crate::error::{domain, Error, Result};
use crate::state::{radius_entropy_unchecked, BlochVector};

/// Sites at or beyond this Bloch radius are treated as pure and rejected.
pub const PURE_SITE_LIMIT: f64 = 1.0 - 1e-6;

/// Largest instance the brute-force oracle accepts.
pub const ORACLE_MAX_SITES: usize = 6;

/// Fewest surface samples accepted by [`ellipsoid_minimax_fit`].
pub const MIN_SURFACE_SAMPLES: usize = 32;

/// A ball `{ rho : D(rho || center) <= radius }` with a full-rank center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QInfoBall {
    pub center: BlochVector,
    #[serde(rename = "radius_bits")]
    pub radius: f64,
    pub iterations: usize,
}

/// Mixed sites with optional per-site ball radii in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSet {
    sites: Vec<BlochVector>,
    radii: Vec<f64>,
}

impl SiteSet {
    pub fn new(sites: Vec<BlochVector>) -> Result<Self> {
        let radii = vec![0.0; sites.len()];
        Self::with_radii(sites, radii)
    }

    pub fn with_radii(sites: Vec<BlochVector>, radii: Vec<f64>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptyInput);
        }
        if radii.len() != sites.len() {
            return Err(Error::Degenerate(format!(
                "{} sites but {} radii",
                sites.len(),
                radii.len()
            )));
        }
        for (index, s) in sites.iter().enumerate() {
            let radius = s.radius();
            if radius >= PURE_SITE_LIMIT {
                return Err(Error::PureSite { index, radius });
            }
        }
        for (index, &radius) in radii.iter().enumerate() {
            if !(radius >= 0.0 && radius.is_finite()) {
                return Err(Error::InvalidSiteRadius { index, radius });
            }
        }
        Ok(SiteSet { sites, radii })
    }

    pub fn sites(&self) -> &[BlochVector] {
        &self.sites
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn has_radii(&self) -> bool {
        self.radii.iter().any(|&r| r > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Farthest {
    pub index: usize,
    pub distance: f64,
}

/// `argmax_i D(s_i || c) + r_i`, lowest index on ties.
pub fn farthest_site(c: &BlochVector, s: &SiteSet) -> Result<Farthest> {
    let mut best = Farthest {
        index: 0,
        distance: f64::NEG_INFINITY,
    };
    for (index, (site, r)) in s.sites.iter().zip(&s.radii).enumerate() {
        let distance = quantum_relative_entropy(site, c)? + r;
        if distance > best.distance {
            best = Farthest { index, distance };
        }
    }
    Ok(best)
}

/// Legendre conjugate of the generator as a function of `|theta|`.
fn conjugate(m: f64) -> f64 {
    m + (-2.0 * m * std::f64::consts::LN_2).exp().ln_1p() / std::f64::consts::LN_2
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn lerp(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

fn gradient_of(v: &BlochVector) -> [f64; 3] {
    generator_gradient(v)
        .expect("mixed state has a finite gradient")
        .to_array()
}

fn center_of(theta: &[f64; 3]) -> BlochVector {
    generator_gradient_inverse(&GradientVector::from_array(*theta))
}

/// Sites in the form used by the inner loops: `d_i(theta) = offset_i + F*(theta) - <s_i, theta>`.
struct Objective {
    points: Vec<[f64; 3]>,
    offsets: Vec<f64>,
    gradients: Vec<[f64; 3]>,
}

impl Objective {
    fn new(s: &SiteSet) -> Self {
        let points: Vec<[f64; 3]> = s.sites.iter().map(|v| v.to_array()).collect();
        let offsets = s
            .sites
            .iter()
            .zip(&s.radii)
            .map(|(v, r)| r - radius_entropy_unchecked(v.radius()))
            .collect();
        let gradients = s.sites.iter().map(gradient_of).collect();
        Objective {
            points,
            offsets,
            gradients,
        }
    }

    fn term(&self, i: usize, theta: &[f64; 3], conj: f64) -> f64 {
        self.offsets[i] + conj - dot(&self.points[i], theta)
    }

    /// `(argmax, max)` with the lowest index winning ties.
    fn farthest(&self, theta: &[f64; 3]) -> (usize, f64) {
        let conj = conjugate(norm(theta));
        let mut best = (0, f64::NEG_INFINITY);
        for i in 0..self.points.len() {
            let d = self.term(i, theta, conj);
            if d > best.1 {
                best = (i, d);
            }
        }
        best
    }

    fn value(&self, theta: &[f64; 3]) -> f64 {
        self.farthest(theta).1
    }
}

/// Exact radius of the ball centred at `c`, evaluated with the closed-form divergence.
fn ball_at(c: BlochVector, s: &SiteSet, iterations: usize) -> Result<QInfoBall> {
    let radius = farthest_site(&c, s)?.distance.max(0.0);
    Ok(QInfoBall {
        center: c,
        radius,
        iterations,
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain("tolerance", eps));
    }
    Ok(())
}

/// Core-set walk: start at the first site and, for `ceil(1/eps^2)` rounds,
/// average the gradient of the farthest site into the center with weight
/// `1/(i+1)`. Returns the best center visited.
pub fn seb_core_set(s: &SiteSet, eps: f64) -> Result<QInfoBall> {
    check_eps(eps)?;
    let obj = Objective::new(s);
    let rounds = (1.0 / (eps * eps)).ceil() as usize;
    let mut theta = obj.gradients[0];
    let mut best = (obj.value(&theta), theta);
    for i in 1..=rounds {
        let (far, _) = obj.farthest(&theta);
        let w = 1.0 / (i as f64 + 1.0);
        theta = lerp(&theta, &obj.gradients[far], w);
        let value = obj.value(&theta);
        if value < best.0 {
            best = (value, theta);
        }
    }
    ball_at(center_of(&best.1), s, rounds)
}

/// Tuning of [`seb_improved_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprovedOptions {
    /// Initial guess and bracket width as a fraction of the largest divergence
    /// from the first site.
    pub delta0_fraction: f64,
}

impl Default for ImprovedOptions {
    fn default() -> Self {
        ImprovedOptions {
            delta0_fraction: 0.5,
        }
    }
}

/// Ball-moving walk with a bracketed radius guess.
pub fn seb_improved(s: &SiteSet, eps: f64) -> Result<QInfoBall> {
    seb_improved_with(s, eps, ImprovedOptions::default())
}

/// Keeps a radius guess `r` and bracket width `delta`. Each round moves the
/// center at most `ceil(1/delta)` times, each time along the gradient-space
/// segment toward the farthest site until that site sits on the sphere of
/// radius `r`. The excess `gap = max_i d_i - r` then steers the guess: a
/// round that ends within `3 delta / 4` of `r` lowers it by `delta / 4`, any
/// other raises it by `delta / 4`. Every round shrinks `delta` by `3/4` and
/// the walk stops once `delta <= eps r_best / 2`, where `r_best` is the
/// smallest radius seen so far.
///
/// Widths are measured in units of `delta_0`, so the move budget of a round
/// is `ceil(delta_0 / delta)` and the total number of moves grows as
/// `delta_0 / (eps r_best)`.
pub fn seb_improved_with(s: &SiteSet, eps: f64, opts: ImprovedOptions) -> Result<QInfoBall> {
    check_eps(eps)?;
    if !(opts.delta0_fraction > 0.0 && opts.delta0_fraction.is_finite()) {
        return Err(domain("initial bracket fraction", opts.delta0_fraction));
    }
    let obj = Objective::new(s);
    let mut theta = obj.gradients[0];
    let initial = obj.value(&theta);
    let mut best = (initial, theta);
    if initial <= 1e-15 {
        return ball_at(center_of(&theta), s, 0);
    }
    let delta0 = opts.delta0_fraction * initial;
    let mut r = delta0;
    let mut delta = delta0;
    let mut moves = 0usize;
    while delta > 0.5 * eps * best.0 {
        let budget = (delta0 / delta).ceil() as usize;
        for _ in 0..budget {
            let (far, d) = obj.farthest(&theta);
            if d <= r {
                break;
            }
            theta = move_until_touching(&obj, &theta, far, r);
            moves += 1;
            let value = obj.value(&theta);
            if value < best.0 {
                best = (value, theta);
            }
        }
        let gap = obj.value(&theta) - r;
        if gap <= 0.75 * delta {
            r = (r - delta / 4.0).max(0.0);
        } else {
            r += delta / 4.0;
        }
        delta *= 0.75;
    }
    ball_at(center_of(&best.1), s, moves)
}

/// Point on the segment from `theta` to the gradient of site `j` where the
/// divergence of site `j` equals `r`. The divergence is convex along the
/// segment with its minimum at the far end, hence non-increasing.
fn move_until_touching(obj: &Objective, theta: &[f64; 3], j: usize, r: f64) -> [f64; 3] {
    let target = obj.gradients[j];
    let d_at = |t: f64| {
        let p = lerp(theta, &target, t);
        obj.term(j, &p, conjugate(norm(&p)))
    };
    if d_at(1.0) >= r {
        return target;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if d_at(mid) > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lerp(theta, &target, hi)
}

/// Smallest ball containing every ball `{ rho : D(rho || s_i) <= r_i }` in the
/// sense `D(s_i || c) + r_i <= radius`. With all radii zero this is exactly
/// [`seb_core_set`].
pub fn seb_of_balls(b: &SiteSet, eps: f64) -> Result<QInfoBall> {
    seb_core_set(b, eps)
}

/// Result of the brute-force search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBall {
    pub ball: QInfoBall,
    /// Holevo-type lower bound on the optimal radius.
    pub lower_bound: f64,
}

impl OracleBall {
    pub fn gap(&self) -> f64 {
        self.ball.radius - self.lower_bound
    }
}

const ORACLE_GRID: usize = 13;
const ORACLE_DUAL_ROUNDS: usize = 200_000;
/// Seed used by [`seb_bruteforce_oracle`].
pub const ORACLE_SEED: u64 = 0x5EB0_0C1E;

/// Independent minimizer for small instances.
///
/// Candidates come from a `13^3` grid over the sites' bounding box and from a
/// Blahut-Arimoto ascent on the site weights; the best candidate is refined
/// by a pattern search in gradient coordinates along the axes and along
/// seeded random directions, with the step halved down to `1e-13`. The dual
/// ascent also certifies a lower bound, so `gap()` bounds the error.
pub fn seb_bruteforce_oracle(s: &SiteSet) -> Result<OracleBall> {
    seb_bruteforce_oracle_seeded(s, ORACLE_SEED)
}

/// [`seb_bruteforce_oracle`] with an explicit seed for the random search directions.
pub fn seb_bruteforce_oracle_seeded(s: &SiteSet, seed: u64) -> Result<OracleBall> {
    if s.len() > ORACLE_MAX_SITES {
        return Err(Error::TooManySites {
            n: s.len(),
            max: ORACLE_MAX_SITES,
        });
    }
    let obj = Objective::new(s);

    let mut best = (f64::INFINITY, [0.0; 3]);
    let mut consider = |theta: [f64; 3], value: f64| {
        if value < best.0 {
            best = (value, theta);
        }
    };

    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &obj.points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let steps = ORACLE_GRID - 1;
    for i in 0..ORACLE_GRID {
        for j in 0..ORACLE_GRID {
            for k in 0..ORACLE_GRID {
                let frac = |n: usize, axis: usize| {
                    lo[axis] + (hi[axis] - lo[axis]) * n as f64 / steps as f64
                };
                let c = [frac(i, 0), frac(j, 1), frac(k, 2)];
                if norm(&c) >= PURE_SITE_LIMIT {
                    continue;
                }
                let theta = gradient_of(&BlochVector::from_raw(c[0], c[1], c[2]));
                consider(theta, obj.value(&theta));
            }
        }
    }

    let (dual_theta, lower_bound) = blahut_arimoto(&obj);
    consider(dual_theta, obj.value(&dual_theta));

    let theta = pattern_search(&obj, best.1, seed);
    let center = center_of(&theta);
    let ball = ball_at(center, s, 0)?;
    Ok(OracleBall { ball, lower_bound })
}

/// Multiplicative weight ascent `lambda_i <- lambda_i 2^{d_i}` on the dual.
/// Returns the gradient of the last mixture and the best dual value seen.
fn blahut_arimoto(obj: &Objective) -> ([f64; 3], f64) {
    let n = obj.points.len();
    let mut lambda = vec![1.0 / n as f64; n];
    let mut lower = f64::NEG_INFINITY;
    let mut theta = [0.0; 3];
    for _ in 0..ORACLE_DUAL_ROUNDS {
        let mut m = [0.0; 3];
        for (w, p) in lambda.iter().zip(&obj.points) {
            for k in 0..3 {
                m[k] += w * p[k];
            }
        }
        theta = gradient_of(&BlochVector::from_raw(m[0], m[1], m[2]));
        let conj = conjugate(norm(&theta));
        let d: Vec<f64> = (0..n).map(|i| obj.term(i, &theta, conj)).collect();
        let dual: f64 = lambda.iter().zip(&d).map(|(w, d)| w * d).sum();
        let primal = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lower = lower.max(dual);
        if primal - lower < 1e-13 {
            break;
        }
        let top = primal;
        let mut total = 0.0;
        for (w, d) in lambda.iter_mut().zip(&d) {
            *w *= (d - top).exp2();
            total += *w;
        }
        for w in lambda.iter_mut() {
            *w /= total;
        }
    }
    (theta, lower)
}

fn pattern_search(obj: &Objective, start: [f64; 3], seed: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = start;
    let mut value = obj.value(&theta);
    let mut step = 0.25;
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    while step > 1e-13 {
        let mut improved = false;
        let mut dirs: Vec<[f64; 3]> = axes.to_vec();
        for _ in 0..12 {
            let d = [
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            ];
            let n = norm(&d).max(1e-300);
            dirs.push([d[0] / n, d[1] / n, d[2] / n]);
        }
        for d in &dirs {
            for sign in [1.0, -1.0] {
                let cand = [
                    theta[0] + sign * step * d[0],
                    theta[1] + sign * step * d[1],
                    theta[2] + sign * step * d[2],
                ];
                let v = obj.value(&cand);
                if v < value {
                    theta = cand;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    theta
}

/// Fitted ball of a cloner-image surface together with its farthest samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidFit {
    pub ball: QInfoBall,
    /// Samples whose divergence from the center lies within `1e-6` of the radius.
    pub farthest: Vec<BlochVector>,
    /// Certified bound on `radius - optimum`.
    pub gap: f64,
}

/// Near-uniform deterministic points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

const FIT_MAX_ROUNDS: usize = 200_000;

/// Minimax ball of the image of the Bloch sphere under a cloner.
///
/// The unit sphere is sampled with [`fibonacci_sphere`], pushed through the
/// cloner and clamped to radius `1 - 1e-6`. Starting from the sample mean the
/// center moves as `c <- (1 - gamma) c + gamma rho''` toward the farthest
/// sample `rho''` with `gamma = 1/(iter + 1)`. The running center is always a
/// weighted mixture of samples, so the average divergence under those weights
/// lower-bounds the optimum; iteration stops once the best center is within
/// `eps` of that bound.
pub fn ellipsoid_minimax_fit(
    spec: &ClonerSpec,
    n_surface: usize,
    eps: f64,
) -> Result<EllipsoidFit> {
    if n_surface < MIN_SURFACE_SAMPLES {
        return Err(Error::Undersampled {
            n: n_surface,
            min: MIN_SURFACE_SAMPLES,
        });
    }
    check_eps(eps)?;
    let samples: Vec<BlochVector> = fibonacci_sphere(n_surface)
        .into_iter()
        .map(|p| {
            let v = apply_cloner(spec, &BlochVector::from_raw(p[0], p[1], p[2]));
            v.clamp_radius(PURE_SITE_LIMIT)
        })
        .collect();
    // clamped samples may round to just above the pure-site limit
    let set = SiteSet {
        sites: samples.clone(),
        radii: vec![0.0; n_surface],
    };
    let obj = Objective::new(&set);
    let n = samples.len();

    let mut weights = vec![1.0 / n as f64; n];
    let mut best = (f64::INFINITY, [0.0; 3]);
    let mut lower = f64::NEG_INFINITY;
    let mut rounds = 0;
    for iter in 1..=FIT_MAX_ROUNDS {
        rounds = iter;
        let mut m = [0.0; 3];
        for (w, p) in weights.iter().zip(&obj.points) {
            for k in 0..3 {
                m[k] += w * p[k];
            }
        }
        let theta = gradient_of(&BlochVector::from_raw(m[0], m[1], m[2]));
        let conj = conjugate(norm(&theta));
        let mut far = (0, f64::NEG_INFINITY);
        let mut dual = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            let d = obj.term(i, &theta, conj);
            dual += w * d;
            if d > far.1 {
                far = (i, d);
            }
        }
        lower = lower.max(dual);
        if far.1 < best.0 {
            best = (far.1, theta);
        }
        if best.0 - lower < eps {
            break;
        }
        let gamma = 1.0 / (iter as f64 + 1.0);
        for w in weights.iter_mut() {
            *w *= 1.0 - gamma;
        }
        weights[far.0] += gamma;
    }

    let center = center_of(&best.1);
    let ball = ball_at(center, &set, rounds)?;
    let mut farthest = Vec::new();
    for v in &samples {
        if quantum_relative_entropy(v, &center)? >= ball.radius - 1e-6 {
            farthest.push(*v);
        }
    }
    let gap = (ball.radius - lower).max(0.0);
    Ok(EllipsoidFit {
        ball,
        farthest,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z).unwrap()
    }

    const ONE_MINUS_H08: f64 = 0.278_071_905_112_637_65;

    #[test]
    fn farthest_examples() {
        let s = SiteSet::new(vec![v(0.6, 0.0, 0.0)]).unwrap();
        let f = farthest_site(&BlochVector::ORIGIN, &s).unwrap();
        assert_eq!(f.index, 0);
        assert!((f.distance - ONE_MINUS_H08).abs() < 1e-14);

        let s = SiteSet::new(vec![v(0.6, 0.0, 0.0), v(0.3, 0.0, 0.0)]).unwrap();
        assert_eq!(farthest_site(&BlochVector::ORIGIN, &s).unwrap().index, 0);

        let s =
            SiteSet::with_radii(vec![v(0.3, 0.0, 0.0), v(0.6, 0.0, 0.0)], vec![0.5, 0.0]).unwrap();
        let f = farthest_site(&BlochVector::ORIGIN, &s).unwrap();
        let weighted =
            quantum_relative_entropy(&v(0.3, 0.0, 0.0), &BlochVector::ORIGIN).unwrap() + 0.5;
        assert_eq!(f.index, usize::from(weighted <= ONE_MINUS_H08));

        let tie = SiteSet::new(vec![v(0.5, 0.0, 0.0), v(-0.5, 0.0, 0.0)]).unwrap();
        assert_eq!(farthest_site(&BlochVector::ORIGIN, &tie).unwrap().index, 0);
        assert!(farthest_site(&v(1.0, 0.0, 0.0), &tie).is_err());
    }

    #[test]
    fn site_validation() {
        assert_eq!(SiteSet::new(vec![]), Err(Error::EmptyInput));
        assert!(matches!(
            SiteSet::new(vec![v(0.0, 0.0, 1.0)]),
            Err(Error::PureSite { index: 0, .. })
        ));
        assert!(matches!(
            SiteSet::with_radii(vec![v(0.1, 0.0, 0.0)], vec![-1.0]),
            Err(Error::InvalidSiteRadius { index: 0, .. })
        ));
        let s = SiteSet::new(vec![v(0.1, 0.0, 0.0)]).unwrap();
        assert!(seb_core_set(&s, 0.0).is_err());
        assert!(seb_improved(&s, 1.0).is_err());
    }

    #[test]
    fn single_site() {
        let site = v(0.2, -0.3, 0.4);
        let s = SiteSet::new(vec![site]).unwrap();
        for ball in [
            seb_core_set(&s, 0.1).unwrap(),
            seb_improved(&s, 0.1).unwrap(),
            seb_bruteforce_oracle(&s).unwrap().ball,
        ] {
            assert!(ball.radius < 1e-12, "{ball:?}");
            assert!(ball.center.distance(&site) < 1e-5);
        }
    }

    #[test]
    fn antipodal_pair() {
        let s = SiteSet::new(vec![v(0.6, 0.0, 0.0), v(-0.6, 0.0, 0.0)]).unwrap();
        let core = seb_core_set(&s, 0.05).unwrap();
        let improved = seb_improved(&s, 0.01).unwrap();
        let oracle = seb_bruteforce_oracle(&s).unwrap();
        assert!(oracle.ball.center.radius() < 1e-3);
        assert!((oracle.ball.radius - ONE_MINUS_H08).abs() < 1e-9);
        for ball in [core, improved] {
            assert!(ball.center.radius() < 1e-2, "{ball:?}");
            assert!((ball.radius - ONE_MINUS_H08).abs() < 1e-3, "{ball:?}");
        }
        assert!((core.radius - improved.radius).abs() <= 0.05);
    }

    #[test]
    fn balls_reduce_to_points() {
        let sites = vec![v(0.3, 0.1, 0.0), v(-0.2, 0.5, 0.1), v(0.0, -0.4, -0.3)];
        let plain = seb_core_set(&SiteSet::new(sites.clone()).unwrap(), 0.1).unwrap();
        let zero = seb_of_balls(&SiteSet::with_radii(sites, vec![0.0; 3]).unwrap(), 0.1).unwrap();
        assert_eq!(plain, zero);

        let one = SiteSet::with_radii(vec![v(0.1, 0.2, 0.3)], vec![0.4]).unwrap();
        let ball = seb_of_balls(&one, 0.1).unwrap();
        assert!((ball.radius - 0.4).abs() < 1e-12);
        assert!(ball.center.distance(&v(0.1, 0.2, 0.3)) < 1e-9);
    }

    #[test]
    fn dominated_ball() {
        let a = v(0.1, 0.0, 0.0);
        let b = v(0.15, 0.05, 0.0);
        let inner = 0.05;
        let outer = quantum_relative_entropy(&a, &b).unwrap() + inner + 0.1;
        let s = SiteSet::with_radii(vec![a, b], vec![inner, outer]).unwrap();
        let ball = seb_of_balls(&s, 0.05).unwrap();
        let oracle = seb_bruteforce_oracle(&s).unwrap();
        assert!((oracle.ball.radius - outer).abs() < 1e-9);
        assert!(oracle.ball.center.distance(&b) < 1e-6);
        assert!(ball.radius <= outer * 1.05);
    }

    #[test]
    fn oracle_limits() {
        let many: Vec<_> = (0..7).map(|i| v(0.1 * i as f64 / 7.0, 0.0, 0.0)).collect();
        assert_eq!(
            seb_bruteforce_oracle(&SiteSet::new(many).unwrap()),
            Err(Error::TooManySites {
                n: 7,
                max: ORACLE_MAX_SITES
            })
        );
    }

    #[test]
    fn holevo_link_for_symmetric_pair() {
        for a in [0.2, 0.5, 0.8] {
            let s = SiteSet::new(vec![v(a, 0.0, 0.0), v(-a, 0.0, 0.0)]).unwrap();
            let chi = 1.0 - radius_entropy_unchecked(a);
            let ball = seb_core_set(&s, 0.05).unwrap();
            assert!(
                (ball.radius - chi).abs() < 1e-3,
                "{a}: {} vs {chi}",
                ball.radius
            );
        }
    }

    #[test]
    fn ellipsoid_fit_rejects_undersampling() {
        let spec = crate::cloner::optimal_cloner(crate::cloner::ClonerKind::Ucm);
        assert_eq!(
            ellipsoid_minimax_fit(&spec, 31, 0.01),
            Err(Error::Undersampled {
                n: 31,
                min: MIN_SURFACE_SAMPLES
            })
        );
    }

    #[test]
    fn fibonacci_points_are_unit() {
        let pts = fibonacci_sphere(100);
        assert!(pts.iter().all(|p| (norm(p) - 1.0).abs() < 1e-12));
        let mean: [f64; 3] = pts.iter().fold([0.0; 3], |acc, p| {
            [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]
        });
        assert!(norm(&mean) / 100.0 < 0.05);
    }
}
