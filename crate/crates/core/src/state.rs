//! Qubit states on the Bloch ball and the entropy primitives built on them.
//!
//! All entropies are in bits. A qubit with Bloch radius `r` has eigenvalues
//! `(1 ± r)/2`, so its von Neumann entropy is the binary entropy of `(1 - r)/2`.

use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Slack allowed on the unit-ball constraint and on density-matrix invariants.
pub const STATE_TOL: f64 = 1e-12;

/// A qubit state as a point `(x, y, z)` of the closed unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBloch")]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Deserialize)]
struct RawBloch {
    x: f64,
    y: f64,
    z: f64,
}

impl TryFrom<RawBloch> for BlochVector {
    type Error = Error;

    fn try_from(raw: RawBloch) -> Result<Self> {
        BlochVector::new(raw.x, raw.y, raw.z)
    }
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Validates finiteness and `|v| <= 1 + 1e-12`. Vectors inside the slack
    /// but outside the ball are pulled back onto the unit sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let r = (x * x + y * y + z * z).sqrt();
        if r > 1.0 + STATE_TOL {
            return Err(Error::OutOfBall { radius: r });
        }
        if r > 1.0 {
            return Ok(BlochVector {
                x: x / r,
                y: y / r,
                z: z / r,
            });
        }
        Ok(BlochVector { x, y, z })
    }

    /// Caller guarantees the result is finite and inside the ball.
    pub(crate) fn from_raw(x: f64, y: f64, z: f64) -> Self {
        debug_assert!((x * x + y * y + z * z).sqrt() <= 1.0 + 1e-9);
        BlochVector { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Bloch radius, capped at 1.
    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z)
            .sqrt()
            .min(1.0)
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Rescales onto the sphere of radius `max_radius` when the vector lies
    /// beyond it; otherwise returns it unchanged.
    pub fn clamp_radius(&self, max_radius: f64) -> BlochVector {
        let r = self.radius();
        if r > max_radius && r > 0.0 {
            let s = max_radius / r;
            BlochVector::from_raw(self.x * s, self.y * s, self.z * s)
        } else {
            *self
        }
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let d = [self.x - other.x, self.y - other.y, self.z - other.z];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Plain 3-vector arithmetic used by the solvers. Results are not re-validated;
/// convex combinations of ball points stay in the ball.
impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, o: BlochVector) -> BlochVector {
        BlochVector {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, o: BlochVector) -> BlochVector {
        BlochVector {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, s: f64) -> BlochVector {
        BlochVector {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// A 2x2 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: [[Complex64; 2]; 2],
}

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity within `1e-12`.
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = entries;
        if entries
            .iter()
            .flatten()
            .any(|e| !(e.re.is_finite() && e.im.is_finite()))
        {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        if a.im.abs() > STATE_TOL || d.im.abs() > STATE_TOL {
            return Err(Error::InvalidState("diagonal has an imaginary part".into()));
        }
        if (b - c.conj()).norm() > STATE_TOL {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let trace = a.re + d.re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let m = DensityMatrix { entries };
        let (_, lo) = m.eigenvalues();
        if lo < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo}")));
        }
        Ok(m)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// Eigenvalues `(largest, smallest)` of the Hermitian matrix.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = self.entries[1][0];
        let half_gap = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
        let mid = (a + d) / 2.0;
        (mid + half_gap, mid - half_gap)
    }
}

/// `rho = (I + x X + y Y + z Z) / 2`.
pub fn bloch_to_density(v: &BlochVector) -> DensityMatrix {
    let (x, y, z) = (v.x, v.y, v.z);
    DensityMatrix {
        entries: [
            [
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
            ],
            [
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        ],
    }
}

/// Inverse of [`bloch_to_density`]. Validates the matrix first.
pub fn density_to_bloch(m: &DensityMatrix) -> Result<BlochVector> {
    let m = DensityMatrix::from_entries(m.entries)?;
    let lower = m.entries[1][0];
    let upper = m.entries[0][1];
    // average the two off-diagonal entries so tiny asymmetries cancel
    let x = lower.re + upper.re;
    let y = lower.im - upper.im;
    let z = m.entries[0][0].re - m.entries[1][1].re;
    BlochVector::new(x, y, z).map_err(|_| Error::InvalidState("Bloch radius exceeds 1".into()))
}

fn plogp_bits(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// `H(s)` for `s <= 1/2`; the complementary term uses `ln_1p` for accuracy.
fn binary_entropy_small(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let large = -(1.0 - s) * (-s).ln_1p() / LN_2;
    plogp_bits(s) + large
}

/// Binary entropy in bits, with `0 log 0 = 0`.
///
/// `p` below one half is first rounded to `1 - (1 - p)`, the grid on which
/// complements are exact, so `binary_entropy(p) == binary_entropy(1.0 - p)`
/// holds bit for bit. The rounding moves the result by at most `6e-15`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("probability", p));
    }
    let on_grid = if p < 0.5 { 1.0 - (1.0 - p) } else { p };
    Ok(binary_entropy_unchecked(on_grid))
}

pub(crate) fn binary_entropy_unchecked(p: f64) -> f64 {
    let s = if p <= 0.5 { p } else { 1.0 - p };
    binary_entropy_small(s.max(0.0))
}

/// Von Neumann entropy `S(r) = H((1 + r)/2)` of any state with Bloch radius `r`.
pub fn radius_entropy(r: f64) -> Result<f64> {
    if !(0.0..=1.0 + STATE_TOL).contains(&r) || r.is_nan() {
        return Err(domain("Bloch radius", r));
    }
    Ok(radius_entropy_unchecked(r))
}

pub(crate) fn radius_entropy_unchecked(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    binary_entropy_small((1.0 - r) / 2.0)
}

/// `S(rho) = -Tr(rho log2 rho)`.
pub fn von_neumann_entropy(v: &BlochVector) -> f64 {
    radius_entropy_unchecked(v.radius())
}

/// Cloner fidelity `F = (1 + r)/2` for output Bloch radius `r`.
pub fn fidelity_from_radius(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(domain("Bloch radius", r));
    }
    Ok((1.0 + r) / 2.0)
}

/// One entry of a state-set file: a state and, for ball-of-balls inputs,
/// an optional radius in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateEntry {
    pub state: BlochVector,
    pub radius_bits: Option<f64>,
}

/// Failure while reading a state-set document.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("state {index}: {message}")]
    State { index: usize, message: String },

    #[error("{0}")]
    Schema(String),
}

/// Parses `{ "states": [ { "x": _, "y": _, "z": _ }, ... ] }`.
///
/// Each state may carry an optional `"radius_bits"` member. Errors in an
/// individual state report that state's zero-based index.
pub fn parse_state_set(text: &str) -> std::result::Result<Vec<StateEntry>, StateFileError> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| StateFileError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    let states = doc
        .get("states")
        .and_then(|s| s.as_array())
        .ok_or_else(|| StateFileError::Schema("missing \"states\" array".into()))?;
    if states.is_empty() {
        return Err(StateFileError::Schema("\"states\" array is empty".into()));
    }
    states
        .iter()
        .enumerate()
        .map(|(index, item)| {
            parse_entry(item).map_err(|message| StateFileError::State { index, message })
        })
        .collect()
}

fn parse_entry(item: &serde_json::Value) -> std::result::Result<StateEntry, String> {
    let coord = |key: &str| -> std::result::Result<f64, String> {
        item.get(key)
            .ok_or_else(|| format!("missing \"{key}\""))?
            .as_f64()
            .ok_or_else(|| format!("\"{key}\" is not a number"))
    };
    let state =
        BlochVector::new(coord("x")?, coord("y")?, coord("z")?).map_err(|e| e.to_string())?;
    let radius_bits = match item.get("radius_bits") {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => {
            let r = v.as_f64().ok_or("\"radius_bits\" is not a number")?;
            if !(r >= 0.0 && r.is_finite()) {
                return Err(format!(
                    "\"radius_bits\" must be a non-negative number, got {r}"
                ));
            }
            Some(r)
        }
    };
    Ok(StateEntry { state, radius_bits })
}

/// Serializes states in the format read by [`parse_state_set`].
pub fn write_state_set(states: &[BlochVector]) -> String {
    let items: Vec<_> = states
        .iter()
        .map(|s| serde_json::json!({ "x": s.x, "y": s.y, "z": s.z }))
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "states": items }))
        .expect("plain JSON values")
}
