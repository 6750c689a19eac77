//! DPS pulse-train encoding and the placement of protocol signals on the
//! Bloch ball.
//!
//! A bit is carried by the relative phase of two consecutive pulses, so bit
//! `k` touches pulses `k` and `k + 1` and the train is not a product of
//! independent per-bit signals.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::state::BlochVector;

/// Phase of each pulse, restricted to `0` or `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Zero,
    Pi,
}

impl Phase {
    pub fn radians(self) -> f64 {
        match self {
            Phase::Zero => 0.0,
            Phase::Pi => PI,
        }
    }

    /// Accepts angles within `1e-9` of `0`, `pi` or `2 pi`.
    pub fn from_radians(angle: f64) -> Option<Phase> {
        let a = angle.rem_euclid(2.0 * PI);
        if a < 1e-9 || (2.0 * PI - a) < 1e-9 {
            Some(Phase::Zero)
        } else if (a - PI).abs() < 1e-9 {
            Some(Phase::Pi)
        } else {
            None
        }
    }

    fn flipped(self) -> Phase {
        match self {
            Phase::Zero => Phase::Pi,
            Phase::Pi => Phase::Zero,
        }
    }
}

/// A train of coherent pulses of mean photon number `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    phases: Vec<Phase>,
    mu: f64,
}

impl PulseSequence {
    pub fn new(phases: Vec<Phase>, mu: f64) -> Result<Self> {
        if phases.len() < 2 {
            return Err(Error::TooShort { len: phases.len() });
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain("pulse intensity", mu));
        }
        Ok(PulseSequence { phases, mu })
    }

    pub fn from_radians(angles: &[f64], mu: f64) -> Result<Self> {
        let phases = angles
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                Phase::from_radians(value).ok_or(Error::InvalidPhase { index, value })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(phases, mu)
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn radians(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.radians()).collect()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Non-empty ordered key bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalBits(Vec<bool>);

impl LogicalBits {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(LogicalBits(bits))
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(domain("bit character position", i as f64)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for LogicalBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// N bits become N + 1 pulses. The first pulse has phase 0; a `1` flips the
/// phase of the next pulse by `pi`, a `0` repeats it.
pub fn encode_dps(bits: &LogicalBits, mu: f64) -> Result<PulseSequence> {
    let mut phases = Vec::with_capacity(bits.len() + 1);
    let mut current = Phase::Zero;
    phases.push(current);
    for &bit in bits.bits() {
        if bit {
            current = current.flipped();
        }
        phases.push(current);
    }
    PulseSequence::new(phases, mu)
}

pub fn decode_dps(seq: &PulseSequence) -> Result<LogicalBits> {
    if seq.len() < 2 {
        return Err(Error::TooShort { len: seq.len() });
    }
    LogicalBits::new(seq.phases.windows(2).map(|w| w[0] != w[1]).collect())
}

/// `<alpha|-alpha> = exp(-2 |alpha|^2)`.
pub fn coherent_overlap(alpha_sq: f64) -> Result<f64> {
    if alpha_sq.is_nan() || alpha_sq < 0.0 {
        return Err(domain("mean photon number", alpha_sq));
    }
    Ok((-2.0 * alpha_sq).exp())
}

/// Bloch vectors of `|+-alpha> = a|0> +- b|1>` with
/// `a^2 = (1 + e^{-2 mu})/2`, `b^2 = (1 - e^{-2 mu})/2`.
///
/// For real amplitudes the Bloch vector is `(+-2ab, 0, a^2 - b^2)`.
pub fn b92_signal_states(mu_alpha: f64) -> Result<(BlochVector, BlochVector)> {
    let overlap = coherent_overlap(mu_alpha)?;
    let a = ((1.0 + overlap) / 2.0).sqrt();
    let b = ((1.0 - overlap) / 2.0).sqrt();
    let z = overlap;
    let x = 2.0 * a * b;
    Ok((BlochVector::new(x, 0.0, z)?, BlochVector::new(-x, 0.0, z)?))
}

/// The four pure signals used by the sweeps: the `0`-phase pair `|0>`, `|1>`
/// on the polar axis and the two equatorial superpositions on the x axis.
/// Each pair is antipodal, i.e. its members differ by a `pi` phase.
pub fn protocol_test_states() -> [BlochVector; 4] {
    [
        BlochVector::from_raw(0.0, 0.0, 1.0),
        BlochVector::from_raw(0.0, 0.0, -1.0),
        BlochVector::from_raw(1.0, 0.0, 0.0),
        BlochVector::from_raw(-1.0, 0.0, 0.0),
    ]
}

/// The equatorial members of [`protocol_test_states`].
pub fn equatorial_test_states() -> [BlochVector; 2] {
    let all = protocol_test_states();
    [all[2], all[3]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> LogicalBits {
        LogicalBits::parse(s).unwrap()
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(
            encode_dps(&bits("0"), 0.2).unwrap().radians(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            encode_dps(&bits("1"), 0.2).unwrap().radians(),
            vec![0.0, PI]
        );
        assert_eq!(
            encode_dps(&bits("011"), 0.2).unwrap().radians(),
            vec![0.0, 0.0, PI, 0.0]
        );
        assert!(encode_dps(&bits("0"), 0.0).is_err());
        assert_eq!(LogicalBits::new(vec![]), Err(Error::EmptyInput));
        assert!(LogicalBits::parse("01a").is_err());
    }

    #[test]
    fn decoding_examples() {
        let seq = PulseSequence::from_radians(&[0.0, 0.0], 0.1).unwrap();
        assert_eq!(decode_dps(&seq).unwrap().to_string(), "0");
        let seq = PulseSequence::from_radians(&[0.0, PI], 0.1).unwrap();
        assert_eq!(decode_dps(&seq).unwrap().to_string(), "1");
        let seq = PulseSequence::from_radians(&[0.0, 0.0, PI, 0.0], 0.1).unwrap();
        assert_eq!(decode_dps(&seq).unwrap().to_string(), "011");
        assert_eq!(
            PulseSequence::from_radians(&[0.0], 0.1),
            Err(Error::TooShort { len: 1 })
        );
        assert!(matches!(
            PulseSequence::from_radians(&[0.0, 1.0], 0.1),
            Err(Error::InvalidPhase { index: 1, .. })
        ));
    }

    #[test]
    fn flipping_one_bit_flips_the_whole_suffix() {
        let original = bits("0110100");
        let mut flipped = original.bits().to_vec();
        flipped[3] = !flipped[3];
        let a = encode_dps(&original, 0.1).unwrap();
        let b = encode_dps(&LogicalBits::new(flipped).unwrap(), 0.1).unwrap();
        let differs: Vec<bool> = a
            .phases()
            .iter()
            .zip(b.phases())
            .map(|(p, q)| p != q)
            .collect();
        // pulses 0..=3 unchanged, every pulse from 4 on changed
        assert_eq!(
            differs,
            vec![false, false, false, false, true, true, true, true]
        );
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(coherent_overlap(0.0).unwrap(), 1.0);
        assert!((coherent_overlap(0.5).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!(coherent_overlap(-0.1).is_err());
        let grid: Vec<f64> = (0..50)
            .map(|i| coherent_overlap(i as f64 * 0.1).unwrap())
            .collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn b92_states() {
        let (p, m) = b92_signal_states(0.0).unwrap();
        assert_eq!(p.to_array(), [0.0, 0.0, 1.0]);
        assert_eq!(m.to_array(), [0.0, 0.0, 1.0]);

        let (p, _) = b92_signal_states(40.0).unwrap();
        assert!((p.x() - 1.0).abs() < 1e-15 && p.z().abs() < 1e-15);

        let (p, m) = b92_signal_states(0.25).unwrap();
        // a^2 = (1 + e^{-1/2})/2, z = 2a^2 - 1 = e^{-1/2}
        assert!((p.z() - 0.606_530_659_712_633_4).abs() < 1e-15);
        let a2: f64 = 0.803_265_329_856_316_7;
        assert!((p.x() - 2.0 * (a2 * (1.0 - a2)).sqrt()).abs() < 1e-12);
        assert_eq!(m.x(), -p.x());
        assert!((p.radius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn test_states_are_two_antipodal_pure_pairs() {
        let s = protocol_test_states();
        assert!(s.iter().all(|v| v.radius() == 1.0));
        assert!(s.contains(&BlochVector::new(0.0, 0.0, 1.0).unwrap()));
        assert_eq!(s[0], -s[1]);
        assert_eq!(s[2], -s[3]);
    }
}
