use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer frequency pair (k1, k2), frequencies f = k/L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", from = "[i64; 2]")]
pub struct FrequencyPair {
    pub k1: i64,
    pub k2: i64,
}

impl From<FrequencyPair> for [i64; 2] {
    fn from(p: FrequencyPair) -> Self {
        [p.k1, p.k2]
    }
}

impl From<[i64; 2]> for FrequencyPair {
    fn from([k1, k2]: [i64; 2]) -> Self {
        Self { k1, k2 }
    }
}

impl FrequencyPair {
    pub fn new(k1: i64, k2: i64) -> Self {
        Self { k1, k2 }
    }

    /// 0 < k1 ≤ L/2, −k1 < k2 ≤ k1 and k1 + k2 ≢ 0 (mod L).
    ///
    /// The last condition drops (L/2, L/2), where the cumulant spectrum of a
    /// stationary series equals 2S(f1) instead of zero.
    pub fn in_principal_domain(&self, frame_length: usize) -> bool {
        let l = frame_length as i64;
        0 < self.k1 && 2 * self.k1 <= l && -self.k1 < self.k2 && self.k2 <= self.k1 && (self.k1 + self.k2).rem_euclid(l) != 0
    }
}

pub(crate) fn check_frame_length(frame_length: usize) -> Result<()> {
    if frame_length < 4 {
        return Err(Error::FrameLength {
            length: frame_length,
            reason: "must be at least 4".into(),
        });
    }
    if !frame_length.is_multiple_of(2) {
        return Err(Error::FrameLength {
            length: frame_length,
            reason: "must be even".into(),
        });
    }
    Ok(())
}

/// Every principal-domain pair for frame length L, sorted by (k1, k2).
pub fn principal_domain(frame_length: usize) -> Result<Vec<FrequencyPair>> {
    check_frame_length(frame_length)?;
    let half = frame_length as i64 / 2;
    let pairs = (1..=half)
        .flat_map(|k1| (-k1 + 1..=k1).map(move |k2| FrequencyPair::new(k1, k2)))
        .filter(|p| p.in_principal_domain(frame_length))
        .collect();
    Ok(pairs)
}

/// Closed-form size of the principal domain, L²/4 + L/2 − 1.
pub fn principal_domain_size(frame_length: usize) -> usize {
    frame_length * frame_length / 4 + frame_length / 2 - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scans the whole square [−L, L]² and keeps pairs satisfying the raw inequalities.
    fn brute_force(l: usize) -> Vec<FrequencyPair> {
        let li = l as i64;
        let mut out = Vec::new();
        for k1 in -li..=li {
            for k2 in -li..=li {
                let inside = 0 < k1 && 2 * k1 <= li && -k1 < k2 && k2 <= k1;
                if inside && (k1 + k2) % li != 0 {
                    out.push(FrequencyPair::new(k1, k2));
                }
            }
        }
        out
    }

    #[test]
    fn l4_pairs() {
        let got = principal_domain(4).unwrap();
        let want: Vec<_> = [(1, 0), (1, 1), (2, -1), (2, 0), (2, 1)]
            .into_iter()
            .map(|(a, b)| FrequencyPair::new(a, b))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn l10_has_29_pairs() {
        assert_eq!(principal_domain(10).unwrap().len(), 29);
        assert!(!principal_domain(10).unwrap().contains(&FrequencyPair::new(5, 5)));
    }

    #[test]
    fn count_formula_matches_enumeration() {
        for l in [4, 6, 8, 10, 16] {
            let bf = brute_force(l);
            assert_eq!(bf.len(), principal_domain_size(l), "L = {l}");
            assert_eq!(principal_domain(l).unwrap(), bf, "L = {l}");
        }
    }

    #[test]
    fn every_pair_satisfies_inequalities() {
        for l in (4..=40).step_by(2) {
            for p in principal_domain(l).unwrap() {
                let half = l as i64 / 2;
                assert!(0 < p.k1 && p.k1 <= half);
                assert!(-p.k1 < p.k2 && p.k2 <= p.k1);
                assert_ne!((p.k1 + p.k2).rem_euclid(l as i64), 0);
            }
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(principal_domain(3).is_err());
        assert!(principal_domain(2).is_err());
        assert!(principal_domain(9).is_err());
    }

    #[test]
    fn serializes_as_array() {
        let s = serde_json::to_string(&FrequencyPair::new(3, -2)).unwrap();
        assert_eq!(s, "[3,-2]");
    }
}
