//! Exponent triads of Manning-form coordinate transformations.
//!
//! Exponents are stored doubled (`2m ∈ {−2, …, 2}`) so membership and sums
//! are exact integer tests.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A permissible triad `(m₁, m₂, m₃)` held as doubled integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i8; 3]", into = "[i8; 3]")]
pub struct Triad([i8; 3]);

/// Class representatives in catalog order (doubled exponents).
pub const CLASSES: [[i8; 3]; 11] = [
    [2, 2, 2],
    [2, 2, 1],
    [2, 2, 0],
    [2, 2, -1],
    [2, 2, -2],
    [2, 1, 1],
    [2, 1, 0],
    [2, 1, -1],
    [2, 0, 0],
    [1, 1, 1],
    [1, 1, 0],
];

/// Test of both admissibility constraints on doubled exponents.
pub fn is_permissible(d: [i8; 3]) -> bool {
    let s: i32 = d.iter().map(|&x| x as i32).sum();
    d.iter().all(|&x| (-2..=2).contains(&x)) && (2..=6).contains(&s)
}

impl Triad {
    pub fn from_doubled(d: [i8; 3]) -> Result<Self> {
        if is_permissible(d) {
            Ok(Triad(d))
        } else {
            Err(Error::NotPermissible(d))
        }
    }

    /// Builds a triad from exponents given as reals; each must be a multiple of ½.
    pub fn from_exponents(m: [f64; 3]) -> Result<Self> {
        let mut d = [0i8; 3];
        for (k, &mk) in m.iter().enumerate() {
            let twice = 2.0 * mk;
            if (twice - twice.round()).abs() > 1e-12 || twice.abs() > 2.5 {
                return Err(Error::InvalidSpec(format!("exponent {mk} is not in {{-1,-1/2,0,1/2,1}}")));
            }
            d[k] = twice.round() as i8;
        }
        Self::from_doubled(d)
    }

    pub fn doubled(&self) -> [i8; 3] {
        self.0
    }

    pub fn m(&self, i: usize) -> f64 {
        self.0[i] as f64 / 2.0
    }

    pub fn exponents(&self) -> [f64; 3] {
        [self.m(0), self.m(1), self.m(2)]
    }

    /// Σmᵢ.
    pub fn sum(&self) -> f64 {
        self.0.iter().map(|&x| x as f64).sum::<f64>() / 2.0
    }

    pub fn is_half_integer(&self, i: usize) -> bool {
        self.0[i] % 2 != 0
    }

    /// Catalog row (1..=11) of this triad's class.
    pub fn class_index(&self) -> usize {
        let c = canonical_class(*self).0;
        CLASSES.iter().position(|r| *r == c).expect("every class is listed") + 1
    }
}

impl TryFrom<[i8; 3]> for Triad {
    type Error = Error;
    fn try_from(d: [i8; 3]) -> Result<Self> {
        Triad::from_doubled(d)
    }
}

impl From<Triad> for [i8; 3] {
    fn from(t: Triad) -> [i8; 3] {
        t.0
    }
}

impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|&d| half_to_string(d)).collect();
        write!(f, "({})", s.join(", "))
    }
}

fn half_to_string(d: i8) -> String {
    if d % 2 == 0 {
        format!("{}", d / 2)
    } else {
        format!("{d}/2")
    }
}

/// All 35 permissible triads, lexicographically descending.
pub fn enumerate_triads() -> Vec<Triad> {
    let mut out = Vec::with_capacity(35);
    for a in (-2..=2).rev() {
        for b in (-2..=2).rev() {
            for c in (-2..=2).rev() {
                if is_permissible([a, b, c]) {
                    out.push(Triad([a, b, c]));
                }
            }
        }
    }
    out
}

/// Permutation-orbit representative: components sorted non-increasing.
pub fn canonical_class(t: Triad) -> Triad {
    let mut d = t.0;
    d.sort_unstable_by(|x, y| y.cmp(x));
    Triad(d)
}

/// Checked version for raw doubled input.
pub fn canonical_class_of(d: [i8; 3]) -> Result<Triad> {
    Triad::from_doubled(d).map(canonical_class)
}

/// Index permutation `p` with `canonical[k] = t[p[k]]`; stable for ties.
pub fn canonical_permutation(t: Triad) -> [usize; 3] {
    let mut p = [0usize, 1, 2];
    p.sort_by(|&i, &j| t.0[j].cmp(&t.0[i]));
    p
}

/// The 11 class representatives in catalog order.
pub fn classes() -> Vec<Triad> {
    CLASSES.iter().map(|&d| Triad(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn census() {
        let all = enumerate_triads();
        assert_eq!(all.len(), 35);
        assert!(all.contains(&Triad([2, 2, 2])));
        assert!(!all.iter().any(|t| t.0 == [-2, -2, -2]));
        let classes: BTreeSet<_> = all.iter().map(|&t| canonical_class(t)).collect();
        assert_eq!(classes.len(), 11);
        let listed: BTreeSet<_> = self::classes().into_iter().collect();
        assert_eq!(classes, listed);
    }

    #[test]
    fn ordering_is_descending() {
        let all = enumerate_triads();
        assert!(all.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(all[0].0, [2, 2, 2]);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_class_of([0, 2, 2]).unwrap().0, [2, 2, 0]);
        assert_eq!(canonical_class_of([2, 2, -2]).unwrap().0, [2, 2, -2]);
        assert!(matches!(canonical_class_of([-2, -2, -2]), Err(Error::NotPermissible(_))));
    }

    #[test]
    fn permutation_reorders() {
        let t = Triad([0, 1, 2]);
        let p = canonical_permutation(t);
        assert_eq!([t.0[p[0]], t.0[p[1]], t.0[p[2]]], [2, 1, 0]);
        let t = Triad([2, 0, 2]);
        assert_eq!(canonical_permutation(t), [0, 2, 1]);
    }

    #[test]
    fn serde_roundtrip_and_rejection() {
        let t = Triad([2, 1, -1]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, "[2,1,-1]");
        let back: Triad = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Triad>("[-2,-2,0]").is_err());
    }

    #[test]
    fn display_halves() {
        assert_eq!(Triad([2, 1, -1]).to_string(), "(1, 1/2, -1/2)");
        assert_eq!(Triad([2, 1, -1]).class_index(), 8);
    }
}
