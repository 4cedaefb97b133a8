//! Permutations of {0,1,2,3}, used as face gluing maps between tetrahedra.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A bijection on {0,1,2,3}. `image[i]` is where vertex `i` goes.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm4 {
    image: [u8; 4],
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { image: [0, 1, 2, 3] };

    pub fn new(image: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &v in &image {
            if v > 3 || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm4 { image })
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.image[v as usize]
    }

    pub fn inverse(&self) -> Perm4 {
        let mut image = [0u8; 4];
        for i in 0..4 {
            image[self.image[i] as usize] = i as u8;
        }
        Perm4 { image }
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut image = [0u8; 4];
        for i in 0..4 {
            image[i] = self.apply(other.apply(i as u8));
        }
        Perm4 { image }
    }

    /// Sign of the permutation: +1 for even, -1 for odd.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.image[i] > self.image[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Parses the 4-character digit string used in `.tri` files, e.g. "0123".
    pub fn parse(s: &str) -> Option<Perm4> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return None;
        }
        let mut image = [0u8; 4];
        for i in 0..4 {
            if !bytes[i].is_ascii_digit() {
                return None;
            }
            image[i] = bytes[i] - b'0';
        }
        Perm4::new(image)
    }

    pub fn image(&self) -> [u8; 4] {
        self.image
    }

    /// All 24 permutations, in lexicographic order of their images.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Some(p) = Perm4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}{}",
            self.image[0], self.image[1], self.image[2], self.image[3]
        )
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        for p in Perm4::all() {
            assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(&p), Perm4::IDENTITY);
        }
    }

    #[test]
    fn sign_multiplicative() {
        let all = Perm4::all();
        assert_eq!(all.len(), 24);
        for p in &all {
            for q in &all {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
    }

    #[test]
    fn parse_rejects_bad_strings() {
        assert!(Perm4::parse("0123").is_some());
        assert!(Perm4::parse("0124").is_none());
        assert!(Perm4::parse("0122").is_none());
        assert!(Perm4::parse("012").is_none());
    }
}
