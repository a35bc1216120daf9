use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CHARACTERISTIC: u64 = 32003;

/// The prime field GF(p). Elements are represented by `u32` residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p - b as u64) % self.p) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            (self.p - a as u64) as u32
        }
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a as u64 % self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc as u32
    }

    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn from_u128(&self, v: u128) -> u32 {
        (v % self.p as u128) as u32
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            p: DEFAULT_CHARACTERISTIC,
        }
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert_eq!(FieldSpec::new(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::new(32004), Err(Error::NotPrime(32004)));
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(32003).is_ok());
    }

    #[test]
    fn inverses() {
        let f = FieldSpec::new(32003).unwrap();
        for a in [1u32, 2, 17, 32002] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.from_i64(-1), 32002);
    }
}
