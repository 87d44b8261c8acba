use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p. All arithmetic goes through `u64` so any `u32`
/// prime is safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Fp {
    p: u32,
}

impl TryFrom<u32> for Fp {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Fp::new(p)
    }
}

impl From<Fp> for u32 {
    fn from(f: Fp) -> u32 {
        f.p
    }
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Fp { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse by Fermat. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let m = self.p as u64;
        let mut base = a as u64 % m;
        let mut acc = 1u64 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u32
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, odd: bool) -> u32 {
        if odd {
            self.neg(1)
        } else {
            1 % self.p
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for rendering.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    /// `v += c * w`, entrywise.
    pub fn axpy(self, v: &mut [u32], c: u32, w: &[u32]) {
        if c == 0 {
            return;
        }
        for (x, &y) in v.iter_mut().zip(w) {
            if y != 0 {
                *x = self.add(*x, self.mul(c, y));
            }
        }
    }

    pub fn scale(self, v: &mut [u32], c: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}
