//! The prime field F_p.
//!
//! Elements are plain `u32` residues in `[0, p)`; the [`Fp`] handle carries
//! the modulus and is `Copy`, so every polynomial and series stores its own.

use crate::error::{Error, Result};

/// A residue in `[0, p)`.
pub type Coeff = u32;

/// The prime field F_p for a machine-word prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn reduce(&self, v: i64) -> Coeff {
        v.rem_euclid(self.p as i64) as Coeff
    }

    #[inline]
    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Coeff, b: Coeff) -> Coeff {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % self.p as u64) as Coeff
    }

    pub fn pow(&self, mut a: Coeff, mut e: u64) -> Coeff {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Coeff) -> Option<Coeff> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// `r = p^t`, checked for overflow.
    pub fn frobenius_power(&self, t: u32) -> Result<u64> {
        if t == 0 {
            return Err(Error::Config("t must be at least 1".into()));
        }
        (self.p as u64)
            .checked_pow(t)
            .ok_or_else(|| Error::Overflow(format!("{}^{}", self.p, t)))
    }

    /// Fails unless `r` is `p^t` for some `t >= 1`.
    pub fn check_power(&self, r: u64) -> Result<()> {
        let p = self.p as u64;
        let mut q = r;
        if q < p {
            return Err(Error::NotPrimePower { r, p: self.p });
        }
        while q % p == 0 {
            q /= p;
        }
        if q == 1 {
            Ok(())
        } else {
            Err(Error::NotPrimePower { r, p: self.p })
        }
    }
}
