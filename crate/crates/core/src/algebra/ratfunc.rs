//! Rational functions in `T` over F_p and their finite continued fractions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::Fp;
use super::poly::Poly;
use crate::contfrac::Word;
use crate::error::{Error, Result};

/// A reduced fraction `num / den` with `den` monic.
///
/// Because the representation is canonical, derived equality is equality of
/// rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = num.field();
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(f),
            });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let inv = f.inv(den.lead()).expect("nonzero");
        if inv != 1 {
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn zero(f: Fp) -> Self {
        Self::from_poly(Poly::zero(f))
    }

    pub fn one(f: Fp) -> Self {
        Self::from_poly(Poly::one(f))
    }

    pub fn field(&self) -> Fp {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree()? as i64)
    }

    pub fn inv(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// `self * x + c` style helpers used by the tail transforms.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        RatFunc::new(&self.num * p, self.den.clone()).expect("den nonzero")
    }

    /// Euclidean continued-fraction expansion `[l_1, ..., l_k]`.
    ///
    /// Every letter after the first has degree at least 1. Zero expands to
    /// the single letter `0`.
    pub fn cf(&self) -> Word {
        let f = self.field();
        if self.is_zero() {
            return Word::new(vec![Poly::zero(f)]);
        }
        let mut letters = Vec::new();
        let mut a = self.num.clone();
        let mut b = self.den.clone();
        while !b.is_zero() {
            let (q, r) = a.div_rem(&b).expect("nonzero divisor");
            letters.push(q);
            a = b;
            b = r;
        }
        // Euclid on polynomials cannot end on a constant quotient after the
        // first step (remainder degrees strictly drop), so the normal form
        // holds without merging.
        debug_assert!(letters.iter().skip(1).all(|l| l.deg_i64() >= 1));
        Word::new(letters)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self} mod {})", self.field().p())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("den nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("den nonzero")
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] otherwise.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

/// Convergents `(p_i, q_i)` of `[a_0, a_1, ...]`, indexed from 0, via
/// `p_i = a_i p_{i-1} + p_{i-2}` from `p_{-1} = 1, p_{-2} = 0` (same for `q`
/// from `q_{-1} = 0, q_{-2} = 1`).
///
/// They satisfy `p_i q_{i-1} - p_{i-1} q_i = (-1)^{i-1}`.
pub fn convergents(letters: &[Poly]) -> Vec<(Poly, Poly)> {
    let Some(first) = letters.first() else {
        return Vec::new();
    };
    let f = first.field();
    let mut out = Vec::with_capacity(letters.len());
    let (mut p_prev, mut q_prev) = (Poly::one(f), Poly::zero(f));
    let (mut p, mut q) = (first.clone(), Poly::one(f));
    out.push((p.clone(), q.clone()));
    for a in &letters[1..] {
        let p_next = &(a * &p) + &p_prev;
        let q_next = &(a * &q) + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
    }
    out
}
