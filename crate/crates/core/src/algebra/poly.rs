//! Dense polynomials in `T` over F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Coeff, Fp};
use super::kernels;
use crate::error::{Error, Result};

/// Largest degree a checked operation will materialize.
pub const MAX_DEGREE: u64 = 1 << 28;

/// A polynomial in `T` over F_p, coefficients stored by increasing exponent.
///
/// The top coefficient is never zero; the zero polynomial has no
/// coefficients and no integer degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Fp,
    coeffs: Vec<Coeff>,
}

impl Poly {
    pub fn from_coeffs(field: Fp, mut coeffs: Vec<Coeff>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.p()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// Builds from signed integer coefficients (lowest exponent first).
    pub fn from_ints(field: Fp, ints: &[i64]) -> Self {
        Self::from_coeffs(field, ints.iter().map(|&v| field.reduce(v)).collect())
    }

    pub fn zero(field: Fp) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Fp) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: Fp, c: Coeff) -> Self {
        Self::from_coeffs(field, vec![c % field.p()])
    }

    /// `c * T^e`
    pub fn monomial(field: Fp, c: Coeff, e: usize) -> Self {
        let c = c % field.p();
        if c == 0 {
            return Self::zero(field);
        }
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Poly { field, coeffs }
    }

    /// The variable `T`.
    pub fn t(field: Fp) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// Uniformly random polynomial of exact degree `deg`.
    pub fn random<R: rand::Rng + ?Sized>(field: Fp, deg: usize, rng: &mut R) -> Self {
        let p = field.p();
        let mut coeffs: Vec<Coeff> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        coeffs.push(rng.gen_range(1..p));
        Self::from_coeffs(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Coeff> {
        self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` stands for the degree of zero (minus infinity).
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, with zero mapped to `i64::MIN`.
    pub fn deg_i64(&self) -> i64 {
        self.degree().map_or(i64::MIN, |d| d as i64)
    }

    pub fn lead(&self) -> Coeff {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, e: usize) -> Coeff {
        self.coeffs.get(e).copied().unwrap_or(0)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `a(0)`, i.e. the class of `a` modulo `T`.
    pub fn residue_at_zero(&self) -> Coeff {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn scale(&self, c: Coeff) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Multiplies by `T^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field,
            coeffs,
        }
    }

    /// Exact division by `T^k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|&c| c != 0) {
            return Err(Error::InexactDivision(format!("({self}) / T^{k}")));
        }
        Ok(Poly {
            field: self.field,
            coeffs: self.coeffs.get(k..).map(|s| s.to_vec()).unwrap_or_default(),
        })
    }

    pub fn divisible_by_t(&self) -> bool {
        self.residue_at_zero() == 0
    }

    /// Euclidean division; quotient rows with a zero coefficient are skipped,
    /// so sparse quotients are cheap.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(dn) = self.degree() else {
            return Ok((Poly::zero(f), Poly::zero(f)));
        };
        if dn < dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(d.lead()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0; dn - dd + 1];
        for e in (0..=dn - dd).rev() {
            let c = f.mul(rem[e + dd], lead_inv);
            if c == 0 {
                continue;
            }
            quo[e] = c;
            kernels::sub_scaled(f, &mut rem[e..=e + dd], &d.coeffs, c);
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(f, quo), Poly::from_coeffs(f, rem)))
    }

    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision(format!("({self}) / ({d})")))
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `a^r` for `r = p^t`: the coefficient at `T^k` moves to `T^{rk}`.
    /// Coefficients are fixed because they lie in the prime field.
    pub fn frobenius(&self, r: u64) -> Result<Poly> {
        self.field.check_power(r)?;
        let Some(d) = self.degree() else {
            return Ok(self.clone());
        };
        let top = (d as u64)
            .checked_mul(r)
            .filter(|&v| v <= MAX_DEGREE)
            .ok_or_else(|| Error::Overflow(format!("degree {d} * {r}")))? as usize;
        let mut coeffs = vec![0; top + 1];
        let r = r as usize;
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * r] = c;
        }
        Ok(Poly {
            field: self.field,
            coeffs,
        })
    }

    /// Parses the text grammar `c*T^e + ... + c`, e.g. `2*T^3+1*T+2`.
    ///
    /// Coefficients may be omitted (`T^2`), signed, or out of range; they are
    /// reduced mod p. Terms may come in any order and repeat.
    pub fn parse(field: Fp, s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc: Vec<i64> = Vec::new();
        let p = field.p() as i64;
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let bad = || Error::Parse(format!("bad term {term:?}"));
            let (coef, exp) = match body.find('T') {
                None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let coef = match &body[..pos] {
                        "" => 1,
                        c => c
                            .strip_suffix('*')
                            .ok_or_else(bad)?
                            .parse::<i64>()
                            .map_err(|_| bad())?,
                    };
                    let exp = match &body[pos + 1..] {
                        "" => 1,
                        e => e
                            .strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?,
                    };
                    (coef, exp)
                }
            };
            if exp >= acc.len() {
                acc.resize(exp + 1, 0);
            }
            let c = coef.rem_euclid(p);
            acc[exp] = (acc[exp] + if neg { p - c } else { c }) % p;
        }
        Ok(Poly::from_ints(field, &acc))
    }
}

impl fmt::Display for Poly {
    /// `2*T^3+T+2`; coefficient 1 is left implicit on non-constant terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (e, 1) => write!(f, "T^{e}")?,
                (e, c) => write!(f, "{c}*T^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self} mod {})", self.field.p())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = self.field;
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut c = long.coeffs.clone();
        for (d, &s) in c.iter_mut().zip(&short.coeffs) {
            *d = f.add(*d, s);
        }
        Poly::from_coeffs(f, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly {
            field: f,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::from_coeffs(
            self.field,
            kernels::mul_trunc(self.field, &self.coeffs, &rhs.coeffs, usize::MAX),
        )
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
