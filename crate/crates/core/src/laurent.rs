//! Truncated Laurent series in `1/T` over F_p with certified precision.
//!
//! A [`Laurent`] value stores a dense window of coefficients from its top
//! exponent down to `prec`; every coefficient at an exponent `>= prec` is
//! exactly known, nothing below it is claimed. All operations propagate
//! `prec` pessimistically so the window stays sound.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{kernels, Coeff, Fp, Poly, RatFunc};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: Fp,
    top: i64,
    prec: i64,
    // coeffs[i] is the coefficient of T^(top - i); len == top - prec + 1.
    coeffs: Vec<Coeff>,
}

/// Wire form: `{top, prec, coeffs: [c_top, ..., c_prec]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub top: i64,
    pub prec: i64,
    pub coeffs: Vec<Coeff>,
}

impl Laurent {
    /// Builds from a window `coeffs[i] = coefficient of T^(top - i)`; the
    /// window's last entry sits at exponent `prec`.
    pub fn from_window(field: Fp, top: i64, coeffs: Vec<Coeff>) -> Self {
        let prec = top - coeffs.len() as i64 + 1;
        let mut s = Laurent {
            field,
            top,
            prec,
            coeffs,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.top -= lead_zeros as i64;
        }
        debug_assert_eq!(self.top - self.prec + 1, self.coeffs.len() as i64);
    }

    /// The unknown quantity `O(T^(prec-1))`: nothing certified but its bound.
    pub fn zero(field: Fp, prec: i64) -> Self {
        Laurent {
            field,
            top: prec - 1,
            prec,
            coeffs: Vec::new(),
        }
    }

    /// An exact polynomial, known down to exponent `prec`.
    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        let f = p.field();
        let Some(d) = p.degree() else {
            return Self::zero(f, prec);
        };
        let top = (d as i64).max(prec - 1);
        let len = (top - prec + 1).max(0) as usize;
        let coeffs = (0..len)
            .map(|i| {
                let e = top - i as i64;
                if e >= 0 {
                    p.coeff(e as usize)
                } else {
                    0
                }
            })
            .collect();
        Self::from_window(f, top, coeffs)
    }

    /// `c * T^e` known down to `prec`.
    pub fn monomial(field: Fp, c: Coeff, e: i64, prec: i64) -> Self {
        if e < prec || c % field.p() == 0 {
            return Self::zero(field, prec);
        }
        let mut coeffs = vec![0; (e - prec + 1) as usize];
        coeffs[0] = c % field.p();
        Self::from_window(field, e, coeffs)
    }

    pub fn one(field: Fp, prec: i64) -> Self {
        Self::monomial(field, 1, 0, prec)
    }

    /// Long-division expansion of a rational function, certified to `prec`.
    pub fn from_ratfunc(rf: &RatFunc, prec: i64) -> Self {
        let f = rf.field();
        let Some(top) = rf.degree() else {
            return Self::zero(f, prec);
        };
        if top < prec {
            return Self::zero(f, prec);
        }
        let len = (top - prec + 1) as usize;
        let mut num: Vec<Coeff> = rf.num().coeffs().to_vec();
        num.reverse();
        let mut den: Vec<Coeff> = rf.den().coeffs().to_vec();
        den.reverse();
        let inv = kernels::inv_series(f, &den, len);
        let coeffs = kernels::mul_trunc(f, &num, &inv, len);
        let mut coeffs = coeffs;
        coeffs.resize(len, 0);
        Self::from_window(f, top, coeffs)
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    /// All coefficients at exponents `>= prec` are exact.
    #[inline]
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the leading term, or `None` when no nonzero coefficient
    /// is certified (the value is indistinguishable from zero).
    pub fn degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.top)
        }
    }

    /// Top of the stored window; `prec - 1` when nothing is certified.
    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn is_zero_so_far(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense window from the top exponent down to `prec`.
    pub fn window(&self) -> &[Coeff] {
        &self.coeffs
    }

    /// Coefficient of `T^e`, `None` if `e` is below the certified range.
    pub fn coeff(&self, e: i64) -> Option<Coeff> {
        if e < self.prec {
            None
        } else if e > self.top {
            Some(0)
        } else {
            Some(self.coeffs[(self.top - e) as usize])
        }
    }

    /// Forgets everything below `prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec <= self.prec {
            return self.clone();
        }
        if prec > self.top {
            return Self::zero(self.field, prec);
        }
        let len = (self.top - prec + 1) as usize;
        Laurent {
            field: self.field,
            top: self.top,
            prec,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// The same coefficients, now read as exact down to `prec` (no-op if
    /// already finer).
    pub fn pad(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero_so_far() {
            return Self::zero(self.field, prec);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((self.top - prec + 1) as usize, 0);
        Laurent {
            field: self.field,
            top: self.top,
            prec,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Laurent {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, rhs: &Laurent) -> Self {
        let f = self.field;
        let prec = self.prec.max(rhs.prec);
        let top = self.top.max(rhs.top);
        if top < prec {
            return Self::zero(f, prec);
        }
        let mut out = vec![0; (top - prec + 1) as usize];
        for s in [self, rhs] {
            for (i, &c) in s.coeffs.iter().enumerate() {
                let e = s.top - i as i64;
                if e < prec {
                    break;
                }
                let j = (top - e) as usize;
                out[j] = f.add(out[j], c);
            }
        }
        Self::from_window(f, top, out)
    }

    pub fn sub(&self, rhs: &Laurent) -> Self {
        self.add(&rhs.neg())
    }

    /// Product; the certified bound is `max(prec_x + deg y, prec_y + deg x)`.
    pub fn mul(&self, rhs: &Laurent) -> Self {
        let f = self.field;
        match (self.degree(), rhs.degree()) {
            (Some(dx), Some(dy)) => {
                let prec = (self.prec + dy).max(rhs.prec + dx);
                let len = self.coeffs.len().min(rhs.coeffs.len());
                let mut c = kernels::mul_trunc(f, &self.coeffs, &rhs.coeffs, len);
                c.resize(len, 0);
                let s = Self::from_window(f, dx + dy, c);
                debug_assert_eq!(s.prec, prec);
                s
            }
            (None, Some(dy)) => Self::zero(f, self.prec + dy),
            (Some(dx), None) => Self::zero(f, rhs.prec + dx),
            (None, None) => Self::zero(f, self.prec + rhs.prec - 1),
        }
    }

    /// Multiplies by an exact polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let Some(d) = p.degree() else {
            return Self::zero(self.field, self.prec);
        };
        // Padding the exact factor to the same relative length makes the
        // product's bound exactly prec_x + deg p.
        let exact = Self::from_poly(p, d as i64 - self.coeffs.len() as i64 + 1);
        self.mul(&exact)
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            top: self.top + k,
            prec: self.prec + k,
            ..self.clone()
        }
    }

    /// Multiplicative inverse; the certified bound moves to
    /// `prec_x - 2 * deg x`, so the relative window length is preserved.
    pub fn inv(&self) -> Result<Self> {
        let d = self
            .degree()
            .ok_or(Error::IndistinguishableFromZero { prec: self.prec })?;
        let len = self.coeffs.len();
        let c = kernels::inv_series(self.field, &self.coeffs, len);
        Ok(Self::from_window(self.field, -d, c))
    }

    pub fn div(&self, rhs: &Laurent) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `x^r` for `r = p^t`: the exponent `k` moves to `r k`. Coefficients are
    /// certified for all exponents `>= r (prec - 1) + 1`, since the error
    /// term of degree `<= prec - 1` is sent to degree `<= r (prec - 1)`.
    pub fn frobenius(&self, r: u64) -> Result<Self> {
        self.frobenius_floor(r, i64::MIN)
    }

    /// [`Laurent::frobenius`], dropping everything below `floor`.
    pub fn frobenius_floor(&self, r: u64, floor: i64) -> Result<Self> {
        self.field.check_power(r)?;
        let ri = i64::try_from(r).map_err(|_| Error::Overflow(format!("r = {r}")))?;
        let ovf = || Error::Overflow(format!("frobenius exponent {r} * window"));
        let prec = (self.prec - 1)
            .checked_mul(ri)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(ovf)?
            .max(floor);
        let Some(d) = self.degree() else {
            return Ok(Self::zero(self.field, prec));
        };
        let top = d.checked_mul(ri).ok_or_else(ovf)?;
        if top < prec {
            return Ok(Self::zero(self.field, prec));
        }
        let len = (top - prec + 1) as usize;
        let mut out = vec![0; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = i * r as usize;
            if j >= len {
                break;
            }
            out[j] = c;
        }
        Ok(Self::from_window(self.field, top, out))
    }

    /// Terms with nonnegative exponent; requires the integer part certified.
    pub fn polynomial_part(&self) -> Result<Poly> {
        if self.prec > 0 {
            return Err(Error::IntegerPartUncertified { prec: self.prec });
        }
        if self.top < 0 {
            return Ok(Poly::zero(self.field));
        }
        let mut c: Vec<Coeff> = self.coeffs[..=self.top as usize].to_vec();
        c.reverse();
        Ok(Poly::from_coeffs(self.field, c))
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson {
            top: self.top,
            prec: self.prec,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn from_json(field: Fp, j: &LaurentJson) -> Result<Self> {
        if j.top - j.prec + 1 != j.coeffs.len() as i64 {
            return Err(Error::Parse(format!(
                "window [{}, {}] does not match {} coefficients",
                j.prec,
                j.top,
                j.coeffs.len()
            )));
        }
        if let Some(&c) = j.coeffs.iter().find(|&&c| c >= field.p()) {
            return Err(Error::Parse(format!("coefficient {c} out of range")));
        }
        let mut s = Laurent {
            field,
            top: j.top,
            prec: j.prec,
            coeffs: j.coeffs.clone(),
        };
        s.normalize();
        Ok(s)
    }

    /// Parses `c*T^e + ... + O(T^k)`, where the O-term marks `prec = k + 1`.
    pub fn parse(field: Fp, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: &str| Error::Parse(format!("{m} in {s:?}"));
        let o_pos = s.rfind("O(T^").ok_or_else(|| bad("missing O-term"))?;
        let o_exp: i64 = s[o_pos + 4..]
            .strip_suffix(')')
            .ok_or_else(|| bad("unterminated O-term"))?
            .parse()
            .map_err(|_| bad("bad O-term exponent"))?;
        let prec = o_exp + 1;
        let body = s[..o_pos].trim_end_matches('+');
        let mut terms: Vec<(i64, i64)> = Vec::new();
        if !body.is_empty() {
            let bytes = body.as_bytes();
            let mut start = 0;
            let mut pieces = Vec::new();
            for i in 1..bytes.len() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                    pieces.push(&body[start..i]);
                    start = i;
                }
            }
            pieces.push(&body[start..]);
            for t in pieces {
                let t = t.strip_prefix('+').unwrap_or(t);
                let (neg, t) = match t.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, t),
                };
                let (c, e) = match t.find('T') {
                    None => (t.parse::<i64>().map_err(|_| bad("bad term"))?, 0),
                    Some(pos) => {
                        let c = match &t[..pos] {
                            "" => 1,
                            c => c
                                .strip_suffix('*')
                                .ok_or_else(|| bad("bad coefficient"))?
                                .parse()
                                .map_err(|_| bad("bad coefficient"))?,
                        };
                        let e = match &t[pos + 1..] {
                            "" => 1,
                            e => e
                                .strip_prefix('^')
                                .ok_or_else(|| bad("bad exponent"))?
                                .parse()
                                .map_err(|_| bad("bad exponent"))?,
                        };
                        (c, e)
                    }
                };
                if e < prec {
                    return Err(bad("term below the O-term"));
                }
                terms.push((if neg { -c } else { c }, e));
            }
        }
        let top = terms.iter().map(|&(_, e)| e).max().unwrap_or(prec - 1);
        let mut coeffs = vec![0; (top - prec + 1).max(0) as usize];
        for (c, e) in terms {
            let j = (top - e) as usize;
            coeffs[j] = field.add(coeffs[j], field.reduce(c));
        }
        Ok(Self::from_window(field, top.max(prec - 1), coeffs))
    }
}

impl fmt::Display for Laurent {
    /// `2*T^1+1*T^-2+O(T^-5)`: nonzero terms with explicit exponents, then
    /// the first uncertified exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                write!(f, "{c}*T^{}+", self.top - i as i64)?;
            }
        }
        write!(f, "O(T^{})", self.prec - 1)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() > 40 {
            write!(
                f,
                "Laurent(top={}, prec={}, {} coeffs mod {})",
                self.top,
                self.prec,
                self.coeffs.len(),
                self.field.p()
            )
        } else {
            write!(f, "Laurent({self} mod {})", self.field.p())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }
    fn poly(p: u64, s: &str) -> Poly {
        Poly::parse(f(p), s).unwrap()
    }

    #[test]
    fn inverse_of_t() {
        let t = Laurent::from_poly(&poly(3, "T"), -20);
        let inv = t.inv().unwrap();
        assert_eq!(inv.degree(), Some(-1));
        assert_eq!(inv.prec(), -22);
        assert_eq!(inv.coeff(-1), Some(1));
        assert!((-22..-1).all(|e| inv.coeff(e) == Some(0)));
    }

    #[test]
    fn long_division_oracle() {
        // T/(T^4+1) over F_3 by hand: T^-3 - T^-7 + T^-11 - ...
        let rf = RatFunc::new(poly(3, "T"), poly(3, "T^4+1")).unwrap();
        let s = Laurent::from_ratfunc(&rf, -15);
        let mut expect = vec![0; 13];
        expect[0] = 1; // T^-3
        expect[4] = 2; // T^-7
        expect[8] = 1; // T^-11
        expect[12] = 2; // T^-15
        assert_eq!(s.top(), -3);
        assert_eq!(s.window(), &expect[..]);
    }

    #[test]
    fn from_ratfunc_examples() {
        let rf = RatFunc::new(poly(3, "1"), poly(3, "T-1")).unwrap();
        let s = Laurent::from_ratfunc(&rf, -3);
        assert_eq!(s.to_string(), "1*T^-1+1*T^-2+1*T^-3+O(T^-4)");
        // (-T^3+T-1)/T^2 = -T + 1/T - 1/T^2, exact
        let rf = RatFunc::new(poly(3, "-T^3+T-1"), poly(3, "T^2")).unwrap();
        let s = Laurent::from_ratfunc(&rf, -10);
        assert_eq!(s.to_string(), "2*T^1+1*T^-1+2*T^-2+O(T^-11)");
        let s = Laurent::from_ratfunc(&RatFunc::from_poly(poly(3, "T")), -2);
        assert_eq!(s.polynomial_part().unwrap(), poly(3, "T"));
    }

    #[test]
    fn polynomial_part_examples() {
        let fp = f(5);
        let s = Laurent::parse(fp, "1*T^2+1*T^-1+O(T^-9)").unwrap();
        assert_eq!(s.polynomial_part().unwrap(), poly(5, "T^2"));
        let s = Laurent::parse(fp, "1*T^3+O(T^1)").unwrap();
        assert!(matches!(
            s.polynomial_part(),
            Err(Error::IntegerPartUncertified { prec: 2 })
        ));
    }

    #[test]
    fn frobenius_examples() {
        let fp = f(3);
        let x = Laurent::monomial(fp, 1, -1, -10);
        let y = x.frobenius(3).unwrap();
        assert_eq!(y.degree(), Some(-3));
        // error degree <= -11 becomes <= -33, so prec = -32
        assert_eq!(y.prec(), -32);
        let twice = x.frobenius(3).unwrap().frobenius(3).unwrap();
        assert_eq!(twice, x.frobenius(9).unwrap());
        assert!(x.frobenius(4).is_err());
    }

    #[test]
    fn zero_and_inv_errors() {
        let z = Laurent::zero(f(3), -4);
        assert!(matches!(
            z.inv(),
            Err(Error::IndistinguishableFromZero { prec: -4 })
        ));
        let x = Laurent::parse(f(3), "1*T^0+O(T^-5)").unwrap();
        let d = x.sub(&x);
        assert!(d.is_zero_so_far());
        assert_eq!(d.prec(), -4);
    }

    #[test]
    fn text_and_json_round_trip() {
        let fp = f(7);
        let s = Laurent::parse(fp, "2*T^1+0*T^0+1*T^-2+O(T^-5)").unwrap();
        assert_eq!(s.prec(), -4);
        assert_eq!(s.to_string(), "2*T^1+1*T^-2+O(T^-5)");
        assert_eq!(Laurent::parse(fp, &s.to_string()).unwrap(), s);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(j, r#"{"top":1,"prec":-4,"coeffs":[2,0,0,1,0,0]}"#);
        let back: LaurentJson = serde_json::from_str(&j).unwrap();
        assert_eq!(Laurent::from_json(fp, &back).unwrap(), s);
    }

    #[test]
    fn mul_poly_bound() {
        let fp = f(5);
        let x = Laurent::parse(fp, "1*T^0+3*T^-1+O(T^-8)").unwrap();
        let y = x.mul_poly(&poly(5, "T^2+1"));
        assert_eq!(y.prec(), -5);
        assert_eq!(y.coeff(2), Some(1));
        assert_eq!(y.coeff(1), Some(3));
        assert_eq!(y.coeff(0), Some(1));
    }
}
