//! Continued fractions: words of partial quotients, certified expansion of
//! Laurent series, folding a word onto a tail, and the tail transform
//! `[[a_1..a_n], x] = [a_1..a_n, f x + g]`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{convergents, kernels, Coeff, Fp, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// A finite sequence of partial quotients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Poly>);

impl Word {
    pub fn new(letters: Vec<Poly>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Poly] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Poly> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Poly> {
        self.0.iter()
    }

    pub fn push(&mut self, p: Poly) {
        self.0.push(p);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().cloned()).collect())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `-W̄`: reverse the word and negate every letter. An involution.
    pub fn reverse_neg(&self) -> Word {
        Word(self.0.iter().rev().map(|a| -a).collect())
    }

    /// `^{(i)}W^{(j)}`: drop `i` letters from the front and `j` from the back.
    pub fn drop_take(&self, i: usize, j: usize) -> Result<Word> {
        if i + j > self.0.len() {
            return Err(Error::Assertion(format!(
                "cannot drop {i}+{j} letters from a word of length {}",
                self.0.len()
            )));
        }
        Ok(Word(self.0[i..self.0.len() - j].to_vec()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|p| p.to_string()).collect()
    }

    pub fn parse_strings<S: AsRef<str>>(field: Fp, items: &[S]) -> Result<Word> {
        items
            .iter()
            .map(|s| Poly::parse(field, s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Comma-separated letters in the polynomial grammar.
    pub fn parse_list(field: Fp, s: &str) -> Result<Word> {
        let items: Vec<&str> = s.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::parse_strings(field, &items)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl From<Vec<Poly>> for Word {
    fn from(v: Vec<Poly>) -> Self {
        Word(v)
    }
}

/// Certified prefix of a continued-fraction expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub word: Word,
    pub certified: usize,
}

// A window that can lose leading entries without moving memory.
struct Win {
    top: i64,
    prec: i64,
    buf: Vec<Coeff>,
    start: usize,
}

impl Win {
    fn from_laurent(x: &Laurent) -> Self {
        Win {
            top: x.top(),
            prec: x.prec(),
            buf: x.window().to_vec(),
            start: 0,
        }
    }

    fn coeffs(&self) -> &[Coeff] {
        &self.buf[self.start..]
    }

    fn degree(&self) -> Option<i64> {
        (self.start < self.buf.len()).then_some(self.top)
    }

    fn normalize(&mut self) {
        while self.start < self.buf.len() && self.buf[self.start] == 0 {
            self.start += 1;
            self.top -= 1;
        }
    }
}

// Polynomial part of u/v by long division on the windows, together with the
// remainder u - a v. Quotient coefficients that come out zero cost nothing,
// which keeps huge sparse quotients such as T^N cheap.
fn divide(f: Fp, mut u: Win, v: &Win) -> (Poly, Win) {
    let (Some(du), Some(dv)) = (u.degree(), v.degree()) else {
        return (Poly::zero(f), u);
    };
    if du < dv {
        return (Poly::zero(f), u);
    }
    let d = (du - dv) as usize;
    let prec_r = u.prec.max(v.prec + d as i64);
    let len_w = (du - prec_r + 1) as usize;
    u.buf.truncate(u.start + len_w);
    u.prec = prec_r;
    let lead_inv = f.inv(v.coeffs()[0]).expect("normalized");
    let vc = v.coeffs();
    let mut quo = vec![0; d + 1];
    for e in (0..=d).rev() {
        let j = d - e;
        let c = f.mul(u.buf[u.start + j], lead_inv);
        if c == 0 {
            continue;
        }
        quo[e] = c;
        let w = &mut u.buf[u.start + j..];
        let m = vc.len().min(w.len());
        kernels::sub_scaled(f, &mut w[..m], &vc[..m], c);
    }
    u.start += d + 1;
    u.top = dv - 1;
    u.normalize();
    (Poly::from_coeffs(f, quo), u)
}

/// Expands `x = [a_0, a_1, ...]` as far as the precision of `x` certifies.
///
/// Internally `x_i = U_i / V_i` with `U_{i+1} = V_i`, `V_{i+1} = U_i - a_i V_i`,
/// so each step costs one long division instead of a series inversion. A
/// quotient `a_i` is emitted only when the error bound on `U_i / V_i` lies
/// strictly below exponent 0; expansion continues only while the remainder
/// has a certified nonzero leading coefficient.
pub fn cf_expand(x: &Laurent, max_n: usize) -> Expansion {
    let f = x.field();
    let mut u = Win::from_laurent(x);
    let v_prec = x.prec() - x.top().max(0);
    let one = Laurent::one(f, v_prec.min(0));
    let mut v = Win::from_laurent(&one);
    let mut letters = Vec::new();
    while letters.len() < max_n {
        let dv = v.degree().expect("divisor is certified nonzero");
        let du_bound = u.degree().unwrap_or(u.prec - 1);
        let err = (u.prec - dv).max(v.prec + du_bound - 2 * dv);
        if err > 0 {
            break;
        }
        let (a, r) = divide(f, u, &v);
        letters.push(a);
        if r.degree().is_none() {
            break;
        }
        u = v;
        v = r;
    }
    let certified = letters.len();
    Expansion {
        word: Word(letters),
        certified,
    }
}

/// Values that can sit in the tail slot of `[a_1, ..., a_n, tail]`.
pub trait Tail: Sized {
    /// `(p t + p') / (q t + q')`.
    fn mobius(&self, p: &Poly, p_prev: &Poly, q: &Poly, q_prev: &Poly) -> Result<Self>;
}

impl Tail for RatFunc {
    fn mobius(&self, p: &Poly, p_prev: &Poly, q: &Poly, q_prev: &Poly) -> Result<Self> {
        let num = &self.mul_poly(p) + &RatFunc::from_poly(p_prev.clone());
        let den = &self.mul_poly(q) + &RatFunc::from_poly(q_prev.clone());
        num.checked_div(&den)
    }
}

impl Tail for Laurent {
    fn mobius(&self, p: &Poly, p_prev: &Poly, q: &Poly, q_prev: &Poly) -> Result<Self> {
        let a = self.mul_poly(p);
        let num = a.add(&Laurent::from_poly(p_prev, a.prec()));
        let b = self.mul_poly(q);
        let den = b.add(&Laurent::from_poly(q_prev, b.prec()));
        num.div(&den)
    }
}

/// `[a_1, ..., a_n, tail] = (p_n tail + p_{n-1}) / (q_n tail + q_{n-1})`.
pub fn fold<T: Tail + Clone>(w: &Word, tail: &T) -> Result<T> {
    let Some(first) = w.0.first() else {
        return Ok(tail.clone());
    };
    let f = first.field();
    let conv = convergents(&w.0);
    let n = conv.len();
    let (p, q) = &conv[n - 1];
    let (p_prev, q_prev) = if n >= 2 {
        conv[n - 2].clone()
    } else {
        (Poly::one(f), Poly::zero(f))
    };
    tail.mobius(p, &p_prev, q, &q_prev)
}

/// The rational value `[a_1, ..., a_n]` itself.
pub fn fold_finite(w: &Word) -> Result<RatFunc> {
    let (p, q) = convergents(&w.0)
        .pop()
        .ok_or_else(|| Error::Assertion("empty word".into()))?;
    RatFunc::new(p, q)
}

/// `(f_n, g_n)` with `[[a_1..a_n], x] = [a_1..a_n, f_n x + g_n]` for every x.
///
/// Writing the right side through convergents and subtracting `p_n/q_n`
/// gives `1/x = (-1)^(n+1) / (q_n (q_n x' + q_{n-1}))`, hence
/// `f_n = (-1)^(n+1) / q_n^2` and `g_n = -q_{n-1} / q_n`.
pub fn tail_transform(w: &Word) -> Result<(RatFunc, RatFunc)> {
    let first = w
        .0
        .first()
        .ok_or_else(|| Error::Assertion("tail transform of an empty word".into()))?;
    let f = first.field();
    let conv = convergents(&w.0);
    let n = conv.len();
    let q = &conv[n - 1].1;
    let q_prev = if n >= 2 {
        conv[n - 2].1.clone()
    } else {
        Poly::zero(f)
    };
    let sign = if n % 2 == 1 { 1 } else { f.neg(1) };
    let fn_ = RatFunc::new(Poly::constant(f, sign), q * q)?;
    let gn = RatFunc::new(-&q_prev, q.clone())?;
    Ok((fn_, gn))
}

/// `a_1 + 1/(a_2 + 1/(... + 1/(a_n + 1/tail)))` evaluated from the inside
/// out, independent of the convergent recurrence.
pub fn nested_eval(w: &Word, tail: Option<&RatFunc>) -> Result<RatFunc> {
    let mut acc: Option<RatFunc> = tail.cloned();
    for a in w.0.iter().rev() {
        let a = RatFunc::from_poly(a.clone());
        acc = Some(match acc {
            Some(t) => &a + &t.inv()?,
            None => a,
        });
    }
    acc.ok_or_else(|| Error::Assertion("empty word".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub trials: usize,
    pub passes: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
}

fn random_word<R: Rng + ?Sized>(f: Fp, n: usize, rng: &mut R) -> Word {
    // a_1 may be constant; later letters have degree 1..=3
    Word((0..n)
        .map(|i| {
            let lo = if i == 0 { 0 } else { 1 };
            Poly::random(f, rng.gen_range(lo..=3), rng)
        })
        .collect())
}

fn random_tail<R: Rng + ?Sized>(f: Fp, rng: &mut R) -> RatFunc {
    let num = Poly::random(f, rng.gen_range(1..=3), rng);
    let den = Poly::random(f, rng.gen_range(0..=2), rng);
    RatFunc::new(num, den).expect("nonzero denominator")
}

// [[w], x] == [w, f x + g] through the nested oracle, for a few tails x.
fn bracket_identity<R: Rng + ?Sized>(w: &Word, fg: &(RatFunc, RatFunc), rng: &mut R) -> Result<bool> {
    let f = w.0[0].field();
    let mut checked = 0;
    for _ in 0..20 {
        if checked == 3 {
            break;
        }
        let x = random_tail(f, rng);
        let y = &(&fg.0 * &x) + &fg.1;
        let (Ok(lhs), Ok(rhs)) = (
            nested_eval(w, None).and_then(|v| Ok(&v + &x.inv()?)),
            nested_eval(w, Some(&y)),
        ) else {
            continue;
        };
        if lhs != rhs {
            return Ok(false);
        }
        checked += 1;
    }
    Ok(checked == 3)
}

/// The two- and three-letter closed forms of the tail transform, and the
/// general transform for lengths 1..=5, each checked `trials` times.
pub fn verify_tail_identities<R: Rng + ?Sized>(f: Fp, trials: usize, rng: &mut R) -> Vec<IdentityReport> {
    let one = RatFunc::one(f);
    let closed_two = |w: &Word| {
        let a2 = RatFunc::from_poly(w.0[1].clone());
        let inv = a2.inv().expect("nonzero letter");
        (-&(&inv * &inv), -&inv)
    };
    let closed_three = |w: &Word| {
        let a2 = RatFunc::from_poly(w.0[1].clone());
        let s = &(&a2 * &RatFunc::from_poly(w.0[2].clone())) + &one;
        let inv = s.inv().expect("a2 a3 + 1 has positive degree");
        (&inv * &inv, -&(&a2 * &inv))
    };
    let mut cases: Vec<(String, usize, Box<dyn Fn(&Word) -> Option<(RatFunc, RatFunc)>>)> = vec![
        ("two-letter closed form".into(), 2, Box::new(move |w| Some(closed_two(w)))),
        ("three-letter closed form".into(), 3, Box::new(move |w| Some(closed_three(w)))),
    ];
    for n in 1..=5 {
        cases.push((format!("general n={n}"), n, Box::new(|w| tail_transform(w).ok())));
    }
    cases
        .into_iter()
        .map(|(name, n, form)| {
            let mut passes = 0;
            let mut first_failure = None;
            for _ in 0..trials {
                let w = random_word(f, n, rng);
                let ok = match form(&w) {
                    Some(fg) => {
                        let agree = n > 3 || n == 1 || tail_transform(&w).ok().as_ref() == Some(&fg);
                        agree && bracket_identity(&w, &fg, rng).unwrap_or(false)
                    }
                    None => false,
                };
                if ok {
                    passes += 1;
                } else {
                    first_failure.get_or_insert_with(|| format!("word {w:?}"));
                }
            }
            IdentityReport {
                identity: name,
                trials,
                passes,
                first_failure,
            }
        })
        .collect()
}
