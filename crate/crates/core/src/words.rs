//! The recursive words `Γ_k`, `Λ_k`, `Ω_k`, `Ω_k(P)`, their exponent
//! sequences, and the unbounded streams `Ω_∞`, `Ω_∞(P)` and the Mahler-type
//! self-generating sequence.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::poly::MAX_DEGREE;
use crate::algebra::{Fp, Poly};
use crate::contfrac::Word;
use crate::error::{Error, Result};

/// Which exponent recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    /// `λ_1 = r`, `λ_{k+1} = r λ_k - 2`.
    Lambda,
    /// `ω_1 = r - 2`, `ω_{k+1} = r ω_k - 2`.
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpSeq {
    pub kind: SeqKind,
    pub r: u64,
}

impl ExpSeq {
    pub fn new(kind: SeqKind, r: u64) -> Result<Self> {
        if r <= 2 {
            return Err(Error::RGreaterThanTwoRequired(r));
        }
        Ok(ExpSeq { kind, r })
    }

    /// The `k`-th term (`k >= 1`), with overflow checks.
    pub fn value(&self, k: usize) -> Result<u64> {
        if k == 0 {
            return Err(Error::Config("exponent index starts at 1".into()));
        }
        let mut v = match self.kind {
            SeqKind::Lambda => self.r,
            SeqKind::Omega => self.r - 2,
        };
        for _ in 1..k {
            v = v
                .checked_mul(self.r)
                .and_then(|x| x.checked_sub(2))
                .ok_or_else(|| Error::Overflow(format!("{:?} exponent at depth {k}", self.kind)))?;
        }
        Ok(v)
    }
}

pub fn exp_value(kind: SeqKind, r: u64, k: usize) -> Result<u64> {
    ExpSeq::new(kind, r)?.value(k)
}

fn signed_mono(field: Fp, negative: bool, e: u64) -> Result<Poly> {
    if e > MAX_DEGREE {
        return Err(Error::Overflow(format!("letter of degree {e}")));
    }
    let c = if negative { field.neg(1) } else { 1 };
    Ok(Poly::monomial(field, c, e as usize))
}

/// Memoizing generator for the words over a fixed `(p, r)`.
#[derive(Debug, Clone)]
pub struct Words {
    field: Fp,
    r: u64,
    gamma: Vec<Arc<Word>>,
    lambda: Vec<Arc<Word>>,
    omega: Vec<Arc<Word>>,
    omega_p: HashMap<Poly, Vec<Arc<Word>>>,
}

impl Words {
    pub fn new(field: Fp, r: u64) -> Result<Self> {
        field.check_power(r)?;
        if r <= 2 {
            return Err(Error::RGreaterThanTwoRequired(r));
        }
        Ok(Words {
            field,
            r,
            gamma: Vec::new(),
            lambda: Vec::new(),
            omega: Vec::new(),
            omega_p: HashMap::new(),
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    fn check_depth(k: usize) -> Result<()> {
        if k == 0 {
            Err(Error::Config("word depth starts at 1".into()))
        } else {
            Ok(())
        }
    }

    /// `Γ_k`, of length `2^{k+1} - 1`.
    pub fn gamma(&mut self, k: usize) -> Result<Arc<Word>> {
        Self::check_depth(k)?;
        let f = self.field;
        let t = Poly::t(f);
        if self.gamma.is_empty() {
            let w = Word::new(vec![-&t, signed_mono(f, false, self.r)?, t.clone()]);
            self.gamma.push(Arc::new(w));
        }
        while self.gamma.len() < k {
            // Γ_{j+1} from Γ_j = a_1 .. a_m
            let j = self.gamma.len();
            let a = self.gamma[j - 1].letters();
            let m = a.len();
            let mut b = Vec::with_capacity(2 * m + 1);
            for idx in 1..=2 * m + 1 {
                let letter = if idx % 2 == 1 {
                    let i = (idx + 1) / 2;
                    if (i + j) % 2 == 0 {
                        t.clone()
                    } else {
                        -&t
                    }
                } else if idx % 4 == 0 {
                    a[idx / 2 - 1]
                        .frobenius(self.r)?
                        .shift_down(2)
                        .map_err(|_| Error::InexactDivision(format!("Gamma_{} letter {idx} by T^2", j + 1)))?
                } else {
                    -a[idx / 2 - 1].frobenius(self.r)?
                };
                b.push(letter);
            }
            self.gamma.push(Arc::new(Word::new(b)));
        }
        Ok(self.gamma[k - 1].clone())
    }

    /// `Λ_k`.
    pub fn lambda(&mut self, k: usize) -> Result<Arc<Word>> {
        Self::check_depth(k)?;
        let f = self.field;
        let t = Poly::t(f);
        let one = Poly::one(f);
        if self.lambda.is_empty() {
            self.lambda.push(Arc::new(Word::new(vec![&t + &one, &t - &one])));
            let mid = &one - &signed_mono(f, false, self.r)?;
            self.lambda.push(Arc::new(Word::new(vec![t.clone(), mid, -&t])));
        }
        while self.lambda.len() < k {
            let j = self.lambda.len() + 1;
            let lam = ExpSeq::new(SeqKind::Lambda, self.r)?.value(j - 1)?;
            let g = self.gamma(j - 2)?;
            let mut w = (*self.lambda[j - 3]).clone();
            w.push(signed_mono(f, true, lam)?);
            w.extend_from(&g);
            self.lambda.push(Arc::new(w));
        }
        Ok(self.lambda[k - 1].clone())
    }

    /// `Ω_k`.
    pub fn omega(&mut self, k: usize) -> Result<Arc<Word>> {
        Self::check_depth(k)?;
        let f = self.field;
        let seq = ExpSeq::new(SeqKind::Omega, self.r)?;
        if self.omega.is_empty() {
            let w = Word::new(vec![signed_mono(f, true, seq.value(1)?)?]);
            self.omega.push(Arc::new(w));
        }
        while self.omega.len() < k {
            let j = self.omega.len() + 1;
            let prev = self.omega[j - 2].clone();
            let lam = self.lambda(j - 1)?;
            let mid = signed_mono(f, true, seq.value(j)?)?;
            self.omega.push(Arc::new(Self::assemble(&prev, &lam, mid, &prev)));
        }
        Ok(self.omega[k - 1].clone())
    }

    /// `Ω_k(P)` for `P` in `T F_p[T]`.
    pub fn omega_p(&mut self, p: &Poly, k: usize) -> Result<Arc<Word>> {
        Self::check_depth(k)?;
        if p.is_zero() || !p.divisible_by_t() {
            return Err(Error::NotDivisibleByT { poly: p.to_string() });
        }
        let f = self.field;
        let seq = ExpSeq::new(SeqKind::Omega, self.r)?;
        let mut chain = self.omega_p.remove(p).unwrap_or_default();
        let result = (|| {
            if chain.is_empty() {
                chain.push(Arc::new(Word::new(vec![p.clone()])));
            }
            let p_over_t = p.shift_down(1)?;
            while chain.len() < k {
                let j = chain.len() + 1;
                let mut q = p_over_t.clone();
                for _ in 1..j {
                    q = q.frobenius(self.r)?;
                }
                let mid = &signed_mono(f, false, seq.value(j - 1)?)? * &q;
                let lam = self.lambda(j - 1)?;
                let plain = self.omega(j - 1)?;
                let w = Self::assemble(&chain[j - 2], &lam, mid, &plain);
                chain.push(Arc::new(w));
            }
            Ok(chain[k - 1].clone())
        })();
        self.omega_p.insert(p.clone(), chain);
        result
    }

    // head, Λ, mid, -rev Λ, -rev tail
    fn assemble(head: &Word, lam: &Word, mid: Poly, tail: &Word) -> Word {
        let mut w = head.clone();
        w.extend_from(lam);
        w.push(mid);
        w.extend_from(&lam.reverse_neg());
        w.extend_from(&tail.reverse_neg());
        w
    }
}

pub fn gamma(field: Fp, r: u64, k: usize) -> Result<Word> {
    Ok((*Words::new(field, r)?.gamma(k)?).clone())
}

pub fn lambda_word(field: Fp, r: u64, k: usize) -> Result<Word> {
    Ok((*Words::new(field, r)?.lambda(k)?).clone())
}

pub fn omega(field: Fp, r: u64, k: usize) -> Result<Word> {
    Ok((*Words::new(field, r)?.omega(k)?).clone())
}

pub fn omega_p(field: Fp, r: u64, p: &Poly, k: usize) -> Result<Word> {
    Ok((*Words::new(field, r)?.omega_p(p, k)?).clone())
}

/// Letters of `Ω_∞` or `Ω_∞(P)`, deepening one level at a time and checking
/// that each level extends the previous one.
#[derive(Debug, Clone)]
pub struct OmegaStream {
    words: Words,
    p: Option<Poly>,
    depth: usize,
    current: Arc<Word>,
    pos: usize,
}

impl OmegaStream {
    pub fn new(field: Fp, r: u64, p: Option<Poly>) -> Result<Self> {
        let mut words = Words::new(field, r)?;
        let current = match &p {
            Some(p) => words.omega_p(p, 1)?,
            None => words.omega(1)?,
        };
        Ok(OmegaStream {
            words,
            p,
            depth: 1,
            current,
            pos: 0,
        })
    }

    fn deepen(&mut self) -> Result<()> {
        let next = match &self.p {
            Some(p) => self.words.omega_p(p, self.depth + 1)?,
            None => self.words.omega(self.depth + 1)?,
        };
        if next.len() <= self.current.len() || !self.current.is_prefix_of(&next) {
            return Err(Error::PrefixViolation { k: self.depth });
        }
        self.depth += 1;
        self.current = next;
        Ok(())
    }

    pub fn next_letter(&mut self) -> Result<Poly> {
        while self.pos >= self.current.len() {
            self.deepen()?;
        }
        self.pos += 1;
        Ok(self.current.letters()[self.pos - 1].clone())
    }

    /// The next `n` letters.
    pub fn take_word(&mut self, n: usize) -> Result<Word> {
        (0..n).map(|_| self.next_letter()).collect::<Result<Vec<_>>>().map(Word::new)
    }
}

impl Iterator for OmegaStream {
    type Item = Result<Poly>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_letter())
    }
}

/// The sequence `a_1, a_2, ...` determined by a seed `a_1..a_ℓ` and, for
/// `k >= 0`,
///
/// ```text
/// a_{ℓ+4k+1} = -a_{2k+1}^r / T^2    a_{ℓ+4k+2} = -T
/// a_{ℓ+4k+3} =  a_{2k+2}^r          a_{ℓ+4k+4} =  T
/// ```
#[derive(Debug, Clone)]
pub struct MahlergenStream {
    r: u64,
    seq: Vec<Poly>,
    seed_len: usize,
    pos: usize,
}

impl MahlergenStream {
    pub fn new(seed: &Word, r: u64) -> Result<Self> {
        let Some(first) = seed.letters().first() else {
            return Err(Error::Config("mahlergen seed must be nonempty".into()));
        };
        let field = first.field();
        field.check_power(r)?;
        if r <= 2 {
            return Err(Error::RGreaterThanTwoRequired(r));
        }
        for (i, a) in seed.iter().enumerate() {
            if a.degree().unwrap_or(0) < 1 {
                return Err(Error::ConstantLetter { letter: a.to_string() });
            }
            if i % 2 == 0 && !a.divisible_by_t() {
                return Err(Error::Divisibility {
                    index: i + 1,
                    detail: format!("seed letter {a} is not divisible by T"),
                });
            }
        }
        Ok(MahlergenStream {
            r,
            seq: seed.letters().to_vec(),
            seed_len: seed.len(),
            pos: 0,
        })
    }

    fn extend_block(&mut self) -> Result<()> {
        let k = (self.seq.len() - self.seed_len) / 4;
        let field = self.seq[0].field();
        let t = Poly::t(field);
        let a = &self.seq[2 * k];
        if !a.divisible_by_t() {
            return Err(Error::Divisibility {
                index: 2 * k + 1,
                detail: format!("a_{} = {a} is not divisible by T", 2 * k + 1),
            });
        }
        let first = -a.frobenius(self.r)?.shift_down(2)?;
        self.seq.push(first);
        self.seq.push(-&t);
        // a_{2k+2} exists now even when ℓ = 1
        let third = self.seq[2 * k + 1].frobenius(self.r)?;
        self.seq.push(third);
        self.seq.push(t);
        Ok(())
    }

    pub fn next_letter(&mut self) -> Result<Poly> {
        while self.pos >= self.seq.len() {
            self.extend_block()?;
        }
        self.pos += 1;
        Ok(self.seq[self.pos - 1].clone())
    }

    pub fn take_word(&mut self, n: usize) -> Result<Word> {
        (0..n).map(|_| self.next_letter()).collect::<Result<Vec<_>>>().map(Word::new)
    }
}

impl Iterator for MahlergenStream {
    type Item = Result<Poly>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WordFamily {
    Gamma,
    Lambda,
    Omega,
    OmegaP,
}

/// Machine-readable dump of a generated word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub family: WordFamily,
    pub k: usize,
    pub p: u32,
    pub t: u32,
    pub letters: Vec<String>,
}
