//! The three independent ways of producing the quotients of a family.

use serde::{Deserialize, Serialize};

use crate::contfrac::{cf_expand, Word};
use crate::error::{Error, Result};
use crate::hyperquad::{self_generate, EqType, TransitionState};
use crate::solvers::{solve, Family, SolveRequest};
use crate::words::{MahlergenStream, OmegaStream};
use crate::{Fp, Laurent, Poly};

pub const DEFAULT_MAX_PREC: i64 = 1 << 25;

/// Largest `|prec|` the series route may try; `HQCF_MAX_PREC` overrides it.
pub fn max_prec() -> Result<i64> {
    match std::env::var("HQCF_MAX_PREC") {
        Ok(s) => match s.trim().parse::<i64>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::Config(format!("HQCF_MAX_PREC must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(DEFAULT_MAX_PREC),
    }
}

/// A fully specified series: family, field, `r`, and `P` or seed as needed.
#[derive(Debug, Clone)]
pub struct Target {
    pub family: Family,
    pub field: Fp,
    pub r: u64,
    pub poly: Option<Poly>,
    pub seed: Option<Word>,
}

impl Target {
    pub fn request(&self, prec: i64) -> SolveRequest {
        let mut req = SolveRequest::new(self.family, self.field, self.r, prec);
        req.poly = self.poly.clone();
        req.seed = self.seed.clone();
        req
    }

    pub fn validate(&self) -> Result<()> {
        self.request(-1).validate()
    }

    fn seed(&self) -> Result<&Word> {
        self.seed
            .as_ref()
            .ok_or_else(|| Error::Config("the mahlergen family needs --seed".into()))
    }

    fn poly(&self) -> Result<&Poly> {
        self.poly
            .as_ref()
            .ok_or_else(|| Error::Config("the general family needs --poly".into()))
    }
}

#[derive(Debug, Clone)]
pub struct SeriesRun {
    /// The solved series.
    pub x: Laurent,
    pub word: Word,
    pub prec: i64,
    pub certified: usize,
}

/// Solves at precision `-64 n`, doubling until `n` quotients are certified.
pub fn series_route(t: &Target, n: usize) -> Result<SeriesRun> {
    let cap = max_prec()?;
    let mut prec = (64 * n.max(1) as i64).min(cap);
    loop {
        let x = solve(&t.request(-prec))?;
        let e = cf_expand(&x, n);
        if e.certified >= n {
            return Ok(SeriesRun {
                x,
                word: e.word,
                prec: -prec,
                certified: e.certified,
            });
        }
        if prec >= cap {
            return Err(Error::PrecisionCap {
                cap,
                certified: e.certified,
                wanted: n,
            });
        }
        prec = (2 * prec).min(cap);
    }
}

fn prepend(head: Vec<Poly>, tail: Word, n: usize) -> Word {
    let mut letters = head;
    letters.extend(tail.into_letters());
    letters.truncate(n);
    Word::new(letters)
}

/// Letters from the transition engine.
pub fn engine_route(t: &Target, n: usize) -> Result<Word> {
    let f = t.field;
    let tt = Poly::t(f);
    let t_plus = Poly::from_ints(f, &[1, 1]);
    let t_minus = Poly::from_ints(f, &[-1, 1]);
    let mahler_state = |n0| {
        TransitionState::new(
            Poly::one(f),
            -&Poly::monomial(f, 1, 2),
            -&tt,
            1,
            n0,
        )
    };
    match t.family {
        Family::BaumSweet => {
            let lead = -&Poly::monomial(f, 1, t.r as usize - 2);
            let s = TransitionState::of_type(EqType::A1, f, 1, 4)?;
            let w = self_generate(&s, &Word::new(vec![lead, t_plus.clone(), t_minus]), n.saturating_sub(2), t.r)?;
            Ok(prepend(vec![Poly::one(f), -&t_plus], w, n))
        }
        Family::General => {
            let s = TransitionState::of_type(EqType::A1, f, 1, 4)?;
            self_generate(&s, &Word::new(vec![t.poly()?.clone(), t_plus, t_minus]), n, t.r)
        }
        Family::Mahler => {
            let w = self_generate(&mahler_state(2)?, &Word::new(vec![tt.clone()]), n.saturating_sub(1), t.r)?;
            Ok(prepend(vec![Poly::zero(f)], w, n))
        }
        Family::Mahlergen => {
            let seed = t.seed()?;
            self_generate(&mahler_state(seed.len() + 1)?, seed, n, t.r)
        }
    }
}

/// Letters from the explicit word generators.
pub fn word_route(t: &Target, n: usize) -> Result<Word> {
    let f = t.field;
    match t.family {
        Family::BaumSweet => {
            let w = OmegaStream::new(f, t.r, None)?.take_word(n.saturating_sub(2))?;
            Ok(prepend(vec![Poly::one(f), -&Poly::from_ints(f, &[1, 1])], w, n))
        }
        Family::General => OmegaStream::new(f, t.r, Some(t.poly()?.clone()))?.take_word(n),
        Family::Mahler => {
            let seed = Word::new(vec![Poly::t(f)]);
            let w = MahlergenStream::new(&seed, t.r)?.take_word(n.saturating_sub(1))?;
            Ok(prepend(vec![Poly::zero(f)], w, n))
        }
        Family::Mahlergen => MahlergenStream::new(t.seed()?, t.r)?.take_word(n),
    }
}

/// Adds 1 to letter `i`, for exercising the mismatch path.
pub fn inject_fault(w: &Word, i: usize) -> Word {
    let mut letters = w.letters().to_vec();
    if let Some(a) = letters.get_mut(i) {
        *a = &*a + &Poly::one(a.field());
    }
    Word::new(letters)
}

/// First index where the routes disagree, with the three values there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: usize,
    pub series: Option<String>,
    pub engine: Option<String>,
    pub word: Option<String>,
}

pub fn first_mismatch(series: &Word, engine: &Word, word: &Word) -> Option<Mismatch> {
    let n = series.len().max(engine.len()).max(word.len());
    let at = |w: &Word, i: usize| w.letters().get(i).cloned();
    (0..n).find_map(|i| {
        let (a, b, c) = (at(series, i), at(engine, i), at(word, i));
        (a != b || b != c).then(|| Mismatch {
            index: i,
            series: a.map(|p| p.to_string()),
            engine: b.map(|p| p.to_string()),
            word: c.map(|p| p.to_string()),
        })
    })
}
