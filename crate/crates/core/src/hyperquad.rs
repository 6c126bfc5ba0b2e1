//! The transition engine for relations `P z_m^r = Q z_n + R` between complete
//! quotients, the closed-form rules for the six equation types `A_1..A_6`,
//! and the loop that regenerates an expansion from its own letters.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Fp, Poly, RatFunc};
use crate::contfrac::{tail_transform, Word};
use crate::error::{Error, Result};
use crate::words::Words;

/// A relation `P z_m^r = Q z_n + R`, kept in normal form: the three
/// polynomials are coprime as a triple and `P` is monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransitionState {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    pub m: usize,
    pub n: usize,
}

impl TransitionState {
    pub fn new(p: Poly, q: Poly, r: Poly, m: usize, n: usize) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::InvalidState("P and Q must be nonzero".into()));
        }
        if m == 0 || m >= n {
            return Err(Error::PointerInversion { m, n });
        }
        let g = p.gcd(&q).gcd(&r);
        let (p, q, r) = (p.exact_div(&g)?, q.exact_div(&g)?, r.exact_div(&g)?);
        let inv = p.field().inv(p.lead()).expect("P nonzero");
        Ok(TransitionState {
            p: p.scale(inv),
            q: q.scale(inv),
            r: r.scale(inv),
            m,
            n,
        })
    }

    pub fn of_type(tag: EqType, field: Fp, m: usize, n: usize) -> Result<Self> {
        let (p, q, r) = tag.triple(field);
        Self::new(p, q, r, m, n)
    }

    pub fn field(&self) -> Fp {
        self.p.field()
    }

    pub fn same_relation(&self, other: &TransitionState) -> bool {
        self.p == other.p && self.q == other.q && self.r == other.r
    }

    /// The first of `A_1..A_6` this relation equals, if any.
    pub fn tag(&self) -> Option<EqType> {
        let f = self.field();
        EqType::ALL.into_iter().find(|t| {
            let (p, q, r) = t.triple(f);
            p == self.p && q == self.q && r == self.r
        })
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            p: self.p.to_string(),
            q: self.q.to_string(),
            r: self.r.to_string(),
            m: self.m,
            n: self.n,
            tag: self.tag().map(|t| t.to_string()),
        }
    }
}

impl fmt::Display for TransitionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.p, self.q, self.r, self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(rename = "R")]
    pub r: String,
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqType {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
}

impl EqType {
    pub const ALL: [EqType; 6] = [EqType::A1, EqType::A2, EqType::A3, EqType::A4, EqType::A5, EqType::A6];

    /// `(P, Q, R)` as integer coefficient lists, lowest exponent first.
    fn ints(self) -> ([i64; 2], [i64; 3], [i64; 2]) {
        match self {
            EqType::A1 => ([1, 0], [0, 0, 1], [1, 1]),
            EqType::A2 => ([1, 0], [0, 0, 1], [1, -1]),
            EqType::A3 => ([0, 1], [0, -1, 0], [-1, 0]),
            EqType::A4 => ([1, 0], [0, 0, 1], [0, -1]),
            EqType::A5 => ([0, 1], [0, -1, 0], [1, 0]),
            EqType::A6 => ([1, 0], [0, 0, 1], [0, 1]),
        }
    }

    pub fn triple(self, field: Fp) -> (Poly, Poly, Poly) {
        let (p, q, r) = self.ints();
        (
            Poly::from_ints(field, &p),
            Poly::from_ints(field, &q),
            Poly::from_ints(field, &r),
        )
    }
}

impl fmt::Display for EqType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = EqType::ALL.iter().position(|t| t == self).unwrap() + 1;
        write!(f, "A{i}")
    }
}

/// Condition on `a(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residue {
    Zero,
    One,
    MinusOne,
    Any,
}

impl Residue {
    pub fn matches(self, field: Fp, a: &Poly) -> bool {
        let c = a.residue_at_zero();
        match self {
            Residue::Zero => c == 0,
            Residue::One => c == 1 % field.p(),
            Residue::MinusOne => c == field.neg(1),
            Residue::Any => true,
        }
    }

    fn value(self, field: Fp) -> Option<u32> {
        match self {
            Residue::Zero => Some(0),
            Residue::One => Some(1),
            Residue::MinusOne => Some(field.neg(1)),
            Residue::Any => None,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Residue::Zero => "0",
            Residue::One => "1",
            Residue::MinusOne => "-1",
            Residue::Any => "any",
        }
    }
}

/// Shape of the first emitted letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lead {
    /// `(a + c)^r / T^2`
    Shifted(i64),
    /// `-a^r`
    NegFrob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleRow {
    pub from: EqType,
    pub residue: Residue,
    pub lead: Lead,
    /// Trailing letters `c1*T + c0`, as `(c1, c0)`.
    pub tail: &'static [(i64, i64)],
    pub to: EqType,
}

impl RuleRow {
    pub fn name(&self) -> String {
        format!("{}[a={}]->{}", self.from, self.residue.label(), self.to)
    }
}

use EqType::*;

pub const RULES: [RuleRow; 10] = [
    RuleRow { from: A1, residue: Residue::Zero, lead: Lead::Shifted(0), tail: &[(-1, 1), (-1, -1)], to: A2 },
    RuleRow { from: A1, residue: Residue::One, lead: Lead::Shifted(-1), tail: &[(-1, 0)], to: A5 },
    RuleRow { from: A2, residue: Residue::Zero, lead: Lead::Shifted(0), tail: &[(1, 1), (1, -1)], to: A1 },
    RuleRow { from: A2, residue: Residue::One, lead: Lead::Shifted(-1), tail: &[(1, 0)], to: A3 },
    RuleRow { from: A3, residue: Residue::Any, lead: Lead::NegFrob, tail: &[(-1, 0)], to: A4 },
    RuleRow { from: A4, residue: Residue::Zero, lead: Lead::Shifted(0), tail: &[(1, 0)], to: A3 },
    RuleRow { from: A4, residue: Residue::MinusOne, lead: Lead::Shifted(1), tail: &[(1, 1), (1, -1)], to: A1 },
    RuleRow { from: A5, residue: Residue::Any, lead: Lead::NegFrob, tail: &[(1, 0)], to: A6 },
    RuleRow { from: A6, residue: Residue::Zero, lead: Lead::Shifted(0), tail: &[(-1, 0)], to: A5 },
    RuleRow { from: A6, residue: Residue::MinusOne, lead: Lead::Shifted(1), tail: &[(-1, 1), (-1, -1)], to: A2 },
];

fn check_letter(a: &Poly) -> Result<()> {
    if a.degree().unwrap_or(0) < 1 {
        Err(Error::ConstantLetter { letter: a.to_string() })
    } else {
        Ok(())
    }
}

/// One step of the engine from first principles: expand `(P a^r - R)/Q`,
/// move the tail through the tail transform, and clear denominators.
pub fn step_generic(s: &TransitionState, a: &Poly, r: u64) -> Result<(Word, TransitionState)> {
    check_letter(a)?;
    let ar = a.frobenius(r)?;
    let head = RatFunc::new(&(&s.p * &ar) - &s.r, s.q.clone())?;
    let w = head.cf();
    for l in w.iter() {
        check_letter(l)?;
    }
    let (f, g) = tail_transform(&w)?;
    // z_{n+l} = F z_{m+1}^r + G with F = f Q / P
    let big_f = f.mul_poly(&s.q).checked_div(&RatFunc::from_poly(s.p.clone()))?;
    let lhs = big_f.degree().expect("nonzero") + r as i64;
    let rhs = g.degree().map_or(0, |d| d.max(0));
    if lhs <= rhs {
        return Err(Error::GuardFailure(format!(
            "deg(fQ/P) + r = {lhs} <= max(0, deg g) = {rhs} at state {s}"
        )));
    }
    let p1 = big_f.num() * g.den();
    let q1 = big_f.den() * g.den();
    let r1 = -(big_f.den() * g.num());
    let next = TransitionState::new(p1, q1, r1, s.m + 1, s.n + w.len())?;
    Ok((w, next))
}

/// The closed form of one table row, without checking that `s` is of the
/// row's type.
pub fn apply_row(row: &RuleRow, s: &TransitionState, a: &Poly, r: u64) -> Result<(Word, TransitionState)> {
    let f = s.field();
    check_letter(a)?;
    if !row.residue.matches(f, a) {
        return Err(Error::UncoveredResidue {
            tag: row.from.to_string(),
            residue: a.residue_at_zero(),
        });
    }
    let first = match row.lead {
        Lead::Shifted(c) => (a + &Poly::from_ints(f, &[c])).frobenius(r)?.shift_down(2)?,
        Lead::NegFrob => -a.frobenius(r)?,
    };
    let mut letters = vec![first];
    letters.extend(row.tail.iter().map(|&(c1, c0)| Poly::from_ints(f, &[c0, c1])));
    for l in &letters {
        check_letter(l)?;
    }
    let next = TransitionState::of_type(row.to, f, s.m + 1, s.n + letters.len())?;
    Ok((Word::new(letters), next))
}

/// Table-driven step: identifies the type of `s` and the row for `a(0)`.
pub fn apply_rule(s: &TransitionState, a: &Poly, r: u64) -> Result<(Word, TransitionState)> {
    let tag = s.tag().ok_or(Error::UnknownType)?;
    let f = s.field();
    let row = RULES
        .iter()
        .find(|row| row.from == tag && row.residue.matches(f, a))
        .ok_or_else(|| Error::UncoveredResidue {
            tag: tag.to_string(),
            residue: a.residue_at_zero(),
        })?;
    apply_row(row, s, a, r)
}

/// Table first, generic step when no row covers the state.
pub fn step(s: &TransitionState, a: &Poly, r: u64) -> Result<(Word, TransitionState)> {
    match apply_rule(s, a, r) {
        Err(Error::UnknownType | Error::UncoveredResidue { .. }) => step_generic(s, a, r),
        other => other,
    }
}

/// Runs the engine from `initial`, whose seed supplies `a_1..a_{n-1}`, until
/// `count` letters are known. The result starts with the seed.
pub fn self_generate(initial: &TransitionState, seed: &Word, count: usize, r: u64) -> Result<Word> {
    let mut letters: Vec<Poly> = seed.letters().to_vec();
    if letters.len() + 1 != initial.n {
        return Err(Error::InvalidState(format!(
            "seed has {} letters but the relation starts emitting at n={}",
            letters.len(),
            initial.n
        )));
    }
    for a in &letters {
        check_letter(a)?;
    }
    let mut s = initial.clone();
    while letters.len() < count {
        if s.m >= s.n {
            return Err(Error::PointerInversion { m: s.m, n: s.n });
        }
        let a = letters[s.m - 1].clone();
        let (w, next) = step(&s, &a, r)?;
        if next.n - s.n != w.len() || next.m != s.m + 1 {
            return Err(Error::Assertion(format!("index bookkeeping broke at {s}")));
        }
        letters.extend(w.into_letters());
        s = next;
    }
    letters.truncate(count);
    Ok(Word::new(letters))
}

/// Random `a` of degree 1..=4 in the residue class of `row`.
fn sample(row: &RuleRow, f: Fp, rng: &mut impl Rng) -> Poly {
    let deg = rng.gen_range(1..=4);
    let a = Poly::random(f, deg, rng);
    match row.residue.value(f) {
        Some(c) => {
            let mut coeffs = a.into_coeffs();
            coeffs[0] = c;
            Poly::from_coeffs(f, coeffs)
        }
        None => a,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: String,
    pub trials: usize,
    pub passes: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
}

/// Checks every table row against the generic step on random inputs.
pub fn verify_rule_table(field: Fp, r: u64, trials: usize, rng: &mut impl Rng) -> Vec<RuleReport> {
    RULES
        .iter()
        .map(|row| {
            let mut passes = 0;
            let mut first_failure = None;
            for _ in 0..trials {
                let a = sample(row, field, rng);
                let outcome = TransitionState::of_type(row.from, field, 1, 2).and_then(|s| {
                    let table = apply_row(row, &s, &a, r)?;
                    let generic = step_generic(&s, &a, r)?;
                    Ok((table, generic))
                });
                match outcome {
                    Ok((t, g)) if t == g => passes += 1,
                    Ok((t, g)) => {
                        first_failure.get_or_insert_with(|| {
                            format!("a={a}: table {:?} {} vs generic {:?} {}", t.0, t.1, g.0, g.1)
                        });
                    }
                    Err(e) => {
                        first_failure.get_or_insert_with(|| format!("a={a}: {e}"));
                    }
                }
            }
            RuleReport {
                rule: row.name(),
                trials,
                passes,
                first_failure,
            }
        })
        .collect()
}

/// Feeds `input` letter by letter through the table from type `from`.
pub fn run_table(from: EqType, input: &Word, field: Fp, r: u64) -> Result<(Word, TransitionState)> {
    let mut s = TransitionState::of_type(from, field, 1, 2)?;
    let mut out = Word::default();
    for a in input.iter() {
        let (w, next) = apply_rule(&s, a, r)?;
        out.extend_from(&w);
        s = next;
    }
    Ok((out, s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub k: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

struct LemmaCase {
    name: &'static str,
    from: EqType,
    input: Word,
    expected: Word,
    to: EqType,
}

fn lemma_cases(g: &mut Words, k: usize) -> Result<Vec<LemmaCase>> {
    let f = g.field();
    let r = g.r();
    let t = Poly::t(f);
    let one = Poly::one(f);
    // the first three letters of -rev Ω_k
    let bridge = Word::new(vec![Poly::monomial(f, f.neg(1), r as usize - 2), &t + &one, &t - &one]);
    let even = k % 2 == 0;
    let mut cases = Vec::new();

    let gk = g.gamma(k)?;
    let gk1 = g.gamma(k + 1)?;
    let (gfrom, gto) = if even { (A5, A6) } else { (A3, A4) };
    cases.push(LemmaCase {
        name: "gamma",
        from: gfrom,
        input: (*gk).clone(),
        expected: gk1.drop_take(1, 0)?,
        to: gto,
    });
    cases.push(LemmaCase {
        name: "gamma-rev",
        from: gfrom,
        input: gk.reverse_neg(),
        expected: gk1.reverse_neg().drop_take(1, 0)?,
        to: gto,
    });

    let lk = g.lambda(k)?;
    let lk1 = g.lambda(k + 1)?;
    let mut aa = Word::new(vec![Poly::monomial(f, 1, r as usize - 2)]);
    aa.extend_from(&lk1);
    cases.push(LemmaCase {
        name: if even { "lambda-aa" } else { "lambda-cc" },
        from: A2,
        input: (*lk).clone(),
        expected: aa,
        to: if even { A6 } else { A4 },
    });
    let mut bb = lk1.reverse_neg().drop_take(1, 0)?;
    bb.extend_from(&bridge);
    cases.push(LemmaCase {
        name: if even { "lambda-bb" } else { "lambda-dd" },
        from: if even { A5 } else { A3 },
        input: lk.reverse_neg(),
        expected: bb,
        to: A1,
    });

    let ok = g.omega(k)?;
    let ok1 = g.omega(k + 1)?;
    cases.push(LemmaCase {
        name: "omega-prefix1",
        from: A1,
        input: (*ok).clone(),
        expected: ok1.drop_take(3, 1)?,
        to: A2,
    });
    cases.push(LemmaCase {
        name: "omega-prefix2",
        from: A1,
        input: ok.reverse_neg(),
        expected: ok1.reverse_neg().drop_take(3, 1)?,
        to: A2,
    });
    Ok(cases)
}

/// Checks the word-level consequences of the rule table for `k = 1..=k_max`.
pub fn verify_word_lemmas(field: Fp, r: u64, k_max: usize) -> Result<Vec<LemmaReport>> {
    let mut g = Words::new(field, r)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        for case in lemma_cases(&mut g, k)? {
            let target = TransitionState::of_type(case.to, field, 1, 2)?;
            let (pass, detail) = match run_table(case.from, &case.input, field, r) {
                Ok((w, s)) if w == case.expected && s.same_relation(&target) => (true, None),
                Ok((w, s)) => {
                    let at = w
                        .iter()
                        .zip(case.expected.iter())
                        .position(|(x, y)| x != y)
                        .unwrap_or(w.len().min(case.expected.len()));
                    (
                        false,
                        Some(format!(
                            "first difference at letter {at} (got {} letters, expected {}), final state {s}",
                            w.len(),
                            case.expected.len()
                        )),
                    )
                }
                Err(e) => (false, Some(e.to_string())),
            };
            out.push(LemmaReport {
                lemma: case.name.to_string(),
                k,
                pass,
                detail,
            });
        }
    }
    Ok(out)
}
