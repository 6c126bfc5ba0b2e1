//! Certified Laurent expansions of the concrete series: the Mahler series
//! `Θ_r`, the root `BS_r` of `T X^(r+1) + X - T = 0`, the series
//! `z = [P, T+1, T-1, ...]` of `T^2 z^(r+1) = (P T^2 + T - 1) z^r + 1`, and the
//! series `z = [a_1..a_ℓ, z_{ℓ+1}]` with `z^r = -T^2 z_{ℓ+1} - T`.
//!
//! Apart from `Θ_r`, which is a lacunary sum, each series is the fixed point
//! of an ultrametric contraction and is reached by plain iteration.

use serde::{Deserialize, Serialize};

use crate::algebra::{convergents, Fp, Poly, RatFunc};
use crate::contfrac::{cf_expand, fold, fold_finite, Word};
use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// Which series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Mahler,
    BaumSweet,
    General,
    Mahlergen,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Mahler => "mahler",
            Family::BaumSweet => "baum-sweet",
            Family::General => "general",
            Family::Mahlergen => "mahlergen",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub family: Family,
    pub field: Fp,
    pub r: u64,
    /// `P` for [`Family::General`].
    pub poly: Option<Poly>,
    /// `a_1..a_ℓ` for [`Family::Mahlergen`].
    pub seed: Option<Word>,
    /// Every coefficient at an exponent `>= target` is certified.
    pub target: i64,
}

impl SolveRequest {
    pub fn new(family: Family, field: Fp, r: u64, target: i64) -> Self {
        SolveRequest {
            family,
            field,
            r,
            poly: None,
            seed: None,
            target,
        }
    }

    pub fn with_poly(mut self, p: Poly) -> Self {
        self.poly = Some(p);
        self
    }

    pub fn with_seed(mut self, seed: Word) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.field.check_power(self.r)?;
        if self.r <= 2 {
            return Err(Error::RGreaterThanTwoRequired(self.r));
        }
        match self.family {
            Family::General => {
                let p = self.general_poly()?;
                if p.is_zero() || !p.divisible_by_t() {
                    return Err(Error::NotDivisibleByT { poly: p.to_string() });
                }
            }
            Family::Mahlergen => check_seed(self.mahlergen_seed()?)?,
            Family::Mahler | Family::BaumSweet => {}
        }
        Ok(())
    }

    fn general_poly(&self) -> Result<&Poly> {
        self.poly
            .as_ref()
            .ok_or_else(|| Error::Config("the general family needs a polynomial P".into()))
    }

    fn mahlergen_seed(&self) -> Result<&Word> {
        self.seed
            .as_ref()
            .ok_or_else(|| Error::Config("the mahlergen family needs a seed".into()))
    }
}

fn check_seed(seed: &Word) -> Result<()> {
    if seed.is_empty() {
        return Err(Error::Config("mahlergen seed must be nonempty".into()));
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
    Ok(())
}

/// Small targets are computed at this precision and truncated afterwards,
/// so the per-step precision loss never exceeds the window.
const MIN_WORK_PREC: i64 = -256;

fn iteration_cap(target: i64, r: u64) -> u64 {
    let span = target.unsigned_abs();
    let step = r - 2;
    4 + span.div_ceil(step)
}

/// Iterates `step(x, w)` from `x0` at working precision `w`. Once an iterate
/// reproduces itself on every exponent `>= w`, `w` is multiplied by `r` (the
/// error exponent grows that fast) until it reaches `target`. Within one
/// level the degree of the difference must strictly drop.
fn fixed_point(
    x0: Laurent,
    target: i64,
    r: u64,
    step: impl Fn(&Laurent, i64) -> Result<Laurent>,
) -> Result<Laurent> {
    let cap = iteration_cap(target, r);
    let mut w = MIN_WORK_PREC.max(target);
    let mut x = x0.truncate(w);
    let mut last: Option<i64> = None;
    for _ in 0..cap {
        let y = step(&x, w)?;
        if y.prec() > w {
            return Err(Error::NoContraction(format!(
                "iterate certified only down to {}, target {w}",
                y.prec()
            )));
        }
        let y = y.truncate(w);
        let Some(dd) = y.sub(&x).degree() else {
            if w == target {
                return Ok(y);
            }
            w = w.saturating_mul(r as i64).max(target);
            x = y.pad(w);
            last = None;
            continue;
        };
        if last.is_some_and(|l| dd >= l) {
            return Err(Error::NoContraction(format!(
                "difference degree went from {} to {dd}",
                last.unwrap()
            )));
        }
        last = Some(dd);
        x = y;
    }
    Err(Error::NoContraction(format!("no convergence within {cap} iterations")))
}

fn work_prec(target: i64) -> i64 {
    target.min(MIN_WORK_PREC)
}

/// `Θ_r = Σ_k T^{-r^k}` down to `target`.
pub fn mahler_theta(field: Fp, r: u64, target: i64) -> Result<Laurent> {
    field.check_power(r)?;
    if target > -1 {
        return Ok(Laurent::zero(field, target));
    }
    let len = (-1 - target + 1) as usize;
    let mut coeffs = vec![0; len];
    let mut e: u64 = 1;
    while (e as i64) <= -target {
        coeffs[(e - 1) as usize] = 1;
        e = match e.checked_mul(r) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(Laurent::from_window(field, -1, coeffs))
}

/// `BS_r`: iterates `X <- T / (T X^r + 1)` from `X_0 = 1`.
pub fn solve_bs(field: Fp, r: u64, target: i64) -> Result<Laurent> {
    let work = work_prec(target);
    let x = fixed_point(Laurent::one(field, work), work, r, |x, w| {
        let xr = x.frobenius_floor(r, w)?;
        let den = xr.shift(1).add(&Laurent::one(field, w));
        Ok(den.inv()?.shift(1))
    })?;
    Ok(x.truncate(target))
}

/// The root of `T^2 z^(r+1) = (P T^2 + T - 1) z^r + 1` with expansion
/// `[P, T+1, T-1, ...]`: iterates `z <- (P T^2 + T - 1)/T^2 + 1/(T^2 z^r)`.
pub fn solve_general(field: Fp, r: u64, p: &Poly, target: i64) -> Result<Laurent> {
    if p.field() != field {
        return Err(Error::Config("polynomial lives over a different field".into()));
    }
    if p.is_zero() || !p.divisible_by_t() {
        return Err(Error::NotDivisibleByT { poly: p.to_string() });
    }
    let work = work_prec(target);
    let dp = p.degree().unwrap() as i64;
    let c = general_constant(p);
    let z = fixed_point(Laurent::from_ratfunc(&c, work), work, r, |z, w| {
        let zr = z.frobenius_floor(r, w + 2 * r as i64 * dp + 2)?;
        Ok(Laurent::from_ratfunc(&c, w).add(&zr.shift(2).inv()?))
    })?;
    check_general(&z, p, r)?;
    Ok(z.truncate(target))
}

/// `(P T^2 + T - 1) / T^2`
fn general_constant(p: &Poly) -> RatFunc {
    let f = p.field();
    let num = &p.shift_up(2) + &Poly::from_ints(f, &[-1, 1]);
    RatFunc::new(num, Poly::monomial(f, 1, 2)).expect("T^2 is nonzero")
}

fn check_general(z: &Laurent, p: &Poly, r: u64) -> Result<()> {
    let f = p.field();
    let prefix = Word::new(vec![p.clone(), Poly::from_ints(f, &[1, 1]), Poly::from_ints(f, &[-1, 1])]);
    let e = cf_expand(z, 3);
    if e.word != prefix {
        return Err(Error::Assertion(format!(
            "expansion starts {:?}, expected {:?}",
            e.word, prefix
        )));
    }
    // z^r = T^2 z_4 + (T + 1)
    let z4 = complete_quotient(z, &prefix)?;
    let zr = z.frobenius_floor(r, z4.prec() + 2)?;
    let rel = zr
        .sub(&z4.shift(2))
        .sub(&Laurent::from_poly(&Poly::from_ints(f, &[1, 1]), z4.prec() + 2));
    if !rel.is_zero_so_far() {
        return Err(Error::Assertion(format!("z^r - T^2 z_4 - (T+1) = {rel}")));
    }
    Ok(())
}

/// The series `z = [a_1..a_ℓ, z_{ℓ+1}]` with `z^r = -T^2 z_{ℓ+1} - T`:
/// iterates `z <- [a_1..a_ℓ, -(z^r + T)/T^2]` from `[a_1..a_ℓ]`.
pub fn solve_mahlergen(field: Fp, r: u64, seed: &Word, target: i64) -> Result<Laurent> {
    check_seed(seed)?;
    let work = work_prec(target);
    let d1 = seed.letters()[0].degree().unwrap() as i64;
    // deg of the tail -(z^r + T)/T^2
    let e = r as i64 * d1 - 2;
    let x0 = Laurent::from_ratfunc(&fold_finite(seed)?, work);
    let z = fixed_point(x0, work, r, |z, w| {
        let floor = w - d1 + e + 2 - 8;
        let zr = z.frobenius_floor(r, floor)?;
        let tail = zr.add(&Laurent::from_poly(&Poly::t(field), floor)).shift(-2).neg();
        fold(seed, &tail)
    })?;
    let got = cf_expand(&z, seed.len());
    if got.word != *seed {
        return Err(Error::Assertion(format!(
            "expansion starts {:?}, expected the seed {:?}",
            got.word, seed
        )));
    }
    Ok(z.truncate(target))
}

pub fn solve(req: &SolveRequest) -> Result<Laurent> {
    req.validate()?;
    match req.family {
        Family::Mahler => mahler_theta(req.field, req.r, req.target),
        Family::BaumSweet => solve_bs(req.field, req.r, req.target),
        Family::General => solve_general(req.field, req.r, req.general_poly()?, req.target),
        Family::Mahlergen => solve_mahlergen(req.field, req.r, req.mahlergen_seed()?, req.target),
    }
}

/// `y` with `z = [w, y]`, i.e. `y = (p' - q' z) / (q z - p)`.
pub fn complete_quotient(z: &Laurent, w: &Word) -> Result<Laurent> {
    let f = z.field();
    let conv = convergents(w.letters());
    let n = conv.len();
    let (p, q) = conv
        .last()
        .cloned()
        .ok_or_else(|| Error::Assertion("empty word".into()))?;
    let (pp, qp) = if n >= 2 {
        conv[n - 2].clone()
    } else {
        (Poly::one(f), Poly::zero(f))
    };
    let zq = z.mul_poly(&q);
    let u = zq.sub(&Laurent::from_poly(&p, zq.prec()));
    let v = if qp.is_zero() {
        Laurent::from_poly(&pp, z.prec())
    } else {
        let zq = z.mul_poly(&qp);
        Laurent::from_poly(&pp, zq.prec()).sub(&zq)
    };
    v.div(&u)
}

/// Outcome of substituting a computed series into its defining equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub family: Family,
    /// Certified bound of the residual series.
    pub prec: i64,
    /// The residual is zero on its whole certified window.
    pub vanishes: bool,
    /// Allowed gap between `prec` and the series' own precision.
    pub slack: i64,
}

impl Residual {
    pub fn ok(&self, target: i64) -> bool {
        self.vanishes && self.prec <= target + self.slack
    }
}

/// Residual of the defining equation of `req`'s family at the computed `x`.
///
/// Slack per family, from the precision bookkeeping:
/// - Mahler `T z^r - T z + 1`: 1 (the factor `T`).
/// - Baum–Sweet `T X^(r+1) + X - T`: 1 (the factor `T`).
/// - general `T^2 z^(r+1) - (P T^2 + T - 1) z^r - 1`: `r deg P + 2`, since
///   `z^(r+1) = z^r z` is certified to `prec + r deg z` and `deg z = deg P`.
/// - mahlergen `z^r + T^2 z_{ℓ+1} + T`: `2 (deg q_ℓ + deg z_{ℓ+1}) + 2`, the
///   loss from recovering `z_{ℓ+1}` out of `z` through the convergents.
pub fn residual(req: &SolveRequest, x: &Laurent) -> Result<Residual> {
    let f = req.field;
    let r = req.r;
    let pi = x.prec();
    let (res, slack) = match req.family {
        Family::Mahler => {
            let xr = x.frobenius_floor(r, pi)?;
            let res = xr.sub(x).shift(1).add(&Laurent::one(f, pi + 1));
            (res, 1)
        }
        Family::BaumSweet => {
            let xr = x.frobenius_floor(r, pi)?;
            let res = xr.mul(x).shift(1).add(x).sub(&Laurent::monomial(f, 1, 1, pi));
            (res, 1)
        }
        Family::General => {
            let p = req.general_poly()?;
            let dp = p.degree().unwrap_or(0) as i64;
            let xr = x.frobenius_floor(r, pi)?;
            let lhs = xr.mul(x).shift(2);
            let c = &p.shift_up(2) + &Poly::from_ints(f, &[-1, 1]);
            let rhs = xr.mul_poly(&c).add(&Laurent::one(f, pi));
            (lhs.sub(&rhs), r as i64 * dp + 2)
        }
        Family::Mahlergen => {
            let seed = req.mahlergen_seed()?;
            let q_deg: i64 = seed.iter().skip(1).map(|a| a.deg_i64()).sum();
            let e = r as i64 * seed.letters()[0].deg_i64() - 2;
            let y = complete_quotient(x, seed)?;
            let xr = x.frobenius_floor(r, y.prec())?;
            let res = xr.add(&y.shift(2)).add(&Laurent::monomial(f, 1, 1, y.prec()));
            (res, 2 * (q_deg + e) + 2)
        }
    };
    Ok(Residual {
        family: req.family,
        prec: res.prec(),
        vanishes: res.is_zero_so_far(),
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{MahlergenStream, OmegaStream};

    fn field(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn w(f: Fp, s: &str) -> Word {
        Word::parse_list(f, s).unwrap()
    }

    #[test]
    fn theta_coefficients_and_residual() {
        let f = field(3);
        let th = mahler_theta(f, 3, -100).unwrap();
        for e in -100..=0 {
            let want = [-1, -3, -9, -27, -81].contains(&e) as u32;
            assert_eq!(th.coeff(e), Some(want), "e={e}");
        }
        let req = SolveRequest::new(Family::Mahler, f, 3, -100);
        let res = residual(&req, &th).unwrap();
        assert!(res.ok(-100), "{res:?}");
        assert_eq!(th.inv().unwrap().polynomial_part().unwrap(), Poly::t(f));
        assert_eq!(th.polynomial_part().unwrap(), Poly::zero(f));
    }

    #[test]
    fn bs_series() {
        for (p, r) in [(3u64, 3u64), (2, 4), (5, 5)] {
            let f = field(p);
            let x = solve_bs(f, r, -300).unwrap();
            assert_eq!(x.prec(), -300);
            let req = SolveRequest::new(Family::BaumSweet, f, r, -300);
            assert!(residual(&req, &x).unwrap().ok(-300));
            let e = cf_expand(&x, 40);
            let mut want = w(f, "1, -T-1");
            want.extend_from(&OmegaStream::new(f, r, None).unwrap().take_word(e.certified - 2).unwrap());
            assert_eq!(e.word, want, "p={p}");
            assert!(e.certified >= 10);
        }
    }

    #[test]
    fn general_series() {
        let f = field(3);
        let p = Poly::monomial(f, f.neg(1), 1);
        let z = solve_general(f, 3, &p, -300).unwrap();
        let bs = solve_bs(f, 3, -300).unwrap();
        let back = fold(&w(f, "1, -T-1"), &z).unwrap();
        assert_eq!(back.truncate(-250), bs.truncate(-250));
        let c = Laurent::from_ratfunc(&RatFunc::new(Poly::parse(f, "-T^3+T-1").unwrap(), Poly::monomial(f, 1, 2)).unwrap(), -300);
        assert!(z.sub(&c).degree().unwrap() < -4);

        let f5 = field(5);
        let p = Poly::parse(f5, "T^2+T").unwrap();
        let z = solve_general(f5, 5, &p, -400).unwrap();
        let req = SolveRequest::new(Family::General, f5, 5, -400).with_poly(p.clone());
        assert!(residual(&req, &z).unwrap().ok(-400));
        let e = cf_expand(&z, 60);
        let want = OmegaStream::new(f5, 5, Some(p)).unwrap().take_word(e.certified).unwrap();
        assert_eq!(e.word, want);
        assert!(solve_general(f5, 5, &Poly::parse(f5, "T+1").unwrap(), -100).is_err());
    }

    #[test]
    fn mahlergen_series() {
        let f = field(3);
        let z = solve_mahlergen(f, 3, &w(f, "T"), -300).unwrap();
        let th = mahler_theta(f, 3, -300).unwrap();
        assert_eq!(z.inv().unwrap().truncate(-290), th.truncate(-290));
        for seed in ["T", "T^2, T+1, T^3"] {
            let seed = w(f, seed);
            let z = solve_mahlergen(f, 3, &seed, -600).unwrap();
            let req = SolveRequest::new(Family::Mahlergen, f, 3, -600).with_seed(seed.clone());
            let res = residual(&req, &z).unwrap();
            assert!(res.ok(-600), "{res:?}");
            let e = cf_expand(&z, 100);
            let want = MahlergenStream::new(&seed, 3).unwrap().take_word(e.certified).unwrap();
            assert_eq!(e.word, want);
            assert!(e.certified >= 20);
        }
    }

    #[test]
    fn rejects_small_r() {
        let f = field(2);
        let req = SolveRequest::new(Family::BaumSweet, f, 2, -64);
        assert_eq!(solve(&req), Err(Error::RGreaterThanTwoRequired(2)));
    }
}
