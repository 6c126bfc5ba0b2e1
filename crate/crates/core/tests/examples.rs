//! Worked examples for each module, through the public API.

use hqcf::algebra::convergents;
use hqcf::contfrac::{cf_expand, fold, fold_finite, tail_transform};
use hqcf::hyperquad::{run_table, self_generate, step, EqType, TransitionState};
use hqcf::solvers::{mahler_theta, solve_bs, solve_general, solve_mahlergen};
use hqcf::words::{exp_value, gamma, lambda_word, omega, omega_p, MahlergenStream, OmegaStream, SeqKind};
use hqcf::{Fp, Laurent, Poly, RatFunc, Word};

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn poly(f: Fp, s: &str) -> Poly {
    Poly::parse(f, s).unwrap()
}

fn word(f: Fp, s: &str) -> Word {
    Word::parse_list(f, s).unwrap()
}

fn rat(f: Fp, num: &str, den: &str) -> RatFunc {
    RatFunc::new(poly(f, num), poly(f, den)).unwrap()
}

/// Coefficients of `x` from exponent `hi` down to `lo`.
fn coeffs(x: &Laurent, hi: i64, lo: i64) -> Vec<u32> {
    (lo..=hi).rev().map(|e| x.coeff(e).unwrap()).collect()
}

#[test]
fn frobenius_on_polynomials() {
    let f3 = fp(3);
    assert_eq!(poly(f3, "T").frobenius(3).unwrap(), poly(f3, "T^3"));
    assert_eq!(poly(f3, "T+1").frobenius(3).unwrap(), poly(f3, "T^3+1"));
    let f2 = fp(2);
    assert!(poly(f2, "2*T").frobenius(4).unwrap().is_zero());
}

#[test]
fn residues_mod_t() {
    let f3 = fp(3);
    assert_eq!(poly(f3, "T^3").residue_at_zero(), 0);
    assert_eq!(poly(f3, "T+1").residue_at_zero(), 1);
    assert_eq!(poly(f3, "-T-1").residue_at_zero(), 2);
}

#[test]
fn rational_expansions() {
    let f3 = fp(3);
    assert_eq!(rat(f3, "T^2+1", "T").cf(), word(f3, "T,T"));
    let (a1, a2) = (poly(f3, "T+1"), poly(f3, "T-1"));
    let x = RatFunc::new(&(&a1 * &a2) + &Poly::one(f3), a2.clone()).unwrap();
    assert_eq!(x.cf(), Word::new(vec![a1, a2]));

    // (P a^r - R)/Q for the A1 relation with a = T^3
    let (p, q, r) = EqType::A1.triple(f3);
    let a = poly(f3, "T^3");
    let num = &(&p * &a.frobenius(3).unwrap()) - &r;
    let x = RatFunc::new(num, q).unwrap();
    assert_eq!(x.cf(), word(f3, "T^7,2*T+1,2*T+2"));
}

#[test]
fn convergent_examples() {
    let f3 = fp(3);
    let a1 = poly(f3, "T^2+2");
    assert_eq!(convergents(&[a1.clone()]), vec![(a1, Poly::one(f3))]);
    let t = poly(f3, "T");
    let conv = convergents(&[t.clone(), t.clone()]);
    assert_eq!(conv.last().unwrap(), &(poly(f3, "T^2+1"), t));
    let (a1, a2) = (poly(f3, "T+1"), poly(f3, "2*T^2"));
    let conv = convergents(&[a1.clone(), a2.clone()]);
    assert_eq!(conv[1], (&(&a1 * &a2) + &Poly::one(f3), a2));
}

#[test]
fn series_arithmetic() {
    let f3 = fp(3);
    let t = Laurent::from_poly(&poly(f3, "T"), -20);
    let inv = t.inv().unwrap();
    assert_eq!(inv.degree(), Some(-1));
    assert_eq!(coeffs(&inv, -1, -20), {
        let mut v = vec![0; 20];
        v[0] = 1;
        v
    });

    let x = Laurent::from_ratfunc(&rat(f3, "T", "T^4+1"), -12);
    assert_eq!(x.degree(), Some(-3));
    // T^-3 + 2 T^-7 + T^-11
    assert_eq!(coeffs(&x, -3, -12), vec![1, 0, 0, 0, 2, 0, 0, 0, 1, 0]);

    let geo = Laurent::from_ratfunc(&rat(f3, "1", "T-1"), -3);
    assert_eq!(geo.prec(), -3);
    assert_eq!(coeffs(&geo, 0, -3), vec![0, 1, 1, 1]);

    let z0 = Laurent::from_ratfunc(&rat(f3, "-T^3+T-1", "T^2"), -30);
    assert_eq!(z0.polynomial_part().unwrap(), poly(f3, "2*T"));
    assert_eq!(coeffs(&z0, 1, -30)[..4], [2, 0, 1, 2]);
    assert!(coeffs(&z0, -3, -30).iter().all(|&c| c == 0));

    assert_eq!(Laurent::from_poly(&poly(f3, "T"), -5).polynomial_part().unwrap(), poly(f3, "T"));
}

#[test]
fn series_frobenius() {
    let f3 = fp(3);
    let x = Laurent::monomial(f3, 1, -1, -40);
    let y = x.frobenius(3).unwrap();
    assert_eq!(y.degree(), Some(-3));
    let theta = mahler_theta(f3, 3, -200).unwrap();
    let lhs = theta.frobenius(3).unwrap();
    let rhs = theta.sub(&Laurent::monomial(f3, 1, -1, -200));
    assert!(lhs.sub(&rhs).is_zero_so_far());
    let twice = theta.frobenius(3).unwrap().frobenius(3).unwrap();
    let once = theta.frobenius(9).unwrap();
    assert!(twice.sub(&once).is_zero_so_far());
}

#[test]
fn polynomial_parts() {
    let f3 = fp(3);
    assert_eq!(solve_bs(f3, 3, -50).unwrap().polynomial_part().unwrap(), Poly::one(f3));
    assert!(mahler_theta(f3, 3, -50).unwrap().polynomial_part().unwrap().is_zero());
    let x = Laurent::from_ratfunc(&rat(f3, "T^3+1", "T"), -10);
    assert_eq!(x.polynomial_part().unwrap(), poly(f3, "T^2"));
}

#[test]
fn expansion_examples() {
    let f3 = fp(3);
    let x = Laurent::from_ratfunc(&rat(f3, "T^2+1", "T"), -10);
    let e = cf_expand(&x, 10);
    assert_eq!((e.word, e.certified), (word(f3, "T,T"), 2));

    let theta = mahler_theta(f3, 3, -400).unwrap();
    assert_eq!(cf_expand(&theta, 5).word, word(f3, "0,T,-T,-T,-T^3"));

    let bs = solve_bs(f3, 3, -400).unwrap();
    assert_eq!(cf_expand(&bs, 9).word, word(f3, "1,2*T+2,2*T,T+1,T-1,2*T,2*T+1,2*T+2,T"));
}

#[test]
fn fold_examples() {
    let f3 = fp(3);
    let t = RatFunc::from_poly(poly(f3, "T"));
    let a1 = poly(f3, "T+2");
    let got = fold(&Word::new(vec![a1.clone()]), &t).unwrap();
    assert_eq!(got, &RatFunc::from_poly(a1) + &t.inv().unwrap());
    assert_eq!(fold(&word(f3, "T,T"), &t).unwrap(), rat(f3, "T^3+2*T", "T^2+1"));
    assert_eq!(fold_finite(&word(f3, "T,T")).unwrap(), rat(f3, "T^2+1", "T"));
}

#[test]
fn tail_transform_closed_forms() {
    let f5 = fp(5);
    let (a1, a2, a3) = (poly(f5, "T^2+3"), poly(f5, "2*T+1"), poly(f5, "T^3+T"));
    let r2 = RatFunc::from_poly(a2.clone());
    let (f, g) = tail_transform(&Word::new(vec![a1.clone(), a2.clone()])).unwrap();
    let inv = r2.inv().unwrap();
    assert_eq!(f, -&(&inv * &inv));
    assert_eq!(g, -&inv);

    let (f, g) = tail_transform(&Word::new(vec![a1.clone(), a2.clone(), a3.clone()])).unwrap();
    let s = &RatFunc::from_poly(&a2 * &a3) + &RatFunc::one(f5);
    let sinv = s.inv().unwrap();
    assert_eq!(f, &sinv * &sinv);
    assert_eq!(g, -&(&r2 * &sinv));

    let (f, g) = tail_transform(&Word::new(vec![a1])).unwrap();
    assert_eq!((f, g), (RatFunc::one(f5), RatFunc::zero(f5)));
}

#[test]
fn exponent_sequences() {
    for r in [3u64, 4, 5, 9] {
        assert_eq!(exp_value(SeqKind::Lambda, r, 1).unwrap(), r);
        assert_eq!(exp_value(SeqKind::Omega, r, 1).unwrap(), r - 2);
    }
    for k in 1..=40 {
        assert_eq!(exp_value(SeqKind::Omega, 3, k).unwrap(), 1);
    }
}

#[test]
fn gamma_lambda_omega() {
    let f3 = fp(3);
    assert_eq!(gamma(f3, 3, 1).unwrap(), word(f3, "-T,T^3,T"));
    assert_eq!(gamma(f3, 3, 2).unwrap(), word(f3, "T,T^3,-T,T^7,T,-T^3,-T"));
    for k in 1..=12 {
        assert_eq!(gamma(f3, 3, k).unwrap().len(), (1 << (k + 1)) - 1);
    }
    let f5 = fp(5);
    assert_eq!(lambda_word(f5, 5, 1).unwrap(), word(f5, "T+1,T-1"));
    assert_eq!(lambda_word(f5, 5, 2).unwrap(), word(f5, "T,-T^5+1,-T"));
    assert_eq!(lambda_word(f5, 5, 3).unwrap(), word(f5, "T+1,T-1,-T^23,-T,T^5,T"));

    assert_eq!(omega(f5, 5, 1).unwrap(), word(f5, "-T^3"));
    let w2 = exp_value(SeqKind::Omega, 5, 2).unwrap();
    let expected = format!("-T^3,T+1,T-1,-T^{w2},-T+1,-T-1,T^3");
    assert_eq!(omega(f5, 5, 2).unwrap(), word(f5, &expected));

    for p in [3u64, 5] {
        let f = fp(p);
        let lead = -&Poly::monomial(f, 1, p as usize - 2);
        for k in 1..=5 {
            assert_eq!(omega_p(f, p, &lead, k).unwrap(), omega(f, p, k).unwrap());
        }
    }
}

#[test]
fn omega_stream_examples() {
    let f3 = fp(3);
    let mut s = OmegaStream::new(f3, 3, None).unwrap();
    assert_eq!(s.next_letter().unwrap(), poly(f3, "-T"));
    let mut s = OmegaStream::new(f3, 3, None).unwrap();
    assert_eq!(s.take_word(7).unwrap(), omega(f3, 3, 2).unwrap());
    let f2 = fp(2);
    let mut s = OmegaStream::new(f2, 4, None).unwrap();
    assert_eq!(s.take_word(7).unwrap(), word(f2, "T^2,T+1,T+1,T^6,T+1,T+1,T^2"));
}

#[test]
fn word_operations() {
    let f3 = fp(3);
    let w = word(f3, "T+1,T-1");
    assert_eq!(w.reverse_neg(), word(f3, "-T+1,-T-1"));
    assert_eq!(w.reverse_neg().reverse_neg(), w);
    let f2 = fp(2);
    let w = word(f2, "T,T^2+1,T^3");
    assert_eq!(w.reverse_neg(), word(f2, "T^3,T^2+1,T"));

    let o2 = omega(f3, 3, 2).unwrap();
    assert_eq!(o2.drop_take(3, 1).unwrap(), word(f3, "-T,-T+1,-T-1"));
    assert_eq!(o2.drop_take(0, 0).unwrap(), o2);
    let g2 = gamma(f3, 3, 2).unwrap();
    assert_eq!(g2.drop_take(1, 0).unwrap().letters(), &g2.letters()[1..]);
}

#[test]
fn mahlergen_stream_examples() {
    let f3 = fp(3);
    let mut s = MahlergenStream::new(&word(f3, "T"), 3).unwrap();
    assert_eq!(s.take_word(5).unwrap(), word(f3, "T,-T,-T,-T^3,T"));
    let seed = word(f3, "T^2,T+1,T^3");
    let letters = MahlergenStream::new(&seed, 3).unwrap().take_word(43).unwrap();
    let t = poly(f3, "T");
    for k in 0..10 {
        assert_eq!(letters.letters()[3 + 4 * k + 1], -&t);
        assert_eq!(letters.letters()[3 + 4 * k + 3], t);
    }
}

#[test]
fn rule_examples() {
    let f3 = fp(3);
    let s = TransitionState::of_type(EqType::A1, f3, 1, 2).unwrap();
    let (w, next) = step(&s, &poly(f3, "T^3"), 3).unwrap();
    assert_eq!(w, word(f3, "T^7,-T+1,-T-1"));
    assert_eq!((next.tag(), next.n), (Some(EqType::A2), 5));

    let s = TransitionState::of_type(EqType::A3, f3, 1, 2).unwrap();
    let a = poly(f3, "T^2+T+2");
    let (w, next) = step(&s, &a, 3).unwrap();
    assert_eq!(w, Word::new(vec![-&a.frobenius(3).unwrap(), poly(f3, "-T")]));
    assert_eq!((next.tag(), next.n), (Some(EqType::A4), 4));

    let s = TransitionState::of_type(EqType::A1, f3, 1, 2).unwrap();
    let (w, next) = step(&s, &poly(f3, "T+1"), 3).unwrap();
    assert_eq!(w, word(f3, "T,-T"));
    assert_eq!(next.tag(), Some(EqType::A5));

    let s = TransitionState::of_type(EqType::A2, f3, 1, 2).unwrap();
    let a = poly(f3, "T^2+T");
    let (w, next) = step(&s, &a, 3).unwrap();
    let lead = a.frobenius(3).unwrap().shift_down(2).unwrap();
    assert_eq!(w, Word::new(vec![lead, poly(f3, "T+1"), poly(f3, "T-1")]));
    assert_eq!(next.tag(), Some(EqType::A1));

    let s = TransitionState::of_type(EqType::A6, f3, 1, 2).unwrap();
    let a = poly(f3, "T^2-1");
    let (w, next) = step(&s, &a, 3).unwrap();
    let lead = (&a + &Poly::one(f3)).frobenius(3).unwrap().shift_down(2).unwrap();
    assert_eq!(w, Word::new(vec![lead, poly(f3, "-T+1"), poly(f3, "-T-1")]));
    assert_eq!(next.tag(), Some(EqType::A2));

    let s = TransitionState::of_type(EqType::A5, f3, 1, 2).unwrap();
    let (w, next) = step(&s, &poly(f3, "-T"), 3).unwrap();
    assert_eq!(w, word(f3, "T^3,T"));
    assert_eq!(next.tag(), Some(EqType::A6));
}

#[test]
fn engine_examples() {
    for (p, r) in [(3u64, 3u64), (5, 5), (2, 4)] {
        let f = fp(p);
        let lead = -&Poly::monomial(f, 1, r as usize - 2);
        let seed = Word::new(vec![lead, poly(f, "T+1"), poly(f, "T-1")]);
        let s = TransitionState::of_type(EqType::A1, f, 1, 4).unwrap();
        let got = self_generate(&s, &seed, 60, r).unwrap();
        let want = OmegaStream::new(f, r, None).unwrap().take_word(60).unwrap();
        assert_eq!(got, want, "p={p} r={r}");
        assert_eq!(self_generate(&s, &seed, 3, r).unwrap(), seed);
    }
    let f3 = fp(3);
    let s = TransitionState::new(Poly::one(f3), poly(f3, "-T^2"), poly(f3, "-T"), 1, 2).unwrap();
    let got = self_generate(&s, &word(f3, "T"), 40, 3).unwrap();
    let want = MahlergenStream::new(&word(f3, "T"), 3).unwrap().take_word(40).unwrap();
    assert_eq!(got, want);
}

#[test]
fn word_lemma_examples() {
    let f3 = fp(3);
    let (w, s) = run_table(EqType::A5, &gamma(f3, 3, 2).unwrap(), f3, 3).unwrap();
    assert_eq!(w, gamma(f3, 3, 3).unwrap().drop_take(1, 0).unwrap());
    assert_eq!(s.tag(), Some(EqType::A6));

    let (w, s) = run_table(EqType::A2, &lambda_word(f3, 3, 2).unwrap(), f3, 3).unwrap();
    let mut want = word(f3, "T");
    want.extend_from(&lambda_word(f3, 3, 3).unwrap());
    assert_eq!(w, want);
    assert_eq!(s.tag(), Some(EqType::A6));

    let (_, s) = run_table(EqType::A2, &lambda_word(f3, 3, 3).unwrap(), f3, 3).unwrap();
    assert_eq!(s.tag(), Some(EqType::A4));
}

#[test]
fn solver_examples() {
    let f3 = fp(3);
    let theta = mahler_theta(f3, 3, -100).unwrap();
    for e in -100..0 {
        let want = u32::from([1, 3, 9, 27, 81].contains(&-e));
        assert_eq!(theta.coeff(e), Some(want), "exponent {e}");
    }
    let y = theta.inv().unwrap();
    assert_eq!(y.polynomial_part().unwrap(), poly(f3, "T"));

    let minus = -&poly(f3, "T");
    let z = solve_general(f3, 3, &minus, -300).unwrap();
    let bs = solve_bs(f3, 3, -300).unwrap();
    let back = fold(&word(f3, "1,-T-1"), &z).unwrap();
    assert!(back.sub(&bs).truncate(-290).is_zero_so_far());
    let z0 = Laurent::from_ratfunc(&rat(f3, "-T^3+T-1", "T^2"), -300);
    assert!(z.sub(&z0).degree().unwrap() < -4);

    let f5 = fp(5);
    let p = poly(f5, "T^2+T");
    let z = solve_general(f5, 5, &p, -4000).unwrap();
    let e = cf_expand(&z, 1000);
    assert!(e.certified >= 30);
    let want = OmegaStream::new(f5, 5, Some(p)).unwrap().take_word(e.certified).unwrap();
    assert_eq!(e.word, want);

    let seed = word(f3, "T");
    let y = solve_mahlergen(f3, 3, &seed, -400).unwrap();
    let back = fold(&word(f3, "0"), &y).unwrap();
    assert!(back.sub(&mahler_theta(f3, 3, -400).unwrap()).truncate(-390).is_zero_so_far());
    assert_eq!(cf_expand(&y, 2).word, word(f3, "T,-T"));

    let seed = word(f3, "T^2,T+1,T^3");
    let z = solve_mahlergen(f3, 3, &seed, -20000).unwrap();
    let e = cf_expand(&z, 100);
    assert_eq!(e.certified, 100);
    assert_eq!(e.word, MahlergenStream::new(&seed, 3).unwrap().take_word(100).unwrap());
}
