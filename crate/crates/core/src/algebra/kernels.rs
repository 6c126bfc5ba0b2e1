//! Dense coefficient-vector kernels shared by polynomials and series.
//!
//! Vectors are little-endian in the running variable (index `i` holds the
//! coefficient of `X^i`). Large products go through [`super::ntt`].

use super::field::{Coeff, Fp};
use super::ntt;

const SCHOOLBOOK_LIMIT: usize = 48;

fn nnz(a: &[Coeff]) -> usize {
    a.iter().filter(|&&c| c != 0).count()
}

/// `dst[i] -= c * src[i]` over F_p.
pub fn sub_scaled(f: Fp, dst: &mut [Coeff], src: &[Coeff], c: Coeff) {
    if c == 0 {
        return;
    }
    let p = f.p();
    let neg_c = f.neg(c);
    let n = dst.len().min(src.len());
    if p <= 1 << 16 && n > 4 * p as usize {
        let table: Vec<Coeff> = (0..p).map(|v| f.mul(v, neg_c)).collect();
        for (d, &s) in dst[..n].iter_mut().zip(&src[..n]) {
            let t = *d + table[s as usize];
            *d = if t >= p { t - p } else { t };
        }
    } else {
        let pp = p as u64;
        for (d, &s) in dst[..n].iter_mut().zip(&src[..n]) {
            *d = ((*d as u64 + s as u64 * neg_c as u64) % pp) as Coeff;
        }
    }
}

/// `dst[i] += c * src[i]` over F_p.
pub fn add_scaled(f: Fp, dst: &mut [Coeff], src: &[Coeff], c: Coeff) {
    sub_scaled(f, dst, src, f.neg(c));
}

/// First `out_len` coefficients of `a * b` (pass `usize::MAX` for all).
pub fn mul_trunc(f: Fp, a: &[Coeff], b: &[Coeff], out_len: usize) -> Vec<Coeff> {
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return Vec::new();
    }
    let full = a.len() + b.len() - 1;
    let out_len = out_len.min(full);
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let (na, nb) = (nnz(a), nnz(b));
    let sparse_cost = (na * b.len()).min(nb * a.len());
    let n = (a.len() + b.len()).next_power_of_two();
    let fft_cost = 4 * n * (n.trailing_zeros() as usize + 1);
    if a.len().min(b.len()) <= SCHOOLBOOK_LIMIT || sparse_cost <= fft_cost || !ntt::mul_fits(a.len(), b.len(), f.p()) {
        let (x, y) = if na * b.len() <= nb * a.len() { (a, b) } else { (b, a) };
        let mut out = vec![0; out_len];
        for (i, &c) in x.iter().enumerate() {
            if c == 0 || i >= out_len {
                continue;
            }
            let m = y.len().min(out_len - i);
            add_scaled(f, &mut out[i..i + m], &y[..m], c);
        }
        out
    } else {
        ntt::mul(f, a, b, out_len)
    }
}

/// Inverse of a power series with nonzero constant term, modulo `X^n`.
pub fn inv_series(f: Fp, a: &[Coeff], n: usize) -> Vec<Coeff> {
    assert!(!a.is_empty() && a[0] != 0, "series must have a unit constant term");
    let c0 = f.inv(a[0]).expect("unit");
    let mut b = vec![c0];
    let mut k = 1usize;
    while k < n {
        let k2 = (2 * k).min(n);
        let ak = &a[..a.len().min(k2)];
        if k <= SCHOOLBOOK_LIMIT || !ntt::newton_step(f, ak, &mut b, k2) {
            // b <- b * (2 - a*b) mod X^k2
            let ab = mul_trunc(f, ak, &b, k2);
            let mut e: Vec<Coeff> = ab.iter().map(|&c| f.neg(c)).collect();
            e.resize(k2, 0);
            e[0] = f.add(e[0], 2 % f.p());
            b = mul_trunc(f, &b, &e, k2);
            b.resize(k2, 0);
        }
        k = k2;
    }
    b.truncate(n);
    b.resize(n, 0);
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(f: Fp, a: &[Coeff], b: &[Coeff]) -> Vec<Coeff> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }

    #[test]
    fn ntt_product_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 7, 65521, 1_000_003] {
            let f = Fp::new(p).unwrap();
            for len in [60usize, 200, 1000] {
                let a: Vec<Coeff> = (0..len).map(|_| rng.gen_range(0..f.p())).collect();
                let b: Vec<Coeff> = (0..len + 13).map(|_| rng.gen_range(0..f.p())).collect();
                assert!(ntt::mul_fits(a.len(), b.len(), f.p()));
                assert_eq!(ntt::mul(f, &a, &b, usize::MAX), naive(f, &a, &b));
                assert_eq!(mul_trunc(f, &a, &b, usize::MAX), naive(f, &a, &b));
            }
        }
    }

    #[test]
    fn series_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 5, 101, 65521] {
            let f = Fp::new(p).unwrap();
            for (len, n) in [(300, 257), (4000, 5003)] {
                let mut a: Vec<Coeff> = (0..len).map(|_| rng.gen_range(0..f.p())).collect();
                a[0] = 1;
                let b = inv_series(f, &a, n);
                let prod = mul_trunc(f, &a, &b, n);
                assert_eq!(prod[0], 1);
                assert!(prod[1..].iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn sub_scaled_table_path() {
        let f = Fp::new(3).unwrap();
        let mut d = vec![1; 100];
        let s = vec![2; 100];
        sub_scaled(f, &mut d, &s, 2);
        // 1 - 4 = -3 = 0
        assert!(d.iter().all(|&c| c == 0));
    }
}
