//! Number-theoretic transforms in Montgomery form over two primes: a 31-bit
//! one, used whenever `len * (p-1)^2` fits below it, and a 62-bit fallback.
//! Results are reduced mod `p` afterwards, which is exact under that bound.

use super::field::{Coeff, Fp};

pub(crate) trait Modulus: Sync {
    type E: Copy + Default + Send + Sync;
    const PRIME: u64;
    const ROOT: u64;
    const MAX_LOG: u32;

    fn to_mont(&self, a: u64) -> Self::E;
    fn from_mont(&self, a: Self::E) -> u64;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;

    fn pow(&self, a: Self::E, mut e: u64) -> Self::E {
        let mut base = a;
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Montgomery arithmetic modulo 29 * 2^57 + 1 (primitive root 3).
pub(crate) struct Mont64 {
    n: u64,
    n_inv_neg: u64,
    r2: u64,
}

impl Mont64 {
    const fn new(n: u64) -> Self {
        let mut inv = n;
        let mut i = 0;
        while i < 6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
            i += 1;
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Mont64 {
            n,
            n_inv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        // t < n^2 and n < 2^62, so t + m*n cannot overflow
        let m = (t as u64).wrapping_mul(self.n_inv_neg);
        let s = t + m as u128 * self.n as u128;
        let res = (s >> 64) as u64;
        if res >= self.n {
            res - self.n
        } else {
            res
        }
    }
}

impl Modulus for Mont64 {
    type E = u64;
    const PRIME: u64 = 4_179_340_454_199_820_289;
    const ROOT: u64 = 3;
    const MAX_LOG: u32 = 57;

    #[inline(always)]
    fn to_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128 * self.r2 as u128)
    }

    #[inline(always)]
    fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }
}

/// Montgomery arithmetic modulo 15 * 2^27 + 1 (primitive root 31).
pub(crate) struct Mont32 {
    n: u32,
    n_inv_neg: u32,
    r2: u32,
}

impl Mont32 {
    const fn new(n: u32) -> Self {
        let mut inv = n;
        let mut i = 0;
        while i < 5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(n.wrapping_mul(inv)));
            i += 1;
        }
        let r = ((1u64 << 32) % n as u64) as u32;
        let r2 = ((r as u64 * r as u64) % n as u64) as u32;
        Mont32 {
            n,
            n_inv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(self.n_inv_neg);
        let s = t + m as u64 * self.n as u64;
        let res = (s >> 32) as u32;
        if res >= self.n {
            res - self.n
        } else {
            res
        }
    }
}

impl Modulus for Mont32 {
    type E = u32;
    const PRIME: u64 = 2_013_265_921;
    const ROOT: u64 = 31;
    const MAX_LOG: u32 = 27;

    #[inline(always)]
    fn to_mont(&self, a: u64) -> u32 {
        self.reduce((a % self.n as u64) * self.r2 as u64)
    }

    #[inline(always)]
    fn from_mont(&self, a: u32) -> u64 {
        self.reduce(a as u64) as u64
    }

    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }
}

static M64: Mont64 = Mont64::new(Mont64::PRIME);
static M32: Mont32 = Mont32::new(Mont32::PRIME as u32);

// Levels with butterflies spanning at most this many entries run block by
// block, so each block stays in cache across those levels.
const BLOCK: usize = 1 << 13;

fn twiddles<M: Modulus>(m: &M, len: usize, invert: bool) -> Vec<M::E> {
    let mut w_len = m.pow(m.to_mont(M::ROOT), (M::PRIME - 1) / len as u64);
    if invert {
        w_len = m.pow(w_len, M::PRIME - 2);
    }
    let mut tw = Vec::with_capacity(len / 2);
    let mut w = m.to_mont(1);
    for _ in 0..len / 2 {
        tw.push(w);
        w = m.mul(w, w_len);
    }
    tw
}

fn dif_level<M: Modulus>(m: &M, a: &mut [M::E], len: usize, tw: &[M::E]) {
    let half = len / 2;
    for chunk in a.chunks_mut(len) {
        let (lo, hi) = chunk.split_at_mut(half);
        for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
            let (x, y) = (*u, *v);
            *u = m.add(x, y);
            *v = m.mul(m.sub(x, y), w);
        }
    }
}

fn dit_level<M: Modulus>(m: &M, a: &mut [M::E], len: usize, tw: &[M::E]) {
    let half = len / 2;
    for chunk in a.chunks_mut(len) {
        let (lo, hi) = chunk.split_at_mut(half);
        for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
            let x = *u;
            let y = m.mul(*v, w);
            *u = m.add(x, y);
            *v = m.sub(x, y);
        }
    }
}

// Forward: decimation in frequency, natural order in, bit-reversed out.
// Inverse: decimation in time, bit-reversed in, natural order out. Only
// pointwise products happen in between, so no permutation is ever applied.
fn transform<M: Modulus>(m: &M, a: &mut [M::E], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two() && n.trailing_zeros() <= M::MAX_LOG);
    let lens: Vec<usize> = (1..=n.trailing_zeros()).map(|i| 1usize << i).collect();
    let tables: Vec<Vec<M::E>> = lens.iter().map(|&len| twiddles(m, len, invert)).collect();
    let block = BLOCK.min(n);
    let (small, large): (Vec<usize>, Vec<usize>) = (0..lens.len()).partition(|&i| lens[i] <= block);
    if !invert {
        for &i in large.iter().rev() {
            dif_level(m, a, lens[i], &tables[i]);
        }
        for chunk in a.chunks_mut(block) {
            for &i in small.iter().rev() {
                dif_level(m, chunk, lens[i], &tables[i]);
            }
        }
    } else {
        for chunk in a.chunks_mut(block) {
            for &i in &small {
                dit_level(m, chunk, lens[i], &tables[i]);
            }
        }
        for &i in &large {
            dit_level(m, a, lens[i], &tables[i]);
        }
        let n_inv = m.pow(m.to_mont(n as u64), M::PRIME - 2);
        for x in a.iter_mut() {
            *x = m.mul(*x, n_inv);
        }
    }
}

fn fits<M: Modulus>(size: usize, min_len: usize, p: u32) -> bool {
    let pm = (p - 1) as u128;
    size.trailing_zeros() <= M::MAX_LOG && (min_len as u128) * pm * pm < M::PRIME as u128
}

fn forward<M: Modulus>(m: &M, a: &[Coeff], n: usize) -> Vec<M::E> {
    let mut v = vec![M::E::default(); n];
    for (d, &c) in v.iter_mut().zip(a) {
        *d = m.to_mont(c as u64);
    }
    transform(m, &mut v, false);
    v
}

fn pointwise<M: Modulus>(m: &M, x: &mut [M::E], y: &[M::E]) {
    for (a, &b) in x.iter_mut().zip(y) {
        *a = m.mul(*a, b);
    }
}

fn reduce_out<'a, M: Modulus>(m: &'a M, f: Fp, v: &'a [M::E]) -> impl Iterator<Item = Coeff> + 'a {
    let p = f.p() as u64;
    v.iter().map(move |&x| (m.from_mont(x) % p) as Coeff)
}

fn mul_with<M: Modulus>(m: &M, f: Fp, a: &[Coeff], b: &[Coeff], out_len: usize) -> Vec<Coeff> {
    let full = a.len() + b.len() - 1;
    let n = full.next_power_of_two();
    let mut fa = forward(m, a, n);
    let fb = forward(m, b, n);
    pointwise(m, &mut fa, &fb);
    transform(m, &mut fa, true);
    reduce_out(m, f, &fa[..out_len.min(full)]).collect()
}

// b <- b (2 - a b) from k = b.len() to k2 coefficients with cyclic transforms
// of length N >= k2. The wrapped part of a b only reaches indices below k,
// where a b = 1 is already known, and b (1 - a b) does not wrap at all.
fn newton_with<M: Modulus>(m: &M, f: Fp, a: &[Coeff], b: &mut Vec<Coeff>, k2: usize) {
    let k = b.len();
    let n = k2.next_power_of_two();
    let fb = forward(m, b, n);
    let mut fa = forward(m, a, n);
    pointwise(m, &mut fa, &fb);
    transform(m, &mut fa, true);
    let e: Vec<Coeff> = reduce_out(m, f, &fa[k..k2]).map(|c| f.neg(c)).collect();
    let mut fe = forward(m, &e, n);
    pointwise(m, &mut fe, &fb);
    transform(m, &mut fe, true);
    b.extend(reduce_out(m, f, &fe[..k2 - k]));
}

/// Whether an exact transform product of these lengths exists.
pub(crate) fn mul_fits(la: usize, lb: usize, p: u32) -> bool {
    fits::<Mont64>((la + lb).next_power_of_two(), la.min(lb), p)
}

pub(crate) fn mul(f: Fp, a: &[Coeff], b: &[Coeff], out_len: usize) -> Vec<Coeff> {
    let size = (a.len() + b.len()).next_power_of_two();
    if fits::<Mont32>(size, a.len().min(b.len()), f.p()) {
        mul_with(&M32, f, a, b, out_len)
    } else {
        mul_with(&M64, f, a, b, out_len)
    }
}

/// One Newton step for the series inverse; `false` if no prime fits.
pub(crate) fn newton_step(f: Fp, a: &[Coeff], b: &mut Vec<Coeff>, k2: usize) -> bool {
    let size = k2.next_power_of_two();
    let min_len = a.len().min(b.len());
    if fits::<Mont32>(size, min_len, f.p()) {
        newton_with(&M32, f, a, b, k2);
    } else if fits::<Mont64>(size, min_len, f.p()) {
        newton_with(&M64, f, a, b, k2);
    } else {
        return false;
    }
    true
}
