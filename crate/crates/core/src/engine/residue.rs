//! Power series modulo small prime powers, used to reach coefficient indices
//! in the thousands where exact rationals would be thousands of digits long.
//!
//! The key identity: if `f = Σ b_n t^n` with `t = x·w(x)` and `w(0)` a unit,
//! then `b_n = [x^n] C(x)·w(x)^(−n)` where `C = f·(x t'/t)`. Only integer
//! arithmetic modulo `m < 2^32` is needed, and all `b_n` for `n ≤ M` cost
//! O(√M) truncated products via baby-step/giant-step.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{inv_mod, is_p_integral, padic_val, reduce_mod, Rational, Valuation};
use crate::series::QSeries;

/// Moduli stay below this so products fit in a u64.
const MODULUS_CAP: u64 = 1 << 32;

/// Below this modulus up to [`FAST_TERMS`] products can be summed in a u64
/// without reduction.
const FAST_CAP: u64 = 1 << 26;
const FAST_TERMS: usize = 4096;

/// `Σ a[i]·b[len−1−i]` modulo `m`, for equal-length slices.
fn dot_rev(a: &[u64], b: &[u64], m: u64) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    if m < FAST_CAP && a.len() <= FAST_TERMS {
        // the u32 casts are lossless here and let the loop vectorize
        let s = a.iter().zip(b.iter().rev()).fold(0u64, |acc, (x, y)| {
            acc.wrapping_add((*x as u32 as u64) * (*y as u32 as u64))
        });
        return s % m;
    }
    let acc = a
        .iter()
        .zip(b.iter().rev())
        .fold(0u128, |acc, (x, y)| acc + (x * y) as u128);
    (acc % m as u128) as u64
}

/// Truncated product of `a` and `b` modulo `m`, first `n` coefficients.
pub fn mul(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; n];
    let (la, lb) = (a.len().min(n), b.len().min(n));
    for (k, o) in out.iter_mut().enumerate() {
        let lo = (k + 1).saturating_sub(lb);
        let hi = k.min(la.saturating_sub(1));
        if lo > hi || la == 0 {
            continue;
        }
        *o = dot_rev(&a[lo..=hi], &b[k - hi..=k - lo], m);
    }
    out
}

/// Inverse of a series with unit constant term, first `n` coefficients.
pub fn inverse(a: &[u64], n: usize, m: u64) -> Option<Vec<u64>> {
    let a0 = inv_mod(*a.first()? % m, m)?;
    let mut out = vec![0u64; n];
    if n == 0 {
        return Some(out);
    }
    out[0] = a0;
    for k in 1..n {
        let top = k.min(a.len() - 1);
        let s = dot_rev(&a[1..=top], &out[k - top..k], m);
        out[k] = ((m - s) % m) * a0 % m;
    }
    Some(out)
}

/// Reduces the coefficients of `x^0..x^(n−1)`; `None` if some denominator
/// is not invertible modulo `m`.
pub fn reduce(s: &QSeries, n: usize, m: u64) -> Option<Vec<u64>> {
    (0..n as i64).map(|i| reduce_mod(&s.get(i)?, m)).collect()
}

pub fn reduce_slice(v: &[Rational], m: u64) -> Option<Vec<u64>> {
    v.iter().map(|x| reduce_mod(x, m)).collect()
}

/// `b_n = [x^n] c·w^(−n)` for `n = 0..=nmax`; `w(0)` must be a unit.
pub fn lagrange(c: &[u64], w: &[u64], nmax: usize, m: u64) -> Option<Vec<u64>> {
    let n = nmax + 1;
    let v = inverse(w, n, m)?;
    let k = ((n as f64).sqrt().ceil() as usize).max(1);
    let mut baby = Vec::with_capacity(k + 1);
    let mut one = vec![0u64; n];
    one[0] = 1 % m;
    baby.push(one);
    for j in 1..=k {
        let next = mul(&baby[j - 1], &v, n, m);
        baby.push(next);
    }
    let step = baby.pop().expect("k ≥ 1");
    let mut giant: Vec<u64> = c.iter().take(n).copied().collect();
    giant.resize(n, 0);
    let mut out = vec![0u64; n];
    let mut base = 0;
    while base < n {
        for (j, pw) in baby.iter().enumerate() {
            let idx = base + j;
            if idx >= n {
                break;
            }
            out[idx] = dot_rev(&giant[..=idx], &pw[..=idx], m);
        }
        base += k;
        if base < n {
            giant = mul(&giant, &step, n, m);
        }
    }
    Some(out)
}

/// `Σ b_j t^j` modulo `m` for `t` with zero constant term, by the
/// Paterson–Stockmeyer split into √n baby powers.
pub fn compose(b: &[u64], t: &[u64], n: usize, m: u64) -> Vec<u64> {
    let k = ((n as f64).sqrt().ceil() as usize).max(1);
    let mut pows = Vec::with_capacity(k + 1);
    let mut one = vec![0u64; n];
    if n > 0 {
        one[0] = 1 % m;
    }
    pows.push(one);
    for j in 1..=k {
        let next = mul(&pows[j - 1], t, n, m);
        pows.push(next);
    }
    let giant = pows.pop().expect("k ≥ 1");
    let blocks: Vec<&[u64]> = b.chunks(k).collect();
    let mut acc = vec![0u64; n];
    for block in blocks.iter().rev() {
        acc = mul(&acc, &giant, n, m);
        for (bj, pw) in block.iter().zip(&pows) {
            if *bj == 0 {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(pw) {
                *a = ((*a as u128 + *bj as u128 * *x as u128) % m as u128) as u64;
            }
        }
    }
    acc
}

/// `x·w'/w + 1`, the logarithmic derivative of `t = x·w`.
pub fn dlog_of_unit_times_x(w: &[u64], n: usize, m: u64) -> Option<Vec<u64>> {
    let inv = inverse(w, n, m)?;
    let theta: Vec<u64> = w
        .iter()
        .take(n)
        .enumerate()
        .map(|(i, c)| ((i as u128 * *c as u128) % m as u128) as u64)
        .collect();
    let mut d = mul(&theta, &inv, n, m);
    if n > 0 {
        d[0] = (d[0] + 1) % m;
    }
    Some(d)
}

/// Residues of `p^shift · b_n` modulo `p^exp` for `n = 0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSeq {
    pub p: u64,
    pub exp: u32,
    pub shift: u32,
    pub values: Vec<u64>,
}

impl ResidueSeq {
    /// Reduces p-integral rationals modulo `p^exp`.
    pub fn from_exact(b: &[Rational], p: u64, exp: u32) -> Option<Self> {
        Some(ResidueSeq {
            p,
            exp,
            shift: 0,
            values: reduce_slice(b, p.pow(exp))?,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.exp)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Whether `b_i` is p-integral.
    pub fn is_integral(&self, i: usize) -> bool {
        self.values[i].is_multiple_of(self.p.pow(self.shift))
    }

    fn valuation_of(&self, x: u64) -> Valuation {
        if x == 0 {
            return Valuation::AtLeast(self.exp as i64 - self.shift as i64);
        }
        let mut v = 0;
        let mut y = x;
        while y.is_multiple_of(self.p) {
            y /= self.p;
            v += 1;
        }
        Valuation::Finite(v - self.shift as i64)
    }

    pub fn valuation(&self, i: usize) -> Valuation {
        self.valuation_of(self.values[i])
    }

    /// Valuation of `Σ w·b_i`; `None` if a weight is not p-integral.
    pub fn combination(&self, terms: &[(Rational, usize)]) -> Option<Valuation> {
        let m = self.modulus();
        let mut acc: u128 = 0;
        for (w, i) in terms {
            if w.is_zero() {
                continue;
            }
            let wr = reduce_mod(w, m)?;
            acc = (acc + wr as u128 * self.values[*i] as u128) % m as u128;
        }
        Some(self.valuation_of(acc as u64))
    }
}

/// ⌊log_p bound⌋, at least 1.
pub fn max_exponent(p: u64, bound: usize) -> u32 {
    let mut r = 0;
    let mut q = p as u128;
    while q <= bound as u128 {
        r += 1;
        q *= p as u128;
    }
    r.max(1)
}

/// Smallest s ≥ 0 with p^s·x p-integral for every x.
pub fn clearing_shift(xs: &[Rational], p: u64) -> u32 {
    xs.iter()
        .filter(|x| !x.is_zero() && !is_p_integral(x, p))
        .filter_map(|x| match padic_val(x, p) {
            Ok(Valuation::Finite(v)) if v < 0 => Some((-v) as u32),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// The expansion variable, either as a series or as a ratio `g/f` that is
/// formed modulo each working modulus.
#[derive(Clone, Copy, Debug)]
pub enum TSource<'a> {
    Series(&'a QSeries),
    Ratio { g: &'a QSeries, f: &'a QSeries },
}

struct Group {
    modulus: u64,
    members: Vec<(u64, u32, u32)>,
}

/// Packs prime powers into shared moduli, small ones below the fast cap.
fn plan(members: Vec<(u64, u32, u32)>) -> Result<Vec<Group>> {
    let mut groups: Vec<Group> = Vec::new();
    for (p, exp, shift) in members {
        let pe = (p as u128).pow(exp);
        if pe >= MODULUS_CAP as u128 {
            return Err(Error::Data(format!(
                "{p}^{exp} exceeds the residue modulus cap"
            )));
        }
        let pe = pe as u64;
        // a shifted prime needs f scaled by its own power, so it stays alone
        let cap = if pe < FAST_CAP { FAST_CAP } else { MODULUS_CAP };
        match groups.iter_mut().find(|g| {
            shift == 0
                && g.members.iter().all(|m| m.2 == 0)
                && (g.modulus as u128) * (pe as u128) < cap as u128
        }) {
            Some(g) => {
                g.modulus *= pe;
                g.members.push((p, exp, shift));
            }
            None => groups.push(Group {
                modulus: pe,
                members: vec![(p, exp, shift)],
            }),
        }
    }
    Ok(groups)
}

fn group_values(f: &[Rational], t: TSource, n: usize, g: &Group) -> Result<Vec<u64>> {
    let m = g.modulus;
    let (p, _, shift) = g.members[0];
    let fail = |what: &str| Error::Data(format!("{what} is not invertible modulo {m}"));
    let scale = crate::rational::int(p.pow(shift) as i64);
    let fs: Vec<Rational> = if shift == 0 {
        f.to_vec()
    } else {
        f.iter().map(|x| x * &scale).collect()
    };
    let fm = reduce_slice(&fs, m).ok_or_else(|| fail("f"))?;
    let w = match t {
        TSource::Series(t) => {
            let w = t.shift(-1);
            reduce(&w, n, m).ok_or_else(|| fail("t"))?
        }
        TSource::Ratio { g: gs, f: fser } => {
            if shift != 0 {
                return Err(fail("t = g/f"));
            }
            let gm = reduce(&gs.shift(-1), n, m).ok_or_else(|| fail("g"))?;
            let fr = reduce(fser, n, m).ok_or_else(|| fail("f"))?;
            mul(&gm, &inverse(&fr, n, m).ok_or_else(|| fail("f"))?, n, m)
        }
    };
    let d = dlog_of_unit_times_x(&w, n, m).ok_or_else(|| fail("t/q"))?;
    let c = mul(&fm, &d, n, m);
    lagrange(&c, &w, n - 1, m).ok_or_else(|| fail("t/q"))
}

/// Residues of the t-expansion coefficients of `f` for every listed prime,
/// through index `bound`. Each prime gets enough precision to decide every
/// congruence `mod p^r` with `p^r ≤ bound`.
///
/// `f` must be known through `q^bound` and `t` through `q^(bound+1)`.
pub fn expansion_residues(
    f: &QSeries,
    t: TSource,
    primes: &[u64],
    bound: usize,
) -> Result<Vec<ResidueSeq>> {
    let n = bound + 1;
    let fv = f.power_coeffs(n as i64)?;
    let need_t = n as i64 + 1;
    let tp = match t {
        TSource::Series(t) => t.prec(),
        TSource::Ratio { g, f } => (g.prec()).min(f.prec() + 1),
    };
    if tp < need_t {
        return Err(Error::PrecisionExhausted {
            needed: need_t,
            available: tp,
        });
    }
    let members: Vec<(u64, u32, u32)> = primes
        .iter()
        .map(|&p| {
            let shift = clearing_shift(&fv, p);
            (p, max_exponent(p, bound) + 1 + shift, shift)
        })
        .collect();
    let groups = plan(members)?;
    let computed: Vec<Result<(Vec<u64>, &Group)>> = groups
        .par_iter()
        .map(|g| group_values(&fv, t, n, g).map(|v| (v, g)))
        .collect();
    let mut out = Vec::new();
    for r in computed {
        let (vals, g) = r?;
        for &(p, exp, shift) in &g.members {
            let pe = p.pow(exp);
            out.push(ResidueSeq {
                p,
                exp,
                shift,
                values: vals.iter().map(|v| v % pe).collect(),
            });
        }
    }
    out.sort_by_key(|r| primes.iter().position(|&p| p == r.p));
    Ok(out)
}

/// Like [`expansion_residues`] but for a single prime, returning the error
/// for that prime instead of failing the batch.
pub fn expansion_residue(f: &QSeries, t: TSource, p: u64, bound: usize) -> Result<ResidueSeq> {
    expansion_residues(f, t, &[p], bound).map(|mut v| v.remove(0))
}

/// Residues for the transfer between two local coordinates: given
/// `t = a_1 u + ...` and `Σ c_n u^n`, returns `b_n = [u^n] (Σ c_j u^j)·(u/t)^n`.
pub fn transfer_forward(t: &[Rational], c: &[Rational], p: u64, exp: u32) -> Option<ResidueSeq> {
    let m = p.pow(exp);
    let n = c.len();
    let w = reduce_slice(&t[1..=n.min(t.len() - 1)], m)?;
    let cm = reduce_slice(c, m)?;
    let values = lagrange(&cm, &w, n - 1, m)?;
    Some(ResidueSeq {
        p,
        exp,
        shift: 0,
        values,
    })
}

/// The inverse transfer: `Σ c_n u^n = (Σ b_j t^j)·(u t'/t)`.
pub fn transfer_backward(t: &[Rational], b: &[u64], p: u64, exp: u32) -> Option<ResidueSeq> {
    let m = p.pow(exp);
    let n = b.len();
    let tm = reduce_slice(&t[..(n + 1).min(t.len())], m)?;
    let mut tt = tm.clone();
    tt.resize(n, 0);
    let composed = compose(b, &tt, n, m);
    let d = dlog_of_unit_times_x(&tm[1..], n, m)?;
    Some(ResidueSeq {
        p,
        exp,
        shift: 0,
        values: mul(&composed, &d, n, m),
    })
}
