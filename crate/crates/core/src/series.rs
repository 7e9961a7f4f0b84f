//! Truncated Laurent series over exact rationals.
//!
//! A series stores coefficients for exponents `lead..prec`; everything at or
//! beyond `prec` is unknown. Precision only ever shrinks through arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    lead: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

impl QSeries {
    /// Builds a series whose coefficient of `q^(lead+i)` is `coeffs[i]`.
    /// Entries at or beyond `prec` are dropped and missing ones are zero.
    pub fn new(lead: i64, mut coeffs: Vec<Rational>, prec: i64) -> Self {
        let len = (prec - lead).max(0) as usize;
        coeffs.truncate(len);
        coeffs.resize(len, Rational::zero());
        let mut s = QSeries { lead, coeffs, prec };
        s.normalize();
        s
    }

    pub fn from_ints(lead: i64, coeffs: &[i64], prec: i64) -> Self {
        Self::new(lead, coeffs.iter().map(|&c| int(c)).collect(), prec)
    }

    /// Power series `Σ coeffs[n] q^n` known through `q^(len-1)`.
    pub fn from_power_coeffs(coeffs: Vec<Rational>) -> Self {
        let prec = coeffs.len() as i64;
        Self::new(0, coeffs, prec)
    }

    pub fn zero(prec: i64) -> Self {
        QSeries {
            lead: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(int(1), 0, prec)
    }

    pub fn monomial(c: Rational, e: i64, prec: i64) -> Self {
        if e >= prec {
            return Self::zero(prec);
        }
        Self::new(e, vec![c], prec)
    }

    /// The series `q`, known to precision `prec`.
    pub fn q(prec: i64) -> Self {
        Self::monomial(int(1), 1, prec)
    }

    fn normalize(&mut self) {
        let nz = self.coeffs.iter().position(|c| !c.is_zero());
        match nz {
            None => {
                self.coeffs.clear();
                self.lead = self.prec;
            }
            Some(0) => {}
            Some(i) => {
                self.coeffs.drain(..i);
                self.lead += i as i64;
            }
        }
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead_coeff(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond precision.
    pub fn get(&self, n: i64) -> Option<Rational> {
        if n >= self.prec {
            None
        } else if n < self.lead {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(n - self.lead) as usize].clone())
        }
    }

    /// Coefficient of `q^n`; panics beyond precision.
    pub fn coeff(&self, n: i64) -> Rational {
        self.get(n)
            .unwrap_or_else(|| panic!("coefficient q^{n} beyond precision {}", self.prec))
    }

    /// Coefficients of `q^0..q^(n-1)` of a power series.
    pub fn power_coeffs(&self, n: i64) -> Result<Vec<Rational>> {
        if n > self.prec {
            return Err(Error::PrecisionExhausted {
                needed: n,
                available: self.prec,
            });
        }
        Ok((0..n).map(|i| self.coeff(i)).collect())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.lead).max(0) as usize;
        Self::new(
            self.lead,
            self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
            prec,
        )
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QSeries {
            lead: self.lead + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        QSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let lead = self.lead.min(other.lead).min(prec);
        let coeffs = (lead..prec)
            .map(|n| self.coeff(n) + other.coeff(n))
            .collect();
        Self::new(lead, coeffs, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lead = self.lead + other.lead;
        let prec = (self.prec + other.lead).min(other.prec + self.lead);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let n = (prec - lead) as usize;
        Self::new(lead, mul_trunc(&self.coeffs, &other.coeffs, n), prec)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        let n = self.coeffs.len();
        Ok(Self::new(
            -self.lead,
            inverse_trunc(&self.coeffs, n),
            self.prec - 2 * self.lead,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        let lead = self.lead - other.lead;
        // relative precision of the quotient is limited by both operands
        let rel = (self.prec - self.lead).min(other.prec - other.lead);
        if self.is_zero() {
            return Ok(Self::zero(self.prec - other.lead));
        }
        let n = rel as usize;
        let inv = inverse_trunc(&other.coeffs, n);
        Ok(Self::new(
            lead,
            mul_trunc(&self.coeffs, &inv, n),
            lead + rel,
        ))
    }

    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * int(self.lead + i as i64))
            .collect();
        Self::new(self.lead, coeffs, self.prec)
    }

    /// d/dq.
    pub fn derivative(&self) -> Self {
        self.theta().shift(-1)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if e == 0 {
            // relative precision carries over to the constant 1
            let rel = if self.is_zero() {
                0
            } else {
                self.prec - self.lead
            };
            return Ok(Self::one(rel));
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("positive exponent"))
    }

    /// `f(t(q))` for a power series `f` and `t` of positive valuation.
    pub fn compose(&self, t: &Self) -> Result<Self> {
        if t.lead < 1 {
            return Err(Error::CompositionOrderError(t.lead));
        }
        if self.lead < 0 {
            return Err(Error::CompositionOrderError(self.lead));
        }
        let prec = (self.prec * t.lead).min(t.prec);
        if self.is_zero() {
            return Ok(Self::zero(prec));
        }
        let n = prec as usize;
        let tv: Vec<Rational> = (0..prec).map(|i| t.coeff(i)).collect();
        let fv: Vec<Rational> = (0..self.prec.min(prec)).map(|i| self.coeff(i)).collect();
        Ok(Self::new(0, horner(&fv, &tv, n), prec))
    }

    /// Compositional inverse of `t = a q + ...` with `a ≠ 0`.
    pub fn revert(&self) -> Result<Self> {
        if self.lead != 1 {
            return Err(Error::ReversionOrderError(self.lead));
        }
        let target = self.prec as usize;
        let tv: Vec<Rational> = (0..self.prec).map(|i| self.coeff(i)).collect();
        let dt: Vec<Rational> = (1..tv.len()).map(|i| &tv[i] * int(i as i64)).collect();
        let mut s = vec![Rational::zero(), Rational::one() / &tv[1]];
        let mut cur = 2usize;
        while cur < target {
            cur = (2 * cur).min(target);
            s.resize(cur, Rational::zero());
            let mut ts = horner(&tv[..cur.min(tv.len())], &s, cur);
            ts[1] -= Rational::one();
            let dts = horner(&dt[..cur.min(dt.len())], &s, cur);
            let corr = mul_trunc(&ts, &inverse_trunc(&dts, cur), cur);
            for (si, ci) in s.iter_mut().zip(corr) {
                *si -= ci;
            }
        }
        s.truncate(target);
        Ok(Self::new(0, s, self.prec))
    }

    /// Whether both series agree on every exponent below `upto`.
    pub fn agrees_with(&self, other: &Self, upto: i64) -> bool {
        let lo = self.lead.min(other.lead);
        (lo..upto).all(|n| match (self.get(n), other.get(n)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

/// Truncated Cauchy product of two coefficient vectors, computed over a common
/// denominator so the inner loop is integer arithmetic.
pub(crate) fn mul_trunc(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let (ai, da) = integerize(&a[..a.len().min(n)]);
    let (bi, db) = integerize(&b[..b.len().min(n)]);
    let d = da * db;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = BigInt::zero();
        let lo = k.saturating_sub(bi.len().saturating_sub(1));
        for i in lo..=k.min(ai.len().saturating_sub(1)) {
            if ai[i].is_zero() || k - i >= bi.len() {
                continue;
            }
            let bj = &bi[k - i];
            if !bj.is_zero() {
                acc += &ai[i] * bj;
            }
        }
        out.push(Rational::new(acc, d.clone()));
    }
    out
}

fn integerize(a: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v = a.iter().map(|c| c.numer() * (&d / c.denom())).collect();
    (v, d)
}

/// Inverse of a power series with nonzero constant term, to `n` terms.
pub(crate) fn inverse_trunc(b: &[Rational], n: usize) -> Vec<Rational> {
    let b0inv = Rational::one() / &b[0];
    let h: Vec<Rational> = b.iter().take(n).map(|c| c * &b0inv).collect();
    let (hi, dh) = integerize(&h);
    // u = 1/(1 + H/dh); with u_k = U_k / dh^k the U_k are integers
    let mut u: Vec<BigInt> = Vec::with_capacity(n);
    let mut dpow: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..n {
        let next = &dpow[k - 1] * &dh;
        dpow.push(next);
    }
    if n > 0 {
        u.push(BigInt::one());
    }
    for k in 1..n {
        let mut acc = BigInt::zero();
        for j in 1..=k.min(hi.len() - 1) {
            if hi[j].is_zero() {
                continue;
            }
            acc -= &hi[j] * &dpow[j - 1] * &u[k - j];
        }
        u.push(acc);
    }
    u.into_iter()
        .zip(dpow)
        .map(|(uk, dk)| Rational::new(uk, dk) * &b0inv)
        .collect()
}

fn horner(f: &[Rational], t: &[Rational], n: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); n];
    for c in f.iter().rev() {
        acc = mul_trunc(&acc, t, n);
        acc[0] += c;
    }
    acc
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.lead + i as i64;
            let s = rational::to_string(c);
            let (sign, mag) = match s.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", s),
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, mag.as_str()) {
                (0, _) => f.write_str(&mag)?,
                (_, "1") => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    lead: i64,
    prec: i64,
    #[serde(with = "rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRecord {
            lead: self.lead,
            prec: self.prec,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(d)?;
        if r.coeffs.len() as i64 > r.prec - r.lead {
            return Err(serde::de::Error::custom(
                "more coefficients than precision allows",
            ));
        }
        Ok(QSeries::new(r.lead, r.coeffs, r.prec))
    }
}
