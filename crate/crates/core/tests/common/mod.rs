//! Random inputs for the change-of-coordinate trials.
#![allow(dead_code)]

use asdc_core::engine::congruence::{
    omega_shift_integrality, transfer_back, transfer_check, verify_asd, CoeffForm, SeqView,
};
use asdc_core::engine::residue::{max_exponent, ResidueSeq};
use asdc_core::rational::{big, frac, int, Rational};
use asdc_core::series::QSeries;
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rand::Rng;

/// A random rational whose denominator is prime to `p`.
pub fn p_integral<R: Rng>(rng: &mut R, p: u64, span: i64) -> Rational {
    let n = rng.gen_range(-span..=span);
    if rng.gen_bool(0.5) {
        return int(n);
    }
    loop {
        let d = rng.gen_range(1..=12i64);
        if !(d as u64).is_multiple_of(p) {
            return frac(n, d);
        }
    }
}

/// A p-adic unit.
pub fn p_unit<R: Rng>(rng: &mut R, p: u64) -> Rational {
    loop {
        let x = p_integral(rng, p, 9);
        if !x.is_zero() && !(x.numer() % BigInt::from(p)).is_zero() {
            return x;
        }
    }
}

/// `t = a_1 u + a_2 u^2 + ...` with a unit `a_1` and p-integral tail.
pub fn random_t<R: Rng>(rng: &mut R, p: u64, len: usize) -> QSeries {
    let mut c = vec![Rational::zero(), p_unit(rng, p)];
    for _ in 2..len {
        c.push(if rng.gen_bool(0.3) {
            Rational::zero()
        } else {
            p_integral(rng, p, 20)
        });
    }
    QSeries::from_power_coeffs(c)
}

fn sigma(n: u64, j: u32) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(j))
        .sum()
}

/// `c_n = c_0[n=0] + Σ k_i σ_(j_i)(n) + Σ m_i a_i^n`, which satisfies the
/// plain congruence at every prime.
pub fn structured<R: Rng>(rng: &mut R, p: u64, len: usize) -> Vec<Rational> {
    let c0 = p_integral(rng, p, 30);
    let sig: Vec<(Rational, u32)> = (0..rng.gen_range(0..=2))
        .map(|_| (p_integral(rng, p, 6), rng.gen_range(1..=3)))
        .collect();
    let geo: Vec<(Rational, BigInt)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (
                p_integral(rng, p, 6),
                BigInt::from(rng.gen_range(-7i64..=7)),
            )
        })
        .collect();
    let mut powers: Vec<BigInt> = geo.iter().map(|_| BigInt::one()).collect();
    (0..len as u64)
        .map(|n| {
            let mut v = if n == 0 { c0.clone() } else { Rational::zero() };
            if n > 0 {
                for (k, j) in &sig {
                    v += k * big(sigma(n, *j));
                }
            }
            for ((m, _), pw) in geo.iter().zip(&powers) {
                v += m * big(pw.clone());
            }
            for ((_, a), pw) in geo.iter().zip(powers.iter_mut()) {
                *pw *= a;
            }
            v
        })
        .collect()
}

/// Adds 1 at a random multiple of `p` below `len`, returning the index.
pub fn perturb<R: Rng>(rng: &mut R, c: &mut [Rational], p: u64) -> usize {
    let top = (c.len() - 1) as u64 / p;
    let n = (rng.gen_range(1..=top) * p) as usize;
    c[n] += Rational::one();
    n
}

/// A sequence that passes (structured) or fails (perturbed) with equal odds.
pub fn random_sequence<R: Rng>(rng: &mut R, p: u64, len: usize) -> (Vec<Rational>, bool) {
    let mut c = structured(rng, p, len);
    let clean = rng.gen_bool(0.5);
    if !clean {
        perturb(rng, &mut c, p);
    }
    (c, clean)
}

/// Outcome of a single trial in either direction.
#[derive(Debug)]
pub struct Trial {
    pub source_verdict: bool,
    pub image_verdict: bool,
    /// Verdict of the integrality oracle on the exact side.
    pub oracle: bool,
    /// Whether the exact side was built to pass.
    pub expected: bool,
    /// Whether the round trip returned the starting residues.
    pub round_trip: bool,
}

impl Trial {
    pub fn agrees(&self) -> bool {
        self.source_verdict == self.image_verdict
            && self.oracle == self.source_verdict
            && self.expected == self.source_verdict
            && self.round_trip
    }
}

fn oracle(c: &[Rational], p: u64) -> bool {
    omega_shift_integrality(&CoeffForm {
        alphas: c.to_vec(),
        prime: p,
    })
    .0
}

/// Starts from `c` in the `u` coordinate and moves it to `t`.
pub fn forward<R: Rng>(rng: &mut R, p: u64, bound: u64) -> Trial {
    let len = bound as usize + 1;
    let t = random_t(rng, p, len + 1);
    let (c, expected) = random_sequence(rng, p, len);
    let out = transfer_check(&t, &c, p, bound).expect("valid transfer inputs");
    let back = transfer_back(&t, &out.b).expect("unit leading coefficient");
    let c_res = ResidueSeq::from_exact(&c, p, out.b.exp).expect("p-integral");
    Trial {
        source_verdict: out.c_report.verdict,
        image_verdict: out.b_report.verdict,
        oracle: oracle(&c, p),
        expected,
        round_trip: back == c_res,
    }
}

/// Starts from `b` in the `t` coordinate and moves it back to `u`.
pub fn backward<R: Rng>(rng: &mut R, p: u64, bound: u64) -> Trial {
    let len = bound as usize + 1;
    let t = random_t(rng, p, len + 1);
    let (b, expected) = random_sequence(rng, p, len);
    let exp = max_exponent(p, len - 1) + 1;
    let b_res = ResidueSeq::from_exact(&b, p, exp).expect("p-integral");
    let c = transfer_back(&t, &b_res).expect("unit leading coefficient");
    let source = verify_asd("b", SeqView::Exact(&b), p, bound).expect("valid prime");
    let image = verify_asd("c", SeqView::Residue(&c), p, bound).expect("valid prime");
    let tv = t.power_coeffs(len as i64 + 1).unwrap();
    let again = asdc_core::engine::residue::transfer_forward(&tv, &exact_lift(&c), p, exp);
    Trial {
        source_verdict: source.verdict,
        image_verdict: image.verdict,
        oracle: oracle(&b, p),
        expected,
        round_trip: again.as_ref() == Some(&b_res),
    }
}

fn exact_lift(r: &ResidueSeq) -> Vec<Rational> {
    r.values.iter().map(|&v| int(v as i64)).collect()
}
