//! Generalized Bernoulli numbers, the Eisenstein series E_{k,χ,ψ}(dz), and
//! the congruence certificate attached to a rational combination of them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{CharKind, DirichletChar};
use crate::error::{Error, Result};
use crate::rational::{self, big, divisors, frac, int, is_prime, Rational};
use crate::series::QSeries;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Bernoulli number B_k with B_1 = −1/2.
pub fn bernoulli(k: usize) -> Rational {
    static MEMO: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(vec![int(1)]));
    let mut b = memo.lock().expect("bernoulli memo poisoned");
    while b.len() <= k {
        let m = b.len() as u64;
        let s: Rational = (0..m)
            .map(|j| big(binomial(m + 1, j)) * &b[j as usize])
            .sum();
        b.push(-s / int(m as i64 + 1));
    }
    b[k].clone()
}

/// B_k(x) = Σ C(k, j) B_j x^(k−j).
pub fn bernoulli_poly(k: usize, x: &Rational) -> Rational {
    (0..=k)
        .map(|j| big(binomial(k as u64, j as u64)) * bernoulli(j) * x.pow((k - j) as i32))
        .sum()
}

/// B_{k,ψ} = f^(k−1) Σ_{a=1}^{f} ψ(a) B_k(a/f) for ψ primitive of conductor f.
/// For the trivial character this is B_k(1), so B_{1,1} = +1/2.
pub fn gen_bernoulli(k: usize, psi: &DirichletChar) -> Rational {
    let f = psi.conductor();
    let psi = psi.primitive();
    let s: Rational = (1..=f)
        .map(|a| int(psi.value(a as i64) as i64) * bernoulli_poly(k, &frac(a as i64, f as i64)))
        .sum();
    s * big(BigInt::from(f).pow((k - 1) as u32))
}

/// One member E_{k,χ,ψ}(dz) of a combination, with its rational weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinElement {
    pub weight: u32,
    pub chi: CharKind,
    pub psi: CharKind,
    pub dilation: u64,
    #[serde(with = "rational::serde_rational")]
    pub coefficient: Rational,
}

impl EisensteinElement {
    pub fn new(weight: u32, chi: CharKind, psi: CharKind, dilation: u64) -> Self {
        EisensteinElement {
            weight,
            chi,
            psi,
            dilation,
            coefficient: int(1),
        }
    }

    pub fn with_coefficient(mut self, c: Rational) -> Self {
        self.coefficient = c;
        self
    }

    /// R·L·d.
    pub fn level(&self) -> u64 {
        self.chi.conductor() * self.psi.conductor() * self.dilation
    }

    /// The unweighted series E_{k,χ,ψ}(dz).
    pub fn series(&self, prec: i64) -> Result<QSeries> {
        eisenstein_series(
            self.weight,
            &DirichletChar::primitive_of(self.chi),
            &DirichletChar::primitive_of(self.psi),
            self.dilation,
            prec,
        )
    }

    /// Constant term −B_{k,ψ}/(2k) when χ is trivial, else 0.
    pub fn constant_term(&self) -> Rational {
        if self.chi == CharKind::Principal {
            -gen_bernoulli(self.weight as usize, &DirichletChar::primitive_of(self.psi))
                / int(2 * self.weight as i64)
        } else {
            Rational::zero()
        }
    }

    /// n-th divisor-sum coefficient Σ_{m|n} ψ(m) χ(n/m) m^(k−1) of the undilated series.
    pub fn divisor_sum(&self, n: u64) -> BigInt {
        let chi = DirichletChar::primitive_of(self.chi);
        let psi = DirichletChar::primitive_of(self.psi);
        divisors(n)
            .into_iter()
            .map(|m| {
                let v = psi.value(m as i64) * chi.value((n / m) as i64);
                BigInt::from(v) * BigInt::from(m).pow(self.weight - 1)
            })
            .sum()
    }
}

impl fmt::Display for EisensteinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |k: CharKind| match k {
            CharKind::Principal => "chi0".to_string(),
            CharKind::KroneckerM4 => "(-4/.)".to_string(),
            k => format!("(./{})", k.conductor()),
        };
        let z = if self.dilation == 1 {
            "z".to_string()
        } else {
            format!("{}z", self.dilation)
        };
        if !self.coefficient.is_one() {
            write!(f, "{}*", rational::to_string(&self.coefficient))?;
        }
        write!(
            f,
            "E[{},{},{}]({z})",
            self.weight,
            name(self.chi),
            name(self.psi)
        )
    }
}

/// E_{k,χ,ψ}(dz) to precision `prec`.
pub fn eisenstein_series(
    k: u32,
    chi: &DirichletChar,
    psi: &DirichletChar,
    d: u64,
    prec: i64,
) -> Result<QSeries> {
    if chi.parity() * psi.parity() != if k.is_multiple_of(2) { 1 } else { -1 } {
        return Err(Error::ParityError(format!(
            "chi(-1)psi(-1) = {} but (-1)^{k} = {}",
            chi.parity() * psi.parity(),
            if k.is_multiple_of(2) { 1 } else { -1 }
        )));
    }
    let chi = chi.primitive();
    let psi = psi.primitive();
    let n = prec.max(0) as usize;
    let d = d as usize;
    let m_max = n.div_ceil(d);
    let mut a = vec![BigInt::zero(); m_max.max(1)];
    for m in 1..m_max {
        let pv = psi.value(m as i64);
        if pv == 0 {
            continue;
        }
        let mk = BigInt::from(m).pow(k - 1) * pv;
        let mut j = m;
        let mut q = 1i64;
        while j < m_max {
            match chi.value(q) {
                1 => a[j] += &mk,
                -1 => a[j] -= &mk,
                _ => {}
            }
            j += m;
            q += 1;
        }
    }
    let mut c = vec![Rational::zero(); n];
    if n > 0 && chi.is_trivial() {
        c[0] = EisensteinElement::new(k, chi.kind(), psi.kind(), 1).constant_term();
    }
    for (m, v) in a.into_iter().enumerate().skip(1) {
        if m * d < n {
            c[m * d] = big(v);
        }
    }
    Ok(QSeries::new(0, c, prec))
}

/// All E_{k,χ,ψ}(dz) with RLd | N, χψ = ε and matching parity, sorted by (L, R, d).
pub fn eisenstein_basis(k: u32, n: u64, eps: &DirichletChar) -> Vec<EisensteinElement> {
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let mut out = Vec::new();
    for chi in CharKind::ALL {
        for psi in CharKind::ALL {
            let (l, r) = (chi.conductor(), psi.conductor());
            if !n.is_multiple_of(l * r) {
                continue;
            }
            let c = DirichletChar::primitive_of(chi);
            let p = DirichletChar::primitive_of(psi);
            if c.parity() * p.parity() != sign || !DirichletChar::product_is(&c, &p, eps) {
                continue;
            }
            for d in divisors(n / (l * r)) {
                out.push(EisensteinElement::new(k, chi, psi, d));
            }
        }
    }
    out.sort_by_key(|e| (e.chi.conductor(), e.psi.conductor(), e.dilation));
    out
}

/// A rational combination Σ (α_i/β_i) E_{k,χ_i,ψ_i}(d_i z) in M_k(Γ0(N), ε).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinCombo {
    pub weight: u32,
    pub level: u64,
    pub character: DirichletChar,
    pub elements: Vec<EisensteinElement>,
}

impl EisensteinCombo {
    pub fn series(&self, prec: i64) -> Result<QSeries> {
        let mut acc = QSeries::zero(prec);
        for e in &self.elements {
            acc = acc.add(&e.series(prec)?.scale(&e.coefficient));
        }
        Ok(acc)
    }

    /// Elements with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = &EisensteinElement> {
        self.elements.iter().filter(|e| !e.coefficient.is_zero())
    }

    pub fn is_well_formed(&self) -> bool {
        self.elements.iter().all(|e| {
            e.weight == self.weight
                && self.level.is_multiple_of(e.level())
                && DirichletChar::product_is(
                    &DirichletChar::primitive_of(e.chi),
                    &DirichletChar::primitive_of(e.psi),
                    &self.character,
                )
        })
    }
}

impl fmt::Display for EisensteinCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|e| e.to_string()).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + ").replace(" + -", " - "))
        }
    }
}

/// Which congruence the certificate promises: `b_{ℓp^r} ≡ b_{ℓp^(r−1)}` or the
/// twisted form with the factor χ(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Plain,
    Twisted(CharKind),
}

/// A decidable set of primes: p must not divide `modulus` and every listed
/// character must take the value 1 at p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePredicate {
    #[serde(with = "bigint_string")]
    pub modulus: BigInt,
    pub small_prime_factors: Vec<u64>,
    #[serde(with = "bigint_string")]
    pub cofactor: BigInt,
    pub conditions: Vec<CharKind>,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl PrimePredicate {
    pub fn new(modulus: BigInt, conditions: impl IntoIterator<Item = CharKind>) -> Self {
        let modulus = modulus.abs();
        let (small, cofactor) = split_small_factors(&modulus);
        let conditions: BTreeSet<CharKind> = conditions
            .into_iter()
            .filter(|c| *c != CharKind::Principal)
            .collect();
        PrimePredicate {
            modulus,
            small_prime_factors: small,
            cofactor,
            conditions: conditions.into_iter().collect(),
        }
    }

    pub fn all_primes() -> Self {
        Self::new(BigInt::one(), [])
    }

    pub fn allows(&self, p: u64) -> bool {
        is_prime(p)
            && !(&self.modulus % BigInt::from(p)).is_zero()
            && self
                .conditions
                .iter()
                .all(|c| DirichletChar::primitive_of(*c).value(p as i64) == 1)
    }

    /// Human-readable rendering such as `p ≠ 2` or `(p/5) = 1`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if !self.small_prime_factors.is_empty() {
            let ps: Vec<String> = self
                .small_prime_factors
                .iter()
                .map(u64::to_string)
                .collect();
            parts.push(format!("p ≠ {}", ps.join(", ")));
        }
        if !self.cofactor.is_one() {
            parts.push(format!("p ∤ {}", self.cofactor));
        }
        for c in &self.conditions {
            parts.push(format!(
                "{} = 1",
                DirichletChar::primitive_of(*c).symbol_at_p()
            ));
        }
        if parts.is_empty() {
            "all primes".into()
        } else {
            parts.join(" and ")
        }
    }
}

/// Prime factors below 10^6 and the remaining cofactor.
fn split_small_factors(n: &BigInt) -> (Vec<u64>, BigInt) {
    let mut rest = n.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut p = 2u64;
    while p < 1_000_000 && !rest.is_one() {
        let bp = BigInt::from(p);
        if (&rest % &bp).is_zero() {
            out.push(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        if &bp * &bp > rest {
            if !rest.is_one() {
                if let Some(r) = rest.to_u64() {
                    out.push(r);
                    rest = BigInt::one();
                }
            }
            break;
        }
        p += 1;
    }
    out.sort_unstable();
    (out, rest)
}

/// The primes for which Lemma 2.1 guarantees the congruence of the combo's
/// coefficients: p ∤ D·Π β_i d_i, and χ_i(p) = 1 for plain congruences.
pub fn combo_congruence_primes(
    combo: &EisensteinCombo,
    d: &BigInt,
    flavor: Flavor,
) -> PrimePredicate {
    let mut m = d.clone();
    let mut conds = Vec::new();
    for e in combo.support() {
        m = m * e.coefficient.denom() * BigInt::from(e.dilation);
        if flavor == Flavor::Plain {
            conds.push(e.chi);
        }
    }
    PrimePredicate::new(m, conds)
}

/// Classical normalization E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n, written as a
/// multiple of E_{k,χ0,χ0}: returns the factor λ with E_k = λ·E_{k,χ0,χ0}.
pub fn classical_scale(k: u32) -> Rational {
    int(-2 * k as i64) / bernoulli(k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::CharKind::*;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), frac(-1, 2));
        assert_eq!(bernoulli(4), frac(-1, 30));
        assert_eq!(bernoulli(6), frac(1, 42));
        assert_eq!(bernoulli(12), frac(-691, 2730));
        assert_eq!(bernoulli(7), int(0));
    }

    #[test]
    fn generalized_bernoulli() {
        let one = DirichletChar::primitive_of(Principal);
        assert_eq!(gen_bernoulli(4, &one), frac(-1, 30));
        assert_eq!(gen_bernoulli(1, &one), frac(1, 2));
        let m4 = DirichletChar::primitive_of(KroneckerM4);
        assert_eq!(gen_bernoulli(3, &m4), frac(3, 2));
        // −4·(−B/6) = 1 for the theta-squared identity
        assert_eq!(int(-4) * (-gen_bernoulli(3, &m4) / int(6)), int(1));
        let c3 = DirichletChar::primitive_of(Jacobi3);
        assert_eq!(gen_bernoulli(5, &c3), frac(-10, 3));
        let c7 = DirichletChar::primitive_of(Jacobi7);
        assert_eq!(gen_bernoulli(3, &c7), frac(48, 7));
        // (1/16)·(−B_{5,(·/7)}/10) = 1 in the level-7 Theorem-2 combination
        assert_eq!(gen_bernoulli(5, &c7), int(-160));
        // B_{1,ψ} = (1/f) Σ ψ(a) a for nontrivial ψ
        assert_eq!(gen_bernoulli(1, &m4), frac(-1, 2));
    }

    #[test]
    fn weight_six_level_one() {
        let one = DirichletChar::primitive_of(Principal);
        let e = eisenstein_series(6, &one, &one, 1, 4).unwrap();
        assert_eq!(e.coeffs(), &[frac(-1, 504), int(1), int(33), int(244)]);
        assert_eq!(classical_scale(6), int(-504));
        assert_eq!(classical_scale(12), frac(65520, 691));
    }

    #[test]
    fn odd_weight_twisted_series() {
        let one = DirichletChar::primitive_of(Principal);
        let m4 = DirichletChar::primitive_of(KroneckerM4);
        let e = eisenstein_series(3, &m4, &one, 1, 10).unwrap();
        assert_eq!(e.coeff(0), int(0));
        assert_eq!(e.coeff(1), int(1));
        let e = eisenstein_series(3, &one, &m4, 1, 9)
            .unwrap()
            .scale(&int(-4));
        let want = [1, -4, -4, 32, -4, -104, 32, 192, -4];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(e.coeff(n as i64), int(*w));
        }
        assert!(matches!(
            eisenstein_series(4, &one, &m4, 1, 5),
            Err(Error::ParityError(_))
        ));
    }

    #[test]
    fn dilation_spreads_coefficients() {
        let one = DirichletChar::primitive_of(Principal);
        let e = eisenstein_series(4, &one, &one, 3, 10).unwrap();
        assert_eq!(e.coeff(3), int(1));
        assert_eq!(e.coeff(6), int(9));
        assert_eq!(e.coeff(4), int(0));
    }

    #[test]
    fn basis_enumeration() {
        let b = eisenstein_basis(6, 2, &DirichletChar::principal(2));
        assert_eq!(
            b,
            vec![
                EisensteinElement::new(6, Principal, Principal, 1),
                EisensteinElement::new(6, Principal, Principal, 2)
            ]
        );
        let eps = DirichletChar::new(3, Jacobi3).unwrap();
        let b = eisenstein_basis(5, 3, &eps);
        assert_eq!(
            b,
            vec![
                EisensteinElement::new(5, Principal, Jacobi3, 1),
                EisensteinElement::new(5, Jacobi3, Principal, 1)
            ]
        );
        assert_eq!(
            eisenstein_basis(4, 1, &DirichletChar::principal(1)).len(),
            1
        );
        assert_eq!(
            eisenstein_basis(4, 9, &DirichletChar::principal(9)).len(),
            4
        );
        assert!(eisenstein_basis(5, 4, &DirichletChar::principal(4)).is_empty());
    }

    #[test]
    fn congruence_predicates() {
        let combo = EisensteinCombo {
            weight: 4,
            level: 5,
            character: DirichletChar::new(5, Jacobi5).unwrap(),
            elements: vec![EisensteinElement::new(4, Principal, Jacobi5, 1)],
        };
        let p = combo_congruence_primes(&combo, &BigInt::one(), Flavor::Plain);
        assert!(primes().all(|q| p.allows(q)));
        assert_eq!(p.render(), "all primes");

        let combo = EisensteinCombo {
            weight: 5,
            level: 3,
            character: DirichletChar::new(3, Jacobi3).unwrap(),
            elements: vec![
                EisensteinElement::new(5, Principal, Jacobi3, 1).with_coefficient(int(3))
            ],
        };
        let p = combo_congruence_primes(&combo, &BigInt::one(), Flavor::Plain);
        assert!([2, 3, 5, 7, 11].iter().all(|&q| p.allows(q)));

        let combo = EisensteinCombo {
            weight: 6,
            level: 1,
            character: DirichletChar::principal(1),
            elements: vec![
                EisensteinElement::new(6, Principal, Principal, 1).with_coefficient(frac(1, 7))
            ],
        };
        let p = combo_congruence_primes(&combo, &BigInt::from(691), Flavor::Plain);
        assert!(!p.allows(7) && !p.allows(691) && p.allows(5));
        assert_eq!(p.render(), "p ≠ 7, 691");
    }

    #[test]
    fn plain_condition_rendering() {
        let p = PrimePredicate::new(BigInt::from(2), [Jacobi7]);
        assert_eq!(p.render(), "p ≠ 2 and (p/7) = 1");
        assert!(p.allows(11) && !p.allows(2) && !p.allows(5) && !p.allows(7));
    }

    fn primes() -> impl Iterator<Item = u64> {
        (2..200).filter(|&p| is_prime(p))
    }

    /// Lemma 2.1 on the basis elements themselves: e_{ℓp^r} ≡ χ(p) e_{ℓp^(r−1)} mod p^r for p ∤ d.
    #[test]
    fn basis_elements_satisfy_twisted_congruences() {
        let bound = 150i64;
        let cases = [
            (4u32, Principal, Principal, 1u64),
            (4, Principal, Jacobi5, 1),
            (4, Jacobi5, Principal, 1),
            (5, Principal, Jacobi3, 1),
            (5, Jacobi3, Principal, 2),
            (3, Principal, KroneckerM4, 1),
            (3, KroneckerM4, Principal, 1),
            (5, Principal, Jacobi7, 1),
            (6, Principal, Principal, 2),
        ];
        for (k, chi, psi, d) in cases {
            let e = EisensteinElement::new(k, chi, psi, d)
                .series(bound + 1)
                .unwrap();
            let c = DirichletChar::primitive_of(chi);
            for p in primes().filter(|p| d % p != 0 && (*p as i64) <= bound) {
                let mut r = 1u32;
                while (p as i64).pow(r) <= bound {
                    let pr = (p as i64).pow(r);
                    for l in 1..=bound / pr {
                        let diff = e.coeff(l * pr)
                            - int(c.value(p as i64) as i64) * e.coeff(l * pr / p as i64);
                        let v = rational::padic_val(&diff, p).unwrap();
                        assert!(
                            v.at_least(r as i64),
                            "k={k} {chi:?} {psi:?} d={d} p={p} l={l} r={r}"
                        );
                    }
                    r += 1;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn divisor_sums_are_multiplicative(m in 1u64..60, n in 1u64..60) {
            prop_assume!(num_integer::Integer::gcd(&m, &n) == 1);
            for (k, psi) in [(4u32, Principal), (4, Jacobi5), (5, Jacobi3), (3, KroneckerM4)] {
                let e = EisensteinElement::new(k, Principal, psi, 1);
                prop_assert_eq!(e.divisor_sum(m * n), e.divisor_sum(m) * e.divisor_sum(n));
            }
        }

        #[test]
        fn series_matches_divisor_sum(n in 1u64..80) {
            let e = EisensteinElement::new(5, Jacobi3, Principal, 1);
            let s = e.series(81).unwrap();
            prop_assert_eq!(s.coeff(n as i64), big(e.divisor_sum(n)));
        }
    }
}
