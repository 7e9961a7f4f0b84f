//! Finite verification of congruences `b_{ℓp^r} ≡ b_{ℓp^(r−1)} (mod p^r)` and
//! their twisted and three-term variants, over exact or residue data.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{CharKind, DirichletChar};
use crate::error::{Error, Result};
use crate::rational::{self, int, is_p_integral, is_prime, padic_val, Rational, Valuation};
use crate::series::QSeries;

use super::residue::{self, ResidueSeq};

/// Coefficients to check: exact rationals or residues at one prime.
#[derive(Clone, Copy, Debug)]
pub enum SeqView<'a> {
    Exact(&'a [Rational]),
    Residue(&'a ResidueSeq),
}

impl SeqView<'_> {
    pub fn len(&self) -> usize {
        match self {
            SeqView::Exact(b) => b.len(),
            SeqView::Residue(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `None` when some involved coefficient (or weight) is not p-integral.
    fn combination(&self, p: u64, terms: &[(Rational, usize)]) -> Option<Valuation> {
        match self {
            SeqView::Exact(b) => {
                let mut acc = Rational::zero();
                for (w, i) in terms {
                    if !is_p_integral(&b[*i], p) || !is_p_integral(w, p) {
                        return None;
                    }
                    acc += w * &b[*i];
                }
                padic_val(&acc, p).ok()
            }
            SeqView::Residue(r) => {
                debug_assert_eq!(r.p, p);
                if terms.iter().any(|(_, i)| !r.is_integral(*i)) {
                    return None;
                }
                r.combination(terms)
            }
        }
    }
}

/// Which relation a report tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationKind {
    /// `b_{ℓp^r} − b_{ℓp^(r−1)}`.
    Plain,
    /// `b_{ℓp^r} − χ(p)·b_{ℓp^(r−1)}`.
    Twisted { character: CharKind, chi_p: i8 },
    /// `b_{ℓp^r} − a_p·b_{ℓp^(r−1)} + p^e·b_{ℓp^(r−2)}`.
    ThreeTerm {
        #[serde(with = "rational::serde_rational")]
        a_p: Rational,
        exponent: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NonIntegral,
}

/// One instance (ℓ, r) of the congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub ell: u64,
    pub r: u32,
    pub index: u64,
    pub valuation: Option<Valuation>,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub sequence_id: String,
    pub prime: u64,
    pub relation: RelationKind,
    pub bound: u64,
    pub checks: Vec<Check>,
    pub verdict: bool,
}

impl CongruenceReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status != CheckStatus::Pass)
    }

    pub fn passed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Pass)
            .count()
    }

    /// One-line description of the verdict with its witness.
    pub fn summary(&self) -> String {
        match self.first_failure() {
            None => format!(
                "{} p={}: pass ({} checks to {})",
                self.sequence_id,
                self.prime,
                self.checks.len(),
                self.bound
            ),
            Some(c) => format!(
                "{} p={}: FAIL at (l={}, r={}) index {} [{:?}, valuation {}]",
                self.sequence_id,
                self.prime,
                c.ell,
                c.r,
                c.index,
                c.status,
                c.valuation.map_or("n/a".to_string(), |v| v.to_string())
            ),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Runs every (ℓ, r) with ℓ ≥ 1, r ≥ 1 and ℓp^r ≤ bound.
fn run(
    id: &str,
    b: SeqView,
    p: u64,
    bound: u64,
    relation: RelationKind,
) -> Result<CongruenceReport> {
    check_prime(p)?;
    if b.len() as u64 <= bound {
        return Err(Error::PrecisionExhausted {
            needed: bound as i64 + 1,
            available: b.len() as i64,
        });
    }
    let mut checks = Vec::new();
    let mut pr = p;
    let mut r = 1u32;
    while pr <= bound {
        for ell in 1..=bound / pr {
            let n = ell * pr;
            let prev = n / p;
            let mut terms = vec![(int(1), n as usize)];
            match &relation {
                RelationKind::Plain => terms.push((int(-1), prev as usize)),
                RelationKind::Twisted { chi_p, .. } => {
                    terms.push((int(-(*chi_p as i64)), prev as usize))
                }
                RelationKind::ThreeTerm { a_p, exponent } => {
                    terms.push((-a_p.clone(), prev as usize));
                    // b at ℓp^(r−2) exists when r ≥ 2 or p | ℓ
                    if prev.is_multiple_of(p) {
                        let pe = rational::big(BigInt::from(p).pow(*exponent));
                        terms.push((pe, (prev / p) as usize));
                    }
                }
            }
            let v = b.combination(p, &terms);
            let status = match v {
                None => CheckStatus::NonIntegral,
                Some(v) if v.at_least(r as i64) => CheckStatus::Pass,
                Some(_) => CheckStatus::Fail,
            };
            checks.push(Check {
                ell,
                r,
                index: n,
                valuation: v,
                status,
            });
        }
        pr = match pr.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
        r += 1;
    }
    let verdict = checks.iter().all(|c| c.status == CheckStatus::Pass);
    Ok(CongruenceReport {
        sequence_id: id.to_string(),
        prime: p,
        relation,
        bound,
        checks,
        verdict,
    })
}

/// `b_{ℓp^r} ≡ b_{ℓp^(r−1)} (mod p^r)` for all ℓp^r ≤ bound.
pub fn verify_asd(id: &str, b: SeqView, p: u64, bound: u64) -> Result<CongruenceReport> {
    run(id, b, p, bound, RelationKind::Plain)
}

/// `b_{ℓp^r} ≡ χ(p)·b_{ℓp^(r−1)} (mod p^r)`. When p divides the conductor
/// the relation degenerates to `p^r | b_{ℓp^r}`, visible as `chi_p = 0`.
pub fn verify_twisted(
    id: &str,
    b: SeqView,
    p: u64,
    chi: CharKind,
    bound: u64,
) -> Result<CongruenceReport> {
    let chi_p = DirichletChar::primitive_of(chi).value(p as i64);
    run(
        id,
        b,
        p,
        bound,
        RelationKind::Twisted {
            character: chi,
            chi_p,
        },
    )
}

/// `b_{ℓp^r} − a_p b_{ℓp^(r−1)} + p^e b_{ℓp^(r−2)} ≡ 0 (mod p^r)` with `a`
/// the coefficients of a normalized eigenform.
pub fn verify_threeterm(
    id: &str,
    b: SeqView,
    a: &[Rational],
    exponent: u32,
    p: u64,
    bound: u64,
) -> Result<CongruenceReport> {
    let a_p = a
        .get(p as usize)
        .cloned()
        .ok_or(Error::PrecisionExhausted {
            needed: p as i64 + 1,
            available: a.len() as i64,
        })?;
    run(id, b, p, bound, RelationKind::ThreeTerm { a_p, exponent })
}

/// Coefficients of the differential `Σ α_n x^(n−1) dx` at a prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffForm {
    #[serde(with = "rational::serde_rational_vec")]
    pub alphas: Vec<Rational>,
    pub prime: u64,
}

/// Whether `v_p(α_n − α_(n/p)) ≥ v_p(n)` for `1 ≤ n < len`, with
/// `α_(n/p) = 0` when p ∤ n. Returns the first failing n otherwise.
pub fn omega_shift_integrality(form: &CoeffForm) -> (bool, Option<u64>) {
    let p = form.prime;
    for n in 1..form.alphas.len() as u64 {
        let mut w = 0i64;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            w += 1;
        }
        let prev = if n % p == 0 {
            form.alphas[(n / p) as usize].clone()
        } else {
            Rational::zero()
        };
        let d = &form.alphas[n as usize] - prev;
        let ok = padic_val(&d, p).is_ok_and(|v| v.at_least(w));
        if !ok {
            return (false, Some(n));
        }
    }
    (true, None)
}

/// Reports for both sides of a change of local coordinate `t = a_1 u + ...`
/// with `Σ b_n t^(n−1) dt = Σ c_n u^(n−1) du`.
#[derive(Clone, Debug)]
pub struct TransferOutcome {
    pub b: ResidueSeq,
    pub b_report: CongruenceReport,
    pub c_report: CongruenceReport,
}

/// Computes `b` from `c` modulo `p^(R+1)` (`p^R ≤ bound`) and verifies both.
pub fn transfer_check(t: &QSeries, c: &[Rational], p: u64, bound: u64) -> Result<TransferOutcome> {
    check_prime(p)?;
    let n = bound as usize + 1;
    if c.len() < n {
        return Err(Error::PrecisionExhausted {
            needed: n as i64,
            available: c.len() as i64,
        });
    }
    let tv = t.power_coeffs(n as i64 + 1)?;
    if !tv[0].is_zero() || tv[1].is_zero() {
        return Err(Error::ReversionOrderError(t.lead()));
    }
    if let Some(i) = tv.iter().position(|x| !is_p_integral(x, p)) {
        return Err(Error::NonIntegralAtP { p, index: i });
    }
    if let Some(i) = c[..n].iter().position(|x| !is_p_integral(x, p)) {
        return Err(Error::NonIntegralAtP { p, index: i });
    }
    let exp = residue::max_exponent(p, n - 1) + 1;
    let b = residue::transfer_forward(&tv, &c[..n], p, exp)
        .ok_or(Error::NonIntegralAtP { p, index: 1 })?;
    let b_report = verify_asd("b", SeqView::Residue(&b), p, bound)?;
    let c_report = verify_asd("c", SeqView::Exact(c), p, bound)?;
    Ok(TransferOutcome {
        b,
        b_report,
        c_report,
    })
}

/// The backward direction: recovers `c` residues from `b` residues.
pub fn transfer_back(t: &QSeries, b: &ResidueSeq) -> Result<ResidueSeq> {
    let tv = t.power_coeffs(b.len() as i64 + 1)?;
    residue::transfer_backward(&tv, &b.values, b.p, b.exp)
        .ok_or(Error::NonIntegralAtP { p: b.p, index: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn example_one_at_seven() {
        let b = ints(&[1, -5, 35, -275, 2275, -19255, 163925, -1385725, 11483875]);
        let r = verify_asd("b", SeqView::Exact(&b), 7, 8).unwrap();
        assert!(r.verdict);
        assert_eq!(r.checks.len(), 1);
        // b_7 − b_1 = −1385720 = −2^3·5·7^3·101
        assert_eq!(r.checks[0].valuation, Some(Valuation::Finite(3)));
    }

    #[test]
    fn identity_sequence_fails_at_five() {
        let b: Vec<Rational> = (0..=25).map(int).collect();
        let r = verify_asd("n", SeqView::Exact(&b), 5, 25).unwrap();
        assert!(!r.verdict);
        let c = r.first_failure().unwrap();
        assert_eq!((c.ell, c.r), (1, 1));
        assert_eq!(c.valuation, Some(Valuation::Finite(0)));
    }

    #[test]
    fn constant_sequence_passes_everywhere() {
        let b = vec![int(7); 50];
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            assert!(verify_asd("c", SeqView::Exact(&b), p, 49).unwrap().verdict);
        }
    }

    #[test]
    fn twisted_level_three() {
        let b = ints(&[0, 1, -9, 135, -2439, 48519, -1023759, 22478121]);
        let r = verify_twisted("b2", SeqView::Exact(&b), 5, CharKind::Jacobi3, 7).unwrap();
        assert!(r.verdict);
        assert_eq!(r.checks[0].valuation, Some(Valuation::Finite(1)));
        let r3 = verify_twisted("b2", SeqView::Exact(&b), 3, CharKind::Jacobi3, 7).unwrap();
        assert!(matches!(
            r3.relation,
            RelationKind::Twisted { chi_p: 0, .. }
        ));
    }

    #[test]
    fn non_integral_coefficients_are_tagged() {
        let b = vec![int(1), frac(1, 3), int(1), int(1)];
        let r = verify_asd("x", SeqView::Exact(&b), 3, 3).unwrap();
        assert_eq!(r.checks[0].status, CheckStatus::NonIntegral);
        assert!(!r.verdict);
    }

    #[test]
    fn non_prime_rejected() {
        let b = vec![int(1); 10];
        assert_eq!(
            verify_asd("x", SeqView::Exact(&b), 4, 8).unwrap_err(),
            Error::NotPrime(4)
        );
    }

    #[test]
    fn omega_oracle_examples() {
        let form = CoeffForm {
            alphas: (0..20).map(int).collect(),
            prime: 3,
        };
        assert_eq!(omega_shift_integrality(&form), (false, Some(3)));
        let form = CoeffForm {
            alphas: vec![int(4); 30],
            prime: 2,
        };
        assert_eq!(omega_shift_integrality(&form), (true, None));
        // σ5 coefficients satisfy the shift condition at every prime
        let sigma: Vec<Rational> = (0..60u64)
            .map(|n| {
                if n == 0 {
                    frac(-1, 504)
                } else {
                    rational::big(
                        rational::divisors(n)
                            .iter()
                            .map(|&d| BigInt::from(d).pow(5u32))
                            .sum(),
                    )
                }
            })
            .collect();
        assert!(
            omega_shift_integrality(&CoeffForm {
                alphas: sigma,
                prime: 5
            })
            .0
        );
    }

    #[test]
    fn identity_transfer_is_trivial() {
        let c = ints(&[3, 1, 4, 1, 5, 9, 2, 6, 5]);
        let t = QSeries::q(20);
        let out = transfer_check(&t, &c, 2, 8).unwrap();
        let m = out.b.modulus();
        for (x, y) in c.iter().zip(&out.b.values) {
            assert_eq!(crate::rational::reduce_mod(x, m).unwrap(), *y);
        }
        assert_eq!(out.b_report.verdict, out.c_report.verdict);
    }
}
