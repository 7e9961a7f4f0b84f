//! Searches for forms `f` whose product with θt/t is Eisenstein, and the
//! certificates recording each identity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::character::{CharKind, DirichletChar};
use crate::data::{DataSet, PrimeCondition};
use crate::eisenstein::{
    combo_congruence_primes, eisenstein_basis, EisensteinCombo, EisensteinElement, Flavor,
    PrimePredicate,
};
use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::linalg::{nullspace, rref, solve};
use crate::rational::{self, primes_up_to, Rational};
use crate::series::QSeries;
use crate::spaces::{
    build_basis, condition_star, dim_m, eta_dlog, sturm_bound, BasisSet, FormRecipe, SpaceSpec,
    SAFETY_MARGIN,
};

/// Primes below this are used when comparing a certificate with a table row.
pub const COMPARE_LIMIT: u64 = 200;

/// θt/t.
pub fn dlog(t: &QSeries) -> Result<QSeries> {
    t.theta().div(t)
}

/// Φ_g(f) = (θ(f)·g − θ(g)·f)/g.
pub fn phi(g: &QSeries, f: &QSeries) -> Result<QSeries> {
    f.theta().mul(g).sub(&g.theta().mul(f)).div(g)
}

/// Coefficients of `f = Σ b_m t^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub f: QSeries,
    pub t: QSeries,
    #[serde(with = "rational::serde_rational_vec")]
    pub b: Vec<Rational>,
    pub n_terms: usize,
}

impl ExpansionResult {
    /// Σ b_m t^m through q^n_terms.
    pub fn reconstruct(&self) -> Result<QSeries> {
        let n = self.n_terms as i64 + 1;
        QSeries::from_power_coeffs(self.b.clone()).compose(&self.t.truncate(n))
    }
}

fn check_hauptmodul_shape(t: &QSeries) -> Result<()> {
    if t.lead() != 1 || !t.lead_coeff().is_some_and(One::is_one) {
        return Err(Error::ReversionOrderError(t.lead()));
    }
    Ok(())
}

/// b_0..b_n by composing f with the compositional inverse of t.
pub fn expand_in_t(f: &QSeries, t: &QSeries, n: usize) -> Result<ExpansionResult> {
    check_hauptmodul_shape(t)?;
    if f.lead() < 0 {
        return Err(Error::CompositionOrderError(f.lead()));
    }
    let need = n as i64 + 1;
    for have in [f.prec(), t.prec()] {
        if have < need {
            return Err(Error::PrecisionExhausted {
                needed: need,
                available: have,
            });
        }
    }
    let inv = t.truncate(need).revert()?;
    let b = f.truncate(need).compose(&inv)?.power_coeffs(need)?;
    Ok(ExpansionResult {
        f: f.truncate(need),
        t: t.truncate(need),
        b,
        n_terms: n,
    })
}

/// How to regenerate the expansion variable at any precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TRecipe {
    Eta(String),
    /// t = g/f with g an eta quotient.
    Ratio {
        g: String,
        f: FormRecipe,
    },
}

impl TRecipe {
    pub fn series(&self, level: u64, prec: i64) -> Result<QSeries> {
        match self {
            TRecipe::Eta(s) => EtaQuotient::parse(s, Some(level))?.series(prec),
            TRecipe::Ratio { g, f } => {
                let g = EtaQuotient::parse(g, Some(level))?.series(prec)?;
                g.div(&f.series(prec)?)
            }
        }
    }

    /// f·θt/t, using the closed logarithmic derivative of eta quotients.
    fn times_dlog(&self, level: u64, f: &QSeries, prec: i64) -> Result<QSeries> {
        match self {
            TRecipe::Eta(s) => Ok(f.mul(&eta_dlog(&EtaQuotient::parse(s, Some(level))?, prec))),
            TRecipe::Ratio { g, .. } => {
                // f·(θg/g − θf/f) = f·θg/g − θf
                let g = EtaQuotient::parse(g, Some(level))?;
                Ok(f.mul(&eta_dlog(&g, prec)).sub(&f.theta()))
            }
        }
    }
}

impl fmt::Display for TRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TRecipe::Eta(s) => f.write_str(s),
            TRecipe::Ratio { g, f: form } => write!(f, "({g}) / ({form})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Theorem1,
    CorollaryPlain,
    CorollaryTwisted,
    Theorem2,
    /// A supplied f checked directly.
    Given,
}

/// Set relation between certified primes and the primes a row claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSetRelation {
    Equal,
    /// The certificate covers every prime of the row and more.
    Stronger,
    Weaker,
    Incomparable,
}

/// How a certificate's primes relate to a table row, over primes below
/// [`COMPARE_LIMIT`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableComparison {
    pub row: String,
    pub relation: PrimeSetRelation,
    /// Allowed by the certificate but not the row.
    pub certificate_only: Vec<u64>,
    /// Allowed by the row but not the certificate.
    pub table_only: Vec<u64>,
}

impl TableComparison {
    /// Whether the certificate covers every prime the row claims.
    pub fn covers_row(&self) -> bool {
        matches!(
            self.relation,
            PrimeSetRelation::Equal | PrimeSetRelation::Stronger
        )
    }

    pub fn new(cert: &PrimePredicate, row: &PrimeCondition) -> Self {
        let mut certificate_only = Vec::new();
        let mut table_only = Vec::new();
        for p in primes_up_to(COMPARE_LIMIT) {
            match (cert.allows(p), row.allows(p)) {
                (true, false) => certificate_only.push(p),
                (false, true) => table_only.push(p),
                _ => {}
            }
        }
        let relation = match (certificate_only.is_empty(), table_only.is_empty()) {
            (true, true) => PrimeSetRelation::Equal,
            (false, true) => PrimeSetRelation::Stronger,
            (true, false) => PrimeSetRelation::Weaker,
            (false, false) => PrimeSetRelation::Incomparable,
        };
        TableComparison {
            row: row.text.clone(),
            relation,
            certificate_only,
            table_only,
        }
    }
}

/// An Eisenstein identity `f·θt/t = Σ c_i E_i` checked past the Sturm bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub kind: CertificateKind,
    pub spec: SpaceSpec,
    pub f: FormRecipe,
    pub f_series: QSeries,
    pub t: TRecipe,
    pub t_series: QSeries,
    pub combo: EisensteinCombo,
    pub flavor: Flavor,
    /// lcm of the denominators seen in f, t and f·θt/t at working precision.
    #[serde(with = "bigint_string")]
    pub denominator_d: BigInt,
    pub excluded: PrimePredicate,
    pub predicate: String,
    /// Every coefficient below this index was compared.
    pub identity_checked_to: i64,
    pub table_row: Option<TableComparison>,
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

impl SearchCertificate {
    /// The primes the identity proves the congruence for.
    pub fn excluded_primes(&self) -> &PrimePredicate {
        &self.excluded
    }

    /// Nonzero combo members, in a canonical order.
    pub fn combo_support(&self) -> Vec<EisensteinElement> {
        canonical_support(&self.combo.elements)
    }
}

/// Nonzero elements sorted by (χ, ψ, d).
pub fn canonical_support(elements: &[EisensteinElement]) -> Vec<EisensteinElement> {
    let mut v: Vec<EisensteinElement> = elements
        .iter()
        .filter(|e| !e.coefficient.is_zero())
        .cloned()
        .collect();
    v.sort_by_key(|e| (e.chi, e.psi, e.dilation, e.weight));
    v
}

/// Precision through which identities of weight k+2 are certified.
pub fn identity_precision(spec: &SpaceSpec) -> i64 {
    sturm_bound(spec.level, spec.weight + 2) + SAFETY_MARGIN + 1
}

/// Writes `f·θt/t` in the Eisenstein basis of weight k+2 and assembles the
/// congruence primes. Fails with `NoSolution` when it is not Eisenstein.
pub fn certify(
    spec: &SpaceSpec,
    f: FormRecipe,
    t: TRecipe,
    flavor: Flavor,
    kind: CertificateKind,
    data: &DataSet,
) -> Result<SearchCertificate> {
    let prec = identity_precision(spec);
    let fs = f.series(prec + 1)?;
    let ts = t.series(spec.level, prec + 1)?;
    check_hauptmodul_shape(&ts)?;
    let c = t.times_dlog(spec.level, &fs, prec + 1)?.truncate(prec);
    if c.prec() < prec {
        return Err(Error::PrecisionExhausted {
            needed: prec,
            available: c.prec(),
        });
    }
    let k2 = (spec.weight + 2) as u32;
    let basis = eisenstein_basis(k2, spec.level, &spec.character);
    let series: Vec<QSeries> = basis
        .iter()
        .map(|e| e.series(prec))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Rational>> = (0..prec)
        .map(|n| series.iter().map(|s| s.coeff(n)).collect())
        .collect();
    let rhs: Vec<Rational> = (0..prec).map(|n| c.coeff(n)).collect();
    let y = if basis.is_empty() {
        rhs.iter().all(Zero::is_zero).then(Vec::new)
    } else {
        solve(&rows, &rhs)
    }
    .ok_or_else(|| {
        Error::NoSolution(format!(
            "f·θt/t is not in the Eisenstein space of {}",
            spec.with_weight(spec.weight + 2)
        ))
    })?;
    let combo = EisensteinCombo {
        weight: k2,
        level: spec.level,
        character: spec.character,
        elements: basis
            .into_iter()
            .zip(y)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| e.with_coefficient(c))
            .collect(),
    };
    if !combo.series(prec)?.agrees_with(&c, prec) {
        return Err(Error::NoSolution(
            "Eisenstein identity does not close".into(),
        ));
    }
    let d = [&fs.truncate(prec), &ts.truncate(prec), &c]
        .iter()
        .fold(BigInt::one(), |acc, s| acc.lcm(&s.denominator_lcm()));
    let mut excluded = combo_congruence_primes(&combo, &d, flavor);
    if kind == CertificateKind::Theorem2 && !spec.character.is_trivial() {
        let mut conds = excluded.conditions.clone();
        conds.push(spec.kind());
        excluded = PrimePredicate::new(excluded.modulus.clone(), conds);
    }
    let table_row = data
        .tables
        .table1_row(spec.level, spec.kind(), spec.weight)
        .map(|row| TableComparison::new(&excluded, &row.primes));
    Ok(SearchCertificate {
        kind,
        spec: *spec,
        predicate: excluded.render(),
        f,
        f_series: fs.truncate(prec),
        t,
        // one extra term so that θt/t is known below q^prec
        t_series: ts,
        combo,
        flavor,
        denominator_d: d,
        excluded,
        identity_checked_to: prec,
        table_row,
    })
}

fn hauptmodul_check(t: &EtaQuotient, spec: &SpaceSpec) -> Result<()> {
    if t.weight()? != 0 || t.ord_inf()? != 1 {
        return Err(Error::InvalidEtaQuotient(format!(
            "{t} is not a weight-zero function q + O(q^2)"
        )));
    }
    if !spec.level.is_multiple_of(t.level()) {
        return Err(Error::InvalidEtaQuotient(format!(
            "{t} is not on Gamma0({})",
            spec.level
        )));
    }
    Ok(())
}

/// Row-reduced x-parts of the solutions of Σ x_i L(b_i) = Σ y_j E_j.
fn eisenstein_preimages(
    basis: &BasisSet,
    images: &[QSeries],
    spec: &SpaceSpec,
    prec: i64,
) -> Result<Vec<Vec<Rational>>> {
    let k2 = (spec.weight + 2) as u32;
    let eis: Vec<QSeries> = eisenstein_basis(k2, spec.level, &spec.character)
        .iter()
        .map(|e| e.series(prec))
        .collect::<Result<_>>()?;
    let m = basis.rank;
    let ncols = m + eis.len();
    let rows: Vec<Vec<Rational>> = (0..prec)
        .map(|n| {
            images
                .iter()
                .map(|s| s.coeff(n))
                .chain(eis.iter().map(|e| -e.coeff(n)))
                .collect()
        })
        .collect();
    let xs: Vec<Vec<Rational>> = nullspace(&rows, ncols)
        .into_iter()
        .map(|v| v[..m].to_vec())
        .filter(|x| x.iter().any(|c| !c.is_zero()))
        .collect();
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    Ok(rref(xs).rows)
}

fn series_of(basis: &BasisSet, x: &[Rational], prec: i64) -> QSeries {
    let mut acc = QSeries::zero(prec);
    for (xi, b) in x.iter().zip(&basis.forms) {
        if !xi.is_zero() {
            acc = acc.add(&b.truncate(prec).scale(xi));
        }
    }
    acc
}

/// Nonzero f in M_k with f·θt/t Eisenstein, taking the first echelon row of
/// the solution space so the lowest possible coefficient is 1.
pub fn find_theorem1(
    spec: &SpaceSpec,
    t: &EtaQuotient,
    data: &DataSet,
) -> Result<SearchCertificate> {
    hauptmodul_check(t, spec)?;
    let prec = identity_precision(spec);
    let basis = build_basis(spec, prec + 1, data)?;
    let dl = eta_dlog(t, prec + 1);
    let images: Vec<QSeries> = basis.forms.iter().map(|b| b.mul(&dl)).collect();
    let rows = eisenstein_preimages(&basis, &images, spec, prec)?;
    let x = rows.into_iter().next().ok_or_else(|| {
        let star = condition_star(spec)
            .map(|v| format!("(condition star: {})", v.proof))
            .unwrap_or_default();
        Error::NoSolution(format!("no f in {spec} with Eisenstein image {star}"))
    })?;
    certify(
        spec,
        basis.combination(&x),
        TRecipe::Eta(t.to_string()),
        Flavor::Plain,
        CertificateKind::Theorem1,
        data,
    )
}

/// Coordinates of `f` in an echelon basis, if it lies in the span.
fn coordinates(basis: &BasisSet, f: &QSeries) -> Option<Vec<Rational>> {
    let prec = basis.prec.min(f.prec());
    let x: Vec<Rational> = basis.leads().iter().map(|&l| f.coeff(l)).collect();
    series_of(basis, &x, prec)
        .agrees_with(&f.truncate(prec), prec)
        .then_some(x)
}

/// Scales so the constant term is 1, or the lowest coefficient when it vanishes.
fn normalizer(f: &QSeries) -> Option<Rational> {
    f.lead_coeff().map(|c| Rational::one() / c)
}

/// The two Eisenstein targets E_{k+2,χ0,χ} (plain congruence) and, for
/// nontrivial χ, E_{k+2,χ,χ0} (twisted congruence).
pub fn find_corollary(
    spec: &SpaceSpec,
    t: &EtaQuotient,
    data: &DataSet,
) -> Result<Vec<SearchCertificate>> {
    hauptmodul_check(t, spec)?;
    if data
        .tables
        .table3_row(spec.level, spec.kind(), spec.weight)
        .is_none()
    {
        return Err(Error::UnsupportedSpace(format!(
            "{spec} has no equal-dimension row"
        )));
    }
    let up = spec.with_weight(spec.weight + 2);
    if dim_m(spec)? != dim_m(&up)? {
        return Err(Error::UnsupportedSpace(format!(
            "dim {spec} differs from dim {up}"
        )));
    }
    let prec = identity_precision(spec);
    let basis = build_basis(spec, prec + 1, data)?;
    let dl = eta_dlog(t, prec + 1);
    let chi = spec.kind();
    let k2 = (spec.weight + 2) as u32;
    let mut targets = vec![(
        EisensteinElement::new(k2, CharKind::Principal, chi, 1),
        Flavor::Plain,
        CertificateKind::CorollaryPlain,
    )];
    if chi != CharKind::Principal {
        targets.push((
            EisensteinElement::new(k2, chi, CharKind::Principal, 1),
            Flavor::Twisted(chi),
            CertificateKind::CorollaryTwisted,
        ));
    }
    targets
        .into_iter()
        .map(|(e, flavor, kind)| {
            let f = e.series(prec + 1)?.div(&dl)?;
            let x = coordinates(&basis, &f).ok_or_else(|| {
                Error::NoSolution(format!("{e} divided by θt/t is not in {spec}"))
            })?;
            let c = normalizer(&f).ok_or_else(|| Error::NoSolution(format!("{e} vanishes")))?;
            let x: Vec<Rational> = x.iter().map(|xi| xi * &c).collect();
            certify(
                spec,
                basis.combination(&x),
                TRecipe::Eta(t.to_string()),
                flavor,
                kind,
                data,
            )
        })
        .collect()
}

/// f = 1 + ... with Φ_g(f) Eisenstein and t = g/f. The solutions form a
/// coset of the line through g; `pin` fixes the q-coefficient of f,
/// otherwise the echelon representative is returned.
pub fn find_theorem2(
    spec: &SpaceSpec,
    g: &EtaQuotient,
    pin: Option<&Rational>,
    data: &DataSet,
) -> Result<SearchCertificate> {
    if g.weight()? != spec.weight || g.ord_inf()? != 1 || !spec.level.is_multiple_of(g.level()) {
        return Err(Error::InvalidEtaQuotient(format!(
            "{g} is not q + O(q^2) of weight {} on Gamma0({})",
            spec.weight, spec.level
        )));
    }
    let prec = identity_precision(spec);
    let basis = build_basis(spec, prec + 2, data)?;
    let gs = g.at_level(spec.level)?.series(prec + 2)?;
    if gs.lead_coeff().is_none_or(|c| !c.is_one()) {
        return Err(Error::InvalidEtaQuotient(format!(
            "{g} does not start with q"
        )));
    }
    let images: Vec<QSeries> = basis
        .forms
        .iter()
        .map(|b| phi(&gs, b))
        .collect::<Result<_>>()?;
    let rows = eisenstein_preimages(&basis, &images, spec, prec)?;
    let leads = basis.leads();
    let pivot_lead = |row: &Vec<Rational>| row.iter().position(|c| !c.is_zero()).map(|i| leads[i]);
    let row0 = rows
        .iter()
        .find(|r| pivot_lead(r) == Some(0))
        .ok_or_else(|| {
            Error::NonVanishingConstraint(format!("every solution in {spec} vanishes at infinity"))
        })?;
    let mut x = row0.clone();
    if let Some(pin) = pin {
        let row1 = rows
            .iter()
            .find(|r| pivot_lead(r) == Some(1))
            .ok_or_else(|| {
                Error::NoSolution(format!("no solution with a free q-coefficient in {spec}"))
            })?;
        let f0 = series_of(&basis, &x, 2);
        let lam = pin - f0.coeff(1);
        for (xi, ri) in x.iter_mut().zip(row1) {
            *xi += &lam * ri;
        }
    }
    let f = basis.combination(&x);
    certify(
        spec,
        f.clone(),
        TRecipe::Ratio {
            g: g.to_string(),
            f,
        },
        Flavor::Plain,
        CertificateKind::Theorem2,
        data,
    )
}

/// Congruence primes of a certificate, rendered and as a predicate.
pub fn excluded_primes(cert: &SearchCertificate) -> (String, PrimePredicate) {
    (cert.predicate.clone(), cert.excluded.clone())
}

/// χ(p) for the certificate's character.
pub fn character_at(cert: &SearchCertificate, p: u64) -> i8 {
    DirichletChar::primitive_of(cert.spec.kind()).value(p as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn eta(s: &str) -> EtaQuotient {
        EtaQuotient::parse(s, None).unwrap()
    }

    #[test]
    fn dlog_of_q_is_one() {
        assert_eq!(dlog(&QSeries::q(10)).unwrap(), QSeries::one(9));
    }

    #[test]
    fn dlog_of_q_plus_six_q_squared() {
        // 1 + 6q/(1 + 6q) = 1 + 6q − 36q^2 + 216q^3
        let d = dlog(&QSeries::from_ints(1, &[1, 6], 5)).unwrap();
        assert_eq!(d, QSeries::from_ints(0, &[1, 6, -36, 216], 4));
    }

    #[test]
    fn dlog_of_level_two_hauptmodul() {
        // θt/t = −E2(z) + 2E2(2z) with E2 = 1 − 24 Σ σ1(n) q^n
        let t = eta("eta(2)^24 / eta(1)^24").series(30).unwrap();
        let d = dlog(&t).unwrap();
        let e2 = |n: i64| -> i64 {
            if n == 0 {
                1
            } else {
                -24 * rational::divisors(n as u64).iter().sum::<u64>() as i64
            }
        };
        for n in 0..d.prec() {
            let two = if n % 2 == 0 { 2 * e2(n / 2) } else { 0 };
            assert_eq!(d.coeff(n), int(two - e2(n)), "q^{n}");
        }
        assert_eq!(d.coeff(1), int(24));
    }

    #[test]
    fn expansion_of_example_one() {
        let f = eta("eta(1)^5 / eta(5)").series(12).unwrap();
        let t = eta("eta(5)^6 / eta(1)^6").series(12).unwrap();
        let r = expand_in_t(&f, &t, 8).unwrap();
        assert_eq!(
            r.b,
            ints(&[1, -5, 35, -275, 2275, -19255, 163925, -1385725, 11483875])
        );
        assert!(r.reconstruct().unwrap().agrees_with(&f, 9));
    }

    #[test]
    fn expanding_t_in_itself() {
        let t = eta("eta(3)^12 / eta(1)^12").series(12).unwrap();
        let r = expand_in_t(&t, &t, 10).unwrap();
        let mut want = vec![int(0); 11];
        want[1] = int(1);
        assert_eq!(r.b, want);
    }

    #[test]
    fn expansion_precision_is_checked() {
        let t = QSeries::q(5);
        assert!(matches!(
            expand_in_t(&QSeries::one(10), &t, 8),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn phi_kernel_and_lead() {
        let g = eta("eta(1)^24").series(20).unwrap();
        assert!(phi(&g, &g).unwrap().is_zero());
        assert!(phi(&g, &g.scale(&frac(3, 7))).unwrap().is_zero());
        // Φ_{q^b}(q^a) = (a − b) q^a
        let qa = QSeries::monomial(int(1), 3, 20);
        let qb = QSeries::monomial(int(1), 1, 20);
        let p = phi(&qb, &qa).unwrap();
        assert_eq!(p.lead(), 3);
        assert_eq!(p.coeff(3), int(2));
    }

    #[test]
    fn phi_of_delta_and_e12_is_eisenstein() {
        // Φ_Δ(E12) with E12 = 1 + (65520/691) Σ σ11 q^n equals −E14
        let delta = eta("eta(1)^24").series(15).unwrap();
        let e12 = EisensteinElement::new(12, CharKind::Principal, CharKind::Principal, 1)
            .series(15)
            .unwrap()
            .scale(&crate::eisenstein::classical_scale(12));
        let e14 = EisensteinElement::new(14, CharKind::Principal, CharKind::Principal, 1)
            .series(15)
            .unwrap()
            .scale(&crate::eisenstein::classical_scale(14));
        assert!(phi(&delta, &e12).unwrap().agrees_with(&e14.neg(), 14));
    }
}
