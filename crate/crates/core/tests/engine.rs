use asdc_core::character::CharKind;
use asdc_core::data::DataSet;
use asdc_core::engine::congruence::{verify_asd, CheckStatus, SeqView};
use asdc_core::engine::search::{
    dlog, expand_in_t, find_corollary, find_theorem1, find_theorem2, phi, CertificateKind,
};
use asdc_core::engine::suite::{scan, ScanConfig, ScanTable};
use asdc_core::eta::EtaQuotient;
use asdc_core::rational::{int, Rational};
use asdc_core::series::QSeries;
use asdc_core::spaces::SpaceSpec;
use proptest::prelude::*;

fn data() -> DataSet {
    DataSet::bundled().unwrap()
}

fn eta(s: &str) -> EtaQuotient {
    EtaQuotient::parse(s, None).unwrap()
}

fn series(lead: i64, c: &[i64], prec: i64) -> QSeries {
    QSeries::from_ints(lead, c, prec)
}

fn coeffs(s: &QSeries, n: i64) -> Vec<Rational> {
    (0..n).map(|i| s.coeff(i)).collect()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn theorem_one_on_level_five() {
    let d = data();
    let spec = SpaceSpec::new(5, CharKind::Jacobi5, 2).unwrap();
    let c = find_theorem1(&spec, &eta("eta(5)^6 / eta(1)^6"), &d).unwrap();
    assert_eq!(c.kind, CertificateKind::Theorem1);
    assert_eq!(c.predicate, "(p/5) = 1");
    assert_eq!(c.combo.elements.len(), 2);
    let e = expand_in_t(&c.f_series, &c.t_series, 4).unwrap();
    assert_eq!(e.b[0], int(1));
    // the row claims (p/5) = 1 and the certificate matches it exactly
    assert!(c.table_row.as_ref().unwrap().covers_row());
}

#[test]
fn corollary_on_level_three_gives_both_flavors() {
    let d = data();
    let spec = SpaceSpec::new(3, CharKind::Jacobi3, 3).unwrap();
    let cs = find_corollary(&spec, &eta("eta(3)^12 / eta(1)^12"), &d).unwrap();
    let kinds: Vec<_> = cs.iter().map(|c| c.kind).collect();
    assert_eq!(
        kinds,
        [
            CertificateKind::CorollaryPlain,
            CertificateKind::CorollaryTwisted
        ]
    );
    for c in &cs {
        assert_eq!(c.f_series.coeff(c.f_series.lead()), int(1));
        assert_eq!(c.predicate, "all primes");
    }
    let f1 = eta("eta(1)^9 / eta(3)^3").series(12).unwrap();
    assert!(f1.agrees_with(&cs[0].f_series, 12));
}

#[test]
fn corollary_needs_a_table_three_row() {
    let d = data();
    let spec = SpaceSpec::new(5, CharKind::Jacobi5, 4).unwrap();
    assert!(find_corollary(&spec, &eta("eta(5)^6 / eta(1)^6"), &d).is_err());
}

#[test]
fn theorem_two_on_level_seven() {
    let d = data();
    let ex = d.example("g7_thm2").unwrap();
    let spec = ex.spec().unwrap();
    let g = eta(ex.g.as_deref().unwrap());
    let c = find_theorem2(&spec, &g, ex.pin.as_ref(), &d).unwrap();
    assert_eq!(c.kind, CertificateKind::Theorem2);
    // Φ_g(f) = −f·θt/t with t = g/f
    let p = c.f_series.prec().min(30);
    let lhs = phi(&g.series(p + 1).unwrap(), &c.f_series.truncate(p)).unwrap();
    let rhs = c
        .f_series
        .truncate(p)
        .mul(&dlog(&c.t_series).unwrap())
        .neg();
    assert!(lhs.agrees_with(&rhs, lhs.prec().min(rhs.prec())));
    let b = expand_in_t(&c.f_series, &c.t_series, 7).unwrap().b;
    assert_eq!(b, ex.sequences[0].golden);
}

#[test]
fn theorem_two_without_pin_is_normalized() {
    let d = data();
    let spec = SpaceSpec::new(5, CharKind::Principal, 4).unwrap();
    let c = find_theorem2(&spec, &eta("eta(1)^4 * eta(5)^4"), None, &d).unwrap();
    assert_eq!(c.f_series.coeff(0), int(1));
    assert_eq!(c.t_series.lead(), 1);
}

#[test]
fn perturbed_sequence_names_its_witness() {
    // Σ_(d|n) d^3 passes at every prime; bumping index 9 breaks p = 3 at ℓ·3^r = 9
    let mut b: Vec<Rational> = (0..40u64)
        .map(|n| {
            int((1..=n)
                .filter(|d| n % d == 0)
                .map(|d| (d * d * d) as i64)
                .sum())
        })
        .collect();
    assert!(verify_asd("s", SeqView::Exact(&b), 3, 39).unwrap().verdict);
    b[9] += int(1);
    let r = verify_asd("s", SeqView::Exact(&b), 3, 39).unwrap();
    let w = r.first_failure().unwrap();
    assert_eq!(
        (w.ell, w.r, w.index, w.status),
        (3, 1, 9, CheckStatus::Fail)
    );
}

#[test]
fn table_three_scan_is_green() {
    let cfg = ScanConfig {
        index_bound: 200,
        prime_max: 23,
        ..ScanConfig::default()
    };
    let rows = scan(&data(), ScanTable::Table3, &cfg);
    assert!(!rows.is_empty());
    for r in &rows {
        assert!(r.pass, "{} failed: {:?}", r.spec, r.error);
        // a trivial character has one Eisenstein pair, a quadratic one two
        let want = if r.spec.contains("principal") { 1 } else { 2 };
        assert_eq!(r.certificates.len(), want, "{}", r.spec);
    }
}

#[test]
fn expansion_matches_example_two() {
    let f = eta("eta(1)^4 * eta(3)^4 / (eta(2)^2 * eta(6)^2)")
        .series(10)
        .unwrap();
    let t = eta("eta(2)^6 * eta(6)^6 / (eta(1)^6 * eta(3)^6)")
        .series(10)
        .unwrap();
    let e = expand_in_t(&f, &t, 6).unwrap();
    assert_eq!(e.b, ints(&[1, -4, 28, -256, 2716, -31504, 387136]));
}

fn arb_series(lead: i64) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-20i64..=20, 10).prop_map(move |mut c| {
        c[0] = 1 + c[0].rem_euclid(5);
        series(lead, &c, lead + 10)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn expansion_reconstructs_f(f in arb_series(0), tail in prop::collection::vec(-9i64..=9, 11)) {
        let mut tc = tail;
        tc[0] = 1;
        let t = series(1, &tc, 12);
        let e = expand_in_t(&f, &t, 9).unwrap();
        prop_assert!(e.reconstruct().unwrap().agrees_with(&f, 10));
    }

    #[test]
    fn phi_is_linear_in_f(g in arb_series(1), f1 in arb_series(0), f2 in arb_series(0), a in -5i64..5) {
        let lhs = phi(&g, &f1.scale(&int(a)).add(&f2)).unwrap();
        let rhs = phi(&g, &f1).unwrap().scale(&int(a)).add(&phi(&g, &f2).unwrap());
        prop_assert!(lhs.agrees_with(&rhs, lhs.prec()));
    }

    #[test]
    fn phi_kills_multiples_of_g(g in arb_series(1), c in -7i64..7) {
        let out = phi(&g, &g.scale(&int(c))).unwrap();
        prop_assert!(coeffs(&out, out.prec()).iter().all(|x| *x == int(0)));
    }

    #[test]
    fn phi_is_minus_f_dlog_t(g in arb_series(1), f in arb_series(0)) {
        let t = g.div(&f).unwrap();
        let lhs = phi(&g, &f).unwrap();
        let rhs = f.mul(&dlog(&t).unwrap()).neg();
        let n = lhs.prec().min(rhs.prec());
        prop_assert!(lhs.agrees_with(&rhs, n));
    }
}
