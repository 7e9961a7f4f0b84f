mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn forward_transfer_preserves_verdict(seed in any::<u64>(), pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trial = common::forward(&mut rng, p, p * p);
        prop_assert!(trial.agrees(), "{trial:?}");
    }

    #[test]
    fn backward_transfer_preserves_verdict(seed in any::<u64>(), pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trial = common::backward(&mut rng, p, p * p);
        prop_assert!(trial.agrees(), "{trial:?}");
    }
}

#[test]
fn identity_coordinate_returns_the_same_residues() {
    use asdc_core::engine::congruence::transfer_check;
    use asdc_core::rational::int;
    use asdc_core::series::QSeries;
    let t = QSeries::from_ints(1, &[1], 40);
    let c: Vec<_> = (0..28).map(|n| int(3i64.pow(n % 5) + n as i64)).collect();
    let out = transfer_check(&t, &c, 3, 27).unwrap();
    let direct = asdc_core::engine::residue::ResidueSeq::from_exact(&c, 3, out.b.exp).unwrap();
    assert_eq!(out.b, direct);
}

#[test]
fn non_integral_inputs_are_rejected() {
    use asdc_core::engine::congruence::transfer_check;
    use asdc_core::error::Error;
    use asdc_core::rational::{frac, int};
    use asdc_core::series::QSeries;
    let mut tv = vec![int(0); 40];
    tv[1] = int(1);
    tv[2] = frac(1, 5);
    let t = QSeries::from_power_coeffs(tv);
    let c: Vec<_> = (0..30).map(int).collect();
    assert!(matches!(
        transfer_check(&t, &c, 5, 25),
        Err(Error::NonIntegralAtP { p: 5, index: 2 })
    ));
    assert!(transfer_check(&t, &c, 7, 25).is_ok());
    let t = QSeries::from_ints(1, &[1], 40);
    let mut c: Vec<_> = (0..30).map(int).collect();
    c[3] = frac(1, 5);
    assert!(matches!(
        transfer_check(&t, &c, 5, 25),
        Err(Error::NonIntegralAtP { p: 5, index: 3 })
    ));
}
