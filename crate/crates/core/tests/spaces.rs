use asdc_core::character::CharKind;
use asdc_core::data::DataSet;
use asdc_core::eisenstein::eisenstein_basis;
use asdc_core::eta::EtaQuotient;
use asdc_core::spaces::{build_basis, dim_e, dim_m, dim_s, sturm_bound, SpaceSpec, SAFETY_MARGIN};

fn data() -> DataSet {
    DataSet::bundled().unwrap()
}

#[test]
fn dimensions_match_fixture_table() {
    let d = data();
    let mut checked = 0;
    for e in &d.dimensions.entries {
        let spec = SpaceSpec::new(e.level, e.character, e.weight).unwrap();
        assert_eq!(dim_m(&spec).unwrap(), e.dim_M, "dim M for {spec}");
        assert_eq!(dim_s(&spec).unwrap(), e.dim_S, "dim S for {spec}");
        assert_eq!(dim_e(&spec).unwrap(), e.dim_E, "dim E for {spec}");
        checked += 1;
    }
    assert!(checked > 600);
}

#[test]
fn real_eisenstein_basis_counts_match_dimension() {
    // level 25 also carries Eisenstein series with complex characters
    let d = data();
    for e in d
        .dimensions
        .entries
        .iter()
        .filter(|e| e.weight >= 3 && e.level != 25)
    {
        let spec = SpaceSpec::new(e.level, e.character, e.weight).unwrap();
        let n = eisenstein_basis(e.weight as u32, e.level, &spec.character).len() as u64;
        assert_eq!(n, e.dim_E, "{spec}");
    }
}

#[test]
fn every_generated_space_reaches_full_rank() {
    let d = data();
    let mut specs: Vec<(u64, CharKind, i64)> = d
        .generators
        .entries
        .iter()
        .map(|g| (g.spec.level, g.spec.character, g.spec.weight))
        .collect();
    specs.sort();
    specs.dedup();
    for (n, c, k) in specs {
        let spec = SpaceSpec::new(n, c, k).unwrap();
        let b = build_basis(&spec, 0, &d).unwrap_or_else(|e| panic!("{spec}: {e}"));
        assert_eq!(b.rank as u64, dim_m(&spec).unwrap());
        let leads = b.leads();
        assert!(
            leads.windows(2).all(|w| w[0] < w[1]),
            "{spec}: leads {leads:?}"
        );
        assert!(b.prec >= sturm_bound(n, k) + SAFETY_MARGIN);
    }
}

#[test]
fn basis_rows_regenerate_from_recipes() {
    let d = data();
    let spec = SpaceSpec::new(6, CharKind::Principal, 4).unwrap();
    let b = build_basis(&spec, 30, &d).unwrap();
    for i in 0..b.rank {
        let s = b.regenerate(i, b.prec).unwrap();
        assert!(s.agrees_with(&b.forms[i], b.prec), "row {i}");
    }
}

#[test]
fn weight_two_level_five_quadratic_space() {
    let d = data();
    let spec = SpaceSpec::new(5, CharKind::Jacobi5, 2).unwrap();
    let b = build_basis(&spec, 30, &d).unwrap();
    assert_eq!(b.rank, 2);
    let f = EtaQuotient::parse("eta(1)^5 / eta(5)", None)
        .unwrap()
        .series(30)
        .unwrap();
    assert!(b.contains(&f));
}

#[test]
fn level_two_weight_four_basis() {
    let d = data();
    let spec = SpaceSpec::new(2, CharKind::Principal, 4).unwrap();
    let b = build_basis(&spec, 30, &d).unwrap();
    assert_eq!(b.leads(), vec![0, 1]);
    for e in ["eta(1)^16 / eta(2)^8", "eta(2)^16 / eta(1)^8"] {
        let f = EtaQuotient::parse(e, None).unwrap().series(30).unwrap();
        assert!(b.contains(&f), "{e}");
    }
}

#[test]
fn odd_weight_trivial_character_is_empty() {
    let d = data();
    let spec = SpaceSpec::new(4, CharKind::Principal, 3).unwrap();
    let b = build_basis(&spec, 20, &d).unwrap();
    assert_eq!(b.rank, 0);
}

#[test]
fn independent_constructions_share_row_space() {
    let d = data();
    let spec = SpaceSpec::new(9, CharKind::Principal, 4).unwrap();
    let a = build_basis(&spec, 40, &d).unwrap();
    let mut d2 = d.clone();
    d2.generators.entries.reverse();
    d2.tables.table4.clear();
    let b = build_basis(&spec, 40, &d2).unwrap();
    assert_eq!(a.forms, b.forms);
}
