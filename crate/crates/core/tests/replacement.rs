use trackcoh::beckmod::AbGroup;
use trackcoh::cohomology::complex::chain_guard;
use trackcoh::cohomology::{build_sx, les, path_fattening, replacement_iso, Fault, TowerData};
use trackcoh::fincat::freeness_audit;
use trackcoh::fixtures::{fattened_arrow, involution_track, square_track, t1};
use trackcoh::Error;

#[test]
fn square_gets_a_free_base() {
    let sq = square_track();
    assert!(freeness_audit(&sq.to_internal().levels[0]).is_err());
    let d = build_sx(&sq, 3).unwrap();
    assert!(d.checks.ok(), "{:?}", d.checks.failures());
    assert!(freeness_audit(&d.sx.to_internal().levels[0]).is_ok());
    assert_eq!(d.sx.objects(), sq.objects());
}

#[test]
fn fattening_needs_one_track_category() {
    assert!(matches!(path_fattening(&fattened_arrow(), 2), Err(Error::Precondition(_))));
}

#[test]
fn involution_has_nonzero_matching_groups() {
    let r = replacement_iso(&involution_track(), &AbGroup::cyclic(2), 2, 1).unwrap();
    assert!(r.ok(), "{:?}", r.checks);
    assert!(!r.aq.is_zero());
    assert_eq!(r.aq.to_string(), "Z/2");
}

#[test]
fn isomorphism_is_only_claimed_above_degree_one() {
    let e = replacement_iso(&t1(), &AbGroup::integers(), 1, 1).unwrap_err();
    assert!(matches!(e, Error::Precondition(_)));
}

#[test]
fn short_bound_is_refused_on_composable_arrows() {
    let sq = square_track();
    let e = chain_guard(&sq, 1).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    assert!(chain_guard(&sq, 2).is_ok());
    assert!(matches!(TowerData::new(&sq, 1, 1), Err(Error::Truncation { .. })));
}

#[test]
fn les_needs_one_extra_level() {
    let data = TowerData::new(&t1(), 1, 2).unwrap();
    assert!(les(&data, &AbGroup::cyclic(2), 2, Fault::None).is_err());
    assert!(les(&data, &AbGroup::cyclic(2), 1, Fault::None).is_ok());
}
