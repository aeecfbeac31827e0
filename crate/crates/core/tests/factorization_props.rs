mod common;

use common::*;
use minmodel::factorization::{
    default_fuel, in_cof, in_inj, replay, soa_factorize, soa_factorize_with, FactorizationStatus, GeneratingSet,
    SquareOrder,
};
use minmodel::lifting::has_llp;
use minmodel::{Error, PresheafMap};
use proptest::prelude::*;

fn check_sound(f: &PresheafMap, gens: &GeneratingSet) -> Result<(), TestCaseError> {
    let fact = soa_factorize(f, gens, default_fuel(f));
    prop_assert!(fact.is_complete(), "fuel exhausted on {:?}", f);
    prop_assert_eq!(&then(&fact.left, &fact.right), f);
    prop_assert!(in_inj(&fact.right, gens));
    if gens.maps.iter().all(PresheafMap::is_mono) {
        prop_assert!(fact.left.is_mono());
    }
    prop_assert_eq!(fact.fuel_used, fact.log.len());
    let (mid, j) = replay(&fact.log, f.source()).unwrap();
    prop_assert_eq!(&mid, fact.middle());
    prop_assert_eq!(&j, &fact.left);
    // the guard attaches nothing once the right factor is already injective
    let again = soa_factorize(&fact.right, gens, default_fuel(&fact.right));
    prop_assert!(again.log.is_empty());
    prop_assert_eq!(&again.right, &fact.right);
    Ok(())
}

#[test]
fn set_factorizations_are_sound() {
    for gens in [finset_i1(), finset_i2()] {
        for f in set_maps(3) {
            check_sound(&f, &gens).unwrap();
        }
    }
}

/// `in_cof` by the retract argument agrees with the left lifting property
/// against every injective map between sets of size at most 3.
#[test]
fn retract_argument_matches_direct_llp() {
    let maps = set_maps(3);
    for gens in [finset_i1(), finset_i2()] {
        let inj: Vec<PresheafMap> = maps.iter().filter(|p| in_inj(p, &gens)).cloned().collect();
        let mut cofs = 0;
        for f in &maps {
            let by_retract = in_cof(f, &gens, FUEL).unwrap();
            assert_eq!(by_retract, has_llp(f, &inj), "{} {f:?}", gens.label);
            cofs += by_retract as usize;
        }
        // injections for {0 -> 1}; everything once the fold is added, as only bijections remain injective
        let expected = if gens.maps.len() == 1 { maps.iter().filter(|f| f.is_mono()).count() } else { maps.len() };
        assert_eq!(cofs, expected, "{}", gens.label);
    }
}

#[test]
fn fold_factorization_for_i2() {
    let fold = fmap(&set(2), &set(1), &[0, 0]);
    let fact = soa_factorize(&fold, &finset_i2(), FUEL);
    assert_eq!(fact.log.len(), 1);
    assert_eq!(fact.middle().size(0), 1);
    assert!(fact.right.is_iso());
    assert_eq!(replay(&fact.log, &set(2)).unwrap().1, fact.left);
    let empty = soa_factorize(&fold, &finset_i2(), 0);
    assert_eq!(empty.status, FactorizationStatus::FuelExhausted);
}

#[test]
fn replay_rejects_tampered_logs() {
    let f = fmap(&set(0), &set(2), &[]);
    let fact = soa_factorize(&f, &finset_i1(), FUEL);
    assert_eq!(fact.log.len(), 2);
    assert_eq!(replay(&[], &set(3)).unwrap().1, PresheafMap::identity(&set(3)));
    let mut dangling = fact.log.clone();
    dangling.remove(0);
    assert!(matches!(replay(&dangling, &set(0)), Err(Error::ReplayMismatch(_))));
    let mut snapshot = fact.log.clone();
    snapshot[1].result = set(2);
    assert!(matches!(replay(&snapshot, &set(0)), Err(Error::ReplayMismatch(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_factorizations_are_sound(f in arb_graph_map(3, 3)) {
        check_sound(&f, &gph_ig())?;
    }

    #[test]
    fn square_order_keeps_soundness(f in arb_graph_map(2, 2)) {
        let gens = gph_ig();
        let rev = soa_factorize_with(&f, &gens, default_fuel(&f), SquareOrder::Reversed);
        prop_assert!(rev.is_complete());
        prop_assert_eq!(then(&rev.left, &rev.right), f.clone());
        prop_assert!(in_inj(&rev.right, &gens));
        let canon = soa_factorize(&f, &gens, default_fuel(&f));
        prop_assert_eq!(rev.log.len(), canon.log.len());
    }
}
