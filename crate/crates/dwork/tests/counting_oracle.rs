use dwork::counting::{self, DworkInstance};
use dwork::group::{all_group_elements, GroupElement};
use dwork::Parallelism;
use std::collections::BTreeMap;

fn representatives(n: u32) -> Vec<GroupElement> {
    let mut reps: BTreeMap<(Vec<u8>, Vec<u8>), GroupElement> = BTreeMap::new();
    for g in all_group_elements(n) {
        reps.entry(g.symmetry_key()).or_insert(g);
    }
    reps.into_values().collect()
}

#[test]
fn identity_consistency() {
    let inst = DworkInstance::new(3, 7, 3).unwrap();
    for r in 1..=2 {
        let id = GroupElement::identity(3);
        let n = counting::count_points(&inst, r, Parallelism::Parallel).unwrap();
        assert_eq!(
            counting::fixed_count_general(&inst, &id, r, Parallelism::Sequential).unwrap(),
            n
        );
        assert_eq!(counting::oracle_fixed_count(&inst, &id, r).unwrap(), n);
    }
}

#[test]
fn oracle_grid_n3() {
    let inst = DworkInstance::new(3, 7, 3).unwrap();
    for r in 1..=2 {
        for g in representatives(3) {
            let a = counting::fixed_count_general(&inst, &g, r, Parallelism::Parallel).unwrap();
            let b = counting::oracle_fixed_count(&inst, &g, r).unwrap();
            assert_eq!(a, b, "g = {g}, r = {r}");
        }
    }
}

#[test]
fn oracle_grid_n4() {
    let inst = DworkInstance::new(4, 13, 2).unwrap();
    for g in representatives(4) {
        let a = counting::fixed_count_general(&inst, &g, 1, Parallelism::Parallel).unwrap();
        let b = counting::oracle_fixed_count(&inst, &g, 1).unwrap();
        assert_eq!(a, b, "g = {g}");
    }
}
