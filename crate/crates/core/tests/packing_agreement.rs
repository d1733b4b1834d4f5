use hyperorient::gen::{packing_instance, rng_from_seed, PackingShape};
use hyperorient::packinglab::{check, exhaustive_packing_search, validate_witness, PackingMode};

fn agreement(mode: PackingMode, count: usize, seed: u64) {
    let shape = if mode.is_mixed() { PackingShape::mixed() } else { PackingShape::dypergraph() };
    let mut rng = rng_from_seed(seed);
    let mut feasible = 0;
    for i in 0..count {
        let inst = packing_instance(&mut rng, mode, &shape);
        let condition = check(&inst).unwrap();
        let found = exhaustive_packing_search(&inst).unwrap();
        if let Some(w) = &found {
            validate_witness(&inst, w).unwrap_or_else(|e| panic!("{mode} #{i}: {e}\n{inst:?}"));
            feasible += 1;
        }
        assert_eq!(
            condition.is_satisfied(),
            found.is_some(),
            "{mode} #{i}: condition {condition:?}, witness {found:?}\n{inst:?}"
        );
    }
    assert!(feasible > 0, "{mode}: no feasible instance generated");
    assert!(feasible < count, "{mode}: no infeasible instance generated");
}

#[test]
fn edmonds_agrees() {
    agreement(PackingMode::Edmonds, 60, 11);
}

#[test]
fn k_regular_agrees() {
    agreement(PackingMode::KRegular, 60, 12);
}

#[test]
fn fg_bounded_agrees() {
    agreement(PackingMode::FgBounded, 60, 13);
}

#[test]
fn m_based_agrees() {
    agreement(PackingMode::MBased, 60, 14);
}

#[test]
fn m_rooted_dyper_agrees() {
    agreement(PackingMode::MRootedFgkDyper, 60, 15);
}

#[test]
fn m_rooted_mixed_agrees() {
    agreement(PackingMode::MRootedFgkMixed, 60, 16);
}
