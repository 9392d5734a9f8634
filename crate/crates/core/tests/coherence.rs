use opmeans_core::harness::{check_condition, ConditionId, TrialConfig};
use opmeans_core::repr::catalog;

use ConditionId::*;

const DECREASING: [ConditionId; 8] = [A1, A3, A5, A6, A7, A8, A11, A12];
const MONOTONE: [ConditionId; 5] = [B1, B3, B5, B6, B8];

fn outcomes(f: &opmeans_core::repr::ScalarFunction, family: &[ConditionId]) -> Vec<(ConditionId, bool)> {
    let cfg = TrialConfig {
        trials_per_dim: 16,
        ..TrialConfig::default()
    };
    family
        .iter()
        .map(|&c| (c, check_condition(c, f, &cfg).unwrap().pass))
        .collect()
}

#[test]
fn equivalent_conditions_agree_across_catalog() {
    let mut disagreements = Vec::new();
    for f in catalog() {
        for family in [&DECREASING[..], &MONOTONE[..]] {
            let got = outcomes(&f, family);
            if got.iter().any(|(_, p)| *p != got[0].1) {
                disagreements.push(format!("{}: {:?}", f.id(), got));
            }
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:#?}");
}
