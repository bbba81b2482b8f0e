use std::collections::BTreeMap;

use super::Circuit;
use crate::elements::ElementKind;
use crate::scalar::Real;

/// Number of stages of each element family.
pub fn resource_count<T: Real>(circuit: &Circuit<T>) -> BTreeMap<ElementKind, usize> {
    let mut counts = BTreeMap::new();
    for stage in circuit.stages() {
        *counts.entry(stage.kind()).or_insert(0) += 1;
    }
    counts
}
