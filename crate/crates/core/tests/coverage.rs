use std::collections::BTreeMap;

use qseries::verify::{catalog, manifest_toml};

#[test]
fn every_in_scope_label_has_exactly_one_entry() {
    let mut owners: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in catalog() {
        for l in e.labels {
            owners.entry(l).or_default().push(e.id);
        }
    }
    let wanted = include_str!("data/in_scope_labels.txt");
    let mut missing = Vec::new();
    for label in wanted.lines().map(str::trim).filter(|l| !l.is_empty()) {
        match owners.get(label) {
            None => missing.push(label.to_string()),
            Some(ids) if ids.len() > 1 => panic!("{label} is claimed by {ids:?}"),
            Some(_) => {}
        }
    }
    assert!(missing.is_empty(), "unmapped labels: {missing:?}");
}

#[test]
fn labels_and_ids_are_unique() {
    let mut ids = std::collections::BTreeSet::new();
    let mut labels = std::collections::BTreeSet::new();
    for e in catalog() {
        assert!(ids.insert(e.id), "duplicate id {}", e.id);
        for l in e.labels {
            assert!(labels.insert(*l), "label {l} appears twice");
        }
    }
}

#[test]
fn manifest_file_is_in_sync() {
    let on_disk = include_str!("../catalog.toml");
    assert_eq!(
        on_disk,
        manifest_toml(),
        "catalog.toml is stale; regenerate with `qseries manifest > crates/core/catalog.toml`"
    );
}
