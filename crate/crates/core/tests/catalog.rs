use qseries::verify::{catalog, run_catalog};

#[test]
fn every_entry_holds_at_default_settings() {
    let reports = run_catalog("all", None);
    let bad: Vec<String> = reports.iter().filter(|r| !r.verdict.is_ok()).map(|r| r.to_string()).collect();
    for r in &reports {
        println!("{r}");
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    assert!(reports.len() >= catalog().len());
}
