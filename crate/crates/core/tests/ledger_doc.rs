use kohn_noether::conservation::{discrepancy_ledger, ledger_markdown};

#[test]
fn docs_ledger_is_current() {
    let doc = include_str!("../../../docs/discrepancy_ledger.md");
    let generated = ledger_markdown(&discrepancy_ledger());
    assert!(
        doc.starts_with(&generated),
        "docs/discrepancy_ledger.md is stale; regenerate it with `kohn-noether ledger`"
    );
}
