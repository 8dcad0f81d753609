use wavepacket_core::acceptance::{run_all, AcceptanceContext};

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(&AcceptanceContext::default());
    for outcome in &outcomes {
        println!("{outcome}");
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
