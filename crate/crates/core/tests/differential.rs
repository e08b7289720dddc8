#[path = "support/differential.rs"]
mod differential;

#[test]
fn random_programs_agree_with_exhaustive_evaluation() {
    let (failing, passing) = differential::check(60, 0x4b17);
    assert!(failing > 20 && passing > 20, "{failing} failing, {passing} passing");
}
