#[path = "support/bitblast.rs"]
mod bitblast;

#[test]
fn binary_operators_widths_1_4_8() {
    bitblast::binary_operators_widths_1_4_8();
}

#[test]
fn unary_operators_and_overflow() {
    bitblast::unary_operators_and_overflow();
}

#[test]
fn casts_between_widths() {
    bitblast::casts_between_widths();
}

#[test]
fn unary_minus_overflow_only_at_minimum() {
    bitblast::unary_minus_overflow_only_at_minimum();
}

#[test]
fn solver_agrees_with_simulation_on_samples() {
    bitblast::solver_agrees_with_simulation_on_samples();
}
