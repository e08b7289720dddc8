use minibmc::eval::Value;
use minibmc::frontend::types::{CType, IntKind};
use minibmc::results::render::{binary_text, decimal_text, render_value};
use minibmc::sat::{dimacs, CnfFormula, Lit};
use proptest::prelude::*;

fn reference_decimal(v: u64, width: u32, signed: bool) -> i128 {
    let low = if width == 64 { v } else { v & ((1u64 << width) - 1) };
    if signed && width < 128 && low >> (width - 1) & 1 == 1 {
        low as i128 - (1i128 << width)
    } else {
        low as i128
    }
}

proptest! {
    #[test]
    fn binary_text_reads_back(v in any::<u64>(), width in 1u32..=64) {
        let text = binary_text(v, width);
        let digits: String = text.chars().filter(|c| *c != ' ').collect();
        prop_assert_eq!(digits.len(), width as usize);
        let back = u64::from_str_radix(&digits, 2).unwrap();
        let masked = if width == 64 { v } else { v & ((1 << width) - 1) };
        prop_assert_eq!(back, masked);
        let groups: Vec<&str> = text.split(' ').collect();
        prop_assert!(groups[1..].iter().all(|g| g.len() == 8));
        prop_assert_eq!(groups[0].len(), if width % 8 == 0 { 8 } else { (width % 8) as usize });
    }

    #[test]
    fn decimal_text_is_twos_complement(v in any::<u64>(), width in prop::sample::select(vec![4u32, 8, 16, 32, 64]), signed in any::<bool>()) {
        let ty = if signed { CType::signed(width, IntKind::BitVector) } else { CType::unsigned(width, IntKind::BitVector) };
        prop_assert_eq!(decimal_text(v, &ty), reference_decimal(v, width, signed).to_string());
        let full = render_value(&Value::Scalar(v), &ty);
        prop_assert_eq!(full, format!("{} ({})", reference_decimal(v, width, signed), binary_text(v, width)));
    }

    #[test]
    fn dimacs_round_trips(clauses in prop::collection::vec(prop::collection::vec((1i64..40, any::<bool>()), 1..6), 0..30)) {
        let mut f = CnfFormula::new();
        f.num_vars = 40;
        for c in &clauses {
            f.clauses.push(c.iter().map(|&(v, neg)| Lit::from_dimacs(if neg { -v } else { v })).collect());
        }
        let text = dimacs::write(&f, &["comment".to_string()]);
        prop_assert_eq!(dimacs::parse(&text).unwrap(), f);
    }
}

#[test]
fn bool_rendering() {
    assert_eq!(decimal_text(1, &CType::Bool), "TRUE");
    assert_eq!(decimal_text(0, &CType::Bool), "FALSE");
    assert_eq!(render_value(&Value::Scalar(0), &CType::Bool), "FALSE (0)");
}

#[test]
fn dimacs_rejects_malformed_input() {
    assert!(dimacs::parse("p cnf 2 1\n1 x 0\n").is_err());
    assert!(dimacs::parse("p dnf 2 1\n1 0\n").is_err());
    assert!(dimacs::parse("p cnf 2 1\np cnf 2 1\n").is_err());
}
