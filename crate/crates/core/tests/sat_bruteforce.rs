#[path = "support/sat.rs"]
mod sat;

use minibmc::sat::{Lit, SolveResult};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sat::{brute_force, load, random_cnf};

#[test]
fn twenty_variable_instances_match_enumeration() {
    sat::twenty_variable_instances_match_enumeration();
}

#[test]
fn small_instances_match_enumeration() {
    sat::small_instances_match_enumeration();
}

#[test]
fn pigeonhole_is_unsat_and_matches_enumeration() {
    sat::pigeonhole_is_unsat_and_matches_enumeration();
}

#[test]
fn identical_inputs_give_identical_runs() {
    sat::identical_inputs_give_identical_runs();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Verdicts under assumptions do not depend on what earlier calls learnt.
    #[test]
    fn incremental_calls_are_consistent(seed in any::<u64>(), calls in proptest::collection::vec(proptest::collection::vec((0u32..8, any::<bool>()), 0..4), 1..8)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_cnf(&mut rng, 8, 30, 3);
        let mut s = load(&f);
        for call in calls {
            let assumptions: Vec<Lit> = call.iter().map(|&(v, n)| Lit::new(v, n)).collect();
            let got = s.solve(&assumptions) == SolveResult::Sat;
            prop_assert_eq!(got, brute_force(&f, &assumptions));
            if got {
                prop_assert!(f.satisfied_by(s.model()));
                prop_assert!(assumptions.iter().all(|l| l.eval(s.model())));
            }
        }
    }
}
