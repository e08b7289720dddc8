#![allow(dead_code)]

use minibmc::sat::{CnfFormula, Lit, SolveResult, Solver};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn random_cnf(rng: &mut StdRng, vars: u32, clauses: usize, width: usize) -> CnfFormula {
    let mut f = CnfFormula::new();
    f.num_vars = vars;
    for _ in 0..clauses {
        let c = (0..width)
            .map(|_| Lit::new(rng.gen_range(0..vars), rng.gen_bool(0.5)))
            .collect();
        f.clauses.push(c);
    }
    f
}

/// Exhaustive satisfiability under a partial assignment.
pub fn brute_force(f: &CnfFormula, assumptions: &[Lit]) -> bool {
    let n = f.num_vars;
    let mut model = vec![false; n as usize];
    'outer: for bits in 0u64..(1 << n) {
        for v in 0..n {
            model[v as usize] = bits >> v & 1 == 1;
        }
        if !assumptions.iter().all(|l| l.eval(&model)) {
            continue;
        }
        for c in &f.clauses {
            if !c.iter().any(|l| l.eval(&model)) {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

pub fn load(f: &CnfFormula) -> Solver {
    let mut s = Solver::new();
    s.ensure_vars(f.num_vars);
    for c in &f.clauses {
        s.add_clause(c);
    }
    s
}

pub fn twenty_variable_instances_match_enumeration() {
    let mut rng = StdRng::seed_from_u64(7);
    for ratio in [80usize, 85, 91, 95, 100] {
        let f = random_cnf(&mut rng, 20, ratio, 3);
        let mut s = load(&f);
        let got = s.solve(&[]) == SolveResult::Sat;
        assert_eq!(got, brute_force(&f, &[]), "clauses {ratio}");
        if got {
            assert!(f.satisfied_by(s.model()));
        }
    }
}

pub fn small_instances_match_enumeration() {
    let mut rng = StdRng::seed_from_u64(11);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..300 {
        let vars = rng.gen_range(1..=10);
        let clauses = rng.gen_range(1..=50);
        let width = rng.gen_range(1..=4);
        let f = random_cnf(&mut rng, vars, clauses, width);
        let mut s = load(&f);
        let got = s.solve(&[]) == SolveResult::Sat;
        assert_eq!(got, brute_force(&f, &[]));
        if got {
            sat += 1;
            assert!(s.model_is_valid());
        } else {
            unsat += 1;
        }
    }
    assert!(sat > 20 && unsat > 20, "sat {sat} unsat {unsat}");
}

pub fn pigeonhole_is_unsat_and_matches_enumeration() {
    let var = |p: u32, h: u32| p * 3 + h;
    let mut f = CnfFormula::new();
    f.num_vars = 12;
    for p in 0..4 {
        f.clauses.push((0..3).map(|h| Lit::positive(var(p, h))).collect());
    }
    for h in 0..3 {
        for p in 0..4 {
            for q in p + 1..4 {
                f.clauses
                    .push(vec![!Lit::positive(var(p, h)), !Lit::positive(var(q, h))]);
            }
        }
    }
    assert!(!brute_force(&f, &[]));
    assert_eq!(load(&f).solve(&[]), SolveResult::Unsat);
}

pub fn identical_inputs_give_identical_runs() {
    let mut rng = StdRng::seed_from_u64(3);
    let f = random_cnf(&mut rng, 60, 255, 3);
    let mut a = load(&f);
    let mut b = load(&f);
    let ra = a.solve(&[]);
    let rb = b.solve(&[]);
    assert_eq!(ra, rb);
    assert_eq!(a.model(), b.model());
    assert_eq!(a.stats.conflicts, b.stats.conflicts);
    assert_eq!(a.stats.decisions, b.stats.decisions);
}
