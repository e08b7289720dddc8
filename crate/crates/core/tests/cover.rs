mod common;

use std::collections::BTreeSet;

use minibmc::cover::{instrument_goals, replay_goals, Criterion, TestSuite};
use minibmc::eval::Value;
use minibmc::frontend::types::PlatformConfig;
use minibmc::goto::GotoModel;
use minibmc::instrument::CheckOptions;
use minibmc::interp::{self, InterpOptions};
use minibmc::pipeline::{build, cover};
use minibmc::symex::SymexOptions;

const STRAIGHT: &str = "int main()\n{\n  int x;\n  int y = x + 1;\n  y = y * 2;\n  return y;\n}\n";

const INFEASIBLE: &str = "unsigned char nondet_uchar();
int main()
{
  unsigned char x = nondet_uchar();
  int r = 0;
  if(x > 5 && x < 3)
    r = 1;
  if(x == 200 || x < 2)
    r = 2;
  else if(x >= 100)
    r = 3;
  return r;
}
";

const COVER_CALLS: &str = "unsigned char nondet_uchar();
int main()
{
  unsigned char x = nondet_uchar();
  __CPROVER_cover(x > 3);
  __CPROVER_cover(0);
  __CPROVER_cover(x == 17);
  return 0;
}
";

fn suite(src: &str, entry: &str, criterion: Criterion, bound: Option<u32>) -> (GotoModel, TestSuite, SymexOptions) {
    let mut model = build("t.c", src, &CheckOptions::default(), entry, &PlatformConfig::default()).unwrap();
    let goals = instrument_goals(&mut model, criterion);
    let mut opts = SymexOptions::default();
    opts.policy.global_bound = bound;
    let c = cover(&model, &goals, &opts).unwrap();
    (model, c.suite, opts)
}

fn covered(s: &TestSuite) -> BTreeSet<String> {
    s.goals
        .iter()
        .filter(|g| !g.covered_by.is_empty())
        .map(|g| g.goal.id.clone())
        .collect()
}

/// Goals reached by any run over all values of one unsigned char input.
fn reachable_by_enumeration(model: &GotoModel, opts: &SymexOptions) -> BTreeSet<String> {
    let iopts = InterpOptions {
        policy: opts.policy.clone(),
        cover_mode: true,
        ..InterpOptions::default()
    };
    let mut out = BTreeSet::new();
    for x in 0..256u64 {
        let mut source = |_: &minibmc::frontend::types::CType| Value::Scalar(x);
        let run = interp::run(model, &mut source, &iopts);
        out.extend(
            run.failures
                .into_iter()
                .filter(|f| f.class == minibmc::goto::PropertyClass::Coverage)
                .map(|f| f.id),
        );
    }
    out
}

#[test]
fn decision_branch_and_mcdc() {
    let src = common::read("decision.c");
    let (_, branch, _) = suite(&src, "main", Criterion::Branch, None);
    assert_eq!((branch.covered(), branch.total()), (2, 2));
    assert_eq!(branch.tests.len(), 2);
    let (_, mcdc, _) = suite(&src, "main", Criterion::Mcdc, None);
    assert_eq!(mcdc.tests.len(), 3);
    assert_eq!(mcdc.covered(), mcdc.total());
}

#[test]
fn tests_replay_to_their_claimed_goals() {
    let programs = [
        (common::read("decision.c"), "main", None),
        (common::read("pid.c"), "main", Some(3)),
        (common::read("binsearch.c"), "binsearch", Some(6)),
        (INFEASIBLE.to_string(), "main", None),
    ];
    for (src, entry, bound) in &programs {
        for c in [
            Criterion::Location,
            Criterion::Branch,
            Criterion::Condition,
            Criterion::Mcdc,
        ] {
            let (model, s, opts) = suite(src, entry, c, *bound);
            for (n, t) in s.tests.iter().enumerate() {
                let claimed: BTreeSet<String> = t.goals.iter().cloned().collect();
                assert_eq!(
                    replay_goals(&model, t, &opts.policy),
                    claimed,
                    "{entry} {c} test {}",
                    n + 1
                );
            }
        }
    }
}

#[test]
fn every_test_makes_progress() {
    for c in [
        Criterion::Location,
        Criterion::Branch,
        Criterion::Condition,
        Criterion::Mcdc,
    ] {
        let (_, s, _) = suite(&common::read("pid.c"), "main", c, Some(3));
        let mut seen = BTreeSet::new();
        for t in &s.tests {
            let before = seen.len();
            seen.extend(t.goals.iter().cloned());
            assert!(seen.len() > before, "{c}: a test covers nothing new");
        }
        assert_eq!(seen, covered(&s));
    }
}

#[test]
fn uncovered_goals_are_unreachable() {
    for c in [
        Criterion::Location,
        Criterion::Branch,
        Criterion::Condition,
        Criterion::Mcdc,
    ] {
        let (model, s, opts) = suite(INFEASIBLE, "main", c, None);
        assert_eq!(covered(&s), reachable_by_enumeration(&model, &opts), "{c}");
        if c != Criterion::Condition {
            assert!(
                s.covered() < s.total(),
                "{c}: the infeasible decision should leave a goal open"
            );
        }
    }
}

#[test]
fn mcdc_suite_reaches_every_branch_outcome() {
    for (src, entry, bound) in [
        (common::read("decision.c"), "main", None),
        (common::read("pid.c"), "main", Some(3)),
        (INFEASIBLE.to_string(), "main", None),
    ] {
        let (branch_model, branch, opts) = suite(&src, entry, Criterion::Branch, bound);
        let (_, mcdc, _) = suite(&src, entry, Criterion::Mcdc, bound);
        let mut reached = BTreeSet::new();
        for t in &mcdc.tests {
            reached.extend(replay_goals(&branch_model, t, &opts.policy));
        }
        assert!(covered(&branch).is_subset(&reached), "{entry}");
    }
}

#[test]
fn cover_calls() {
    let (model, s, opts) = suite(COVER_CALLS, "main", Criterion::Cover, None);
    assert_eq!(s.total(), 3);
    let open: Vec<_> = s.goals.iter().filter(|g| g.covered_by.is_empty()).collect();
    assert_eq!(open.len(), 1);
    assert_eq!(open[0].goal.id, s.goals[1].goal.id);
    assert_eq!(covered(&s), reachable_by_enumeration(&model, &opts));
}

#[test]
fn straight_line_location_needs_one_test() {
    let (_, s, _) = suite(STRAIGHT, "main", Criterion::Location, None);
    assert_eq!(s.tests.len(), 1);
    assert_eq!(s.covered(), s.total());
    assert!(s.total() >= 1);
}

#[test]
fn criteria_parse_and_print() {
    for c in [
        Criterion::Location,
        Criterion::Branch,
        Criterion::Condition,
        Criterion::Mcdc,
        Criterion::Cover,
    ] {
        assert_eq!(c.to_string().parse::<Criterion>().unwrap(), c);
    }
    assert!("path".parse::<Criterion>().is_err());
}
