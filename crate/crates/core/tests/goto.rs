mod common;

use minibmc::frontend::types::PlatformConfig;
use minibmc::frontend::PreprocessOptions;
use minibmc::goto::link::link;
use minibmc::goto::pretty::{show_goto_functions, show_loop_ids};
use minibmc::goto::serialize::{deserialize, is_model_file, serialize};
use minibmc::instrument::CheckOptions;
use minibmc::pipeline::{build, compile_unit, prepare, verify};
use minibmc::symex::SymexOptions;

const PROGRAMS: [(&str, &str); 9] = [
    ("abs.c", "abs"),
    ("binsearch.c", "binsearch"),
    ("lock.c", "main"),
    ("login.c", "main"),
    ("assume_before.c", "one_to_hundred"),
    ("assume_after.c", "one_to_hundred"),
    ("assume_quantifier.c", "main"),
    ("for_loop.c", "main"),
    ("pid.c", "main"),
];

fn all_checks() -> CheckOptions {
    CheckOptions {
        bounds_check: true,
        signed_overflow_check: true,
        unsigned_overflow_check: true,
        div_by_zero_check: true,
        undefined_shift_check: true,
        conversion_check: true,
    }
}

#[test]
fn corpus_models_are_well_formed() {
    let cfg = PlatformConfig::default();
    for (file, entry) in PROGRAMS {
        let model =
            build(file, &common::read(file), &all_checks(), entry, &cfg).unwrap_or_else(|e| panic!("{file}: {e}"));
        model.check_well_formed().unwrap();
        let text = show_goto_functions(&model);
        assert_eq!(
            text.matches("END_FUNCTION").count(),
            model.functions.values().filter(|f| f.body.is_some()).count(),
            "{file}"
        );
    }
}

#[test]
fn model_files_round_trip() {
    let cfg = PlatformConfig::default();
    for (file, _) in PROGRAMS {
        let model = compile_unit(file, &common::read(file), &PreprocessOptions::default(), &cfg).unwrap();
        let bytes = serialize(&model);
        assert!(is_model_file(&bytes));
        let back = deserialize(&bytes).unwrap();
        assert_eq!(back, model, "{file}");
        assert_eq!(show_goto_functions(&back), show_goto_functions(&model));
    }
    assert!(deserialize(b"GBF9rest").is_err());
    assert!(deserialize(b"ELF").is_err());
    assert!(deserialize(b"GBF1\xff\xff").is_err());
}

#[test]
fn loop_ids_count_loops_per_function() {
    let cfg = PlatformConfig::default();
    let src = "int main() { int s = 0; for (int i = 0; i < 3; i++) { for (int j = 0; j < 2; j++) s++; } while (s > 0) s--; return s; }\nvoid f() { int k = 0; do k++; while (k < 4); }\n";
    let model = build("loops.c", src, &CheckOptions::default(), "main", &cfg).unwrap();
    let ids = show_loop_ids(&model);
    for id in ["Loop main.0:", "Loop main.1:", "Loop main.2:", "Loop f.0:"] {
        assert!(ids.contains(id), "{id} missing:\n{ids}");
    }
    assert!(!ids.contains("Loop main.3:"));
}

#[test]
fn linking_rejects_conflicts() {
    let cfg = PlatformConfig::default();
    let pp = PreprocessOptions::default();
    let unit = |name: &str, text: &str| compile_unit(name, text, &pp, &cfg).unwrap();
    let a = unit("a.c", "int f(int x) { return x; }\n");
    let b = unit("b.c", "int f(int x) { return x + 1; }\n");
    assert!(link(vec![a.clone(), b]).is_err());
    let c = unit("c.c", "long f(int x);\nint main() { return 0; }\n");
    assert!(link(vec![a.clone(), c]).is_err());
    let d = unit("d.c", "int g = 1;\n");
    let e = unit("e.c", "int g = 2;\n");
    assert!(link(vec![d.clone(), e]).is_err());
    let f = unit("f.c", "extern int g;\nint main() { assert(g == 1); return 0; }\n");
    let linked = link(vec![f, d]).unwrap();
    let model = prepare(linked, &CheckOptions::default(), "main", &cfg).unwrap();
    let v = verify(&model, &SymexOptions::default()).unwrap();
    assert!(v.result.successful());
}

#[test]
fn missing_entry_point_is_reported() {
    let cfg = PlatformConfig::default();
    let err = build("abs.c", &common::read("abs.c"), &CheckOptions::default(), "main", &cfg)
        .err()
        .unwrap();
    assert!(err.to_string().contains("main"), "{err}");
}
