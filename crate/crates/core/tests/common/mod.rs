#![allow(dead_code)]

use std::path::{Path, PathBuf};

use minibmc::cli::main_with;

pub fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap()
}

pub struct CliRun {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line driver in process.
pub fn cli<S: AsRef<str>>(args: &[S]) -> CliRun {
    let mut argv = vec!["minibmc".to_string()];
    argv.extend(args.iter().map(|a| a.as_ref().to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(argv, &mut std::io::empty(), &mut out, &mut err);
    CliRun {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// `[id] ...: STATUS` lines of a plain report, in order.
pub fn statuses(report: &str) -> Vec<(String, String)> {
    report
        .lines()
        .filter_map(|l| {
            let rest = l.strip_prefix('[')?;
            let (id, tail) = rest.split_once(']')?;
            let (_, status) = tail.rsplit_once(": ")?;
            matches!(status, "SUCCESS" | "FAILURE" | "SATISFIED" | "FAILED")
                .then(|| (id.to_string(), status.to_string()))
        })
        .collect()
}

pub fn verdict(report: &str) -> Option<&'static str> {
    if report.contains("VERIFICATION SUCCESSFUL") {
        Some("SUCCESSFUL")
    } else if report.contains("VERIFICATION FAILED") {
        Some("FAILED")
    } else {
        None
    }
}

pub struct Split {
    pub name: String,
    pub parts: Vec<PathBuf>,
    pub configurations: Vec<Vec<String>>,
}

pub fn splits() -> Vec<Split> {
    let mut dirs: Vec<_> = std::fs::read_dir(corpus("split"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    dirs.into_iter()
        .map(|d| {
            let mut parts: Vec<_> = std::fs::read_dir(&d)
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.extension().is_some_and(|x| x == "c"))
                .collect();
            parts.sort();
            let configurations = std::fs::read_to_string(d.join("args"))
                .unwrap()
                .lines()
                .map(|l| l.split_whitespace().map(str::to_string).collect())
                .collect();
            Split {
                name: d.file_name().unwrap().to_string_lossy().into_owned(),
                parts,
                configurations,
            }
        })
        .collect()
}

/// Runs a split both as separate files and as one concatenated file and
/// returns both reports' verdicts and statuses.
pub type Outcome = (i32, Vec<(String, String)>);

pub fn compare_split(split: &Split, flags: &[String], dir: &Path) -> (Outcome, Outcome) {
    let whole = dir.join(format!("{}.c", split.name));
    let text: String = split
        .parts
        .iter()
        .map(|p| std::fs::read_to_string(p).unwrap() + "\n")
        .collect();
    std::fs::write(&whole, text).unwrap();
    let run = |files: Vec<String>| {
        let mut args = flags.to_vec();
        args.extend(files);
        let r = cli(&args);
        assert!(r.stderr.is_empty() || r.code != 1, "{}: {}", split.name, r.stderr);
        (r.code, statuses(&r.stdout))
    };
    let separate = run(split.parts.iter().map(|p| p.display().to_string()).collect());
    let joined = run(vec![whole.display().to_string()]);
    (separate, joined)
}
