//! Drives the stages for one command line.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use crate::cover::{self, TestSuite};
use crate::encode::{emit_dimacs, encode};
use crate::frontend::parse_source;
use crate::goto::link::link;
use crate::goto::pretty::{show_goto_functions, show_loop_ids};
use crate::goto::serialize::{is_model_file, read_file, write_file};
use crate::goto::GotoModel;
use crate::instrument::{enumerate_properties, CheckOptions};
use crate::pipeline::{compile_unit, prepare};
use crate::results::report;
use crate::results::{decide_properties, DecideError, VerificationResult};
use crate::symex::vcc::show_vcc;
use crate::symex::{symex, SymexError, SymexOptions};

use super::args::{
    json_interface_arguments, parse_args, xml_interface_arguments, Dump, Interface, Parsed, RunConfig, Ui,
};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INTERNAL: i32 = 6;
pub const EXIT_FAILED: i32 = 10;

struct Console<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    verbosity: u8,
    quiet: bool,
}

impl Console<'_> {
    fn status(&mut self, level: u8, msg: impl AsRef<str>) {
        if !self.quiet && self.verbosity >= level {
            let _ = writeln!(self.out, "{}", msg.as_ref());
        }
    }

    fn print(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }

    fn error(&mut self, msg: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", msg.as_ref());
    }
}

/// Entry point of the `minibmc` binary; returns the exit code.
pub fn main_with(argv: Vec<String>, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match parse_args(argv.clone()) {
        Parsed::Run(c) => c,
        Parsed::Info(text) => {
            let _ = out.write_all(text.as_bytes());
            return EXIT_SUCCESS;
        }
        Parsed::Usage(text) => {
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    let Some(interface) = cfg.interface else {
        return execute(&cfg, out, err);
    };
    let mut doc = String::new();
    if let Err(e) = stdin.read_to_string(&mut doc) {
        let _ = writeln!(err, "cannot read interface document: {e}");
        return EXIT_USAGE;
    }
    let extra = match interface {
        Interface::Json => json_interface_arguments(&doc),
        Interface::Xml => xml_interface_arguments(&doc),
    };
    let extra = match extra {
        Ok(a) => a,
        Err(m) => {
            let _ = writeln!(err, "{m}");
            return EXIT_USAGE;
        }
    };
    let mut full: Vec<String> = argv
        .into_iter()
        .filter(|a| a != "--json-interface" && a != "--xml-interface")
        .collect();
    full.extend(extra);
    match parse_args(full) {
        Parsed::Run(c) => execute(&c, out, err),
        Parsed::Info(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_SUCCESS
        }
        Parsed::Usage(text) => {
            let _ = err.write_all(text.as_bytes());
            EXIT_USAGE
        }
    }
}

fn module_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Compiles or loads every input and links the results.
fn load(cfg: &RunConfig, con: &mut Console) -> Result<GotoModel, i32> {
    let mut units = Vec::new();
    for path in &cfg.sources {
        let bytes = std::fs::read(path).map_err(|e| {
            con.error(format!("failed to open input file `{}': {e}", path.display()));
            EXIT_USAGE
        })?;
        if is_model_file(&bytes) {
            con.status(6, format!("Reading GOTO program from file {}", path.display()));
            units.push(read_file(path).map_err(|e| {
                con.error(e.to_string());
                EXIT_USAGE
            })?);
            continue;
        }
        let name = path.to_string_lossy().into_owned();
        let text = String::from_utf8_lossy(&bytes).into_owned();
        con.status(6, format!("Parsing {name}"));
        if cfg.dumps.contains(&Dump::ParseTree) {
            match parse_source(&name, &text, &cfg.preprocess) {
                Ok(tu) => con.print(&tu.dump()),
                Err(e) => {
                    con.error(e.to_string());
                    con.error("PARSING ERROR");
                    return Err(EXIT_USAGE);
                }
            }
            continue;
        }
        con.status(6, "Converting");
        con.status(6, format!("Type-checking {}", module_name(path)));
        units.push(compile_unit(&name, &text, &cfg.preprocess, &cfg.platform).map_err(|e| {
            con.error(e.to_string());
            con.error("CONVERSION ERROR");
            EXIT_USAGE
        })?);
    }
    if cfg.dumps.contains(&Dump::ParseTree) {
        return Err(EXIT_SUCCESS);
    }
    if units.len() > 1 {
        con.status(6, "Linking");
    }
    link(units).map_err(|e| {
        con.error(e.to_string());
        con.error("LINKING ERROR");
        EXIT_USAGE
    })
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut con = Console {
        out,
        err,
        verbosity: cfg.verbosity,
        quiet: cfg.ui != Ui::Plain || !cfg.dumps.is_empty(),
    };
    match run_stages(cfg, &mut con) {
        Ok(code) | Err(code) => code,
    }
}

fn run_stages(cfg: &RunConfig, con: &mut Console) -> Result<i32, i32> {
    for w in &cfg.warnings {
        con.error(format!("warning: {w}"));
    }
    con.status(
        6,
        format!(
            "minibmc version {} {}-bit",
            env!("CARGO_PKG_VERSION"),
            cfg.platform.pointer_width
        ),
    );
    let model = load(cfg, con)?;
    if let Some(path) = &cfg.compile_only {
        write_file(path, &model).map_err(|e| {
            con.error(e.to_string());
            EXIT_USAGE
        })?;
        return Ok(EXIT_SUCCESS);
    }
    con.status(6, "Generating GOTO Program");
    if cfg.dumps.contains(&Dump::SymbolTable) {
        con.print(&model.symtab.dump());
        return Ok(EXIT_SUCCESS);
    }
    con.status(6, "Removal of function pointers and virtual functions");
    con.status(6, "Generic Property Instrumentation");
    let checks = if cfg.cover.is_some() {
        CheckOptions::default()
    } else {
        cfg.checks
    };
    let mut model = prepare(model, &checks, &cfg.entry, &cfg.platform).map_err(|e| {
        con.error(e.to_string());
        EXIT_USAGE
    })?;
    let goals = cfg.cover.map(|c| {
        con.status(6, format!("Instrumenting coverage goals ({c})"));
        cover::instrument_goals(&mut model, c)
    });
    let mut dumped = false;
    if cfg.dumps.contains(&Dump::GotoFunctions) {
        con.print(&show_goto_functions(&model));
        dumped = true;
    }
    if cfg.dumps.contains(&Dump::LoopIds) {
        con.print(&show_loop_ids(&model));
        dumped = true;
    }
    if cfg.dumps.contains(&Dump::Properties) {
        con.print(&report::show_properties(&enumerate_properties(&model)));
        dumped = true;
    }
    if dumped && !cfg.dumps.iter().any(|d| matches!(d, Dump::Vcc | Dump::Dimacs)) {
        return Ok(EXIT_SUCCESS);
    }

    let opts = SymexOptions {
        policy: cfg.unwind.clone(),
        no_assumptions: cfg.no_assumptions,
        cover_mode: goals.is_some(),
        no_library: cfg.no_library,
        slice: cfg.slice,
    };
    con.status(6, "Starting Bounded Model Checking");
    let start = Instant::now();
    let eq = symex(&model, &opts).map_err(|e| {
        con.error(e.to_string());
        match e {
            SymexError::Unbounded { .. } | SymexError::Malformed(_) => EXIT_INTERNAL,
        }
    })?;
    con.status(
        6,
        format!("size of program expression: {} steps", eq.steps_before_slicing),
    );
    con.status(
        6,
        format!("simple slicing removed {} assignments", eq.sliced_assignments),
    );
    con.status(
        6,
        format!(
            "Generated {} VCC(s), {} remaining after simplification",
            eq.vccs_generated, eq.vccs_remaining
        ),
    );
    if cfg.dumps.contains(&Dump::Vcc) {
        con.print(&show_vcc(&eq));
        if !cfg.dumps.contains(&Dump::Dimacs) {
            return Ok(EXIT_SUCCESS);
        }
    }
    if eq.vccs_remaining > 0 || goals.is_some() {
        con.status(6, "Passing problem to propositional reduction");
        con.status(6, "converting SSA");
    }
    let enc = encode(&eq);
    if cfg.dumps.contains(&Dump::Dimacs) {
        con.print(&emit_dimacs(&enc));
        return Ok(EXIT_SUCCESS);
    }
    if eq.vccs_remaining > 0 || goals.is_some() {
        con.status(6, "Running propositional reduction");
        con.status(6, "Post-processing");
        con.status(6, "Solving with minibmc CDCL");
        con.status(
            8,
            format!("{} variables, {} clauses", enc.cnf().num_vars, enc.cnf().clauses.len()),
        );
    }
    if let Some(goals) = goals {
        let suite = cover::generate_tests(&eq, &enc, &goals).map_err(|e| internal(con, e))?;
        con.status(
            8,
            format!("Runtime decision procedure: {}s", start.elapsed().as_secs_f64()),
        );
        print_suite(cfg, con, &suite);
        return Ok(EXIT_SUCCESS);
    }
    let result = decide_properties(&eq, &enc).map_err(|e| internal(con, e))?;
    if eq.vccs_remaining > 0 {
        let verdict = if result.failed() > 0 {
            "SATISFIABLE"
        } else {
            "UNSATISFIABLE"
        };
        con.status(6, format!("SAT checker: instance is {verdict}"));
        con.status(
            8,
            format!("Runtime decision procedure: {}s", result.solve_time.as_secs_f64()),
        );
    }
    print_result(cfg, con, &result);
    Ok(if result.successful() { EXIT_SUCCESS } else { EXIT_FAILED })
}

fn internal(con: &mut Console, e: DecideError) -> i32 {
    con.error(format!("internal error: {e}"));
    EXIT_INTERNAL
}

fn print_result(cfg: &RunConfig, con: &mut Console, result: &VerificationResult) {
    match cfg.ui {
        Ui::Plain => con.print(&report::plain(result, cfg.trace)),
        Ui::Json => {
            let text = serde_json::to_string_pretty(&report::json(result)).unwrap_or_default();
            con.print(&text);
            con.print("\n");
        }
        Ui::Xml => con.print(&report::xml(result)),
    }
}

fn suite_xml(suite: &TestSuite) -> String {
    use report::xml_escape;
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<cprover>\n");
    for g in &suite.goals {
        let status = if g.covered_by.is_empty() { "FAILED" } else { "SATISFIED" };
        let _ = writeln!(
            out,
            "<goal id=\"{}\" description=\"{}\" status=\"{status}\"/>",
            xml_escape(&g.goal.id),
            xml_escape(&g.goal.description)
        );
    }
    for t in &suite.tests {
        out.push_str("<test>\n");
        for g in &t.goals {
            let _ = writeln!(out, "<covered goal=\"{}\"/>", xml_escape(g));
        }
        for (k, it) in t.iterations.iter().enumerate() {
            let _ = writeln!(out, "<iteration number=\"{}\">", k + 1);
            for i in it {
                let values: Vec<String> = i
                    .values
                    .iter()
                    .map(|(v, ty)| crate::results::render::short_value(v, ty))
                    .collect();
                let _ = writeln!(
                    out,
                    "<input id=\"{}\">{}</input>",
                    xml_escape(&i.name),
                    xml_escape(&values.join(" "))
                );
            }
            out.push_str("</iteration>\n");
        }
        out.push_str("</test>\n");
    }
    let _ = writeln!(
        out,
        "<summary covered=\"{}\" total=\"{}\" iterations=\"{}\"/>\n</cprover>",
        suite.covered(),
        suite.total(),
        suite.iterations
    );
    out
}

fn print_suite(cfg: &RunConfig, con: &mut Console, suite: &TestSuite) {
    match cfg.ui {
        Ui::Plain => {
            con.print(&cover::goals_text(suite));
            con.print(&cover::suite_text(suite));
        }
        Ui::Json => {
            let text = serde_json::to_string_pretty(&cover::suite_json(suite)).unwrap_or_default();
            con.print(&text);
            con.print("\n");
        }
        Ui::Xml => con.print(&suite_xml(suite)),
    }
}

/// Entry point of the `minibmc-link` binary.
pub fn link_main(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut inputs = Vec::new();
    let mut output = None;
    let mut it = argv.into_iter().skip(1);
    while let Some(a) = it.next() {
        match a.as_str() {
            "-o" => output = it.next(),
            "-h" | "--help" | "-?" => {
                let _ = writeln!(out, "usage: minibmc-link a.gb b.gb ... -o out.gb");
                return EXIT_SUCCESS;
            }
            s if s.starts_with('-') => {
                let _ = writeln!(err, "unknown option `{s}'\nusage: minibmc-link a.gb b.gb ... -o out.gb");
                return EXIT_USAGE;
            }
            _ => inputs.push(a),
        }
    }
    let (Some(output), false) = (output, inputs.is_empty()) else {
        let _ = writeln!(err, "usage: minibmc-link a.gb b.gb ... -o out.gb");
        return EXIT_USAGE;
    };
    let mut models = Vec::new();
    for i in &inputs {
        match read_file(Path::new(i)) {
            Ok(m) => models.push(m),
            Err(e) => {
                let _ = writeln!(err, "{e}");
                return EXIT_USAGE;
            }
        }
    }
    let linked = match link(models) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    match write_file(Path::new(&output), &linked) {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_USAGE
        }
    }
}
