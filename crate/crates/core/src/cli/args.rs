//! Command-line options.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{ArgAction, CommandFactory, Parser};

use crate::cover::Criterion;
use crate::frontend::types::{Endianness, PlatformConfig};
use crate::frontend::PreprocessOptions;
use crate::instrument::CheckOptions;
use crate::symex::{UnwindMode, UnwindPolicy};

#[derive(Parser, Debug, Default)]
#[command(
    name = "minibmc",
    version,
    about = "Bounded model checker for a subset of C",
    disable_help_flag = true,
    override_usage = "minibmc [options ...] [file.c | file.gb ...]"
)]
struct Args {
    /// Display this help text
    #[arg(short = 'h', long = "help", action = ArgAction::Help)]
    help: Option<bool>,

    /// Source files (.c) or model files (.gb)
    #[arg(value_name = "FILE")]
    files: Vec<PathBuf>,

    /// Use function f as program entry point
    #[arg(long, value_name = "f", help_heading = "Front end")]
    function: Option<String>,
    /// Add directory to the include search path
    #[arg(short = 'I', value_name = "dir", help_heading = "Front end")]
    include: Vec<PathBuf>,
    /// Define a preprocessor macro
    #[arg(short = 'D', value_name = "macro", help_heading = "Front end")]
    define: Vec<String>,

    /// Set the width of int to 16 bits
    #[arg(long = "16", help_heading = "Platform")]
    w16: bool,
    /// Set the width of int to 32 bits
    #[arg(long = "32", help_heading = "Platform")]
    w32: bool,
    /// Set the width of int to 64 bits
    #[arg(long = "64", help_heading = "Platform")]
    w64: bool,
    /// 64-bit long and pointers, 32-bit int
    #[arg(long = "LP64", help_heading = "Platform")]
    lp64: bool,
    /// 64-bit int, long and pointers
    #[arg(long = "ILP64", help_heading = "Platform")]
    ilp64: bool,
    /// 64-bit pointers, 32-bit int and long
    #[arg(long = "LLP64", help_heading = "Platform")]
    llp64: bool,
    /// 32-bit int, long and pointers
    #[arg(long = "ILP32", help_heading = "Platform")]
    ilp32: bool,
    /// 16-bit int, 32-bit long and pointers
    #[arg(long = "LP32", help_heading = "Platform")]
    lp32: bool,
    /// Little-endian byte order
    #[arg(long, conflicts_with = "big_endian", help_heading = "Platform")]
    little_endian: bool,
    /// Big-endian byte order
    #[arg(long, help_heading = "Platform")]
    big_endian: bool,
    /// Make char unsigned
    #[arg(long, help_heading = "Platform")]
    unsigned_char: bool,
    #[arg(long, hide = true)]
    i386_linux: bool,
    #[arg(long, hide = true)]
    i386_macos: bool,
    #[arg(long, hide = true)]
    ppc_macos: bool,
    #[arg(long, hide = true)]
    i386_win32: bool,
    #[arg(long, hide = true)]
    win32: bool,
    #[arg(long, hide = true)]
    winx64: bool,

    /// Check array indexes against the array bounds
    #[arg(long, help_heading = "Checks")]
    bounds_check: bool,
    /// Accepted for compatibility; pointers are limited to function pointers
    #[arg(long, help_heading = "Checks")]
    pointer_check: bool,
    /// Check for division by zero
    #[arg(long, help_heading = "Checks")]
    div_by_zero_check: bool,
    /// Check signed arithmetic for overflow
    #[arg(long, help_heading = "Checks")]
    signed_overflow_check: bool,
    /// Check unsigned arithmetic for wrap-around
    #[arg(long, help_heading = "Checks")]
    unsigned_overflow_check: bool,
    /// Check conversions for lost values
    #[arg(long, help_heading = "Checks")]
    conversion_check: bool,
    /// Check shift distances and operands
    #[arg(long, help_heading = "Checks")]
    undefined_shift_check: bool,

    /// Unwind every loop k times
    #[arg(long, value_name = "k", help_heading = "Symbolic execution")]
    unwind: Option<u32>,
    /// Per-loop bounds, e.g. main.0:5,f.1:3
    #[arg(long, value_name = "L:k,...", help_heading = "Symbolic execution")]
    unwindset: Vec<String>,
    /// Check that the bounds suffice
    #[arg(long, conflicts_with_all = ["partial_loops", "cover"], help_heading = "Symbolic execution")]
    unwinding_assertions: bool,
    /// Continue past the bound without any check
    #[arg(long, help_heading = "Symbolic execution")]
    partial_loops: bool,
    /// Limit the number of steps along any path
    #[arg(long, value_name = "k", help_heading = "Symbolic execution")]
    depth: Option<usize>,
    /// Ignore user assumptions
    #[arg(long, help_heading = "Symbolic execution")]
    no_assumptions: bool,
    /// Do not model library functions
    #[arg(long, help_heading = "Symbolic execution")]
    no_library: bool,
    /// Keep every step of the equation
    #[arg(long, help_heading = "Symbolic execution")]
    no_slicing: bool,

    /// Print the parse tree
    #[arg(long, help_heading = "Output")]
    show_parse_tree: bool,
    /// Print the symbol table
    #[arg(long, help_heading = "Output")]
    show_symbol_table: bool,
    /// Print the GOTO program
    #[arg(long, help_heading = "Output")]
    show_goto_functions: bool,
    /// Print the loop identifiers
    #[arg(long, help_heading = "Output")]
    show_loop_ids: bool,
    /// Print the properties to be checked
    #[arg(long, help_heading = "Output")]
    show_properties: bool,
    /// Print the verification conditions
    #[arg(long, help_heading = "Output")]
    show_vcc: bool,
    /// Print the CNF formula and stop
    #[arg(long, help_heading = "Output")]
    dimacs: bool,
    /// Print a counterexample for every failed property
    #[arg(long, help_heading = "Output")]
    trace: bool,
    /// Report in JSON
    #[arg(long, conflicts_with = "xml_ui", help_heading = "Output")]
    json_ui: bool,
    /// Report in XML
    #[arg(long, help_heading = "Output")]
    xml_ui: bool,
    /// Message level, 0 to 10
    #[arg(long, value_name = "n", default_value_t = 8,
          value_parser = clap::value_parser!(u8).range(0..=10), help_heading = "Output")]
    verbosity: u8,

    /// Generate a test suite: location, branch, condition, mcdc or cover
    #[arg(long, value_name = "C", value_parser = parse_criterion, help_heading = "Test generation")]
    cover: Option<Criterion>,

    /// Only compile and link the inputs into a model file
    #[arg(long, requires = "output", help_heading = "Model files")]
    compile_only: bool,
    /// Model file written by --compile-only
    #[arg(short = 'o', value_name = "file", help_heading = "Model files")]
    output: Option<PathBuf>,

    /// Read the arguments as a JSON document from standard input
    #[arg(long, hide = true)]
    json_interface: bool,
    /// Read the arguments as an XML document from standard input
    #[arg(long, hide = true)]
    xml_interface: bool,
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dump {
    ParseTree,
    SymbolTable,
    GotoFunctions,
    LoopIds,
    Properties,
    Vcc,
    Dimacs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Ui {
    #[default]
    Plain,
    Json,
    Xml,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interface {
    Json,
    Xml,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub sources: Vec<PathBuf>,
    pub entry: String,
    pub platform: PlatformConfig,
    pub preprocess: PreprocessOptions,
    pub checks: CheckOptions,
    pub unwind: UnwindPolicy,
    pub dumps: BTreeSet<Dump>,
    pub ui: Ui,
    pub trace: bool,
    pub cover: Option<Criterion>,
    pub verbosity: u8,
    pub no_assumptions: bool,
    pub no_library: bool,
    pub slice: bool,
    /// Write the linked model here instead of verifying.
    pub compile_only: Option<PathBuf>,
    pub interface: Option<Interface>,
    pub warnings: Vec<String>,
}

/// What the command line asks for.
#[derive(Debug)]
pub enum Parsed {
    Run(Box<RunConfig>),
    /// Help or version text; exit 0.
    Info(String),
    /// Usage error; exit 1.
    Usage(String),
}

pub fn usage() -> String {
    Args::command().render_help().to_string()
}

fn parse_unwindset(items: &[String], policy: &mut UnwindPolicy) -> Result<(), String> {
    for item in items.iter().flat_map(|s| s.split(',')).filter(|s| !s.is_empty()) {
        let (loop_id, bound) = item
            .rsplit_once(':')
            .ok_or_else(|| format!("malformed --unwindset entry `{item}'"))?;
        let bound: u32 = bound
            .parse()
            .map_err(|_| format!("malformed bound in --unwindset entry `{item}'"))?;
        let valid = loop_id
            .rsplit_once('.')
            .is_some_and(|(f, n)| !f.is_empty() && n.parse::<usize>().is_ok());
        if !valid {
            return Err(format!("loop id `{loop_id}' is not of the form function.number"));
        }
        policy.per_loop.insert(loop_id.to_string(), bound);
    }
    Ok(())
}

fn platform(a: &Args, warnings: &mut Vec<String>) -> PlatformConfig {
    let mut cfg = PlatformConfig::lp64();
    for (set, preset, name) in [
        (a.i386_linux, PlatformConfig::ilp32(), "--i386-linux"),
        (a.i386_macos, PlatformConfig::ilp32(), "--i386-macos"),
        (a.ppc_macos, PlatformConfig::ilp32(), "--ppc-macos"),
        (a.i386_win32, PlatformConfig::ilp32(), "--i386-win32"),
        (a.win32, PlatformConfig::ilp32(), "--win32"),
        (a.winx64, PlatformConfig::llp64(), "--winx64"),
    ] {
        if set {
            cfg = preset;
            warnings.push(format!(
                "{name} only sets type widths; OS-specific definitions are not modelled"
            ));
        }
    }
    if a.ppc_macos {
        cfg.endianness = Endianness::Big;
    }
    for (set, preset) in [
        (a.lp64, PlatformConfig::lp64()),
        (a.ilp64, PlatformConfig::ilp64()),
        (a.llp64, PlatformConfig::llp64()),
        (a.ilp32, PlatformConfig::ilp32()),
        (a.lp32, PlatformConfig::lp32()),
    ] {
        if set {
            cfg = preset;
        }
    }
    for (set, width) in [(a.w16, 16), (a.w32, 32), (a.w64, 64)] {
        if set {
            cfg.set_int_width(width);
        }
    }
    if a.little_endian {
        cfg.endianness = Endianness::Little;
    }
    if a.big_endian {
        cfg.endianness = Endianness::Big;
    }
    if a.unsigned_char {
        cfg.char_signed = false;
    }
    cfg
}

pub fn parse_args<I, T>(argv: I) -> Parsed
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(Into::into)
        .map(|a| if a == "-?" { "--help".to_string() } else { a })
        .collect();
    let a = match Args::try_parse_from(&argv) {
        Ok(a) => a,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Parsed::Info(e.render().to_string())
                }
                _ => Parsed::Usage(e.render().to_string()),
            }
        }
    };
    let interface = if a.json_interface {
        Some(Interface::Json)
    } else if a.xml_interface {
        Some(Interface::Xml)
    } else {
        None
    };
    if a.files.is_empty() && interface.is_none() {
        return Parsed::Usage(format!("error: no input files\n\n{}", usage()));
    }
    let mut warnings = Vec::new();
    if a.pointer_check {
        warnings.push("--pointer-check has no effect: the only pointers are function pointers".to_string());
    }
    let platform = platform(&a, &mut warnings);
    let mut unwind = UnwindPolicy {
        global_bound: a.unwind,
        depth: a.depth,
        ..UnwindPolicy::default()
    };
    if let Err(m) = parse_unwindset(&a.unwindset, &mut unwind) {
        return Parsed::Usage(format!("error: {m}\n"));
    }
    unwind.mode = if a.unwinding_assertions {
        UnwindMode::Assertions
    } else if a.partial_loops {
        UnwindMode::PartialLoops
    } else {
        UnwindMode::Assumptions
    };
    let defines = a
        .define
        .iter()
        .map(|d| match d.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => (d.clone(), "1".to_string()),
        })
        .collect();
    let mut dumps = BTreeSet::new();
    for (set, d) in [
        (a.show_parse_tree, Dump::ParseTree),
        (a.show_symbol_table, Dump::SymbolTable),
        (a.show_goto_functions, Dump::GotoFunctions),
        (a.show_loop_ids, Dump::LoopIds),
        (a.show_properties, Dump::Properties),
        (a.show_vcc, Dump::Vcc),
        (a.dimacs, Dump::Dimacs),
    ] {
        if set {
            dumps.insert(d);
        }
    }
    let ui = if a.json_ui {
        Ui::Json
    } else if a.xml_ui {
        Ui::Xml
    } else {
        Ui::Plain
    };
    Parsed::Run(Box::new(RunConfig {
        sources: a.files,
        entry: a.function.unwrap_or_else(|| "main".to_string()),
        platform,
        preprocess: PreprocessOptions {
            include_dirs: a.include,
            defines,
            ..PreprocessOptions::default()
        },
        checks: CheckOptions {
            bounds_check: a.bounds_check,
            signed_overflow_check: a.signed_overflow_check,
            unsigned_overflow_check: a.unsigned_overflow_check,
            div_by_zero_check: a.div_by_zero_check,
            undefined_shift_check: a.undefined_shift_check,
            conversion_check: a.conversion_check,
        },
        unwind,
        dumps,
        ui,
        trace: a.trace,
        cover: a.cover,
        verbosity: a.verbosity,
        no_assumptions: a.no_assumptions,
        no_library: a.no_library,
        slice: !a.no_slicing,
        compile_only: if a.compile_only { a.output } else { None },
        interface,
        warnings,
    }))
}

/// Arguments from a `--json-interface` document: `{"arguments": [...]}`.
pub fn json_interface_arguments(text: &str) -> Result<Vec<String>, String> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("malformed JSON interface document: {e}"))?;
    let args = doc
        .get("arguments")
        .and_then(|a| a.as_array())
        .ok_or("JSON interface document lacks an `arguments' array")?;
    args.iter()
        .map(|a| {
            a.as_str()
                .map(str::to_string)
                .ok_or_else(|| "arguments must be strings".to_string())
        })
        .collect()
}

/// Arguments from an `--xml-interface` document: `<argument>` elements.
pub fn xml_interface_arguments(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find("<argument>") {
        rest = &rest[start + "<argument>".len()..];
        let end = rest.find("</argument>").ok_or("unterminated <argument> element")?;
        let raw = &rest[..end];
        out.push(
            raw.replace("&lt;", "<")
                .replace("&gt;", ">")
                .replace("&quot;", "\"")
                .replace("&apos;", "'")
                .replace("&amp;", "&"),
        );
        rest = &rest[end..];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> RunConfig {
        let mut argv = vec!["minibmc"];
        argv.extend(args);
        match parse_args(argv) {
            Parsed::Run(c) => *c,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abs_command() {
        let c = run(&["--function", "abs", "--signed-overflow-check", "abs.c"]);
        assert_eq!(c.entry, "abs");
        assert!(c.checks.signed_overflow_check);
        assert!(!c.checks.bounds_check);
        assert_eq!(c.sources, vec![PathBuf::from("abs.c")]);
    }

    #[test]
    fn unwinding_flags() {
        let c = run(&[
            "b.c",
            "--unwind",
            "6",
            "--unwinding-assertions",
            "--unwindset",
            "main.0:3,f.1:2",
        ]);
        assert_eq!(c.unwind.global_bound, Some(6));
        assert_eq!(c.unwind.mode, UnwindMode::Assertions);
        assert_eq!(c.unwind.bound("main", 0), Some(3));
        assert_eq!(c.unwind.bound("f", 1), Some(2));
        assert_eq!(c.unwind.bound("g", 0), Some(6));
    }

    #[test]
    fn widths() {
        assert_eq!(run(&["a.c", "--16"]).platform.int_width, 16);
        assert_eq!(run(&["a.c", "--LLP64"]).platform.long_width, 32);
        assert!(!run(&["a.c", "--unsigned-char"]).platform.char_signed);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(parse_args(["minibmc", "--unwind"]), Parsed::Usage(_)));
        assert!(matches!(
            parse_args(["minibmc", "--frobnicate", "a.c"]),
            Parsed::Usage(_)
        ));
        assert!(matches!(parse_args(["minibmc"]), Parsed::Usage(_)));
        assert!(matches!(
            parse_args(["minibmc", "a.c", "--cover", "mcdc", "--unwinding-assertions"]),
            Parsed::Usage(_)
        ));
        assert!(matches!(
            parse_args(["minibmc", "a.c", "--unwindset", "main:3"]),
            Parsed::Usage(_)
        ));
        assert!(matches!(parse_args(["minibmc", "-?"]), Parsed::Info(_)));
        assert!(matches!(parse_args(["minibmc", "--version"]), Parsed::Info(_)));
    }

    #[test]
    fn interface_documents() {
        let args = json_interface_arguments(r#"{"arguments": ["--function", "abs", "abs.c"]}"#).unwrap();
        assert_eq!(args, ["--function", "abs", "abs.c"]);
        let args =
            xml_interface_arguments("<cprover><argument>--unwind</argument><argument>3</argument></cprover>").unwrap();
        assert_eq!(args, ["--unwind", "3"]);
    }
}
