//! Source to checkable model.

use std::fmt;

use crate::cover::{generate_tests, CoverageGoal, TestSuite};
use crate::encode::{encode, Encoding};
use crate::frontend::types::PlatformConfig;
use crate::frontend::{compile_source, FrontendError, PreprocessOptions};
use crate::goto::convert::convert_program;
use crate::goto::fnptr::remove_function_pointers;
use crate::goto::harness::build_entry_harness;
use crate::goto::returns::remove_returns;
use crate::goto::{GotoError, GotoModel};
use crate::instrument::{generate_checks, CheckOptions};
use crate::results::{decide_properties, DecideError, VerificationResult};
use crate::symex::{symex, Equation, SymexError, SymexOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineError {
    Frontend(FrontendError),
    Goto(GotoError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Frontend(e) => e.fmt(f),
            PipelineError::Goto(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<FrontendError> for PipelineError {
    fn from(e: FrontendError) -> Self {
        PipelineError::Frontend(e)
    }
}

impl From<GotoError> for PipelineError {
    fn from(e: GotoError) -> Self {
        PipelineError::Goto(e)
    }
}

/// One translation unit as an unlinked GOTO model.
pub fn compile_unit(
    file: &str,
    text: &str,
    pp: &PreprocessOptions,
    cfg: &PlatformConfig,
) -> Result<GotoModel, PipelineError> {
    let prog = compile_source(file, text, pp, cfg)?;
    Ok(convert_program(&prog))
}

/// Lowers a linked model and adds properties and the entry harness.
pub fn prepare(
    mut model: GotoModel,
    checks: &CheckOptions,
    entry: &str,
    cfg: &PlatformConfig,
) -> Result<GotoModel, PipelineError> {
    remove_function_pointers(&mut model);
    remove_returns(&mut model);
    generate_checks(&mut model, checks);
    build_entry_harness(&mut model, entry, cfg)?;
    model.check_well_formed()?;
    Ok(model)
}

/// Compiles a single file straight to a checkable model.
pub fn build(
    file: &str,
    text: &str,
    checks: &CheckOptions,
    entry: &str,
    cfg: &PlatformConfig,
) -> Result<GotoModel, PipelineError> {
    let model = compile_unit(file, text, &PreprocessOptions::default(), cfg)?;
    prepare(model, checks, entry, cfg)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    Symex(SymexError),
    Decide(DecideError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::Symex(e) => e.fmt(f),
            VerifyError::Decide(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for VerifyError {}

pub struct Verification {
    pub equation: Equation,
    pub encoding: Encoding,
    pub result: VerificationResult,
}

/// Symbolic execution, encoding and the property decision loop.
pub fn verify(model: &GotoModel, opts: &SymexOptions) -> Result<Verification, VerifyError> {
    let equation = symex(model, opts).map_err(VerifyError::Symex)?;
    let encoding = encode(&equation);
    let result = decide_properties(&equation, &encoding).map_err(VerifyError::Decide)?;
    Ok(Verification {
        equation,
        encoding,
        result,
    })
}

pub struct Coverage {
    pub equation: Equation,
    pub encoding: Encoding,
    pub suite: TestSuite,
}

/// Symbolic execution of an instrumented model and greedy test generation.
pub fn cover(model: &GotoModel, goals: &[CoverageGoal], opts: &SymexOptions) -> Result<Coverage, VerifyError> {
    let opts = SymexOptions {
        cover_mode: true,
        ..opts.clone()
    };
    let equation = symex(model, &opts).map_err(VerifyError::Symex)?;
    let encoding = encode(&equation);
    let suite = generate_tests(&equation, &encoding, goals).map_err(VerifyError::Decide)?;
    Ok(Coverage {
        equation,
        encoding,
        suite,
    })
}
