//! Bounded model checking for a subset of C.

pub mod cli;
pub mod cover;
pub mod encode;
pub mod eval;
pub mod frontend;
pub mod goto;
pub mod instrument;
pub mod interp;
pub mod pipeline;
pub mod results;
pub mod sat;
pub mod simplify;
pub mod symex;
