//! Per-path symbolic execution state.

use std::collections::HashMap;

use crate::frontend::expr::Expr;
use crate::frontend::types::Ident;

#[derive(Clone, Debug)]
pub struct Frame {
    pub function: Ident,
    pub pc: usize,
    /// Activation number of the function, used to rename its locals.
    pub level: u32,
    pub counters: HashMap<usize, u32>,
    pub budget: HashMap<usize, u64>,
}

impl Frame {
    pub fn new(function: Ident, level: u32) -> Self {
        Frame {
            function,
            pc: 0,
            level,
            counters: HashMap::new(),
            budget: HashMap::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct State {
    /// Conjuncts of the path condition.
    pub guard: Vec<Expr>,
    pub frames: Vec<Frame>,
    pub versions: HashMap<(Ident, u32), u32>,
    /// Known values, for constant propagation.
    pub values: HashMap<(Ident, u32), Expr>,
    /// Instructions executed on the path.
    pub depth: usize,
    pub backjumped_to: Option<usize>,
}

impl State {
    pub fn new(frame: Frame) -> Self {
        State {
            guard: Vec::new(),
            frames: vec![frame],
            versions: HashMap::new(),
            values: HashMap::new(),
            depth: 0,
            backjumped_to: None,
        }
    }

    pub fn dead() -> Self {
        let mut s = State::new(Frame::new("".into(), 0));
        s.kill();
        s
    }

    pub fn kill(&mut self) {
        self.guard = vec![Expr::false_expr()];
    }

    pub fn is_dead(&self) -> bool {
        self.guard.iter().any(Expr::is_false)
    }

    pub fn top(&self) -> &Frame {
        self.frames.last().expect("active frame")
    }

    pub fn top_mut(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("active frame")
    }
}
