use std::cell::Cell;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on the cardinality of any finite space that is enumerated.
pub const DEFAULT_SPACE_BUDGET: u64 = 1 << 20;
/// Default bound on normalization work, counted in visited nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;
/// Default bound on the number of classes a closure computation may discover.
pub const DEFAULT_CLASS_LIMIT: usize = 1 << 16;
/// Default depth fuel for the generic normal-form enumeration.
pub const DEFAULT_FUEL: u32 = 3;

/// Resource limits shared by every long-running computation.
///
/// `space_budget` bounds the size of any domain that gets enumerated (function
/// tables, value-space sweeps). `node_budget` bounds normalization. `step_budget`,
/// when set, bounds semantic evaluation steps. Setting the cancellation flag makes
/// sweeps stop at their next check with [`Error::Cancelled`].
#[derive(Debug, Clone)]
pub struct Limits {
    pub space_budget: u64,
    pub node_budget: u64,
    pub class_limit: usize,
    pub step_budget: Option<u64>,
    pub fuel: u32,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            space_budget: DEFAULT_SPACE_BUDGET,
            node_budget: DEFAULT_NODE_BUDGET,
            class_limit: DEFAULT_CLASS_LIMIT,
            step_budget: None,
            fuel: DEFAULT_FUEL,
            cancel: None,
        }
    }
}

impl Limits {
    pub fn with_space_budget(mut self, budget: u64) -> Self {
        self.space_budget = budget;
        self
    }

    pub fn with_fuel(mut self, fuel: u32) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn check_cancelled(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}

/// Per-call step counter. Checks the cancellation flag every 4096 ticks.
pub(crate) struct Meter<'a> {
    limits: &'a Limits,
    steps: Cell<u64>,
}

impl<'a> Meter<'a> {
    pub(crate) fn new(limits: &'a Limits) -> Self {
        Meter {
            limits,
            steps: Cell::new(0),
        }
    }

    pub(crate) fn limits(&self) -> &'a Limits {
        self.limits
    }

    pub(crate) fn tick(&self) -> Result<()> {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        if let Some(max) = self.limits.step_budget {
            if n > max {
                return Err(Error::ResourceExhausted {
                    what: "evaluation",
                    budget: max,
                });
            }
        }
        if n & 0xfff == 0 {
            self.limits.check_cancelled()?;
        }
        Ok(())
    }
}
