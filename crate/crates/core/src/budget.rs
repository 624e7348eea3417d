//! Search budgets for the potentially explosive procedures.
//!
//! Budgets are expressed in abstract steps so that results stay deterministic
//! for a fixed input; a wall-clock deadline can be layered on top for the
//! command line, where interruption beats reproducibility.

use std::time::Instant;

#[derive(Clone, Debug)]
pub struct Budget {
    max_steps: Option<u64>,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_steps: None, deadline: None }
    }

    pub fn steps(max_steps: u64) -> Self {
        Budget { max_steps: Some(max_steps), deadline: None }
    }

    pub fn millis(ms: u64) -> Self {
        Budget {
            max_steps: None,
            deadline: Some(Instant::now() + std::time::Duration::from_millis(ms)),
        }
    }

    /// True once `steps` exceeds the step allowance or the deadline passed.
    pub fn exhausted(&self, steps: u64) -> bool {
        if let Some(max) = self.max_steps {
            if steps > max {
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            // Only consult the clock occasionally; Instant::now is not free.
            if steps % 1024 == 0 && Instant::now() > deadline {
                return true;
            }
        }
        false
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Counter passed through recursive searches, checked against a [`Budget`].
#[derive(Debug)]
pub struct StepCounter<'a> {
    budget: &'a Budget,
    steps: u64,
}

impl<'a> StepCounter<'a> {
    pub fn new(budget: &'a Budget) -> Self {
        StepCounter { budget, steps: 0 }
    }

    /// Records one unit of work; returns false when the budget ran out.
    pub fn tick(&mut self) -> bool {
        self.steps += 1;
        !self.budget.exhausted(self.steps)
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}
