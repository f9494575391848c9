//! Step budgets. Every evaluator in the workbench ticks a [`Fuel`] counter so
//! that divergence is reported as exhaustion rather than a hang. Exhaustion is
//! a distinct signal, not an error value: it means "possibly diverges", never
//! "wrong answer".

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("step budget exhausted")]
pub struct FuelExhausted;

#[derive(Debug, Clone)]
pub struct Fuel {
    initial: u64,
    remaining: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Self {
        Fuel { initial: budget, remaining: budget }
    }

    /// Consumes one step.
    pub fn tick(&mut self) -> Result<(), FuelExhausted> {
        if self.remaining == 0 {
            return Err(FuelExhausted);
        }
        self.remaining -= 1;
        Ok(())
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Steps consumed so far.
    pub fn used(&self) -> u64 {
        self.initial - self.remaining
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_down_to_exhaustion() {
        let mut fuel = Fuel::new(2);
        assert!(fuel.tick().is_ok());
        assert!(fuel.tick().is_ok());
        assert_eq!(fuel.tick(), Err(FuelExhausted));
        assert_eq!(fuel.used(), 2);
    }
}
