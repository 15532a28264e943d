use crate::context::Context;
use crate::transform::Transformation;
use crate::{Error, Result};

/// An atomic program step: rewrites exactly one register as a function of
/// the whole register file. The table holds the new value of the target
/// register for every state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instruction {
    ctx: Context,
    target: usize,
    table: Vec<u16>,
}

impl Instruction {
    pub fn new(ctx: Context, target: usize, table: Vec<u16>) -> Result<Self> {
        if target >= ctx.n() {
            return Err(Error::InvalidInput(format!(
                "target register {target} out of range for width {}",
                ctx.n()
            )));
        }
        if table.len() != ctx.num_states() {
            return Err(Error::InvalidInput(format!(
                "instruction table has {} entries, expected {}",
                table.len(),
                ctx.num_states()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= ctx.q()) {
            return Err(Error::InvalidInput(format!(
                "table value {bad} out of range for alphabet size {}",
                ctx.q()
            )));
        }
        Ok(Self { ctx, target, table })
    }

    pub fn from_fn(ctx: Context, target: usize, f: impl Fn(usize) -> u16) -> Result<Self> {
        let table = ctx.states().map(f).collect();
        Self::new(ctx, target, table)
    }

    /// The identity step `y_i <- y_i`.
    pub fn identity(ctx: Context, target: usize) -> Self {
        let table = ctx.states().map(|s| ctx.digit(s, target)).collect();
        Self { ctx, target, table }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn apply(&self, state: usize) -> usize {
        self.ctx.with_digit(state, self.target, self.table[state])
    }

    pub fn is_identity(&self) -> bool {
        self.ctx
            .states()
            .all(|s| self.table[s] == self.ctx.digit(s, self.target))
    }

    pub fn to_transformation(&self) -> Transformation {
        Transformation::from_fn(self.ctx, |s| self.apply(s))
    }

    /// Whether the induced map is a permutation: for every fixing of the
    /// other registers, the table restricted to the target digit must be a
    /// bijection of the alphabet.
    pub fn is_permutation_instruction(&self) -> bool {
        let q = self.ctx.q();
        let mut seen = vec![false; q];
        for base in self.ctx.states() {
            if self.ctx.digit(base, self.target) != 0 {
                continue;
            }
            seen.iter_mut().for_each(|v| *v = false);
            for a in 0..q {
                let s = self.ctx.with_digit(base, self.target, a as u16);
                let v = self.table[s] as usize;
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    /// Registers the table actually depends on.
    pub fn essential_inputs(&self) -> Vec<usize> {
        (0..self.ctx.n())
            .filter(|&j| {
                self.ctx.states().any(|s| {
                    self.ctx.digit(s, j) == 0
                        && (1..self.ctx.q()).any(|v| {
                            self.table[self.ctx.with_digit(s, j, v as u16)] != self.table[s]
                        })
                })
            })
            .collect()
    }

    /// Fuses `later` (same target) onto `self`: the combined single step.
    pub fn merge(&self, later: &Instruction) -> Instruction {
        debug_assert_eq!(self.target, later.target);
        let table = self
            .ctx
            .states()
            .map(|s| later.table[self.apply(s)])
            .collect();
        Instruction {
            ctx: self.ctx,
            target: self.target,
            table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_first_register() {
        // y_1 <- y_1 + 1 over {0,1}^2 maps (0,1,2,3) to (1,0,3,2)
        let ctx = Context::new(2, 2).unwrap();
        let instr =
            Instruction::from_fn(ctx, 0, |s| (ctx.digit(s, 0) + 1) % 2).unwrap();
        let t = instr.to_transformation();
        assert_eq!(t.image(), &[1, 0, 3, 2]);
        assert!(instr.is_permutation_instruction());
        assert!(!instr.is_identity());
    }

    #[test]
    fn identity_detection() {
        let ctx = Context::new(3, 2).unwrap();
        assert!(Instruction::identity(ctx, 1).is_identity());
        assert!(Instruction::identity(ctx, 1).is_permutation_instruction());
    }

    #[test]
    fn non_permutation_step() {
        let ctx = Context::new(2, 2).unwrap();
        let constant = Instruction::from_fn(ctx, 0, |_| 0).unwrap();
        assert!(!constant.is_permutation_instruction());
    }

    #[test]
    fn essential_inputs_scan() {
        let ctx = Context::new(2, 3).unwrap();
        let xor3 = Instruction::from_fn(ctx, 0, |s| {
            ctx.digit(s, 0) ^ ctx.digit(s, 1) ^ ctx.digit(s, 2)
        })
        .unwrap();
        assert_eq!(xor3.essential_inputs(), vec![0, 1, 2]);
        let mov = Instruction::from_fn(ctx, 0, |s| ctx.digit(s, 2)).unwrap();
        assert_eq!(mov.essential_inputs(), vec![2]);
        let constant = Instruction::from_fn(ctx, 1, |_| 1).unwrap();
        assert!(constant.essential_inputs().is_empty());
    }

    #[test]
    fn merge_same_target() {
        let ctx = Context::new(2, 2).unwrap();
        let flip = Instruction::from_fn(ctx, 0, |s| (ctx.digit(s, 0) + 1) % 2).unwrap();
        let merged = flip.merge(&flip);
        assert!(merged.is_identity());
    }
}
