use crate::context::Context;
use crate::instruction::Instruction;
use crate::transform::Transformation;
use crate::{Error, Result};

/// An ordered sequence of instructions over `n` registers plus `memory`
/// scratch registers. Evaluation applies the steps in list order, each
/// rewriting one register in place.
///
/// Programs are kept in normal form: no step is the identity, and
/// consecutive steps target distinct registers (violations are merged at
/// construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    ctx: Context,
    memory: usize,
    steps: Vec<Instruction>,
}

impl Program {
    pub fn new(ctx: Context, memory: usize, steps: Vec<Instruction>) -> Result<Self> {
        let wide = ctx.extended(memory)?;
        let mut normal: Vec<Instruction> = Vec::with_capacity(steps.len());
        for step in steps {
            if step.ctx() != wide {
                return Err(Error::InvalidInput(format!(
                    "step context {:?} does not match program width {}",
                    step.ctx(),
                    wide.n()
                )));
            }
            match normal.last() {
                Some(prev) if prev.target() == step.target() => {
                    let merged = normal.pop().unwrap().merge(&step);
                    if !merged.is_identity() {
                        normal.push(merged);
                    }
                }
                _ => {
                    if !step.is_identity() {
                        normal.push(step);
                    }
                }
            }
        }
        Ok(Self {
            ctx,
            memory,
            steps: normal,
        })
    }

    /// Keeps the steps exactly as given (no merging of same-register runs).
    /// Binary-instruction programs need this: fusing a scratch chain would
    /// widen its steps past two inputs. Identity steps are still rejected.
    pub fn from_steps_raw(ctx: Context, memory: usize, steps: Vec<Instruction>) -> Result<Self> {
        let wide = ctx.extended(memory)?;
        for step in &steps {
            if step.ctx() != wide {
                return Err(Error::InvalidInput(format!(
                    "step context {:?} does not match program width {}",
                    step.ctx(),
                    wide.n()
                )));
            }
            if step.is_identity() {
                return Err(Error::InvalidInput(
                    "programs may not contain identity steps".into(),
                ));
            }
        }
        Ok(Self { ctx, memory, steps })
    }

    pub fn empty(ctx: Context) -> Self {
        Self {
            ctx,
            memory: 0,
            steps: Vec::new(),
        }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn memory_cells(&self) -> usize {
        self.memory
    }

    /// Width of the register file the steps act on, `n + m`.
    pub fn extended_ctx(&self) -> Context {
        self.ctx.extended(self.memory).expect("validated at construction")
    }

    pub fn steps(&self) -> &[Instruction] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Runs the program on a state of the extended register file.
    pub fn eval(&self, state: usize) -> Result<usize> {
        if state >= self.extended_ctx().num_states() {
            return Err(Error::InvalidInput(format!(
                "state {state} out of range for width {}",
                self.extended_ctx().n()
            )));
        }
        Ok(self.eval_unchecked(state))
    }

    fn eval_unchecked(&self, mut state: usize) -> usize {
        for step in &self.steps {
            state = step.apply(state);
        }
        state
    }

    /// The full transformation of the extended register file.
    pub fn extended_transformation(&self) -> Transformation {
        Transformation::from_fn(self.extended_ctx(), |s| self.eval_unchecked(s))
    }

    /// The transformation of the first `n` registers, tabulated over every
    /// state of the extended file. Fails if the projection depends on the
    /// initial scratch contents.
    pub fn transformation(&self) -> Result<Transformation> {
        let wide = self.extended_ctx();
        let states = self.ctx.num_states();
        let mut image: Vec<Option<u32>> = vec![None; states];
        for s in wide.states() {
            let out = (self.eval_unchecked(s) % states) as u32;
            let x = s % states;
            match image[x] {
                None => image[x] = Some(out),
                Some(v) if v == out => {}
                Some(_) => return Err(Error::ScratchDependent),
            }
        }
        Transformation::from_image(self.ctx, image.into_iter().map(|v| v.unwrap()).collect())
    }

    /// Exhaustive verification: the projection to the first `n` registers
    /// equals `f` for every input and every initial scratch content.
    pub fn computes(&self, f: &Transformation) -> bool {
        if f.ctx() != self.ctx {
            return false;
        }
        let states = self.ctx.num_states();
        self.extended_ctx()
            .states()
            .all(|s| self.eval_unchecked(s) % states == f.apply(s % states))
    }

    /// The transformations reached after each step, starting from the
    /// identity. The last entry is the extended transformation.
    pub fn prefix_transformations(&self) -> Vec<Transformation> {
        let wide = self.extended_ctx();
        let mut current = Transformation::identity(wide);
        let mut prefixes = Vec::with_capacity(self.steps.len() + 1);
        prefixes.push(current.clone());
        for step in &self.steps {
            current = step.to_transformation().compose(&current);
            prefixes.push(current.clone());
        }
        prefixes
    }
}
