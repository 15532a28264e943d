use crate::context::Context;
use crate::{Error, Result};

/// A total map of the register file, stored as an image table over all
/// `q^n` states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transformation {
    ctx: Context,
    image: Vec<u32>,
}

impl Transformation {
    pub fn from_image(ctx: Context, image: Vec<u32>) -> Result<Self> {
        if image.len() != ctx.num_states() {
            return Err(Error::InvalidInput(format!(
                "image table has {} entries, expected {}",
                image.len(),
                ctx.num_states()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&s| s as usize >= ctx.num_states()) {
            return Err(Error::InvalidInput(format!(
                "image entry {bad} out of range"
            )));
        }
        Ok(Self { ctx, image })
    }

    pub fn from_fn(ctx: Context, f: impl Fn(usize) -> usize) -> Self {
        let image = ctx.states().map(|s| f(s) as u32).collect();
        Self { ctx, image }
    }

    pub fn identity(ctx: Context) -> Self {
        Self::from_fn(ctx, |s| s)
    }

    pub fn constant(ctx: Context, target: usize) -> Self {
        Self::from_fn(ctx, |_| target)
    }

    /// The permutation of `A^n` exchanging states `a` and `b`.
    pub fn transposition(ctx: Context, a: usize, b: usize) -> Self {
        Self::from_fn(ctx, |s| {
            if s == a {
                b
            } else if s == b {
                a
            } else {
                s
            }
        })
    }

    /// The transformation mapping `a` to `b` and fixing every other state.
    pub fn assignment(ctx: Context, a: usize, b: usize) -> Self {
        Self::from_fn(ctx, |s| if s == a { b } else { s })
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, state: usize) -> usize {
        self.image[state] as usize
    }

    /// Number of distinct states in the image.
    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.ctx.num_states()];
        let mut count = 0;
        for &s in &self.image {
            if !seen[s as usize] {
                seen[s as usize] = true;
                count += 1;
            }
        }
        count
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.ctx.num_states()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(s, &t)| s == t as usize)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_permutation() {
            return Err(Error::InvalidInput(
                "only permutations can be inverted".into(),
            ));
        }
        let mut image = vec![0u32; self.image.len()];
        for (s, &t) in self.image.iter().enumerate() {
            image[t as usize] = s as u32;
        }
        Ok(Self { ctx: self.ctx, image })
    }

    /// `self ∘ first`: applies `first`, then `self`.
    pub fn compose(&self, first: &Transformation) -> Self {
        debug_assert_eq!(self.ctx, first.ctx);
        let image = first.image.iter().map(|&s| self.image[s as usize]).collect();
        Self { ctx: self.ctx, image }
    }

    /// The `i`-th coordinate function (0-based) as a table over all states.
    pub fn coordinate_function(&self, coord: usize) -> Vec<u16> {
        self.image
            .iter()
            .map(|&t| self.ctx.digit(t as usize, coord))
            .collect()
    }

    /// Whether `self` dominates `f`: equal images under `self` force equal
    /// images under `f`, so `f` factors through `self`.
    pub fn dominates(&self, f: &Transformation) -> bool {
        debug_assert_eq!(self.ctx, f.ctx);
        let mut forced: Vec<Option<u32>> = vec![None; self.ctx.num_states()];
        for s in self.ctx.states() {
            let key = self.image[s] as usize;
            match forced[key] {
                None => forced[key] = Some(f.image[s]),
                Some(v) if v == f.image[s] => {}
                Some(_) => return false,
            }
        }
        true
    }
}

/// Whether every fiber of `values` (a map onto `codomain` labels) has the
/// same size `values.len() / codomain`.
pub fn is_balanced(values: &[usize], codomain: usize) -> bool {
    if codomain == 0 || !values.len().is_multiple_of(codomain) {
        return false;
    }
    let expected = values.len() / codomain;
    let mut counts = vec![0usize; codomain];
    for &v in values {
        if v >= codomain {
            return false;
        }
        counts[v] += 1;
    }
    counts.iter().all(|&c| c == expected)
}

/// Table `h` with `h(current(x)) = target(x)` for every state `x`. States
/// outside the image of `current` are filled with the identity value of
/// `coord`, so the induced instruction fixes them.
///
/// Fails unless `current` dominates `target` at the coordinate level.
pub fn express_through(
    current: &Transformation,
    target: &[u16],
    coord: usize,
) -> Result<Vec<u16>> {
    let ctx = current.ctx();
    debug_assert_eq!(target.len(), ctx.num_states());
    let mut table: Vec<Option<u16>> = vec![None; ctx.num_states()];
    for s in ctx.states() {
        let key = current.apply(s);
        match table[key] {
            None => table[key] = Some(target[s]),
            Some(v) if v == target[s] => {}
            Some(_) => return Err(Error::NotExpressible),
        }
    }
    Ok(table
        .into_iter()
        .enumerate()
        .map(|(s, v)| v.unwrap_or_else(|| ctx.digit(s, coord)))
        .collect())
}
