//! Shuffling registers: programs for `f(x) = (x_{phi(1)}, ..., x_{phi(n)})`.
//!
//! The functional graph of `phi` splits into fixed points, cycles, and
//! acyclic vertices. Cycles that form whole connected components are
//! *detached*; the others have an outside vertex feeding into them and are
//! *attached*. Detachment is what costs: a detached cycle cannot be
//! rotated by plain moves without spending an extra step on a save, but a
//! running sum lets one register serve every cycle at once.
//!
//! Exact lengths (fixed points `F`, detached cycles `D`):
//! `n - F + D` when `phi` is a permutation, `n - F + 1` when it is not and
//! `D > 0`, and `n - F` otherwise. Pure moves `y_i <- y_j` always cost
//! `n - F + D` and cannot compute a non-identity permutation at all.
//!
//! Steps are alphabet-independent linear combinations with coefficients in
//! `{-1, 0, 1}`, evaluated mod `q`; the same step list works for every
//! alphabet size.

use crate::context::Context;
use crate::instruction::Instruction;
use crate::program::Program;
use crate::transform::Transformation;
use crate::{Error, Result};

/// A map `phi` of register indices inducing the shuffle
/// `f(x)_i = x_{phi(i)}`. Indices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    map: Vec<usize>,
}

impl VarMap {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidInput("the register map must be nonempty".into()));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidInput(format!(
                "image {} out of range for {} registers",
                bad + 1,
                n
            )));
        }
        Ok(Self { map })
    }

    /// From 1-based images, as written in text formats.
    pub fn from_images_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidInput("register indices are 1-based".into()));
        }
        Self::new(images.iter().map(|&v| v - 1).collect())
    }

    /// Parses disjoint cycle notation with explicit arity, e.g.
    /// `"(1 2)(3 4)"` over `n` registers. A group `(a -> b)` maps `a` to
    /// `b` without closing a cycle; unlisted registers stay fixed.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut map: Vec<Option<usize>> = vec![None; n];
        let mut assign = |from: usize, to: usize| -> Result<()> {
            if from == 0 || to == 0 || from > n || to > n {
                return Err(Error::InvalidInput(format!(
                    "register index out of range in cycle notation (n = {n})"
                )));
            }
            if map[from - 1].is_some() {
                return Err(Error::InvalidInput(format!(
                    "register {from} is moved twice in cycle notation"
                )));
            }
            map[from - 1] = Some(to - 1);
            Ok(())
        };
        let text = text.trim();
        let mut rest = text;
        if rest.is_empty() {
            return Err(Error::InvalidInput("empty cycle notation".into()));
        }
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::InvalidInput(format!("expected '(' in {rest:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::InvalidInput(format!(
                    "unexpected text {:?} in cycle notation",
                    &rest[..open]
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::InvalidInput("unclosed '(' in cycle notation".into()))?;
            let group = &rest[open + 1..close];
            rest = &rest[close + 1..];
            if let Some((from, to)) = group.split_once("->") {
                let parse = |s: &str| {
                    s.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidInput(format!("bad register index {:?}", s.trim()))
                    })
                };
                assign(parse(from)?, parse(to)?)?;
            } else {
                let members: Vec<usize> = group
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| Error::InvalidInput(format!("bad register index {s:?}")))
                    })
                    .collect::<Result<_>>()?;
                if members.len() < 2 {
                    return Err(Error::InvalidInput(
                        "cycles need at least two registers".into(),
                    ));
                }
                for w in members.windows(2) {
                    assign(w[0], w[1])?;
                }
                assign(members[members.len() - 1], members[0])?;
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or(i))
            .collect();
        Self::new(map)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The induced transformation of `A^n`.
    pub fn transformation(&self, q: usize) -> Result<Transformation> {
        let ctx = Context::new(q, self.n())?;
        Ok(Transformation::from_fn(ctx, |s| {
            let digits: Vec<u16> = self.map.iter().map(|&j| ctx.digit(s, j)).collect();
            ctx.state_from_digits(&digits).expect("digits in range")
        }))
    }

    /// Shuffle a plain value vector: `out[i] = x[phi(i)]`.
    pub fn apply_values(&self, x: &[u16]) -> Vec<u16> {
        self.map.iter().map(|&j| x[j]).collect()
    }
}

/// One cycle of the functional graph, listed from its smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub members: Vec<usize>,
    /// Whole connected component: nothing outside the cycle feeds into it.
    pub detached: bool,
}

/// The structure of a register map: fixed points, cycles with detachment
/// flags, and the remaining (acyclic) vertices in an order compatible with
/// the arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMapAnalysis {
    pub fixed: Vec<usize>,
    pub cycles: Vec<Cycle>,
    /// Topologically ordered: if `phi(a) = b` with both acyclic, `a`
    /// precedes `b`. Smallest-index first among the ready vertices.
    pub acyclic: Vec<usize>,
    pub is_permutation: bool,
}

impl VarMapAnalysis {
    pub fn fixed_count(&self) -> usize {
        self.fixed.len()
    }

    pub fn detached_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.detached).count()
    }
}

/// Splits the functional graph of `phi` into fixed points, cycles, and
/// topologically ordered acyclic vertices. Fixed points do not count as
/// cycles.
pub fn analyze(v: &VarMap) -> VarMapAnalysis {
    let n = v.n();
    // vertices on cycles: iterate phi n times; survivors of repeated
    // image-taking are exactly the cyclic part
    let mut on_cycle = vec![false; n];
    for start in 0..n {
        let mut slow = start;
        for _ in 0..n {
            slow = v.image(slow);
        }
        on_cycle[slow] = true;
    }
    let mut fixed = Vec::new();
    let mut cycles = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if !on_cycle[start] || seen[start] {
            continue;
        }
        if v.image(start) == start {
            seen[start] = true;
            fixed.push(start);
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut cur = v.image(start);
        while cur != start {
            seen[cur] = true;
            members.push(cur);
            cur = v.image(cur);
        }
        let detached = (0..n)
            .filter(|&j| !members.contains(&j))
            .all(|j| !members.contains(&v.image(j)));
        cycles.push(Cycle { members, detached });
    }
    // Kahn order over the acyclic vertices, smallest index first
    let acyclic_set: Vec<usize> = (0..n).filter(|&i| !on_cycle[i]).collect();
    let mut indegree = vec![0usize; n];
    for &a in &acyclic_set {
        let t = v.image(a);
        if !on_cycle[t] {
            indegree[t] += 1;
        }
    }
    let mut ready: std::collections::BTreeSet<usize> =
        acyclic_set.iter().copied().filter(|&a| indegree[a] == 0).collect();
    let mut acyclic = Vec::with_capacity(acyclic_set.len());
    while let Some(&a) = ready.iter().next() {
        ready.remove(&a);
        acyclic.push(a);
        let t = v.image(a);
        if !on_cycle[t] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.insert(t);
            }
        }
    }
    debug_assert_eq!(acyclic.len(), acyclic_set.len());
    VarMapAnalysis {
        fixed,
        cycles,
        acyclic,
        is_permutation: v.is_permutation(),
    }
}

/// One update `y_target <- sum(coeffs[j] * y_j) mod q`, with coefficients
/// in `{-1, 0, 1}` so the same step works over every alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarStep {
    pub target: usize,
    pub coeffs: Vec<i8>,
}

impl VarStep {
    fn mov(n: usize, target: usize, source: usize) -> Self {
        let mut coeffs = vec![0i8; n];
        coeffs[source] = 1;
        Self { target, coeffs }
    }

    pub fn is_move(&self) -> bool {
        self.coeffs.iter().filter(|&&c| c != 0).count() == 1
            && self.coeffs.iter().all(|&c| c == 0 || c == 1)
    }
}

/// An alphabet-independent program of linear steps over `n` registers plus
/// `memory` scratch registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarProgram {
    n: usize,
    memory: usize,
    steps: Vec<VarStep>,
}

impl VarProgram {
    pub(crate) fn from_parts(n: usize, memory: usize, steps: Vec<VarStep>) -> Self {
        Self { n, memory, steps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn memory_cells(&self) -> usize {
        self.memory
    }

    pub fn width(&self) -> usize {
        self.n + self.memory
    }

    pub fn steps(&self) -> &[VarStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_black_box(&self) -> bool {
        self.steps.iter().all(|s| s.is_move())
    }

    /// Runs the steps on a register vector of length `n + memory`.
    pub fn eval_values(&self, q: usize, values: &mut [u16]) {
        debug_assert_eq!(values.len(), self.width());
        for s in &self.steps {
            let mut acc: i64 = 0;
            for (j, &c) in s.coeffs.iter().enumerate() {
                acc += c as i64 * values[j] as i64;
            }
            values[s.target] = acc.rem_euclid(q as i64) as u16;
        }
    }

    /// Materializes the steps as instruction tables over `A^(n+m)`.
    pub fn to_program(&self, q: usize) -> Result<Program> {
        let ctx = Context::new(q, self.n)?;
        let wide = ctx.extended(self.memory)?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Instruction::from_fn(wide, s.target, |state| {
                    let mut acc: i64 = 0;
                    for (j, &c) in s.coeffs.iter().enumerate() {
                        acc += c as i64 * wide.digit(state, j) as i64;
                    }
                    acc.rem_euclid(q as i64) as u16
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Program::new(ctx, self.memory, steps)
    }

    /// Exhaustive check against the shuffle when the state space is small,
    /// otherwise spot checks on `samples` register vectors drawn from a
    /// fixed-stride sweep.
    pub fn verifies_shuffle(&self, q: usize, v: &VarMap, samples: usize) -> bool {
        debug_assert_eq!(self.n, v.n());
        let width = self.width();
        let exhaustive = (q as f64).powi(width as i32) <= 4096.0;
        if exhaustive {
            let states = q.pow(width as u32);
            (0..states).all(|s| {
                let mut values: Vec<u16> = (0..width)
                    .map(|i| (s / q.pow(i as u32) % q) as u16)
                    .collect();
                let expect = v.apply_values(&values[..self.n]);
                self.eval_values(q, &mut values);
                values[..self.n] == expect[..]
            })
        } else {
            // deterministic pseudo-random sweep
            let mut seed = 0x9e3779b97f4a7c15u64;
            (0..samples).all(|_| {
                let mut values: Vec<u16> = (0..width)
                    .map(|_| {
                        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        ((seed >> 33) % q as u64) as u16
                    })
                    .collect();
                let expect = v.apply_values(&values[..self.n]);
                self.eval_values(q, &mut values);
                values[..self.n] == expect[..]
            })
        }
    }
}

/// The `n + 1` step program rotating all `n` registers one place:
/// `y_i` ends up holding `x_{i+1}` (cyclically). Schedule: `y_1` takes the
/// running sum, then `y_n, y_{n-1}, ..., y_1` peel it off.
pub fn cyclic_shift_steps(n: usize) -> VarProgram {
    if n < 2 {
        return VarProgram { n, memory: 0, steps: Vec::new() };
    }
    let cycle: Vec<usize> = (0..n).collect();
    let mut steps = Vec::with_capacity(n + 1);
    push_cycle_shift(&mut steps, n, &cycle);
    VarProgram { n, memory: 0, steps }
}

/// Rotation of one cycle: `y_{c_j}` must end up holding the value of
/// `y_{c_{j+1}}`. First `y_{c_0}` accumulates the sum of the cycle, then
/// members are recovered in reverse order by subtracting the rest.
fn push_cycle_shift(steps: &mut Vec<VarStep>, width: usize, cycle: &[usize]) {
    let mut sum = vec![0i8; width];
    for &c in cycle {
        sum[c] = 1;
    }
    steps.push(VarStep { target: cycle[0], coeffs: sum });
    let mut diff = vec![0i8; width];
    diff[cycle[0]] = 1;
    for &c in &cycle[1..] {
        diff[c] = -1;
    }
    for &c in cycle.iter().skip(1).rev().chain(std::iter::once(&cycle[0])) {
        steps.push(VarStep { target: c, coeffs: diff.clone() });
    }
}

/// Shortest program for the shuffle induced by `phi`, using linear
/// combinations. Length is exactly `n - F + D` for permutations,
/// `n - F + 1` for non-permutations with a detached cycle, and `n - F`
/// otherwise.
pub fn varmap_program(v: &VarMap) -> VarProgram {
    let n = v.n();
    let a = analyze(v);
    let mut steps = Vec::new();
    if a.is_permutation {
        for cycle in &a.cycles {
            push_cycle_shift(&mut steps, n, &cycle.members);
        }
        return VarProgram { n, memory: 0, steps };
    }
    if a.detached_count() > 0 {
        varmap_with_sum_trick(v, &a, n, &mut steps);
    } else {
        varmap_moves_only(v, &a, n, &mut steps);
    }
    VarProgram { n, memory: 0, steps }
}

/// Non-permutation with detached cycles: the last acyclic vertex holds the
/// sum of one member per cycle, every cycle closes against it, and the
/// vertex takes its own value last.
fn varmap_with_sum_trick(v: &VarMap, a: &VarMapAnalysis, width: usize, steps: &mut Vec<VarStep>) {
    let _n = v.n();
    let order = &a.acyclic;
    let last = *order.last().expect("a non-permutation has an acyclic vertex");
    for &x in &order[..order.len() - 1] {
        steps.push(VarStep::mov(width, x, v.image(x)));
    }
    let starts: Vec<usize> = a.cycles.iter().map(|c| c.members[0]).collect();
    let ends: Vec<usize> = a
        .cycles
        .iter()
        .map(|c| *c.members.last().expect("cycles have length >= 2"))
        .collect();
    let mut sum = vec![0i8; width];
    for &s in &starts {
        sum[s] = 1;
    }
    steps.push(VarStep { target: last, coeffs: sum });
    for (c, cycle) in a.cycles.iter().enumerate() {
        let members = &cycle.members;
        for w in members.windows(2) {
            steps.push(VarStep::mov(width, w[0], w[1]));
        }
        // the predecessor of the start recovers it from the saved sum
        let mut coeffs = vec![0i8; width];
        coeffs[last] = 1;
        for &b in &ends[..c] {
            coeffs[b] = -1;
        }
        for &b in &starts[c + 1..] {
            coeffs[b] = -1;
        }
        steps.push(VarStep { target: members[members.len() - 1], coeffs });
    }
    // the memory vertex finally takes its own value, now held by the
    // predecessor of its image (or by the image itself if fixed)
    let t = v.image(last);
    let source = a
        .cycles
        .iter()
        .find(|c| c.members.contains(&t))
        .map(|c| {
            let pos = c.members.iter().position(|&m| m == t).unwrap();
            c.members[(pos + c.members.len() - 1) % c.members.len()]
        })
        .unwrap_or(t);
    steps.push(VarStep::mov(width, last, source));
}

/// Non-permutation without detached cycles: plain moves suffice. Every
/// cycle is attached, so it can start at a member whose value was already
/// copied out to an acyclic vertex.
fn varmap_moves_only(v: &VarMap, a: &VarMapAnalysis, width: usize, steps: &mut Vec<VarStep>) {
    for &x in &a.acyclic {
        steps.push(VarStep::mov(width, x, v.image(x)));
    }
    for cycle in &a.cycles {
        debug_assert!(!cycle.detached);
        push_attached_cycle_moves(v, a, width, cycle, steps);
    }
}

/// Rotates an attached cycle by moves, starting at the member with the
/// smallest acyclic attachment; that attachment already holds the start's
/// value.
fn push_attached_cycle_moves(
    v: &VarMap,
    a: &VarMapAnalysis,
    width: usize,
    cycle: &Cycle,
    steps: &mut Vec<VarStep>,
) {
    let attachment = a
        .acyclic
        .iter()
        .copied()
        .filter(|&j| cycle.members.contains(&v.image(j)))
        .min()
        .expect("attached cycles have an acyclic vertex feeding in");
    let start = v.image(attachment);
    let k = cycle.members.len();
    let pos = cycle.members.iter().position(|&m| m == start).unwrap();
    let rotated: Vec<usize> = (0..k).map(|i| cycle.members[(pos + i) % k]).collect();
    for w in rotated.windows(2) {
        steps.push(VarStep::mov(width, w[0], w[1]));
    }
    steps.push(VarStep::mov(width, rotated[k - 1], attachment));
}

/// Shortest all-moves program for the shuffle. Non-identity permutations
/// are not computable this way; otherwise the length is exactly
/// `n - F + D`.
pub fn varmap_blackbox_program(v: &VarMap) -> Result<VarProgram> {
    let n = v.n();
    let a = analyze(v);
    if a.is_permutation {
        if v.is_identity() {
            return Ok(VarProgram { n, memory: 0, steps: Vec::new() });
        }
        return Err(Error::NotBlackBoxComputable);
    }
    let mut steps = Vec::new();
    if a.detached_count() == 0 {
        varmap_moves_only(v, &a, n, &mut steps);
        let p = VarProgram { n, memory: 0, steps };
        debug_assert!(p.is_black_box());
        return Ok(p);
    }
    let order = &a.acyclic;
    let last = *order.last().expect("non-permutation");
    for &x in &order[..order.len() - 1] {
        steps.push(VarStep::mov(n, x, v.image(x)));
    }
    // detached cycles borrow the memory vertex for their save, one extra
    // move each
    for cycle in a.cycles.iter().filter(|c| c.detached) {
        let members = &cycle.members;
        steps.push(VarStep::mov(n, last, members[0]));
        for w in members.windows(2) {
            steps.push(VarStep::mov(n, w[0], w[1]));
        }
        steps.push(VarStep::mov(n, members[members.len() - 1], last));
    }
    // the memory vertex takes its own value before attached cycles rotate:
    // if its image sits in one of them, this move doubles as that cycle's
    // save
    let t = v.image(last);
    let source = a
        .cycles
        .iter()
        .find(|c| c.detached && c.members.contains(&t))
        .map(|c| {
            let pos = c.members.iter().position(|&m| m == t).unwrap();
            c.members[(pos + c.members.len() - 1) % c.members.len()]
        })
        .unwrap_or(t);
    steps.push(VarStep::mov(n, last, source));
    for cycle in a.cycles.iter().filter(|c| !c.detached) {
        push_attached_cycle_moves(v, &a, n, cycle, &mut steps);
    }
    let p = VarProgram { n, memory: 0, steps };
    debug_assert!(p.is_black_box());
    Ok(p)
}

/// Exact or bounding step counts for a shuffle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarMapComplexity {
    /// Exact length with linear combinations and no scratch.
    pub memoryless: usize,
    /// Exact all-moves length; `None` for non-identity permutations.
    pub blackbox: Option<usize>,
    /// Length achievable with one scratch register.
    pub one_cell: usize,
}

pub fn varmap_complexity(v: &VarMap) -> VarMapComplexity {
    let a = analyze(v);
    let n = v.n();
    let f = a.fixed_count();
    let d = a.detached_count();
    let memoryless = if a.is_permutation {
        n - f + d
    } else if d > 0 {
        n - f + 1
    } else {
        n - f
    };
    let blackbox = if a.is_permutation && !v.is_identity() {
        None
    } else {
        Some(n - f + d)
    };
    let one_cell = memoryless.min(n - f + 1);
    VarMapComplexity { memoryless, blackbox, one_cell }
}
