//! Synthesis for arbitrary permutations and transformations.
//!
//! Permutations of the register file are compiled into at most `2n - 1`
//! instructions by completing partial coordinate stacks to permutations
//! (edge colouring of a regular bipartite multigraph). Arbitrary
//! transformations take at most `4n - 3` instructions: the fiber-size
//! partition is sorted so that every aligned block sum vanishes modulo the
//! matching power of `q`, which makes the interval collapse map compatible
//! with a register-by-register update schedule.

use crate::context::Context;
use crate::instruction::Instruction;
use crate::program::Program;
use crate::transform::{express_through, is_balanced, Transformation};
use crate::{Error, Result};
use itertools::Itertools;

/// Appends `y_coord <- target(x)` expressed over the current register
/// contents, then advances `current`. Identity steps are appended too; the
/// final [`Program`] construction drops them.
pub(crate) fn emit_update(
    current: &mut Transformation,
    steps: &mut Vec<Instruction>,
    coord: usize,
    target: &[u16],
) -> Result<()> {
    let table = express_through(current, target, coord)?;
    let instr = Instruction::new(current.ctx(), coord, table)?;
    *current = instr.to_transformation().compose(current);
    steps.push(instr);
    Ok(())
}

/// The single-register transposition of two states differing only in
/// `coord`.
fn single_coord_transposition(ctx: Context, u: usize, v: usize, coord: usize) -> Instruction {
    Instruction::from_fn(ctx, coord, |s| {
        if s == u {
            ctx.digit(v, coord)
        } else if s == v {
            ctx.digit(u, coord)
        } else {
            ctx.digit(s, coord)
        }
    })
    .expect("valid transposition table")
}

/// Ladder realization of the state transposition `(path[0], path[last])`
/// along a path whose consecutive states differ in a single register:
/// up the path, one top step, back down. `2T - 1` instructions for a path
/// of `T` edges.
fn path_ladder(ctx: Context, path: &[usize], coords: &[usize], steps: &mut Vec<Instruction>) {
    let t = coords.len();
    debug_assert!(t >= 1 && path.len() == t + 1);
    for k in 0..t - 1 {
        steps.push(single_coord_transposition(ctx, path[k], path[k + 1], coords[k]));
    }
    steps.push(single_coord_transposition(ctx, path[t - 1], path[t], coords[t - 1]));
    for k in (0..t - 1).rev() {
        steps.push(single_coord_transposition(ctx, path[k], path[k + 1], coords[k]));
    }
}

/// Program of exactly `2d - 1` permutation instructions computing the
/// transposition of states `a` and `b` at Hamming distance `d`.
pub fn transposition_program(ctx: Context, a: usize, b: usize) -> Result<Program> {
    if a == b {
        return Err(Error::InvalidInput(
            "transposition endpoints must differ".into(),
        ));
    }
    if a >= ctx.num_states() || b >= ctx.num_states() {
        return Err(Error::InvalidInput("state out of range".into()));
    }
    let mut path = vec![a];
    let mut coords = Vec::new();
    let mut cur = a;
    for i in 0..ctx.n() {
        if ctx.digit(a, i) != ctx.digit(b, i) {
            cur = ctx.with_digit(cur, i, ctx.digit(b, i));
            path.push(cur);
            coords.push(i);
        }
    }
    let mut steps = Vec::with_capacity(2 * coords.len() - 1);
    path_ladder(ctx, &path, &coords, &mut steps);
    Program::new(ctx, 0, steps)
}

/// A step of the generator factorization: either a transposition of two
/// states differing by one in a single digit, or the fixed rank-deficient
/// assignment sending the all-zero state to the first unit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Swap states `a` and `b`, which differ by `±1` (mod `q`) in register
    /// `coord` and agree elsewhere.
    AdjacentSwap { a: usize, b: usize, coord: usize },
    /// `y_1 <- y_1 + delta(y, 0)`: maps the all-zero state to the first
    /// unit state and fixes everything else.
    ZeroToUnit,
}

impl Generator {
    pub fn to_instruction(self, ctx: Context) -> Instruction {
        match self {
            Generator::AdjacentSwap { a, b, coord } => {
                single_coord_transposition(ctx, a, b, coord)
            }
            Generator::ZeroToUnit => {
                Instruction::from_fn(ctx, 0, |s| if s == 0 { 1 } else { ctx.digit(s, 0) })
                    .expect("assignment instruction")
            }
        }
    }
}

/// Factors any transformation into adjacent swaps and copies of the
/// zero-to-unit assignment, listed in application order. Length is
/// unbounded (may be exponential in `n`); [`transformation_program`] gives
/// linear-length programs.
pub fn generator_sequence(f: &Transformation) -> Result<Vec<Generator>> {
    let ctx = f.ctx();
    // Peel the rank deficiency one assignment at a time: redirect the
    // larger state of a colliding pair to a free image, leaving a
    // permutation at the end.
    let mut work: Vec<u32> = f.image().to_vec();
    let mut assignments: Vec<(usize, usize)> = Vec::new();
    loop {
        let mut hit = vec![false; ctx.num_states()];
        let mut collision = None;
        for (x, &v) in work.iter().enumerate() {
            if std::mem::replace(&mut hit[v as usize], true) && collision.is_none() {
                collision = Some(x);
            }
        }
        let Some(x2) = collision else { break };
        let free = hit
            .iter()
            .position(|&h| !h)
            .expect("non-injective map misses some state");
        assignments.push((free, work[x2] as usize));
        work[x2] = free as u32;
    }
    let perm = Transformation::from_image(ctx, work)?;

    let mut gens = Vec::new();
    push_permutation_generators(ctx, &perm, &mut gens);
    for &(u, v) in assignments.iter().rev() {
        push_assignment_generators(ctx, u, v, &mut gens);
    }
    Ok(gens)
}

/// The generator factorization materialized as a program.
pub fn generator_program(f: &Transformation) -> Result<Program> {
    let ctx = f.ctx();
    let steps = generator_sequence(f)?
        .into_iter()
        .map(|g| g.to_instruction(ctx))
        .collect();
    let p = Program::new(ctx, 0, steps)?;
    debug_assert!(p.computes(f));
    Ok(p)
}

/// Cycle decomposition into state transpositions, each expanded to a
/// digit-adjacent ladder.
fn push_permutation_generators(ctx: Context, perm: &Transformation, gens: &mut Vec<Generator>) {
    let mut visited = vec![false; ctx.num_states()];
    for start in ctx.states() {
        if visited[start] || perm.apply(start) == start {
            visited[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut s = perm.apply(start);
        while s != start {
            visited[s] = true;
            cycle.push(s);
            s = perm.apply(s);
        }
        for &c in &cycle[1..] {
            push_adjacent_transposition(ctx, cycle[0], c, gens);
        }
    }
}

/// Expands the state transposition `(a, b)` into adjacent swaps: walk each
/// differing digit one step at a time (shorter way around the cyclic
/// alphabet), then ladder up and back down the path.
fn push_adjacent_transposition(ctx: Context, a: usize, b: usize, gens: &mut Vec<Generator>) {
    let q = ctx.q() as i64;
    let mut path = vec![a];
    let mut coords = Vec::new();
    let mut cur = a;
    for i in 0..ctx.n() {
        let from = ctx.digit(a, i) as i64;
        let to = ctx.digit(b, i) as i64;
        if from == to {
            continue;
        }
        let up = (to - from).rem_euclid(q);
        let (count, step) = if up <= q - up { (up, 1) } else { (q - up, q - 1) };
        let mut d = from;
        for _ in 0..count {
            d = (d + step) % q;
            cur = ctx.with_digit(cur, i, d as u16);
            path.push(cur);
            coords.push(i);
        }
    }
    let t = coords.len();
    let swap = |k: usize| Generator::AdjacentSwap { a: path[k], b: path[k + 1], coord: coords[k] };
    for k in 0..t - 1 {
        gens.push(swap(k));
    }
    gens.push(swap(t - 1));
    for k in (0..t - 1).rev() {
        gens.push(swap(k));
    }
}

/// The assignment `(u -> v)` conjugated to the canonical one: route `u` to
/// the all-zero state and `v` to the first unit state, apply the
/// zero-to-unit assignment, and route back.
fn push_assignment_generators(ctx: Context, u: usize, v: usize, gens: &mut Vec<Generator>) {
    debug_assert_ne!(u, v);
    let mut sigma_img = vec![u32::MAX; ctx.num_states()];
    sigma_img[u] = 0;
    sigma_img[v] = 1;
    let mut next = 2u32;
    for s in ctx.states() {
        if sigma_img[s] == u32::MAX {
            sigma_img[s] = next;
            next += 1;
        }
    }
    let sigma = Transformation::from_image(ctx, sigma_img).expect("permutation");
    let sigma_inv = sigma.inverse().expect("permutation");
    push_permutation_generators(ctx, &sigma, gens);
    gens.push(Generator::ZeroToUnit);
    push_permutation_generators(ctx, &sigma_inv, gens);
}

/// Given two balanced maps `f, g` from a common domain of size
/// `b_size * c_size` onto `b_size` labels, finds `h` onto `c_size` labels
/// with `(f, h)` and `(g, h)` both bijections of the domain.
///
/// Builds the `c_size`-regular bipartite multigraph with one edge per
/// domain element between `f[x]` and `g[x]` and colours its edges by
/// repeatedly extracting perfect matchings; `h[x]` is the colour of edge
/// `x`. Vertex and edge scans are ordered, so the output is deterministic.
pub fn complete_permutation_pair(
    f: &[usize],
    g: &[usize],
    b_size: usize,
    c_size: usize,
) -> Result<Vec<usize>> {
    let domain = b_size * c_size;
    if f.len() != domain || g.len() != domain {
        return Err(Error::InvalidInput(format!(
            "domain size mismatch: {} and {} vs {}",
            f.len(),
            g.len(),
            domain
        )));
    }
    if !is_balanced(f, b_size) || !is_balanced(g, b_size) {
        return Err(Error::InvalidInput(
            "both maps must be balanced to complete them to permutations".into(),
        ));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(c_size); b_size];
    for x in 0..domain {
        adj[f[x]].push(x);
    }
    let mut h = vec![usize::MAX; domain];
    let mut used = vec![false; domain];
    for colour in 0..c_size {
        let mut match_right: Vec<Option<usize>> = vec![None; b_size];
        let mut match_left: Vec<Option<usize>> = vec![None; b_size];
        for u in 0..b_size {
            if match_left[u].is_none() {
                let mut visited = vec![false; b_size];
                let ok = augment(u, &adj, g, f, &used, &mut visited, &mut match_right, &mut match_left);
                debug_assert!(ok, "regular bipartite multigraph has a perfect matching");
            }
        }
        for u in 0..b_size {
            let e = match_left[u].expect("perfect matching");
            used[e] = true;
            h[e] = colour;
        }
    }
    Ok(h)
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    right_of: &[usize],
    left_of: &[usize],
    used: &[bool],
    visited: &mut [bool],
    match_right: &mut [Option<usize>],
    match_left: &mut [Option<usize>],
) -> bool {
    for &e in &adj[u] {
        if used[e] {
            continue;
        }
        let v = right_of[e];
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let free = match match_right[v] {
            None => true,
            Some(e2) => augment(
                left_of[e2],
                adj,
                right_of,
                left_of,
                used,
                visited,
                match_right,
                match_left,
            ),
        };
        if free {
            match_right[v] = Some(e);
            match_left[u] = Some(e);
            return true;
        }
    }
    false
}

/// Raw `2n - 1` instruction list for a permutation: helper updates on
/// registers `1..n-1`, then final updates on `n` down to `1`. Identity
/// placeholders are kept so callers can split the schedule at `n`.
fn permutation_steps(f: &Transformation) -> Result<Vec<Instruction>> {
    let ctx = f.ctx();
    let (q, n, states) = (ctx.q(), ctx.n(), ctx.num_states());
    let mut helpers: Vec<Vec<u16>> = Vec::with_capacity(n - 1);
    for k in 1..n {
        // Pack (h_1..h_{k-1}, x_{k+1}..x_n) and (h_1..h_{k-1}, f_{k+1}..f_n)
        // as maps onto q^(n-1) labels; both are balanced by induction.
        let mut g1 = vec![0usize; states];
        let mut g2 = vec![0usize; states];
        for x in 0..states {
            let fx = f.apply(x);
            let mut v1 = 0;
            let mut v2 = 0;
            let mut stride = 1;
            for h in helpers.iter().take(k - 1) {
                v1 += h[x] as usize * stride;
                v2 += h[x] as usize * stride;
                stride *= q;
            }
            for c in k..n {
                v1 += ctx.digit(x, c) as usize * stride;
                v2 += ctx.digit(fx, c) as usize * stride;
                stride *= q;
            }
            g1[x] = v1;
            g2[x] = v2;
        }
        let h = complete_permutation_pair(&g1, &g2, states / q, q)?;
        helpers.push(h.into_iter().map(|c| c as u16).collect());
    }

    let mut current = Transformation::identity(ctx);
    let mut steps = Vec::with_capacity(2 * n - 1);
    for (k, helper) in helpers.iter().enumerate() {
        emit_update(&mut current, &mut steps, k, helper)?;
    }
    for k in (0..n).rev() {
        emit_update(&mut current, &mut steps, k, &f.coordinate_function(k))?;
    }
    debug_assert_eq!(&current, f);
    Ok(steps)
}

/// Program of at most `2n - 1` permutation instructions computing the
/// permutation `f`, on the schedule `y_1, ..., y_{n-1}, y_n, ..., y_1`
/// (identity steps dropped).
pub fn permutation_program(f: &Transformation) -> Result<Program> {
    if !f.is_permutation() {
        return Err(Error::InvalidInput(
            "permutation synthesis requires a bijective target".into(),
        ));
    }
    let p = Program::new(f.ctx(), 0, permutation_steps(f)?)?;
    debug_assert!(p.computes(f));
    Ok(p)
}

/// Indices of `q` entries of `seq` (which must have `2q - 1` entries)
/// whose sum vanishes mod `q`; existence is the Erdős–Ginzburg–Ziv
/// theorem. Returns the lexicographically first such index set.
pub fn zero_sum_subset(q: usize, seq: &[u64]) -> Result<Vec<usize>> {
    if seq.len() != 2 * q - 1 {
        return Err(Error::InvalidInput(format!(
            "need exactly {} residues, got {}",
            2 * q - 1,
            seq.len()
        )));
    }
    (0..seq.len())
        .combinations(q)
        .find(|c| c.iter().map(|&i| seq[i] % q as u64).sum::<u64>() % q as u64 == 0)
        .ok_or_else(|| Error::InvalidInput("no zero-sum subset; q must be positive".into()))
}

/// An integer partition of `q^n` indexed by states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    ctx: Context,
    counts: Vec<u64>,
}

impl Partition {
    pub fn new(ctx: Context, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != ctx.num_states() {
            return Err(Error::InvalidInput(format!(
                "partition has {} parts, expected {}",
                counts.len(),
                ctx.num_states()
            )));
        }
        let total: u64 = counts.iter().sum();
        if total != ctx.num_states() as u64 {
            return Err(Error::InvalidInput(format!(
                "partition sums to {total}, expected {}",
                ctx.num_states()
            )));
        }
        Ok(Self { ctx, counts })
    }

    /// Fiber sizes of a transformation, as a partition of `q^n`.
    pub fn fiber_counts(f: &Transformation) -> Self {
        let mut counts = vec![0u64; f.ctx().num_states()];
        for &v in f.image() {
            counts[v as usize] += 1;
        }
        Self { ctx: f.ctx(), counts }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Whether every aligned block of `q^i` consecutive parts sums to a
    /// multiple of `q^i`, for every level `i`.
    pub fn is_proper(&self) -> bool {
        let q = self.ctx.q() as u64;
        let mut modulus = 1u64;
        for _ in 0..=self.ctx.n() {
            for block in self.counts.chunks(modulus as usize) {
                if block.iter().sum::<u64>() % modulus != 0 {
                    return false;
                }
            }
            modulus *= q;
        }
        true
    }
}

/// Reorders a partition so it becomes proper. Returns the proper partition
/// and the permutation `h` with `sorted[a] = original[h(a)]`.
///
/// Works level by level: blocks of the current level are gathered into
/// groups of `q` whose values sum to a multiple of `q`, extracting a
/// zero-sum group from the leading `2q - 1` blocks while more than `q`
/// remain.
pub fn sort_properly(p: &Partition) -> Result<(Partition, Transformation)> {
    let ctx = p.ctx();
    let q = ctx.q();
    let mut order: Vec<usize> = (0..ctx.num_states()).collect();
    let mut values: Vec<u64> = p.counts().to_vec();
    let mut block = 1usize;
    for _level in 0..ctx.n() {
        let mut remaining: Vec<usize> = (0..values.len()).collect();
        let mut grouped: Vec<usize> = Vec::with_capacity(values.len());
        while remaining.len() > q {
            let window: Vec<u64> = remaining[..2 * q - 1].iter().map(|&b| values[b]).collect();
            let pick = zero_sum_subset(q, &window)?;
            for &w in &pick {
                grouped.push(remaining[w]);
            }
            for &w in pick.iter().rev() {
                remaining.remove(w);
            }
        }
        grouped.append(&mut remaining);

        let mut new_order = Vec::with_capacity(order.len());
        let mut new_values = Vec::with_capacity(values.len() / q);
        for chunk in grouped.chunks(q) {
            let sum: u64 = chunk.iter().map(|&b| values[b]).sum();
            debug_assert_eq!(sum % q as u64, 0);
            new_values.push(sum / q as u64);
            for &b in chunk {
                new_order.extend_from_slice(&order[b * block..(b + 1) * block]);
            }
        }
        order = new_order;
        values = new_values;
        block *= q;
    }
    let sorted = Partition::new(ctx, order.iter().map(|&pos| p.counts()[pos]).collect())?;
    debug_assert!(sorted.is_proper());
    let h = Transformation::from_image(ctx, order.into_iter().map(|pos| pos as u32).collect())?;
    Ok((sorted, h))
}

/// The transformation collapsing the `a`-th interval of a proper partition
/// onto the state `a`: states `[sum(counts[..a]), sum(counts[..=a]))` all
/// map to `a`.
///
/// Properness makes the map block-compatible: states agreeing on registers
/// `i..n` have images agreeing there too. That property is asserted.
pub fn interval_transformation(p: &Partition) -> Result<Transformation> {
    if !p.is_proper() {
        return Err(Error::InvalidInput(
            "interval transformation requires a proper partition".into(),
        ));
    }
    let ctx = p.ctx();
    let mut image = Vec::with_capacity(ctx.num_states());
    for (a, &count) in p.counts().iter().enumerate() {
        image.extend(std::iter::repeat_n(a as u32, count as usize));
    }
    let t = Transformation::from_image(ctx, image)?;
    let mut block = 1usize;
    for _ in 1..ctx.n() {
        block *= ctx.q();
        for chunk in t.image().chunks(block) {
            let lead = chunk[0] as usize / block;
            assert!(
                chunk.iter().all(|&v| v as usize / block == lead),
                "proper partition must collapse aligned blocks into one block"
            );
        }
    }
    Ok(t)
}

/// Program of at most `4n - 3` instructions computing any transformation.
///
/// Permutations delegate to [`permutation_program`]. Otherwise `f` factors
/// as `h ∘ Λ ∘ g` — `g` a permutation sending each fiber of `f` onto an
/// interval of the properly sorted fiber-size partition, `Λ` the interval
/// collapse, `h` the sorting permutation — and the first half of `h`'s
/// schedule fuses with `Λ` into `n` updates on `y_1..y_n`.
pub fn transformation_program(f: &Transformation) -> Result<Program> {
    let ctx = f.ctx();
    if f.is_permutation() {
        return permutation_program(f);
    }
    if ctx.n() == 1 {
        let mut current = Transformation::identity(ctx);
        let mut steps = Vec::new();
        emit_update(&mut current, &mut steps, 0, &f.coordinate_function(0))?;
        return Program::new(ctx, 0, steps);
    }
    if ctx.num_states() <= 4 {
        // At this scale the exact search is instant and beats the general
        // construction (any transformation of a 4-state file needs at most
        // 3 steps, below the 4n - 3 schedule's reach).
        return crate::oracle::shortest_program(f);
    }

    let n = ctx.n();
    let mu = Partition::fiber_counts(f);
    let (lambda, h) = sort_properly(&mu)?;
    let lam = interval_transformation(&lambda)?;

    // g: within each fiber f^{-1}(h(a)), states go to the interval of a in
    // increasing order.
    let h_inv = h.inverse()?;
    let mut next = vec![0u64; ctx.num_states()];
    let mut acc = 0u64;
    for a in ctx.states() {
        next[a] = acc;
        acc += lambda.counts()[a];
    }
    let mut g_image = vec![0u32; ctx.num_states()];
    for x in ctx.states() {
        let a = h_inv.apply(f.apply(x));
        g_image[x] = next[a] as u32;
        next[a] += 1;
    }
    let g = Transformation::from_image(ctx, g_image)?;
    let factored = h.compose(&lam).compose(&g);
    assert_eq!(&factored, f, "fiber factorization must reproduce the target");

    let g_steps = permutation_steps(&g)?;
    let h_steps = permutation_steps(&h)?;
    let mut h_up = Transformation::identity(ctx);
    for s in &h_steps[..n] {
        h_up = s.to_transformation().compose(&h_up);
    }

    // The first half of h's schedule composed with the interval collapse is
    // again computable by n updates on y_1..y_n.
    let fused = h_up.compose(&lam);
    let mut current = Transformation::identity(ctx);
    let mut lam_steps = Vec::with_capacity(n);
    for i in 0..n {
        emit_update(&mut current, &mut lam_steps, i, &fused.coordinate_function(i))?;
    }
    debug_assert_eq!(current, fused);

    let mut steps = g_steps;
    steps.extend(lam_steps);
    steps.extend_from_slice(&h_steps[n..]);
    let p = Program::new(ctx, 0, steps)?;
    assert!(p.len() <= 4 * n - 3);
    debug_assert!(p.computes(f));
    Ok(p)
}

/// Whether a coordinate table is in canonical order: its values first
/// appear in increasing order when states are scanned by index.
pub fn is_ordered(table: &[u16], q: usize) -> bool {
    let mut next = 0u16;
    for &v in table {
        if v == next {
            next += 1;
        } else if v > next {
            return false;
        }
        if next as usize == q {
            break;
        }
    }
    true
}

/// `f` split into an ordered base and per-register alphabet permutations:
/// `f_i = scalars[i] ∘ base_i` with every base coordinate ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDecomposition {
    base: Transformation,
    scalars: Vec<Vec<u16>>,
}

impl OrderedDecomposition {
    pub fn base(&self) -> &Transformation {
        &self.base
    }

    /// `scalars[i][a]` is the alphabet permutation applied on top of the
    /// ordered base of register `i`.
    pub fn scalars(&self) -> &[Vec<u16>] {
        &self.scalars
    }

    /// Number of nearly trivial registers: base coordinate trivial but the
    /// original one is not.
    pub fn nearly_trivial_count(&self) -> usize {
        let ctx = self.base.ctx();
        (0..ctx.n())
            .filter(|&i| {
                let base_trivial = ctx
                    .states()
                    .all(|s| ctx.digit(self.base.apply(s), i) == ctx.digit(s, i));
                base_trivial && (0..ctx.q() as u16).any(|a| self.scalars[i][a as usize] != a)
            })
            .count()
    }
}

fn order_coordinate(q: usize, table: &[u16]) -> (Vec<u16>, Vec<u16>) {
    let mut label_of: Vec<Option<u16>> = vec![None; q];
    let mut sigma: Vec<u16> = Vec::with_capacity(q);
    for &v in table {
        if label_of[v as usize].is_none() {
            label_of[v as usize] = Some(sigma.len() as u16);
            sigma.push(v);
        }
    }
    for v in 0..q as u16 {
        if label_of[v as usize].is_none() {
            label_of[v as usize] = Some(sigma.len() as u16);
            sigma.push(v);
        }
    }
    let base = table.iter().map(|&v| label_of[v as usize].unwrap()).collect();
    (base, sigma)
}

/// Unique decomposition `f_i = sigma_i ∘ f*_i` with every `f*_i` ordered.
/// Requires every coordinate function to be balanced.
pub fn ordered_decompose(f: &Transformation) -> Result<OrderedDecomposition> {
    let ctx = f.ctx();
    let mut base_coords = Vec::with_capacity(ctx.n());
    let mut scalars = Vec::with_capacity(ctx.n());
    for i in 0..ctx.n() {
        let table = f.coordinate_function(i);
        let as_labels: Vec<usize> = table.iter().map(|&v| v as usize).collect();
        if !is_balanced(&as_labels, ctx.q()) {
            return Err(Error::InvalidInput(format!(
                "coordinate {} is not balanced",
                i + 1
            )));
        }
        let (base, sigma) = order_coordinate(ctx.q(), &table);
        base_coords.push(base);
        scalars.push(sigma);
    }
    let base = Transformation::from_fn(ctx, |s| {
        let digits: Vec<u16> = base_coords.iter().map(|c| c[s]).collect();
        ctx.state_from_digits(&digits).expect("digits in range")
    });
    Ok(OrderedDecomposition { base, scalars })
}

fn invert_alphabet_perm(sigma: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; sigma.len()];
    for (label, &v) in sigma.iter().enumerate() {
        inv[v as usize] = label as u16;
    }
    inv
}

/// Positions (if any) of the last step updating each register.
fn final_update_positions(p: &Program) -> Vec<Option<usize>> {
    let mut last = vec![None; p.extended_ctx().n()];
    for (pos, step) in p.steps().iter().enumerate() {
        last[step.target()] = Some(pos);
    }
    last
}

fn remap_state(ctx: Context, s: usize, maps: &[Option<&[u16]>]) -> usize {
    let mut out = s;
    for (i, m) in maps.iter().enumerate() {
        if let Some(m) = m {
            out = ctx.with_digit(out, i, m[ctx.digit(s, i) as usize]);
        }
    }
    out
}

fn convert_program(
    p: &Program,
    final_tau: &[Vec<u16>],
    read_map: &[Vec<u16>],
) -> Result<Program> {
    let ctx = p.ctx();
    let last = final_update_positions(p);
    let mut read_maps: Vec<Option<&[u16]>> = vec![None; ctx.n()];
    let mut steps = Vec::with_capacity(p.len());
    for (pos, step) in p.steps().iter().enumerate() {
        let table: Vec<u16> = ctx
            .states()
            .map(|s| step.table()[remap_state(ctx, s, &read_maps)])
            .collect();
        let is_final = last[step.target()] == Some(pos);
        let table = if is_final {
            let tau = &final_tau[step.target()];
            table.into_iter().map(|v| tau[v as usize]).collect()
        } else {
            table
        };
        steps.push(Instruction::new(ctx, step.target(), table)?);
        if is_final {
            read_maps[step.target()] = Some(&read_map[step.target()]);
        }
    }
    Program::new(ctx, 0, steps)
}

/// Rewrites a program computing `f` into one (no longer) computing the
/// ordered base of `f`.
pub fn to_base_program(p: &Program, d: &OrderedDecomposition) -> Result<Program> {
    if p.memory_cells() != 0 {
        return Err(Error::InvalidInput(
            "base conversion applies to memoryless programs".into(),
        ));
    }
    let inv: Vec<Vec<u16>> = d.scalars().iter().map(|s| invert_alphabet_perm(s)).collect();
    // Final updates get sigma^{-1} on top; later reads of that register see
    // sigma(y_i) to reconstruct the original content.
    convert_program(p, &inv, d.scalars())
}

/// Rewrites a program computing the ordered base back into one computing
/// `f`, appending at most one alphabet rewrite per nearly trivial register.
pub fn from_base_program(p: &Program, d: &OrderedDecomposition) -> Result<Program> {
    if p.memory_cells() != 0 {
        return Err(Error::InvalidInput(
            "base conversion applies to memoryless programs".into(),
        ));
    }
    let ctx = p.ctx();
    let inv: Vec<Vec<u16>> = d.scalars().iter().map(|s| invert_alphabet_perm(s)).collect();
    let converted = convert_program(p, d.scalars(), &inv)?;
    let last = final_update_positions(p);
    let mut steps: Vec<Instruction> = converted.steps().to_vec();
    for i in 0..ctx.n() {
        let sigma = &d.scalars()[i];
        let nontrivial = (0..ctx.q() as u16).any(|a| sigma[a as usize] != a);
        if last[i].is_none() && nontrivial {
            steps.push(Instruction::from_fn(ctx, i, |s| {
                sigma[ctx.digit(s, i) as usize]
            })?);
        }
    }
    Program::new(ctx, 0, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: usize, n: usize) -> Context {
        Context::new(q, n).unwrap()
    }

    fn swap2() -> Transformation {
        Transformation::from_image(ctx(2, 2), vec![0, 2, 1, 3]).unwrap()
    }

    /// Deterministic pseudo-random transformation for sweep tests.
    fn scrambled(c: Context, seed: u64) -> Transformation {
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let image = (0..c.num_states())
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 33) as usize % c.num_states()) as u32
            })
            .collect();
        Transformation::from_image(c, image).unwrap()
    }

    fn scrambled_permutation(c: Context, seed: u64) -> Transformation {
        let mut image: Vec<u32> = (0..c.num_states() as u32).collect();
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        for i in (1..image.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            image.swap(i, (s >> 33) as usize % (i + 1));
        }
        Transformation::from_image(c, image).unwrap()
    }

    #[test]
    fn transposition_ladder_lengths() {
        let c = ctx(2, 2);
        let p = transposition_program(c, 0, 3).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.computes(&Transformation::transposition(c, 0, 3)));

        // one differing register: the transposition is itself a step
        let p = transposition_program(c, 0, 2).unwrap();
        assert_eq!(p.len(), 1);

        let c3 = ctx(2, 3);
        let p = transposition_program(c3, 0, 7).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.computes(&Transformation::transposition(c3, 0, 7)));
        for s in p.steps() {
            assert!(s.is_permutation_instruction());
        }
        assert!(transposition_program(c, 1, 1).is_err());
    }

    #[test]
    fn transposition_ladders_over_bigger_alphabets() {
        let c = ctx(5, 2);
        for (a, b) in [(0, 24), (3, 17), (1, 2)] {
            let d = (0..2).filter(|&i| c.digit(a, i) != c.digit(b, i)).count();
            let p = transposition_program(c, a, b).unwrap();
            assert_eq!(p.len(), 2 * d - 1);
            assert!(p.computes(&Transformation::transposition(c, a, b)));
        }
    }

    fn is_adjacent_swap_step(instr: &Instruction) -> bool {
        let t = instr.to_transformation();
        let c = instr.ctx();
        let moved: Vec<usize> = c.states().filter(|&s| t.apply(s) != s).collect();
        if let [u, v] = moved[..] {
            if t.apply(u) != v || t.apply(v) != u {
                return false;
            }
            let q = c.q() as i64;
            let diffs: Vec<usize> = (0..c.n()).filter(|&i| c.digit(u, i) != c.digit(v, i)).collect();
            diffs.len() == 1 && {
                let d = (c.digit(u, diffs[0]) as i64 - c.digit(v, diffs[0]) as i64).rem_euclid(q);
                d == 1 || d == q - 1
            }
        } else {
            false
        }
    }

    fn is_zero_to_unit_step(instr: &Instruction) -> bool {
        let t = instr.to_transformation();
        t.apply(0) == 1 && t.ctx().states().skip(1).all(|s| t.apply(s) == s)
    }

    #[test]
    fn generator_factorization_examples() {
        let c = ctx(2, 2);
        // identity comes out empty
        assert!(generator_program(&Transformation::identity(c)).unwrap().is_empty());
        // an adjacent transposition is one generator
        let t = Transformation::transposition(c, 0, 1);
        assert_eq!(generator_program(&t).unwrap().len(), 1);
        // a rank-3 map: zero-to-unit composed with a swap
        let f = swap2().compose(&Transformation::assignment(c, 0, 1));
        let p = generator_program(&f).unwrap();
        assert!(p.computes(&f));
    }

    #[test]
    fn generator_steps_stay_in_the_generating_set() {
        for (q, n, seeds) in [(2, 2, 8u64), (3, 2, 6), (2, 3, 6)] {
            let c = ctx(q, n);
            for seed in 0..seeds {
                let f = scrambled(c, seed);
                let gens = generator_sequence(&f).unwrap();
                for g in &gens {
                    let instr = g.to_instruction(c);
                    assert!(
                        is_adjacent_swap_step(&instr) || is_zero_to_unit_step(&instr),
                        "{g:?} is not an allowed generator"
                    );
                }
                let p = generator_program(&f).unwrap();
                assert!(p.computes(&f));
            }
        }
    }

    #[test]
    fn pair_completion_examples() {
        // B = C = {0,1}: f(b,c) = b, g(b,c) = b xor c
        let f = vec![0usize, 1, 0, 1];
        let g = vec![0usize, 1, 1, 0];
        let h = complete_permutation_pair(&f, &g, 2, 2).unwrap();
        let bijective = |a: &[usize], b: &[usize]| {
            let mut seen = [false; 4];
            (0..4).all(|x| !std::mem::replace(&mut seen[a[x] * 2 + b[x]], true))
        };
        assert!(bijective(&f, &h));
        assert!(bijective(&g, &h));
        // equal maps: the two constraints coincide
        let h = complete_permutation_pair(&f, &f, 2, 2).unwrap();
        assert!(bijective(&f, &h));
        // imbalanced inputs are rejected
        assert!(complete_permutation_pair(&[0, 0, 0, 1], &g, 2, 2).is_err());
    }

    #[test]
    fn pair_completion_from_a_permutation() {
        // drop the first coordinate of a permutation of three bits and
        // complete against the plain projection
        let c = ctx(2, 3);
        let f = scrambled_permutation(c, 7);
        let proj_f: Vec<usize> = c.states().map(|x| f.apply(x) >> 1).collect();
        let proj_x: Vec<usize> = c.states().map(|x| x >> 1).collect();
        let h = complete_permutation_pair(&proj_f, &proj_x, 4, 2).unwrap();
        let mut seen = [false; 8];
        for x in c.states() {
            assert!(!std::mem::replace(&mut seen[proj_f[x] * 2 + h[x]], true));
        }
        let mut seen = [false; 8];
        for x in c.states() {
            assert!(!std::mem::replace(&mut seen[proj_x[x] * 2 + h[x]], true));
        }
    }

    /// Kept step targets must follow the up-then-down register schedule.
    fn follows_schedule(p: &Program) -> bool {
        let n = p.ctx().n();
        let schedule: Vec<usize> = (0..n - 1).chain((0..n).rev()).collect();
        let mut it = schedule.iter();
        p.steps()
            .iter()
            .all(|s| it.by_ref().any(|&want| want == s.target()))
    }

    #[test]
    fn permutation_synthesis_on_two_registers() {
        let c = ctx(2, 2);
        assert!(permutation_program(&Transformation::identity(c)).unwrap().is_empty());
        let p = permutation_program(&swap2()).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.computes(&swap2()));
        assert!(permutation_program(&Transformation::constant(c, 0)).is_err());

        // every permutation of the four states: bound, round trip, schedule,
        // and the permutation-prefix chain
        let mut image: Vec<u32> = (0..4).collect();
        permute_all(&mut image, 0, &mut |img| {
            let f = Transformation::from_image(c, img.to_vec()).unwrap();
            let p = permutation_program(&f).unwrap();
            assert!(p.len() <= 3);
            assert!(p.computes(&f));
            assert!(follows_schedule(&p));
            for prefix in p.prefix_transformations() {
                assert!(prefix.is_permutation());
            }
        });
    }

    fn permute_all(v: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
        if k == v.len() {
            visit(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute_all(v, k + 1, visit);
            v.swap(k, i);
        }
    }

    #[test]
    fn permutation_synthesis_on_bigger_files() {
        for (q, n) in [(3, 2), (2, 3), (2, 4), (4, 2)] {
            let c = ctx(q, n);
            for seed in 0..40 {
                let f = scrambled_permutation(c, seed);
                let p = permutation_program(&f).unwrap();
                assert!(p.len() < 2 * n);
                assert!(p.computes(&f));
                assert!(follows_schedule(&p));
                for s in p.steps() {
                    assert!(s.is_permutation_instruction());
                }
            }
        }
    }

    #[test]
    fn zero_sum_picks() {
        assert_eq!(zero_sum_subset(3, &[1, 1, 1, 2, 2]).unwrap(), vec![0, 1, 2]);
        assert_eq!(zero_sum_subset(2, &[0, 1, 1]).unwrap(), vec![1, 2]);
        assert_eq!(zero_sum_subset(3, &[0, 0, 0, 0, 0]).unwrap(), vec![0, 1, 2]);
        assert!(zero_sum_subset(3, &[1, 1]).is_err());
    }

    #[test]
    fn proper_sorting_identity_cases() {
        let c = ctx(2, 2);
        let uniform = Partition::new(c, vec![1, 1, 1, 1]).unwrap();
        assert!(uniform.is_proper());
        let (sorted, h) = sort_properly(&uniform).unwrap();
        assert_eq!(sorted.counts(), uniform.counts());
        assert!(h.is_identity());

        let all_in_one = Partition::new(c, vec![4, 0, 0, 0]).unwrap();
        assert!(all_in_one.is_proper());
        let (sorted, _) = sort_properly(&all_in_one).unwrap();
        assert_eq!(sorted.counts(), all_in_one.counts());
    }

    #[test]
    fn proper_sorting_worked_example() {
        // q = n = 3, counts (5,4,4,3,3,2,2,1,1,1,1,0,...,0)
        let c = ctx(3, 3);
        let mut counts = vec![5u64, 4, 4, 3, 3, 2, 2, 1, 1, 1, 1];
        counts.resize(27, 0);
        let p = Partition::new(c, counts).unwrap();
        assert!(!p.is_proper());
        let (sorted, h) = sort_properly(&p).unwrap();
        assert!(sorted.is_proper());
        // h really reorders the original counts
        for a in c.states() {
            assert_eq!(sorted.counts()[a], p.counts()[h.apply(a)]);
        }
        // the ordering (5,4,3,2,1,0,1,1,1,4,3,2,0,...,0) is proper too
        let mut known = vec![5u64, 4, 3, 2, 1, 0, 1, 1, 1, 4, 3, 2];
        known.resize(27, 0);
        assert!(Partition::new(c, known).unwrap().is_proper());
    }

    #[test]
    fn proper_sorting_random_partitions() {
        let c = ctx(3, 2);
        let mut seed = 12345u64;
        for _ in 0..50 {
            // random composition of q^n = 9
            let mut counts = vec![0u64; 9];
            for _ in 0..9 {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                counts[(seed >> 33) as usize % 9] += 1;
            }
            let p = Partition::new(c, counts.clone()).unwrap();
            let (sorted, h) = sort_properly(&p).unwrap();
            assert!(sorted.is_proper());
            assert!(h.is_permutation());
            let mut a = sorted.counts().to_vec();
            let mut b = counts;
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "sorting must preserve the multiset");
        }
    }

    #[test]
    fn interval_map_examples() {
        let c = ctx(2, 2);
        let uniform = Partition::new(c, vec![1, 1, 1, 1]).unwrap();
        assert!(interval_transformation(&uniform).unwrap().is_identity());

        let all_in_one = Partition::new(c, vec![4, 0, 0, 0]).unwrap();
        assert_eq!(
            interval_transformation(&all_in_one).unwrap(),
            Transformation::constant(c, 0)
        );

        let halves = Partition::new(c, vec![2, 2, 0, 0]).unwrap();
        assert_eq!(
            interval_transformation(&halves).unwrap().image(),
            &[0, 0, 1, 1]
        );

        let improper = Partition::new(c, vec![1, 2, 1, 0]).unwrap();
        assert!(!improper.is_proper());
        assert!(interval_transformation(&improper).is_err());
    }

    #[test]
    fn interval_map_block_property() {
        // brute-force pair check of the block property on sorted random
        // partitions
        let c = ctx(2, 3);
        let mut seed = 999u64;
        for _ in 0..25 {
            let mut counts = vec![0u64; 8];
            for _ in 0..8 {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                counts[(seed >> 33) as usize % 8] += 1;
            }
            let (sorted, _) = sort_properly(&Partition::new(c, counts).unwrap()).unwrap();
            let lam = interval_transformation(&sorted).unwrap();
            for a in c.states() {
                for b in c.states() {
                    for i in 0..3 {
                        let agree =
                            (i..3).all(|j| c.digit(a, j) == c.digit(b, j));
                        if agree {
                            let (la, lb) = (lam.apply(a), lam.apply(b));
                            assert!((i..3).all(|j| c.digit(la, j) == c.digit(lb, j)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn general_synthesis_meets_the_bound() {
        // permutations delegate
        let p = transformation_program(&swap2()).unwrap();
        assert_eq!(p.len(), 3);

        for (q, n) in [(2, 3), (3, 2), (2, 4), (3, 3)] {
            let c = ctx(q, n);
            for seed in 0..25 {
                let f = scrambled(c, seed + 1000);
                let p = transformation_program(&f).unwrap();
                assert!(p.len() <= 4 * n - 3, "{} > {}", p.len(), 4 * n - 3);
                assert!(p.computes(&f));
            }
            let constant = Transformation::constant(c, c.num_states() / 2);
            let p = transformation_program(&constant).unwrap();
            assert!(p.len() <= 4 * n - 3);
            assert!(p.computes(&constant));
        }
    }

    #[test]
    fn ordered_base_of_coordinate_functions() {
        // the swap is already ordered
        let d = ordered_decompose(&swap2()).unwrap();
        assert_eq!(d.base(), &swap2());
        assert_eq!(d.nearly_trivial_count(), 0);
        assert!(d.scalars().iter().all(|s| s == &[0, 1]));

        // f = (not x1, x2): base is the identity, one nearly trivial register
        let c = ctx(2, 2);
        let f = Transformation::from_fn(c, |s| s ^ 1);
        let d = ordered_decompose(&f).unwrap();
        assert!(d.base().is_identity());
        assert_eq!(d.scalars()[0], vec![1, 0]);
        assert_eq!(d.nearly_trivial_count(), 1);

        // unbalanced coordinates are rejected
        assert!(ordered_decompose(&Transformation::constant(c, 0)).is_err());
    }

    #[test]
    fn ordered_base_is_unique_and_reconstructs() {
        for (q, n) in [(2, 2), (3, 2), (2, 3)] {
            let c = ctx(q, n);
            for seed in 0..30 {
                let f = scrambled_permutation(c, seed);
                let d = ordered_decompose(&f).unwrap();
                for i in 0..n {
                    let base = d.base().coordinate_function(i);
                    assert!(is_ordered(&base, q));
                    let recomposed: Vec<u16> =
                        base.iter().map(|&v| d.scalars()[i][v as usize]).collect();
                    assert_eq!(recomposed, f.coordinate_function(i));
                }
            }
        }
    }

    #[test]
    fn base_conversions_preserve_semantics_and_lengths() {
        for (q, n) in [(2, 2), (3, 2)] {
            let c = ctx(q, n);
            for seed in 0..30 {
                let f = scrambled_permutation(c, seed + 500);
                let d = ordered_decompose(&f).unwrap();
                let p = permutation_program(&f).unwrap();
                let to_base = to_base_program(&p, &d).unwrap();
                assert!(to_base.computes(d.base()));
                assert!(to_base.len() <= p.len());

                let base_prog = permutation_program(d.base()).unwrap();
                let back = from_base_program(&base_prog, &d).unwrap();
                assert!(back.computes(&f));
                assert!(back.len() <= base_prog.len() + d.nearly_trivial_count());
            }
        }
    }
}
