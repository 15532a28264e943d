//! Exact procedural complexity at desk scale.
//!
//! The cost of a transformation is the length of a shortest instruction
//! sequence computing it. At small sizes this is answered exactly:
//! breadth-first search over all instruction compositions for four-state
//! files, over permutation instructions while the symmetric group has at
//! most a million elements, and depth-capped search with domination
//! pruning beyond that (every prefix of a program must dominate its
//! target, which cuts the branching hard for low-rank targets).
//!
//! Searches are single-threaded and scan generators in a fixed order, so
//! distances, histograms, and certificate programs are deterministic.

use crate::context::Context;
use crate::instruction::Instruction;
use crate::program::Program;
use crate::synth;
use crate::transform::Transformation;
use crate::{Error, Result};
use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;
use std::collections::HashMap;

/// Generator enumeration bound: tables per register, `q^(q^n)`.
const MAX_TABLES_PER_COORD: usize = 1 << 20;
/// Full-monoid search bound on the state count.
const MAX_MONOID_STATES: usize = 4;
/// Permutation search bound on the group order.
const MAX_GROUP_ORDER: u64 = 1_000_000;

/// All non-identity instructions, ordered by (target register, table).
pub fn all_instructions(ctx: Context) -> Result<Vec<Instruction>> {
    let states = ctx.num_states();
    let q = ctx.q();
    let tables = (q as u128).checked_pow(states as u32);
    if tables.is_none() || tables.unwrap() > MAX_TABLES_PER_COORD as u128 {
        return Err(Error::Infeasible(format!(
            "enumerating instructions needs q^(q^n) <= {MAX_TABLES_PER_COORD}"
        )));
    }
    let mut out = Vec::new();
    let mut table = vec![0u16; states];
    for coord in 0..ctx.n() {
        table.iter_mut().for_each(|v| *v = 0);
        loop {
            let instr = Instruction::new(ctx, coord, table.clone())?;
            if !instr.is_identity() {
                out.push(instr);
            }
            // advance the table in lexicographic order
            let mut pos = states;
            while pos > 0 {
                pos -= 1;
                if (table[pos] as usize) + 1 < q {
                    table[pos] += 1;
                    break;
                }
                table[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    Ok(out)
}

/// All non-identity permutation instructions, ordered by (target register,
/// table): one alphabet permutation per setting of the other registers.
pub fn permutation_instructions(ctx: Context) -> Result<Vec<Instruction>> {
    let q = ctx.q();
    let states = ctx.num_states();
    let contexts = states / q;
    let perm_count = (1..=q as u128).product::<u128>();
    let total = perm_count.checked_pow(contexts as u32);
    if total.is_none() || total.unwrap() > MAX_TABLES_PER_COORD as u128 {
        return Err(Error::Infeasible(format!(
            "enumerating permutation instructions needs (q!)^(q^(n-1)) <= {MAX_TABLES_PER_COORD}"
        )));
    }
    let perms: Vec<Vec<u16>> = (0..q as u16).permutations(q).collect();
    let mut out = Vec::new();
    for coord in 0..ctx.n() {
        // context id of a state: its index after deleting the target digit
        let ctx_id: Vec<usize> = ctx
            .states()
            .map(|s| {
                let low = s % ctx.q().pow(coord as u32);
                let high = s / ctx.q().pow(coord as u32 + 1);
                low + high * ctx.q().pow(coord as u32)
            })
            .collect();
        let mut choice = vec![0usize; contexts];
        loop {
            let table: Vec<u16> = ctx
                .states()
                .map(|s| perms[choice[ctx_id[s]]][ctx.digit(s, coord) as usize])
                .collect();
            let instr = Instruction::new(ctx, coord, table)?;
            if !instr.is_identity() {
                out.push(instr);
            }
            let mut pos = contexts;
            while pos > 0 {
                pos -= 1;
                if choice[pos] + 1 < perms.len() {
                    choice[pos] += 1;
                    break;
                }
                choice[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    Ok(out)
}

struct Node {
    image: Vec<u32>,
    dist: u32,
    parent: Option<(usize, usize)>,
}

/// Breadth-first exploration of everything reachable from the identity by
/// composing generator instructions. Distances are exact shortest program
/// lengths over the generator set.
pub struct CayleyBfs {
    ctx: Context,
    gens: Vec<Instruction>,
    nodes: Vec<Node>,
    index: HashMap<Vec<u32>, usize>,
}

impl CayleyBfs {
    pub fn with_generators(ctx: Context, gens: Vec<Instruction>) -> Self {
        let mut bfs = CayleyBfs { ctx, gens, nodes: Vec::new(), index: HashMap::new() };
        bfs.explore();
        bfs
    }

    /// Over all instructions; exact for any transformation of a small file.
    pub fn monoid(ctx: Context) -> Result<Self> {
        if ctx.num_states() > MAX_MONOID_STATES {
            return Err(Error::Infeasible(format!(
                "full search over all transformations needs q^n <= {MAX_MONOID_STATES}"
            )));
        }
        Ok(Self::with_generators(ctx, all_instructions(ctx)?))
    }

    /// Over permutation instructions; exact for permutations while the
    /// symmetric group stays enumerable.
    pub fn permutations(ctx: Context) -> Result<Self> {
        let order = (1..=ctx.num_states() as u64)
            .try_fold(1u64, |acc, k| acc.checked_mul(k))
            .filter(|&o| o <= MAX_GROUP_ORDER);
        if order.is_none() {
            return Err(Error::Infeasible(format!(
                "permutation search needs (q^n)! <= {MAX_GROUP_ORDER}"
            )));
        }
        Ok(Self::with_generators(ctx, permutation_instructions(ctx)?))
    }

    fn explore(&mut self) {
        let identity: Vec<u32> = (0..self.ctx.num_states() as u32).collect();
        self.index.insert(identity.clone(), 0);
        self.nodes.push(Node { image: identity, dist: 0, parent: None });
        let mut head = 0;
        while head < self.nodes.len() {
            let dist = self.nodes[head].dist;
            for g in 0..self.gens.len() {
                let image: Vec<u32> = self.nodes[head]
                    .image
                    .iter()
                    .map(|&s| self.gens[g].apply(s as usize) as u32)
                    .collect();
                if !self.index.contains_key(&image) {
                    self.index.insert(image.clone(), self.nodes.len());
                    self.nodes.push(Node { image, dist: dist + 1, parent: Some((head, g)) });
                }
            }
            head += 1;
        }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn reached(&self) -> usize {
        self.nodes.len()
    }

    pub fn distance(&self, f: &Transformation) -> Option<usize> {
        self.index.get(f.image()).map(|&id| self.nodes[id].dist as usize)
    }

    /// A shortest program for `f`, reconstructed from the search tree.
    pub fn certificate(&self, f: &Transformation) -> Option<Program> {
        let mut id = *self.index.get(f.image())?;
        let mut steps = Vec::new();
        while let Some((parent, gen)) = self.nodes[id].parent {
            steps.push(self.gens[gen].clone());
            id = parent;
        }
        steps.reverse();
        Some(Program::new(self.ctx, 0, steps).expect("generators share the context"))
    }

    pub fn max_distance(&self) -> usize {
        self.nodes.iter().map(|n| n.dist).max().unwrap_or(0) as usize
    }

    pub fn histogram(&self) -> Vec<(usize, u64)> {
        let mut counts = vec![0u64; self.max_distance() + 1];
        for n in &self.nodes {
            counts[n.dist as usize] += 1;
        }
        counts.into_iter().enumerate().collect()
    }

    /// Reached images with their distances, in discovery order.
    pub fn reached_images(&self) -> impl Iterator<Item = (&[u32], usize)> {
        self.nodes.iter().map(|n| (n.image.as_slice(), n.dist as usize))
    }
}

/// Whether `candidate` (an image table) dominates the value map `target`:
/// equal candidate entries force equal target entries.
fn dominates_map(candidate: &[u32], target: &[u32]) -> bool {
    let mut forced: Vec<u32> = vec![u32::MAX; candidate.len()];
    for (s, &key) in candidate.iter().enumerate() {
        let k = key as usize;
        if forced[k] == u32::MAX {
            forced[k] = target[s];
        } else if forced[k] != target[s] {
            return false;
        }
    }
    true
}

struct SearchNode {
    image: Vec<u32>,
    last_coord: usize,
    parent: Option<(usize, usize)>,
}

/// Depth-capped breadth-first search from the identity, expanding only
/// prefixes that dominate `prune_target` (every prefix of a program must
/// dominate the final transformation). Returns the shortest accepted
/// composition within the cap.
fn bounded_search(
    ctx: Context,
    gens: &[Instruction],
    prune_target: &[u32],
    accept: impl Fn(&[u32]) -> bool,
    cap: usize,
) -> (Option<(usize, Vec<Instruction>)>, usize) {
    let identity: Vec<u32> = (0..ctx.num_states() as u32).collect();
    let mut expanded = 0usize;
    if accept(&identity) {
        return (Some((0, Vec::new())), expanded);
    }
    let mut nodes = vec![SearchNode { image: identity.clone(), last_coord: usize::MAX, parent: None }];
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    seen.insert(identity, ());
    let mut frontier = vec![0usize];
    for depth in 1..=cap {
        let mut next = Vec::new();
        for &id in &frontier {
            expanded += 1;
            for (g, gen) in gens.iter().enumerate() {
                if gen.target() == nodes[id].last_coord {
                    // consecutive updates of one register merge into one;
                    // no shortest program contains them
                    continue;
                }
                let image: Vec<u32> = nodes[id]
                    .image
                    .iter()
                    .map(|&s| gen.apply(s as usize) as u32)
                    .collect();
                if seen.contains_key(&image) || !dominates_map(&image, prune_target) {
                    continue;
                }
                let accepted = accept(&image);
                seen.insert(image.clone(), ());
                nodes.push(SearchNode {
                    image,
                    last_coord: gen.target(),
                    parent: Some((id, g)),
                });
                let new_id = nodes.len() - 1;
                if accepted {
                    let mut steps = Vec::with_capacity(depth);
                    let mut cur = new_id;
                    while let Some((p, g)) = nodes[cur].parent {
                        steps.push(gens[g].clone());
                        cur = p;
                    }
                    steps.reverse();
                    return (Some((depth, steps)), expanded);
                }
                next.push(new_id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    (None, expanded)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Depth cap for sizes beyond the exhaustive gates. Searches that
    /// exhaust the cap report a bracket instead of an exact value.
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityBound {
    Exact(usize),
    /// The target needs at least `lower` steps; `upper` comes from the
    /// general synthesizer when available.
    Bracket { lower: usize, upper: Option<usize> },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    pub expanded: usize,
    pub reached: usize,
}

#[derive(Debug, Clone)]
pub struct ComplexityReport {
    pub target: String,
    pub bound: ComplexityBound,
    pub certificate: Option<Program>,
    pub stats: SearchStats,
}

impl ComplexityReport {
    pub fn exact(&self) -> Option<usize> {
        match self.bound {
            ComplexityBound::Exact(l) => Some(l),
            ComplexityBound::Bracket { .. } => None,
        }
    }
}

fn feasibility_guidance() -> Error {
    Error::Infeasible(
        "exact search is gated: q^n <= 4 for arbitrary transformations, (q^n)! <= 10^6 \
         for permutations; pass a depth cap to run bounded search elsewhere"
            .into(),
    )
}

fn describe(f: &Transformation) -> String {
    format!(
        "transformation of A^{} (q = {}), rank {}",
        f.ctx().n(),
        f.ctx().q(),
        f.rank()
    )
}

/// Exact shortest program length for `f`, with a certificate. Falls back
/// to a depth-capped bounded search (exact if it finds the target, a
/// bracket if the cap is exhausted) when the exhaustive gates do not
/// apply.
pub fn exact_complexity(f: &Transformation, opts: &SearchOptions) -> Result<ComplexityReport> {
    let ctx = f.ctx();
    if ctx.num_states() <= MAX_MONOID_STATES {
        let bfs = CayleyBfs::monoid(ctx)?;
        let dist = bfs.distance(f).expect("every transformation is computable");
        return Ok(ComplexityReport {
            target: describe(f),
            bound: ComplexityBound::Exact(dist),
            certificate: bfs.certificate(f),
            stats: SearchStats { expanded: bfs.reached(), reached: bfs.reached() },
        });
    }
    let group_small = (1..=ctx.num_states() as u64)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .is_some_and(|o| o <= MAX_GROUP_ORDER);
    if f.is_permutation() && group_small {
        let bfs = CayleyBfs::permutations(ctx)?;
        let dist = bfs.distance(f).expect("permutation instructions generate the group");
        return Ok(ComplexityReport {
            target: describe(f),
            bound: ComplexityBound::Exact(dist),
            certificate: bfs.certificate(f),
            stats: SearchStats { expanded: bfs.reached(), reached: bfs.reached() },
        });
    }
    let Some(cap) = opts.max_depth else {
        return Err(feasibility_guidance());
    };
    let gens = all_instructions(ctx)?;
    let accept_image: Vec<u32> = f.image().to_vec();
    let (found, expanded) =
        bounded_search(ctx, &gens, f.image(), |img| img == &accept_image[..], cap);
    match found {
        Some((dist, steps)) => Ok(ComplexityReport {
            target: describe(f),
            bound: ComplexityBound::Exact(dist),
            certificate: Some(Program::new(ctx, 0, steps)?),
            stats: SearchStats { expanded, reached: 0 },
        }),
        None => {
            let upper = synth::transformation_program(f).ok().map(|p| p.len());
            Ok(ComplexityReport {
                target: describe(f),
                bound: ComplexityBound::Bracket { lower: cap + 1, upper },
                certificate: None,
                stats: SearchStats { expanded, reached: 0 },
            })
        }
    }
}

/// Shortest length of a program computing `f` with `m` scratch registers:
/// the search accepts any transformation of the wide file whose first `n`
/// registers behave as `f` for every scratch content.
pub fn exact_complexity_with_memory(
    f: &Transformation,
    m: usize,
    opts: &SearchOptions,
) -> Result<ComplexityReport> {
    if m == 0 {
        return exact_complexity(f, opts);
    }
    let ctx = f.ctx();
    let wide = ctx.extended(m)?;
    let Some(cap) = opts.max_depth else {
        return Err(feasibility_guidance());
    };
    let gens = all_instructions(wide)?;
    let states = ctx.num_states();
    let lifted: Vec<u32> = wide.states().map(|s| f.apply(s % states) as u32).collect();
    let accept = |img: &[u32]| {
        img.iter()
            .enumerate()
            .all(|(s, &v)| v as usize % states == f.apply(s % states))
    };
    let (found, expanded) = bounded_search(wide, &gens, &lifted, accept, cap);
    match found {
        Some((dist, steps)) => Ok(ComplexityReport {
            target: format!("{} with {m} scratch registers", describe(f)),
            bound: ComplexityBound::Exact(dist),
            certificate: Some(Program::new(ctx, m, steps)?),
            stats: SearchStats { expanded, reached: 0 },
        }),
        None => Ok(ComplexityReport {
            target: format!("{} with {m} scratch registers", describe(f)),
            bound: ComplexityBound::Bracket { lower: cap + 1, upper: None },
            certificate: None,
            stats: SearchStats { expanded, reached: 0 },
        }),
    }
}

/// Word distance between two permutations: the length of a shortest
/// program turning `g` into `f`.
pub fn word_distance(
    f: &Transformation,
    g: &Transformation,
    opts: &SearchOptions,
) -> Result<ComplexityReport> {
    if !f.is_permutation() || !g.is_permutation() {
        return Err(Error::InvalidInput(
            "the word metric is defined on permutations".into(),
        ));
    }
    exact_complexity(&f.compose(&g.inverse()?), opts)
}

/// A shortest program for `f`, for files small enough to search the full
/// transformation monoid.
pub fn shortest_program(f: &Transformation) -> Result<Program> {
    let bfs = CayleyBfs::monoid(f.ctx())?;
    Ok(bfs.certificate(f).expect("every transformation is computable"))
}

#[derive(Debug, Clone)]
pub struct Census {
    pub q: usize,
    pub n: usize,
    pub permutations_only: bool,
    pub histogram: Vec<(usize, u64)>,
    pub max: usize,
    pub population: u64,
}

impl Census {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,count\n");
        for (l, count) in &self.histogram {
            out.push_str(&format!("{l},{count}\n"));
        }
        out
    }
}

/// Distribution of shortest program lengths over the whole symmetric group
/// (or the whole transformation monoid) of a small register file.
pub fn census(q: usize, n: usize, permutations_only: bool) -> Result<Census> {
    let ctx = Context::new(q, n)?;
    let bfs = if permutations_only {
        CayleyBfs::permutations(ctx)?
    } else {
        CayleyBfs::monoid(ctx)?
    };
    let expected = if permutations_only {
        (1..=ctx.num_states() as u64).product::<u64>()
    } else {
        (ctx.num_states() as u64).pow(ctx.num_states() as u32)
    };
    assert_eq!(
        bfs.reached() as u64,
        expected,
        "the instruction set must generate everything"
    );
    Ok(Census {
        q,
        n,
        permutations_only,
        histogram: bfs.histogram(),
        max: bfs.max_distance(),
        population: bfs.reached() as u64,
    })
}

#[derive(Debug, Clone)]
pub struct LinearCensus {
    pub q: usize,
    pub n: usize,
    pub histogram: Vec<(usize, u64)>,
    pub diameter: usize,
    pub group_order: u64,
    distances: HashMap<Vec<u16>, u32>,
}

impl LinearCensus {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,count\n");
        for (l, count) in &self.histogram {
            out.push_str(&format!("{l},{count}\n"));
        }
        out
    }

    /// Exact shortest linear program length for one matrix.
    pub fn distance(&self, m: &crate::synth::Mat) -> Option<usize> {
        let key: Vec<u16> = (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect();
        self.distances.get(&key).map(|&d| d as usize)
    }
}

/// Distribution of shortest linear program lengths over all nonsingular
/// matrices, by breadth-first search over single-row updates.
pub fn linear_census(q: usize, n: usize) -> Result<LinearCensus> {
    let gf = std::sync::Arc::new(crate::gf::Gf::new(q)?);
    let mut order: u64 = 1;
    let qn = (q as u64).pow(n as u32);
    for i in 0..n {
        order = order
            .checked_mul(qn - (q as u64).pow(i as u32))
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or_else(|| {
                Error::Infeasible(format!("linear census needs |GL(n,q)| <= {MAX_GROUP_ORDER}"))
            })?;
    }
    // generators: every invertible single-row update besides the identity
    let mut gens: Vec<(usize, Vec<u16>)> = Vec::new();
    for i in 0..n {
        for c in 0..q.pow(n as u32) {
            let mut v = c;
            let mut coeffs = vec![0u16; n];
            for slot in coeffs.iter_mut().rev() {
                *slot = (v % q) as u16;
                v /= q;
            }
            if coeffs[i] == 0 {
                continue;
            }
            let is_unit = coeffs.iter().enumerate().all(|(j, &a)| a == u16::from(i == j));
            if !is_unit {
                gens.push((i, coeffs));
            }
        }
    }
    let identity = synth::Mat::identity(gf.clone(), n);
    let key = |m: &synth::Mat| -> Vec<u16> {
        (0..n).flat_map(|i| m.row(i).to_vec()).collect()
    };
    let mut dist: HashMap<Vec<u16>, u32> = HashMap::new();
    dist.insert(key(&identity), 0);
    let mut queue = std::collections::VecDeque::from([identity]);
    let mut max = 0usize;
    let mut histogram = vec![1u64];
    while let Some(m) = queue.pop_front() {
        let d = dist[&key(&m)];
        for (target, coeffs) in &gens {
            let mut next = m.clone();
            let row = m.vec_mat(coeffs);
            next.set_row(*target, &row);
            let k = key(&next);
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(k) {
                e.insert(d + 1);
                let nd = (d + 1) as usize;
                if nd > max {
                    max = nd;
                    histogram.resize(max + 1, 0);
                }
                histogram[nd] += 1;
                queue.push_back(next);
            }
        }
    }
    assert_eq!(
        dist.len() as u64,
        order,
        "row updates must generate the general linear group"
    );
    Ok(LinearCensus {
        q,
        n,
        histogram: histogram.into_iter().enumerate().collect(),
        diameter: max,
        group_order: order,
        distances: dist,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstructionKind {
    Permutation,
    All,
}

/// Closed-form instruction counts: `n (q!)^(q^(n-1)) - (n-1)` permutation
/// instructions, `n q^(q^n) - (n-1)` instructions in total (the identity
/// is counted once).
pub fn count_instructions(q: usize, n: usize, kind: InstructionKind) -> Result<BigUint> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidInput("need q >= 2 and n >= 1".into()));
    }
    let (base, exponent): (BigUint, usize) = match kind {
        InstructionKind::Permutation => {
            let factorial = (1..=q as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b);
            let exp = q
                .checked_pow(n as u32 - 1)
                .ok_or_else(|| Error::Infeasible("exponent q^(n-1) overflows".into()))?;
            (factorial, exp)
        }
        InstructionKind::All => {
            let exp = q
                .checked_pow(n as u32)
                .ok_or_else(|| Error::Infeasible("exponent q^n overflows".into()))?;
            (BigUint::from(q as u64), exp)
        }
    };
    let exponent = u32::try_from(exponent)
        .map_err(|_| Error::Infeasible("exponent exceeds the supported range".into()))?;
    Ok(BigUint::from(n as u64) * base.pow(exponent) - BigUint::from(n as u64 - 1))
}

/// Instruction counts by direct enumeration (identity included once).
pub fn count_instructions_enumerated(ctx: Context, kind: InstructionKind) -> Result<u64> {
    let gens = match kind {
        InstructionKind::Permutation => permutation_instructions(ctx)?,
        InstructionKind::All => all_instructions(ctx)?,
    };
    Ok(gens.len() as u64 + 1)
}

/// The threshold `B = (n ln q - 1) / (q^-1 ln q! + q^-n ln n)` and the
/// bound `(2 pi q^n)^(-1/2)` on the proportion of permutations computable
/// in at most `floor(B)` steps.
pub fn complexity_proportion_bound(q: usize, n: usize) -> (f64, f64) {
    let qf = q as f64;
    let nf = n as f64;
    let ln_q_factorial: f64 = (2..=q).map(|k| (k as f64).ln()).sum();
    let b = (nf * qf.ln() - 1.0)
        / (ln_q_factorial / qf + (-nf * qf.ln()).exp() * nf.ln());
    let proportion = 1.0 / (2.0 * std::f64::consts::PI * qf.powf(nf)).sqrt();
    (b, proportion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: usize, n: usize) -> Context {
        Context::new(q, n).unwrap()
    }

    fn swap2() -> Transformation {
        let c = ctx(2, 2);
        Transformation::from_image(c, vec![0, 2, 1, 3]).unwrap()
    }

    #[test]
    fn instruction_counts_match_the_enumerated_sets() {
        let c22 = ctx(2, 2);
        assert_eq!(
            count_instructions(2, 2, InstructionKind::Permutation).unwrap(),
            BigUint::from(7u32)
        );
        assert_eq!(
            count_instructions_enumerated(c22, InstructionKind::Permutation).unwrap(),
            7
        );
        assert_eq!(
            count_instructions(2, 3, InstructionKind::Permutation).unwrap(),
            BigUint::from(46u32)
        );
        assert_eq!(
            count_instructions(2, 2, InstructionKind::All).unwrap(),
            BigUint::from(31u32)
        );
        assert_eq!(count_instructions_enumerated(c22, InstructionKind::All).unwrap(), 31);
    }

    #[test]
    fn exact_complexity_of_small_targets() {
        let opts = SearchOptions::default();
        let id = Transformation::identity(ctx(2, 2));
        let r = exact_complexity(&id, &opts).unwrap();
        assert_eq!(r.exact(), Some(0));
        assert!(r.certificate.unwrap().is_empty());

        let r = exact_complexity(&swap2(), &opts).unwrap();
        assert_eq!(r.exact(), Some(3));
        let cert = r.certificate.unwrap();
        assert_eq!(cert.len(), 3);
        assert!(cert.computes(&swap2()));
    }

    #[test]
    fn complementary_transposition_needs_five_steps() {
        let c = ctx(2, 3);
        let t = Transformation::transposition(c, 0, 7);
        let r = exact_complexity(&t, &SearchOptions::default()).unwrap();
        assert_eq!(r.exact(), Some(5));
        assert!(r.certificate.unwrap().computes(&t));
    }

    #[test]
    fn censuses_of_the_four_state_file() {
        let perms = census(2, 2, true).unwrap();
        assert_eq!(perms.population, 24);
        assert_eq!(perms.max, 3);
        let all = census(2, 2, false).unwrap();
        assert_eq!(all.population, 256);
        assert_eq!(all.max, 3);
        assert!(all.to_csv().starts_with("L,count\n0,1\n"));
    }

    #[test]
    fn metric_axioms_on_the_small_group() {
        let c = ctx(2, 2);
        let bfs = CayleyBfs::permutations(c).unwrap();
        let perms: Vec<Transformation> = bfs
            .reached_images()
            .map(|(img, _)| Transformation::from_image(c, img.to_vec()).unwrap())
            .collect();
        assert_eq!(perms.len(), 24);
        let d = |f: &Transformation, g: &Transformation| {
            bfs.distance(&f.compose(&g.inverse().unwrap())).unwrap()
        };
        for f in &perms {
            for g in &perms {
                assert_eq!(d(f, g), d(g, f));
                assert_eq!(d(f, g) == 0, f == g);
                for h in &perms {
                    assert!(d(f, h) <= d(f, g) + d(g, h));
                }
            }
        }
    }

    #[test]
    fn word_distance_matches_composition() {
        let opts = SearchOptions::default();
        let id = Transformation::identity(ctx(2, 2));
        let r = word_distance(&swap2(), &id, &opts).unwrap();
        assert_eq!(r.exact(), Some(3));
        let r = word_distance(&swap2(), &swap2(), &opts).unwrap();
        assert_eq!(r.exact(), Some(0));
    }

    #[test]
    fn bounded_search_with_memory() {
        // the swap of two bits with one scratch cell takes 3 steps; its
        // zero-finalized embedding takes 4
        let f = swap2();
        let opts = SearchOptions { max_depth: Some(5) };
        let r = exact_complexity_with_memory(&f, 1, &opts).unwrap();
        assert_eq!(r.exact(), Some(3));
        let cert = r.certificate.unwrap();
        assert_eq!(cert.memory_cells(), 1);
        assert!(cert.computes(&f));

        let h = crate::synth::embed(&f, 1, &[0]).unwrap();
        let r = exact_complexity(&h, &SearchOptions { max_depth: Some(5) }).unwrap();
        assert_eq!(r.exact(), Some(4));
    }

    #[test]
    fn bracket_when_the_cap_is_exhausted() {
        let c = ctx(2, 3);
        // a rank-7 shift: non-permutation of 8 states, so the exhaustive
        // gates do not apply and the bounded path runs
        let f = Transformation::from_fn(c, |s| if s == 7 { 0 } else { (s + 1) % 7 });
        let r = exact_complexity(&f, &SearchOptions { max_depth: Some(1) }).unwrap();
        match r.bound {
            ComplexityBound::Bracket { lower, upper } => {
                assert_eq!(lower, 2);
                assert!(upper.is_some());
            }
            ComplexityBound::Exact(_) => panic!("cap 1 cannot reach this target"),
        }
    }

    #[test]
    fn infeasible_without_a_cap() {
        let c = ctx(2, 3);
        let f = Transformation::constant(c, 0);
        assert!(matches!(
            exact_complexity(&f, &SearchOptions::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn linear_censuses_have_diameter_three() {
        let c = linear_census(2, 2).unwrap();
        assert_eq!(c.group_order, 6);
        assert_eq!(c.diameter, 3);
        let c = linear_census(3, 2).unwrap();
        assert_eq!(c.group_order, 48);
        assert_eq!(c.diameter, 3);
    }

    #[test]
    fn proportion_bound_values() {
        // binary alphabet, twenty registers: floor(B) + 1 = 38 = 2n - 2
        let (b, _) = complexity_proportion_bound(2, 20);
        assert_eq!(b.floor() as i64 + 1, 38);
        let (_, p) = complexity_proportion_bound(2, 2);
        assert!((p - (8.0 * std::f64::consts::PI).sqrt().recip()).abs() < 1e-12);
        // decreasing in q at fixed n
        let (b2, _) = complexity_proportion_bound(2, 10);
        let (b3, _) = complexity_proportion_bound(3, 10);
        let (b5, _) = complexity_proportion_bound(5, 10);
        assert!(b2 > b3 && b3 > b5);
    }
}
