//! Computing with scratch registers.
//!
//! A transformation of `n` registers may be computed on a wider file whose
//! extra registers end in unconstrained states. Scratch initialization is
//! treated as unknown: every program here is correct for all initial
//! scratch contents, because each cell is written before it is read.
//!
//! Also hosts the binary-instruction compiler: over bits, the memoryless
//! reach of two-input steps is exactly the affine permutations; with one
//! scratch cell, products of indicator values extend the reach to every
//! transformation over every alphabet.

use crate::context::Context;
use crate::instruction::Instruction;
use crate::program::Program;
use crate::synth::general::{complete_permutation_pair, emit_update, generator_sequence, Generator};
use crate::synth::manip::{varmap_program, VarMap, VarProgram, VarStep};
use crate::transform::Transformation;
use crate::{Error, Result};

/// The member of `D(f, m)` with constant finalization: maps `(x, s)` to
/// `(f(x), e)` for every initial scratch state `s`.
pub fn embed(f: &Transformation, m: usize, finalization: &[u16]) -> Result<Transformation> {
    let ctx = f.ctx();
    if finalization.len() != m {
        return Err(Error::InvalidInput(format!(
            "finalization vector has {} entries, expected {m}",
            finalization.len()
        )));
    }
    let wide = ctx.extended(m)?;
    if finalization.iter().any(|&e| e as usize >= ctx.q()) {
        return Err(Error::InvalidInput("finalization value out of range".into()));
    }
    let states = ctx.num_states();
    let mut scratch_part = 0usize;
    for (i, &e) in finalization.iter().enumerate() {
        scratch_part += e as usize * states * ctx.q().pow(i as u32);
    }
    Ok(Transformation::from_fn(wide, |s| {
        f.apply(s % states) + scratch_part
    }))
}

/// Appends the constant writes `y_{n+i} <- e_i`, turning a program for any
/// member of `D(f, m)` into one for the finalized embedding.
pub fn add_finalization(p: &Program, finalization: &[u16]) -> Result<Program> {
    let wide = p.extended_ctx();
    let n = p.ctx().n();
    if finalization.len() != p.memory_cells() {
        return Err(Error::InvalidInput(format!(
            "finalization vector has {} entries, expected {}",
            finalization.len(),
            p.memory_cells()
        )));
    }
    let mut steps = p.steps().to_vec();
    for (i, &e) in finalization.iter().enumerate() {
        steps.push(Instruction::from_fn(wide, n + i, |_| e)?);
    }
    Program::new(p.ctx(), p.memory_cells(), steps)
}

/// Inverse direction: removes the final write of every scratch register
/// from a program whose scratch outputs are constant, substituting the
/// constants into the steps that ran after those writes. The result is one
/// step shorter per cell and computes some member of `D(f, m)`.
pub fn strip_finalization(p: &Program) -> Result<Program> {
    let wide = p.extended_ctx();
    let (n, m) = (p.ctx().n(), p.memory_cells());
    if m == 0 {
        return Ok(p.clone());
    }
    let ext = p.extended_transformation();
    let _states = p.ctx().num_states();
    let mut constants = vec![0u16; m];
    for i in 0..m {
        let digits: Vec<u16> = wide.states().map(|s| wide.digit(ext.apply(s), n + i)).collect();
        if digits.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidInput(format!(
                "scratch register {} does not end in a constant state",
                n + i + 1
            )));
        }
        constants[i] = digits[0];
    }
    let mut last = vec![None; wide.n()];
    for (pos, step) in p.steps().iter().enumerate() {
        last[step.target()] = Some(pos);
    }
    for i in 0..m {
        if last[n + i].is_none() {
            return Err(Error::InvalidInput(format!(
                "scratch register {} is never written, so its output cannot be constant",
                n + i + 1
            )));
        }
    }
    let mut kept: Vec<Instruction> = Vec::with_capacity(p.len() - m);
    for (pos, step) in p.steps().iter().enumerate() {
        let t = step.target();
        if t >= n && last[t] == Some(pos) {
            continue;
        }
        // registers past their final (deleted) write are constant here
        let table: Vec<u16> = wide
            .states()
            .map(|s| {
                let mut z = s;
                for (i, &c) in constants.iter().enumerate() {
                    if last[n + i].unwrap() < pos {
                        z = wide.with_digit(z, n + i, c);
                    }
                }
                step.table()[z]
            })
            .collect();
        kept.push(Instruction::new(wide, t, table)?);
    }
    let stripped = Program::new(p.ctx(), m, kept)?;
    debug_assert!(
        stripped.transformation().ok() == p.transformation().ok(),
        "stripping finalization must preserve the projected transformation"
    );
    Ok(stripped)
}

/// Drops steps whose written register is never read afterwards and is not
/// an output register.
pub fn strip_dead_scratch_writes(p: &Program) -> Program {
    let wide = p.extended_ctx();
    let n = p.ctx().n();
    let mut live: Vec<bool> = (0..wide.n()).map(|i| i < n).collect();
    let mut keep = vec![false; p.len()];
    for (pos, step) in p.steps().iter().enumerate().rev() {
        if live[step.target()] {
            keep[pos] = true;
            live[step.target()] = false;
            for j in step.essential_inputs() {
                live[j] = true;
            }
        }
    }
    let steps = p
        .steps()
        .iter()
        .zip(&keep)
        .filter(|&(_s, &k)| k).map(|(s, &_k)| s.clone())
        .collect();
    Program::new(p.ctx(), p.memory_cells(), steps).expect("subset of a valid program")
}

/// Transposition of states `a` and `b` with one scratch cell in `d + 1`
/// steps: write the indicator difference, then fix each differing register
/// conditionally.
pub fn transposition_memory_program(ctx: Context, a: usize, b: usize) -> Result<Program> {
    if a == b {
        return Err(Error::InvalidInput(
            "transposition endpoints must differ".into(),
        ));
    }
    if a >= ctx.num_states() || b >= ctx.num_states() {
        return Err(Error::InvalidInput("state out of range".into()));
    }
    let wide = ctx.extended(1)?;
    let (n, q) = (ctx.n(), ctx.q() as i64);
    let states = ctx.num_states();
    let mut steps = Vec::new();
    steps.push(Instruction::from_fn(wide, n, |s| {
        let x = s % states;
        if x == a {
            1
        } else if x == b {
            (q - 1) as u16
        } else {
            0
        }
    })?);
    for i in 0..n {
        let delta = (ctx.digit(b, i) as i64 - ctx.digit(a, i) as i64).rem_euclid(q);
        if delta == 0 {
            continue;
        }
        steps.push(Instruction::from_fn(wide, i, |s| {
            let v = wide.digit(s, i) as i64 + delta * wide.digit(s, n) as i64;
            v.rem_euclid(q) as u16
        })?);
    }
    let p = Program::new(ctx, 1, steps)?;
    debug_assert!(p.computes(&Transformation::transposition(ctx, a, b)));
    Ok(p)
}

/// Copy-then-write: `n - 1` copies into scratch, then every register takes
/// its final value. At most `2n - 1` steps with `n - 1` cells.
pub fn any_memory_program(f: &Transformation) -> Result<Program> {
    let ctx = f.ctx();
    let n = ctx.n();
    let m = n - 1;
    let wide = ctx.extended(m)?;
    let states = ctx.num_states();
    let mut current = Transformation::identity(wide);
    let mut steps = Vec::new();
    for i in 0..m {
        let copy: Vec<u16> = wide.states().map(|s| wide.digit(s, i)).collect();
        emit_update(&mut current, &mut steps, n + i, &copy)?;
    }
    for i in 0..n {
        let target: Vec<u16> = wide
            .states()
            .map(|s| ctx.digit(f.apply(s % states), i))
            .collect();
        emit_update(&mut current, &mut steps, i, &target)?;
    }
    let p = strip_dead_scratch_writes(&Program::new(ctx, m, steps)?);
    assert!(p.len() < 2 * n);
    debug_assert!(p.computes(f));
    Ok(p)
}

/// Permutations with `m = n/2` scratch cells in at most `3m` steps (even
/// `n`); odd `n = 2m + 1` extends the file by one trivial register and
/// uses `m + 2` cells within `3m + 3` steps.
pub fn permutation_memory_program(f: &Transformation) -> Result<Program> {
    if !f.is_permutation() {
        return Err(Error::InvalidInput(
            "memory-aided permutation synthesis requires a bijective target".into(),
        ));
    }
    let ctx = f.ctx();
    let n = ctx.n();
    if n == 1 {
        let mut current = Transformation::identity(ctx);
        let mut steps = Vec::new();
        emit_update(&mut current, &mut steps, 0, &f.coordinate_function(0))?;
        return Program::new(ctx, 0, steps);
    }
    if n.is_multiple_of(2) {
        return even_permutation_memory(f);
    }
    let big_ctx = ctx.extended(1)?;
    let states = ctx.num_states();
    let extended = Transformation::from_fn(big_ctx, |s| f.apply(s % states) + s - s % states);
    let inner = even_permutation_memory(&extended)?;
    let p = Program::new(ctx, inner.memory_cells() + 1, inner.steps().to_vec())?;
    debug_assert!(p.computes(f));
    Ok(p)
}

fn even_permutation_memory(f: &Transformation) -> Result<Program> {
    let ctx = f.ctx();
    let (q, n, states) = (ctx.q(), ctx.n(), ctx.num_states());
    let m = n / 2;
    // Complete (f_1..f_m) and (x_{m+1}..x_n) to permutations with common
    // scratch coordinates g_1..g_m, one pair-completion per coordinate.
    let mut gs: Vec<Vec<u16>> = Vec::with_capacity(m);
    for i in 1..=m {
        let packed = |x: usize, f_side: bool| -> usize {
            let mut v = 0;
            let mut stride = 1;
            if f_side {
                let fx = f.apply(x);
                for c in 0..m {
                    v += ctx.digit(fx, c) as usize * stride;
                    stride *= q;
                }
            } else {
                for c in m..n {
                    v += ctx.digit(x, c) as usize * stride;
                    stride *= q;
                }
            }
            for g in gs.iter().take(i - 1) {
                v += g[x] as usize * stride;
                stride *= q;
            }
            v
        };
        let s1: Vec<usize> = (0..states).map(|x| packed(x, true)).collect();
        let s2: Vec<usize> = (0..states).map(|x| packed(x, false)).collect();
        let b_size = q.pow((m + i - 1) as u32);
        let h = complete_permutation_pair(&s1, &s2, b_size, states / b_size)?;
        gs.push(h.into_iter().map(|v| (v % q) as u16).collect());
    }

    let wide = ctx.extended(m)?;
    let mut current = Transformation::identity(wide);
    let mut steps = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let target: Vec<u16> = wide.states().map(|s| g[s % states]).collect();
        emit_update(&mut current, &mut steps, n + i, &target)?;
    }
    for i in 0..n {
        let target: Vec<u16> = wide
            .states()
            .map(|s| ctx.digit(f.apply(s % states), i))
            .collect();
        emit_update(&mut current, &mut steps, i, &target)?;
    }
    let p = strip_dead_scratch_writes(&Program::new(ctx, m, steps)?);
    assert!(p.len() <= 3 * m);
    debug_assert!(p.computes(f));
    Ok(p)
}

/// Shuffles with one scratch cell in at most `n - F + 1` steps: extend the
/// register map so the scratch takes register 1, compute the extended
/// shuffle, and drop the final scratch write.
pub fn varmap_memory_program(v: &VarMap) -> VarProgram {
    let n = v.n();
    if !v.is_permutation() || v.is_identity() {
        // already within n - F + 1 without touching the scratch cell
        let p = varmap_program(v);
        let steps = p
            .steps()
            .iter()
            .map(|s| {
                let mut coeffs = s.coeffs.clone();
                coeffs.push(0);
                VarStep { target: s.target, coeffs }
            })
            .collect();
        return VarProgram::from_parts(n, 1, steps);
    }
    let mut ext = v.map().to_vec();
    ext.push(0);
    let pi = VarMap::new(ext).expect("valid extension");
    let p = varmap_program(&pi);
    let mut steps = p.steps().to_vec();
    if steps.last().is_some_and(|s| s.target == n) {
        steps.pop();
    }
    VarProgram::from_parts(n, 1, steps)
}

/// Whether the step reads at most two registers (its own included).
pub fn is_binary(instr: &Instruction) -> bool {
    instr.essential_inputs().len() <= 2
}

/// Over bits only: whether `f(x) = x M + c` for some binary matrix `M` and
/// constant `c`. Fits the constant and the columns, then checks every
/// state.
pub fn is_affine(f: &Transformation) -> Result<bool> {
    let ctx = f.ctx();
    if ctx.q() != 2 {
        return Err(Error::Unsupported(
            "the affine test is defined over the binary alphabet".into(),
        ));
    }
    let c = f.apply(0);
    let cols: Vec<usize> = (0..ctx.n()).map(|i| f.apply(1 << i) ^ c).collect();
    Ok(ctx.states().all(|s| {
        let mut acc = 0usize;
        for (i, col) in cols.iter().enumerate() {
            if s >> i & 1 == 1 {
                acc ^= col;
            }
        }
        acc ^ c == f.apply(s)
    }))
}

/// Compiles `f` into binary instructions. Affine permutations over bits
/// stay memoryless (row elimination with the XOR-swap trick); everything
/// else takes one scratch cell, expanding each factorization generator
/// into an indicator-product chain of `n + 1` binary steps.
pub fn binary_program(f: &Transformation) -> Result<Program> {
    let ctx = f.ctx();
    if ctx.q() == 2 && f.is_permutation() && is_affine(f)? {
        return affine_binary_program(f);
    }
    let wide = ctx.extended(1)?;
    let (n, q) = (ctx.n(), ctx.q() as i64);
    let mut steps = Vec::new();
    for gen in generator_sequence(f)? {
        let (pivot, others): (usize, Vec<usize>) = match gen {
            Generator::AdjacentSwap { coord, .. } => {
                (coord, (0..n).filter(|&j| j != coord).collect())
            }
            Generator::ZeroToUnit => (0, (1..n).collect()),
        };
        // charge the scratch with the signed indicator of the pivot digit
        steps.push(match gen {
            Generator::AdjacentSwap { a, b, coord } => {
                let (da, db) = (ctx.digit(a, coord), ctx.digit(b, coord));
                Instruction::from_fn(wide, n, move |s| {
                    let y = wide.digit(s, coord);
                    if y == da {
                        1
                    } else if y == db {
                        (q - 1) as u16
                    } else {
                        0
                    }
                })?
            }
            Generator::ZeroToUnit => Instruction::from_fn(wide, n, |s| {
                u16::from(wide.digit(s, 0) == 0)
            })?,
        });
        // multiply in the remaining digit indicators one register at a time
        let reference = match gen {
            Generator::AdjacentSwap { a, .. } => a,
            Generator::ZeroToUnit => 0,
        };
        for j in others {
            let want = ctx.digit(reference, j);
            steps.push(Instruction::from_fn(wide, n, move |s| {
                if wide.digit(s, j) == want {
                    wide.digit(s, n)
                } else {
                    0
                }
            })?);
        }
        // apply the accumulated indicator to the pivot register
        let delta = match gen {
            Generator::AdjacentSwap { a, b, coord } => {
                (ctx.digit(b, coord) as i64 - ctx.digit(a, coord) as i64).rem_euclid(q)
            }
            Generator::ZeroToUnit => 1,
        };
        steps.push(Instruction::from_fn(wide, pivot, move |s| {
            let v = wide.digit(s, pivot) as i64 + delta * wide.digit(s, n) as i64;
            v.rem_euclid(q) as u16
        })?);
    }
    let p = Program::from_steps_raw(ctx, 1, steps)?;
    debug_assert!(p.computes(f));
    debug_assert!(p.steps().iter().all(is_binary));
    Ok(p)
}

/// Row elimination over bits: factor the matrix of an affine permutation
/// into two-register XOR updates, swaps expanded to three of them, then
/// flip the constant bits.
fn affine_binary_program(f: &Transformation) -> Result<Program> {
    let ctx = f.ctx();
    let n = ctx.n();
    let c = f.apply(0);
    // rows[i] = bitmask of inputs feeding output register i
    let mut rows: Vec<u32> = vec![0; n];
    for j in 0..n {
        let col = f.apply(1 << j) ^ c;
        for (i, row) in rows.iter_mut().enumerate() {
            *row |= (((col >> i) & 1) as u32) << j;
        }
    }
    // reduce to the identity, recording row additions; the program is the
    // record reversed (every XOR add is its own inverse)
    let mut ops: Vec<(usize, usize)> = Vec::new();
    let mut w = rows;
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| w[r] >> col & 1 == 1)
            .expect("permutation matrices are nonsingular");
        if pivot != col {
            // swap rows col and pivot via three additions
            for &(a, b) in &[(col, pivot), (pivot, col), (col, pivot)] {
                w[a] ^= w[b];
                ops.push((a, b));
            }
        }
        for r in 0..n {
            if r != col && w[r] >> col & 1 == 1 {
                w[r] ^= w[col];
                ops.push((r, col));
            }
        }
    }
    debug_assert!(w.iter().enumerate().all(|(i, &r)| r == 1 << i));

    let mut steps = Vec::with_capacity(ops.len() + n);
    for &(i, j) in ops.iter().rev() {
        steps.push(Instruction::from_fn(ctx, i, move |s| {
            ctx.digit(s, i) ^ ctx.digit(s, j)
        })?);
    }
    for i in 0..n {
        if c >> i & 1 == 1 {
            steps.push(Instruction::from_fn(ctx, i, move |s| {
                ctx.digit(s, i) ^ 1
            })?);
        }
    }
    let p = Program::from_steps_raw(ctx, 0, steps)?;
    debug_assert!(p.computes(f));
    debug_assert!(p.steps().iter().all(is_binary));
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::general::transposition_program;

    fn ctx(q: usize, n: usize) -> Context {
        Context::new(q, n).unwrap()
    }

    fn swap2() -> Transformation {
        let c = ctx(2, 2);
        Transformation::from_fn(c, |s| {
            let d = c.digits_of(s);
            c.state_from_digits(&[d[1], d[0]]).unwrap()
        })
    }

    #[test]
    fn embedding_examples() {
        let c = ctx(2, 2);
        let id = Transformation::identity(c);
        // m = 0 keeps the transformation
        assert_eq!(embed(&id, 0, &[]).unwrap(), id);
        // identity with one zeroed cell fixes registers 1, 2 and clears 3
        let h = embed(&id, 1, &[0]).unwrap();
        let wide = ctx(2, 3);
        for s in wide.states() {
            assert_eq!(h.apply(s), s % 4);
        }
        let h1 = embed(&id, 1, &[1]).unwrap();
        for s in wide.states() {
            assert_eq!(h1.apply(s), s % 4 + 4);
        }
    }

    #[test]
    fn finalization_round_trip() {
        let c = ctx(2, 2);
        let (a, b) = (0, 3);
        let p = transposition_memory_program(c, a, b).unwrap();
        let e = vec![0u16];
        let finalized = add_finalization(&p, &e).unwrap();
        assert_eq!(finalized.len(), p.len() + 1);
        assert_eq!(
            finalized.extended_transformation(),
            embed(&Transformation::transposition(c, a, b), 1, &e).unwrap()
        );
        let stripped = strip_finalization(&finalized).unwrap();
        assert_eq!(stripped.len(), finalized.len() - 1);
        assert!(stripped.computes(&Transformation::transposition(c, a, b)));
        // a program with scratch-dependent output cannot be stripped
        assert!(strip_finalization(&p).is_err());
    }

    #[test]
    fn memory_transposition_lengths() {
        // distance 2 with one cell: 3 steps
        let c = ctx(2, 2);
        let p = transposition_memory_program(c, 0, 3).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.memory_cells(), 1);
        // distance 1: 2 steps, one more than without memory
        let p = transposition_memory_program(c, 0, 1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(transposition_program(c, 0, 1).unwrap().len(), 1);
        // complementary states of three bits: 4 steps, verified over all
        // inputs and scratch values by `computes`
        let c3 = ctx(2, 3);
        let p = transposition_memory_program(c3, 0, 7).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.computes(&Transformation::transposition(c3, 0, 7)));
    }

    #[test]
    fn copy_then_write_bound() {
        let c = ctx(2, 3);
        for seed in 0..64usize {
            let f = Transformation::from_fn(c, |s| (s * 5 + seed * (s + 3)) % 8);
            let p = any_memory_program(&f).unwrap();
            assert!(p.len() <= 5);
            assert_eq!(p.memory_cells(), 2);
            assert!(p.computes(&f));
        }
        // identity collapses to nothing
        let id = Transformation::identity(c);
        assert!(any_memory_program(&id).unwrap().is_empty());
        // constants need only the writes
        let constant = Transformation::constant(c, 5);
        let p = any_memory_program(&constant).unwrap();
        assert!(p.len() <= 5);
        assert!(p.computes(&constant));
    }

    #[test]
    fn permutation_memory_two_registers() {
        let c = ctx(2, 2);
        let mut image: Vec<u32> = (0..4).collect();
        // all 24 permutations of four states
        let mut count = 0;
        permute(&mut image, 0, &mut |img| {
            let f = Transformation::from_image(c, img.to_vec()).unwrap();
            let p = permutation_memory_program(&f).unwrap();
            assert!(p.len() <= 3);
            assert!(p.memory_cells() <= 1);
            assert!(p.computes(&f));
            count += 1;
        });
        assert_eq!(count, 24);
    }

    fn permute(v: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
        if k == v.len() {
            visit(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, visit);
            v.swap(k, i);
        }
    }

    #[test]
    fn permutation_memory_identity_is_empty() {
        let c = ctx(2, 4);
        let id = Transformation::identity(c);
        assert!(permutation_memory_program(&id).unwrap().is_empty());
    }

    #[test]
    fn permutation_memory_odd_case() {
        let c = ctx(2, 3);
        // a handful of permutations of the 8 states
        for shift in 1..8usize {
            let f = Transformation::from_fn(c, |s| (s + shift) % 8);
            let p = permutation_memory_program(&f).unwrap();
            // n = 2m+1 with m = 1: at most 3m+3 = 6 steps, m+2 = 3 cells
            assert_eq!(p.memory_cells(), 3);
            assert!(p.len() <= 6);
            assert!(p.computes(&f));
        }
    }

    #[test]
    fn varmap_memory_drops_the_final_write() {
        let v = VarMap::parse_cycles(4, "(1 2)(3 4)").unwrap();
        let p = varmap_memory_program(&v);
        assert_eq!(p.memory_cells(), 1);
        assert_eq!(p.len(), 5);
        let prog = p.to_program(3).unwrap();
        assert!(prog.computes(&v.transformation(3).unwrap()));
        // identity stays empty
        let id = VarMap::from_images_one_based(&[1, 2]).unwrap();
        assert!(varmap_memory_program(&id).is_empty());
        // m transpositions drop from 3m to 2m+1
        for m in 1..5 {
            let text: String =
                (0..m).map(|i| format!("({} {})", 2 * i + 1, 2 * i + 2)).collect();
            let v = VarMap::parse_cycles(2 * m, &text).unwrap();
            let p = varmap_memory_program(&v);
            assert_eq!(p.len(), 2 * m + 1);
            assert!(p.verifies_shuffle(2, &v, 0));
        }
    }

    #[test]
    fn varmap_memory_example_program() {
        // y5 <- y1+y3; y1 <- y2; y2 <- y5-y3; y3 <- y4; y4 <- y5-y2
        let v = VarMap::parse_cycles(4, "(1 2)(3 4)").unwrap();
        let p = varmap_memory_program(&v);
        let want: Vec<(usize, Vec<i8>)> = vec![
            (4, vec![1, 0, 1, 0, 0]),
            (0, vec![0, 1, 0, 0, 0]),
            (1, vec![0, 0, -1, 0, 1]),
            (2, vec![0, 0, 0, 1, 0]),
            (3, vec![0, -1, 0, 0, 1]),
        ];
        let got: Vec<(usize, Vec<i8>)> =
            p.steps().iter().map(|s| (s.target, s.coeffs.clone())).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn binary_predicate() {
        let c = ctx(2, 3);
        let two = Instruction::from_fn(c, 0, |s| c.digit(s, 0) ^ c.digit(s, 1)).unwrap();
        assert!(is_binary(&two));
        let three = Instruction::from_fn(c, 0, |s| {
            c.digit(s, 0) ^ c.digit(s, 1) ^ c.digit(s, 2)
        })
        .unwrap();
        assert!(!is_binary(&three));
        let constant = Instruction::from_fn(c, 1, |_| 1).unwrap();
        assert!(is_binary(&constant));
    }

    fn toffoli() -> Transformation {
        let c = ctx(2, 3);
        Transformation::from_fn(c, |s| {
            let (a, b, t) = (s & 1, s >> 1 & 1, s >> 2 & 1);
            // register 1 flips when registers 2 and 3 are both set
            (a ^ (b & t)) | (b << 1) | (t << 2)
        })
    }

    #[test]
    fn affine_detection() {
        assert!(is_affine(&swap2()).unwrap());
        assert!(!is_affine(&toffoli()).unwrap());
        let c = ctx(2, 2);
        assert!(is_affine(&Transformation::constant(c, 2)).unwrap());
        let c3 = ctx(3, 2);
        assert!(is_affine(&Transformation::identity(c3)).is_err());
    }

    #[test]
    fn binary_swap_is_the_xor_swap() {
        let p = binary_program(&swap2()).unwrap();
        assert_eq!(p.memory_cells(), 0);
        assert_eq!(p.len(), 3);
        assert!(p.computes(&swap2()));
        for s in p.steps() {
            assert!(is_binary(s));
            assert!(s.is_permutation_instruction());
        }
    }

    #[test]
    fn binary_adjacent_transposition_chain() {
        // a transposition of neighbours over three bits takes n + 1 = 4
        // binary steps with one cell
        let c = ctx(2, 3);
        let f = Transformation::transposition(c, 0, 1);
        let p = binary_program(&f).unwrap();
        assert_eq!(p.memory_cells(), 1);
        assert_eq!(p.len(), 4);
        assert!(p.computes(&f));
        assert!(p.steps().iter().all(is_binary));
    }

    #[test]
    fn binary_toffoli() {
        let f = toffoli();
        let p = binary_program(&f).unwrap();
        assert_eq!(p.memory_cells(), 1);
        assert!(p.computes(&f));
        assert!(p.steps().iter().all(is_binary));
    }

    #[test]
    fn binary_handles_general_alphabets() {
        let c = ctx(3, 2);
        let f = Transformation::from_fn(c, |s| (s * s + 2) % 9);
        let p = binary_program(&f).unwrap();
        assert!(p.computes(&f));
        assert!(p.steps().iter().all(is_binary));
    }
}
