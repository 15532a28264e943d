//! Linear programs over `GF(q)`: factoring an invertible matrix into row
//! updates `y_i <- a . y`.
//!
//! The schedule mirrors the permutation synthesizer: rows `1..n-1` first
//! receive helper vectors keeping both the unit stack and the target stack
//! invertible, then rows `n` down to `1` receive their final values. At
//! most `2n - 1` updates, every intermediate matrix nonsingular.

use crate::context::Context;
use crate::gf::Gf;
use crate::instruction::Instruction;
use crate::program::Program;
use crate::{Error, Result};
use std::sync::Arc;

/// A matrix over `GF(q)`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    gf: Arc<Gf>,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl Mat {
    pub fn new(gf: Arc<Gf>, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix data has {} entries, expected {}",
                data.len(),
                rows * cols
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v as usize >= gf.q()) {
            return Err(Error::InvalidInput(format!(
                "matrix entry {bad} out of range for GF({})",
                gf.q()
            )));
        }
        Ok(Self { gf, rows, cols, data })
    }

    pub fn zero(gf: Arc<Gf>, rows: usize, cols: usize) -> Self {
        Self { gf, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(gf: Arc<Gf>, n: usize) -> Self {
        let mut m = Self::zero(gf, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn gf(&self) -> &Arc<Gf> {
        &self.gf
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_row(&mut self, i: usize, row: &[u16]) {
        debug_assert_eq!(row.len(), self.cols);
        self.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(row);
    }

    /// `v . self` for a row vector `v` of length `rows`.
    pub fn vec_mat(&self, v: &[u16]) -> Vec<u16> {
        debug_assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(0u16, |acc, i| {
                    self.gf.add(acc, self.gf.mul(v[i], self.get(i, j)))
                })
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let gf = &self.gf;
        let mut work = self.data.clone();
        let (r, c) = (self.rows, self.cols);
        let at = |w: &Vec<u16>, i: usize, j: usize| w[i * c + j];
        let mut rank = 0;
        for col in 0..c {
            let Some(pivot) = (rank..r).find(|&i| at(&work, i, col) != 0) else {
                continue;
            };
            for j in 0..c {
                work.swap(rank * c + j, pivot * c + j);
            }
            let inv = gf.inv(at(&work, rank, col));
            for i in 0..r {
                if i != rank && at(&work, i, col) != 0 {
                    let factor = gf.mul(at(&work, i, col), inv);
                    for j in 0..c {
                        let sub = gf.mul(factor, at(&work, rank, j));
                        work[i * c + j] = gf.sub(at(&work, i, j), sub);
                    }
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("only square matrices invert".into()));
        }
        let n = self.rows;
        let gf = &self.gf;
        let mut work = self.clone();
        let mut inv = Mat::identity(self.gf.clone(), n);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&i| work.get(i, col) != 0) else {
                return Err(Error::InvalidInput("matrix is singular".into()));
            };
            for j in 0..n {
                let (a, b) = (work.get(col, j), work.get(pivot, j));
                work.set(col, j, b);
                work.set(pivot, j, a);
                let (a, b) = (inv.get(col, j), inv.get(pivot, j));
                inv.set(col, j, b);
                inv.set(pivot, j, a);
            }
            let scale = gf.inv(work.get(col, col));
            for j in 0..n {
                work.set(col, j, gf.mul(work.get(col, j), scale));
                inv.set(col, j, gf.mul(inv.get(col, j), scale));
            }
            for i in 0..n {
                if i != col && work.get(i, col) != 0 {
                    let factor = work.get(i, col);
                    for j in 0..n {
                        let w = gf.sub(work.get(i, j), gf.mul(factor, work.get(col, j)));
                        work.set(i, j, w);
                        let v = gf.sub(inv.get(i, j), gf.mul(factor, inv.get(col, j)));
                        inv.set(i, j, v);
                    }
                }
            }
        }
        Ok(inv)
    }

    fn from_row_list(gf: Arc<Gf>, rows: &[&[u16]]) -> Mat {
        let cols = rows[0].len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Mat { gf, rows: rows.len(), cols, data }
    }
}

/// A single row update `y_target <- coeffs . y`. Invertible exactly when
/// the coefficient on the target register is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowUpdate {
    pub target: usize,
    pub coeffs: Vec<u16>,
}

impl RowUpdate {
    pub fn is_invertible(&self) -> bool {
        self.coeffs[self.target] != 0
    }
}

/// A sequence of row updates over `n` registers plus `memory` scratch
/// registers. The register contents stay linear in the extended input
/// `(x, s)`, so verification is a matrix identity rather than a state
/// sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowProgram {
    gf: Arc<Gf>,
    n: usize,
    memory: usize,
    steps: Vec<RowUpdate>,
}

impl RowProgram {
    pub fn new(gf: Arc<Gf>, n: usize, memory: usize, steps: Vec<RowUpdate>) -> Result<Self> {
        let width = n + memory;
        for s in &steps {
            if s.target >= width || s.coeffs.len() != width {
                return Err(Error::InvalidInput(
                    "row update does not match the register width".into(),
                ));
            }
        }
        Ok(Self { gf, n, memory, steps })
    }

    pub fn gf(&self) -> &Arc<Gf> {
        &self.gf
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

    pub fn steps(&self) -> &[RowUpdate] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Register contents after all steps, as a `width x width` matrix over
    /// the extended input `(x, s)`; starts from the identity.
    pub fn content_matrix(&self) -> Mat {
        let mut content = Mat::identity(self.gf.clone(), self.width());
        for s in &self.steps {
            let row = content.vec_mat(&s.coeffs);
            content.set_row(s.target, &row);
        }
        content
    }

    /// Whether the first `n` registers end up holding `M x`, independent of
    /// the initial scratch contents.
    pub fn computes(&self, m: &Mat) -> bool {
        if m.rows() != self.n || m.cols() != self.n {
            return false;
        }
        let content = self.content_matrix();
        (0..self.n).all(|i| {
            (0..self.width()).all(|j| {
                let want = if j < self.n { m.get(i, j) } else { 0 };
                content.get(i, j) == want
            })
        })
    }

    /// Materializes the updates as instruction tables.
    pub fn to_program(&self) -> Result<Program> {
        let ctx = Context::new(self.gf.q(), self.n)?;
        let wide = ctx.extended(self.memory)?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Instruction::from_fn(wide, s.target, |state| {
                    let digits = wide.digits_of(state);
                    self.gf.dot(&s.coeffs, &digits)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Program::new(ctx, self.memory, steps)
    }
}

/// Lexicographically smallest vector `v` such that both
/// `[helpers, v, e_{k+1}..e_n]` and `[helpers, v, M rows k+1..n]` are
/// nonsingular, where `k - 1 = helpers.len()`. Such a vector always exists:
/// the excluded set is a union of two proper subspaces.
pub fn find_helper_row(m: &Mat, helpers: &[Vec<u16>]) -> Result<Vec<u16>> {
    let n = m.rows();
    let q = m.gf().q();
    let k = helpers.len(); // 0-based index of the row being chosen
    let unit = |i: usize| -> Vec<u16> {
        let mut e = vec![0u16; n];
        e[i] = 1;
        e
    };
    let units: Vec<Vec<u16>> = (k + 1..n).map(unit).collect();
    let mut candidate = vec![0u16; n];
    for c in 1..q.pow(n as u32) {
        let mut v = c;
        for j in (0..n).rev() {
            candidate[j] = (v % q) as u16;
            v /= q;
        }
        let mut stack1: Vec<&[u16]> = helpers.iter().map(|h| h.as_slice()).collect();
        stack1.push(&candidate);
        stack1.extend(units.iter().map(|u| u.as_slice()));
        let mut stack2: Vec<&[u16]> = helpers.iter().map(|h| h.as_slice()).collect();
        stack2.push(&candidate);
        stack2.extend((k + 1..n).map(|i| m.row(i)));
        if Mat::from_row_list(m.gf().clone(), &stack1).is_nonsingular()
            && Mat::from_row_list(m.gf().clone(), &stack2).is_nonsingular()
        {
            return Ok(candidate);
        }
    }
    Err(Error::InvalidInput(
        "no helper row exists; the target stack must be singular".into(),
    ))
}

/// Factors a nonsingular matrix into at most `2n - 1` invertible row
/// updates. Every running product is nonsingular.
pub fn linear_program(m: &Mat) -> Result<RowProgram> {
    if !m.is_nonsingular() {
        return Err(Error::Unsupported(
            "row-update factorization of singular matrices".into(),
        ));
    }
    let n = m.rows();
    let mut helpers: Vec<Vec<u16>> = Vec::with_capacity(n - 1);
    for _ in 1..n {
        helpers.push(find_helper_row(m, &helpers)?);
    }

    let mut content = Mat::identity(m.gf().clone(), n);
    let mut steps = Vec::with_capacity(2 * n - 1);
    let set_row = |content: &mut Mat, steps: &mut Vec<RowUpdate>, i: usize, row: &[u16]| {
        if content.row(i) == row {
            return Ok::<(), Error>(());
        }
        let coeffs = content.inverse()?.vec_mat(row);
        // target must appear: replacing a row of a nonsingular matrix by an
        // independent one keeps the update invertible
        debug_assert_ne!(coeffs[i], 0);
        content.set_row(i, row);
        steps.push(RowUpdate { target: i, coeffs });
        Ok(())
    };
    for (k, helper) in helpers.iter().enumerate() {
        set_row(&mut content, &mut steps, k, helper)?;
    }
    for k in (0..n).rev() {
        set_row(&mut content, &mut steps, k, m.row(k))?;
    }

    let p = RowProgram::new(m.gf().clone(), n, 0, steps)?;
    debug_assert!(p.computes(m));
    Ok(p)
}

/// How many nonsingular matrices can be computed by updating rows `1..n`
/// once each in increasing order: `(q-1)^n * q^(n(n-1))`.
pub fn count_increasing(q: usize, n: usize) -> Result<u128> {
    Gf::new(q)?;
    let base = (q - 1) as u128;
    let mut out: u128 = 1;
    for _ in 0..n {
        out = out.checked_mul(base).ok_or_else(overflow)?;
    }
    for _ in 0..n * (n - 1) {
        out = out.checked_mul(q as u128).ok_or_else(overflow)?;
    }
    Ok(out)
}

fn overflow() -> Error {
    Error::Infeasible("count exceeds 128-bit range".into())
}

/// Whether `m` is reachable with the strictly increasing row schedule:
/// every prefix of its rows completed by unit rows stays nonsingular.
pub fn is_increasing_computable(m: &Mat) -> bool {
    let n = m.rows();
    (1..=n).all(|k| {
        let mut rows: Vec<&[u16]> = (0..k).map(|i| m.row(i)).collect();
        let units: Vec<Vec<u16>> = (k..n)
            .map(|i| {
                let mut e = vec![0u16; n];
                e[i] = 1;
                e
            })
            .collect();
        rows.extend(units.iter().map(|u| u.as_slice()));
        Mat::from_row_list(m.gf().clone(), &rows).is_nonsingular()
    })
}

/// Exhaustive count of matrices computable with the increasing schedule,
/// by extending valid row prefixes. Gated to `q^n <= 2^16`.
pub fn count_increasing_enumerated(gf: &Arc<Gf>, n: usize) -> Result<u64> {
    let q = gf.q();
    if q.pow(n as u32) > 1 << 16 {
        return Err(Error::Infeasible(
            "enumeration is limited to q^n <= 65536".into(),
        ));
    }
    fn rec(gf: &Arc<Gf>, n: usize, chosen: &mut Vec<Vec<u16>>) -> u64 {
        if chosen.len() == n {
            return 1;
        }
        let q = gf.q();
        let k = chosen.len();
        let mut total = 0;
        let mut candidate = vec![0u16; n];
        for c in 0..q.pow(n as u32) {
            let mut v = c;
            for j in (0..n).rev() {
                candidate[j] = (v % q) as u16;
                v /= q;
            }
            let mut rows: Vec<&[u16]> = chosen.iter().map(|r| r.as_slice()).collect();
            rows.push(&candidate);
            let units: Vec<Vec<u16>> = (k + 1..n)
                .map(|i| {
                    let mut e = vec![0u16; n];
                    e[i] = 1;
                    e
                })
                .collect();
            rows.extend(units.iter().map(|u| u.as_slice()));
            if Mat::from_row_list(gf.clone(), &rows).is_nonsingular() {
                chosen.push(candidate.clone());
                total += rec(gf, n, chosen);
                chosen.pop();
            }
        }
        total
    }
    Ok(rec(gf, n, &mut Vec::new()))
}

/// All invertible matrices of size `n` over the field, by filtering the
/// full matrix space. Gated to `q^(n^2) <= 2^20`.
pub fn enumerate_invertible(gf: &Arc<Gf>, n: usize) -> Result<Vec<Mat>> {
    let q = gf.q();
    let cells = n * n;
    let total = q
        .checked_pow(cells as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::Infeasible("enumeration is limited to q^(n^2) <= 2^20".into()))?;
    let mut out = Vec::new();
    for c in 0..total {
        let mut v = c;
        let mut data = vec![0u16; cells];
        for slot in data.iter_mut().rev() {
            *slot = (v % q) as u16;
            v /= q;
        }
        let m = Mat::new(gf.clone(), n, n, data)?;
        if m.is_nonsingular() {
            out.push(m);
        }
    }
    Ok(out)
}

/// `|M|`, the number of invertible single-row updates including the
/// identity: `n q^(n-1) (q - 1) - n + 1`.
pub fn linear_generator_count(q: usize, n: usize) -> u128 {
    let mut qn1: u128 = 1;
    for _ in 0..n - 1 {
        qn1 *= q as u128;
    }
    n as u128 * qn1 * (q as u128 - 1) - n as u128 + 1
}

/// Counts distinct invertible single-row-update matrices by enumeration.
/// Gated to `q^n <= 2^12`.
pub fn linear_generator_count_enumerated(gf: &Arc<Gf>, n: usize) -> Result<u64> {
    let q = gf.q();
    if q.pow(n as u32) > 1 << 12 {
        return Err(Error::Infeasible("enumeration is limited to q^n <= 4096".into()));
    }
    let mut seen = std::collections::HashSet::new();
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
            let mut m = Mat::identity(gf.clone(), n);
            m.set_row(i, &coeffs);
            seen.insert(m.data);
        }
    }
    Ok(seen.len() as u64)
}

/// A matrix split into a scaled base and per-row scalars: row `i` of `m`
/// is `scalars[i]` times row `i` of the base, whose leading nonzero entry
/// is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleDecomposition {
    base: Mat,
    scalars: Vec<u16>,
}

impl ScaleDecomposition {
    pub fn base(&self) -> &Mat {
        &self.base
    }

    pub fn scalars(&self) -> &[u16] {
        &self.scalars
    }

    /// Rows that are a non-unit multiple of their unit vector: trivial
    /// after scaling but not before.
    pub fn nearly_trivial_count(&self) -> usize {
        let n = self.base.rows();
        (0..n)
            .filter(|&i| {
                self.scalars[i] != 1
                    && (0..n).all(|j| self.base.get(i, j) == u16::from(i == j))
            })
            .count()
    }
}

/// Scales every row so its leading nonzero coefficient is 1.
pub fn scale_decompose(m: &Mat) -> Result<ScaleDecomposition> {
    let gf = m.gf().clone();
    let n = m.rows();
    let mut base = m.clone();
    let mut scalars = Vec::with_capacity(n);
    for i in 0..n {
        let Some(lead) = (0..m.cols()).map(|j| m.get(i, j)).find(|&v| v != 0) else {
            return Err(Error::InvalidInput(format!("row {} is zero", i + 1)));
        };
        scalars.push(lead);
        let inv = gf.inv(lead);
        let row: Vec<u16> = m.row(i).iter().map(|&v| gf.mul(inv, v)).collect();
        base.set_row(i, &row);
    }
    Ok(ScaleDecomposition { base, scalars })
}

fn convert_row_program(
    p: &RowProgram,
    final_scale: &[u16],
    read_scale: &[u16],
) -> Result<RowProgram> {
    if p.memory_cells() != 0 {
        return Err(Error::InvalidInput(
            "scaled conversion applies to memoryless programs".into(),
        ));
    }
    let gf = p.gf().clone();
    let mut last = vec![None; p.n()];
    for (pos, s) in p.steps().iter().enumerate() {
        last[s.target] = Some(pos);
    }
    let mut finalized = vec![false; p.n()];
    let mut steps = Vec::with_capacity(p.len());
    for (pos, s) in p.steps().iter().enumerate() {
        let mut coeffs: Vec<u16> = s
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| if finalized[j] { gf.mul(a, read_scale[j]) } else { a })
            .collect();
        if last[s.target] == Some(pos) {
            for c in coeffs.iter_mut() {
                *c = gf.mul(*c, final_scale[s.target]);
            }
            finalized[s.target] = true;
        }
        steps.push(RowUpdate { target: s.target, coeffs });
    }
    RowProgram::new(gf, p.n(), 0, steps)
}

/// Rewrites a program computing `m` into one of the same length computing
/// the scaled base.
pub fn to_scaled_program(p: &RowProgram, d: &ScaleDecomposition) -> Result<RowProgram> {
    let gf = p.gf();
    let inv: Vec<u16> = d.scalars().iter().map(|&s| gf.inv(s)).collect();
    convert_row_program(p, &inv, d.scalars())
}

/// Rewrites a program computing the scaled base back into one computing
/// `m`, appending at most one scaling per nearly trivial row.
pub fn from_scaled_program(p: &RowProgram, d: &ScaleDecomposition) -> Result<RowProgram> {
    let gf = p.gf().clone();
    let inv: Vec<u16> = d.scalars().iter().map(|&s| gf.inv(s)).collect();
    let converted = convert_row_program(p, d.scalars(), &inv)?;
    let mut updated = vec![false; p.n()];
    for s in p.steps() {
        updated[s.target] = true;
    }
    let mut steps = converted.steps.clone();
    for i in 0..p.n() {
        if !updated[i] && d.scalars()[i] != 1 {
            let mut coeffs = vec![0u16; p.n()];
            coeffs[i] = d.scalars()[i];
            steps.push(RowUpdate { target: i, coeffs });
        }
    }
    RowProgram::new(gf, p.n(), 0, steps)
}

/// Drops updates whose written register is never read afterwards and is
/// not an output register.
fn strip_dead_writes(steps: Vec<RowUpdate>, n: usize, width: usize) -> Vec<RowUpdate> {
    let mut live: Vec<bool> = (0..width).map(|i| i < n).collect();
    let mut keep = vec![false; steps.len()];
    for (pos, s) in steps.iter().enumerate().rev() {
        if live[s.target] {
            keep[pos] = true;
            live[s.target] = false;
            for (j, &a) in s.coeffs.iter().enumerate() {
                if a != 0 {
                    live[j] = true;
                }
            }
        }
    }
    steps
        .into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}

/// Computes a nonsingular matrix with scratch registers: `3m` updates and
/// `m` cells for even `n = 2m`, `3m + 3` updates and `m + 2` cells for odd
/// `n = 2m + 1` (the odd case embeds `M` into a block matrix one size up).
pub fn linear_memory_program(m: &Mat) -> Result<RowProgram> {
    if !m.is_nonsingular() {
        return Err(Error::Unsupported(
            "row-update factorization of singular matrices".into(),
        ));
    }
    let n = m.rows();
    if n.is_multiple_of(2) {
        return even_linear_memory(m);
    }
    // diag(M, 1): the extra register doubles as the first scratch cell
    let gf = m.gf().clone();
    let mut big = Mat::identity(gf.clone(), n + 1);
    for i in 0..n {
        for j in 0..n {
            big.set(i, j, m.get(i, j));
        }
    }
    let inner = even_linear_memory(&big)?;
    let p = RowProgram::new(gf, n, inner.memory_cells() + 1, inner.steps)?;
    debug_assert!(p.computes(m));
    Ok(p)
}

fn even_linear_memory(m: &Mat) -> Result<RowProgram> {
    let gf = m.gf().clone();
    let n = m.rows();
    let half = n / 2;
    let width = n + half;

    let unit = |i: usize| -> Vec<u16> {
        let mut e = vec![0u16; n];
        e[i] = 1;
        e
    };
    // helper stack N: both [M_1; N] and [J; N] must be nonsingular, found
    // by the same lexicographic scan as the memoryless helpers
    let m1: Vec<&[u16]> = (0..half).map(|i| m.row(i)).collect();
    let j_rows: Vec<Vec<u16>> = (half..n).map(unit).collect();
    let mut n_rows: Vec<Vec<u16>> = Vec::with_capacity(half);
    let q = gf.q();
    for _ in 0..half {
        let mut found = None;
        let mut candidate = vec![0u16; n];
        for c in 1..q.pow(n as u32) {
            let mut v = c;
            for slot in candidate.iter_mut().rev() {
                *slot = (v % q) as u16;
                v /= q;
            }
            let mut stack1: Vec<&[u16]> = m1.clone();
            stack1.extend(n_rows.iter().map(|r| r.as_slice()));
            stack1.push(&candidate);
            let mut stack2: Vec<&[u16]> = j_rows.iter().map(|r| r.as_slice()).collect();
            stack2.extend(n_rows.iter().map(|r| r.as_slice()));
            stack2.push(&candidate);
            let ok = |rows: &[&[u16]]| {
                Mat::from_row_list(gf.clone(), rows).rank() == rows.len()
            };
            if ok(&stack1) && ok(&stack2) {
                found = Some(candidate.clone());
                break;
            }
        }
        n_rows.push(found.expect("two proper subspaces cannot cover the space"));
    }

    let pad = |row: &[u16]| -> Vec<u16> {
        let mut v = row.to_vec();
        v.resize(width, 0);
        v
    };
    let mut steps = Vec::with_capacity(3 * half);
    for (i, r) in n_rows.iter().enumerate() {
        steps.push(RowUpdate { target: n + i, coeffs: pad(r) });
    }
    // rows 1..m from registers m+1..n and the scratch bank
    let jn_rows: Vec<&[u16]> = j_rows
        .iter()
        .map(|r| r.as_slice())
        .chain(n_rows.iter().map(|r| r.as_slice()))
        .collect();
    let jn_inv = Mat::from_row_list(gf.clone(), &jn_rows).inverse()?;
    for i in 0..half {
        if m.row(i) == unit(i) {
            continue;
        }
        let a = jn_inv.vec_mat(m.row(i));
        let mut coeffs = vec![0u16; width];
        coeffs[half..n].copy_from_slice(&a[..n - half]);
        coeffs[n..].copy_from_slice(&a[n - half..]);
        steps.push(RowUpdate { target: i, coeffs });
    }
    // rows m+1..n from the new first half and the scratch bank
    let m1n_rows: Vec<&[u16]> = m1
        .iter()
        .copied()
        .chain(n_rows.iter().map(|r| r.as_slice()))
        .collect();
    let m1n_inv = Mat::from_row_list(gf.clone(), &m1n_rows).inverse()?;
    for i in half..n {
        if m.row(i) == unit(i) {
            continue;
        }
        let a = m1n_inv.vec_mat(m.row(i));
        let mut coeffs = vec![0u16; width];
        coeffs[..half].copy_from_slice(&a[..half]);
        coeffs[n..].copy_from_slice(&a[half..]);
        steps.push(RowUpdate { target: i, coeffs });
    }

    let steps = strip_dead_writes(steps, n, width);
    let p = RowProgram::new(gf, n, half, steps)?;
    assert!(p.len() <= 3 * half);
    debug_assert!(p.computes(m));
    Ok(p)
}
