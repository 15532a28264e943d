//! Text formats for functions, programs, and matrices.
//!
//! Function tables:
//!
//! ```text
//! q=2 n=3
//! 0 0 1        <- image digits of state 0, register 1 first
//! ...          (q^n body lines, states in index order)
//! ```
//!
//! Programs (header carries the scratch count; registers are 1-based):
//!
//! ```text
//! q=2 n=2 m=1
//! mov 3 1                  y3 <- y1
//! lin 2: 1 2 0 + 1         y2 <- y1 + 2*y2 + 1   (mod q)
//! upd 1: 0 1 1 0 0 1 1 0   explicit table over all q^(n+m) states
//! ```
//!
//! The writer picks the tersest faithful form (`mov`, then `lin`, then
//! `upd`), so canonical output round-trips byte for byte. `lin`
//! coefficients are read mod `q`, which over prime fields coincides with
//! the field arithmetic; matrix programs over extension fields fall back
//! to `upd` tables.
//!
//! Matrices:
//!
//! ```text
//! q=3 n=2
//! 1 2          <- n rows of n field elements
//! 0 1
//! ```

use crate::context::Context;
use crate::gf::Gf;
use crate::instruction::Instruction;
use crate::program::Program;
use crate::synth::{Mat, RowProgram, VarProgram};
use crate::transform::Transformation;
use crate::{Error, Result};
use std::sync::Arc;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line: line + 1, message: message.into() }
}

struct Header {
    q: usize,
    n: usize,
    m: Option<usize>,
}

fn parse_header(line: &str) -> Result<Header> {
    let mut q = None;
    let mut n = None;
    let mut m = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(0, format!("expected key=value, got {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_err(0, format!("bad value in {field:?}")))?;
        match key {
            "q" => q = Some(value),
            "n" => n = Some(value),
            "m" => m = Some(value),
            _ => return Err(parse_err(0, format!("unknown header field {key:?}"))),
        }
    }
    match (q, n) {
        (Some(q), Some(n)) => Ok(Header { q, n, m }),
        _ => Err(parse_err(0, "header must declare q= and n=")),
    }
}

fn parse_digit_row(line: usize, text: &str, expect: usize, q: usize) -> Result<Vec<u16>> {
    let row: Vec<u16> = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u16>()
                .map_err(|_| parse_err(line, format!("bad digit {tok:?}")))
        })
        .collect::<Result<_>>()?;
    if row.len() != expect {
        return Err(parse_err(
            line,
            format!("expected {expect} values, got {}", row.len()),
        ));
    }
    if let Some(&bad) = row.iter().find(|&&v| v as usize >= q) {
        return Err(parse_err(line, format!("digit {bad} out of range for q={q}")));
    }
    Ok(row)
}

/// Parses a function table. The optional `m=` header survives as the
/// suggested scratch width for verification.
pub fn parse_function(text: &str) -> Result<(Transformation, usize)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header_line) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let header = parse_header(header_line)?;
    let ctx = Context::new(header.q, header.n)?;
    let mut image = Vec::with_capacity(ctx.num_states());
    for (lineno, line) in lines {
        let row = parse_digit_row(lineno, line, header.n, header.q)?;
        image.push(ctx.state_from_digits(&row)? as u32);
    }
    if image.len() != ctx.num_states() {
        return Err(Error::InvalidInput(format!(
            "function table has {} rows, expected {}",
            image.len(),
            ctx.num_states()
        )));
    }
    Ok((Transformation::from_image(ctx, image)?, header.m.unwrap_or(0)))
}

pub fn write_function(f: &Transformation) -> String {
    let ctx = f.ctx();
    let mut out = format!("q={} n={}\n", ctx.q(), ctx.n());
    for s in ctx.states() {
        let digits: Vec<String> = ctx
            .digits_of(f.apply(s))
            .iter()
            .map(|d| d.to_string())
            .collect();
        out.push_str(&digits.join(" "));
        out.push('\n');
    }
    out
}

/// The target register and source register of a pure move, if the table
/// is one.
fn as_move(instr: &Instruction) -> Option<usize> {
    let ctx = instr.ctx();
    (0..ctx.n())
        .filter(|&j| j != instr.target())
        .find(|&j| ctx.states().all(|s| instr.table()[s] == ctx.digit(s, j)))
}

/// Coefficients and constant of a mod-q affine combination, if the table
/// is one.
fn as_affine(instr: &Instruction) -> Option<(Vec<u16>, u16)> {
    let ctx = instr.ctx();
    let q = ctx.q();
    let c = instr.table()[0];
    let coeffs: Vec<u16> = (0..ctx.n())
        .map(|j| {
            let unit = q.pow(j as u32);
            ((instr.table()[unit] as usize + q - c as usize) % q) as u16
        })
        .collect();
    let matches = ctx.states().all(|s| {
        let mut acc = c as usize;
        for (j, &a) in coeffs.iter().enumerate() {
            acc += a as usize * ctx.digit(s, j) as usize;
        }
        (acc % q) as u16 == instr.table()[s]
    });
    matches.then_some((coeffs, c))
}

fn write_instruction_line(out: &mut String, instr: &Instruction) {
    if let Some(j) = as_move(instr) {
        out.push_str(&format!("mov {} {}\n", instr.target() + 1, j + 1));
    } else if let Some((coeffs, c)) = as_affine(instr) {
        let body: Vec<String> = coeffs.iter().map(|a| a.to_string()).collect();
        if c == 0 {
            out.push_str(&format!("lin {}: {}\n", instr.target() + 1, body.join(" ")));
        } else {
            out.push_str(&format!(
                "lin {}: {} + {}\n",
                instr.target() + 1,
                body.join(" "),
                c
            ));
        }
    } else {
        let body: Vec<String> = instr.table().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("upd {}: {}\n", instr.target() + 1, body.join(" ")));
    }
}

pub fn write_program(p: &Program) -> String {
    let ctx = p.ctx();
    let mut out = format!("q={} n={} m={}\n", ctx.q(), ctx.n(), p.memory_cells());
    for step in p.steps() {
        write_instruction_line(&mut out, step);
    }
    out
}

fn parse_target(lineno: usize, tok: &str, width: usize) -> Result<usize> {
    let t: usize = tok
        .parse()
        .map_err(|_| parse_err(lineno, format!("bad register index {tok:?}")))?;
    if t == 0 || t > width {
        return Err(parse_err(
            lineno,
            format!("register {t} out of range (width {width})"),
        ));
    }
    Ok(t - 1)
}

pub fn parse_program(text: &str) -> Result<Program> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header_line) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let header = parse_header(header_line)?;
    let m = header.m.unwrap_or(0);
    let ctx = Context::new(header.q, header.n)?;
    let wide = ctx.extended(m)?;
    let width = wide.n();
    let q = header.q;
    let mut steps = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(lineno, "expected an instruction line"))?;
        let instr = match kind {
            "mov" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(parse_err(lineno, "mov takes a target and a source"));
                }
                let target = parse_target(lineno, toks[0], width)?;
                let source = parse_target(lineno, toks[1], width)?;
                Instruction::from_fn(wide, target, |s| wide.digit(s, source))?
            }
            "lin" => {
                let (t, body) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, "lin needs 'target: coefficients'"))?;
                let target = parse_target(lineno, t.trim(), width)?;
                let (coeff_text, constant) = match body.split_once('+') {
                    Some((c, k)) => {
                        let k: usize = k
                            .trim()
                            .parse()
                            .map_err(|_| parse_err(lineno, "bad constant"))?;
                        (c, k % q)
                    }
                    None => (body, 0),
                };
                let coeffs = parse_digit_row(lineno, coeff_text, width, q)?;
                Instruction::from_fn(wide, target, |s| {
                    let mut acc = constant;
                    for (j, &a) in coeffs.iter().enumerate() {
                        acc += a as usize * wide.digit(s, j) as usize;
                    }
                    (acc % q) as u16
                })?
            }
            "upd" => {
                let (t, body) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, "upd needs 'target: table'"))?;
                let target = parse_target(lineno, t.trim(), width)?;
                let table = parse_digit_row(lineno, body, wide.num_states(), q)?;
                Instruction::new(wide, target, table)?
            }
            other => {
                return Err(parse_err(lineno, format!("unknown instruction kind {other:?}")));
            }
        };
        if instr.is_identity() {
            return Err(parse_err(lineno, "identity steps are not allowed in programs"));
        }
        steps.push(instr);
    }
    Program::from_steps_raw(ctx, m, steps)
}

pub fn parse_matrix(text: &str) -> Result<Mat> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header_line) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let header = parse_header(header_line)?;
    let gf = Arc::new(Gf::new(header.q)?);
    let mut data = Vec::with_capacity(header.n * header.n);
    let mut rows = 0;
    for (lineno, line) in lines {
        data.extend(parse_digit_row(lineno, line, header.n, header.q)?);
        rows += 1;
    }
    if rows != header.n {
        return Err(Error::InvalidInput(format!(
            "matrix has {rows} rows, expected {}",
            header.n
        )));
    }
    Mat::new(gf, header.n, header.n, data)
}

pub fn write_matrix(m: &Mat) -> String {
    let mut out = format!("q={} n={}\n", m.gf().q(), m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Serializes an alphabet-independent shuffle program at a concrete `q`
/// without materializing tables, so it works for any register count.
pub fn write_var_program(p: &VarProgram, q: usize) -> String {
    let mut out = format!("q={} n={} m={}\n", q, p.n(), p.memory_cells());
    for step in p.steps() {
        if step.is_move() {
            let source = step.coeffs.iter().position(|&c| c != 0).expect("moves read one register");
            out.push_str(&format!("mov {} {}\n", step.target + 1, source + 1));
        } else {
            let coeffs: Vec<String> = step
                .coeffs
                .iter()
                .map(|&c| ((c as i64).rem_euclid(q as i64)).to_string())
                .collect();
            out.push_str(&format!("lin {}: {}\n", step.target + 1, coeffs.join(" ")));
        }
    }
    out
}

/// Serializes a linear program; prime fields use `lin` lines (mod-q
/// arithmetic is the field arithmetic there), extension fields fall back
/// to explicit tables.
pub fn write_row_program(p: &RowProgram) -> Result<String> {
    if p.gf().is_prime() {
        let mut out = format!("q={} n={} m={}\n", p.gf().q(), p.n(), p.memory_cells());
        for step in p.steps() {
            let unit_source = step
                .coeffs
                .iter()
                .enumerate()
                .find(|&(_, &a)| a != 0)
                .filter(|&(j, &a)| {
                    a == 1 && j != step.target && step.coeffs.iter().filter(|&&x| x != 0).count() == 1
                })
                .map(|(j, _)| j);
            if let Some(j) = unit_source {
                out.push_str(&format!("mov {} {}\n", step.target + 1, j + 1));
            } else {
                let coeffs: Vec<String> = step.coeffs.iter().map(|a| a.to_string()).collect();
                out.push_str(&format!("lin {}: {}\n", step.target + 1, coeffs.join(" ")));
            }
        }
        Ok(out)
    } else {
        Ok(write_program(&p.to_program()?))
    }
}
