//! Command-line front end.
//!
//! ```text
//! memoryless synth <input> [--method M] [--q Q] [--n N] [--out FILE]
//! memoryless verify <program> <function>
//! memoryless complexity <function> [--max-depth D]
//! memoryless census --q Q --n N [--perm | --linear] [--format csv] [--out FILE]
//! memoryless count --q Q --n N [--perm | --all | --linear]
//! memoryless linear <matrix> [--memory] [--out FILE]
//! memoryless binary <function> [--out FILE]
//! ```
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 infeasible request.

use crate::files;
use crate::oracle;
use crate::program::Program;
use crate::synth;
use crate::transform::Transformation;
use crate::{Error, Result};
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

const USAGE: &str = "\
usage: memoryless <command> [options]

commands:
  synth <input>         compile a function table, matrix, or register
                        shuffle into a program
                        --method auto|perm|general|gray|varmap|blackbox|
                                 linear|memory|binary   (default auto)
                        --q Q --n N   alphabet/arity for shuffle inputs
                        --out FILE    write the program file
  verify <prog> <fn>    check a program file against a function table
  complexity <fn>       exact shortest program length (small files), or a
                        bounded search with --max-depth D
  census --q Q --n N    length distribution over all permutations (--perm),
                        all transformations (default), or all invertible
                        matrices (--linear); --format csv, --out FILE
  count --q Q --n N     instruction counts: --perm, --all (default), or
                        --linear row updates
  linear <matrix>       factor an invertible matrix into row updates
                        (--memory for the scratch-register variant)
  binary <fn>           compile into two-input instructions

shuffle inputs are cycle notation like \"(1 2)(3 4)\" (with --n) or a
1-based image list like \"2 1 4 3\"; file inputs are sniffed by their
header and row count.
";

/// Entry point against real stdout.
pub fn run(args: &[String]) -> i32 {
    let mut stdout = std::io::stdout();
    run_with_output(args, &mut stdout)
}

/// Entry point with a captured output stream (used by the tests).
pub fn run_with_output(args: &[String], out: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::Infeasible(_) => 3,
                _ => 2,
            }
        }
    }
}

struct Flags {
    positional: Vec<String>,
    values: HashMap<&'static str, String>,
    switches: Vec<&'static str>,
}

fn parse_flags(
    args: &[String],
    value_keys: &[&'static str],
    switch_keys: &[&'static str],
) -> Result<Flags> {
    let mut flags = Flags {
        positional: Vec::new(),
        values: HashMap::new(),
        switches: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--") {
            if let Some(&key) = value_keys.iter().find(|&&k| k == name) {
                let value = it
                    .next()
                    .ok_or_else(|| Error::InvalidInput(format!("--{name} needs a value")))?;
                flags.values.insert(key, value.clone());
            } else if let Some(&key) = switch_keys.iter().find(|&&k| k == name) {
                flags.switches.push(key);
            } else {
                return Err(Error::InvalidInput(format!("unknown flag --{name}")));
            }
        } else {
            flags.positional.push(arg.clone());
        }
    }
    Ok(flags)
}

impl Flags {
    fn value(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn usize_value(&self, key: &str) -> Result<Option<usize>> {
        self.value(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidInput(format!("--{key} needs an integer, got {v:?}")))
            })
            .transpose()
    }

    fn switch(&self, key: &str) -> bool {
        self.switches.contains(&key)
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let Some(command) = args.first() else {
        let _ = write!(out, "{USAGE}");
        return Ok(2);
    };
    let rest = &args[1..];
    match command.as_str() {
        "synth" => cmd_synth(rest, out),
        "verify" => cmd_verify(rest, out),
        "complexity" => cmd_complexity(rest, out),
        "census" => cmd_census(rest, out),
        "count" => cmd_count(rest, out),
        "linear" => cmd_linear(rest, out),
        "binary" => cmd_binary(rest, out),
        "help" | "--help" | "-h" => {
            let _ = write!(out, "{USAGE}");
            Ok(0)
        }
        other => Err(Error::InvalidInput(format!("unknown command {other:?}"))),
    }
}

enum SynthInput {
    Shuffle(synth::VarMap),
    Table(Transformation),
    Matrix(synth::Mat),
}

fn read_synth_input(flags: &Flags) -> Result<SynthInput> {
    let input = flags
        .positional
        .first()
        .ok_or_else(|| Error::InvalidInput("synth needs an input argument".into()))?;
    if Path::new(input).exists() {
        let text = std::fs::read_to_string(input)
            .map_err(|e| Error::InvalidInput(format!("cannot read {input}: {e}")))?;
        let body_lines = text.lines().filter(|l| !l.trim().is_empty()).count() - 1;
        let header_n: Option<usize> = text
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("n=").and_then(|v| v.parse().ok()));
        if header_n == Some(body_lines) {
            return Ok(SynthInput::Matrix(files::parse_matrix(&text)?));
        }
        let (f, _) = files::parse_function(&text)?;
        return Ok(SynthInput::Table(f));
    }
    if input.contains('(') {
        let n = flags
            .usize_value("n")?
            .ok_or_else(|| Error::InvalidInput("cycle notation needs --n".into()))?;
        return Ok(SynthInput::Shuffle(synth::VarMap::parse_cycles(n, input)?));
    }
    let images: std::result::Result<Vec<usize>, _> =
        input.split_whitespace().map(|t| t.parse::<usize>()).collect();
    match images {
        Ok(images) if !images.is_empty() => {
            Ok(SynthInput::Shuffle(synth::VarMap::from_images_one_based(&images)?))
        }
        _ => Err(Error::InvalidInput(format!(
            "no such file and not a register shuffle: {input:?}"
        ))),
    }
}

fn emit_program(
    out: &mut dyn Write,
    flags: &Flags,
    method: &str,
    bound: &str,
    verified: &str,
    text: String,
    length: usize,
    memory: usize,
) -> Result<i32> {
    check_cell_budget(flags, memory)?;
    let _ = writeln!(out, "method: {method}");
    let _ = writeln!(out, "length: {length}");
    let _ = writeln!(out, "bound: {bound}");
    let _ = writeln!(out, "memory: {memory}");
    let _ = writeln!(out, "verified: {verified}");
    match flags.value("out") {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))?;
            let _ = writeln!(out, "wrote: {path}");
        }
        None => {
            let _ = write!(out, "{text}");
        }
    }
    Ok(0)
}

/// Verifies, serializes, and reports a table-backed program.
fn finish_table_program(
    out: &mut dyn Write,
    flags: &Flags,
    method: &str,
    bound: String,
    p: &Program,
    f: &Transformation,
) -> Result<i32> {
    if !p.computes(f) {
        let _ = writeln!(out, "internal error: synthesized program failed verification");
        return Ok(1);
    }
    let states = p.extended_ctx().num_states();
    emit_program(
        out,
        flags,
        method,
        &bound,
        &format!("exhaustive over {states} states"),
        files::write_program(p),
        p.len(),
        p.memory_cells(),
    )
}

fn finish_var_program(
    out: &mut dyn Write,
    flags: &Flags,
    method: &str,
    bound: String,
    p: &synth::VarProgram,
    v: &synth::VarMap,
    q: usize,
) -> Result<i32> {
    let width = p.width();
    let exhaustive = (q as f64).powi(width as i32) <= 4096.0;
    let samples = 10_000;
    if !p.verifies_shuffle(q, v, samples) {
        let _ = writeln!(out, "internal error: synthesized program failed verification");
        return Ok(1);
    }
    let verified = if exhaustive {
        format!("exhaustive over {} states", q.pow(width as u32))
    } else {
        format!("{samples} random register vectors")
    };
    emit_program(
        out,
        flags,
        method,
        &bound,
        &verified,
        files::write_var_program(p, q),
        p.len(),
        p.memory_cells(),
    )
}

fn finish_row_program(
    out: &mut dyn Write,
    flags: &Flags,
    method: &str,
    bound: String,
    p: &synth::RowProgram,
    m: &synth::Mat,
) -> Result<i32> {
    if !p.computes(m) {
        let _ = writeln!(out, "internal error: synthesized program failed verification");
        return Ok(1);
    }
    emit_program(
        out,
        flags,
        method,
        &bound,
        "matrix identity over the extended registers",
        files::write_row_program(p)?,
        p.len(),
        p.memory_cells(),
    )
}

fn shuffle_bound(v: &synth::VarMap) -> (synth::VarMapComplexity, usize, usize, usize) {
    let a = synth::analyze(v);
    (synth::varmap_complexity(v), v.n(), a.fixed_count(), a.detached_count())
}

fn linear_memory_bound(n: usize) -> String {
    let m = n / 2;
    if n.is_multiple_of(2) {
        format!("3m = {} with m = {m} cells", 3 * m)
    } else {
        format!("3m+3 = {} with m+2 = {} cells", 3 * m + 3, m + 2)
    }
}

/// A `--memory M` budget rejects programs that need more cells.
fn check_cell_budget(flags: &Flags, used: usize) -> Result<()> {
    if let Some(budget) = flags.usize_value("memory")? {
        if used > budget {
            return Err(Error::InvalidInput(format!(
                "the construction needs {used} scratch registers, budget is {budget}"
            )));
        }
    }
    Ok(())
}

fn cmd_synth(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &["method", "q", "n", "memory", "out"], &[])?;
    let default = if flags.value("memory").is_some() { "memory" } else { "auto" };
    let method = flags.value("method").unwrap_or(default);
    let input = read_synth_input(&flags)?;
    let q = flags.usize_value("q")?.unwrap_or(2);

    match input {
        SynthInput::Shuffle(v) => {
            let method = if method == "auto" { "varmap" } else { method };
            match method {
                "varmap" => {
                    let p = synth::varmap_program(&v);
                    let (c, n, f, d) = shuffle_bound(&v);
                    let bound =
                        format!("exact n-F+D/n-F+1/n-F rule: {} (n={n}, F={f}, D={d})", c.memoryless);
                    finish_var_program(out, &flags, "varmap", bound, &p, &v, q)
                }
                "blackbox" => {
                    let p = synth::varmap_blackbox_program(&v)?;
                    let (_, n, f, d) = shuffle_bound(&v);
                    let bound = format!("exact n-F+D = {} (n={n}, F={f}, D={d})", n - f + d);
                    finish_var_program(out, &flags, "blackbox", bound, &p, &v, q)
                }
                "memory" => {
                    let p = synth::varmap_memory_program(&v);
                    let (_, n, f, _) = shuffle_bound(&v);
                    let bound = format!("n-F+1 = {} with one cell", n - f + 1);
                    finish_var_program(out, &flags, "memory", bound, &p, &v, q)
                }
                "general" | "perm" | "gray" | "binary" => {
                    let f = v.transformation(q)?;
                    synth_table(out, &flags, method, &f)
                }
                other => Err(Error::InvalidInput(format!(
                    "method {other:?} does not apply to register shuffles"
                ))),
            }
        }
        SynthInput::Table(f) => {
            let method = match method {
                "auto" => {
                    if f.is_permutation() {
                        "perm"
                    } else {
                        "general"
                    }
                }
                m => m,
            };
            synth_table(out, &flags, method, &f)
        }
        SynthInput::Matrix(m) => {
            let method = if method == "auto" { "linear" } else { method };
            let n = m.rows();
            match method {
                "linear" => {
                    let p = synth::linear_program(&m)?;
                    let bound = format!("2n-1 = {}", 2 * n - 1);
                    finish_row_program(out, &flags, "linear", bound, &p, &m)
                }
                "memory" => {
                    let p = synth::linear_memory_program(&m)?;
                    finish_row_program(out, &flags, "memory", linear_memory_bound(n), &p, &m)
                }
                other => Err(Error::InvalidInput(format!(
                    "method {other:?} does not apply to matrices"
                ))),
            }
        }
    }
}

fn synth_table(
    out: &mut dyn Write,
    flags: &Flags,
    method: &str,
    f: &Transformation,
) -> Result<i32> {
    let n = f.ctx().n();
    match method {
        "perm" => {
            let p = synth::permutation_program(f)?;
            finish_table_program(out, flags, "perm", format!("2n-1 = {}", 2 * n - 1), &p, f)
        }
        "general" => {
            let p = synth::transformation_program(f)?;
            finish_table_program(out, flags, "general", format!("4n-3 = {}", 4 * n - 3), &p, f)
        }
        "gray" => {
            let p = synth::generator_program(f)?;
            finish_table_program(out, flags, "gray", "none (generator factorization)".into(), &p, f)
        }
        "memory" => {
            let p = if f.is_permutation() {
                synth::permutation_memory_program(f)?
            } else {
                synth::any_memory_program(f)?
            };
            let bound = if f.is_permutation() {
                if n.is_multiple_of(2) {
                    format!("3m = {} with m = n/2 cells", 3 * (n / 2))
                } else {
                    format!("3m+3 = {} with m+2 cells", 3 * (n / 2) + 3)
                }
            } else {
                format!("2n-1 = {} with n-1 cells", 2 * n - 1)
            };
            finish_table_program(out, flags, "memory", bound, &p, f)
        }
        "binary" => {
            let p = synth::binary_program(f)?;
            finish_table_program(
                out,
                flags,
                "binary",
                "two-input steps, at most one cell".into(),
                &p,
                f,
            )
        }
        "varmap" | "blackbox" => Err(Error::InvalidInput(
            "shuffle methods need cycle notation or an image list as input".into(),
        )),
        "linear" => Err(Error::InvalidInput(
            "the linear method needs a matrix file as input".into(),
        )),
        other => Err(Error::InvalidInput(format!("unknown method {other:?}"))),
    }
}

fn cmd_verify(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &[], &[])?;
    let [prog_path, fn_path] = &flags.positional[..] else {
        return Err(Error::InvalidInput(
            "verify takes a program file and a function file".into(),
        ));
    };
    let read = |p: &String| {
        std::fs::read_to_string(p)
            .map_err(|e| Error::InvalidInput(format!("cannot read {p}: {e}")))
    };
    let program = files::parse_program(&read(prog_path)?)?;
    let (target, _) = files::parse_function(&read(fn_path)?)?;
    if program.ctx() != target.ctx() {
        return Err(Error::InvalidInput(format!(
            "program is over q={} n={}, target over q={} n={}",
            program.ctx().q(),
            program.ctx().n(),
            target.ctx().q(),
            target.ctx().n()
        )));
    }
    let wide = program.extended_ctx();
    let states = program.ctx().num_states();
    let mut bad = Vec::new();
    for s in wide.states() {
        let got = program.eval(s)? % states;
        let want = target.apply(s % states);
        if got != want {
            if bad.len() < 10 {
                bad.push((s, got, want));
            } else {
                break;
            }
        }
    }
    if bad.is_empty() {
        let _ = writeln!(
            out,
            "verified: {} steps match on all {} extended states",
            program.len(),
            wide.num_states()
        );
        Ok(0)
    } else {
        let _ = writeln!(out, "verification failed; counterexamples:");
        for (s, got, want) in bad {
            let _ = writeln!(
                out,
                "  input {:?} -> got {:?}, want {:?}",
                wide.digits_of(s),
                program.ctx().digits_of(got),
                program.ctx().digits_of(want),
            );
        }
        Ok(1)
    }
}

fn cmd_complexity(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &["max-depth"], &[])?;
    let [fn_path] = &flags.positional[..] else {
        return Err(Error::InvalidInput("complexity takes a function file".into()));
    };
    let text = std::fs::read_to_string(fn_path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {fn_path}: {e}")))?;
    let (f, m) = files::parse_function(&text)?;
    let opts = oracle::SearchOptions { max_depth: flags.usize_value("max-depth")? };
    let report = if m == 0 {
        oracle::exact_complexity(&f, &opts)?
    } else {
        oracle::exact_complexity_with_memory(&f, m, &opts)?
    };
    let _ = writeln!(out, "target: {}", report.target);
    match report.bound {
        oracle::ComplexityBound::Exact(l) => {
            let _ = writeln!(out, "L = {l}");
        }
        oracle::ComplexityBound::Bracket { lower, upper } => match upper {
            Some(u) => {
                let _ = writeln!(out, "L in [{lower}, {u}] (cap exhausted)");
            }
            None => {
                let _ = writeln!(out, "L >= {lower} (cap exhausted)");
            }
        },
    }
    if let Some(cert) = &report.certificate {
        let _ = write!(out, "certificate:\n{}", files::write_program(cert));
    }
    Ok(0)
}

fn cmd_census(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &["q", "n", "format", "out"], &["perm", "linear"])?;
    let q = flags
        .usize_value("q")?
        .ok_or_else(|| Error::InvalidInput("census needs --q".into()))?;
    let n = flags
        .usize_value("n")?
        .ok_or_else(|| Error::InvalidInput("census needs --n".into()))?;
    let csv = flags.value("format") == Some("csv");
    let text = if flags.switch("linear") {
        let c = oracle::linear_census(q, n)?;
        if csv {
            c.to_csv()
        } else {
            let mut t = format!(
                "invertible matrices over GF({q}), n={n}: {} elements, diameter {}\n",
                c.group_order, c.diameter
            );
            for (l, count) in &c.histogram {
                t.push_str(&format!("L={l}: {count}\n"));
            }
            t
        }
    } else {
        let c = oracle::census(q, n, flags.switch("perm"))?;
        if csv {
            c.to_csv()
        } else {
            let kind = if c.permutations_only { "permutations" } else { "transformations" };
            let mut t = format!(
                "{kind} of A^{n} over q={q}: {} elements, max L = {}\n",
                c.population, c.max
            );
            for (l, count) in &c.histogram {
                t.push_str(&format!("L={l}: {count}\n"));
            }
            t
        }
    };
    match flags.value("out") {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))?;
            let _ = writeln!(out, "wrote: {path}");
        }
        None => {
            let _ = write!(out, "{text}");
        }
    }
    Ok(0)
}

fn cmd_count(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &["q", "n"], &["perm", "all", "linear"])?;
    let q = flags
        .usize_value("q")?
        .ok_or_else(|| Error::InvalidInput("count needs --q".into()))?;
    let n = flags
        .usize_value("n")?
        .ok_or_else(|| Error::InvalidInput("count needs --n".into()))?;
    if flags.switch("linear") {
        let _ = writeln!(
            out,
            "invertible row updates |M| = {}",
            synth::linear_generator_count(q, n)
        );
    } else if flags.switch("perm") {
        let _ = writeln!(
            out,
            "permutation instructions = {}",
            oracle::count_instructions(q, n, oracle::InstructionKind::Permutation)?
        );
    } else {
        let _ = writeln!(
            out,
            "instructions = {}",
            oracle::count_instructions(q, n, oracle::InstructionKind::All)?
        );
    }
    Ok(0)
}

fn cmd_linear(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &["out"], &["memory"])?;
    let [path] = &flags.positional[..] else {
        return Err(Error::InvalidInput("linear takes a matrix file".into()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    let m = files::parse_matrix(&text)?;
    let n = m.rows();
    if flags.switch("memory") {
        let p = synth::linear_memory_program(&m)?;
        let bound = format!("{} steps allowed with {} cells", p.len().max(3 * n.div_ceil(2)), p.memory_cells());
        finish_row_program(out, &flags, "linear-memory", bound, &p, &m)
    } else {
        let p = synth::linear_program(&m)?;
        finish_row_program(out, &flags, "linear", format!("2n-1 = {}", 2 * n - 1), &p, &m)
    }
}

fn cmd_binary(args: &[String], out: &mut dyn Write) -> Result<i32> {
    let flags = parse_flags(args, &["out"], &[])?;
    let [path] = &flags.positional[..] else {
        return Err(Error::InvalidInput("binary takes a function file".into()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    let (f, _) = files::parse_function(&text)?;
    let p = synth::binary_program(&f)?;
    debug_assert!(p.steps().iter().all(synth::is_binary));
    finish_table_program(
        out,
        &flags,
        "binary",
        "two-input steps, at most one cell".into(),
        &p,
        &f,
    )
}
