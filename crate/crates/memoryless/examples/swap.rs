//! The classic starting point: swapping two registers without a buffer.
//!
//! ```text
//! cargo run --example swap
//! ```

use memoryless::oracle::{exact_complexity, SearchOptions};
use memoryless::synth::transposition_program;
use memoryless::{files, Context, Transformation};

fn main() {
    // two registers over bits; the swap exchanges their contents
    let ctx = Context::new(2, 2).unwrap();
    let swap = Transformation::from_fn(ctx, |s| {
        let d = ctx.digits_of(s);
        ctx.state_from_digits(&[d[1], d[0]]).unwrap()
    });

    // the swap is the transposition of the two states that disagree
    // everywhere, here 01 and 10
    let a = ctx.state_from_digits(&[1, 0]).unwrap();
    let b = ctx.state_from_digits(&[0, 1]).unwrap();
    let program = transposition_program(ctx, a, b).unwrap();
    assert!(program.computes(&swap));

    println!("a swap of two registers, as single-register updates:");
    print!("{}", files::write_program(&program));

    println!("\nrunning it on every input:");
    for s in ctx.states() {
        let out = program.eval(s).unwrap();
        println!("  {:?} -> {:?}", ctx.digits_of(s), ctx.digits_of(out));
    }

    // three steps is not just sufficient but necessary
    let report = exact_complexity(&swap, &SearchOptions::default()).unwrap();
    println!("\nexact shortest length: {:?}", report.exact().unwrap());
    assert_eq!(report.exact(), Some(3));
}
