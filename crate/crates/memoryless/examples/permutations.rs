//! Any permutation of n registers compiles into at most 2n - 1 updates:
//! helper values flow into registers 1..n-1, then every register takes its
//! final value from n back down to 1.
//!
//! ```text
//! cargo run --example permutations
//! ```

use memoryless::oracle::{exact_complexity, SearchOptions};
use memoryless::synth::permutation_program;
use memoryless::{files, Context, Transformation};

fn main() {
    let ctx = Context::new(2, 3).unwrap();

    // a scrambled but fixed permutation of the eight states
    let image: Vec<u32> = vec![5, 2, 7, 0, 3, 6, 1, 4];
    let f = Transformation::from_image(ctx, image).unwrap();

    let program = permutation_program(&f).unwrap();
    println!(
        "permutation of {} states compiled into {} steps (bound 2n-1 = {}):",
        ctx.num_states(),
        program.len(),
        2 * ctx.n() - 1
    );
    print!("{}", files::write_program(&program));
    assert!(program.computes(&f));

    // every intermediate stage of the program is itself a permutation
    println!("\nprefix ranks:");
    for (i, prefix) in program.prefix_transformations().iter().enumerate() {
        println!("  after {} steps: rank {}", i, prefix.rank());
        assert!(prefix.is_permutation());
    }

    // the oracle pins the true optimum for this target
    let report = exact_complexity(&f, &SearchOptions::default()).unwrap();
    println!(
        "\nsynthesized {} steps; exact optimum {}",
        program.len(),
        report.exact().unwrap()
    );
}
