//! Invertible matrices over GF(q) factor into at most 2n - 1 row updates
//! `y_i <- a . y`, every intermediate matrix staying invertible.
//!
//! ```text
//! cargo run --example linear
//! ```

use memoryless::gf::Gf;
use memoryless::oracle::linear_census;
use memoryless::synth::{linear_memory_program, linear_program, Mat};
use memoryless::files::write_row_program;
use std::sync::Arc;

fn main() {
    let gf3 = Arc::new(Gf::new(3).unwrap());
    let m = Mat::new(gf3, 3, 3, vec![1, 2, 0, 0, 1, 2, 1, 0, 1]).unwrap();
    assert!(m.is_nonsingular());

    let p = linear_program(&m).unwrap();
    println!(
        "3x3 matrix over GF(3) in {} row updates (bound 2n-1 = 5):",
        p.len()
    );
    print!("{}", write_row_program(&p).unwrap());
    assert!(p.computes(&m));

    // scratch rows make it three updates per register pair
    let gf2 = Arc::new(Gf::new(2).unwrap());
    let m4 = Mat::new(
        gf2,
        4,
        4,
        vec![1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1],
    )
    .unwrap();
    let pm = linear_memory_program(&m4).unwrap();
    println!(
        "\n4x4 matrix over GF(2): {} updates with {} scratch rows (bound 3m = 6):",
        pm.len(),
        pm.memory_cells()
    );
    print!("{}", write_row_program(&pm).unwrap());
    assert!(pm.computes(&m4));

    // exhaustive picture for two registers
    for q in [2usize, 3] {
        let census = linear_census(q, 2).unwrap();
        println!(
            "\nGL(2,{q}): {} matrices, diameter {}",
            census.group_order, census.diameter
        );
        for (l, count) in &census.histogram {
            println!("  L={l}: {count}");
        }
    }
}
