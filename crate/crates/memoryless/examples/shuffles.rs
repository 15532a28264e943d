//! Shuffling registers: arithmetic beats plain moves.
//!
//! For `f(x)_i = x_phi(i)` the exact costs are known. Combining registers
//! with +/- lets one running sum serve every cycle of the shuffle, while
//! pure moves pay one extra step per detached cycle.
//!
//! ```text
//! cargo run --example shuffles
//! ```

use memoryless::files::write_var_program;
use memoryless::synth::{
    analyze, varmap_blackbox_program, varmap_complexity, varmap_memory_program, varmap_program,
    VarMap,
};

fn main() {
    // two register swaps plus a sixth register copying the fifth
    let shuffle = VarMap::from_images_one_based(&[2, 1, 4, 3, 5, 5]).unwrap();
    let analysis = analyze(&shuffle);
    println!(
        "shuffle (1 2)(3 4), register 6 <- register 5: {} fixed, {} cycles ({} detached)",
        analysis.fixed_count(),
        analysis.cycles.len(),
        analysis.detached_count()
    );

    let combos = varmap_program(&shuffle);
    let moves = varmap_blackbox_program(&shuffle).unwrap();
    println!("\nwith arithmetic ({} steps):", combos.len());
    print!("{}", write_var_program(&combos, 2));
    println!("\nmoves only ({} steps):", moves.len());
    print!("{}", write_var_program(&moves, 2));
    assert!(combos.verifies_shuffle(2, &shuffle, 0));
    assert!(moves.verifies_shuffle(2, &shuffle, 0));

    // permutations of registers: one scratch cell shortens every product
    // of transpositions
    let pairs = VarMap::parse_cycles(4, "(1 2)(3 4)").unwrap();
    let plain = varmap_program(&pairs);
    let cell = varmap_memory_program(&pairs);
    println!(
        "\n(1 2)(3 4): {} steps memoryless, {} with one cell:",
        plain.len(),
        cell.len()
    );
    print!("{}", write_var_program(&cell, 2));
    assert!(cell.verifies_shuffle(2, &pairs, 0));

    // the ratio arithmetic/moves approaches 2/3 as the shuffle grows
    println!("\narithmetic vs moves for k swaps plus one copy:");
    for k in [1usize, 5, 10, 20] {
        let n = 2 * k + 2;
        let mut text: String = (0..k).map(|i| format!("({} {})", 2 * i + 1, 2 * i + 2)).collect();
        text.push_str(&format!("({} -> {})", 2 * k + 2, 2 * k + 1));
        let v = VarMap::parse_cycles(n, &text).unwrap();
        let c = varmap_complexity(&v);
        println!(
            "  k = {k:>2}: {} vs {}  (ratio {:.4})",
            c.memoryless,
            c.blackbox.unwrap(),
            c.memoryless as f64 / c.blackbox.unwrap() as f64
        );
    }
}
