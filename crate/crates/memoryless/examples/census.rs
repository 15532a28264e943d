//! Exhaustive length distributions at desk scale, and the estimate that
//! pushes beyond it.
//!
//! ```text
//! cargo run --example census
//! ```

use memoryless::oracle::{census, complexity_proportion_bound, count_instructions, InstructionKind};

fn main() {
    // every transformation of two bits, with exact shortest lengths
    let all = census(2, 2, false).unwrap();
    println!(
        "all {} transformations of two bits (max L = {}):",
        all.population, all.max
    );
    for (l, count) in &all.histogram {
        println!("  L={l}: {count}");
    }

    // every permutation of three bits
    let perms = census(2, 3, true).unwrap();
    println!(
        "\nall {} permutations of three bits (max L = {} = 2n-1):",
        perms.population, perms.max
    );
    for (l, count) in &perms.histogram {
        println!("  L={l}: {count}");
    }
    println!("\nas CSV:\n{}", perms.to_csv());

    // instruction counts grow doubly exponentially
    for n in 2..=4 {
        println!(
            "n={n}, q=2: {} permutation instructions, {} total",
            count_instructions(2, n, InstructionKind::Permutation).unwrap(),
            count_instructions(2, n, InstructionKind::All).unwrap()
        );
    }

    // beyond exhaustion: almost all permutations sit near the top
    println!();
    for n in [10usize, 20, 40] {
        let (b, proportion) = complexity_proportion_bound(2, n);
        println!(
            "q=2, n={n}: at most {:.1e} of all permutations need fewer than {} steps",
            proportion,
            b.floor() as u64 + 1
        );
    }
}
