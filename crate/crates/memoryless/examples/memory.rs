//! Scratch registers buy shorter programs. The programs here are correct
//! for every initial scratch content: each cell is written before read.
//!
//! ```text
//! cargo run --example memory
//! ```

use memoryless::oracle::{exact_complexity, exact_complexity_with_memory, SearchOptions};
use memoryless::synth::{
    any_memory_program, embed, permutation_memory_program, transposition_memory_program,
};
use memoryless::{files, Context, Transformation};

fn main() {
    // a transposition of two far-apart states: 2d-1 steps without memory,
    // d+1 with a single cell
    let ctx = Context::new(2, 3).unwrap();
    let (a, b) = (0, 7);
    let p = transposition_memory_program(ctx, a, b).unwrap();
    println!("swap of states 000 and 111 with one cell ({} steps):", p.len());
    print!("{}", files::write_program(&p));
    assert!(p.computes(&Transformation::transposition(ctx, a, b)));

    // the embedding identity: forcing the scratch back to a constant costs
    // exactly one extra step per cell
    let tiny = Context::new(2, 2).unwrap();
    let swap = Transformation::from_image(tiny, vec![0, 2, 1, 3]).unwrap();
    let opts = SearchOptions { max_depth: Some(6) };
    let with_cell = exact_complexity_with_memory(&swap, 1, &opts).unwrap().exact().unwrap();
    let embedded = embed(&swap, 1, &[0]).unwrap();
    let finalized = exact_complexity(&embedded, &opts).unwrap().exact().unwrap();
    println!("\nswap of two bits: {with_cell} steps with a free cell,");
    println!("{finalized} steps when the cell must end cleared");

    // copy-then-write computes anything in 2n - 1 steps
    let f = Transformation::from_image(ctx, vec![6, 6, 0, 3, 1, 1, 3, 0]).unwrap();
    let p = any_memory_program(&f).unwrap();
    println!(
        "\nrank-{} map of three bits via copy-then-write ({} steps, {} cells):",
        f.rank(),
        p.len(),
        p.memory_cells()
    );
    print!("{}", files::write_program(&p));
    assert!(p.computes(&f));

    // permutations of four bits: six steps with two cells
    let c4 = Context::new(2, 4).unwrap();
    let g = Transformation::from_image(
        c4,
        vec![3, 9, 0, 14, 7, 2, 11, 5, 12, 1, 15, 6, 10, 8, 4, 13],
    )
    .unwrap();
    let p = permutation_memory_program(&g).unwrap();
    println!(
        "\npermutation of four bits: {} steps with {} cells (memoryless bound is 7)",
        p.len(),
        p.memory_cells()
    );
    assert!(p.computes(&g));
}
