//! Arbitrary functions need at most 4n - 3 updates. The trick: sort the
//! fiber sizes into a partition whose aligned block sums vanish modulo
//! powers of q, collapse intervals onto states, and fuse that collapse
//! with half of a permutation schedule.
//!
//! ```text
//! cargo run --example transformations
//! ```

use memoryless::synth::{
    interval_transformation, sort_properly, transformation_program, Partition,
};
use memoryless::{files, Context, Transformation};

fn main() {
    let ctx = Context::new(3, 2).unwrap();

    // a lossy map of the nine ternary states
    let f = Transformation::from_image(ctx, vec![4, 4, 0, 7, 2, 4, 2, 0, 4]).unwrap();
    println!("target image: {:?}  (rank {})", f.image(), f.rank());

    // the machinery under the hood
    let fibers = Partition::fiber_counts(&f);
    println!("fiber sizes:  {:?}", fibers.counts());
    let (sorted, h) = sort_properly(&fibers).unwrap();
    println!("sorted:       {:?}  (proper: {})", sorted.counts(), sorted.is_proper());
    let lambda = interval_transformation(&sorted).unwrap();
    println!("interval map: {:?}", lambda.image());
    println!("sorter:       {:?}", h.image());

    let program = transformation_program(&f).unwrap();
    println!(
        "\ncompiled into {} steps (bound 4n-3 = {}):",
        program.len(),
        4 * ctx.n() - 3
    );
    print!("{}", files::write_program(&program));
    assert!(program.computes(&f));

    // on two bits, three steps always suffice
    let tiny = Context::new(2, 2).unwrap();
    let worst = (0..256)
        .map(|seed| {
            let image: Vec<u32> = (0..4).map(|i| (seed >> (2 * i) & 3) as u32).collect();
            let g = Transformation::from_image(tiny, image).unwrap();
            transformation_program(&g).unwrap().len()
        })
        .max()
        .unwrap();
    println!("\nworst case over all 256 maps of two bits: {worst} steps");
}
