//! Two-input instructions. Over bits and without scratch space they reach
//! exactly the affine permutations; one scratch cell unlocks everything,
//! by accumulating indicator products one register at a time.
//!
//! ```text
//! cargo run --example binary
//! ```

use memoryless::oracle::{permutation_instructions, CayleyBfs};
use memoryless::synth::{binary_program, is_affine, is_binary};
use memoryless::{files, Context, Transformation};

fn main() {
    let ctx = Context::new(2, 2).unwrap();
    let swap = Transformation::from_image(ctx, vec![0, 2, 1, 3]).unwrap();
    let p = binary_program(&swap).unwrap();
    println!(
        "the swap is affine, so it stays memoryless ({} steps):",
        p.len()
    );
    print!("{}", files::write_program(&p));

    // a controlled flip is not affine: it needs the scratch cell
    let c3 = Context::new(2, 3).unwrap();
    let toffoli = Transformation::from_fn(c3, |s| {
        let (a, b, t) = (s & 1, s >> 1 & 1, s >> 2 & 1);
        (a ^ (b & t)) | (b << 1) | (t << 2)
    });
    println!("\ncontrolled flip affine? {}", is_affine(&toffoli).unwrap());
    let p = binary_program(&toffoli).unwrap();
    println!(
        "compiled with {} scratch cell into {} two-input steps:",
        p.memory_cells(),
        p.len()
    );
    print!("{}", files::write_program(&p));
    assert!(p.computes(&toffoli));
    assert!(p.steps().iter().all(is_binary));

    // what two-input permutation steps generate over three bits
    let gens: Vec<_> = permutation_instructions(c3)
        .unwrap()
        .into_iter()
        .filter(is_binary)
        .collect();
    let closure = CayleyBfs::with_generators(c3, gens);
    println!(
        "\nclosure of two-input permutation steps on three bits: {} of 40320 permutations",
        closure.reached()
    );
    let all_affine = closure.reached_images().all(|(img, _)| {
        let f = Transformation::from_image(c3, img.to_vec()).unwrap();
        is_affine(&f).unwrap()
    });
    println!("all of them affine: {all_affine}");
}
