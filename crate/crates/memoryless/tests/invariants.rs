//! Cross-module invariants checked against oracle-exact lengths on the
//! exhaustible sizes.

use memoryless::oracle::{self, all_instructions, CayleyBfs};
use memoryless::synth::{
    self, enumerate_invertible, is_ordered, ordered_decompose, scale_decompose,
};
use memoryless::{Context, Transformation};
use std::sync::Arc;

fn ctx(q: usize, n: usize) -> Context {
    Context::new(q, n).unwrap()
}

/// On two bits, exact lengths respect the ordered-base sandwich
/// `L(f*) <= L(f) <= L(f*) + T(f)` for every map with balanced
/// coordinates.
#[test]
fn ordered_base_sandwich_on_two_bits() {
    let c = ctx(2, 2);
    let bfs = CayleyBfs::monoid(c).unwrap();
    let mut checked = 0;
    for (image, dist) in bfs.reached_images().map(|(i, d)| (i.to_vec(), d)).collect::<Vec<_>>() {
        let f = Transformation::from_image(c, image).unwrap();
        let Ok(d) = ordered_decompose(&f) else { continue };
        checked += 1;
        let base_dist = bfs.distance(d.base()).unwrap();
        let t = d.nearly_trivial_count();
        assert!(base_dist <= dist, "L(f*) <= L(f) fails for {:?}", f.image());
        assert!(dist <= base_dist + t, "L(f) <= L(f*) + T fails for {:?}", f.image());
    }
    // 6 balanced coordinate functions per register, independently
    assert_eq!(checked, 36, "maps with both coordinates balanced");
}

/// Restricting the instruction set to ordered tables does not lengthen
/// shortest programs for ordered targets.
#[test]
fn ordered_instructions_suffice_for_ordered_targets() {
    let c = ctx(2, 2);
    let full = CayleyBfs::monoid(c).unwrap();
    let ordered_gens: Vec<_> = all_instructions(c)
        .unwrap()
        .into_iter()
        .filter(|i| is_ordered(i.table(), c.q()))
        .collect();
    let restricted = CayleyBfs::with_generators(c, ordered_gens);
    let mut compared = 0;
    for (image, dist) in full.reached_images() {
        let f = Transformation::from_image(c, image.to_vec()).unwrap();
        let all_ordered = (0..c.n()).all(|i| {
            let table = f.coordinate_function(i);
            is_ordered(&table, c.q())
        });
        if !all_ordered {
            continue;
        }
        compared += 1;
        assert_eq!(
            restricted.distance(&f),
            Some(dist),
            "ordered-only search must match for {:?}",
            f.image()
        );
    }
    assert!(compared > 1);
}

/// Exact linear lengths respect the scaled-base sandwich
/// `L'(M*) <= L'(M) <= L'(M*) + T'(M)` over the small matrix groups.
#[test]
fn scaled_base_sandwich_on_small_groups() {
    for q in [2usize, 3] {
        let census = oracle::linear_census(q, 2).unwrap();
        let gf = Arc::new(memoryless::gf::Gf::new(q).unwrap());
        for m in enumerate_invertible(&gf, 2).unwrap() {
            let d = scale_decompose(&m).unwrap();
            let lm = census.distance(&m).unwrap();
            let lb = census.distance(d.base()).unwrap();
            assert!(lb <= lm);
            assert!(lm <= lb + d.nearly_trivial_count());
        }
    }
}

/// The synthesizers never beat the oracle, and the oracle never beats the
/// bounds.
#[test]
fn oracle_synthesizer_sandwich() {
    let c = ctx(2, 2);
    let bfs = CayleyBfs::monoid(c).unwrap();
    for (image, dist) in bfs.reached_images().map(|(i, d)| (i.to_vec(), d)).collect::<Vec<_>>() {
        let f = Transformation::from_image(c, image).unwrap();
        let p = synth::transformation_program(&f).unwrap();
        assert!(dist <= p.len());
        if f.is_permutation() {
            let p = synth::permutation_program(&f).unwrap();
            assert!(dist <= p.len());
            assert!(p.len() <= 3);
        }
    }

    let c3 = ctx(2, 3);
    let perms = CayleyBfs::permutations(c3).unwrap();
    let mut seed = 42u64;
    for _ in 0..200 {
        let mut image: Vec<u32> = (0..8).collect();
        for i in (1..8usize).rev() {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            image.swap(i, (seed >> 33) as usize % (i + 1));
        }
        let f = Transformation::from_image(c3, image).unwrap();
        let p = synth::permutation_program(&f).unwrap();
        assert!(perms.distance(&f).unwrap() <= p.len());
        assert!(p.len() <= 5);
    }
}

/// Rebuilt searches give identical histograms and certificates.
#[test]
fn search_determinism() {
    let c = ctx(2, 2);
    let a = CayleyBfs::monoid(c).unwrap();
    let b = CayleyBfs::monoid(c).unwrap();
    assert_eq!(a.histogram(), b.histogram());
    for (image, _) in a.reached_images().take(40) {
        let f = Transformation::from_image(c, image.to_vec()).unwrap();
        let ca = a.certificate(&f).unwrap();
        let cb = b.certificate(&f).unwrap();
        assert_eq!(ca.steps(), cb.steps());
    }
}

/// Arithmetic never loses to moves by more than the 2/3 factor, in both
/// exact formulas and synthesized lengths.
#[test]
fn shuffle_ratio_floor() {
    let mut seed = 7u64;
    let mut next = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 33) as usize
    };
    let mut nontrivial = 0;
    while nontrivial < 200 {
        let n = 2 + next() % 7;
        let map: Vec<usize> = (0..n).map(|_| next() % n).collect();
        let v = synth::VarMap::new(map).unwrap();
        if v.is_permutation() {
            continue;
        }
        nontrivial += 1;
        let combos = synth::varmap_program(&v);
        let moves = synth::varmap_blackbox_program(&v).unwrap();
        let c = synth::varmap_complexity(&v);
        assert_eq!(combos.len(), c.memoryless);
        assert_eq!(moves.len(), c.blackbox.unwrap());
        assert!(combos.verifies_shuffle(3, &v, 0));
        assert!(moves.verifies_shuffle(3, &v, 0));
        if !moves.is_empty() {
            // strict ratio floor for non-permutations
            assert!(3 * combos.len() > 2 * moves.len());
        }
    }
}
