//! Program synthesizers: general transformations, register shuffles,
//! linear maps over `GF(q)`, and scratch-register variants.

pub mod general;
pub mod linear;
pub mod manip;
pub mod memory;

pub use general::{
    complete_permutation_pair, from_base_program, generator_program, generator_sequence,
    interval_transformation, is_ordered, ordered_decompose, permutation_program, sort_properly,
    to_base_program, transformation_program, transposition_program, zero_sum_subset, Generator,
    OrderedDecomposition, Partition,
};
pub use linear::{
    count_increasing, count_increasing_enumerated, enumerate_invertible, find_helper_row,
    from_scaled_program, is_increasing_computable, linear_generator_count,
    linear_generator_count_enumerated, linear_memory_program, linear_program, scale_decompose,
    to_scaled_program, Mat, RowProgram, RowUpdate, ScaleDecomposition,
};
pub use manip::{
    analyze, cyclic_shift_steps, varmap_blackbox_program, varmap_complexity, varmap_program,
    Cycle, VarMap, VarMapAnalysis, VarMapComplexity, VarProgram, VarStep,
};
pub use memory::{
    add_finalization, any_memory_program, binary_program, embed, is_affine, is_binary,
    permutation_memory_program, strip_dead_scratch_writes, strip_finalization,
    transposition_memory_program, varmap_memory_program,
};
