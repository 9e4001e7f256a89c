mod builtin;
mod groups;
pub mod irreps;
mod oracles;

pub use builtin::{builtin, builtin_group, builtin_quantum, Builtin};
pub use groups::{cycle_notation, ElementSet, GroupTable};
pub use oracles::{
    oracle_coset_functions, oracle_generated_subgroup, oracle_homomorphisms, oracle_representation_kernel,
    OracleResult,
};
