//! Brute-force reference implementations and seeded random models.
//!
//! The oracles expand the quantifiers of each definition literally, over
//! the equation expressions rather than the compiled tables, so they share
//! no code with the decision procedures they check.

pub mod fixtures;
pub mod suites;
mod generate;
mod oracle;

pub use generate::{generate_extension, generate_model, random_contrast, same_signature_variant, ExtProfile, GenError, Profile};
pub use oracle::{
    oracle_directly_sufficient, oracle_potential_parent, oracle_sufficient, oracle_weakly_sufficient, solve_by_search,
    OracleError, OracleGuard,
};
