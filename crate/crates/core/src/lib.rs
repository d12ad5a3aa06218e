//! Exact local arithmetic for quaternion unitary groups: p-adic
//! predicates and character sums, split and ramified quaternion models,
//! Hecke coset tables, Weil-representation sums with their closed forms,
//! and Satake transforms with local standard L-factors.

pub mod closed;
pub mod groups;
pub mod mat;
pub mod padic;
pub mod quat;
pub mod report;
pub mod satake;
pub mod weil;
