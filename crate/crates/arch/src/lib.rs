//! Archimedean side of the verification engine: the symmetric-power
//! representation sigma_kappa, invariant inner products, the M_kappa
//! transform, spherical kernels on the real groups, explicit
//! Hecke-averaged test functions, and the quadrature machinery that
//! checks every closed form numerically.

pub mod checks;
pub mod kernels;
pub mod polyv;
pub mod quad;
pub mod quaternion;
