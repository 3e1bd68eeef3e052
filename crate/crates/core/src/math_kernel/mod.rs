//! Special functions and quadrature.

mod order_stats;
mod quadrature;
mod special;

pub use order_stats::{
    order_stat_cdf, order_stat_cdf_u, order_stat_density_u, order_stat_pdf, rank_probability,
    rank_probability_du, rank_probability_u,
};
pub use quadrature::{integrate, Quadrature};
pub use special::{
    binomial, i_fn, incomplete_beta, j_fn, j_monotone_threshold, j_prime, j_step_sign_poly,
};
pub(crate) use special::{check_sizes, i_prime_raw, i_raw, incomplete_beta_raw, j_raw, powu};
