//! Complex Γ-family functions and confluent hypergeometric functions.

mod gamma;
mod hypergeometric;

pub use gamma::{
    digamma, digamma_real, gamma, is_nonpositive_integer, log_gamma, log_gamma_real, rgamma,
    trigamma, trigamma_real,
};
pub(crate) use hypergeometric::taylor_sums;
pub use hypergeometric::{
    kummer_phi, kummer_phi_d, kummer_phi_limit, phi, phi_mu_derivative, pochhammer, richardson,
    tricomi_psi, tricomi_psi_d, SeriesControl, SWITCH_RADIUS,
};

/// Euler's constant C = −ψ(1).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
