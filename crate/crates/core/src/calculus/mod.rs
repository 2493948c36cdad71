//! Difference quotients, coefficient extraction, basis change,
//! antiderivation, norms and Lipschitz constants.

mod antideriv;
mod coeffs;
mod estimate;
mod norms;
mod quotients;

pub use antideriv::{antiderive, antiderive_digit_sum, t_n};
#[doc(hidden)]
pub use coeffs::lower_basis_signed;
pub use coeffs::{
    expand_c0, extract_bnj, extract_bnj_to_depth, lower_basis, raise_basis, CoeffTable,
};
pub use estimate::{estimate_dj, Estimate};
pub use norms::{
    check_precision, lipschitz_constant, norm_cn_bruteforce, norm_n, phi_sup_bruteforce, sup_norm,
    BruteForceConfig, SupReport, DEFAULT_BUDGET,
};
pub use quotients::{divided_difference, phi, phi_confluent, psi, psi_nj};
