//! Iterative regularization of ill-conditioned linear systems `A u = f`.
//!
//! Two schemes derived from the dynamical systems method are provided, each
//! with an a posteriori discrepancy-type stopping rule tied to the noise
//! level `delta`:
//!
//! * [`schemes::is1_solve`] averages Tikhonov solutions along a geometric
//!   schedule of parameters `alpha0 q^n` and stops on the averaged
//!   discrepancy `G_n`.
//! * [`schemes::is2_solve`] runs iterated Tikhonov with the same schedule and
//!   stops on the Tikhonov residual `W_n`.
//!
//! [`vr::vr_solve`] is the classical baseline: one Tikhonov solve with the
//! parameter fixed by the discrepancy equation, found by Newton's method.
//!
//! All solvers work off a single [`linalg::SpectralFactors`] computed once
//! per operator.
//!
//! ```
//! use dsm_core::{linalg::svd, problems, schemes::{is1_solve, SchemeConfig}};
//!
//! let p = problems::hilbert_problem(30).unwrap();
//! let noisy = problems::add_noise(&p.f_exact, problems::NoiseSpec::new(1e-3, 15).unwrap()).unwrap();
//! let factors = svd(&p.a).unwrap();
//! let cfg = SchemeConfig { delta: 1e-3, ..Default::default() };
//! let report = is1_solve(&factors, &noisy, &cfg).unwrap();
//! assert!(dsm_core::relative_error(&report.solution, &p.y_exact) < 0.2);
//! ```

pub mod error;
pub mod linalg;
pub mod problems;
pub mod schemes;
pub mod vr;

pub use error::{Error, Result};

/// `||u - y|| / ||y||`.
pub fn relative_error(u: &[f64], y: &[f64]) -> f64 {
    assert_eq!(u.len(), y.len(), "vector lengths differ");
    let diff: Vec<f64> = u.iter().zip(y).map(|(a, b)| a - b).collect();
    linalg::norm(&diff) / linalg::norm(y)
}
