//! Fisher information for linear(ized) inverse problems whose Jacobian and
//! noise covariance are diagonal in a shared modal basis, with overlap-matrix
//! diagnostics for the non-shared case.
//!
//! Spectra passed as `sigma` hold singular values `σᵢ`; spectra passed as
//! `lambda` hold covariance eigenvalues `λᵢ`.

mod estimator;
mod overlap;
mod regime;
mod series;
mod spectrum;

pub use estimator::pseudo_inverse_estimate;
pub use overlap::{
    cameron_martin_system, constructed_noise_spectrum, fisher_trace, range_condition_diagnostic,
    CameronMartinMode, OverlapMatrix, RangeCondition, RangeReport, TraceReport,
};
pub use regime::{regime_classify, Regime, RegimeReport};
pub use series::{crb_curve, diagnose, shell_increments, Convergence, CrbCurve, MIN_TERMS, RATIO_THRESHOLD};
pub use spectrum::{fisher_eigenvalues, Entry, FisherSpectrum, Label, ModalSpectrum, Ordering, ScalarField};
