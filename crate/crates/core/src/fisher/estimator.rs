use alloc::vec::Vec;

use num_complex::Complex64;

use super::spectrum::{ModalSpectrum, ScalarField};
use crate::error::{domain, Error, Result};

/// Truncated pseudo-inverse in coefficient space: `ϑ̂ᵢ = ξᵢ/σᵢ` for the first
/// `r` modes.
///
/// `meas` lists `⟨uᵢ, ξ⟩` for every mode in the spectrum's iteration order,
/// with degenerate entries expanded by multiplicity. For a real parameter
/// space only the real part of `ξᵢ/σᵢ` is kept; with circular complex noise
/// its variance is `λᵢ/(2σᵢ²) = 1/μ̃ᵢ`.
pub fn pseudo_inverse_estimate(
    meas: &[Complex64],
    sigma: &ModalSpectrum,
    field: ScalarField,
    r: usize,
) -> Result<Vec<Complex64>> {
    let available = sigma.total_multiplicity();
    if meas.len() != available {
        return Err(Error::Pairing(alloc::format!(
            "{} coefficients for {available} modes",
            meas.len()
        )));
    }
    if r > available {
        return Err(domain!("truncation {r} exceeds {available} modes"));
    }
    sigma
        .expanded()
        .zip(meas)
        .take(r)
        .enumerate()
        .map(|(i, (s, xi))| {
            if s == 0.0 {
                return Err(Error::Rank(alloc::format!("sigma = 0 at mode {}", i + 1)));
            }
            let est = xi / s;
            Ok(match field {
                ScalarField::Complex => est,
                ScalarField::Real => Complex64::new(est.re, 0.0),
            })
        })
        .collect()
}
