//! Special functions and wave-expansion primitives.

mod bessel;
mod geom;
mod green;
mod harmonics;
mod legendre;
mod scaled;
mod waves;

pub use bessel::{
    riccati_factor, riccati_factor_scaled, sph_bessel_j, sph_bessel_j_checked,
    sph_bessel_j_minus1, sph_bessel_j_scaled, sph_bessel_j_seq, sph_bessel_y, sph_bessel_y_seq,
    sph_hankel1, sph_hankel1_scaled, RadialKind, RadialTable,
};
pub use geom::{CartesianVec3, ComplexVec3, Direction, Dyadic3, Frame};
pub use green::green_imag_closed;
pub use harmonics::{scalar_harmonic, vector_harmonic, HarmonicTable};
pub use legendre::{assoc_legendre, LegendreTable};
pub use scaled::{Scaled, ScaledComplex, UNDERFLOW_THRESHOLD};
pub use waves::{green_imag_mode_sum, regular_radial, regular_wave, RegularWaveSet};
