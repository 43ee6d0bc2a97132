//! Radar pulse backscatter from uniformly translating targets.
//!
//! The transmitted pulse is decomposed into monochromatic plane-wave lines,
//! each line is boosted into the target's rest frame, scattered there by a
//! frequency-domain kernel, and boosted back to the radar frame. The two-way
//! Doppler shift is then removed and the received pulse is compared with the
//! transmitted one through the lag-maximized Pearson correlation coefficient.
//!
//! Time convention throughout is `exp(-i omega t)`: a spectral line with
//! complex amplitude `A` at angular frequency `omega` contributes
//! `Re(A exp(-i omega t))` to a real signal, outgoing spherical waves use the
//! Hankel function of the first kind, and lossy media have `Im(eps) > 0`.

pub mod error;
pub mod pipeline;
pub mod relativity;
pub mod scatterkernel;
pub mod signal;
pub mod spectral;

pub use error::{Error, Result};
pub use nalgebra::Vector3;
pub use num_complex::Complex64;
