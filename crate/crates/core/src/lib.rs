//! Two coupled Razavy double wells: single-well eigenbasis, coupled
//! spectrum, wavepacket tunneling dynamics and entanglement.
//!
//! The library is generic over the scalar type; the aliases below fix it
//! to `f64`.

#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]

pub mod coupled;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod numerics;
pub mod scalar;
pub mod scenarios;
pub mod well;

pub use coupled::{
    composite_potential, overlap_gamma, CoupledEigenstate, CoupledSpectrum, CoupledSystem,
};
pub use dynamics::{
    amplitude, correlation, density, marginal_x1, mean_x1, numeric_timing, right_well_peak, timing,
    DensityGrid, Grid, Label, Preset, TimingEvent, TimingMethod, TimingOptions, TimingResult,
    WavepacketSpec,
};
pub use entanglement::{
    concurrence, concurrence_closed_form, concurrence_real, speed_bound, to_product_basis, Binding,
    ProductBasisState, SpeedBound,
};
pub use error::{Error, Result};
pub use numerics::{QuadratureSpec, Rule, ScanSpec};
pub use scalar::Real;
pub use scenarios::Model;
pub use well::{Level, PotentialParams, SingleWellBasis};

pub type Params = PotentialParams<f64>;
pub type Basis = SingleWellBasis<f64>;
pub type System = CoupledSystem<f64>;
pub type Spectrum = CoupledSpectrum<f64>;
pub type Wavepacket = WavepacketSpec<f64>;
pub type Timing = TimingResult<f64>;
pub type Bound = SpeedBound<f64>;
pub type Density = DensityGrid<f64>;

pub type SystemF32 = CoupledSystem<f32>;
pub type SpectrumF32 = CoupledSpectrum<f32>;
