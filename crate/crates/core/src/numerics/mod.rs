//! Self-contained one-dimensional numerical kernels.

pub mod extremum;
pub mod quadrature;
pub mod roots;

pub use extremum::{refine_local_extremum, ExtremumKind, LocalExtrema};
pub use quadrature::{integrate, integrate_interval, QuadratureSpec, Rule};
pub use roots::{brent_root, find_first_root, ScanSpec};
