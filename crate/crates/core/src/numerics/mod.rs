//! Small self-contained numerical kernels: bracketed root finding, adaptive
//! quadrature and an embedded Runge-Kutta integrator.

pub mod ode;
pub mod quad;
pub mod roots;

pub use ode::{Dopri5, OdeOptions, Step};
pub use quad::{integrate, QuadOptions, QuadResult};
pub use roots::{brent, scan_brackets, RootOptions};
