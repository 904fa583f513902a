//! Numerical building blocks used by the physics modules.

pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use quadrature::{integrate, integrate_real, QuadOptions, QuadResult};
pub use roots::{brent, golden_max};
pub use tridiag::{solve_complex, SymTridiagonal};
