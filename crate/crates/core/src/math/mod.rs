//! Numerical substrate shared by the model, the sampler and the estimator.

pub mod linalg;
pub mod quad;
pub mod rng;
pub mod special;
pub mod sum;

pub use linalg::{eigen_sym, tri_factor_inverse, SpdMatrix, SquareMatrix, SymmetricEigen};
pub use quad::{integrate_1d, integrate_nd, QuadConfig, Quadrature, Range};
pub use rng::RandomStream;
pub use special::{ln_gamma, upsilon, upsilon_wallis};
