//! Classical (non-dual) factorizations used on the standard parts.

mod cholesky;
mod eigen;
pub(crate) mod embed;
mod lu;
mod svd;
mod takagi;

pub use cholesky::{cholesky, cholesky_semidefinite};
pub use eigen::{eig_hermitian, eig_symmetric, Eigen};
pub use lu::{lu_rank_k, pivot_tolerance, Pivoting, RankKLU, RankSpec};
pub use svd::{penrose_residuals, pinv, rank, svd_real, Svd};
pub use takagi::{takagi, takagi_complex, takagi_quaternion, ClassicalTakagi};

pub(crate) use takagi::check_takagi_field;
