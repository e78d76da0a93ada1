//! Finite-difference Finsler geometry on coordinate charts: fundamental
//! tensor, spray, flag curvature, subduced norms of linear submersions and
//! Busemann–Hausdorff S-curvature.

pub mod curvature;
pub mod fd;
pub mod metrics;
pub mod norms;
pub mod scurv;
pub mod submersion;

use thiserror::Error;

pub use curvature::{flag_curvature, hessian_g, riemann_curvature, spray, CurvatureSample, FdConfig};
pub use metrics::{catalog_metric, load_metric, parse_metric_json, ChartMetric, MetricSpec, CATALOG};
pub use norms::{Euclidean, Lp, MinkowskiNorm, Quadratic, Randers};
pub use scurv::{busemann_hausdorff_volume, s_curvature, SCurvatureSample};
pub use submersion::{horizontal_lift, subduced_norm, submersion_inequality_check, SubmersionReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FinslerError {
    #[error("expression: {0}")]
    Expression(String),
    #[error("metric spec: {0}")]
    Spec(String),
    #[error("fundamental tensor is not positive definite")]
    NotPositiveDefinite,
    #[error("y must be nonzero")]
    ZeroVector,
    #[error("flag is degenerate: v is (nearly) parallel to y")]
    DegenerateFlag,
    #[error("point lies outside the chart domain")]
    OutsideChart,
    #[error("expected vectors of dimension {0}")]
    Dimension(usize),
    #[error("curvature operator fails self-adjointness, residual {0:.3e}")]
    SelfAdjointness(f64),
    #[error("{0} did not converge")]
    NonConvergence(&'static str),
    #[error("horizontal lift is not orthogonal to the fibre, residual {0:.3e}")]
    Orthogonality(f64),
    #[error("submersion map must have full row rank")]
    SingularSubmersion,
    #[error("S-curvature quadrature supports dimension ≤ 3, got {0}")]
    DimensionTooHigh(usize),
}
