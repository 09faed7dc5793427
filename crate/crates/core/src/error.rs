use thiserror::Error;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(&'static str),
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("selection rule violated: {0}")]
    Selection(&'static str),
    #[error("kappa = {kappa} lies outside the tabulated range [{min}, {max}]")]
    Extrapolation { kappa: f64, min: f64, max: f64 },
    #[error("invalid material: {0}")]
    Material(&'static str),
    #[error("invalid medium: {0}")]
    Medium(&'static str),
    #[error("unsupported combination: {0}")]
    Unsupported(&'static str),
    #[error("invalid geometry: {0}")]
    Geometry(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("determinant argument is singular or non-positive (overlapping bodies or truncation failure)")]
    Singular,
    #[error("determinant is not real: imaginary part {imag:e} against real part {real:e}")]
    NotReal { real: f64, imag: f64 },
    #[error("no convergence in {stage}: reached relative change {achieved:e} (target {target:e}) at order {order}, {nodes} nodes")]
    NoConvergence {
        stage: &'static str,
        achieved: f64,
        target: f64,
        order: usize,
        nodes: usize,
    },
}
