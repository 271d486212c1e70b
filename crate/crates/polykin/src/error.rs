use thiserror::Error;

/// Errors raised by the kinetic model, quadrature engine and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The call is structurally wrong (mismatched grids, unknown selector, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A configuration value is outside its validity range.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure failed or produced an inconsistent state.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Requested resolution exceeds what the dense solvers can handle.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Evaluation at a singular input (e.g. coinciding velocities for k2).
    #[error("singular input: {0}")]
    SingularInput(String),

    /// A documented precondition of the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Time step too large for the stiffness of the collision frequency.
    #[error("stiffness violation: {0}")]
    Stiffness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
