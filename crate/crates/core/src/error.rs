use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A special function would overflow `f64`.
    Overflow { what: &'static str, argument: f64 },
    /// Adaptive quadrature ran out of evaluations.
    NonConvergence {
        what: &'static str,
        partial: f64,
        error_estimate: f64,
    },
    /// The grid is too small for the requested stencil or has bad points.
    Grid(&'static str),
    /// A tabulated frequency profile or time lies outside the table.
    OutOfTable { t: f64, start: f64, end: f64 },
    /// A state cannot be normalized (non-square-integrable branch).
    NotNormalizable,
    /// A series did not reach its tail bound before the maximum truncation.
    Truncation { terms: usize, tail: f64 },
    /// A transformation function vanishes on the grid.
    Node { x: f64 },
    /// Non-finite values appeared in a computed wave.
    NonFinite(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what}: argument {value} out of domain"),
            Error::Overflow { what, argument } => {
                write!(f, "{what}: overflow at argument magnitude {argument}")
            }
            Error::NonConvergence {
                what,
                partial,
                error_estimate,
            } => write!(
                f,
                "{what}: no convergence (partial result {partial}, error estimate {error_estimate})"
            ),
            Error::Grid(msg) => write!(f, "grid: {msg}"),
            Error::OutOfTable { t, start, end } => {
                write!(f, "t = {t} outside tabulated range [{start}, {end}]")
            }
            Error::NotNormalizable => write!(f, "state is not square integrable"),
            Error::Truncation { terms, tail } => {
                write!(
                    f,
                    "series tail {tail:e} still above bound after {terms} terms"
                )
            }
            Error::Node { x } => write!(f, "transformation function has a node near x = {x}"),
            Error::NonFinite(what) => write!(f, "{what}: non-finite values"),
        }
    }
}

impl core::error::Error for Error {}
