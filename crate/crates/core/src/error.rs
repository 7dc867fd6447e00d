use thiserror::Error;

/// Failures of the numerical kernels.
///
/// Values are carried as `f64` whatever the working scalar so that one
/// error type serves every precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("Fock cutoff n_max = {n_max} leaves a Poisson tail of {tail:e}, above the tolerance {tol:e}")]
    FockTail { n_max: usize, tail: f64, tol: f64 },

    #[error("series outside its convergence domain: max |beta| = {max_beta} exceeds {threshold}")]
    SeriesDomain { max_beta: f64, threshold: f64 },

    #[error("series needs {needed} terms to reach tolerance, cap is {max_terms}")]
    SeriesNonConvergence { needed: usize, max_terms: usize },

    #[error("quadrature did not converge after {evaluations} evaluations (last estimate {estimate}, last change {change:e})")]
    QuadratureNonConvergence {
        estimate: f64,
        change: f64,
        evaluations: usize,
    },

    #[error("no closed form for {0}")]
    NoClosedForm(&'static str),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}
