use crate::C64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid potential: {0}")]
    Invariant(String),

    #[error("grid spacing {h} is too coarse for the Helmholtz kernel (need h <= 1)")]
    Resolution { h: f64 },

    #[error("samples do not decay at the grid ends: {0}")]
    Tail(String),

    #[error("spectral parameter {0} is an excluded point")]
    Domain(C64),

    #[error("Jost integration failed at z = {z}: {detail}")]
    Integration { z: C64, detail: String },

    #[error("scattering coefficients vary with x at z = {z} (spread {spread:.3e})")]
    IntegrationQuality { z: f64, spread: f64 },

    #[error("ill-conditioned spectrum: {0}")]
    IllConditioned(String),

    #[error("eigenvalue search: {0}")]
    Search(String),

    #[error("bound state at z = {z}: proportionality residual {residual:.3e}")]
    BoundState { z: C64, residual: f64 },

    #[error("cannot evolve eigenvalue {0} with vanishing real part")]
    Evolution(C64),

    #[error("unsupported scattering data version {0}")]
    Version(String),

    #[error("corrupt scattering data: {0}")]
    Corrupt(String),

    #[error("{side} problem requires {requirement}, got y = {y}")]
    WrongSide {
        side: &'static str,
        requirement: &'static str,
        y: f64,
    },

    #[error("Riemann-Hilbert solve failed at y = {y}: residual {residual:.3e} after {iterations} iterations (condition estimate {condition:.3e})")]
    Solve {
        y: f64,
        residual: f64,
        iterations: usize,
        condition: f64,
    },

    #[error("reconstruction singular at y = {y}: {detail}")]
    Singular { y: f64, detail: String },

    #[error("left and right reconstructions disagree at y = 0: |m_l - m_r| = {0:.3e}")]
    Consistency(f64),

    #[error("positivity lost at t = {t}, x = {x} (suspected blow-up)")]
    BlowUp { t: f64, x: f64 },

    #[error("time step {dt} exceeds the stability bound {bound}")]
    Cfl { dt: f64, bound: f64 },

    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with stage tags removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
