//! Generalized ridge regression with a distinct penalty per eigen-direction
//! of `XᵗX`: estimation, exact MSE, goodness of fit, shrinkage selection,
//! dominance checks and percentile-bootstrap inference.

pub mod analysis;
pub mod bootstrap;
pub mod comparison;
pub mod dataset;
pub mod error;
pub mod gof;
pub mod gorman_toman;
pub mod linalg;
pub mod report;
pub mod ridge;
pub mod risk;
pub mod selection;
pub mod svg;
pub mod synth;

#[doc(hidden)]
pub mod cli;

pub use analysis::{GeneralizedRidge, PlugIn};
pub use bootstrap::{bootstrap, BootstrapConfig, BootstrapSummary, Interval};
pub use comparison::{dominance_condition, s_matrix_pd, DominanceVerdict, PdWitness, Verdict};
pub use dataset::{apply_transform, load_csv, ols_fit, write_csv, CsvOptions, Dataset, OlsFit, TransformMode};
pub use error::{Result, RidgeError};
pub use gof::{gof_of, GofReport};
pub use linalg::{eigendecompose, EigenSystem, SymMatrix};
pub use ridge::{augmented_fit, ridge_fit, CanonicalForm, Coord, RidgeFit, ShrinkageKind, ShrinkageSpec};
pub use risk::{mse_of, trace, Grid, RiskProfile, TraceMode, TraceSeries};
pub use selection::{Rule, SearchMode, SelectionResult};
