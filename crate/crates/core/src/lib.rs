//! Threshold dynamics on graphs: simulation, spectral bounds, stable and
//! target set construction, exact small-instance solvers and hardness
//! gadgets.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod monopoly;
pub mod nodeset;
pub mod reductions;
pub mod rule;
pub mod seed;
pub mod spectral;

pub use bounds::{AlphaBounds, BoundsReport, RBounds};
pub use dynamics::{Coloring, Outcome, RunResult};
pub use error::{Error, Result};
pub use exact::{ExactOptions, ExactOutcome, ExactResult};
pub use generators::{GeneratorSpec, Named};
pub use graph::Graph;
pub use monopoly::{CertifiedSet, SetKind};
pub use nodeset::NodeSet;
pub use rule::{Alpha, ThresholdRule};
pub use spectral::SpectralProfile;
