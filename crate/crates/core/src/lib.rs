//! Exact computation and simulation for random walks on finite groups.
//!
//! A walk is driven by a probability measure ν on a finite group G; after k
//! steps it is distributed as the convolution power ν^{⋆k}. The modules cover
//! building groups and walks, exact distance curves, spectral and Fourier
//! bounds, cut-off statistics, Monte Carlo stopping times and the algebra of
//! invertible operators and charges.

pub mod bounds;
pub mod cutoff;
pub mod error;
pub mod factorize;
pub mod fmt;
pub mod fourier;
pub mod group;
pub mod measure;
pub mod simulate;
pub mod spectral;
pub mod walks;

pub use error::{Error, Result};
pub use group::{ConjugacyPartition, ErgodicityReport, ErgodicityWitness, Group, GroupElement, GroupKind, SupportSet};
pub use measure::{Lp, Measure, MeasureKind};
pub use spectral::{Spectrum, StochasticOperator};
pub use fourier::{IrrepCatalog, Representation};
pub use factorize::{ChargeSolveResult, FactorizationProblem};
pub use simulate::{RngStream, StoppingTimeSample};
pub use walks::{WalkName, WalkSpec};
