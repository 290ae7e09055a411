//! State-vector simulation instrumented to find, count and track
//! computational worlds while quantum algorithms run.
//!
//! Modules build bottom-up: [`statecore`] holds states, gates, measurement and
//! density matrices; [`oracle`] builds `U_f` from truth tables;
//! [`algorithms`] runs Deutsch and the n-bit pipeline as step traces;
//! [`worlds`] decomposes those traces into labeled components;
//! [`infometrics`] does entropy accounting; [`decoherence`] couples a system to
//! an environment and classifies branches.

pub mod algorithms;
pub mod decoherence;
pub mod error;
pub mod infometrics;
pub mod oracle;
pub mod sampling;
pub mod statecore;
pub mod worlds;

pub use error::{Error, Result};
pub use oracle::{BooleanFunction, FunctionClass};
pub use statecore::{Amplitude, DensityMatrix, GateSpec, RegisterLayout, StateVector};
