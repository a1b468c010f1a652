//! Federate coupling interfaces.
//!
//! A federate is one simulator taking part in a co-simulation. Two kinds
//! exist: co-simulation federates ([`CsFederate`]) bring their own solver and
//! advance themselves when stepped, while model-exchange federates
//! ([`MeFederate`]) only expose continuous states and derivatives and rely on
//! an external integrator. [`capsule::MeCapsule`] wraps a model-exchange
//! federate together with a fixed-step integrator so that the master always
//! talks to the stepping interface.

mod capsule;
mod variables;

pub use capsule::MeCapsule;
pub use variables::{
    to_attribute_map, Access, AttributeMap, Causality, FederateVariable, FmiKind,
    ModelDescription, VariableRecord, Variability,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::value::{DataType, ScalarValue};

/// Handle used to address a variable in get/set calls.
pub type ValueRef = u32;

#[derive(Debug, Error)]
pub enum FederateError {
    #[error("duplicate variable name `{0}` in model description")]
    DuplicateName(String),
    #[error("duplicate value reference {0} in model description")]
    DuplicateValueRef(ValueRef),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown value reference {0}")]
    UnknownValueRef(ValueRef),
    #[error("direction error on `{name}`: {reason}")]
    DirectionError { name: String, reason: String },
    #[error("type mismatch on `{name}`: expected {expected}, got {actual}")]
    TypeMismatch {
        name: String,
        expected: DataType,
        actual: DataType,
    },
    #[error("solver failure at t={t}: {reason}")]
    SolverFailure { t: f64, reason: String },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("state vector length {actual} does not match declared state_dim {declared}")]
    StateDimMismatch { declared: usize, actual: usize },
    #[error("snapshot/restore not supported by this federate")]
    SnapshotUnsupported,
    #[error("no snapshot taken before restore")]
    NoSnapshot,
    #[error("model error: {0}")]
    Model(String),
}

/// Parameter assignments passed to `initialize`.
pub type ParameterSet = BTreeMap<String, ScalarValue>;

/// Stepping (co-simulation) federate interface.
///
/// Call order per instance: `initialize` once, then any number of
/// `set_input` / `do_step` / `get_output` rounds with non-decreasing step
/// times. After `initialize` every output is readable.
pub trait CsFederate {
    fn initialize(&mut self, start_time: f64, parameters: &ParameterSet)
        -> Result<(), FederateError>;

    fn set_input(&mut self, value_ref: ValueRef, value: ScalarValue) -> Result<(), FederateError>;

    fn do_step(&mut self, current_time: f64, step_size: f64) -> Result<(), FederateError>;

    fn get_output(&self, value_ref: ValueRef) -> Result<ScalarValue, FederateError>;

    /// Reseed any internal randomness. Deterministic federates ignore this.
    fn reseed(&mut self, _seed: u64) {}

    /// Whether `snapshot`/`restore` are available. Members of iterative loop
    /// groups must support rollback; federates without it can only take part
    /// in cycles broken by time-shifted connections.
    fn supports_rollback(&self) -> bool {
        false
    }

    fn snapshot(&mut self) -> Result<(), FederateError> {
        Err(FederateError::SnapshotUnsupported)
    }

    fn restore(&mut self) -> Result<(), FederateError> {
        Err(FederateError::SnapshotUnsupported)
    }
}

/// Model-exchange federate interface: the caller owns the solution process.
///
/// `get_derivatives` must be a pure function of the current time, continuous
/// states, and inputs.
pub trait MeFederate {
    fn initialize(&mut self, start_time: f64, parameters: &ParameterSet)
        -> Result<(), FederateError>;

    fn state_dim(&self) -> usize;

    fn set_time(&mut self, t: f64);

    fn set_continuous_states(&mut self, x: &[f64]) -> Result<(), FederateError>;

    fn get_continuous_states(&self, out: &mut [f64]) -> Result<(), FederateError>;

    fn get_derivatives(&self, out: &mut [f64]) -> Result<(), FederateError>;

    fn set_input(&mut self, value_ref: ValueRef, value: ScalarValue) -> Result<(), FederateError>;

    fn get_output(&self, value_ref: ValueRef) -> Result<ScalarValue, FederateError>;
}
