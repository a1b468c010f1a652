//! Deterministic co-simulation framework for cyber-physical energy systems.
//!
//! The crate is organised around the life cycle of a holistic test:
//!
//! * [`sysconfig`] — typed system-configuration graphs (generic and specific)
//!   with validation, instantiation, subsystem extraction, and mapping onto
//!   research-infrastructure capabilities.
//! * [`testspec`] — the document layers of a test description (test case,
//!   test specification, experiment specification) and the workflow state
//!   machine that moves a test from definition to evaluation.
//! * [`federate`] — the simulator coupling interface. Federates either step
//!   themselves (`CS`) or expose derivatives for an external solver (`ME`);
//!   model-exchange federates are wrapped in a capsule with a fixed-step
//!   integrator so the master only ever sees stepping federates.
//! * [`master`] — the discrete-time co-simulation master: scenario wiring,
//!   cycle resolution (time-shifted or iterative), deterministic scheduling,
//!   and result capture.
//! * [`models`] — the built-in federate library: quasi-static power grid,
//!   aggregated wind-turbine converter, fault-ride-through state machine,
//!   reactive-power droop controller, stochastic communication delay, and a
//!   scheduled event source.
//! * [`testrunner`] — campaign execution over fault sweeps, criterion
//!   assessment, and report emission.
//!
//! Numeric kernels in [`numeric`] and [`models::powerflow`] are generic over
//! the scalar type via `num-traits`; the concrete simulation stack is pinned
//! to the aliases below.

pub mod diag;
pub mod expr;
pub mod federate;
pub mod master;
pub mod models;
pub mod numeric;
pub mod sysconfig;
pub mod testrunner;
pub mod testspec;
pub mod value;

/// Scalar type used by the concrete simulation stack.
pub type Real = f64;

/// Complex scalar over [`Real`], used by the power-flow kernels.
pub type Complex = num_complex::Complex<Real>;

/// Grid network pinned to the crate-wide scalar.
pub type GridNetwork = models::powerflow::GridNetwork<Real>;

/// Power-flow solution pinned to the crate-wide scalar.
pub type PowerFlowSolution = models::powerflow::Solution<Real>;
