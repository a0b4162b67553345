//! Steady-state voltage stability analysis for converter-rich networks.
//!
//! The crate solves AC power flow over networks with unconstrained (PQ),
//! voltage-regulated (PV / grid-forming), and current-limited converter
//! buses, and evaluates per-bus solvability margins built from the
//! Wirtinger-calculus reduced Jacobian alongside classical indices
//! (L-index, SCR, an impedance-eigenvalue strength index).
//!
//! Pipeline: parse a case ([`casemodel`]) -> assemble the bus admittance
//! matrix -> eliminate the slack bus into a Thevenin form ([`thevenin`])
//! -> solve Newton power flow with converter mode switching ([`powerflow`])
//! -> build Wirtinger Jacobians and dominance margins ([`wirtinger`]),
//! classical indices ([`indices`]), loading sweeps and boundary bisection
//! ([`sweep`]), and a numerical check that the complex-domain and
//! conventional Jacobians describe the same singular set ([`equivalence`]).

pub mod casemodel;
pub mod cases;
pub mod equivalence;
pub mod indices;
pub mod numerics;
pub mod powerflow;
pub mod sweep;
pub mod thevenin;
pub mod wirtinger;

pub use num_complex::Complex64;
