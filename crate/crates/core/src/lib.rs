//! Verification toolkit for positively curved normal homogeneous Finsler
//! spaces: exact root-system combinatorics, exclusion filters for equal-rank
//! and corank-one pairs, explicit matrix oracles, and finite-difference
//! Finsler curvature.

pub mod exact_arith;
pub mod par;
pub mod root_systems;
pub mod equal_rank;
pub mod tables;
pub mod corank_engine;
pub mod explicit_models;
pub mod verify;
pub mod finsler_lab;
