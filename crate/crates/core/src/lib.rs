//! Rotational surfaces in R³ whose second fundamental form has unit length.
//!
//! The profile curve of such a surface is a trajectory of a planar vector
//! field in the (tangent angle, height) plane. The modules follow that
//! picture: [`phase_field`] is the field, [`integrator`] follows its
//! trajectories, [`shooting`] sorts them by starting height, [`profile`]
//! turns them into curves and [`surface`] revolves curves into meshes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod integrator;
pub mod phase_field;
pub mod profile;
pub mod shooting;
pub mod surface;
