//! Desk-scale decision procedures for digraphs and their ultrafilter extensions.
//!
//! The crate is organised around four data languages plus the glue that the
//! `betagraph` binary exposes:
//!
//! * [`digraph`]: finite directed multigraphs given by parallel source/target
//!   maps, with the limit/colimit constructions, colourings and distance
//!   invariants.
//! * [`ultrafilter`]: ultrafilters over small finite universes, the finite
//!   intersection property and the extension functor on maps.
//! * [`blockgraph`]: finitely presented (possibly infinite) graphs whose
//!   vertices fall into finite or countable blocks, together with the
//!   type-level analysis of their ultrafilter extension.
//! * [`smallrel`]: relative rectangle covers of finite relations, the exact
//!   and greedy cover solvers, and the growth instruments built on them.
//!
//! [`corpus`] generates seeded test corpora, [`checks`] runs the cross-check
//! suite over them, and [`report`] renders deterministic key-value reports.

#![forbid(unsafe_code)]

pub mod blockgraph;
pub mod budget;
pub mod checks;
pub mod corpus;
pub mod digraph;
pub mod report;
pub mod smallrel;
pub mod textio;
pub mod ultrafilter;

pub use budget::Budget;
pub use textio::ParseError;
