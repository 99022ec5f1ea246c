//! Golomb rulers and disjoint Golomb rulers (DGR).
//!
//! A Golomb ruler is a set of distinct positive integer marks whose pairwise
//! differences are all distinct. An (I,J,n)-DGR is a collection of I pairwise
//! disjoint J-mark Golomb rulers drawn from {1..n}, and H(I,J) is the least n
//! admitting one. This crate provides:
//!
//! * representation, validation and lexicographic enumeration of rulers
//!   ([`ruler`]);
//! * DGR collections and their shift-transformation machinery ([`dgr`]);
//! * complete backtracking search for witnesses and non-existence proofs,
//!   plus the conflict-graph formulation ([`exact`]);
//! * the transformation-seeded upper-bound search with its bound-descent
//!   loop ([`seeded`]);
//! * Singer perfect difference sets, doubling of regular DGR, and the
//!   optimal-ruler-length registry ([`constructions`]);
//! * desk-scale verification procedures for the six conjectures and the
//!   tau(J) bookkeeping ([`conjectures`]);
//! * shipped reference data, fixtures and the bounds registry ([`registry`]),
//!   the DGR text format ([`format`]), and the command-line front end
//!   ([`cli`]).

mod bitset;
mod gf;
mod known;

pub mod constructions;
pub mod cover;
pub mod dgr;
pub mod exact;
pub mod format;
pub mod registry;
pub mod ruler;
pub mod seeded;
pub mod stochastic;
