// SPDX-License-Identifier: Apache-2.0

//! Moore–Crutchfield quantum finite automata for `MOD_p`: automaton
//! construction, compilation to the `{CX, RZ, SX, X}` basis, and exact and
//! noisy simulation.

pub mod circuit;
pub mod cli;
pub mod compiler;
pub mod linalg;
pub mod qfa;
pub mod sim;
