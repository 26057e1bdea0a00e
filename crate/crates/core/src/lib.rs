//! Primitive-level netlists for LUT-mapped multipliers on 7-series FPGAs.
//!
//! The crate models LUT6, LUT6_2 and CARRY4 bit-exactly, derives LUT INIT
//! constants from Boolean functions, builds the 11-LUT / 2-CARRY4 exact 4-bit
//! multiplier together with a LUT-only array baseline, verifies them
//! exhaustively, reports resources and abstract timing, and emits
//! structural Verilog.

pub mod designs;
pub mod emit;
pub mod netlist;
pub mod primitives;
pub mod reference;
pub mod timing;
pub mod truthtable;
