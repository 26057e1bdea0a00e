//! Multiplier builders, the integer oracle, exhaustive verification and
//! reconciliation of the published LUT constants.

mod array;
mod proposed;
mod reconcile;
mod table;
mod verify;

use thiserror::Error;

use crate::netlist::NetlistError;
use crate::truthtable::TruthTableError;

pub use array::{build_array_mult, MAX_ARRAY_WIDTH};
pub use proposed::{build_proposed_mult4, build_with_inits, InitSource};
pub use reconcile::{reconcile_inits, CrossMatch, ReconcileReport, ReconcileRow};
pub use table::{c1_simplified, c1_unsimplified, expand_intermediates, DesignTable, LutOutput, LutRow};
pub use verify::{port_convention, verify_exhaustive, Failure, VerificationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("operand {value} does not fit in {width} bits")]
    Range { value: u32, width: u32 },
    #[error("width {0} is outside the supported range")]
    Width(usize),
    #[error("port convention violated: {0}")]
    PortConvention(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    TruthTable(#[from] TruthTableError),
}

/// Reference 4-bit product by integer arithmetic.
pub fn oracle_mult(a: u32, b: u32) -> Result<u32, DesignError> {
    oracle_mult_width(a, b, 4)
}

pub fn oracle_mult_width(a: u32, b: u32, width: u32) -> Result<u32, DesignError> {
    for v in [a, b] {
        if width >= 32 || v >> width != 0 {
            return Err(DesignError::Range { value: v, width });
        }
    }
    Ok(a * b)
}
