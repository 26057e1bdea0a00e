//! Cross-checks each published LUT constant against the constant derived
//! from the row's function column.

use std::fmt;

use serde::Serialize;

use super::table::{DesignTable, LutRow};
use crate::truthtable::{derive_init, Init64, PinBinding, Tap};

/// A mismatching published constant that equals another row's function
/// derived under this row's pins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossMatch {
    pub signal: String,
    pub lut: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconcileRow {
    pub lut: usize,
    pub outputs: Vec<String>,
    pub published: Init64,
    pub derived: Init64,
    /// Full 64-bit equality.
    pub matches: bool,
    /// O5 half (low 32 bits) equality, for dual-output rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub o5_half_matches: Option<bool>,
    /// O6 half (high 32 bits) equality, for dual-output rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub o6_half_matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_match: Option<CrossMatch>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconcileReport {
    pub rows: Vec<ReconcileRow>,
    pub matched: usize,
    pub mismatched: usize,
    /// Findings that concern the table as a whole.
    pub notes: Vec<String>,
}

impl ReconcileReport {
    pub fn row(&self, lut: usize) -> Option<&ReconcileRow> {
        self.rows.iter().find(|r| r.lut == lut)
    }
}

const PIN_RANGE_NOTE: &str =
    "the stated input ordering runs I0-I6, but a LUT6 has only I0-I5; pin lists are read as I0..I5 in order";

fn find_cross_match(table: &DesignTable, row: &LutRow) -> Option<CrossMatch> {
    for other in &table.rows {
        for out in &other.outputs {
            let Ok(binding) = PinBinding::new(row.pins.clone(), Tap::O6) else {
                continue;
            };
            if other.lut != row.lut && derive_init(&out.function, &binding).ok() == Some(row.published_init) {
                return Some(CrossMatch { signal: out.signal.clone(), lut: other.lut });
            }
        }
    }
    None
}

/// Reading of the input column exactly as printed, when it differs from the
/// binding in use and is itself well formed.
fn printed_reading_note(row: &LutRow) -> Option<String> {
    let printed = PinBinding::parse(&row.printed_inputs, Tap::O6).ok()?;
    if printed.pins() == &row.pins {
        return None;
    }
    let as_printed = LutRow { pins: printed.pins().clone(), ..row.clone() };
    Some(match as_printed.derived_init() {
        Ok(init) if init == row.published_init => {
            format!("as printed ({}) the derivation also gives the published constant", row.printed_inputs)
        }
        Ok(init) => {
            format!("as printed ({}) the derivation gives {init}, not the published constant", row.printed_inputs)
        }
        Err(e) => format!("as printed ({}) the derivation fails: {e}", row.printed_inputs),
    })
}

pub fn reconcile_inits(table: &DesignTable) -> ReconcileReport {
    let rows: Vec<ReconcileRow> = table
        .rows
        .iter()
        .map(|row| {
            let derived = row.derived_init().expect("table functions are fully bound");
            let published = row.published_init;
            let matches = derived == published;
            let (o5_half_matches, o6_half_matches) = if row.is_dual() {
                (Some(derived.low() == published.low()), Some(derived.high() == published.high()))
            } else {
                (None, None)
            };
            let mut notes: Vec<String> = row.binding_note.iter().cloned().collect();
            notes.extend(printed_reading_note(row));
            if o5_half_matches == Some(true) && o6_half_matches == Some(false) {
                notes.push("O5 half matches; O6 half differs".to_string());
            }
            if o5_half_matches == Some(false) && o6_half_matches == Some(true) {
                notes.push("O6 half matches; O5 half differs".to_string());
            }
            let cross_match = if matches { None } else { find_cross_match(table, row) };
            if let Some(cm) = &cross_match {
                notes.push(format!(
                    "published constant realises {} (the function of LUT {}) on this LUT's pins; the two rows look swapped",
                    cm.signal, cm.lut
                ));
            } else if !matches {
                notes.push("published constant matches no function in the table under this LUT's pins".to_string());
            }
            ReconcileRow {
                lut: row.lut,
                outputs: row.outputs.iter().map(|o| format!("{}({})", o.signal, o.tap)).collect(),
                published,
                derived,
                matches,
                o5_half_matches,
                o6_half_matches,
                cross_match,
                notes,
            }
        })
        .collect();
    let matched = rows.iter().filter(|r| r.matches).count();
    let notes = vec![PIN_RANGE_NOTE.to_string()];
    ReconcileReport { mismatched: rows.len() - matched, matched, rows, notes }
}

impl fmt::Display for ReconcileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<4} {:<22} {:<18} {:<18} status", "LUT", "outputs", "published", "derived")?;
        for row in &self.rows {
            writeln!(
                f,
                "{:<4} {:<22} {:<18} {:<18} {}",
                row.lut,
                row.outputs.join(","),
                row.published,
                row.derived,
                if row.matches { "match" } else { "MISMATCH" }
            )?;
            for note in &row.notes {
                writeln!(f, "       note: {note}")?;
            }
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        write!(f, "summary: {} match, {} mismatch", self.matched, self.mismatched)
    }
}
