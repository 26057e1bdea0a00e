//! Published resource and delay figures for comparison. Static data; none of
//! the delay values are produced by this crate.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceRow {
    pub design: String,
    pub luts: usize,
    pub carry4: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpdRow {
    pub design: String,
    pub total: f64,
    pub logic: f64,
    pub net: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTables {
    pub label: String,
    pub resources: Vec<ResourceRow>,
    pub cpd_ns: Vec<CpdRow>,
}

impl ReferenceTables {
    pub fn resource(&self, design: &str) -> Option<&ResourceRow> {
        self.resources.iter().find(|r| r.design == design)
    }

    pub fn cpd(&self, design: &str) -> Option<&CpdRow> {
        self.cpd_ns.iter().find(|r| r.design == design)
    }
}

pub fn published_tables() -> &'static ReferenceTables {
    static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        serde_json::from_str(include_str!("../reference/published_tables.json")).expect("bundled reference data parses")
    })
}

impl fmt::Display for ReferenceTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reference (static metadata, not reproduced):")?;
        writeln!(f, "  {:<28} {:>4} {:>6}", "design", "LUTs", "CARRY4")?;
        for r in &self.resources {
            writeln!(f, "  {:<28} {:>4} {:>6}", r.design, r.luts, r.carry4)?;
        }
        writeln!(f, "  {:<28} {:>7} {:>7} {:>7}", "post-route CPD [ns]", "total", "logic", "net")?;
        for (i, r) in self.cpd_ns.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {:<28} {:>7.3} {:>7.3} {:>7.3}", r.design, r.total, r.logic, r.net)?;
        }
        Ok(())
    }
}
