use super::table::DesignTable;
use super::DesignError;
use crate::netlist::{Netlist, NetlistBuilder};
use crate::truthtable::{Init64, Pin, Tap};

/// Where the eleven LUT constants come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitSource {
    /// Bit-for-bit as published, errata included.
    Published,
    /// Derived from each row's function under its binding.
    Derived,
}

pub const CONST0_NET: &str = "GND";
pub const CONST1_NET: &str = "VCC";
/// CO3 of chain A, hard-wired into chain B.
pub const CHAIN_LINK_NET: &str = "carry_a_co3";

pub fn build_proposed_mult4(source: InitSource) -> Result<Netlist, DesignError> {
    let table = DesignTable::proposed_mult4();
    let inits = table
        .rows
        .iter()
        .map(|row| match source {
            InitSource::Published => Ok(row.published_init),
            InitSource::Derived => row.derived_init(),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(build_with_inits(table, &inits))
}

/// Wire the table's LUTs with the given constants (one per row, in row order)
/// into the two-CARRY4 adder.
///
/// Chain A sums columns 3..6 with carry-in C0; stage `i` takes `Prop_i` on S
/// and `Gen_i` on DI. Its CO3 goes over the dedicated link into chain B, whose
/// stage 0 has S = DI = 0 so that O0 = CO3 of chain A = P7.
pub fn build_with_inits(table: &DesignTable, inits: &[Init64]) -> Netlist {
    assert_eq!(inits.len(), table.rows.len(), "one INIT per row");
    let mut b = NetlistBuilder::new();
    for name in ["A0", "A1", "A2", "A3", "B0", "B1", "B2", "B3"] {
        b.input(name);
    }
    for i in 0..8 {
        b.output(&format!("P{i}"));
    }

    for (row, &init) in table.rows.iter().zip(inits) {
        let pins = row.pins.clone().map(|p| match p {
            Pin::Signal(s) => s,
            Pin::Tie1 => CONST1_NET.to_string(),
        });
        let pins: [&str; 6] = std::array::from_fn(|i| pins[i].as_str());
        let id = row.cell_id();
        if row.is_dual() {
            let o6 = row.output(Tap::O6).map(|o| o.signal.as_str());
            let o5 = row.output(Tap::O5).map(|o| o.signal.as_str());
            b.lut6_2(&id, init, pins, o6, o5);
        } else {
            b.lut6(&id, init, pins, &row.outputs[0].signal);
        }
    }

    b.dedicated_net(CHAIN_LINK_NET);
    b.carry4(
        "carry_a",
        "C0",
        ["Prop0", "Prop1", "Prop2", "Prop3"],
        ["Gen0", "Gen1", "Gen2", "Gen3"],
        [Some("P3"), Some("P4"), Some("P5"), Some("P6")],
        [None, None, None, Some(CHAIN_LINK_NET)],
    );
    b.carry4("carry_b", CHAIN_LINK_NET, [CONST0_NET; 4], [CONST0_NET; 4], [Some("P7"), None, None, None], [None; 4]);
    b.constant("gnd", false, CONST0_NET);
    b.constant("vcc", true, CONST1_NET);
    b.build()
}
