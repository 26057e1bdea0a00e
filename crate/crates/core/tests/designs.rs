use std::collections::BTreeMap;

use fabricmul::designs::{
    build_array_mult, build_proposed_mult4, build_with_inits, c1_simplified, c1_unsimplified, expand_intermediates,
    oracle_mult, reconcile_inits, verify_exhaustive, DesignTable, InitSource,
};
use fabricmul::netlist::{evaluate, load, save, CellKind, Simulator};
use fabricmul::truthtable::{equivalent, to_truth_table, Init64, Tap};

fn product(netlist: &fabricmul::netlist::Netlist, a: u32, b: u32) -> u32 {
    let mut inputs = BTreeMap::new();
    for i in 0..4 {
        inputs.insert(format!("A{i}"), (a >> i) & 1 == 1);
        inputs.insert(format!("B{i}"), (b >> i) & 1 == 1);
    }
    let out = evaluate(netlist, &inputs).unwrap();
    (0..8).fold(0, |acc, k| acc | (u32::from(out[&format!("P{k}")]) << k))
}

#[test]
fn proposed_evaluation_examples() {
    let n = build_proposed_mult4(InitSource::Derived).unwrap();
    assert_eq!(product(&n, 0b0000, 0b1111), 0);
    assert_eq!(product(&n, 0b0001, 0b0001), 1);
    assert_eq!(product(&n, 0b1111, 0b1111), 0b1110_0001);
    assert_eq!(product(&n, 0b0101, 0b0011), oracle_mult(5, 3).unwrap());
}

#[test]
fn derived_design_is_exact() {
    let n = build_proposed_mult4(InitSource::Derived).unwrap();
    assert!(n.validate().is_ok(), "{}", n.validate());
    let report = verify_exhaustive(&n, 4).unwrap();
    assert_eq!(report.total, 256);
    assert!(report.all_pass(), "{report}");
}

#[test]
fn proposed_structure() {
    let n = build_proposed_mult4(InitSource::Derived).unwrap();
    let r = n.resources();
    assert_eq!((r.lut6, r.lut6_2, r.carry4), (8, 3, 2));
    assert_eq!(r.lut_count(), 11);
    let duals: Vec<&str> =
        n.cells().iter().filter(|c| matches!(c.kind, CellKind::Lut6_2(_))).map(|c| c.id.as_str()).collect();
    assert_eq!(duals, ["lut1", "lut5", "lut7"]);

    let lut1 = n.cell("lut1").unwrap();
    assert_eq!((lut1.pin("O5"), lut1.pin("O6")), (Some("P0"), Some("P1")));
    let conn = n.connectivity();
    let s1_loads: Vec<String> = conn.loads("S1").iter().map(ToString::to_string).collect();
    assert_eq!(s1_loads, ["lut5.I2", "lut7.I1"]);

    let chain_a = n.cell("carry_a").unwrap();
    assert_eq!(chain_a.pin("CI"), Some("C0"));
    for i in 0..4 {
        assert_eq!(chain_a.pin(&format!("S{i}")), Some(format!("Prop{i}").as_str()));
        assert_eq!(chain_a.pin(&format!("DI{i}")), Some(format!("Gen{i}").as_str()));
        assert_eq!(chain_a.pin(&format!("O{i}")), Some(format!("P{}", 3 + i).as_str()));
    }
    let link = chain_a.pin("CO3").unwrap();
    assert!(n.is_dedicated(link));
    let chain_b = n.cell("carry_b").unwrap();
    assert_eq!(chain_b.pin("CI"), Some(link));
    assert_eq!(chain_b.pin("O0"), Some("P7"));
    assert_eq!(chain_b.pin("S0"), Some("GND"));
    assert_eq!(chain_b.pin("DI0"), Some("GND"));
}

#[test]
fn derived_inits_come_from_the_function_column() {
    let table = DesignTable::proposed_mult4();
    let n = build_proposed_mult4(InitSource::Derived).unwrap();
    for row in &table.rows {
        let cell = n.cell(&row.cell_id()).unwrap();
        assert_eq!(cell.kind.init(), Some(row.derived_init().unwrap()), "LUT {}", row.lut);
    }
}

#[test]
fn symmetry_zero_and_identity() {
    let n = build_proposed_mult4(InitSource::Derived).unwrap();
    let sim = Simulator::new(&n).unwrap();
    let run = |a: u32, b: u32| {
        let bits: Vec<bool> = (0..4).map(|i| (a >> i) & 1 == 1).chain((0..4).map(|i| (b >> i) & 1 == 1)).collect();
        sim.run(&bits).unwrap().iter().enumerate().fold(0u32, |acc, (k, &v)| acc | (u32::from(v) << k))
    };
    for a in 0..16 {
        for b in 0..16 {
            assert_eq!(run(a, b), run(b, a), "{a}x{b}");
        }
        assert_eq!(run(0, a), 0);
        assert_eq!(run(1, a), a);
    }
}

#[test]
fn single_bit_mutations_are_caught() {
    let base = build_proposed_mult4(InitSource::Derived).unwrap();
    let mut caught = 0;
    let mut tried = 0;
    for cell in base.cells().iter().filter(|c| c.kind.is_lut()) {
        let init = cell.kind.init().unwrap();
        // only bits the LUT can actually reach under its tie-offs are observable
        for bit in [63usize, 62, 48, 31] {
            let mutated = base.clone().with_lut_init(&cell.id, init.with_bit_flipped(bit)).unwrap();
            let report = verify_exhaustive(&mutated, 4).unwrap();
            tried += 1;
            if !report.all_pass() {
                caught += 1;
                assert!(!report.failures.is_empty());
                assert_eq!(report.passed + report.failures.len(), report.total);
            }
        }
    }
    assert!(caught > tried / 2, "caught {caught} of {tried}");
    let flipped = base.clone().with_lut_init("lut2", Init64(0x47787878B7888888 ^ (1 << 63))).unwrap();
    assert!(!verify_exhaustive(&flipped, 4).unwrap().all_pass());
}

#[test]
fn published_constants_fail_as_wired_but_pass_with_swapped_outputs() {
    let table = DesignTable::proposed_mult4();
    let published = build_proposed_mult4(InitSource::Published).unwrap();
    assert!(!verify_exhaustive(&published, 4).unwrap().all_pass());

    // Each mismatching constant realises its partner row's function on its own
    // pins. Give every such row the partner's function and re-derive: the
    // constants become the published ones and the circuit is exact.
    let report = reconcile_inits(table);
    let mut swapped = table.clone();
    for row in &mut swapped.rows {
        if let Some(cm) = &report.row(row.lut).unwrap().cross_match {
            let partner = table.row(cm.lut).unwrap();
            row.outputs = partner.outputs.clone();
        }
    }
    let inits: Vec<Init64> = swapped.rows.iter().map(|r| r.derived_init().unwrap()).collect();
    let expected: Vec<Init64> = table.rows.iter().map(|r| r.published_init).collect();
    assert_eq!(inits, expected);
    let rewired = build_with_inits(&swapped, &inits);
    assert!(verify_exhaustive(&rewired, 4).unwrap().all_pass());
}

#[test]
fn reconcile_findings() {
    let report = reconcile_inits(DesignTable::proposed_mult4());
    let matched: Vec<usize> = report.rows.iter().filter(|r| r.matches).map(|r| r.lut).collect();
    assert_eq!(matched, [1, 4, 5, 6, 7]);
    assert_eq!((report.matched, report.mismatched), (5, 6));

    let row1 = report.row(1).unwrap();
    assert_eq!(row1.derived, Init64(0x78887888A0A0A0A0));
    assert_eq!((row1.o5_half_matches, row1.o6_half_matches), (Some(true), Some(true)));

    let row7 = report.row(7).unwrap();
    assert!(row7.matches);
    assert!(row7.notes.iter().any(|n| n.contains("S3")));
    assert!(row7.notes.iter().any(|n| n.contains("as printed") && n.contains("fails")));

    let row8 = report.row(8).unwrap();
    assert!(!row8.matches);
    assert_eq!(row8.published, Init64(0x8000000000000000));
    assert_eq!(row8.derived, Init64(0x37D760A008A0A0A0));
    assert_eq!(row8.cross_match.as_ref().unwrap().signal, "Gen2");

    let row11 = report.row(11).unwrap();
    assert!(row11.notes.iter().any(|n| n.contains("B3 A")));

    for row in &report.rows {
        assert_eq!(row.matches, row.published == row.derived);
        if !row.matches {
            assert!(!row.notes.is_empty());
        }
    }
    assert!(report.notes.iter().any(|n| n.contains("I0-I6")));
    let text = report.to_string();
    assert!(text.contains("0x8000000000000000"));
    assert!(text.ends_with("summary: 5 match, 6 mismatch"));
}

#[test]
fn row_eight_published_and_is_unreachable_for_prop2() {
    // A3 = B2 = 1, everything else 0: Prop2 = A3&B2 = 1, a 6-input AND gives 0.
    let prop2 = &DesignTable::proposed_mult4().row(8).unwrap().outputs[0].function;
    let env = [
        ("A3", true),
        ("B2", true),
        ("A0", false),
        ("A1", false),
        ("A2", false),
        ("B0", false),
        ("B1", false),
        ("B3", false),
    ];
    assert!(prop2.eval(&env).unwrap());
}

#[test]
fn dominance_simplification() {
    assert!(equivalent(&c1_unsimplified(), &c1_simplified()).unwrap());

    let vars = ["B3", "A1", "B1", "A3", "B2", "A2", "A0", "B0"];
    let s3 = &DesignTable::proposed_mult4().row(6).unwrap().outputs[0].function;
    let s3_full = expand_intermediates(&"S2 ^ C1".parse().unwrap()).substitute("C1", &c1_unsimplified());
    // the unsimplified carry pulls in A0 and B0, so compare over all eight
    let a = to_truth_table(s3, &vars).unwrap();
    let b = to_truth_table(&s3_full, &vars).unwrap();
    assert_eq!(a, b);
}

#[test]
fn array_baselines_are_exact() {
    for width in 2..=5 {
        let n = build_array_mult(width).unwrap();
        let report = verify_exhaustive(&n, width).unwrap();
        assert_eq!(report.total, 1 << (2 * width));
        assert!(report.all_pass(), "width {width}: {report}");
    }
    assert!(build_array_mult(4).unwrap().resources().lut_count() > 11);
}

#[test]
fn json_round_trip_preserves_behaviour() {
    let n = build_proposed_mult4(InitSource::Derived).unwrap();
    let back = load(&save(&n)).unwrap();
    assert_eq!(back, n);
    let (s1, s2) = (Simulator::new(&n).unwrap(), Simulator::new(&back).unwrap());
    for k in 0..256usize {
        let bits: Vec<bool> = (0..8).map(|i| (k >> i) & 1 == 1).collect();
        assert_eq!(s1.run(&bits).unwrap(), s2.run(&bits).unwrap());
    }
}

#[test]
fn o5_taps_read_only_the_low_half() {
    for row in DesignTable::proposed_mult4().rows.iter().filter(|r| r.is_dual()) {
        assert!(row.output(Tap::O5).is_some());
        assert_eq!(row.pins[5], fabricmul::truthtable::Pin::Tie1, "LUT {} dual mode needs I5 = 1", row.lut);
    }
}
