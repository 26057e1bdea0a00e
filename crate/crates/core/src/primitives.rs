//! Bit-exact combinational models of the 7-series LUT6, LUT6_2 and CARRY4.

use crate::truthtable::Init64;

/// Pack `[I0, .., I5]` into the INIT bit index.
pub fn lut_index(inputs: [bool; 6]) -> usize {
    inputs.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i))
}

/// Inverse of [`lut_index`].
pub fn lut_inputs(index: usize) -> [bool; 6] {
    std::array::from_fn(|i| (index >> i) & 1 == 1)
}

pub fn lut6_eval(init: Init64, inputs: [bool; 6]) -> bool {
    init.bit(lut_index(inputs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lut6DualOutput {
    pub o6: bool,
    pub o5: bool,
}

/// O6 reads the full constant; O5 reads the low 32 bits and ignores I5.
pub fn lut6_2_eval(init: Init64, inputs: [bool; 6]) -> Lut6DualOutput {
    let index = lut_index(inputs);
    Lut6DualOutput { o6: init.bit(index), o5: init.bit(index & 0x1F) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Carry4Output {
    /// Sum outputs O[0..3].
    pub o: [bool; 4],
    /// Carry outputs CO[0..3]; `co[3]` is the chain's carry out.
    pub co: [bool; 4],
}

/// One CARRY4 block, stage 0 first.
///
/// Stage `i` propagates its incoming carry when `s[i]` is set and otherwise
/// takes `di[i]`; its sum output is `s[i] ^ carry_in_i`. The CYINIT/CI pair is
/// a single logical carry-in here.
pub fn carry4_eval(ci: bool, s: [bool; 4], di: [bool; 4]) -> Carry4Output {
    let mut out = Carry4Output::default();
    let mut carry = ci;
    for i in 0..4 {
        out.o[i] = s[i] ^ carry;
        carry = if s[i] { carry } else { di[i] };
        out.co[i] = carry;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bits written most significant first, as in `s=1010`.
    fn msb_first(text: &str) -> [bool; 4] {
        let v: Vec<bool> = text.chars().rev().map(|c| c == '1').collect();
        v.try_into().unwrap()
    }

    #[test]
    fn lut6_examples() {
        assert!(lut6_eval(Init64::ONES, [false; 6]));
        assert!(lut6_eval(Init64(0x8000000000000000), [true; 6]));
        assert!(!lut6_eval(Init64(0x8000000000000000), [false, true, true, true, true, true]));
    }

    #[test]
    fn lut6_row_one_pattern_53() {
        // A0=1 B1=0 B0=1 A1=0, I4 = I5 = 1
        let inputs = [true, false, true, false, true, true];
        assert_eq!(lut_index(inputs), 53);
        // P1 = A1&B0 ^ A0&B1 = 0
        assert!(!lut6_eval(Init64(0x78887888A0A0A0A0), inputs));
    }

    #[test]
    fn lut6_2_examples() {
        let row1 = lut6_2_eval(Init64(0x78887888A0A0A0A0), [true; 6]);
        assert_eq!(row1, Lut6DualOutput { o6: false, o5: true });

        // B3=1 A0=1 S1=1 A3=0 B0=0 I5=1
        let row5 = lut6_2_eval(Init64(0x8778787808808080), [true, true, true, false, false, true]);
        assert_eq!(row5, Lut6DualOutput { o6: false, o5: true });

        let same_halves = Init64(0x1234ABCD_1234ABCD);
        for k in 0..64 {
            let out = lut6_2_eval(same_halves, lut_inputs(k));
            assert_eq!(out.o5, lut6_eval(same_halves, lut_inputs(k & 0x1F)));
        }
    }

    #[test]
    fn carry4_examples() {
        for di in 0..16usize {
            let di = std::array::from_fn(|i| (di >> i) & 1 == 1);
            let out = carry4_eval(true, [true; 4], di);
            assert_eq!(out, Carry4Output { o: [false; 4], co: [true; 4] });
        }
        // Full generate: every carry is 1, but stages 1..3 see carry-in 1,
        // so their sums are 0 ^ 1.
        let generate = carry4_eval(false, [false; 4], [true; 4]);
        assert_eq!(generate, Carry4Output { o: msb_first("1110"), co: [true; 4] });

        // S3..S0 = 1010, DI3..DI0 = 0100, CI = 0:
        // stage0 s=0: o=0, c=DI0=0; stage1 s=1: o=1, c=0;
        // stage2 s=0: o=0, c=DI2=1; stage3 s=1: o=0, c=1
        let traced = carry4_eval(false, msb_first("1010"), msb_first("0100"));
        assert_eq!(traced.o, msb_first("0010"));
        assert_eq!(traced.co, msb_first("1100"));
    }

    #[test]
    fn carry4_adds_exhaustively() {
        for x in 0..16u32 {
            for y in 0..16u32 {
                for c in [false, true] {
                    let s = std::array::from_fn(|i| ((x ^ y) >> i) & 1 == 1);
                    let di = std::array::from_fn(|i| (x >> i) & 1 == 1);
                    let out = carry4_eval(c, s, di);
                    let sum = out.o.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u32::from(b) << i))
                        | (u32::from(out.co[3]) << 4);
                    assert_eq!(sum, x + y + u32::from(c));
                }
            }
        }
    }
}
