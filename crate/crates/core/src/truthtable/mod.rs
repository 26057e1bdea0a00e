//! Boolean functions, truth tables and LUT INIT derivation.

mod expr;
mod init;

use std::fmt;

use thiserror::Error;

pub use expr::{Assignment, BoolExpr};
pub use init::{Init64, Pin, PinBinding, Tap};

/// Largest variable count [`to_truth_table`] accepts.
pub const MAX_TABLE_VARS: usize = 8;
/// Largest combined variable count [`equivalent`] enumerates.
pub const MAX_EQUIV_VARS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthTableError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{0}` is not in the variable list")]
    VariableCoverage(String),
    #[error("{count} variables exceed the limit of {limit}")]
    ArityOverflow { count: usize, limit: usize },
    #[error("signal `{0}` is bound to more than one pin")]
    DuplicatePin(String),
    #[error("signal `{0}` is bound to I5, which the O5 output cannot observe")]
    HiddenFromO5(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("malformed INIT constant `{0}`")]
    BadInit(String),
    #[error("{0}")]
    BadPinList(String),
}

/// Exhaustive output column of a function over an ordered variable list.
///
/// Entry `k` is the output under the assignment whose bit `i` is `vars[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    vars: Vec<String>,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Packed value with entry 0 in the least significant bit; `None` above 6 variables.
    pub fn as_u64(&self) -> Option<u64> {
        (self.vars.len() <= 6)
            .then(|| self.bits.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | (u64::from(b) << k)))
    }
}

impl fmt::Display for TruthTable {
    /// Hex digits, most significant entry first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0x")?;
        let digits = self.bits.len().div_ceil(4);
        for d in (0..digits).rev() {
            let nibble = (0..4)
                .filter(|b| self.bits.get(d * 4 + b).copied().unwrap_or(false))
                .fold(0u32, |acc, b| acc | (1 << b));
            write!(f, "{}", char::from_digit(nibble, 16).unwrap().to_ascii_uppercase())?;
        }
        Ok(())
    }
}

pub fn eval_expr<A: Assignment + ?Sized>(expr: &BoolExpr, assignment: &A) -> Result<bool, TruthTableError> {
    expr.eval(assignment)
}

fn eval_indexed(expr: &BoolExpr, vars: &[String], index: usize) -> Result<bool, TruthTableError> {
    expr.eval(&|name: &str| vars.iter().position(|v| v == name).map(|i| (index >> i) & 1 == 1))
}

pub fn to_truth_table(expr: &BoolExpr, vars: &[&str]) -> Result<TruthTable, TruthTableError> {
    if vars.len() > MAX_TABLE_VARS {
        return Err(TruthTableError::ArityOverflow { count: vars.len(), limit: MAX_TABLE_VARS });
    }
    if let Some(missing) = expr.variables().into_iter().find(|v| !vars.contains(&v.as_str())) {
        return Err(TruthTableError::VariableCoverage(missing));
    }
    let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    let bits = (0..1usize << vars.len()).map(|k| eval_indexed(expr, &vars, k)).collect::<Result<_, _>>()?;
    Ok(TruthTable { vars, bits })
}

/// Value seen by the function at LUT pattern `index` under `binding`.
///
/// Tied pins read 1 regardless of the pattern, so every pattern maps onto
/// some legal (tie-consistent) pattern and the whole constant gets filled.
/// O5 reads the pattern with I5 dropped.
fn eval_on_pattern(expr: &BoolExpr, binding: &PinBinding, tap: Tap, index: usize) -> Result<bool, TruthTableError> {
    let index = match tap {
        Tap::O6 => index,
        Tap::O5 => index & 0x1F,
    };
    expr.eval(&|name: &str| {
        binding.position(name).map(|pin| {
            if tap == Tap::O5 && pin == 5 {
                // checked in derive_init before we get here
                false
            } else {
                (index >> pin) & 1 == 1
            }
        })
    })
}

fn check_bound(expr: &BoolExpr, binding: &PinBinding, tap: Tap) -> Result<(), TruthTableError> {
    for var in expr.variables() {
        match binding.position(&var) {
            None => return Err(TruthTableError::UnboundVariable(var)),
            Some(5) if tap == Tap::O5 => return Err(TruthTableError::HiddenFromO5(var)),
            Some(_) => {}
        }
    }
    Ok(())
}

fn tied_mask(binding: &PinBinding) -> usize {
    binding.pins().iter().enumerate().filter(|(_, p)| **p == Pin::Tie1).fold(0, |acc, (i, _)| acc | (1 << i))
}

/// INIT constant realising `expr` on the tap selected by `binding`.
///
/// O6 derivations fill all 64 bits. O5 derivations fill the low 32 bits and
/// copy them into the high half, so the constant does not depend on I5.
/// Tied-off inputs are forced to 1 while evaluating, which replicates the
/// tied-1 rows into the don't-care positions.
pub fn derive_init(expr: &BoolExpr, binding: &PinBinding) -> Result<Init64, TruthTableError> {
    let tap = binding.tap();
    check_bound(expr, binding, tap)?;
    let ties = tied_mask(binding);
    let mut value = 0u64;
    for k in 0..64 {
        if eval_on_pattern(expr, binding, tap, k | ties)? {
            value |= 1 << k;
        }
    }
    Ok(Init64(value))
}

/// Constant for a dual-output site: O6 from the high half, O5 from the low half.
///
/// The O6 function is read with I5 = 1, which the dual-output mode requires.
pub fn derive_dual_init(o6: &BoolExpr, o5: &BoolExpr, pins: &[Pin; 6]) -> Result<Init64, TruthTableError> {
    let high = derive_init(o6, &PinBinding::new(pins.clone(), Tap::O6)?)?;
    let low = derive_init(o5, &PinBinding::new(pins.clone(), Tap::O5)?)?;
    Ok(Init64::from_halves(high.high(), low.low()))
}

/// Exhaustive equivalence over the union of both variable sets.
pub fn equivalent(a: &BoolExpr, b: &BoolExpr) -> Result<bool, TruthTableError> {
    let mut vars = a.variables();
    vars.extend(b.variables());
    if vars.len() > MAX_EQUIV_VARS {
        return Err(TruthTableError::ArityOverflow { count: vars.len(), limit: MAX_EQUIV_VARS });
    }
    let vars: Vec<String> = vars.into_iter().collect();
    for k in 0..1usize << vars.len() {
        if eval_indexed(a, &vars, k)? != eval_indexed(b, &vars, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BoolExpr {
        s.parse().unwrap()
    }

    fn binding(list: &str, tap: Tap) -> PinBinding {
        PinBinding::parse(list, tap).unwrap()
    }

    #[test]
    fn truth_table_examples() {
        assert_eq!(to_truth_table(&p("A0 & B0"), &["A0", "B0"]).unwrap().as_u64(), Some(0x8));
        let zero = to_truth_table(&p("0"), &["x"]).unwrap();
        assert_eq!(zero.bits(), &[false, false]);
        let p1 = to_truth_table(&p("A1&B0 ^ A0&B1"), &["A0", "B1", "B0", "A1"]).unwrap();
        assert_eq!(p1.as_u64(), Some(0x7888));
        assert_eq!(p1.to_string(), "0x7888");
    }

    #[test]
    fn truth_table_errors() {
        assert_eq!(to_truth_table(&p("a & b"), &["a"]).unwrap_err(), TruthTableError::VariableCoverage("b".into()));
        let nine = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];
        assert!(matches!(
            to_truth_table(&p("a"), &nine).unwrap_err(),
            TruthTableError::ArityOverflow { count: 9, limit: 8 }
        ));
        let eight = to_truth_table(&p("a ^ h"), &nine[..8]).unwrap();
        assert_eq!(eight.len(), 256);
        assert_eq!(eight.as_u64(), None);
    }

    #[test]
    fn derive_init_o5_examples() {
        let p0 = derive_init(&p("A0 & B0"), &binding("A0, B1, B0, A1, 1, 1", Tap::O5)).unwrap();
        assert_eq!(p0.low(), 0xA0A0A0A0);
        assert_eq!(p0.high(), p0.low());

        let gen1 = derive_init(&p("S3 & S1 & A3 & B0"), &binding("B0, S1, A3, S3, 1, 1", Tap::O5)).unwrap();
        assert_eq!(gen1.low(), 0x80008000);

        assert_eq!(derive_init(&p("1"), &binding("a, b, c, d, e, f", Tap::O6)).unwrap(), Init64::ONES);
        assert_eq!(derive_init(&p("1"), &binding("1, 1, 1, 1, 1, 1", Tap::O5)).unwrap(), Init64::ONES);
    }

    #[test]
    fn derive_init_errors() {
        let b = binding("A0, B1, B0, A1, 1, 1", Tap::O6);
        assert_eq!(derive_init(&p("A0 & A3"), &b).unwrap_err(), TruthTableError::UnboundVariable("A3".into()));
        let hidden = binding("a, b, c, d, e, f", Tap::O5);
        assert_eq!(derive_init(&p("a & f"), &hidden).unwrap_err(), TruthTableError::HiddenFromO5("f".into()));
        assert!(derive_init(&p("a & b & c & d & e"), &hidden).is_ok());
    }

    #[test]
    fn dual_init_reproduces_row_one() {
        let pins = binding("A0, B1, B0, A1, 1, 1", Tap::O6).pins().clone();
        let init = derive_dual_init(&p("A1&B0 ^ A0&B1"), &p("A0&B0"), &pins).unwrap();
        assert_eq!(init, Init64(0x78887888A0A0A0A0));
    }

    #[test]
    fn equivalence() {
        assert!(!equivalent(&p("x"), &p("!x")).unwrap());
        assert!(equivalent(&p("x ^ y"), &p("y ^ x")).unwrap());
        assert!(equivalent(&p("a & (b | c)"), &p("a&b | a&c")).unwrap());
        let wide = (0..17).map(|i| format!("v{i}")).collect::<Vec<_>>().join(" ^ ");
        assert!(matches!(
            equivalent(&p(&wide), &p("0")).unwrap_err(),
            TruthTableError::ArityOverflow { count: 17, .. }
        ));
    }

    #[test]
    fn unsimplified_carry_evaluates_true_on_example_assignment() {
        let c1_full = p("(A1&B2 & A2&B1) | (A1&B2 & (A1&B1 & A0&B2 & A2&B0)) | (A2&B1 & (A1&B1 & A0&B2 & A2&B0))");
        let env = [("A1", true), ("B2", true), ("A2", true), ("B1", true), ("A0", false), ("B0", false)];
        assert!(eval_expr(&c1_full, &env).unwrap());
    }
}
