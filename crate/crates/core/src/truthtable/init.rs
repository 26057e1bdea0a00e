use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TruthTableError;

/// 64-bit LUT truth-table constant.
///
/// Bit `k` holds the output for the input pattern `k = I5·32 + I4·16 + … + I0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Init64(pub u64);

impl Init64 {
    pub const ZERO: Init64 = Init64(0);
    pub const ONES: Init64 = Init64(u64::MAX);

    pub fn bit(self, index: usize) -> bool {
        debug_assert!(index < 64);
        (self.0 >> index) & 1 == 1
    }

    pub fn with_bit_flipped(self, index: usize) -> Init64 {
        Init64(self.0 ^ (1u64 << index))
    }

    /// The O5 half (bits 31..0).
    pub fn low(self) -> u32 {
        self.0 as u32
    }

    /// The half O6 reads when I5 = 1 (bits 63..32).
    pub fn high(self) -> u32 {
        (self.0 >> 32) as u32
    }

    pub fn from_halves(high: u32, low: u32) -> Init64 {
        Init64((u64::from(high) << 32) | u64::from(low))
    }

    /// Bare 16-digit uppercase hex, as used after `64'h` in Verilog.
    pub fn hex_digits(self) -> String {
        format!("{:016X}", self.0)
    }
}

impl fmt::Display for Init64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:016X}", self.0)
    }
}

impl FromStr for Init64 {
    type Err = TruthTableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or_else(|| TruthTableError::BadInit(s.to_string()))?;
        if digits.is_empty() || digits.len() > 16 {
            return Err(TruthTableError::BadInit(s.to_string()));
        }
        u64::from_str_radix(digits, 16).map(Init64).map_err(|_| TruthTableError::BadInit(s.to_string()))
    }
}

impl Serialize for Init64 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Init64 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What drives one LUT input pin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pin {
    Signal(String),
    /// Tied to logic 1.
    Tie1,
}

impl Pin {
    pub fn signal(name: impl Into<String>) -> Pin {
        Pin::Signal(name.into())
    }

    pub fn as_signal(&self) -> Option<&str> {
        match self {
            Pin::Signal(s) => Some(s),
            Pin::Tie1 => None,
        }
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pin::Signal(s) => f.write_str(s),
            Pin::Tie1 => f.write_str("1"),
        }
    }
}

/// Which output of the LUT site a function is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tap {
    O6,
    O5,
}

impl fmt::Display for Tap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tap::O6 => "O6",
            Tap::O5 => "O5",
        })
    }
}

/// Assignment of signals (or tie-offs) to the six LUT inputs I0..I5.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PinBinding {
    pins: [Pin; 6],
    tap: Tap,
}

impl PinBinding {
    pub fn new(pins: [Pin; 6], tap: Tap) -> Result<Self, TruthTableError> {
        for (i, pin) in pins.iter().enumerate() {
            if let Pin::Signal(name) = pin {
                if pins[..i].iter().any(|p| p.as_signal() == Some(name)) {
                    return Err(TruthTableError::DuplicatePin(name.clone()));
                }
            }
        }
        Ok(PinBinding { pins, tap })
    }

    /// Parse a comma-separated list such as `"A0, B1, B0, A1, 1, 1"`; `1` is a tie-off.
    pub fn parse(list: &str, tap: Tap) -> Result<Self, TruthTableError> {
        let items: Vec<&str> = list.split(',').map(str::trim).collect();
        let pins: [Pin; 6] = items
            .iter()
            .map(|item| match *item {
                "1" => Ok(Pin::Tie1),
                s if !s.is_empty()
                    && s.starts_with(|c: char| c.is_ascii_alphabetic())
                    && s.chars().all(|c| c.is_ascii_alphanumeric()) =>
                {
                    Ok(Pin::signal(s))
                }
                s => Err(TruthTableError::BadPinList(format!("bad pin entry {s:?} in {list:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?
            .try_into()
            .map_err(|v: Vec<Pin>| {
                TruthTableError::BadPinList(format!("expected 6 pins, got {} in {list:?}", v.len()))
            })?;
        PinBinding::new(pins, tap)
    }

    pub fn pins(&self) -> &[Pin; 6] {
        &self.pins
    }

    pub fn tap(&self) -> Tap {
        self.tap
    }

    pub fn with_tap(&self, tap: Tap) -> PinBinding {
        PinBinding { pins: self.pins.clone(), tap }
    }

    /// Pin index a signal is bound to.
    pub fn position(&self, signal: &str) -> Option<usize> {
        self.pins.iter().position(|p| p.as_signal() == Some(signal))
    }
}

impl fmt::Display for PinBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pin) in self.pins.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{pin}")?;
        }
        write!(f, " -> {}", self.tap)
    }
}
