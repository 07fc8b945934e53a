use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Logarithm base in which an entropy is expressed.
///
/// Serialized as the number `2` or the string `"e"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }

    /// `x log x` with the continuous extension `0 log 0 = 0`.
    #[inline]
    pub fn xlogx(self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            x * self.log(x)
        }
    }

    /// Converts a quantity measured in nats into this base.
    #[inline]
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Bits => nats / std::f64::consts::LN_2,
            LogBase::Nats => nats,
        }
    }

    /// Reads `ENTRO_LOG_BASE` (`2` or `e`); unset means bits.
    pub fn from_env() -> crate::Result<Self> {
        match std::env::var("ENTRO_LOG_BASE") {
            Ok(v) => v.parse(),
            Err(_) => Ok(LogBase::Bits),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Bits => f.write_str("2"),
            LogBase::Nats => f.write_str("e"),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2" | "bits" => Ok(LogBase::Bits),
            "e" | "nats" => Ok(LogBase::Nats),
            other => Err(Error::usage(format!(
                "log base must be 2 or e, got `{other}`"
            ))),
        }
    }
}

impl Serialize for LogBase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            LogBase::Bits => serializer.serialize_u8(2),
            LogBase::Nats => serializer.serialize_str("e"),
        }
    }
}

impl<'de> Deserialize<'de> for LogBase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(2.0) => Ok(LogBase::Bits),
            Raw::Num(n) => Err(serde::de::Error::custom(format!(
                "unsupported log base {n}"
            ))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
