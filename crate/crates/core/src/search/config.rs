use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Which hypotheses the set under proof satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    General,
    /// The elements sum to zero.
    ZeroSum,
    /// Zero-sum and no pair `{x, -x}` (so no involutions either).
    ZeroSumNoInverse,
}

impl Mode {
    pub fn is_zero_sum(self) -> bool {
        !matches!(self, Mode::General)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::ZeroSum => "zero_sum",
            Mode::ZeroSumNoInverse => "zero_sum_no_inverse",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Mode::General),
            "zero-sum" | "zero_sum" => Ok(Mode::ZeroSum),
            "zero-sum-distinct" | "zero_sum_no_inverse" | "zero-sum-no-inverse" => {
                Ok(Mode::ZeroSumNoInverse)
            }
            _ => Err(invalid(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! simple_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(invalid(format!(concat!("unknown ", stringify!($name), " {:?}"), s))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

simple_enum!(Arith { Rational => "rational", Integer => "integer" });
simple_enum!(DupPolicy { Skip => "skip", Follow => "follow" });
simple_enum!(IntervalPolicy { Paper => "paper", Conservative => "conservative" });
simple_enum!(LeafPolicy { Strict => "strict", Paper => "paper" });
simple_enum!(RootPolicy { Aligned => "aligned", Identity => "identity" });

/// Largest `k` the engine accepts; rows are stored as `u32` bitmasks.
pub const MAX_ENGINE_K: usize = 32;

/// Everything that determines a search run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeConfig {
    pub k: usize,
    pub mode: Mode,
    pub arith: Arith,
    pub dup_policy: DupPolicy,
    pub interval_policy: IntervalPolicy,
    pub leaf_policy: LeafPolicy,
    pub max_depth: Option<usize>,
    pub thread_count: usize,
    /// Abort once this many nodes have been created.
    pub node_budget: Option<u64>,
}

impl ModeConfig {
    pub fn new(k: usize, mode: Mode) -> Self {
        ModeConfig {
            k,
            mode,
            arith: Arith::Integer,
            dup_policy: DupPolicy::Skip,
            interval_policy: IntervalPolicy::Paper,
            leaf_policy: LeafPolicy::Strict,
            max_depth: None,
            thread_count: 1,
            node_budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(invalid(format!("k must be at least 2, got {}", self.k)));
        }
        if self.k > MAX_ENGINE_K {
            return Err(invalid(format!(
                "k = {} exceeds the engine limit of {MAX_ENGINE_K}",
                self.k
            )));
        }
        if self.thread_count == 0 {
            return Err(invalid("thread count must be positive"));
        }
        Ok(())
    }
}
