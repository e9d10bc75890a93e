//! Tunable constants: flatness table, enumeration bounds and caps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numkernel::rational::{parse_rational, rat, Rational};

/// Upper bounds on the flatness constant per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessTable {
    values: BTreeMap<usize, Rational>,
}

impl Default for FlatnessTable {
    fn default() -> Self {
        FlatnessTable { values: [(1, rat(1)), (2, rat(3)), (3, rat(16))].into_iter().collect() }
    }
}

impl FlatnessTable {
    pub fn new(values: BTreeMap<usize, Rational>) -> Result<Self> {
        let mut prev: Option<&Rational> = None;
        for (n, w) in &values {
            if *n == 0 || !w.is_positive() {
                return Err(Error::Parse(format!("flatness constant for n={n} must be positive")));
            }
            if prev.is_some_and(|p| w < p) {
                return Err(Error::Parse("flatness constants must be non-decreasing".into()));
            }
            prev = Some(w);
        }
        Ok(FlatnessTable { values })
    }

    /// The configured bound for dimension `n`.
    pub fn get(&self, n: usize) -> Result<Rational> {
        self.values.get(&n).cloned().ok_or(Error::FlatnessNotConfigured(n))
    }

    pub fn max_dim(&self) -> usize {
        self.values.keys().next_back().copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub flatness: FlatnessTable,
    /// Coordinate bound for the boxed integer-hull enumeration.
    pub hull_bound: BigInt,
    /// Denominator bound for the gap search; derived from the data when absent.
    pub denom_bound: Option<BigInt>,
    /// The doubling search for the gap gives up above this value.
    pub gap_cap: Rational,
    /// Largest dimension handled by the structural recursion.
    pub max_dim: usize,
    /// Largest number of integral points any enumeration may visit.
    pub enum_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            flatness: FlatnessTable::default(),
            hull_bound: BigInt::from(64),
            denom_bound: None,
            gap_cap: rat(1024),
            max_dim: 3,
            enum_limit: 2_000_000,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigRepr {
    flatness: Option<BTreeMap<String, String>>,
    #[serde(rename = "B")]
    hull_bound: Option<i64>,
    #[serde(rename = "D")]
    denom_bound: Option<String>,
    gap_cap: Option<String>,
    max_dim: Option<usize>,
    enum_limit: Option<usize>,
}

impl Config {
    /// Parses the JSON form; absent keys keep their defaults.
    pub fn from_json(v: &serde_json::Value) -> Result<Config> {
        let r: ConfigRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("config: {e}")))?;
        let mut c = Config::default();
        if let Some(f) = r.flatness {
            let mut values = BTreeMap::new();
            for (k, v) in f {
                let n: usize = k.parse().map_err(|_| Error::Parse(format!("config.flatness: bad dimension {k:?}")))?;
                values.insert(n, parse_rational(&v)?);
            }
            c.flatness = FlatnessTable::new(values)?;
        }
        if let Some(b) = r.hull_bound {
            if b < 1 {
                return Err(Error::Parse("config.B must be >= 1".into()));
            }
            c.hull_bound = BigInt::from(b);
        }
        if let Some(d) = r.denom_bound {
            let d = parse_rational(&d)?;
            if !d.is_integer() || !d.is_positive() {
                return Err(Error::Parse("config.D must be a positive integer".into()));
            }
            c.denom_bound = Some(d.to_integer());
        }
        if let Some(g) = r.gap_cap {
            let g = parse_rational(&g)?;
            if g.is_negative() || g.is_zero() {
                return Err(Error::Parse("config.gap_cap must be positive".into()));
            }
            c.gap_cap = g;
        }
        if let Some(m) = r.max_dim {
            c.max_dim = m;
        }
        if let Some(l) = r.enum_limit {
            c.enum_limit = l;
        }
        Ok(c)
    }
}
