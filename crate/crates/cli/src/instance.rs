//! Instance files: one JSON object whose keys each subcommand reads as needed.

use std::path::Path;

use pilp_core::config::Config;
use pilp_core::io::{parse_int, parse_polyhedron, parse_rat_matrix, parse_rat_vec};
use pilp_core::milp::MipProblem;
use pilp_core::numkernel::rational::Rational;
use pilp_core::polyhedron::PartiallyOpenPolyhedron;
use pilp_core::{Error, RatMatrix, Result};
use serde_json::{Map, Value};

const KNOWN_KEYS: &[&str] = &["name", "expect", "A", "b", "c", "Q", "p", "P", "integer", "config"];

pub struct Instance {
    fields: Map<String, Value>,
}

pub fn read_json(path: &Path) -> Result<Value> {
    let stdin = path.as_os_str() == "-";
    let name = if stdin { "stdin".to_owned() } else { path.display().to_string() };
    let text = if stdin { std::io::read_to_string(std::io::stdin()) } else { std::fs::read_to_string(path) }
        .map_err(|e| Error::Parse(format!("{name}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

impl Instance {
    pub fn from_value(v: Value) -> Result<Self> {
        let Value::Object(fields) = v else {
            return Err(Error::Parse("instance: expected a JSON object".into()));
        };
        if let Some(k) = fields.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Parse(format!("{k}: unknown field")));
        }
        Ok(Instance { fields })
    }

    fn get(&self, key: &str) -> Result<&Value> {
        self.fields.get(key).ok_or_else(|| Error::Parse(format!("{key}: missing")))
    }

    /// The instance's own `config` block, overridden wholesale by `file`.
    pub fn config(&self, file: Option<&Value>) -> Result<Config> {
        match file.or(self.fields.get("config")) {
            Some(v) => Config::from_json(v),
            None => Ok(Config::default()),
        }
    }

    pub fn a(&self) -> Result<RatMatrix> {
        let a = parse_rat_matrix(self.get("A")?, "A", None)?;
        if a.ncols() == 0 {
            return Err(Error::Dimension("A: no columns".into()));
        }
        Ok(a)
    }

    pub fn b(&self, m: usize) -> Result<Vec<Rational>> {
        let b = parse_rat_vec(self.get("b")?, "b")?;
        if b.len() != m {
            return Err(Error::Dimension(format!("b has length {}, expected {m}", b.len())));
        }
        Ok(b)
    }

    pub fn c(&self, n: usize) -> Result<Vec<Rational>> {
        let c = parse_rat_vec(self.get("c")?, "c")?;
        if c.len() != n {
            return Err(Error::Dimension(format!("c has length {}, expected {n}", c.len())));
        }
        Ok(c)
    }

    pub fn p(&self) -> Result<usize> {
        match self.fields.get("p") {
            None => Ok(0),
            Some(v) => {
                let p = parse_int(v, "p")?;
                usize::try_from(p).map_err(|_| Error::Parse("p: expected a non-negative count".into()))
            }
        }
    }

    /// `Q` over `(b, z)`, if given.
    pub fn q(&self, arity: usize) -> Result<Option<PartiallyOpenPolyhedron>> {
        self.fields.get("Q").map(|v| parse_polyhedron(v, "Q", Some(arity))).transpose()
    }

    /// `P` directly, or `{x : A x <= b}`.
    pub fn polyhedron(&self) -> Result<PartiallyOpenPolyhedron> {
        if let Some(v) = self.fields.get("P") {
            return parse_polyhedron(v, "P", None);
        }
        let a = self.a()?;
        let b = self.b(a.nrows())?;
        PartiallyOpenPolyhedron::from_matrix(&a, &b)
    }

    /// `integer` lists the integral variables; all of them when absent.
    pub fn mip(&self) -> Result<MipProblem> {
        let p = self.polyhedron()?;
        let int_indices = match self.fields.get("integer") {
            None => (0..p.dim()).collect(),
            Some(v) => {
                let arr = v.as_array().ok_or_else(|| Error::Parse("integer: expected a list of indices".into()))?;
                let mut idx = Vec::with_capacity(arr.len());
                for (i, x) in arr.iter().enumerate() {
                    let k = x.as_u64().ok_or_else(|| Error::Parse(format!("integer[{i}]: expected an index")))? as usize;
                    if k >= p.dim() {
                        return Err(Error::Dimension(format!("integer[{i}] = {k} out of range for dimension {}", p.dim())));
                    }
                    idx.push(k);
                }
                idx
            }
        };
        Ok(MipProblem { p, int_indices })
    }
}
