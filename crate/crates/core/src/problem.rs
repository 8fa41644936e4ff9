//! Problem files: the family of sets to decompose and run options.
//!
//! ```json
//! {"dimension": 2, "variables": ["x", "y"],
//!  "sets": [{"name": "circle", "polynomials": [[[[2,0],"1"],[[0,2],"1"],[[0,0],"-1"]]]}],
//!  "options": {"mode": "GREEDY", "budgetNodes": 10000, "extraPolynomials": [[[[1,0],"1"]]]}}
//! ```
//!
//! A polynomial is a list of `[exponents, coefficient]` terms; coefficients
//! are integers or `"num/den"` strings. `extraPolynomials` add sections to
//! the initial decomposition without belonging to any set.

use mincad_exact::{rational, Polynomial, Rational};
use serde::Deserialize;
use serde_json::Value;

use crate::model::{Family, SetDefinition};
use crate::Error;

pub const DEFAULT_BUDGET_NODES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Greedy,
    Exhaustive,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(Mode::Greedy),
            "exhaustive" => Ok(Mode::Exhaustive),
            _ => Err(Error::Parse(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    /// Trust the input to be closed and curtained instead of checking.
    pub assume_closed_curtained: bool,
    pub budget_nodes: usize,
    pub extra_polynomials: Vec<Polynomial>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Greedy,
            assume_closed_curtained: false,
            budget_nodes: DEFAULT_BUDGET_NODES,
            extra_polynomials: vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub dimension: usize,
    pub variables: Vec<String>,
    pub family: Family,
    pub options: Options,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    name: String,
    polynomials: Vec<Value>,
    #[serde(default)]
    mode: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase")]
struct RawBudget {
    nodes: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase")]
struct RawOptions {
    mode: Option<String>,
    #[serde(default)]
    assume_closed_curtained: bool,
    budget: Option<RawBudget>,
    budget_nodes: Option<usize>,
    #[serde(default)]
    extra_polynomials: Vec<Value>,
}

#[derive(Deserialize)]
struct RawProblem {
    dimension: usize,
    variables: Vec<String>,
    sets: Vec<RawSet>,
    #[serde(default)]
    options: RawOptions,
}

fn parse_coefficient(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|e| Error::Parse(e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(rational::rat)
            .ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer or a string"))),
        other => Err(Error::Parse(format!("invalid coefficient {other}"))),
    }
}

/// Parses a polynomial given as a list of `[exponents, coefficient]` terms.
pub fn parse_polynomial(v: &Value, nvars: usize) -> Result<Polynomial, Error> {
    let terms = v
        .as_array()
        .ok_or_else(|| Error::Parse("polynomial must be a list of terms".into()))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Parse(format!("term {t} is not [exponents, coefficient]")))?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| Error::Parse(format!("exponents {} are not a list", pair[0])))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| Error::Parse(format!("invalid exponent {e}")))
            })
            .collect::<Result<Vec<u32>, Error>>()?;
        out.push((exps, parse_coefficient(&pair[1])?));
    }
    Polynomial::from_terms(nvars, out).map_err(|e| Error::Parse(e.to_string()))
}

/// Serializes a polynomial in the problem-file term format.
pub fn polynomial_to_value(p: &Polynomial) -> Value {
    Value::Array(
        p.to_term_list()
            .into_iter()
            .map(|(e, c)| serde_json::json!([e, c]))
            .collect(),
    )
}

impl Problem {
    pub fn new(family: Family, variables: Vec<String>) -> Result<Self, Error> {
        let dimension = variables.len();
        let p = Problem {
            dimension,
            variables,
            family,
            options: Options::default(),
        };
        p.check()?;
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = raw.dimension;
        let mut sets = Vec::with_capacity(raw.sets.len());
        for s in raw.sets {
            if let Some(m) = &s.mode {
                if !m.eq_ignore_ascii_case("algebraic") {
                    return Err(Error::Parse(format!("set `{}` has unsupported mode `{m}`", s.name)));
                }
            }
            let polys = s
                .polynomials
                .iter()
                .map(|v| parse_polynomial(v, n))
                .collect::<Result<Vec<_>, _>>()?;
            sets.push(SetDefinition::new(&s.name, polys));
        }
        let o = raw.options;
        let options = Options {
            mode: o.mode.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
            assume_closed_curtained: o.assume_closed_curtained,
            budget_nodes: o
                .budget_nodes
                .or(o.budget.and_then(|b| b.nodes))
                .unwrap_or(DEFAULT_BUDGET_NODES),
            extra_polynomials: o
                .extra_polynomials
                .iter()
                .map(|v| parse_polynomial(v, n))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let p = Problem {
            dimension: n,
            variables: raw.variables,
            family: Family::new(sets),
            options,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), Error> {
        if !(1..=3).contains(&self.dimension) {
            return Err(Error::Parse(format!("dimension {} is not 1, 2 or 3", self.dimension)));
        }
        if self.variables.len() != self.dimension {
            return Err(Error::Parse(format!(
                "{} variables declared for dimension {}",
                self.variables.len(),
                self.dimension
            )));
        }
        if self.family.sets.is_empty() {
            return Err(Error::Parse("no sets given".into()));
        }
        for s in &self.family.sets {
            if s.polynomials.is_empty() {
                return Err(Error::Parse(format!("set `{}` has no polynomials", s.name)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let sets: Vec<Value> = self
            .family
            .sets
            .iter()
            .map(|s| {
                serde_json::json!({
                    "name": s.name,
                    "polynomials": s.polynomials.iter().map(polynomial_to_value).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mode = match self.options.mode {
            Mode::Greedy => "GREEDY",
            Mode::Exhaustive => "EXHAUSTIVE",
        };
        let doc = serde_json::json!({
            "dimension": self.dimension,
            "variables": self.variables,
            "sets": sets,
            "options": {
                "mode": mode,
                "assumeClosedCurtained": self.options.assume_closed_curtained,
                "budgetNodes": self.options.budget_nodes,
                "extraPolynomials": self.options.extra_polynomials.iter().map(polynomial_to_value).collect::<Vec<_>>(),
            }
        });
        serde_json::to_string_pretty(&doc).expect("problem serializes")
    }
}
