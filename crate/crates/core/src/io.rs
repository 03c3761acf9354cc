//! Theory, composite and scenario files (JSON).

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::composition::{
    boxworld_pair, compose, corrupted_composite, cpt_composite, qt_composite, stm_composite, CompositeSystem, Method,
};
use crate::darwinism::ScenarioSpec;
use crate::error::{Error, Result};
use crate::theories::{AnySystem, TheorySpec};
use crate::Q;

/// A composite by constructor name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompositeSpec {
    Cpt { d: usize, n: usize },
    Qt { qubits: usize },
    Stm { bits: usize },
    Boxworld,
    /// Negative control with inconsistent effect products.
    Corrupted,
    MinTensor { factors: Vec<TheorySpec> },
    MaxTensor { factors: Vec<TheorySpec> },
}

impl CompositeSpec {
    pub fn build(&self) -> Result<CompositeSystem<Q>> {
        match self {
            CompositeSpec::Cpt { d, n } => cpt_composite(*d, *n),
            CompositeSpec::Qt { qubits } => qt_composite(*qubits),
            CompositeSpec::Stm { bits } => stm_composite(*bits),
            CompositeSpec::Boxworld => boxworld_pair(),
            CompositeSpec::Corrupted => corrupted_composite(),
            CompositeSpec::MinTensor { factors } => compose(rational_factors(factors)?, Method::MinTensor),
            CompositeSpec::MaxTensor { factors } => compose(rational_factors(factors)?, Method::MaxTensor),
        }
    }
}

fn rational_factors(specs: &[TheorySpec]) -> Result<Vec<crate::gpt::GptSystem<Q>>> {
    if specs.len() < 2 {
        return Err(Error::Invalid("a tensor composite needs at least two factors".into()));
    }
    specs
        .iter()
        .map(|s| match s.build()? {
            AnySystem::Rational(sys) => Ok(sys),
            AnySystem::Float(sys) => Err(Error::Unsupported(format!("{} has irrational coordinates", sys.name()))),
        })
        .collect()
}

fn read<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what} file {}: {e}", path.display())))
}

pub fn read_theory(path: &Path) -> Result<TheorySpec> {
    read(path, "theory")
}

pub fn read_composite(path: &Path) -> Result<CompositeSpec> {
    read(path, "composite")
}

pub fn read_scenario(path: &Path) -> Result<ScenarioSpec> {
    read(path, "scenario")
}

/// Parses a vector of rationals written as `"1/2, 0, -1"` or a JSON array
/// of strings.
pub fn parse_vector(text: &str) -> Result<Vec<Q>> {
    use crate::numeric::Scalar;
    let t = text.trim();
    if t.starts_with('[') {
        let items: Vec<String> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("vector {t:?}: {e}")))?;
        return items.iter().map(|s| Q::parse_text(s)).collect();
    }
    t.split(',').map(|s| Q::parse_text(s.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_specs_parse() {
        let c: CompositeSpec = serde_json::from_str(r#"{"kind": "max_tensor", "factors": [{"kind": "gbit"}, {"kind": "gbit"}]}"#).unwrap();
        assert_eq!(c.build().unwrap().system.extreme_states().len(), 24);
        assert!(serde_json::from_str::<CompositeSpec>(r#"{"kind": "qt", "qubits": 2, "extra": 1}"#).is_err());
    }

    #[test]
    fn vectors_parse() {
        assert_eq!(parse_vector("1/2, 0").unwrap(), vec![Q::new(1.into(), 2.into()), Q::from_integer(0.into())]);
        assert_eq!(parse_vector(r#"["1", "-1/3"]"#).unwrap().len(), 2);
        assert!(parse_vector("x").is_err());
    }
}
