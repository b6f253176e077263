use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

/// A finite relational signature with constant symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub relations: Vec<RelationSymbol>,
    pub constants: Vec<String>,
}

impl Signature {
    pub fn new<R, C>(relations: R, constants: C) -> Result<Self>
    where
        R: IntoIterator<Item = (&'static str, usize)>,
        C: IntoIterator<Item = &'static str>,
    {
        let sig = Signature {
            relations: relations
                .into_iter()
                .map(|(name, arity)| RelationSymbol { name: name.to_string(), arity })
                .collect(),
            constants: constants.into_iter().map(str::to_string).collect(),
        };
        sig.validate()?;
        Ok(sig)
    }

    /// Names must be nonempty and pairwise distinct; arities positive.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for r in &self.relations {
            if r.arity == 0 || r.arity > MAX_ARITY {
                return Err(Error::InvalidStructure(format!(
                    "relation `{}` has arity {} (supported: 1..={MAX_ARITY})",
                    r.name, r.arity
                )));
            }
            if r.name.is_empty() || !seen.insert(r.name.as_str()) {
                return Err(Error::InvalidStructure(format!("bad or duplicate symbol `{}`", r.name)));
            }
        }
        for c in &self.constants {
            if c.is_empty() || !seen.insert(c.as_str()) {
                return Err(Error::InvalidStructure(format!("bad or duplicate symbol `{c}`")));
            }
        }
        Ok(())
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0)
    }
}
