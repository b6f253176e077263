use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraisse::ClassSpec;
use crate::signature::Signature;
use crate::structure::Structure;

/// Builds `chainN`, `KN` or `emptyN` in the signature of `spec`: `<` is the
/// natural order when present, `E` is complete or empty (with the diagonal
/// added when the class needs it). `None` if `name` is not an alias.
pub fn structure_alias(name: &str, spec: &ClassSpec) -> Result<Option<Structure>> {
    let (kind, digits) = if let Some(d) = name.strip_prefix("chain") {
        ("chain", d)
    } else if let Some(d) = name.strip_prefix("empty") {
        ("empty", d)
    } else if let Some(d) = name.strip_prefix('K') {
        ("complete", d)
    } else {
        return Ok(None);
    };
    let Ok(n) = digits.parse::<usize>() else {
        return Ok(None);
    };
    let sig: &Arc<Signature> = spec.signature();
    if !sig.constants.is_empty() {
        return Err(Error::InvalidArgument("aliases are not available for signatures with constants".into()));
    }
    let lt = sig.relation_index("<").filter(|&r| sig.relations[r].arity == 2);
    let edge = sig.relation_index("E").filter(|&r| sig.relations[r].arity == 2);
    if kind == "chain" && lt.is_none() {
        return Err(Error::InvalidArgument(format!("`{name}` needs a binary `<` in the signature")));
    }
    if kind != "chain" && edge.is_none() && lt.is_none() {
        return Err(Error::InvalidArgument(format!("`{name}` needs a binary `E` or `<` in the signature")));
    }
    let mut s = Structure::new(sig.clone(), n);
    for x in 0..n {
        for y in 0..n {
            if let Some(r) = lt {
                s.set(r, &[x, y], x < y);
            }
            if let Some(r) = edge {
                s.set(r, &[x, y], kind == "complete" && x != y);
            }
        }
    }
    if !spec.is_member(&s)? {
        // Reflexive classes such as equivalence relations also need the diagonal.
        if let Some(r) = edge {
            for x in 0..n {
                s.set(r, &[x, x], true);
            }
        }
    }
    if !spec.is_member(&s)? {
        return Err(Error::InvalidArgument(format!("alias `{name}` does not name a member of class `{}`", spec.name())));
    }
    Ok(Some(s))
}
