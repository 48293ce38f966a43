use std::collections::HashSet;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::CoeffField;

/// A named, contiguous group of ring variables (the uniformizer, one projective factor, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableBlock {
    pub name: String,
    pub range: Range<usize>,
}

impl VariableBlock {
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.range.contains(&var)
    }
}

/// A polynomial ring over a coefficient field with a fixed, blocked variable list.
///
/// The variable order is the global order used for canonical storage and printing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: CoeffField,
    vars: Vec<String>,
    blocks: Vec<VariableBlock>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: Into<String>>(field: CoeffField, blocks: Vec<(S, Vec<String>)>) -> Result<RingRef> {
        let mut vars = Vec::new();
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (name, names) in blocks {
            let start = vars.len();
            for v in names {
                if !valid_name(&v) {
                    return Err(Error::InvalidInput(format!("invalid variable name `{v}`")));
                }
                if !seen.insert(v.clone()) {
                    return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
                }
                vars.push(v);
            }
            out.push(VariableBlock {
                name: name.into(),
                range: start..vars.len(),
            });
        }
        Ok(Arc::new(Ring { field, vars, blocks: out }))
    }

    /// Single block holding the given variables.
    pub fn with_vars(field: CoeffField, names: &[&str]) -> Result<RingRef> {
        Ring::new(field, vec![("vars", names.iter().map(|s| s.to_string()).collect())])
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn blocks(&self) -> &[VariableBlock] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&VariableBlock> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn block_of(&self, var: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(var)).expect("every variable belongs to a block")
    }

    /// Same variables over another coefficient field.
    pub fn with_field(&self, field: CoeffField) -> RingRef {
        Arc::new(Ring {
            field,
            vars: self.vars.clone(),
            blocks: self.blocks.clone(),
        })
    }

    /// A new ring with `block` prepended (used for auxiliary elimination variables).
    pub fn prepend_block(&self, name: &str, names: Vec<String>) -> Result<RingRef> {
        let mut blocks: Vec<(String, Vec<String>)> = vec![(name.to_string(), names)];
        blocks.extend(self.owned_blocks());
        Ring::new(self.field, blocks)
    }

    /// A new ring without the named blocks.
    pub fn without_blocks(&self, names: &[&str]) -> Result<RingRef> {
        let blocks = self
            .owned_blocks()
            .into_iter()
            .filter(|(n, _)| !names.contains(&n.as_str()))
            .collect();
        Ring::new(self.field, blocks)
    }

    pub(crate) fn owned_blocks(&self) -> Vec<(String, Vec<String>)> {
        self.blocks
            .iter()
            .map(|b| (b.name.clone(), self.vars[b.range.clone()].to_vec()))
            .collect()
    }

    /// Returns the first unused auxiliary name `y<k>`.
    pub fn fresh_aux_name(&self) -> String {
        (1..)
            .map(|k| format!("y{k}"))
            .find(|n| self.var_index(n).is_none())
            .expect("infinitely many candidates")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))
    }
}

pub(crate) fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Names accepted by the text grammar: `t`, `x<i>_<j>`, `x<i>`, `u<i>`, `y<i>`, `e<i>`.
pub fn valid_name(name: &str) -> bool {
    if name == "t" {
        return true;
    }
    let mut chars = name.chars();
    let Some(head) = chars.next() else { return false };
    let rest: String = chars.collect();
    let digits = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    match head {
        'x' => match rest.split_once('_') {
            Some((i, j)) => digits(i) && digits(j),
            None => digits(&rest),
        },
        'u' | 'y' | 'e' => digits(&rest),
        _ => false,
    }
}
