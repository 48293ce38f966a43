use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Ordering inside one block of a block order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerOrder {
    Lex,
    Grevlex,
}

/// A monomial order on the variables of a ring, by variable index
/// (index 0 is the largest variable for lex-type tie-breaks).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Blocks compared in priority order; earlier blocks dominate later ones.
    Block { blocks: Vec<Vec<usize>>, inner: InnerOrder },
    /// Weight vectors compared in turn, then reverse lexicographic over `tie`
    /// (the last entry of `tie` is the smallest variable).
    Weighted { weights: Vec<Vec<u32>>, tie: Vec<usize> },
}

impl MonomialOrder {
    /// Block order `[eliminated | retained]`, grevlex inside each block.
    pub fn elimination(nvars: usize, eliminated: &[usize]) -> MonomialOrder {
        let retained: Vec<usize> = (0..nvars).filter(|v| !eliminated.contains(v)).collect();
        MonomialOrder::Block {
            blocks: vec![eliminated.to_vec(), retained],
            inner: InnerOrder::Grevlex,
        }
    }

    pub fn validate(&self, nvars: usize) -> Result<()> {
        let partition = |lists: &[&[usize]]| {
            let mut seen = vec![false; nvars];
            for &v in lists.iter().flat_map(|l| l.iter()) {
                if v >= nvars || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            seen.iter().all(|&s| s)
        };
        match self {
            MonomialOrder::Lex | MonomialOrder::Grevlex => Ok(()),
            MonomialOrder::Block { blocks, .. } => {
                let lists: Vec<&[usize]> = blocks.iter().map(|b| b.as_slice()).collect();
                if partition(&lists) {
                    Ok(())
                } else {
                    Err(Error::InvalidInput("block order must partition the variables".into()))
                }
            }
            MonomialOrder::Weighted { weights, tie } => {
                if !partition(&[tie.as_slice()]) || weights.iter().any(|w| w.len() != nvars) {
                    return Err(Error::InvalidInput("malformed weighted order".into()));
                }
                // positivity keeps the order well-founded
                if (0..nvars).any(|v| weights.iter().all(|w| w[v] == 0)) {
                    return Err(Error::InvalidInput("every variable needs a positive weight".into()));
                }
                Ok(())
            }
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => grevlex(a, b, None),
            MonomialOrder::Block { blocks, inner } => {
                for blk in blocks {
                    let o = match inner {
                        InnerOrder::Grevlex => grevlex(a, b, Some(blk)),
                        InnerOrder::Lex => blk.iter().map(|&v| a[v].cmp(&b[v])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal),
                    };
                    if o.is_ne() {
                        return o;
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Weighted { weights, tie } => {
                for w in weights {
                    let wa: u64 = a.iter().zip(w).map(|(&e, &x)| e as u64 * x as u64).sum();
                    let wb: u64 = b.iter().zip(w).map(|(&e, &x)| e as u64 * x as u64).sum();
                    if wa != wb {
                        return wa.cmp(&wb);
                    }
                }
                for &v in tie.iter().rev() {
                    if a[v] != b[v] {
                        return b[v].cmp(&a[v]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

fn grevlex(a: &[u16], b: &[u16], vars: Option<&Vec<usize>>) -> Ordering {
    match vars {
        None => {
            let da: u32 = a.iter().map(|&e| e as u32).sum();
            let db: u32 = b.iter().map(|&e| e as u32).sum();
            if da != db {
                return da.cmp(&db);
            }
            for i in (0..a.len()).rev() {
                if a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
            Ordering::Equal
        }
        Some(vs) => {
            let da: u32 = vs.iter().map(|&v| a[v] as u32).sum();
            let db: u32 = vs.iter().map(|&v| b[v] as u32).sum();
            if da != db {
                return da.cmp(&db);
            }
            for &v in vs.iter().rev() {
                if a[v] != b[v] {
                    return b[v].cmp(&a[v]);
                }
            }
            Ordering::Equal
        }
    }
}
