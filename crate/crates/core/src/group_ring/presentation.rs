use std::fmt;

use crate::error::{Error, Result};
use crate::primes::ensure_prime;

use super::LaurentPoly;

/// Variable names: `x`, `y` for rank 2, `x` for rank 1, `x1..xn` otherwise.
pub fn variable_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

/// A module over `Z_p[[Z_p^n]]` presented as the free module on `gens`
/// generators modulo the span of the relation rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    p: u64,
    n: usize,
    gens: usize,
    relations: Vec<Vec<LaurentPoly>>,
}

impl ModulePresentation {
    pub fn new(p: u64, n: usize, gens: usize, relations: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        ensure_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidArgument("rank n must be at least 1".into()));
        }
        if gens == 0 {
            return Err(Error::InvalidArgument(
                "a presentation needs at least one generator".into(),
            ));
        }
        for (idx, row) in relations.iter().enumerate() {
            if row.len() != gens {
                return Err(Error::InvalidArgument(format!(
                    "relation {} has {} entries but there are {gens} generators",
                    idx + 1,
                    row.len()
                )));
            }
            if row.iter().any(|e| e.n() != n) {
                return Err(Error::InvalidArgument(format!(
                    "relation {} is not in {n} variables",
                    idx + 1
                )));
            }
        }
        Ok(ModulePresentation {
            p,
            n,
            gens,
            relations,
        })
    }

    /// Cyclic module with one relation per polynomial.
    pub fn cyclic(p: u64, n: usize, relations: Vec<LaurentPoly>) -> Result<Self> {
        Self::new(p, n, 1, relations.into_iter().map(|r| vec![r]).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &[Vec<LaurentPoly>] {
        &self.relations
    }

    /// Same module with the relation rows replaced.
    pub fn with_relations(&self, relations: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        Self::new(self.p, self.n, self.gens, relations)
    }
}

/// Writes the presentation back in the input grammar.
impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={}; n={}; gens={};", self.p, self.n, self.gens)?;
        for row in &self.relations {
            let entries: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "rel: {}", entries.join(" | "))?;
        }
        Ok(())
    }
}
