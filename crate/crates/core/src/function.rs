use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Finitely supported real vertex function. Zero values are never stored,
/// so the key set is the support.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TestFunction {
    values: BTreeMap<usize, f64>,
}

impl TestFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut f = Self::new();
        for (v, x) in pairs {
            f.set(v, x)?;
        }
        Ok(f)
    }

    pub fn set(&mut self, v: usize, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::InvalidFunction(format!("value {x} at vertex {v} is not finite")));
        }
        if x == 0.0 {
            self.values.remove(&v);
        } else {
            self.values.insert(v, x);
        }
        Ok(())
    }

    pub fn get(&self, v: usize) -> f64 {
        self.values.get(&v).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&v, &x)| (v, x))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_pairs(self.iter().map(|(v, x)| (v, c * x)))
    }

    /// Checks that the function lives on `g` and vanishes on its Dirichlet set.
    pub fn check_admissible<G: Graph>(&self, g: &G) -> Result<()> {
        for v in self.support() {
            if v >= g.vertex_count() {
                return Err(Error::InvalidVertex(v));
            }
            if g.is_dirichlet(v) {
                return Err(Error::InvalidFunction(format!("nonzero on Dirichlet vertex {v}")));
            }
        }
        Ok(())
    }
}
