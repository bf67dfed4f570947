//! Particle configurations.

use std::ops::Deref;

use crate::error::{domain, Result};

/// An ordered (weakly increasing) finite configuration of points on the
/// line, i.e. a point of the closed Weyl chamber.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<f64>,
}

impl Configuration {
    /// Wrap already-ordered points; fails on NaN or decreasing input.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|x| !x.is_finite()) {
            return Err(domain("configuration points must be finite"));
        }
        if points.windows(2).any(|w| w[1] < w[0]) {
            return Err(domain("configuration points must be weakly increasing"));
        }
        Ok(Self { points })
    }

    /// Sort arbitrary finite points into a configuration.
    pub fn from_unsorted(mut points: Vec<f64>) -> Result<Self> {
        points.sort_by(f64::total_cmp);
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn into_points(self) -> Vec<f64> {
        self.points
    }

    /// Strictly increasing.
    pub fn is_strict(&self) -> bool {
        self.points.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.points.iter().all(|&x| x >= 0.0)
    }
}

impl Deref for Configuration {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.points
    }
}

/// An initial configuration `ξ = Σ_j δ_{a_j}` stored as its ordered atoms
/// `a_1 ≤ … ≤ a_N`, with access to the truncations `ξ_n = Σ_{j≤n} δ_{a_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConfig {
    atoms: Vec<f64>,
}

impl InitialConfig {
    pub fn new(config: Configuration) -> Result<Self> {
        if config.is_empty() {
            return Err(domain(
                "initial configuration must have at least one particle",
            ));
        }
        Ok(Self {
            atoms: config.into_points(),
        })
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        Self::new(Configuration::from_unsorted(points)?)
    }

    /// `N δ_0`: all particles at the origin.
    pub fn origin(n: usize) -> Self {
        assert!(
            n > 0,
            "initial configuration must have at least one particle"
        );
        Self {
            atoms: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Atoms of `ξ_n`.
    pub fn truncation(&self, n: usize) -> &[f64] {
        &self.atoms[..n]
    }

    /// Distinct support points of `ξ_n` with their multiplicities.
    pub fn support(&self, n: usize) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &a in self.truncation(n) {
            match out.last_mut() {
                Some((b, m)) if *b == a => *m += 1,
                _ => out.push((a, 1)),
            }
        }
        out
    }

    pub fn is_origin(&self) -> bool {
        self.atoms.iter().all(|&a| a == 0.0)
    }

    pub fn is_distinct(&self) -> bool {
        self.atoms.windows(2).all(|w| w[0] < w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_validation() {
        assert!(Configuration::new(vec![0.0, 0.0, 1.0]).is_ok());
        assert!(Configuration::new(vec![1.0, 0.0]).is_err());
        assert!(Configuration::new(vec![f64::NAN]).is_err());
        let c = Configuration::from_unsorted(vec![2.0, -1.0, 0.5]).unwrap();
        assert_eq!(c.points(), &[-1.0, 0.5, 2.0]);
        assert!(c.is_strict());
        assert!(!c.is_nonnegative());
    }

    #[test]
    fn truncations_and_support() {
        let xi = InitialConfig::from_points(vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(xi.truncation(0), &[] as &[f64]);
        assert_eq!(xi.truncation(3), &[0.0, 0.0, 1.0]);
        assert_eq!(xi.support(3), vec![(0.0, 2), (1.0, 1)]);
        assert!(!xi.is_distinct());
        assert!(InitialConfig::origin(3).is_origin());
    }
}
