//! Exact nonnegative rational vertex weights.
//!
//! Weights are stored as integer numerators over one shared denominator, so
//! set weights are plain big-integer sums and every comparison against a
//! rational threshold is an exact cross-multiplication. No floating point
//! appears anywhere in the decomposition pipeline.

use crate::vset::VertexSet;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    numers: Vec<BigInt>,
    denom: BigInt,
}

impl Weights {
    /// Uniform weight 1/n on every vertex of an n-vertex graph.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform weights need at least one vertex");
        Weights {
            numers: vec![BigInt::one(); n],
            denom: BigInt::from(n),
        }
    }

    /// Integer weights (denominator 1). Panics on negative entries.
    pub fn from_integers(values: &[i64]) -> Self {
        assert!(
            values.iter().all(|&v| v >= 0),
            "weights must be nonnegative"
        );
        Weights {
            numers: values.iter().map(|&v| BigInt::from(v)).collect(),
            denom: BigInt::one(),
        }
    }

    pub fn from_numerators(numers: Vec<BigInt>, denom: BigInt) -> Self {
        assert!(denom.is_positive(), "denominator must be positive");
        assert!(
            numers.iter().all(|v| !v.is_negative()),
            "weights must be nonnegative"
        );
        Weights { numers, denom }
    }

    pub fn len(&self) -> usize {
        self.numers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numers.is_empty()
    }

    pub fn value(&self, v: usize) -> BigRational {
        BigRational::new(self.numers[v].clone(), self.denom.clone())
    }

    pub fn numer(&self, v: usize) -> &BigInt {
        &self.numers[v]
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Numerator of w(X) over the shared denominator.
    pub fn set_numer(&self, x: &VertexSet) -> BigInt {
        let mut total = BigInt::zero();
        for v in x.iter() {
            total += &self.numers[v];
        }
        total
    }

    pub fn set_weight(&self, x: &VertexSet) -> BigRational {
        BigRational::new(self.set_numer(x), self.denom.clone())
    }

    pub fn total(&self) -> BigRational {
        let mut total = BigInt::zero();
        for v in &self.numers {
            total += v;
        }
        BigRational::new(total, self.denom.clone())
    }

    /// Exact test `w(X) <= t` by cross-multiplication.
    pub fn set_weight_le(&self, x: &VertexSet, t: &BigRational) -> bool {
        self.set_numer(x) * t.denom() <= t.numer() * &self.denom
    }

    /// Exact test `w(X) < t`.
    pub fn set_weight_lt(&self, x: &VertexSet, t: &BigRational) -> bool {
        self.set_numer(x) * t.denom() < t.numer() * &self.denom
    }

    /// True when the function is 1/|X| on some support X and 0 elsewhere.
    pub fn is_uniform(&self) -> bool {
        let mut support_numer: Option<&BigInt> = None;
        let mut support_size: usize = 0;
        for v in &self.numers {
            if v.is_zero() {
                continue;
            }
            support_size += 1;
            match support_numer {
                None => support_numer = Some(v),
                Some(first) if first == v => {}
                Some(_) => return false,
            }
        }
        match support_numer {
            None => false,
            Some(first) => first * BigInt::from(support_size) == self.denom,
        }
    }

    /// Largest single-vertex weight.
    pub fn max_value(&self) -> BigRational {
        let max = self.numers.iter().max().cloned().unwrap_or_else(BigInt::zero);
        BigRational::new(max, self.denom.clone())
    }

    /// Move weight between vertices of the same function: adds `numer_delta`
    /// (in shared-denominator units) onto vertex `v`.
    pub fn add_numer(&mut self, v: usize, numer_delta: &BigInt) {
        self.numers[v] += numer_delta;
    }

    /// Zero out the weight of every vertex outside `keep`.
    pub fn restricted_to(&self, keep: &VertexSet) -> Weights {
        let mut numers = vec![BigInt::zero(); self.numers.len()];
        for v in keep.iter() {
            numers[v] = self.numers[v].clone();
        }
        Weights {
            numers,
            denom: self.denom.clone(),
        }
    }
}

/// Parse a rational given as `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Render a rational as `num/den`.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
