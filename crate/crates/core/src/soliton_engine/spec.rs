use crate::error::{Error, Result};
use crate::numkit::C64;

/// `(λ, α) ↦ (λ*, −1/α*)`, the kernel data forced by the σ₁ reduction.
pub fn conjugate_pair(lambda: C64, alpha: C64) -> Result<(C64, C64)> {
    if alpha == C64::new(0.0, 0.0) {
        return Err(Error::InvalidSpec("alpha must be nonzero".into()));
    }
    Ok((lambda.conj(), -1.0 / alpha.conj()))
}

/// One dressing step: the two kernel points of a linear factor `P(λ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressingStep {
    pub lambda1: C64,
    pub alpha1: C64,
    pub lambda2: C64,
    pub alpha2: C64,
}

/// Ordered dressing parameters `(λₖ, αₖ)`.
///
/// With `enforce_sigma1` every pair contributes a step together with its
/// conjugate partner; otherwise consecutive pairs form the steps.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonSpec {
    pub pairs: Vec<(C64, C64)>,
    pub enforce_sigma1: bool,
}

const DISTINCT_TOL: f64 = 1e-12;

impl SolitonSpec {
    pub fn new(pairs: Vec<(C64, C64)>, enforce_sigma1: bool) -> Result<Self> {
        let spec = SolitonSpec {
            pairs,
            enforce_sigma1,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// σ₁-constrained spec from `(λ, α)` pairs.
    pub fn sigma1(pairs: &[(C64, C64)]) -> Result<Self> {
        Self::new(pairs.to_vec(), true)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, (l, a)) in self.pairs.iter().enumerate() {
            if !(l.re.is_finite() && l.im.is_finite() && a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::InvalidSpec(format!("pair {k} is not finite")));
            }
            if *a == C64::new(0.0, 0.0) {
                return Err(Error::InvalidSpec(format!("alpha {k} is zero")));
            }
            if self.enforce_sigma1 && l.im == 0.0 {
                return Err(Error::InvalidSpec(format!("lambda {k} must have Im λ ≠ 0")));
            }
        }
        if !self.enforce_sigma1 && self.pairs.len() % 2 != 0 {
            return Err(Error::InvalidSpec(
                "without σ₁ the number of (λ, α) pairs must be even".into(),
            ));
        }
        let pts = self.dressing_points();
        for i in 0..pts.len() {
            for j in 0..i {
                if (pts[i].0 - pts[j].0).norm() <= DISTINCT_TOL {
                    return Err(Error::InvalidSpec(format!(
                        "dressing points {j} and {i} coincide"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of linear dressing factors.
    pub fn n(&self) -> usize {
        if self.enforce_sigma1 {
            self.pairs.len()
        } else {
            self.pairs.len() / 2
        }
    }

    /// All `2n` kernel points in step order.
    pub fn dressing_points(&self) -> Vec<(C64, C64)> {
        self.steps()
            .iter()
            .flat_map(|s| [(s.lambda1, s.alpha1), (s.lambda2, s.alpha2)])
            .collect()
    }

    pub fn steps(&self) -> Vec<DressingStep> {
        if self.enforce_sigma1 {
            self.pairs
                .iter()
                .map(|&(l, a)| {
                    let (l2, a2) = (l.conj(), -1.0 / a.conj());
                    DressingStep {
                        lambda1: l,
                        alpha1: a,
                        lambda2: l2,
                        alpha2: a2,
                    }
                })
                .collect()
        } else {
            self.pairs
                .chunks(2)
                .map(|c| DressingStep {
                    lambda1: c[0].0,
                    alpha1: c[0].1,
                    lambda2: c[1].0,
                    alpha2: c[1].1,
                })
                .collect()
        }
    }

    /// The same spec with pairs `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> SolitonSpec {
        let mut pairs = self.pairs.clone();
        pairs.swap(i, j);
        SolitonSpec {
            pairs,
            enforce_sigma1: self.enforce_sigma1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::c64;

    #[test]
    fn conjugate_pair_examples() {
        assert_eq!(conjugate_pair(c64(0.0, 1.0), c64(1.0, 0.0)).unwrap(), (c64(0.0, -1.0), c64(-1.0, 0.0)));
        let (l, a) = conjugate_pair(c64(1.0, 1.0), c64(0.0, 1.0)).unwrap();
        assert_eq!(l, c64(1.0, -1.0));
        assert!((a - c64(0.0, -1.0)).norm() < 1e-15);
        let (l2, a2) = conjugate_pair(l, a).unwrap();
        assert!((l2 - c64(1.0, 1.0)).norm() < 1e-15 && (a2 - c64(0.0, 1.0)).norm() < 1e-15);
        assert!(conjugate_pair(c64(1.0, 1.0), c64(0.0, 0.0)).is_err());
    }

    #[test]
    fn validation() {
        assert!(SolitonSpec::sigma1(&[(c64(1.0, 0.0), c64(1.0, 0.0))]).is_err());
        assert!(SolitonSpec::sigma1(&[(c64(0.0, 1.0), c64(1.0, 0.0)), (c64(0.0, -1.0), c64(1.0, 0.0))]).is_err());
        assert!(SolitonSpec::new(vec![(c64(0.0, 1.0), c64(1.0, 0.0))], false).is_err());
        let s = SolitonSpec::sigma1(&[(c64(0.0, 1.0), c64(1.0, 0.0)), (c64(0.5, 1.0), c64(2.0, 0.0))]).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.dressing_points().len(), 4);
        assert_eq!(s.swapped(0, 1).pairs[0], s.pairs[1]);
    }
}
