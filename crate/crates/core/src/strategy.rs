//! Pairing configurations superposed by the parallel strategy.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::layout::RegisterLayout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrategyKind {
    /// Configuration `j` pairs cause `i` with effect `(i + j) mod k`.
    #[default]
    Cyclic,
    /// `r` distinct seeded random bijections.
    Random,
}

/// `r` distinct bijections from cause variables to effect variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationStrategy {
    k: usize,
    pairings: Vec<Vec<usize>>,
}

impl PermutationStrategy {
    pub fn new(layout: &RegisterLayout, pairings: Vec<Vec<usize>>) -> Result<Self> {
        let s = PermutationStrategy {
            k: layout.k(),
            pairings,
        };
        s.validate(layout)?;
        Ok(s)
    }

    pub fn cyclic(layout: &RegisterLayout, r: usize) -> Result<Self> {
        check_r(layout, r)?;
        let k = layout.k();
        if r > k {
            return Err(Error::InvalidParameter(format!(
                "only {k} distinct cyclic pairings exist, r={r} requested"
            )));
        }
        let pairings = (0..r).map(|j| (0..k).map(|i| (i + j) % k).collect()).collect();
        Self::new(layout, pairings)
    }

    /// Seeded random distinct pairings; the first one is always the identity.
    pub fn random(layout: &RegisterLayout, r: usize, seed: u64) -> Result<Self> {
        check_r(layout, r)?;
        let k = layout.k();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairings: Vec<Vec<usize>> = vec![(0..k).collect()];
        while pairings.len() < r {
            let mut p: Vec<usize> = (0..k).collect();
            p.shuffle(&mut rng);
            if !pairings.contains(&p) {
                pairings.push(p);
            }
        }
        Self::new(layout, pairings)
    }

    pub fn build(kind: StrategyKind, layout: &RegisterLayout, r: usize, seed: u64) -> Result<Self> {
        match kind {
            StrategyKind::Cyclic => Self::cyclic(layout, r),
            StrategyKind::Random => Self::random(layout, r, seed),
        }
    }

    pub fn r(&self) -> usize {
        self.pairings.len()
    }

    pub fn pairings(&self) -> &[Vec<usize>] {
        &self.pairings
    }

    pub fn validate(&self, layout: &RegisterLayout) -> Result<()> {
        if self.k != layout.k() {
            return Err(Error::DimensionMismatch {
                expected: layout.k(),
                actual: self.k,
            });
        }
        check_r(layout, self.r())?;
        for (j, p) in self.pairings.iter().enumerate() {
            let mut seen = vec![false; self.k];
            if p.len() != self.k {
                return Err(Error::InvalidParameter(format!("pairing {j} has wrong length")));
            }
            for &t in p {
                if t >= self.k || std::mem::replace(&mut seen[t], true) {
                    return Err(Error::InvalidParameter(format!("pairing {j} is not a bijection")));
                }
            }
            if self.pairings[..j].contains(p) {
                return Err(Error::InvalidParameter(format!("pairing {j} is repeated")));
            }
        }
        Ok(())
    }
}

/// Largest `r` for `layout`: bounded by the reference register and by the
/// number of distinct bijections `k!`.
pub fn max_configurations(layout: &RegisterLayout) -> usize {
    let by_reference = 1usize << layout.n_ref();
    let by_pairings = (1..=layout.k())
        .try_fold(1usize, |acc, x| acc.checked_mul(x))
        .unwrap_or(usize::MAX);
    by_reference.min(by_pairings)
}

pub(crate) fn check_r(layout: &RegisterLayout, r: usize) -> Result<()> {
    let cap = max_configurations(layout);
    if r == 0 || r > cap {
        return Err(Error::InvalidParameter(format!(
            "r={r} outside 1..={cap} (N_ref={}, k={})",
            layout.n_ref(),
            layout.k()
        )));
    }
    Ok(())
}
