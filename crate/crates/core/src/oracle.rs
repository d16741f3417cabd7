//! Classical evaluation of the Ramsey cost function and search predicate.
//!
//! For an instance `(N, m, n, r)` and an encoded hypergraph `x`, the cost is
//! the number of m-vertex sets whose r-subsets are all edges plus the number
//! of n-vertex sets whose r-subsets are all non-edges. `x` is a solution of
//! the search problem when the cost is zero, and there are no solutions
//! exactly when `N >= R(m, n; r)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{binomial_usize, rank_subset};
use crate::{Error, Result};

/// Largest `B(N, r)` enumerated exhaustively by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 28;

/// Largest `B(N, m) * B(m, r) + B(N, n) * B(n, r)` materialized as index lists.
const MAX_GROUP_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamseyInstance {
    n_vertices: usize,
    clique_size: usize,
    indep_size: usize,
    uniformity: usize,
}

impl RamseyInstance {
    /// Instances with `m < r` or `n < r` are rejected: an m-set with fewer
    /// than r vertices has no r-subsets to constrain.
    pub fn new(n_vertices: usize, m: usize, n: usize, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid(format!(
                "uniformity r = {r} must be at least 2"
            )));
        }
        if m < r || n < r {
            return Err(Error::invalid(format!(
                "clique size m = {m} and independent-set size n = {n} must be at least r = {r}"
            )));
        }
        if n_vertices == 0 {
            return Err(Error::invalid("N must be at least 1"));
        }
        let inst = RamseyInstance {
            n_vertices,
            clique_size: m,
            indep_size: n,
            uniformity: r,
        };
        // Fail early if any derived size overflows.
        inst.input_bits()?;
        inst.clique_sets()?;
        inst.indep_sets()?;
        Ok(inst)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn clique_size(&self) -> usize {
        self.clique_size
    }

    pub fn indep_size(&self) -> usize {
        self.indep_size
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    /// `B(N, r)`, the number of input bits.
    pub fn input_bits(&self) -> Result<usize> {
        binomial_usize(self.n_vertices, self.uniformity)
    }

    /// `B(N, m)`.
    pub fn clique_sets(&self) -> Result<usize> {
        binomial_usize(self.n_vertices, self.clique_size)
    }

    /// `B(N, n)`.
    pub fn indep_sets(&self) -> Result<usize> {
        binomial_usize(self.n_vertices, self.indep_size)
    }

    /// The same instance with the two colors swapped.
    pub fn swapped(&self) -> Self {
        RamseyInstance {
            clique_size: self.indep_size,
            indep_size: self.clique_size,
            ..*self
        }
    }

    pub fn with_vertices(&self, n_vertices: usize) -> Result<Self> {
        Self::new(
            n_vertices,
            self.clique_size,
            self.indep_size,
            self.uniformity,
        )
    }
}

/// For every k-subset of the vertices (rank order), the 0-based input bit
/// positions of its r-subsets (rank order).
pub fn subset_groups(n_vertices: usize, k: usize, r: usize) -> Result<Vec<Vec<usize>>> {
    use itertools::Itertools;
    crate::encoding::subsets(n_vertices, k)
        .map(|set| {
            set.iter()
                .copied()
                .combinations(r)
                .map(|sub| rank_subset(&sub, n_vertices, r).map(|k| k as usize - 1))
                .collect()
        })
        .collect()
}

/// Precomputed clique and independent-set groups for one instance.
#[derive(Debug, Clone)]
pub struct Evaluator {
    inst: RamseyInstance,
    input_bits: usize,
    clique_groups: Vec<Vec<usize>>,
    indep_groups: Vec<Vec<usize>>,
    // Present when the encoding fits in a u64.
    clique_masks: Option<Vec<u64>>,
    indep_masks: Option<Vec<u64>>,
}

impl Evaluator {
    pub fn new(inst: &RamseyInstance) -> Result<Self> {
        let r = inst.uniformity;
        let entries = inst.clique_sets()? as u128 * binomial_usize(inst.clique_size, r)? as u128
            + inst.indep_sets()? as u128 * binomial_usize(inst.indep_size, r)? as u128;
        if entries > MAX_GROUP_ENTRIES as u128 {
            return Err(Error::InfeasibleSize {
                what: "subset group table entries",
                size: entries,
                limit: MAX_GROUP_ENTRIES as u128,
                hint: "",
            });
        }
        let clique_groups = subset_groups(inst.n_vertices, inst.clique_size, r)?;
        let indep_groups = subset_groups(inst.n_vertices, inst.indep_size, r)?;
        let input_bits = inst.input_bits()?;
        let to_masks = |groups: &[Vec<usize>]| -> Vec<u64> {
            groups
                .iter()
                .map(|g| g.iter().fold(0u64, |m, &b| m | 1 << b))
                .collect()
        };
        let (clique_masks, indep_masks) = if input_bits <= 64 {
            (
                Some(to_masks(&clique_groups)),
                Some(to_masks(&indep_groups)),
            )
        } else {
            (None, None)
        };
        Ok(Evaluator {
            inst: *inst,
            input_bits,
            clique_groups,
            indep_groups,
            clique_masks,
            indep_masks,
        })
    }

    pub fn instance(&self) -> &RamseyInstance {
        &self.inst
    }

    pub fn input_bits(&self) -> usize {
        self.input_bits
    }

    pub fn clique_groups(&self) -> &[Vec<usize>] {
        &self.clique_groups
    }

    pub fn indep_groups(&self) -> &[Vec<usize>] {
        &self.indep_groups
    }

    fn check_len(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.input_bits {
            return Err(Error::invalid(format!(
                "bit string has length {}, expected {}",
                x.len(),
                self.input_bits
            )));
        }
        Ok(())
    }

    pub fn clique_count(&self, x: &[bool]) -> Result<usize> {
        self.check_len(x)?;
        Ok(self
            .clique_groups
            .iter()
            .filter(|g| g.iter().all(|&b| x[b]))
            .count())
    }

    pub fn independent_count(&self, x: &[bool]) -> Result<usize> {
        self.check_len(x)?;
        Ok(self
            .indep_groups
            .iter()
            .filter(|g| g.iter().all(|&b| !x[b]))
            .count())
    }

    pub fn cost(&self, x: &[bool]) -> Result<usize> {
        Ok(self.clique_count(x)? + self.independent_count(x)?)
    }

    pub fn oracle_bit(&self, x: &[bool]) -> Result<bool> {
        self.check_len(x)?;
        let has_clique = self.clique_groups.iter().any(|g| g.iter().all(|&b| x[b]));
        let has_indep = self.indep_groups.iter().any(|g| g.iter().all(|&b| !x[b]));
        Ok(!has_clique && !has_indep)
    }

    /// Predicate on a packed encoding: bit `k - 1` of `x` is the `k`-th subset.
    /// Only available when `B(N, r) <= 64`.
    pub fn oracle_bit_packed(&self, x: u64) -> Option<bool> {
        let cm = self.clique_masks.as_ref()?;
        let im = self.indep_masks.as_ref()?;
        let has_clique = cm.iter().any(|&m| m & !x == 0);
        let has_indep = im.iter().any(|&m| x & m == 0);
        Some(!has_clique && !has_indep)
    }

    fn check_enumerable(&self, cap: usize) -> Result<()> {
        if self.input_bits > cap.min(63) {
            return Err(Error::InfeasibleSize {
                what: "B(N, r) for exhaustive enumeration",
                size: self.input_bits as u128,
                limit: cap.min(63) as u128,
                hint: "",
            });
        }
        Ok(())
    }

    /// Exact number of solutions by enumerating all `2^B(N,r)` encodings.
    pub fn count_solutions(&self, cap: usize) -> Result<u64> {
        self.check_enumerable(cap)?;
        let cm = self.clique_masks.as_deref().unwrap_or_default();
        let im = self.indep_masks.as_deref().unwrap_or_default();
        let count = (0..1u64 << self.input_bits)
            .into_par_iter()
            .filter(|&x| !cm.iter().any(|&m| m & !x == 0) && !im.iter().any(|&m| x & m == 0))
            .count();
        Ok(count as u64)
    }

    /// Truth table of the predicate, indexed by packed encoding.
    pub fn solution_table(&self, cap: usize) -> Result<Vec<bool>> {
        self.check_enumerable(cap)?;
        Ok((0..1u64 << self.input_bits)
            .into_par_iter()
            .map(|x| self.oracle_bit_packed(x).unwrap_or(false))
            .collect())
    }
}

pub fn clique_count(x: &[bool], inst: &RamseyInstance) -> Result<usize> {
    Evaluator::new(inst)?.clique_count(x)
}

pub fn independent_count(x: &[bool], inst: &RamseyInstance) -> Result<usize> {
    Evaluator::new(inst)?.independent_count(x)
}

pub fn cost(x: &[bool], inst: &RamseyInstance) -> Result<usize> {
    Evaluator::new(inst)?.cost(x)
}

pub fn oracle_bit(x: &[bool], inst: &RamseyInstance) -> Result<bool> {
    Evaluator::new(inst)?.oracle_bit(x)
}

pub fn count_solutions(inst: &RamseyInstance, cap: usize) -> Result<u64> {
    Evaluator::new(inst)?.count_solutions(cap)
}

/// Least `N > lower_bound` with no solutions, scanning up to `n_max`.
pub fn ramsey_classical(
    m: usize,
    n: usize,
    r: usize,
    lower_bound: usize,
    n_max: usize,
    cap: usize,
) -> Result<u64> {
    let first = lower_bound.max(1);
    for n_vertices in first + 1..=n_max {
        let inst = RamseyInstance::new(n_vertices, m, n, r)?;
        if count_solutions(&inst, cap)? == 0 {
            return Ok(n_vertices as u64);
        }
    }
    Err(Error::Inconclusive {
        first: first as u64 + 1,
        last: n_max as u64,
        transcript: Box::default(),
    })
}
