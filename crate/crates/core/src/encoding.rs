//! Bit-string encoding of r-uniform hypergraphs.
//!
//! Vertices are `1..=N`. The r-subsets of the vertex set are ordered
//! lexicographically by their ascending member tuples, so for `r = 2` the
//! order is `{1,2}, {1,3}, ..., {1,N}, {2,3}, ...` and for `r = 3` it is
//! `{1,2,3}, {1,2,4}, ..., {1,2,N}, {1,3,4}, ...`. Bit `k` (1-based) of the
//! encoding is set iff the `k`-th subset is a hyperedge.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Exact binomial coefficient `B(n, k)`; zero when `k > n`.
///
/// Intermediate products are reduced by their gcd so overflow is reported
/// only when the result itself does not fit in a `u128`.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        let mut num = (n - k + i) as u128;
        let mut den = i as u128;
        let g = gcd(num, den);
        num /= g;
        den /= g;
        // acc * num / den is an integer and gcd(num, den) = 1, so den | acc.
        acc = (acc / den)
            .checked_mul(num)
            .ok_or_else(|| Error::Overflow(format!("B({n}, {k})")))?;
    }
    Ok(acc)
}

/// [`binomial`] narrowed to `usize`, for sizes that index memory.
pub fn binomial_usize(n: usize, k: usize) -> Result<usize> {
    let b = binomial(n as u64, k as u64)?;
    usize::try_from(b).map_err(|_| Error::Overflow(format!("B({n}, {k}) as usize")))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_subset(members: &[usize], n_vertices: usize, r: usize) -> Result<()> {
    if members.len() != r {
        return Err(Error::invalid(format!(
            "subset {members:?} has {} members, expected {r}",
            members.len()
        )));
    }
    if members.iter().any(|&v| v == 0 || v > n_vertices) {
        return Err(Error::invalid(format!(
            "subset {members:?} has a vertex outside 1..={n_vertices}"
        )));
    }
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "subset {members:?} is not strictly ascending"
        )));
    }
    Ok(())
}

/// 1-based lexicographic rank of an ascending r-subset of `{1..N}`.
pub fn rank_subset(members: &[usize], n_vertices: usize, r: usize) -> Result<u128> {
    check_subset(members, n_vertices, r)?;
    let total = binomial(n_vertices as u64, r as u64)?;
    // Subsets lexicographically after `members` are counted per position:
    // those agreeing up to position i and larger at i are B(N - c_i, r - i).
    let mut after: u128 = 0;
    for (i, &c) in members.iter().enumerate() {
        after += binomial((n_vertices - c) as u64, (r - i) as u64)?;
    }
    Ok(total - after)
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(k: u128, n_vertices: usize, r: usize) -> Result<Vec<usize>> {
    let total = binomial(n_vertices as u64, r as u64)?;
    if k == 0 || k > total {
        return Err(Error::invalid(format!(
            "rank {k} outside 1..={total} for B({n_vertices}, {r})"
        )));
    }
    let mut rest = k - 1;
    let mut members = Vec::with_capacity(r);
    let mut c = 1;
    for i in 0..r {
        loop {
            let block = binomial((n_vertices - c) as u64, (r - i - 1) as u64)?;
            if rest < block {
                break;
            }
            rest -= block;
            c += 1;
        }
        members.push(c);
        c += 1;
    }
    Ok(members)
}

/// All r-subsets of `{1..N}` in rank order.
pub fn subsets(n_vertices: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    itertools::Itertools::combinations(1..=n_vertices, r)
}

/// An r-uniform hypergraph on vertices `1..=N` stored as its encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n_vertices: usize,
    uniformity: usize,
    edges: Vec<bool>,
}

impl Hypergraph {
    pub fn empty(n_vertices: usize, uniformity: usize) -> Result<Self> {
        check_shape(n_vertices, uniformity)?;
        let len = binomial_usize(n_vertices, uniformity)?;
        Ok(Hypergraph {
            n_vertices,
            uniformity,
            edges: vec![false; len],
        })
    }

    pub fn complete(n_vertices: usize, uniformity: usize) -> Result<Self> {
        let mut g = Self::empty(n_vertices, uniformity)?;
        g.edges.fill(true);
        Ok(g)
    }

    pub fn from_edges<I, E>(n_vertices: usize, uniformity: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut g = Self::empty(n_vertices, uniformity)?;
        for e in edges {
            let mut e = e.as_ref().to_vec();
            e.sort_unstable();
            g.set_edge(&e, true)?;
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edge_bits(&self) -> &[bool] {
        &self.edges
    }

    pub fn has_edge(&self, members: &[usize]) -> Result<bool> {
        let k = rank_subset(members, self.n_vertices, self.uniformity)?;
        Ok(self.edges[k as usize - 1])
    }

    pub fn set_edge(&mut self, members: &[usize], present: bool) -> Result<()> {
        let k = rank_subset(members, self.n_vertices, self.uniformity)?;
        self.edges[k as usize - 1] = present;
        Ok(())
    }

    /// Hyperedges in rank order.
    pub fn edges(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        subsets(self.n_vertices, self.uniformity)
            .zip(self.edges.iter())
            .filter_map(|(s, &on)| on.then_some(s))
    }
}

fn check_shape(n_vertices: usize, uniformity: usize) -> Result<()> {
    if uniformity < 2 {
        return Err(Error::invalid(format!("uniformity {uniformity} < 2")));
    }
    if n_vertices < uniformity {
        return Err(Error::invalid(format!(
            "{n_vertices} vertices is fewer than uniformity {uniformity}"
        )));
    }
    Ok(())
}

/// The bit string of `g`, first subset first.
pub fn encode(g: &Hypergraph) -> Vec<bool> {
    g.edges.clone()
}

pub fn decode(bits: &[bool], n_vertices: usize, uniformity: usize) -> Result<Hypergraph> {
    check_shape(n_vertices, uniformity)?;
    let len = binomial_usize(n_vertices, uniformity)?;
    if bits.len() != len {
        return Err(Error::invalid(format!(
            "bit string has length {}, expected B({n_vertices}, {uniformity}) = {len}",
            bits.len()
        )));
    }
    Ok(Hypergraph {
        n_vertices,
        uniformity,
        edges: bits.to_vec(),
    })
}

/// Formats bits as a `0`/`1` string, first bit leftmost.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::invalid(format!(
                "unexpected character {other:?} in bit string"
            ))),
        })
        .collect()
}

/// Two-line text form: `N r`, then the encoding.
impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_vertices, self.uniformity)?;
        writeln!(f, "{}", bits_to_string(&self.edges))
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `N r` header".into(),
        })?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: 1,
                message: format!("bad header {header:?}: {e}"),
            })?;
        let [n, r] = nums[..] else {
            return Err(Error::Parse {
                line: 1,
                message: format!("header {header:?} must be `N r`"),
            });
        };
        // An empty edge string is legal when B(N, r) happens to be zero.
        let body = lines.next().unwrap_or("");
        if lines.next().is_some() {
            return Err(Error::Parse {
                line: 3,
                message: "trailing content after edge string".into(),
            });
        }
        let bits = parse_bits(body).map_err(|e| Error::Parse {
            line: 2,
            message: e.to_string(),
        })?;
        decode(&bits, n, r)
    }
}
