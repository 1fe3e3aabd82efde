//! Strata of the compactified spaces of metric path trees.
//!
//! A tree in `Tₙ` is a path with `n` interior vertices and two exterior ones; its exterior
//! edges are infinite and each of its `n − 1` interior edges has a length in `[0, ∞]`.
//! Strata record, per interior edge, whether the length is zero, finite or infinite.

use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeState {
    Zero,
    Finite,
    Infinite,
}

impl EdgeState {
    pub const ALL: [EdgeState; 3] = [EdgeState::Zero, EdgeState::Finite, EdgeState::Infinite];

    /// Whether this state lies in the closure of `other`.
    pub fn in_closure_of(self, other: EdgeState) -> bool {
        self == other || other == EdgeState::Finite
    }
}

impl fmt::Display for EdgeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeState::Zero => "0",
            EdgeState::Finite => "fin",
            EdgeState::Infinite => "inf",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricTreeStratum {
    n: usize,
    edge_states: Vec<EdgeState>,
}

impl MetricTreeStratum {
    pub fn new(n: usize, edge_states: Vec<EdgeState>) -> Result<Self> {
        if edge_states.len() != n.saturating_sub(1) {
            return Err(Error::InvalidStratum(format!("T_{n} has {} interior edges, got {}", n.saturating_sub(1), edge_states.len())));
        }
        Ok(MetricTreeStratum { n, edge_states })
    }

    /// The open top stratum, all interior edges of finite positive length.
    pub fn top(n: usize) -> Self {
        MetricTreeStratum { n, edge_states: vec![EdgeState::Finite; n.saturating_sub(1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_states(&self) -> &[EdgeState] {
        &self.edge_states
    }

    pub fn vertex_count(&self) -> usize {
        self.n + 2
    }

    /// Number of zero-length interior edges.
    pub fn depth(&self) -> usize {
        self.count(EdgeState::Zero)
    }

    pub fn dimension(&self) -> usize {
        self.count(EdgeState::Finite)
    }

    fn count(&self, s: EdgeState) -> usize {
        self.edge_states.iter().filter(|&&e| e == s).count()
    }

    /// Whether `self` lies in the closure of `other`.
    pub fn is_face_of(&self, other: &MetricTreeStratum) -> bool {
        self.n == other.n && self.edge_states.iter().zip(&other.edge_states).all(|(a, b)| a.in_closure_of(*b))
    }
}

impl fmt::Display for MetricTreeStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T_{}(", self.n)?;
        for (i, s) in self.edge_states.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// All `3^{n−1}` strata of `T̄ₙ` (one for `n ≤ 1`), lexicographic in `0 < fin < inf`.
pub fn enumerate_strata(n: i64) -> Result<Vec<MetricTreeStratum>> {
    let n = usize::try_from(n).map_err(|_| Error::InvalidStratum(format!("negative vertex count {n}")))?;
    let edges = n.saturating_sub(1);
    let mut out = vec![Vec::with_capacity(edges)];
    for _ in 0..edges {
        out = out.into_iter().flat_map(|p: Vec<EdgeState>| EdgeState::ALL.map(|s| {
            let mut q = p.clone();
            q.push(s);
            q
        })).collect();
    }
    Ok(out.into_iter().map(|edge_states| MetricTreeStratum { n, edge_states }).collect())
}

/// Contracts the zero-length edges of a corner stratum, landing in the top stratum of `T_{n−k}`.
pub fn corner_identify(s: &MetricTreeStratum) -> Result<MetricTreeStratum> {
    if s.edge_states.contains(&EdgeState::Infinite) {
        return Err(Error::InvalidStratum(format!("{s} has a broken edge and is not a corner of T_{}", s.n)));
    }
    let k = s.depth();
    if k == 0 {
        return Err(Error::InvalidStratum(format!("{s} has no zero-length edge")));
    }
    Ok(MetricTreeStratum::top(s.n - k))
}

/// Boundary facets `T_{k₁} × T_{k₂}`, one per interior edge broken at infinity.
pub fn boundary_facets(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i, n - i)).collect()
}

/// The facet `(k₁, k₂)` of a stratum with exactly one broken edge and no zero-length edges.
pub fn facet_of(s: &MetricTreeStratum) -> Result<(usize, usize)> {
    let broken: Vec<usize> = (0..s.edge_states.len()).filter(|&i| s.edge_states[i] == EdgeState::Infinite).collect();
    match (broken.as_slice(), s.depth()) {
        ([i], 0) => Ok((i + 1, s.n - i - 1)),
        _ => Err(Error::InvalidStratum(format!("{s} is not an open facet"))),
    }
}

/// Text table of strata with depth and dimension.
pub fn strata_table(n: usize) -> String {
    let strata = enumerate_strata(n as i64).expect("n is non-negative");
    let mut out = format!("strata of T_{n}: {}\n", strata.len());
    for s in &strata {
        out.push_str(&format!("{s}\tdepth {}\tdim {}\n", s.depth(), s.dimension()));
    }
    let facets = boundary_facets(n);
    out.push_str(&format!("facets: {}\n", facets.len()));
    for (a, b) in facets {
        out.push_str(&format!("T_{a} x T_{b}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use EdgeState::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_strata(0).unwrap().len(), 1);
        assert_eq!(enumerate_strata(1).unwrap().len(), 1);
        assert_eq!(enumerate_strata(2).unwrap().len(), 3);
        assert_eq!(enumerate_strata(3).unwrap().len(), 9);
        assert!(enumerate_strata(-1).is_err());
    }

    #[test]
    fn corners() {
        let s = MetricTreeStratum::new(2, vec![Zero]).unwrap();
        assert_eq!(corner_identify(&s).unwrap(), MetricTreeStratum::top(1));
        let s = MetricTreeStratum::new(3, vec![Zero, Finite]).unwrap();
        assert_eq!(corner_identify(&s).unwrap(), MetricTreeStratum::top(2));
        let s = MetricTreeStratum::new(3, vec![Zero, Zero]).unwrap();
        assert_eq!(corner_identify(&s).unwrap(), MetricTreeStratum::top(1));
        assert!(corner_identify(&MetricTreeStratum::new(3, vec![Zero, Infinite]).unwrap()).is_err());
    }

    #[test]
    fn corner_counts_are_binomial() {
        for n in 2..=8usize {
            let strata = enumerate_strata(n as i64).unwrap();
            for k in 0..n {
                let count = strata.iter().filter(|s| !s.edge_states.contains(&Infinite) && s.depth() == k).count();
                assert_eq!(count, binom(n - 1, k));
            }
        }
    }

    #[test]
    fn facets() {
        assert_eq!(boundary_facets(2), vec![(1, 1)]);
        assert_eq!(boundary_facets(3), vec![(1, 2), (2, 1)]);
        assert_eq!(boundary_facets(5).len(), 4);
        assert!(boundary_facets(1).is_empty());
        let from_strata: Vec<_> = enumerate_strata(4).unwrap().iter().filter_map(|s| facet_of(s).ok()).collect();
        let mut expected = boundary_facets(4);
        expected.reverse();
        assert_eq!(from_strata, expected);
    }

    #[test]
    fn face_order_is_the_product_order() {
        // in one coordinate, the open interval is the only stratum with other strata in its closure
        let strata = enumerate_strata(4).unwrap();
        for a in &strata {
            for b in &strata {
                let product = a.edge_states.iter().zip(&b.edge_states).all(|(x, y)| x == y || (*y == Finite));
                assert_eq!(a.is_face_of(b), product);
                if a.is_face_of(b) && a != b {
                    assert!(a.dimension() < b.dimension());
                }
            }
        }
    }
}
