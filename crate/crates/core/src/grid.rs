//! Coordinate boxes and nested sample grids.

use serde::Serialize;

use crate::error::{DiracError, Result};
use crate::rational::{self, Q};

/// Axis-aligned rational box `min <= x <= max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    pub min: Vec<Q>,
    pub max: Vec<Q>,
}

impl Domain {
    pub fn new(min: Vec<Q>, max: Vec<Q>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(DiracError::dim(min.len(), max.len(), "domain bounds"));
        }
        if min.iter().zip(&max).any(|(a, b)| a > b) {
            return Err(DiracError::Invalid("domain has min > max".into()));
        }
        Ok(Domain { min, max })
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        Domain {
            min: vec![rational::q(lo); n],
            max: vec![rational::q(hi); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.min).zip(&self.max).all(|((x, a), b)| a <= x && x <= b)
    }
}

/// Regular grid on a domain box. `resolution` counts cells per axis, so a
/// level-`l` grid has `resolution * 2^l + 1` nodes per axis and each level
/// contains the previous one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleGrid {
    pub domain: Domain,
    pub resolution: usize,
    pub refinements: usize,
}

/// Node of a grid: multi-index plus rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridNode {
    pub index: Vec<usize>,
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<Q>,
}

fn ser_point<S: serde::Serializer>(p: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(rational::fmt_q))
}

impl SampleGrid {
    pub fn new(domain: Domain, resolution: usize, refinements: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(DiracError::Invalid("grid resolution must be positive".into()));
        }
        Ok(SampleGrid {
            domain,
            resolution,
            refinements,
        })
    }

    /// Cells per axis at refinement level `level`.
    pub fn cells(&self, level: usize) -> usize {
        self.resolution << level
    }

    pub fn axis_coord(&self, level: usize, axis: usize, i: usize) -> Q {
        let cells = self.cells(level) as i64;
        let (a, b) = (&self.domain.min[axis], &self.domain.max[axis]);
        a + (b - a) * rational::qf(i as i64, cells)
    }

    /// All nodes at a level, in row-major order (last axis fastest).
    pub fn nodes(&self, level: usize) -> Vec<GridNode> {
        let dim = self.domain.dim();
        let per_axis = self.cells(level) + 1;
        let total = per_axis.pow(dim as u32);
        (0..total)
            .map(|flat| {
                let mut index = vec![0; dim];
                let mut rem = flat;
                for a in (0..dim).rev() {
                    index[a] = rem % per_axis;
                    rem /= per_axis;
                }
                let point = index
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| self.axis_coord(level, a, i))
                    .collect();
                GridNode { index, point }
            })
            .collect()
    }

    /// Flat position of a multi-index at `level`.
    pub fn flat_index(&self, level: usize, index: &[usize]) -> usize {
        let per_axis = self.cells(level) + 1;
        index.iter().fold(0, |acc, &i| acc * per_axis + i)
    }

    /// Pairs of flat indices of axis-adjacent nodes.
    pub fn adjacent_pairs(&self, level: usize) -> Vec<(usize, usize)> {
        let dim = self.domain.dim();
        let per_axis = self.cells(level) + 1;
        let mut out = Vec::new();
        for node in self.nodes(level) {
            for a in 0..dim {
                if node.index[a] + 1 < per_axis {
                    let mut nb = node.index.clone();
                    nb[a] += 1;
                    out.push((self.flat_index(level, &node.index), self.flat_index(level, &nb)));
                }
            }
        }
        out
    }
}
