//! Combinatorial model of the curve system and its band surface.
//!
//! The surface is a disk with one crosscap and `2k-1` twisted bands attached
//! along `4k-2` labeled boundary intervals. Curve `c_i` runs through band `i`;
//! two curves are disjoint exactly when their labels link on the boundary
//! circle, and otherwise meet once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordDiagram {
    pub k: usize,
    /// Cyclic label sequence, each label in `1..=2k-1` occurring twice.
    pub labels: Vec<usize>,
    pub crosscaps: usize,
    /// `band_twisted[j - 1]` is the twist flag of the band with label `j`.
    pub band_twisted: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionGraph {
    pub n: usize,
    /// Symmetric 0/1 matrix, zero diagonal, vertices `1..=n` stored at `0..n`.
    pub adjacency: Vec<Vec<u8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub euler_characteristic: i64,
    pub boundary_components: usize,
    pub orientable: bool,
    pub genus: i64,
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    Ok(())
}

/// The label sequence `1, s, 2, s+1, ...` with `s = k + 2`, read modulo `2k-1`.
pub fn build_labels(k: usize) -> Result<ChordDiagram> {
    check_k(k)?;
    let n = 2 * k - 1;
    let s = k + 2;
    let mut labels = Vec::with_capacity(2 * n);
    for m in 0..n {
        labels.push(m + 1);
        labels.push((m + s - 1) % n + 1);
    }
    Ok(ChordDiagram {
        k,
        labels,
        crosscaps: 1,
        band_twisted: vec![true; n],
    })
}

impl ChordDiagram {
    pub fn num_labels(&self) -> usize {
        self.band_twisted.len()
    }

    /// The two positions of `label`, in increasing order.
    pub fn positions(&self, label: usize) -> Result<(usize, usize)> {
        let mut it = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i);
        match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => Ok((a, b)),
            _ => Err(Error::MalformedDiagram(format!(
                "label {label} must occur exactly twice"
            ))),
        }
    }

    /// Each label occurs exactly twice and the bookkeeping lengths agree.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_labels();
        if self.labels.len() != 2 * n {
            return Err(Error::MalformedDiagram(format!(
                "{} intervals for {n} labels",
                self.labels.len()
            )));
        }
        let mut count = vec![0usize; n + 1];
        for &l in &self.labels {
            if l == 0 || l > n {
                return Err(Error::MalformedDiagram(format!("label {l} out of range 1..={n}")));
            }
            count[l] += 1;
        }
        if let Some(l) = (1..=n).find(|&l| count[l] != 2) {
            return Err(Error::MalformedDiagram(format!(
                "label {l} occurs {} times",
                count[l]
            )));
        }
        Ok(())
    }

    /// Rotate the cyclic sequence left by `by` positions.
    pub fn rotated(&self, by: usize) -> ChordDiagram {
        let mut d = self.clone();
        if !d.labels.is_empty() {
            let r = by % d.labels.len();
            d.labels.rotate_left(r);
        }
        d
    }
}

/// Whether the occurrences of `i` separate the occurrences of `j`.
pub fn linked(diagram: &ChordDiagram, i: usize, j: usize) -> Result<bool> {
    let n = diagram.num_labels();
    for l in [i, j] {
        if l == 0 || l > n {
            return Err(Error::IndexOutOfRange { index: l, max: n });
        }
    }
    if i == j {
        return Err(Error::SameLabel);
    }
    let (a, b) = diagram.positions(i)?;
    let (c, d) = diagram.positions(j)?;
    let inside = |x: usize| a < x && x < b;
    Ok(inside(c) != inside(d))
}

/// Each vertex joined to the two cyclically farthest vertices.
pub fn intersection_graph(k: usize) -> Result<IntersectionGraph> {
    check_k(k)?;
    let n = 2 * k - 1;
    let mut adjacency = vec![vec![0u8; n]; n];
    for v in 0..n {
        for w in [(v + k - 1) % n, (v + k) % n] {
            adjacency[v][w] = 1;
        }
    }
    Ok(IntersectionGraph { n, adjacency })
}

/// Curves meet once iff their labels do not link.
pub fn graph_from_diagram(diagram: &ChordDiagram) -> Result<IntersectionGraph> {
    diagram.validate()?;
    let n = diagram.num_labels();
    let mut adjacency = vec![vec![0u8; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            if i != j && !linked(diagram, i, j)? {
                adjacency[i - 1][j - 1] = 1;
            }
        }
    }
    Ok(IntersectionGraph { n, adjacency })
}

impl IntersectionGraph {
    pub fn adjacent(&self, v: usize, w: usize) -> bool {
        self.adjacency[v - 1][w - 1] == 1
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (1..=self.n).filter(|&w| self.adjacent(v, w)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.adjacency[i][j] == self.adjacency[j][i]))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency
            .iter()
            .map(|row| row.iter().map(|&x| usize::from(x)).sum())
            .collect()
    }
}

/// Boundary circles of the band surface.
///
/// Interval `p` has endpoints `L_p` (node `2p`) and `R_p` (node `2p+1`). A gap
/// of the disk boundary joins `R_p` to `L_{p+1}`. A twisted band joining
/// intervals `p` and `q` runs along its two edges from `L_p` to `L_q` and from
/// `R_p` to `R_q`. Every node then has exactly two incident boundary arcs and
/// the boundary is the union of the resulting cycles.
pub fn boundary_components(diagram: &ChordDiagram) -> Result<usize> {
    diagram.validate()?;
    let len = diagram.labels.len();
    if len == 0 {
        // A disk with a crosscap is a Moebius band.
        return Ok(1);
    }
    let nodes = 2 * len;
    let mut gap = vec![0usize; nodes];
    for p in 0..len {
        let r = 2 * p + 1;
        let l_next = 2 * ((p + 1) % len);
        gap[r] = l_next;
        gap[l_next] = r;
    }
    let mut band = vec![0usize; nodes];
    for label in 1..=diagram.num_labels() {
        let (p, q) = diagram.positions(label)?;
        let twisted = diagram.band_twisted[label - 1];
        let (lp, rp, lq, rq) = (2 * p, 2 * p + 1, 2 * q, 2 * q + 1);
        let pairs = if twisted {
            [(lp, lq), (rp, rq)]
        } else {
            [(lp, rq), (rp, lq)]
        };
        for (x, y) in pairs {
            band[x] = y;
            band[y] = x;
        }
    }
    // Alternate gap arcs and band arcs; each cycle is visited from one start.
    let mut seen = vec![false; nodes];
    let mut cycles = 0;
    for start in 0..nodes {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut v = start;
        loop {
            seen[v] = true;
            let w = gap[v];
            seen[w] = true;
            v = band[w];
            if v == start {
                break;
            }
        }
    }
    Ok(cycles)
}

pub fn topology_report(diagram: &ChordDiagram) -> Result<TopologyReport> {
    let boundary = boundary_components(diagram)?;
    let bands = diagram.num_labels() as i64;
    let euler_characteristic = -bands;
    let orientable = diagram.crosscaps == 0 && diagram.band_twisted.iter().all(|t| !t);
    let b = boundary as i64;
    let genus = if orientable {
        (2 - euler_characteristic - b) / 2
    } else {
        2 - euler_characteristic - b
    };
    Ok(TopologyReport {
        euler_characteristic,
        boundary_components: boundary,
        orientable,
        genus,
    })
}
