//! Connected-component size profiles and the event indicators the phase
//! transition theorems are stated in terms of.
//!
//! All functions here are pure over immutable inputs and safe to call
//! concurrently.

use crate::bounds::PhaseParams;
use crate::error::{Error, Result};
use crate::sampler::GraphSample;

/// Union-find over 0-based vertex indices, union by size with path
/// compression.
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while x != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    /// Size of the set containing x.
    pub fn size_of(&mut self, x: u32) -> u32 {
        let root = self.find(x);
        self.size[root as usize]
    }

    /// Sizes of all sets, unordered.
    pub fn set_sizes(&mut self) -> Vec<u64> {
        let mut sizes = Vec::new();
        for x in 0..self.parent.len() as u32 {
            if self.parent[x as usize] == x {
                sizes.push(self.size[x as usize] as u64);
            }
        }
        sizes
    }
}

/// Multiset of component sizes of a graph, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentProfile {
    n: u64,
    sizes: Vec<u64>,
}

impl ComponentProfile {
    /// Wrap an explicit size list, validating the invariants.
    pub fn new(n: u64, mut sizes: Vec<u64>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::param("component sizes must be positive"));
        }
        if sizes.iter().sum::<u64>() != n {
            return Err(Error::param("component sizes must sum to n"));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ComponentProfile { n, sizes })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Component sizes, non-increasing. Their sum is n and every entry >= 1.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Largest component size (0 only for the impossible empty profile).
    pub fn giant_size(&self) -> u64 {
        self.sizes.first().copied().unwrap_or(0)
    }

    /// Second-largest component size; 0 for a single-component profile.
    pub fn second_size(&self) -> u64 {
        self.sizes.get(1).copied().unwrap_or(0)
    }
}

/// Profile of a sampled graph via union-find, O(m alpha(n)).
pub fn component_profile(g: &GraphSample) -> ComponentProfile {
    profile_from_edges(g.vertex_count(), g.edges().iter().copied())
}

/// Profile a graph given as an edge stream, without materializing it.
/// Edges are 1-based (i, j) pairs.
pub fn profile_from_edges(n: u64, edges: impl IntoIterator<Item = (u32, u32)>) -> ComponentProfile {
    let mut uf = UnionFind::new(n as usize);
    for (i, j) in edges {
        uf.union(i - 1, j - 1);
    }
    let mut sizes = uf.set_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(sizes.iter().sum::<u64>(), n);
    ComponentProfile { n, sizes }
}

/// Number of vertices in the component containing `vertex` (1-based).
pub fn component_size_containing(g: &GraphSample, vertex: u64) -> Result<u64> {
    let n = g.vertex_count();
    if vertex == 0 || vertex > n {
        return Err(Error::param(format!("vertex {vertex} outside 1..={n}")));
    }
    let mut uf = UnionFind::new(n as usize);
    for &(i, j) in g.edges() {
        uf.union(i - 1, j - 1);
    }
    Ok(uf.size_of(vertex as u32 - 1) as u64)
}

/// Event indicators for one profile under one parameter set.
///
/// `small_sum` is the total number of vertices in components of size at most
/// theta*n, i.e. the realized value of sum_i X_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventFlags {
    /// Some component has at least theta*n vertices.
    pub a_theta: bool,
    /// Some component size lies in [M log n, theta*n].
    pub b_theta: bool,
    /// Some component has at least M log n vertices.
    pub h_theta: bool,
    /// Largest >= giant threshold and every other component < M log n.
    pub e_m: bool,
    /// Every component < M log n.
    pub f_m: bool,
    pub giant_size: u64,
    pub small_sum: u64,
}

/// Evaluate the theorem events on a profile.
///
/// `giant_threshold` selects the giant criterion (n/2 for the
/// supercritical-T1 regime, n - n e^{-C/8} for theorem2). "Size at least
/// theta*n" rounds up: a
/// component counts for A_theta iff its size >= ceil(theta*n). M log n uses
/// the natural log, is not rounded, and the "less than M log n" comparisons
/// are strict.
pub fn evaluate_events(
    profile: &ComponentProfile,
    params: &PhaseParams,
    giant_threshold: f64,
) -> Result<EventFlags> {
    if !(params.theta > 0.0 && params.theta < 1.0) {
        return Err(Error::param(format!("theta must lie in (0,1), got {}", params.theta)));
    }
    if params.m == 0 {
        return Err(Error::param("M must be a positive integer"));
    }
    let n = profile.n();
    let theta_n = params.theta * n as f64;
    let a_cut = theta_n.ceil();
    let m_log_n = params.m as f64 * (n as f64).ln();

    let giant = profile.giant_size();
    let second = profile.second_size();
    let mut b_theta = false;
    let mut h_theta = false;
    let mut small_sum = 0u64;
    for &s in profile.sizes() {
        let sf = s as f64;
        if sf >= m_log_n {
            h_theta = true;
            if sf <= theta_n {
                b_theta = true;
            }
        }
        if sf <= theta_n {
            small_sum += s;
        }
    }
    let flags = EventFlags {
        a_theta: giant as f64 >= a_cut,
        b_theta,
        h_theta,
        e_m: giant as f64 >= giant_threshold && (second as f64) < m_log_n,
        f_m: (giant as f64) < m_log_n,
        giant_size: giant,
        small_sum,
    };
    debug_assert!(flags.small_sum <= n);
    Ok(flags)
}
