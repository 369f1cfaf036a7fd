//! Bounded metric spaces over finite point sets.
//!
//! A [`MetricSpace`] is an indexed set of points together with a symmetric
//! distance function and a declared diameter bound `D` with `dist(i,j) <= D`
//! for all pairs. Three representations are supported: a dense all-pairs
//! matrix (built from weighted graphs via shortest paths), raw Euclidean
//! feature rows, and a closed-form two-hub graph used by the adversarial
//! generators (its node count is quadratic in memory when materialized, so
//! distances are computed from the node roles instead).

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum MetricKind {
    /// Row-major `n x n` distance matrix.
    Dense { dist: Box<[f64]> },
    /// Feature rows, L2 distance. `data` is row-major `n x dim`.
    Euclidean { data: Box<[f64]>, dim: usize },
    /// Two-hub graph shortest paths in closed form.
    ///
    /// Node layout: 0 = hub `o`, 1 = hub `v`, `2..2+m1` = spoke set `U`,
    /// `2+m1..2+2*m1` = leaf set `Y`. Edges `o-u` and `o-v` have weight 1,
    /// edges `v-y` have weight `2 - eta`.
    TwoHub { m1: usize, eta: f64 },
}

/// A finite metric space with a declared diameter bound.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    kind: MetricKind,
    n: usize,
    diameter_bound: f64,
}

impl MetricSpace {
    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Declared upper bound on all pairwise distances.
    pub fn diameter_bound(&self) -> f64 {
        self.diameter_bound
    }

    /// Distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n);
        match &self.kind {
            MetricKind::Dense { dist } => dist[i * self.n + j],
            MetricKind::Euclidean { data, dim } => {
                let a = &data[i * dim..(i + 1) * dim];
                let b = &data[j * dim..(j + 1) * dim];
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            MetricKind::TwoHub { m1, eta } => two_hub_dist(*m1, *eta, i, j),
        }
    }

    /// Dense space from a precomputed symmetric matrix. Used internally and
    /// by tests; validation is the caller's responsibility beyond shape.
    pub fn from_matrix(dist: Vec<f64>, n: usize, diameter_bound: f64) -> Self {
        assert_eq!(dist.len(), n * n, "matrix shape mismatch");
        MetricSpace { kind: MetricKind::Dense { dist: dist.into_boxed_slice() }, n, diameter_bound }
    }

    pub(crate) fn two_hub(m1: usize, eta: f64) -> Self {
        let n = 2 * m1 + 2;
        // Largest pairwise distance is u -> o -> v -> y.
        let diameter_bound = 4.0 - eta;
        MetricSpace { kind: MetricKind::TwoHub { m1, eta }, n, diameter_bound }
    }
}

/// Closed-form shortest-path distance on the two-hub graph.
fn two_hub_dist(m1: usize, eta: f64, i: usize, j: usize) -> f64 {
    if i == j {
        return 0.0;
    }
    // Role codes: 0 = o, 1 = v, 2 = U member, 3 = Y member.
    let role = |x: usize| -> u8 {
        match x {
            0 => 0,
            1 => 1,
            x if x < 2 + m1 => 2,
            _ => 3,
        }
    };
    let (a, b) = {
        let (ra, rb) = (role(i), role(j));
        if ra <= rb { (ra, rb) } else { (rb, ra) }
    };
    match (a, b) {
        (0, 1) => 1.0,               // o - v
        (0, 2) => 1.0,               // o - u
        (0, 3) => 3.0 - eta,         // o - v - y
        (1, 2) => 2.0,               // v - o - u
        (1, 3) => 2.0 - eta,         // v - y
        (2, 2) => 2.0,               // u - o - u'
        (2, 3) => 4.0 - eta,         // u - o - v - y
        (3, 3) => 2.0 * (2.0 - eta), // y - v - y'
        _ => unreachable!(),
    }
}

/// A weighted undirected edge list over `n` nodes.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// Builds the shortest-path metric of a connected weighted graph.
///
/// The diameter bound is the maximum computed pairwise distance unless one is
/// declared, in which case the computed diameter is validated against it.
pub fn shortest_path_metric(graph: &EdgeList, diameter_bound: Option<f64>) -> Result<MetricSpace> {
    let n = graph.n;
    if n == 0 {
        return Err(Error::Empty("graph"));
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, w) in &graph.edges {
        if i >= n || j >= n {
            return Err(Error::PointOutOfRange { index: i.max(j), len: n });
        }
        if w <= 0.0 || !w.is_finite() {
            return Err(Error::NonpositiveWeight(i, j, w));
        }
        adj[i].push((j, w));
        adj[j].push((i, w));
    }

    let mut dist = vec![f64::INFINITY; n * n];
    for src in 0..n {
        dijkstra(&adj, src, &mut dist[src * n..(src + 1) * n]);
        if let Some(t) = dist[src * n..(src + 1) * n].iter().position(|d| !d.is_finite()) {
            return Err(Error::DisconnectedGraph(src, t));
        }
    }
    let computed = dist.iter().cloned().fold(0.0_f64, f64::max);
    let bound = match diameter_bound {
        Some(d) => {
            if computed > d {
                return Err(Error::InvalidParameter(format!(
                    "declared diameter_bound {d} is below computed diameter {computed}"
                )));
            }
            d
        }
        None => computed,
    };
    Ok(MetricSpace::from_matrix(dist, n, bound))
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize, out: &mut [f64]) {
    #[derive(PartialEq)]
    struct Entry(f64, usize);
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // Min-heap on distance; ties on node index keep ordering total.
            other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
        }
    }

    out.fill(f64::INFINITY);
    out[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry(0.0, src));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > out[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < out[v] {
                out[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
}

/// Builds a Euclidean metric space from feature rows.
///
/// With `normalize` set, each feature is min-max scaled to `[0,1]` and all
/// distances are divided by `sqrt(d)`, so the diameter bound is exactly 1.
/// Without it, the bound is the bounding-box diagonal (exact for two rows,
/// an upper bound otherwise).
pub fn euclidean_space(rows: &[Vec<f64>], normalize: bool) -> Result<MetricSpace> {
    if rows.is_empty() {
        return Err(Error::Empty("row set"));
    }
    let dim = rows[0].len();
    if dim == 0 {
        return Err(Error::Empty("feature vector"));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::RaggedRows { row: r, got: row.len(), expected: dim });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { row: r, col: c });
        }
    }

    let n = rows.len();
    let mut data = Vec::with_capacity(n * dim);
    if normalize {
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for row in rows {
            for (c, &v) in row.iter().enumerate() {
                lo[c] = lo[c].min(v);
                hi[c] = hi[c].max(v);
            }
        }
        let scale = (dim as f64).sqrt();
        for row in rows {
            for (c, &v) in row.iter().enumerate() {
                let span = hi[c] - lo[c];
                let x = if span > 0.0 { (v - lo[c]) / span } else { 0.0 };
                data.push(x / scale);
            }
        }
        Ok(MetricSpace {
            kind: MetricKind::Euclidean { data: data.into_boxed_slice(), dim },
            n,
            diameter_bound: 1.0,
        })
    } else {
        for row in rows {
            data.extend_from_slice(row);
        }
        let mut diag = 0.0_f64;
        for c in 0..dim {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for row in rows {
                lo = lo.min(row[c]);
                hi = hi.max(row[c]);
            }
            diag += (hi - lo) * (hi - lo);
        }
        Ok(MetricSpace {
            kind: MetricKind::Euclidean { data: data.into_boxed_slice(), dim },
            n,
            diameter_bound: diag.sqrt(),
        })
    }
}
