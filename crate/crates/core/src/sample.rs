//! Distributions, samples, clusterings and the k-median risk.
//!
//! The risk of a clustering `T` on a distribution `P` is the expected
//! distance from a random point to its nearest center. A sample is an
//! ordered sequence of point indices with positional identity, so duplicate
//! draws are distinct elements; its empirical risk is the risk of the
//! uniform distribution over the multiset.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

/// Seedable, platform-stable generator used everywhere randomness is needed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives the seed for trial `trial` in a batch starting at `base`.
pub fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add(trial as u64)
}

/// A probability-weighted finite support over a metric space.
#[derive(Debug, Clone)]
pub struct FiniteDistribution {
    space: Arc<MetricSpace>,
    mass: Vec<f64>,
    /// Cumulative masses for inverse-CDF sampling, last entry forced to 1.
    cdf: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(space: Arc<MetricSpace>, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidParameter(format!(
                "mass vector length {} does not match space size {}",
                mass.len(),
                space.len()
            )));
        }
        for (i, &w) in mass.iter().enumerate() {
            if !(w >= 0.0) {
                return Err(Error::NegativeMass { index: i, weight: w });
            }
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::BadMassTotal(total));
        }
        let mut cdf = Vec::with_capacity(mass.len());
        let mut acc = 0.0;
        for &w in &mass {
            acc += w;
            cdf.push(acc);
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Ok(FiniteDistribution { space, mass, cdf })
    }

    /// Uniform distribution over all points of the space.
    pub fn uniform(space: Arc<MetricSpace>) -> Result<Self> {
        let n = space.len();
        if n == 0 {
            return Err(Error::Empty("space"));
        }
        let w = 1.0 / n as f64;
        Self::new(space, vec![w; n])
    }

    /// Uniform distribution over the multiset of a sample (counts weighted).
    pub fn uniform_over(sample: &Sample) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::Empty("sample"));
        }
        let mut mass = vec![0.0; sample.space().len()];
        let inv = 1.0 / sample.len() as f64;
        for &p in sample.items() {
            mass[p] += inv;
        }
        Self::new(sample.space_arc(), mass)
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<MetricSpace> {
        Arc::clone(&self.space)
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Support as (point, mass) pairs in ascending point order, zero masses skipped.
    pub fn support(&self) -> Vec<(usize, f64)> {
        self.mass.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, &w)| (i, w)).collect()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.gen();
        // First index whose cumulative mass exceeds u.
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }
}

/// An ordered sequence of point indices; duplicates are distinct by position.
#[derive(Debug, Clone)]
pub struct Sample {
    space: Arc<MetricSpace>,
    items: Vec<usize>,
}

impl Sample {
    pub fn new(space: Arc<MetricSpace>, items: Vec<usize>) -> Result<Self> {
        let n = space.len();
        for &p in &items {
            if p >= n {
                return Err(Error::PointOutOfRange { index: p, len: n });
            }
        }
        Ok(Sample { space, items })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<MetricSpace> {
        Arc::clone(&self.space)
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Sub-sample of the positions `range`, preserving order.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Sample {
        Sample { space: Arc::clone(&self.space), items: self.items[range].to_vec() }
    }

    /// Distinct points in ascending index order.
    pub fn distinct_points(&self) -> Vec<usize> {
        let mut pts = self.items.clone();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// (point, count) pairs in ascending point order.
    pub fn counts(&self) -> Vec<(usize, usize)> {
        let mut pts = self.items.clone();
        pts.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for p in pts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// (point, mass) pairs of the uniform distribution over the multiset.
    pub fn uniform_weights(&self) -> Vec<(usize, f64)> {
        let inv = 1.0 / self.items.len() as f64;
        self.counts().into_iter().map(|(p, c)| (p, c as f64 * inv)).collect()
    }
}

/// Where a center came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Chosen by an offline solver with unrestricted access to its input.
    Offline,
    /// Selected irrevocably at this stream position.
    Stream(usize),
}

/// An ordered set of at most `k` distinct centers.
#[derive(Debug, Clone, Serialize)]
pub struct Clustering {
    centers: Vec<usize>,
    provenance: Vec<Provenance>,
}

impl Clustering {
    pub fn new(centers: Vec<usize>, provenance: Vec<Provenance>) -> Result<Self> {
        if centers.len() != provenance.len() {
            return Err(Error::InvalidParameter("centers/provenance length mismatch".into()));
        }
        let mut seen = centers.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != centers.len() {
            return Err(Error::InvalidParameter("duplicate center indices".into()));
        }
        Ok(Clustering { centers, provenance })
    }

    pub fn offline(centers: Vec<usize>) -> Result<Self> {
        let prov = vec![Provenance::Offline; centers.len()];
        Self::new(centers, prov)
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.centers.contains(&point)
    }
}

/// Distance from `point` to the nearest center; ties break on the lowest
/// center index (the first minimal entry in order).
pub fn nearest_center(space: &MetricSpace, centers: &[usize], point: usize) -> (usize, f64) {
    debug_assert!(!centers.is_empty());
    let mut best = (0usize, f64::INFINITY);
    for (i, &c) in centers.iter().enumerate() {
        let d = space.dist(point, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// Risk of `centers` under arbitrary point weights: sum of w * nearest-dist.
///
/// This is the single evaluation path shared by `risk`, `empirical_risk`
/// and the offline solvers, so their values are bit-identical on identical
/// weight vectors.
pub fn weighted_risk(space: &MetricSpace, weights: &[(usize, f64)], centers: &[usize]) -> f64 {
    let mut acc = 0.0;
    for &(p, w) in weights {
        acc += w * nearest_center(space, centers, p).1;
    }
    acc
}

/// Exact k-median risk of `t` on `p`.
pub fn risk(p: &FiniteDistribution, t: &Clustering) -> Result<f64> {
    risk_of_centers(p, t.centers())
}

/// Exact risk for a raw center slice.
pub fn risk_of_centers(p: &FiniteDistribution, centers: &[usize]) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::Empty("clustering"));
    }
    let n = p.space().len();
    for &c in centers {
        if c >= n {
            return Err(Error::PointOutOfRange { index: c, len: n });
        }
    }
    Ok(weighted_risk(p.space(), &p.support(), centers))
}

/// Risk of `t` on the uniform distribution over the multiset `s`.
pub fn empirical_risk(s: &Sample, t: &Clustering) -> Result<f64> {
    empirical_risk_of_centers(s, t.centers())
}

pub fn empirical_risk_of_centers(s: &Sample, centers: &[usize]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::Empty("sample"));
    }
    if centers.is_empty() {
        return Err(Error::Empty("clustering"));
    }
    Ok(weighted_risk(s.space(), &s.uniform_weights(), centers))
}

/// Draws `m` i.i.d. points from `p`. Identical `(p, m, seed)` triples yield
/// identical sequences.
pub fn sample_stream(p: &FiniteDistribution, m: usize, seed: u64) -> Result<Sample> {
    if m == 0 {
        return Err(Error::InvalidParameter("stream length m must be >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let items = (0..m).map(|_| p.draw(&mut rng)).collect();
    Sample::new(p.space_arc(), items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::euclidean_space;

    pub(crate) fn line(points: &[f64]) -> Arc<MetricSpace> {
        Arc::new(
            euclidean_space(&points.iter().map(|&x| vec![x]).collect::<Vec<_>>(), false).unwrap(),
        )
    }

    #[test]
    fn point_mass_risk_zero() {
        let space = line(&[3.0]);
        let p = FiniteDistribution::new(space, vec![1.0]).unwrap();
        let t = Clustering::offline(vec![0]).unwrap();
        assert_eq!(risk(&p, &t).unwrap(), 0.0);
    }

    #[test]
    fn star_risks() {
        // Star with center o and 4 spokes, uniform over 5 nodes:
        // risk({o}) = 1 - 1/5 = 0.8, risk({u}) = 2 - 3/5 = 1.4.
        let edges = (1..5).map(|i| (0, i, 1.0)).collect();
        let space = Arc::new(
            crate::metric::shortest_path_metric(&crate::metric::EdgeList { n: 5, edges }, None)
                .unwrap(),
        );
        let p = FiniteDistribution::uniform(space).unwrap();
        let o = Clustering::offline(vec![0]).unwrap();
        let u = Clustering::offline(vec![1]).unwrap();
        assert!((risk(&p, &o).unwrap() - 0.8).abs() < 1e-12);
        assert!((risk(&p, &u).unwrap() - 1.4).abs() < 1e-12);
    }

    #[test]
    fn empirical_risk_hand_oracles() {
        let space = line(&[0.0, 1.0, 2.0, 3.0]);
        let s = Sample::new(Arc::clone(&space), vec![0, 1, 2, 3]).unwrap();
        let t = Clustering::offline(vec![1]).unwrap();
        // (1 + 0 + 1 + 2) / 4 = 1.0 by direct enumeration.
        assert!((empirical_risk(&s, &t).unwrap() - 1.0).abs() < 1e-15);

        let s3 = Sample::new(Arc::clone(&space), vec![2, 2, 2]).unwrap();
        let t2 = Clustering::offline(vec![2]).unwrap();
        assert_eq!(empirical_risk(&s3, &t2).unwrap(), 0.0);

        // Star nodes (o, u1, u2), center o: (0 + 1 + 1) / 3 = 2/3.
        let star = Arc::new(
            crate::metric::shortest_path_metric(
                &crate::metric::EdgeList { n: 3, edges: vec![(0, 1, 1.0), (0, 2, 1.0)] },
                None,
            )
            .unwrap(),
        );
        let s = Sample::new(star, vec![0, 1, 2]).unwrap();
        let t = Clustering::offline(vec![0]).unwrap();
        assert!((empirical_risk(&s, &t).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empirical_equals_risk_of_uniform_multiset() {
        let space = line(&[0.0, 0.5, 2.0, 5.0]);
        let s = Sample::new(Arc::clone(&space), vec![3, 0, 0, 2, 3, 3]).unwrap();
        let t = Clustering::offline(vec![0, 3]).unwrap();
        let p = FiniteDistribution::uniform_over(&s).unwrap();
        assert_eq!(empirical_risk(&s, &t).unwrap(), risk(&p, &t).unwrap());
    }

    #[test]
    fn errors_on_empty_inputs() {
        let space = line(&[0.0]);
        let p = FiniteDistribution::new(Arc::clone(&space), vec![1.0]).unwrap();
        assert!(risk_of_centers(&p, &[]).is_err());
        let s = Sample::new(space, vec![]).unwrap();
        assert!(empirical_risk_of_centers(&s, &[0]).is_err());
    }

    #[test]
    fn stream_determinism_and_point_mass() {
        let space = line(&[1.0, 7.0]);
        let pm = FiniteDistribution::new(Arc::clone(&space), vec![1.0, 0.0]).unwrap();
        let s = sample_stream(&pm, 4, 9).unwrap();
        assert_eq!(s.items(), &[0, 0, 0, 0]);

        let p = FiniteDistribution::new(space, vec![0.5, 0.5]).unwrap();
        let a = sample_stream(&p, 1000, 42).unwrap();
        let b = sample_stream(&p, 1000, 42).unwrap();
        assert_eq!(a.items(), b.items());
        let c = sample_stream(&p, 1000, 43).unwrap();
        assert_ne!(a.items(), c.items());
    }

    #[test]
    fn stream_frequencies_concentrate() {
        // 6-sigma binomial band at m = 1e5 draws.
        let space = line(&[0.0, 1.0]);
        let p = FiniteDistribution::new(space, vec![0.5, 0.5]).unwrap();
        let m = 100_000;
        let s = sample_stream(&p, m, 1234).unwrap();
        let freq_a = s.items().iter().filter(|&&x| x == 0).count() as f64 / m as f64;
        assert!((freq_a - 0.5).abs() < 0.01, "freq {freq_a}");
    }

    #[test]
    fn multi_atom_frequencies_within_six_sigma() {
        let space = line(&[0.0, 1.0, 2.0, 5.0]);
        let mass = vec![0.1, 0.2, 0.3, 0.4];
        let p = FiniteDistribution::new(space, mass.clone()).unwrap();
        let m = 100_000usize;
        let s = sample_stream(&p, m, 77).unwrap();
        let mut counts = [0usize; 4];
        for &x in s.items() {
            counts[x] += 1;
        }
        for (i, &w) in mass.iter().enumerate() {
            let freq = counts[i] as f64 / m as f64;
            let sigma = (w * (1.0 - w) / m as f64).sqrt();
            assert!((freq - w).abs() <= 6.0 * sigma, "atom {i}: {freq} vs {w}");
        }
    }

    #[test]
    fn clustering_rejects_duplicates() {
        assert!(Clustering::offline(vec![0, 1, 0]).is_err());
    }

    #[test]
    fn risk_monotone_in_added_center() {
        use rand::Rng;
        let mut rng = rng_from_seed(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..8);
            let pts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
            let space = line(&pts);
            let mut mass: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
            let tot: f64 = mass.iter().sum();
            mass.iter_mut().for_each(|w| *w /= tot);
            let p = FiniteDistribution::new(space, mass).unwrap();
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let r1 = risk_of_centers(&p, &[a]).unwrap();
            let r2 = if a == b {
                r1
            } else {
                risk_of_centers(&p, &[a, b]).unwrap()
            };
            assert!(r2 <= r1 + 1e-12);
            assert!(r1 <= p.space().diameter_bound() + 1e-12);
            assert!(r1 >= 0.0);
        }
    }
}
