use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::hybrid::{HybridModel, SampleSet};
use crate::math::sqrt;
use crate::qcore::ComplexMatrix;
use crate::{Error, Result};

/// A distance on points of type `P`.
pub trait Metric<P: ?Sized> {
    fn distance(&self, a: &P, b: &P) -> f64;

    /// `distance(a, b) > r`. Implementations may shortcut with cheap bounds.
    fn exceeds(&self, a: &P, b: &P, r: f64) -> bool {
        self.distance(a, b) > r
    }

    fn name(&self) -> &'static str;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl Metric<[f64]> for Euclidean {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
    }

    fn name(&self) -> &'static str {
        "l2"
    }
}

impl Metric<Vec<f64>> for Euclidean {
    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        Metric::<[f64]>::distance(self, a, b)
    }

    fn name(&self) -> &'static str {
        "l2"
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Frobenius;

impl Metric<DMatrix<f64>> for Frobenius {
    fn distance(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm()
    }

    fn name(&self) -> &'static str {
        "frobenius"
    }
}

/// Operator norm of the difference.
#[derive(Debug, Clone, Copy, Default)]
pub struct Spectral;

impl Metric<ComplexMatrix> for Spectral {
    fn distance(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).spectral_norm()
    }

    fn exceeds(&self, a: &ComplexMatrix, b: &ComplexMatrix, r: f64) -> bool {
        let d = a - b;
        let fro = d.frobenius_norm();
        // ‖D‖_F / √rank ≤ ‖D‖ ≤ ‖D‖_F
        if fro <= r {
            return false;
        }
        if fro / sqrt(d.rows().min(d.cols()) as f64) > r {
            return true;
        }
        d.spectral_norm() > r
    }

    fn name(&self) -> &'static str {
        "spectral"
    }
}

/// `‖f − g‖_{X,ℓ2} = (1/N Σ_j ‖f(x_j) − g(x_j)‖²)^{1/2}` on hypotheses stored
/// as their output tables over a fixed sample `X`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SampleL2;

impl Metric<Vec<Vec<f64>>> for SampleL2 {
    fn distance(&self, a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>) -> f64 {
        let n = a.len().max(1) as f64;
        let ss: f64 = a
            .iter()
            .zip(b)
            .map(|(u, v)| u.iter().zip(v).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
            .sum();
        sqrt(ss / n)
    }

    fn name(&self) -> &'static str {
        "sample-l2"
    }
}

/// A finite sample of a metric space.
#[derive(Debug, Clone)]
pub struct MetricSpaceSample<P, M> {
    points: Vec<P>,
    metric: M,
}

impl<P, M: Metric<P>> MetricSpaceSample<P, M> {
    pub fn new(points: Vec<P>, metric: M) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("points", "space needs at least one point"));
        }
        Ok(Self { points, metric })
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn metric(&self) -> &M {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric.distance(&self.points[i], &self.points[j])
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param("eps", format!("must be positive and finite, got {eps}")));
    }
    Ok(())
}

/// Indices of a maximal set of points at pairwise distance strictly greater
/// than `2ε`, chosen greedily in point order.
pub fn greedy_packing<P, M: Metric<P>>(space: &MetricSpaceSample<P, M>, eps: f64) -> Result<Vec<usize>> {
    check_eps(eps)?;
    let r = 2.0 * eps;
    let mut chosen: Vec<usize> = Vec::new();
    for (i, p) in space.points.iter().enumerate() {
        if chosen.iter().all(|&j| space.metric.exceeds(p, &space.points[j], r)) {
            chosen.push(i);
        }
    }
    Ok(chosen)
}

/// Size of [`greedy_packing`]. Any `ε`-cover of the sampled set needs at
/// least this many centres.
pub fn greedy_packing_number<P, M: Metric<P>>(space: &MetricSpaceSample<P, M>, eps: f64) -> Result<usize> {
    Ok(greedy_packing(space, eps)?.len())
}

/// Centres of an `ε`-cover of the sampled points, all drawn from the sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub centers: Vec<usize>,
    /// `assignment[i]` is a centre within `ε` of point `i`.
    pub assignment: Vec<usize>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Recomputes every point-to-centre distance.
    pub fn verify<P, M: Metric<P>>(&self, space: &MetricSpaceSample<P, M>, eps: f64) -> bool {
        self.assignment.len() == space.len()
            && self
                .assignment
                .iter()
                .enumerate()
                .all(|(i, &c)| self.centers.contains(&c) && space.distance(i, c) <= eps)
    }
}

/// Greedy set cover: repeatedly take the point whose closed `ε`-ball holds
/// the most uncovered points, lowest index on ties. Quadratic in the sample.
pub fn greedy_cover<P, M: Metric<P>>(space: &MetricSpaceSample<P, M>, eps: f64) -> Result<Cover> {
    check_eps(eps)?;
    let n = space.len();
    let mut balls: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        balls[i].push(i);
        for j in i + 1..n {
            if space.distance(i, j) <= eps {
                balls[i].push(j);
                balls[j].push(i);
            }
        }
    }
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut gain: Vec<usize> = balls.iter().map(Vec::len).collect();
    let mut centers = Vec::new();
    let mut uncovered = n;
    while uncovered > 0 {
        let (best, _) = gain
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
        centers.push(best);
        for &j in &balls[best] {
            if assignment[j].is_none() {
                assignment[j] = Some(best);
                uncovered -= 1;
                for &i in &balls[j] {
                    gain[i] -= 1;
                }
            }
        }
    }
    Ok(Cover {
        centers,
        assignment: assignment.into_iter().map(|a| a.expect("all points covered")).collect(),
    })
}

pub fn greedy_cover_number<P, M: Metric<P>>(space: &MetricSpaceSample<P, M>, eps: f64) -> Result<usize> {
    Ok(greedy_cover(space, eps)?.len())
}

/// `‖h₁ − h₂‖_{X,ℓ2}`, normalized by the sample size.
pub fn hypothesis_distance(h1: &HybridModel, h2: &HybridModel, x: &SampleSet) -> Result<f64> {
    if h1.output_dim() != h2.output_dim() {
        return Err(Error::Shape(format!(
            "output dimensions differ: {} vs {}",
            h1.output_dim(),
            h2.output_dim()
        )));
    }
    if x.is_empty() {
        return Err(Error::param("X", "sample is empty"));
    }
    let a = h1.predict_many(x.inputs())?;
    let b = h2.predict_many(x.inputs())?;
    Ok(SampleL2.distance(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(points: usize) -> MetricSpaceSample<Vec<f64>, Euclidean> {
        let pts = (0..points)
            .map(|i| vec![-1.0 + 2.0 * i as f64 / (points - 1) as f64])
            .collect();
        MetricSpaceSample::new(pts, Euclidean).unwrap()
    }

    #[test]
    fn single_point() {
        let s = MetricSpaceSample::new(vec![vec![0.3, 0.1]], Euclidean).unwrap();
        assert_eq!(greedy_packing_number(&s, 0.1).unwrap(), 1);
        assert_eq!(greedy_cover_number(&s, 0.1).unwrap(), 1);
    }

    #[test]
    fn interval_half() {
        let s = interval(2001);
        assert_eq!(greedy_packing_number(&s, 0.5).unwrap(), 2);
        let cover = greedy_cover(&s, 0.5).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.verify(&s, 0.5));
        let c: Vec<f64> = cover.centers.iter().map(|&i| s.points()[i][0]).collect();
        assert!((c[0] + 0.5).abs() < 1e-12 && (c[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn large_eps_single_center() {
        let s = interval(101);
        assert_eq!(greedy_cover_number(&s, 2.0).unwrap(), 1);
        assert_eq!(greedy_packing_number(&s, 1.0).unwrap(), 1);
    }

    #[test]
    fn errors() {
        assert!(MetricSpaceSample::<Vec<f64>, _>::new(vec![], Euclidean).is_err());
        assert!(greedy_packing_number(&interval(3), 0.0).is_err());
    }

    #[test]
    fn spectral_shortcut_agrees() {
        let a = ComplexMatrix::identity(4);
        let b = crate::qcore::build_unitary(&[0.2; 15]).unwrap();
        let d = Spectral.distance(&a, &b);
        for r in [0.5 * d, 0.999 * d, d, 1.001 * d, 2.0 * d] {
            assert_eq!(Spectral.exceeds(&a, &b, r), d > r);
        }
    }

    #[test]
    fn sample_metric_example() {
        let a = vec![vec![1.0], vec![2.0]];
        let b = vec![vec![0.0], vec![1.0]];
        assert!((SampleL2.distance(&a, &b) - 1.0).abs() < 1e-15);
    }
}
