use rand::Rng;

use crate::num::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult<T> {
    /// Cluster of each point.
    pub assignments: Vec<usize>,
    pub centers: Vec<Vec<T>>,
    pub iterations: usize,
}

fn distance2<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Index of the nearest center; ties go to the lower index.
pub(crate) fn nearest<T: Real>(point: &[T], centers: &[Vec<T>]) -> usize {
    let mut best = 0;
    let mut best_d = T::infinity();
    for (c, center) in centers.iter().enumerate() {
        let d = distance2(point, center);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

/// Lloyd's algorithm with farthest-point seeding: the first center is a
/// uniformly drawn point and each further center is the point farthest from
/// the centers chosen so far. `k` is capped at the number of points.
///
/// # Panics
/// If `points` is empty or `k == 0`.
pub fn kmeans<T: Real, R: Rng + ?Sized>(
    points: &[Vec<T>],
    k: usize,
    max_iterations: usize,
    rng: &mut R,
) -> KMeansResult<T> {
    assert!(!points.is_empty() && k > 0, "k-means needs points and k >= 1");
    let k = k.min(points.len());
    let mut centers = vec![points[rng.random_range(0..points.len())].clone()];
    let mut nearest_d: Vec<T> = points.iter().map(|p| distance2(p, &centers[0])).collect();
    while centers.len() < k {
        let mut far = 0;
        for (i, &d) in nearest_d.iter().enumerate() {
            if d > nearest_d[far] {
                far = i;
            }
        }
        centers.push(points[far].clone());
        let c = centers.last().expect("center");
        for (p, d) in points.iter().zip(nearest_d.iter_mut()) {
            *d = d.min(distance2(p, c));
        }
    }

    let dim = points[0].len();
    let mut assignments: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
    let mut iterations = 0;
    while iterations < max_iterations {
        iterations += 1;
        let mut sums = vec![vec![T::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, &x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                let n = T::lit(counts[c] as f64);
                centers[c] = sums[c].iter().map(|&s| s / n).collect();
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
        if next == assignments {
            break;
        }
        assignments = next;
    }
    KMeansResult { assignments, centers, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separates_two_blobs() {
        let mut points = Vec::new();
        for i in 0..20 {
            let jitter = i as f64 * 0.01;
            points.push(vec![0.0 + jitter, 0.0]);
            points.push(vec![10.0 - jitter, 10.0]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let result = kmeans(&points, 2, 50, &mut rng);
        for pair in result.assignments.chunks(2) {
            assert_ne!(pair[0], pair[1]);
        }
        assert!(result.assignments.iter().step_by(2).all(|&a| a == result.assignments[0]));
    }

    #[test]
    fn k_is_capped() {
        let points = vec![vec![1.0f32], vec![2.0]];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(kmeans(&points, 5, 50, &mut rng).centers.len(), 2);
    }
}
