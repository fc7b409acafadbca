//! Shape analysis of sampled time series: extrema, monotonicity and revivals.
//!
//! Consecutive samples closer than `tol` are treated as one plateau, so a
//! flat stretch of zero concurrence counts as a single minimum.

/// A maximal run of samples equal within `tol` to its first sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Run {
    start: usize,
    end: usize,
}

impl Run {
    fn center(&self) -> usize {
        (self.start + self.end) / 2
    }
}

fn runs(values: &[f64], tol: f64) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(run) if (v - values[run.start]).abs() <= tol => run.end = i,
            _ => out.push(Run { start: i, end: i }),
        }
    }
    out
}

fn interior_extrema(values: &[f64], tol: f64, maxima: bool) -> Vec<usize> {
    let r = runs(values, tol);
    r.windows(3)
        .filter(|w| {
            let (a, b, c) = (values[w[0].start], values[w[1].start], values[w[2].start]);
            if maxima {
                b > a && b > c
            } else {
                b < a && b < c
            }
        })
        .map(|w| w[1].center())
        .collect()
}

/// Indices of interior local maxima (plateaus reported at their center).
pub fn local_maxima(values: &[f64], tol: f64) -> Vec<usize> {
    interior_extrema(values, tol, true)
}

/// Indices of interior local minima (plateaus reported at their center).
pub fn local_minima(values: &[f64], tol: f64) -> Vec<usize> {
    interior_extrema(values, tol, false)
}

pub fn is_monotone_nonincreasing(values: &[f64], tol: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + tol)
}

pub fn is_strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

/// True when some sample exceeds the running minimum before it by more
/// than `tol`, i.e. the series decreases and later increases again.
pub fn is_non_monotonic(values: &[f64], tol: f64) -> bool {
    let mut low = f64::INFINITY;
    for &v in values {
        if v > low + tol {
            return true;
        }
        low = low.min(v);
    }
    false
}

/// Half-open index ranges where `|v| <= zero_tol` for at least two samples.
pub fn dark_periods(values: &[f64], zero_tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &v) in values.iter().enumerate() {
        match (v.abs() <= zero_tol, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= 2 {
                    out.push(s..i);
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        if values.len() - s >= 2 {
            out.push(s..values.len());
        }
    }
    out
}

/// A dark period followed later by a sample above `threshold`.
pub fn has_dark_period_revival(values: &[f64], zero_tol: f64, threshold: f64) -> bool {
    dark_periods(values, zero_tol)
        .iter()
        .any(|r| values[r.end..].iter().any(|&v| v > threshold))
}

/// Number of interior local maxima that rise above `threshold`.
pub fn revival_count(values: &[f64], tol: f64, threshold: f64) -> usize {
    local_maxima(values, tol)
        .into_iter()
        .filter(|&i| values[i] > threshold)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrema_of_a_cosine() {
        let v: Vec<f64> = (0..=400).map(|i| (i as f64 * 0.05).cos()).collect();
        let max = local_maxima(&v, 0.0);
        let min = local_minima(&v, 0.0);
        assert_eq!(max.len(), 3);
        assert_eq!(min.len(), 3);
        assert!((v[min[0]] + 1.0).abs() < 1e-2);
        assert!(!is_monotone_nonincreasing(&v, 0.0));
        assert!(is_non_monotonic(&v, 1e-3));
    }

    #[test]
    fn plateaus_count_once() {
        let v = [1.0, 0.5, 0.0, 0.0, 0.0, 0.4, 0.4, 0.2, 0.0];
        assert_eq!(local_minima(&v, 1e-12), vec![3]);
        assert_eq!(local_maxima(&v, 1e-12), vec![5]);
        assert_eq!(dark_periods(&v, 1e-12), vec![2..5]);
        assert!(has_dark_period_revival(&v, 1e-12, 0.3));
        assert!(!has_dark_period_revival(&v, 1e-12, 0.5));
        assert_eq!(revival_count(&v, 1e-12, 0.1), 1);
    }

    #[test]
    fn decaying_series() {
        let v: Vec<f64> = (0..50).map(|i| (-(i as f64) * 0.1).exp()).collect();
        assert!(is_monotone_nonincreasing(&v, 0.0));
        assert!(is_strictly_decreasing(&v));
        assert!(!is_non_monotonic(&v, 0.0));
        assert!(local_maxima(&v, 0.0).is_empty());
        assert!(dark_periods(&v, 1e-12).is_empty());
    }
}
