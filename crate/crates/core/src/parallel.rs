use rayon::prelude::*;

const CHUNK: usize = 1024;

/// Sums `width` accumulators over `count` trials. Trials are grouped in fixed
/// chunks that run in parallel; each chunk accumulates in trial order and the
/// chunk totals are combined in chunk order, so the floating-point result is
/// the same for any thread count.
pub(crate) fn ordered_sums<F>(count: usize, width: usize, trial: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let partial: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                trial(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; width];
    for acc in partial {
        for (t, a) in total.iter_mut().zip(acc) {
            *t += a;
        }
    }
    total
}

/// Mean and standard error of the mean from shifted sums
/// `sum (x_i - shift)` and `sum (x_i - shift)^2`.
pub(crate) fn mean_and_se(shift: f64, sum: f64, sum_sq: f64, count: usize) -> (f64, f64) {
    let n = count as f64;
    let mean = shift + sum / n;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Delta-method error of `m^{1/r}` from the standard error of `m`.
pub(crate) fn root_error(mean: f64, se: f64, r: f64) -> f64 {
    if mean > 0.0 {
        se * mean.powf(1.0 / r - 1.0) / r
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_of_thread_count() {
        let f = |i: usize, acc: &mut [f64]| {
            let x = ((i as f64) * 0.37).sin();
            acc[0] += x;
            acc[1] += x * x;
        };
        let a = ordered_sums(5000, 2, f);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| ordered_sums(5000, 2, f));
        assert_eq!(a, b);
    }

    #[test]
    fn shifted_moments() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let shift = 1.0;
        let s: f64 = xs.iter().map(|x| x - shift).sum();
        let s2: f64 = xs.iter().map(|x| (x - shift) * (x - shift)).sum();
        let (m, se) = mean_and_se(shift, s, s2, 4);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
