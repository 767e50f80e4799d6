//! Monte Carlo `L_q` for arbitrary positive `q`.
//!
//! Anchors are `k / 2^64` with `k` drawn from a ChaCha8 stream positioned by
//! sample index, so the estimate depends only on `(seed, samples)` and not on
//! how samples are split across threads. The box count of each sample is
//! exact: `x < k / 2^64` iff `floor(x 2^64) < k`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{LqEstimate, LqKind};
use crate::error::{Error, Result};
use crate::kernel::PointSet;
use crate::scalar::{render_f64, to_f64, Rational};

const CHUNK: u64 = 4096;
const TWO_64: f64 = 18_446_744_073_709_551_616.0;

/// `floor(x 2^64)`; `x` lies in `[0, 1]`.
fn threshold(x: &Rational) -> u128 {
    let scaled = x * Rational::from_integer(BigInt::from(1u128 << 64));
    scaled.floor().to_integer().to_u128().expect("coordinate in [0, 1]")
}

pub fn lq_numeric(d: &PointSet, q: &Rational, samples: u64, seed: u64) -> Result<LqEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let qf = to_f64(q);
    if qf <= 0.0 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    let dim = d.dim();
    let n = d.len() as f64;
    let thresholds: Vec<Vec<u128>> =
        d.points().iter().map(|p| p.coords().iter().map(threshold).collect()).collect();

    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(start as u128 * 2 * dim as u128);
            let mut y = vec![0u64; dim];
            let (mut s1, mut s2) = (0.0f64, 0.0f64);
            for _ in start..end {
                for yk in y.iter_mut() {
                    *yk = rng.next_u64();
                }
                let count = thresholds
                    .iter()
                    .filter(|t| t.iter().zip(&y).all(|(tk, &yk)| *tk < yk as u128))
                    .count() as f64;
                let vol: f64 = y.iter().map(|&k| k as f64 / TWO_64).product();
                let v = (count - n * vol).abs().powf(qf);
                s1 += v;
                s2 += v * v;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = partial.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let m = samples as f64;
    let mean = s1 / m;
    let var = if samples > 1 { ((s2 - s1 * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
    let value = mean.powf(1.0 / qf);
    // Delta method for m^{1/q}.
    let stderr = if mean > 0.0 { value / (qf * mean) * (var / m).sqrt() } else { 0.0 };
    Ok(LqEstimate {
        q: q.clone(),
        value_pow_q: None,
        value: None,
        value_float: render_f64(value),
        kind: LqKind::MonteCarlo,
        stderr: Some(render_f64(stderr)),
        samples: Some(samples),
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TorusPoint;
    use crate::scalar::{int, rat};

    fn set1(x: Rational) -> PointSet {
        PointSet::new(1, vec![TorusPoint::new([x])], "").unwrap()
    }

    #[test]
    fn thresholds_are_exact() {
        assert_eq!(threshold(&rat(1, 2)), 1u128 << 63);
        assert_eq!(threshold(&int(1)), 1u128 << 64);
        assert_eq!(threshold(&rat(1, 3)), (1u128 << 64) / 3);
    }

    #[test]
    fn half_point_l2() {
        let est = lq_numeric(&set1(rat(1, 2)), &int(2), 200_000, 7).unwrap();
        let exact = (1.0f64 / 12.0).sqrt();
        assert!((est.value_float - exact).abs() < 3.0 * est.stderr.unwrap());
    }

    #[test]
    fn origin_l1() {
        let est = lq_numeric(&set1(int(0)), &int(1), 200_000, 3).unwrap();
        assert!((est.value_float - 0.5).abs() < 3.0 * est.stderr.unwrap());
    }

    #[test]
    fn deterministic_per_seed() {
        let d = set1(rat(1, 3));
        let a = lq_numeric(&d, &rat(1, 2), 10_000, 11).unwrap();
        let b = lq_numeric(&d, &rat(1, 2), 10_000, 11).unwrap();
        assert_eq!(a, b);
        let c = lq_numeric(&d, &rat(1, 2), 10_000, 12).unwrap();
        assert_ne!(a.value_float, c.value_float);
    }
}
