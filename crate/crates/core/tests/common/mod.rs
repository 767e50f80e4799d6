//! Random instances and independent reference computations shared by the
//! integration tests. The oracles here use plain integer or float arithmetic
//! and none of the crate's search code.

#![allow(dead_code)]

use discrepancy_core::kernel::{Anchor, PointSet, TorusPoint};
use discrepancy_core::scalar::{rat, Rational, SidedValue};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const DENOMINATORS: [i64; 8] = [2, 3, 4, 5, 6, 8, 12, 16];

pub fn random_coord(rng: &mut ChaCha8Rng) -> Rational {
    let den = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
    rat(rng.gen_range(0..den), den)
}

pub fn random_set(rng: &mut ChaCha8Rng, dim: usize, max_n: usize) -> PointSet {
    let n = rng.gen_range(1..=max_n);
    let points = (0..n).map(|_| TorusPoint::new((0..dim).map(|_| random_coord(rng)))).collect();
    PointSet::new(dim, points, "").unwrap()
}

/// Anchor coordinates from a small grid or the set's own coordinates, with
/// random side flags on the latter so boundary cases are common.
pub fn random_anchor(rng: &mut ChaCha8Rng, d: &PointSet) -> Anchor {
    let coords = (0..d.dim())
        .map(|k| match rng.gen_range(0..4) {
            0 => SidedValue::at(rat(rng.gen_range(0..=48), 48)),
            1 => SidedValue::at(Rational::one()),
            _ => {
                let v = d.points()[rng.gen_range(0..d.len())].coords()[k].clone();
                match rng.gen_range(0..3) {
                    0 => SidedValue::at(v),
                    1 if v > Rational::zero() => SidedValue::left(v),
                    _ => SidedValue::right(v),
                }
            }
        })
        .collect();
    Anchor::new(coords).unwrap()
}

fn as_pair(x: &Rational) -> (i128, i128) {
    (x.numer().to_i128().unwrap(), x.denom().to_i128().unwrap())
}

/// `max |L[D, m/R]|` over the uniform grid `m in {0, ..., R}^d`, by direct
/// counting in integers. Returns `(numerator, R^d)`.
pub fn grid_linf(d: &PointSet, r: i128) -> (i128, i128) {
    let dim = d.dim();
    let pts: Vec<Vec<(i128, i128)>> =
        d.points().iter().map(|p| p.coords().iter().map(as_pair).collect()).collect();
    let n = d.len() as i128;
    let scale = r.pow(dim as u32);
    let mut best = 0i128;
    let mut m = vec![0i128; dim];
    loop {
        // x = a/b < m/R  <=>  a R < m b
        let count = pts
            .iter()
            .filter(|p| p.iter().zip(&m).all(|(&(a, b), &mk)| a * r < mk * b))
            .count() as i128;
        let vol: i128 = m.iter().product();
        best = best.max((count * scale - n * vol).abs());
        let mut k = 0;
        loop {
            if k == dim {
                return (best, scale);
            }
            m[k] += 1;
            if m[k] <= r {
                break;
            }
            m[k] = 0;
            k += 1;
        }
    }
}

pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `lambda_1[D + z]` in one dimension at an exact shift.
pub fn lambda_1d(xs: &[Rational], z: &Rational) -> Rational {
    let half = rat(1, 2);
    xs.iter()
        .map(|x| {
            let s = x + z;
            Rational::one() - (&s - s.floor()) - &half
        })
        .sum()
}

/// `sup_z |lambda_1[D + z]|` in one dimension. Between jumps the mean
/// decreases, so the largest values sit right at a jump (`z = {-x_i}`) and
/// the smallest just before one, where it is lower by the number of points
/// that jump there.
pub fn lambda_star_abs_1d(xs: &[Rational]) -> Rational {
    let mut best = Rational::zero();
    for x in xs {
        let z = -x - (-x).floor();
        let at = lambda_1d(xs, &z);
        let jumps = xs.iter().filter(|y| *y == x).count() as i64;
        let before = &at - rat(jumps, 1);
        best = best.max(at.abs()).max(before.abs());
    }
    best
}

/// Midpoint-rule `int |L[D, y]|^q dy` in one dimension with `m` cells.
pub fn lq_pow_1d_numeric(xs: &[f64], q: f64, m: usize) -> f64 {
    let n = xs.len() as f64;
    (0..m)
        .map(|k| {
            let y = (k as f64 + 0.5) / m as f64;
            let count = xs.iter().filter(|&&x| x < y).count() as f64;
            (count - n * y).abs().powf(q)
        })
        .sum::<f64>()
        / m as f64
}
