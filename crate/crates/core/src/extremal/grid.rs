//! Exact `sup_Y |L[D, Y]|` by breakpoint-grid enumeration.
//!
//! The counting function `A(Y)` is constant on the cells
//! `prod (g_j, g_j']` cut out by the point coordinates, while `N v(Y)`
//! increases in every coordinate. The positive part of `L` is therefore
//! largest at a lower cell corner approached from above and the negative part
//! at an upper corner, so the supremum is a maximum over the grid
//! `prod Gamma_j` with both closures.

use num_bigint::BigInt;
use num_traits::One;

use crate::exact_int::{bits_of, bits_of_usize, common_denominator, fits_i128, pow_t, scale, ExactInt};
use crate::scalar::Rational;

/// Best candidate found on one grid.
#[derive(Debug, Clone)]
pub(crate) struct GridBest {
    /// `|L|` at the witness.
    pub value: Rational,
    /// Witness anchor coordinates.
    pub anchor: Vec<Rational>,
    /// Positive part (anchor approached from above) or negative part (exact anchor).
    pub positive: bool,
}

/// Sorted distinct coordinate values per axis, with 1 appended.
pub(crate) fn breakpoint_grid(coords: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    (0..dim)
        .map(|j| {
            let mut g: Vec<Rational> = coords.iter().map(|c| c[j].clone()).collect();
            g.push(Rational::one());
            g.sort();
            g.dedup();
            g
        })
        .collect()
}

/// Maximum of `|L|` over the breakpoint grid of a configuration whose
/// coordinates lie in `[0, 1]`.
pub(crate) fn linf_of_coords(coords: &[Vec<Rational>], dim: usize) -> GridBest {
    let q = common_denominator(coords.iter().flatten());
    let n = coords.len();
    let bits = bits_of_usize(n) + dim as u64 * bits_of(&q) + 2;
    let scaled: Vec<Vec<BigInt>> =
        coords.iter().map(|c| c.iter().map(|x| scale(x, &q)).collect()).collect();
    if fits_i128(bits) {
        linf_scaled::<i128>(&scaled, &q, dim)
    } else {
        linf_scaled::<BigInt>(&scaled, &q, dim)
    }
}

fn linf_scaled<T: ExactInt>(scaled: &[Vec<BigInt>], q: &BigInt, dim: usize) -> GridBest {
    let n = scaled.len();
    let qt = T::from_big(q);
    let coords: Vec<Vec<T>> =
        scaled.iter().map(|c| c.iter().map(T::from_big).collect()).collect();
    let gamma: Vec<Vec<T>> = (0..dim)
        .map(|j| {
            let mut g: Vec<T> = coords.iter().map(|c| c[j].clone()).collect();
            g.push(qt.clone());
            g.sort();
            g.dedup();
            g
        })
        .collect();
    let sizes: Vec<usize> = gamma.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let mut strides = vec![1usize; dim];
    for j in (0..dim.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * sizes[j + 1];
    }

    // counts[g] = #{i : rank_i <= g componentwise}
    let mut counts = vec![0u32; total];
    for c in &coords {
        let idx: usize = (0..dim)
            .map(|j| strides[j] * gamma[j].binary_search(&c[j]).expect("coordinate on grid"))
            .sum();
        counts[idx] += 1;
    }
    for j in 0..dim {
        for idx in 0..total {
            if !(idx / strides[j]).is_multiple_of(sizes[j]) {
                counts[idx] += counts[idx - strides[j]];
            }
        }
    }

    let n_t = T::from(n as i64);
    let qd = pow_t(&qt, dim);
    let mut best: Option<(T, usize)> = None;
    let mut node = vec![0usize; dim];
    for flat in 0..total {
        let mut rem = flat;
        for j in 0..dim {
            node[j] = rem / strides[j];
            rem %= strides[j];
        }
        let prod = (0..dim).fold(T::one(), |acc, j| acc * gamma[j][node[j]].clone());
        let nv = n_t.clone() * prod;
        let at_right = T::from(counts[flat] as i64);
        let at_open = if node.contains(&0) {
            T::zero()
        } else {
            let back: usize = strides.iter().sum();
            T::from(counts[flat - back] as i64)
        };
        let pos = at_right * qd.clone() - nv.clone();
        let neg = nv - at_open * qd.clone();
        for (k, v) in [pos, neg].into_iter().enumerate() {
            let order = 2 * flat + k;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, order));
            }
        }
    }
    let (value, order) = best.expect("grid is never empty");
    let flat = order / 2;
    let mut rem = flat;
    let anchor = (0..dim)
        .map(|j| {
            let g = rem / strides[j];
            rem %= strides[j];
            Rational::new(gamma[j][g].to_big(), q.clone())
        })
        .collect();
    GridBest {
        value: Rational::new(value.to_big(), qd.to_big()),
        anchor,
        positive: order % 2 == 0,
    }
}
