//! Exact power integrals of the local discrepancy over a cell decomposition.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use crate::exact_int::{bits_of, bits_of_usize, common_denominator, fits_i128, scale, ExactInt};
use crate::scalar::Rational;

/// Product decomposition of `(0, 1]^d` by the point coordinates.
///
/// On the cell `prod (g_j, g_j']` the counting function is the number of
/// points with every coordinate `<= g_j`, so `L = A - N prod y_j` is a
/// polynomial there and integrates exactly.
#[derive(Debug, Clone)]
pub struct CellDecomposition {
    dim: usize,
    points: usize,
    q: BigInt,
    /// Scaled grid `{0} ∪ {x_ij} ∪ {1}` per axis.
    grid: Vec<Vec<BigInt>>,
    /// Count for each cell, row-major over lower corners.
    counts: Vec<u32>,
}

impl CellDecomposition {
    /// Coordinates must lie in `[0, 1]`.
    pub fn new(coords: &[Vec<Rational>], dim: usize) -> Self {
        let q = common_denominator(coords.iter().flatten());
        let scaled: Vec<Vec<BigInt>> =
            coords.iter().map(|c| c.iter().map(|x| scale(x, &q)).collect()).collect();
        let grid: Vec<Vec<BigInt>> = (0..dim)
            .map(|j| {
                let mut g: Vec<BigInt> = scaled.iter().map(|c| c[j].clone()).collect();
                g.push(BigInt::zero());
                g.push(q.clone());
                g.sort();
                g.dedup();
                g
            })
            .collect();
        let cells: Vec<usize> = grid.iter().map(|g| g.len() - 1).collect();
        let strides = strides(&cells);
        let total: usize = cells.iter().product();
        let mut counts = vec![0u32; total];
        for c in &scaled {
            // Points sitting at 1 are never inside a box.
            if c.contains(&q) {
                continue;
            }
            let idx: usize = (0..dim)
                .map(|j| strides[j] * grid[j].binary_search(&c[j]).expect("coordinate on grid"))
                .sum();
            counts[idx] += 1;
        }
        for j in 0..dim {
            for idx in 0..total {
                if !(idx / strides[j]).is_multiple_of(cells[j]) {
                    counts[idx] += counts[idx - strides[j]];
                }
            }
        }
        CellDecomposition { dim, points: coords.len(), q, grid, counts }
    }

    pub fn cell_count(&self) -> usize {
        self.counts.len()
    }

    /// Lower corner, upper corner and count of every cell.
    pub fn cells(&self) -> impl Iterator<Item = (Vec<Rational>, Vec<Rational>, u32)> + '_ {
        let sizes: Vec<usize> = self.grid.iter().map(|g| g.len() - 1).collect();
        let strides = strides(&sizes);
        (0..self.counts.len()).map(move |flat| {
            let mut lo = Vec::with_capacity(self.dim);
            let mut hi = Vec::with_capacity(self.dim);
            for j in 0..self.dim {
                let c = (flat / strides[j]) % sizes[j];
                lo.push(Rational::new(self.grid[j][c].clone(), self.q.clone()));
                hi.push(Rational::new(self.grid[j][c + 1].clone(), self.q.clone()));
            }
            (lo, hi, self.counts[flat])
        })
    }

    /// `int (A(Y) - N prod y_j)^k dY` over the unit cube, for each `k` in `ks`.
    pub fn power_integrals(&self, ks: &[u32]) -> Vec<Rational> {
        let kmax = ks.iter().copied().max().unwrap_or(0);
        let bits = self.dim as u64 * (kmax as u64 + 1) * (bits_of(&self.q) + 1)
            + kmax as u64 * bits_of_usize(self.points)
            + self.dim as u64 * bits_of_usize(self.points + 2)
            + 4;
        let sums = if fits_i128(bits) {
            self.raw_sums::<i128>(ks, kmax)
        } else {
            self.raw_sums::<BigInt>(ks, kmax)
        };
        let n = BigInt::from(self.points);
        ks.iter()
            .zip(sums)
            .map(|(&k, per_m)| {
                per_m
                    .into_iter()
                    .enumerate()
                    .map(|(m, s)| {
                        let m = m as u32;
                        let coeff = binomial(BigInt::from(k), BigInt::from(m)) * num_traits::pow(-n.clone(), m as usize);
                        let denom = num_traits::pow(BigInt::from(m + 1), self.dim)
                            * num_traits::pow(self.q.clone(), (m as usize + 1) * self.dim);
                        Rational::new(coeff * s, denom)
                    })
                    .sum()
            })
            .collect()
    }

    pub fn power_integral(&self, k: u32) -> Rational {
        self.power_integrals(&[k]).remove(0)
    }

    /// For each `k`, the integer sums `sum_cells A^{k-m} prod_j (H_j^{m+1} - L_j^{m+1})`
    /// for `m = 0..=k`.
    fn raw_sums<T: ExactInt>(&self, ks: &[u32], kmax: u32) -> Vec<Vec<BigInt>> {
        let sizes: Vec<usize> = self.grid.iter().map(|g| g.len() - 1).collect();
        let strides = strides(&sizes);
        // diffs[j][c][m] = H^{m+1} - L^{m+1}
        let diffs: Vec<Vec<Vec<T>>> = self
            .grid
            .iter()
            .map(|g| {
                g.windows(2)
                    .map(|w| {
                        let (lo, hi) = (T::from_big(&w[0]), T::from_big(&w[1]));
                        let (mut pl, mut ph) = (lo.clone(), hi.clone());
                        let mut out = Vec::with_capacity(kmax as usize + 1);
                        for _ in 0..=kmax {
                            out.push(ph.clone() - pl.clone());
                            pl = pl * lo.clone();
                            ph = ph * hi.clone();
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        let mut acc: Vec<Vec<T>> = ks.iter().map(|&k| vec![T::zero(); k as usize + 1]).collect();
        let mut prods = vec![T::one(); kmax as usize + 1];
        let mut a_pows = vec![T::one(); kmax as usize + 1];
        for (flat, &count) in self.counts.iter().enumerate() {
            for p in prods.iter_mut() {
                *p = T::one();
            }
            for j in 0..self.dim {
                let c = (flat / strides[j]) % sizes[j];
                for (m, p) in prods.iter_mut().enumerate() {
                    *p = p.clone() * diffs[j][c][m].clone();
                }
            }
            let a = T::from(count as i64);
            for e in 1..=kmax as usize {
                a_pows[e] = a_pows[e - 1].clone() * a.clone();
            }
            for (slot, &k) in ks.iter().enumerate() {
                for m in 0..=k as usize {
                    if m < k as usize && count == 0 {
                        continue;
                    }
                    acc[slot][m] = acc[slot][m].clone() + a_pows[k as usize - m].clone() * prods[m].clone();
                }
            }
        }
        acc.into_iter().map(|v| v.iter().map(T::to_big).collect()).collect()
    }
}

fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; sizes.len()];
    for j in (0..sizes.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * sizes[j + 1];
    }
    s
}

/// `int_lo^hi |a - n t|^k dt` for `n > 0`.
pub(crate) fn abs_power_linear(a: &Rational, n: &Rational, lo: &Rational, hi: &Rational, k: u32) -> Rational {
    // Antiderivative of (a - n t)^k is -(a - n t)^{k+1} / (n (k + 1)).
    let piece = |l: &Rational, h: &Rational| -> Rational {
        let f = |t: &Rational| num_traits::pow(a - n * t, k as usize + 1);
        let v = (f(l) - f(h)) / (n * Rational::from_integer((k + 1).into()));
        num_traits::Signed::abs(&v)
    };
    let root = a / n;
    if root > *lo && root < *hi {
        piece(lo, &root) + piece(&root, hi)
    } else {
        piece(lo, hi)
    }
}

/// Exact `int_0^1 |L[D, y]|^k dy` in one dimension, any integer `k >= 1`.
pub(crate) fn abs_power_integral_1d(coords: &[Rational], shift_c: &Rational, k: u32) -> Rational {
    let rows: Vec<Vec<Rational>> = coords.iter().map(|c| vec![c.clone()]).collect();
    let cells = CellDecomposition::new(&rows, 1);
    let n = Rational::from_integer(BigInt::from(coords.len()));
    cells
        .cells()
        .map(|(lo, hi, count)| {
            let a = Rational::from_integer(count.into()) - shift_c;
            abs_power_linear(&a, &n, &lo[0], &hi[0], k)
        })
        .sum()
}
