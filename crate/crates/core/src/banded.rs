//! Banded matrix storage and LU factorization with partial pivoting.
//!
//! Compact row storage: row `i` keeps the entries of columns
//! `i-kl ..= i+ku`. Factorization follows the classic band-LU with row
//! pivoting restricted to the `kl` rows below the diagonal; pivoting can
//! fill the upper band up to `kl + ku`.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    /// n rows of `kl + ku + 1` compact entries.
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    /// Builds from (row, col, value) triplets; duplicates accumulate.
    /// Bandwidths are taken from the triplets themselves.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut kl = 0usize;
        let mut ku = 0usize;
        for &(r, c, _) in triplets {
            if r >= n || c >= n {
                return Err(Error::Shape(format!("triplet ({r},{c}) out of {n}x{n}")));
            }
            if c < r {
                kl = kl.max(r - c);
            } else {
                ku = ku.max(c - r);
            }
        }
        let mut m = BandMatrix::zeros(n, kl, ku);
        for &(r, c, v) in triplets {
            m.add(r, c, v);
        }
        Ok(m)
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> Option<usize> {
        let lo = r.saturating_sub(self.kl);
        if c < lo || c > r + self.ku || c >= self.n {
            return None;
        }
        Some(r * (self.kl + self.ku + 1) + (c + self.kl - r))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.idx(r, c).map(|i| self.data[i]).unwrap_or(0.0)
    }

    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        let i = self.idx(r, c).expect("entry outside band");
        self.data[i] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        let w = self.kl + self.ku + 1;
        for r in 0..self.n {
            let lo = r.saturating_sub(self.kl);
            let hi = (r + self.ku).min(self.n - 1);
            let mut acc = 0.0;
            for c in lo..=hi {
                acc += self.data[r * w + (c + self.kl - r)] * x[c];
            }
            y[r] = acc;
        }
        y
    }

    /// Max absolute row sum (infinity norm).
    pub fn norm_inf(&self) -> f64 {
        let w = self.kl + self.ku + 1;
        (0..self.n)
            .map(|r| self.data[r * w..(r + 1) * w].iter().map(|v| v.abs()).sum())
            .fold(0.0f64, f64::max)
    }

    /// L1 norm of one row.
    pub fn row_norm1(&self, r: usize) -> f64 {
        let w = self.kl + self.ku + 1;
        self.data[r * w..(r + 1) * w].iter().map(|v| v.abs()).sum()
    }

    /// Band LU with partial pivoting. Fails on a pivot smaller than
    /// `1e-13` times the matrix scale (rank-deficient or ill-posed system).
    pub fn lu(&self) -> Result<BandLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mm = kl + ku + 1;
        let scale = self.data.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::RankDeficient("zero matrix".into()));
        }

        // Working copy with room for pivoting fill: width kl + ku + 1, plus
        // the rearrangement below aligns row leading entries at column 0.
        let wide = mm + kl;
        let mut a = vec![0.0; n * wide];
        for r in 0..n {
            for j in 0..mm {
                a[r * wide + j] = self.data[r * mm + j];
            }
        }

        // Left-shift the top kl rows so a[r][0] is each row's first stored
        // column (columns below 0 do not exist for those rows).
        for r in 0..kl.min(n) {
            let shift = kl - r;
            for j in shift..wide {
                a[r * wide + j - shift] = a[r * wide + j];
            }
            for j in (wide - shift)..wide {
                a[r * wide + j] = 0.0;
            }
        }

        let mut al = vec![0.0; n * kl];
        let mut indx = vec![0usize; n];
        let tiny = 1e-13 * scale;

        let mut l = kl;
        for k in 0..n {
            if l < n {
                l += 1;
            }
            // partial pivot among rows k .. min(k+kl, n-1)
            let mut piv = a[k * wide].abs();
            let mut prow = k;
            for r in (k + 1)..l.min(n) {
                let v = a[r * wide].abs();
                if v > piv {
                    piv = v;
                    prow = r;
                }
            }
            indx[k] = prow;
            if piv <= tiny {
                return Err(Error::RankDeficient(format!(
                    "pivot {piv:.3e} at column {k} (matrix scale {scale:.3e})"
                )));
            }
            if prow != k {
                for j in 0..wide {
                    a.swap(k * wide + j, prow * wide + j);
                }
            }
            for r in (k + 1)..l.min(n) {
                let m = a[r * wide] / a[k * wide];
                al[k * kl + (r - k - 1)] = m;
                for j in 1..wide {
                    a[r * wide + j - 1] = a[r * wide + j] - m * a[k * wide + j];
                }
                a[r * wide + wide - 1] = 0.0;
            }
        }

        Ok(BandLu {
            n,
            kl,
            wide,
            upper: a,
            lower: al,
            indx,
        })
    }
}

/// Factorization produced by [`BandMatrix::lu`].
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    wide: usize,
    upper: Vec<f64>,
    lower: Vec<f64>,
    indx: Vec<usize>,
}

impl BandLu {
    /// Solves `A x = b`, overwriting `b` with `x`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kl = self.kl;
        let wide = self.wide;

        let mut l = kl;
        for k in 0..n {
            let p = self.indx[k];
            if p != k {
                b.swap(k, p);
            }
            if l < n {
                l += 1;
            }
            for r in (k + 1)..l.min(n) {
                b[r] -= self.lower[k * kl + (r - k - 1)] * b[k];
            }
        }

        let mut l = 1usize;
        for i in (0..n).rev() {
            let mut acc = b[i];
            for k in 1..l {
                acc -= self.upper[i * wide + k] * b[i + k];
            }
            b[i] = acc / self.upper[i * wide];
            if l < wide {
                l += 1;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
