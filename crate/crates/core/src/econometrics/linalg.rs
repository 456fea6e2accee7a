//! Householder QR least squares on column-major dense matrices.

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds from equal-length columns.
    pub fn from_columns(columns: &[Vec<f64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        Self {
            rows,
            cols: columns.len(),
            data: columns.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (j, &coef) in v.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.column(j)) {
                *o += coef * x;
            }
        }
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    // Scaled to avoid overflow on large-magnitude regressors.
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Column `column` lies (numerically) in the span of the earlier columns;
/// `combination` lists the earlier columns with non-negligible weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDeficiency {
    pub column: usize,
    pub combination: Vec<usize>,
}

/// Least-squares solution with the pieces needed for inference.
#[derive(Debug, Clone)]
pub struct QrSolution {
    pub coefficients: Vec<f64>,
    /// `Q^T y`, first `k` entries align with `R`.
    pub qty: Vec<f64>,
    /// Upper-triangular `k x k` factor, row-major.
    pub r: Vec<Vec<f64>>,
}

impl QrSolution {
    /// Diagonal of `(X^T X)^{-1} = R^{-1} R^{-T}`.
    pub fn unscaled_variances(&self) -> Vec<f64> {
        let k = self.r.len();
        let rinv = invert_upper(&self.r);
        (0..k)
            .map(|i| (i..k).map(|j| rinv[i][j] * rinv[i][j]).sum())
            .collect()
    }
}

/// Relative threshold below which a column's residual norm marks it as
/// linearly dependent on the preceding columns.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Solves `min ||X b - y||` by Householder QR without pivoting.
pub fn qr_least_squares(x: &Matrix, y: &[f64]) -> Result<QrSolution, RankDeficiency> {
    let (n, k) = (x.rows(), x.cols());
    assert_eq!(y.len(), n, "response length mismatch");
    let col_norms: Vec<f64> = (0..k).map(|j| norm(x.column(j))).collect();
    let mut a = x.clone();
    let mut qty = y.to_vec();
    let mut r = vec![vec![0.0; k]; k];

    for j in 0..k.min(n) {
        let alpha = norm(&a.column(j)[j..]);
        if alpha <= RANK_TOLERANCE * col_norms[j] || col_norms[j] == 0.0 {
            return Err(RankDeficiency {
                column: j,
                combination: dependency(&r, &a, j),
            });
        }
        let col = a.column(j);
        let sign = if col[j] >= 0.0 { 1.0 } else { -1.0 };
        let mut v: Vec<f64> = col[j..].to_vec();
        v[0] += sign * alpha;
        let vnorm2 = dot(&v, &v);

        // Apply H = I - 2 v v^T / (v^T v) to trailing columns and to y.
        for c in j..k {
            let colc = &mut a.column_mut(c)[j..];
            let f = 2.0 * dot(&v, colc) / vnorm2;
            for (x, vi) in colc.iter_mut().zip(&v) {
                *x -= f * vi;
            }
        }
        let f = 2.0 * dot(&v, &qty[j..]) / vnorm2;
        for (x, vi) in qty[j..].iter_mut().zip(&v) {
            *x -= f * vi;
        }
        for (c, row) in (j..k).zip(r[j][j..].iter_mut()) {
            *row = a.get(j, c);
        }
    }
    if n < k {
        return Err(RankDeficiency {
            column: n,
            combination: (0..n).collect(),
        });
    }

    let coefficients = back_substitute(&r, &qty[..k]);
    Ok(QrSolution {
        coefficients,
        qty,
        r,
    })
}

/// Expresses column `j` through the first `j` columns using the partial
/// factorisation, returning the indices with non-negligible weight.
fn dependency(r: &[Vec<f64>], a: &Matrix, j: usize) -> Vec<usize> {
    if j == 0 {
        return Vec::new();
    }
    let sub: Vec<Vec<f64>> = r[..j].iter().map(|row| row[..j].to_vec()).collect();
    let rhs: Vec<f64> = (0..j).map(|i| a.get(i, j)).collect();
    let w = back_substitute(&sub, &rhs);
    let scale = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    w.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > 1e-8 * scale.max(1e-300))
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn back_substitute(r: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let k = b.len();
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| r[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / r[i][i];
    }
    x
}

fn invert_upper(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = r.len();
    let mut inv = vec![vec![0.0; k]; k];
    for col in 0..k {
        let mut e = vec![0.0; k];
        e[col] = 1.0;
        let x = back_substitute(r, &e);
        for row in 0..k {
            inv[row][col] = x[row];
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_system() {
        let x = Matrix::from_columns(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let sol = qr_least_squares(&x, &[5.0, 10.0]).unwrap();
        assert!((sol.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((sol.coefficients[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn detects_dependent_column() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b = vec![0.0, 1.0, 0.0, 1.0];
        let c: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - y).collect();
        let x = Matrix::from_columns(&[a, b, c]);
        let err = qr_least_squares(&x, &[1.0, 2.0, 3.0, 4.0]).unwrap_err();
        assert_eq!(err.column, 2);
        assert_eq!(err.combination, vec![0, 1]);
    }

    #[test]
    fn zero_column_is_deficient() {
        let x = Matrix::from_columns(&[vec![1.0; 3], vec![0.0; 3]]);
        let err = qr_least_squares(&x, &[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(err.column, 1);
        assert!(err.combination.is_empty());
    }

    #[test]
    fn unscaled_variances_match_direct_inverse() {
        // X^T X = [[3, 3], [3, 5]] -> inverse diag = [5/6, 3/6]
        let x = Matrix::from_columns(&[vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]]);
        let sol = qr_least_squares(&x, &[0.0, 1.0, 2.0]).unwrap();
        let v = sol.unscaled_variances();
        assert!((v[0] - 5.0 / 6.0).abs() < 1e-12);
        assert!((v[1] - 0.5).abs() < 1e-12);
    }
}
