//! Small dense linear-algebra kernels.
//!
//! Everything here operates on `f64` slices and a minimal row-major matrix.
//! The one non-trivial routine is [`ls_residual`]: the orthogonal-projection
//! residual computed through a column-pivoted Householder QR, which is what
//! the greedy pursuit uses for its residual updates.

/// Relative rank tolerance for the least-squares factorization: a pivot
/// column whose remaining norm falls below `RANK_TOL * max column norm`
/// is treated as linearly dependent and dropped from the basis.
pub const RANK_TOL: f64 = 1e-10;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `self * x` for a length-`cols` vector.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

/// `y - P y`, where `P` projects onto the column span of `cols`.
///
/// Factorizes the columns with Householder reflections and column pivoting;
/// columns whose remaining norm falls below `RANK_TOL * max column norm`
/// are dropped rather than inverted, so rank-deficient sets never abort.
/// The result is orthogonal to every input column up to rounding.
pub fn ls_residual(cols: &[&[f64]], y: &[f64]) -> Vec<f64> {
    let m = y.len();
    let k = cols.len();
    assert!(k >= 1, "ls_residual needs at least one column");
    for c in cols {
        assert_eq!(c.len(), m, "column length must match y");
    }

    let mut a: Vec<Vec<f64>> = cols.iter().map(|c| c.to_vec()).collect();
    let mut u = y.to_vec();

    let max_norm = a.iter().map(|c| norm(c)).fold(0.0f64, f64::max);
    if max_norm == 0.0 {
        return u; // all-zero basis spans nothing
    }
    let tol = RANK_TOL * max_norm;

    // reflections[(j, v, vnorm2)]: Householder vector acting on rows j..m
    let mut reflections: Vec<(usize, Vec<f64>, f64)> = Vec::new();

    for j in 0..k.min(m) {
        // pivot: remaining column with the largest norm below row j
        let (pivot, pivot_norm) =
            (j..k)
                .map(|c| (c, norm(&a[c][j..])))
                .fold(
                    (j, -1.0),
                    |best, cand| if cand.1 > best.1 { cand } else { best },
                );
        if pivot_norm <= tol {
            break;
        }
        a.swap(j, pivot);

        let mut v = a[j][j..].to_vec();
        let alpha = if v[0] >= 0.0 { -pivot_norm } else { pivot_norm };
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 > 0.0 {
            for c in a.iter_mut().skip(j + 1) {
                apply_reflection(&v, vnorm2, &mut c[j..]);
            }
            apply_reflection(&v, vnorm2, &mut u[j..]);
        }
        reflections.push((j, v, vnorm2));
    }

    // u = Q^T y; zero the basis coordinates, then map back: e = Q [0; tail]
    let rank = reflections.len();
    for ui in u.iter_mut().take(rank) {
        *ui = 0.0;
    }
    for (j, v, vnorm2) in reflections.iter().rev() {
        if *vnorm2 > 0.0 {
            apply_reflection(v, *vnorm2, &mut u[*j..]);
        }
    }
    u
}

#[inline]
fn apply_reflection(v: &[f64], vnorm2: f64, x: &mut [f64]) {
    let scale = 2.0 * dot(v, x) / vnorm2;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= scale * vi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    fn randn(rng: &mut impl rand::Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| StandardNormal.sample(rng)).collect()
    }

    #[test]
    fn residual_zero_when_y_in_span() {
        let c0 = vec![1.0, 2.0, -1.0, 0.5];
        let c1 = vec![0.0, 1.0, 3.0, -2.0];
        let y: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| 1.7 * a - 0.3 * b).collect();
        let e = ls_residual(&[&c0, &c1], &y);
        assert!(norm(&e) < 1e-10, "norm = {}", norm(&e));
    }

    #[test]
    fn rank_one_projection_formula() {
        let h = {
            let raw = vec![0.5, -0.5, 0.5, 0.5];
            let n = norm(&raw);
            raw.iter().map(|x| x / n).collect::<Vec<_>>()
        };
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let e = ls_residual(&[&h], &y);
        let hy = dot(&h, &y);
        for i in 0..4 {
            assert!((e[i] - (y[i] - hy * h[i])).abs() < 1e-12);
        }
    }

    // Independent oracle: solve the 3x3 normal equations by Gaussian
    // elimination and form the residual directly. Index-heavy on purpose,
    // to stay textbook-readable.
    #[allow(clippy::needless_range_loop)]
    fn normal_equations_residual(cols: &[&[f64]], y: &[f64]) -> Vec<f64> {
        let k = cols.len();
        let mut g = vec![vec![0.0; k + 1]; k];
        for i in 0..k {
            for j in 0..k {
                g[i][j] = dot(cols[i], cols[j]);
            }
            g[i][k] = dot(cols[i], y);
        }
        for p in 0..k {
            let piv = (p..k)
                .max_by(|&a, &b| g[a][p].abs().total_cmp(&g[b][p].abs()))
                .unwrap();
            g.swap(p, piv);
            for r in 0..k {
                if r != p {
                    let f = g[r][p] / g[p][p];
                    for c in p..=k {
                        g[r][c] -= f * g[p][c];
                    }
                }
            }
        }
        let coef: Vec<f64> = (0..k).map(|i| g[i][k] / g[i][i]).collect();
        let mut e = y.to_vec();
        for (ci, col) in coef.iter().zip(cols) {
            for (ei, v) in e.iter_mut().zip(*col) {
                *ei -= ci * v;
            }
        }
        e
    }

    #[test]
    fn matches_normal_equations_and_is_orthogonal() {
        let mut rng = crate::rng::substream(11, 0, crate::rng::Stream::Noise);
        for _ in 0..20 {
            let c0 = randn(&mut rng, 20);
            let c1 = randn(&mut rng, 20);
            let c2 = randn(&mut rng, 20);
            let y = randn(&mut rng, 20);
            let cols = [c0.as_slice(), c1.as_slice(), c2.as_slice()];
            let e = ls_residual(&cols, &y);
            for c in &cols {
                assert!(dot(c, &e).abs() < 1e-10, "not orthogonal: {}", dot(c, &e));
            }
            let oracle = normal_equations_residual(&cols, &y);
            for (a, b) in e.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn duplicated_column_is_dropped_not_fatal() {
        let mut rng = crate::rng::substream(12, 0, crate::rng::Stream::Noise);
        let c0 = randn(&mut rng, 12);
        let dup = c0.clone();
        let y = randn(&mut rng, 12);
        let e_pair = ls_residual(&[&c0, &dup], &y);
        let e_single = ls_residual(&[&c0], &y);
        for (a, b) in e_pair.iter().zip(&e_single) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn residual_never_longer_than_input() {
        let mut rng = crate::rng::substream(13, 0, crate::rng::Stream::Noise);
        for trial in 0..10 {
            let k = 1 + (trial % 4);
            let cols: Vec<Vec<f64>> = (0..k).map(|_| randn(&mut rng, 16)).collect();
            let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
            let y = randn(&mut rng, 16);
            let e = ls_residual(&refs, &y);
            assert!(norm(&e) <= norm(&y) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn matvec_and_indexing() {
        let mut m = Mat::zeros(2, 3);
        m[(0, 0)] = 1.0;
        m[(0, 2)] = 2.0;
        m[(1, 1)] = -3.0;
        let y = m.matvec(&[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![7.0, -6.0]);
        assert_eq!(m.row(1), &[0.0, -3.0, 0.0]);
    }
}
