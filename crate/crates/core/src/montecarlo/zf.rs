use num_complex::Complex64;

use super::channel::CMatrix;
use crate::error::{Error, Result};

/// Smallest admissible pivot of the excluded columns, relative to the
/// largest column norm.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A unit-norm row vector q applied as q·h = Σ_i q_i h_i.
#[derive(Debug, Clone, PartialEq)]
pub struct ZfVector {
    coefficients: Vec<Complex64>,
}

impl ZfVector {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn apply(&self, column: &[Complex64]) -> Complex64 {
        dot(&self.coefficients, column)
    }
}

/// Zero-forcing vector for stream `j` of `h_self` (M × k).
///
/// Returns the normalized projection of column j onto the orthogonal
/// complement of the other k − 1 columns, so q annihilates the intra-link
/// streams and |q·h_j|² = ‖P⊥ h_j‖². For k = 1 this is the matched filter.
/// The complement basis comes from Gram–Schmidt with column pivoting; a pivot
/// below [`RANK_TOLERANCE`] times the largest column norm is reported as
/// [`Error::RankDeficient`].
pub fn zf_nulling_vector(h_self: &CMatrix, j: usize) -> Result<ZfVector> {
    let mut ws = ZfWorkspace::default();
    ws.compute(h_self, j)?;
    Ok(ZfVector {
        coefficients: ws.q.clone(),
    })
}

/// Reusable buffers for the per-trial hot path.
#[derive(Debug, Default)]
pub(crate) struct ZfWorkspace {
    basis: Vec<Complex64>,
    residual: Vec<Complex64>,
    remaining: Vec<usize>,
    pub(crate) q: Vec<Complex64>,
}

/// Σ a_i b_i, no conjugation.
#[inline]
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x * y)
}

/// Σ conj(a_i) b_i.
#[inline]
fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

#[inline]
fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum()
}

/// v ← v − e (e^H v) for every orthonormal column e of `basis`.
fn project_out(basis: &[Complex64], rows: usize, v: &mut [Complex64]) {
    for e in basis.chunks_exact(rows) {
        let c = inner(e, v);
        v.iter_mut().zip(e).for_each(|(x, ei)| *x -= c * ei);
    }
}

impl ZfWorkspace {
    /// Leaves the zero-forcing vector for stream `j` in `self.q` and returns
    /// the captured signal power |q·h_j|².
    pub(crate) fn compute(&mut self, h: &CMatrix, j: usize) -> Result<f64> {
        let rows = h.rows();
        let k = h.cols();
        assert!(j < k, "stream index {j} out of range for {k} columns");
        assert!(k <= rows, "more streams than antennas");

        self.basis.clear();
        self.residual.clear();
        self.remaining.clear();
        let mut largest = 0.0f64;
        for c in (0..k).filter(|&c| c != j) {
            self.residual.extend_from_slice(h.column(c));
            self.remaining.push(self.remaining.len());
            largest = largest.max(norm_sqr(h.column(c)));
        }
        let largest = largest.sqrt();

        while !self.remaining.is_empty() {
            let (slot, norm) = self
                .remaining
                .iter()
                .enumerate()
                .map(|(slot, &c)| (slot, norm_sqr(&self.residual[c * rows..(c + 1) * rows]).sqrt()))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if norm <= RANK_TOLERANCE * largest {
                return Err(Error::RankDeficient {
                    ratio: if largest > 0.0 { norm / largest } else { 0.0 },
                });
            }
            let pivot = self.remaining.swap_remove(slot);
            let start = self.basis.len();
            self.basis
                .extend(self.residual[pivot * rows..(pivot + 1) * rows].iter().map(|z| z / norm));
            let e = start..start + rows;
            for &c in &self.remaining {
                let col = &mut self.residual[c * rows..(c + 1) * rows];
                let coeff = inner(&self.basis[e.clone()], col);
                col.iter_mut()
                    .zip(&self.basis[e.clone()])
                    .for_each(|(x, ei)| *x -= coeff * ei);
            }
        }

        self.q.clear();
        self.q.extend_from_slice(h.column(j));
        // Two passes keep the result orthogonal to working precision.
        project_out(&self.basis, rows, &mut self.q);
        project_out(&self.basis, rows, &mut self.q);
        let power = norm_sqr(&self.q);
        let norm = power.sqrt();
        let scale = norm_sqr(h.column(j)).sqrt();
        if !(norm > RANK_TOLERANCE * scale) {
            return Err(Error::RankDeficient {
                ratio: if scale > 0.0 { norm / scale } else { 0.0 },
            });
        }
        // Row vector q = (P⊥ h_j)^H / ‖P⊥ h_j‖.
        self.q.iter_mut().for_each(|z| *z = z.conj() / norm);
        Ok(power)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{block_rng, CMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_stream_is_matched_filter() {
        let mut h = CMatrix::zeros(4, 1);
        h.fill_gaussian(&mut block_rng(3, 0));
        let q = zf_nulling_vector(&h, 0).unwrap();
        let gain = q.apply(h.column(0)).norm_sqr();
        assert!((gain - norm_sqr(h.column(0))).abs() < 1e-12 * gain);
        assert!((norm_sqr(q.coefficients()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_columns() {
        let h = CMatrix::from_columns(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let q = zf_nulling_vector(&h, 0).unwrap();
        assert!((q.coefficients()[0].norm() - 1.0).abs() < 1e-15);
        assert!(q.coefficients()[1].norm() < 1e-15);
        assert!((q.apply(h.column(0)).norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_rank_square_gram_check() {
        let mut rng = block_rng(5, 0);
        for m in 1..=8 {
            for _ in 0..50 {
                let mut h = CMatrix::zeros(m, m);
                h.fill_gaussian(&mut rng);
                for j in 0..m {
                    let q = zf_nulling_vector(&h, j).unwrap();
                    assert!((norm_sqr(q.coefficients()) - 1.0).abs() < 1e-12);
                    for i in (0..m).filter(|&i| i != j) {
                        assert!(q.apply(h.column(i)).norm() <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn rank_deficient_excluded_columns() {
        let a = vec![c(1.0, 0.5), c(-0.3, 0.2), c(0.1, 0.0)];
        let b: Vec<Complex64> = a.iter().map(|z| z * c(2.0, -1.0)).collect();
        let h = CMatrix::from_columns(&[vec![c(0.0, 1.0), c(1.0, 0.0), c(0.5, 0.5)], a, b]);
        assert!(matches!(zf_nulling_vector(&h, 0), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn signal_in_excluded_span_is_degenerate() {
        let a = vec![c(1.0, 0.5), c(-0.3, 0.2)];
        let h = CMatrix::from_columns(&[a.clone(), a]);
        assert!(matches!(zf_nulling_vector(&h, 0), Err(Error::RankDeficient { .. })));
    }
}
