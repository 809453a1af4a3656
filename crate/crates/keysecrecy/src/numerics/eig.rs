//! Eigendecomposition of complex Hermitian matrices.
//!
//! The solver runs cyclic Jacobi sweeps on the `2n x 2n` real-symmetric
//! embedding `[[A, -B], [B, A]]` of `H = A + iB`. Each complex eigenpair of
//! `H` appears twice in the embedding (the two real vectors `[x; y]` and
//! `[-y; x]` both map to the complex eigenvector `x + iy` up to phase), so
//! `n` complex eigenvectors are recovered from the `2n` real ones by a
//! max-residual Gram-Schmidt pass. Deterministic: no pivot randomization,
//! ties broken by index.

use num_complex::Complex64;

use crate::numerics::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tolerance;

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; `eigenvectors[k]` is the unit-norm
/// eigenvector for `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl Eigendecomposition {
    /// Reassemble `sum_k lambda_k |v_k><v_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.first().map_or(0, Vec::len);
        let mut m = ComplexMatrix::zeros(n, n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    let add = v[i] * v[j].conj() * *lambda;
                    m.set(i, j, m.get(i, j) + add);
                }
            }
        }
        m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, sorted descending.
pub fn eig_hermitian(m: &HermitianMatrix) -> Eigendecomposition {
    let n = m.dim();
    if n == 0 {
        return Eigendecomposition {
            eigenvalues: vec![],
            eigenvectors: vec![],
        };
    }
    // Real-symmetric embedding of H = A + iB.
    let mut a = vec![0.0f64; 4 * n * n];
    let dim = 2 * n;
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            a[i * dim + j] = z.re;
            a[i * dim + (j + n)] = -z.im;
            a[(i + n) * dim + j] = z.im;
            a[(i + n) * dim + (j + n)] = z.re;
        }
    }
    let v = jacobi_real_symmetric(&mut a, dim);

    // Candidate complex eigenpairs from the embedding columns.
    let mut candidates: Vec<(f64, Vec<Complex64>)> = (0..dim)
        .map(|col| {
            let lambda = a[col * dim + col];
            let vec: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(v[i * dim + col], v[(i + n) * dim + col]))
                .collect();
            (lambda, vec)
        })
        .collect();
    candidates.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    // Max-residual selection: each accepted vector has residual norm at least
    // 1/sqrt(dim) before normalization, so no candidate is normalized from
    // numerical noise.
    let mut residuals: Vec<Vec<Complex64>> = candidates.iter().map(|(_, v)| v.clone()).collect();
    let mut used = vec![false; dim];
    let mut accepted: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = usize::MAX;
        let mut best_norm = -1.0;
        for (idx, r) in residuals.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let norm: f64 = r.iter().map(|z| z.norm_sqr()).sum();
            if norm > best_norm {
                best_norm = norm;
                best = idx;
            }
        }
        used[best] = true;
        let mut vec = residuals[best].clone();
        // Second orthogonalization pass against everything already accepted.
        for (_, w) in &accepted {
            let overlap = inner(w, &vec);
            for (x, y) in vec.iter_mut().zip(w) {
                *x -= overlap * y;
            }
        }
        normalize(&mut vec);
        for (idx, r) in residuals.iter_mut().enumerate() {
            if !used[idx] {
                let overlap = inner(&vec, r);
                for (x, y) in r.iter_mut().zip(&vec) {
                    *x -= overlap * y;
                }
            }
        }
        accepted.push((candidates[best].0, vec));
    }
    accepted.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    Eigendecomposition {
        eigenvalues: accepted.iter().map(|(l, _)| *l).collect(),
        eigenvectors: accepted.into_iter().map(|(_, v)| v).collect(),
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [Complex64]) {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v {
        *z /= norm;
    }
}

/// Cyclic Jacobi on a dense real-symmetric matrix (row-major, dim x dim).
/// Returns the accumulated rotation matrix; `a`'s diagonal holds eigenvalues.
fn jacobi_real_symmetric(a: &mut [f64], dim: usize) -> Vec<f64> {
    let mut v = vec![0.0f64; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    for _sweep in 0..tolerance::JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off = off.max(a[p * dim + q].abs());
            }
        }
        if off < tolerance::JACOBI_OFF_DIAGONAL {
            break;
        }
        for p in 0..dim.saturating_sub(1) {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                // tan of the rotation angle, the root of t^2 + 2t*theta - 1
                // smaller in magnitude; stable for large |theta|.
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * dim + p] = app - t * apq;
                a[q * dim + q] = aqq + t * apq;
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
                for k in 0..dim {
                    if k != p && k != q {
                        let akp = a[k * dim + p];
                        let akq = a[k * dim + q];
                        let new_kp = akp - s * (akq + tau * akp);
                        let new_kq = akq + s * (akp - tau * akq);
                        a[k * dim + p] = new_kp;
                        a[p * dim + k] = new_kp;
                        a[k * dim + q] = new_kq;
                        a[q * dim + k] = new_kq;
                    }
                }
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = vkp - s * (vkq + tau * vkp);
                    v[k * dim + q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }
    v
}

/// A common (approximate) eigenbasis for a family of pairwise-commuting
/// Hermitian matrices, obtained by refining eigenspaces matrix by matrix.
/// For genuinely commuting inputs the returned vectors diagonalize every
/// matrix in the family.
pub fn common_eigenbasis(mats: &[&HermitianMatrix], dim: usize) -> Vec<Vec<Complex64>> {
    let mut blocks: Vec<Vec<Vec<Complex64>>> = vec![(0..dim)
        .map(|i| {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[i] = Complex64::new(1.0, 0.0);
            e
        })
        .collect()];
    for m in mats {
        let mut next = Vec::new();
        for block in &blocks {
            if block.len() == 1 {
                next.push(block.clone());
                continue;
            }
            let k = block.len();
            // Compress m into the block and diagonalize there.
            let compressed = ComplexMatrix::from_fn(k, k, |r, c| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..dim {
                    let mut mv = Complex64::new(0.0, 0.0);
                    for (j, bj) in block[c].iter().enumerate() {
                        mv += m.get(i, j) * bj;
                    }
                    acc += block[r][i].conj() * mv;
                }
                acc
            })
            .hermitian_part();
            let eig = eig_hermitian(&compressed);
            // Rotate block vectors and split by eigenvalue cluster.
            let rotated: Vec<Vec<Complex64>> = eig
                .eigenvectors
                .iter()
                .map(|w| {
                    (0..dim)
                        .map(|i| (0..k).map(|c| block[c][i] * w[c]).sum())
                        .collect()
                })
                .collect();
            let mut start = 0;
            for idx in 1..=k {
                let split = idx == k
                    || (eig.eigenvalues[idx - 1] - eig.eigenvalues[idx]).abs()
                        > tolerance::EIGENVALUE_CLUSTER;
                if split {
                    next.push(rotated[start..idx].to_vec());
                    start = idx;
                }
            }
        }
        blocks = next;
        if blocks.iter().all(|b| b.len() == 1) {
            break;
        }
    }
    blocks.into_iter().flatten().collect()
}
