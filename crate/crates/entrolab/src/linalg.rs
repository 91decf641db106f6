//! Internal complex linear-algebra helpers shared by the state and optimizer
//! modules: Hermitian spectra with block-diagonal splitting, matrix
//! exponentials of Hermitian generators, and isometry construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Off-diagonal magnitudes at or below this threshold are treated as exact
/// zeros when splitting a Hermitian matrix into independent blocks. Dropping
/// them perturbs eigenvalues by at most `n * BLOCK_EPS`, far below every
/// tolerance used in this crate.
const BLOCK_EPS: f64 = 1e-14;

/// Matrices up to this side length skip block detection; a direct eigensolve
/// is cheaper than the scan.
const SMALL_DIRECT: usize = 32;

pub fn ci(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Eigenvalues of a Hermitian matrix, in no particular order.
///
/// The matrix is first split into connected components of its nonzero
/// pattern; each block is eigensolved independently. Block-diagonal inputs
/// (classical-quantum states, diagonal states) therefore cost far less than a
/// dense solve of the full side length.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigenvalues needs a square matrix");
    if n == 0 {
        return Vec::new();
    }
    if n <= SMALL_DIRECT {
        return m.clone().symmetric_eigenvalues().iter().copied().collect();
    }

    let mut uf = UnionFind::new(n);
    for j in 0..n {
        for i in (j + 1)..n {
            if m[(i, j)].norm_sqr() > BLOCK_EPS * BLOCK_EPS {
                uf.union(i, j);
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        groups[uf.find(i)].push(i);
    }

    let mut eigs = Vec::with_capacity(n);
    for group in groups.iter().filter(|g| !g.is_empty()) {
        if group.len() == 1 {
            eigs.push(m[(group[0], group[0])].re);
        } else {
            let sub = CMat::from_fn(group.len(), group.len(), |a, b| m[(group[a], group[b])]);
            eigs.extend(sub.symmetric_eigenvalues().iter().copied());
        }
    }
    eigs
}

/// Full eigendecomposition of a Hermitian matrix: eigenvalues descending,
/// eigenvectors as matrix columns in matching order, each column's phase
/// fixed so its first entry of magnitude above `1e-12` is real positive.
pub fn hermitian_eigen_sorted(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: CVec = se.eigenvectors.column(src).into_owned();
        fix_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// Rotates a vector by a global phase so its first entry of magnitude above
/// `1e-12` becomes real positive.
pub fn fix_phase(v: &mut CVec) {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12) {
        let phase = lead / lead.norm();
        let correction = phase.conj();
        for z in v.iter_mut() {
            *z *= correction;
        }
    }
}

/// `exp(i H)` for a Hermitian `H`, computed through its eigendecomposition.
/// The result is unitary up to eigensolver accuracy.
pub fn unitary_from_generator(h: &CMat) -> CMat {
    let n = h.nrows();
    let se = nalgebra::SymmetricEigen::new(h.clone());
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        let phase = ci(0.0, se.eigenvalues[k]).exp();
        let col = se.eigenvectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += phase * col[i] * col[j].conj();
            }
        }
    }
    out
}

/// Builds a Hermitian matrix of side `n` from `n*n` real parameters:
/// diagonal entries first, then (re, im) pairs for the strict upper triangle.
pub fn hermitian_from_params(n: usize, params: &[f64]) -> CMat {
    assert_eq!(params.len(), n * n, "hermitian generator needs n^2 parameters");
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = cr(params[i]);
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = ci(params[k], params[k + 1]);
            k += 2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// First `cols` columns of `exp(i H)`: an isometry from `C^cols` into `C^n`.
pub fn isometry_from_generator(n: usize, cols: usize, params: &[f64]) -> CMat {
    assert!(cols <= n, "isometry cannot widen");
    let u = unitary_from_generator(&hermitian_from_params(n, params));
    u.columns(0, cols).into_owned()
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Squared Frobenius norm.
pub fn frobenius_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Maximum entrywise magnitude of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
