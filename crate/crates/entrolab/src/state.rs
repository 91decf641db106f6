//! Labeled multipartite quantum states and the primitives every measure is
//! built from: tensor products, partial traces, entropies, distances,
//! purifications and channel application.
//!
//! A [`SystemLayout`] names the tensor factors and fixes their order; the
//! order is significant and never silently permuted. [`DensityMatrix`] and
//! [`PureState`] pair a layout with validated matrix/vector data, and
//! [`KrausChannel`] represents a completely positive trace-preserving map in
//! Kraus form. All entropic quantities are in bits (logarithms base 2).

use crate::linalg::{self, ci, cr, CMat, CVec, C64};
use crate::{Error, Result};

/// Validation tolerance for Hermiticity / unit trace / positivity claims on
/// stored states.
pub const STATE_TOL: f64 = 1e-9;
/// Inputs whose Hermitian asymmetry or trace deviation exceeds this are
/// rejected instead of repaired.
const ACCEPT_TOL: f64 = 1e-7;
/// Eigenvalues at or below this floor contribute nothing to entropies and do
/// not count toward supports or ranks in entropy computations.
pub const ENTROPY_FLOOR: f64 = 1e-12;
/// Eigenvalue threshold for rank detection (purification ancilla sizing).
pub const RANK_EPS: f64 = 1e-10;
/// Total-dimension cap for state constructors.
pub const CONSTRUCTOR_DIM_CAP: usize = 1 << 14;

/// An ordered sequence of uniquely labeled tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemLayout {
    subsystems: Vec<(String, usize)>,
}

impl SystemLayout {
    /// Builds a layout from `(label, dim)` pairs. Labels must be unique and
    /// nonempty, dimensions at least 1.
    pub fn new<I, S>(subsystems: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let subsystems: Vec<(String, usize)> =
            subsystems.into_iter().map(|(l, d)| (l.into(), d)).collect();
        for (label, dim) in &subsystems {
            if label.is_empty() {
                return Err(Error::BadParams("empty subsystem label".into()));
            }
            if *dim == 0 {
                return Err(Error::BadParams(format!("subsystem {label} has dimension 0")));
            }
        }
        for (i, (label, _)) in subsystems.iter().enumerate() {
            if subsystems[i + 1..].iter().any(|(other, _)| other == label) {
                return Err(Error::LabelClash(label.clone()));
            }
        }
        Ok(Self { subsystems })
    }

    /// Convenience constructor for uniform local dimension: labels with the
    /// same `dim` each.
    pub fn uniform<S: Into<String>>(labels: impl IntoIterator<Item = S>, dim: usize) -> Result<Self> {
        Self::new(labels.into_iter().map(|l| (l, dim)))
    }

    pub fn subsystems(&self) -> &[(String, usize)] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.subsystems.iter().map(|(_, d)| d).product()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.subsystems.iter().map(|(l, _)| l.as_str())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|(_, d)| *d).collect()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|(l, _)| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().find(|(l, _)| l == label).map(|(_, d)| *d)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().position(|(l, _)| l == label)
    }

    /// Positions of the given labels in layout order, deduplicated.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut positions = Vec::with_capacity(labels.len());
        for label in labels {
            let p = self
                .position(label.as_ref())
                .ok_or_else(|| Error::UnknownLabel(label.as_ref().to_string()))?;
            if !positions.contains(&p) {
                positions.push(p);
            }
        }
        positions.sort_unstable();
        Ok(positions)
    }

    /// Concatenation with another layout; labels must stay unique.
    pub fn concat(&self, other: &SystemLayout) -> Result<SystemLayout> {
        for (label, _) in &other.subsystems {
            if self.contains(label) {
                return Err(Error::LabelClash(label.clone()));
            }
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        Ok(SystemLayout { subsystems })
    }

    /// This layout with one extra factor appended.
    pub fn with_appended(&self, label: &str, dim: usize) -> Result<SystemLayout> {
        self.concat(&SystemLayout::new([(label, dim)])?)
    }

    /// A label not present in the layout: `base` itself if free, otherwise
    /// `base0`, `base1`, ….
    pub fn fresh_label(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        (0..)
            .map(|i| format!("{base}{i}"))
            .find(|candidate| !self.contains(candidate))
            .expect("unbounded candidate stream")
    }

    /// Row-major strides of each factor.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        strides
    }
}

/// Flat index offsets contributed by the factors at `positions`, enumerated
/// row-major over those factors in the given order.
pub(crate) fn axis_offsets(dims: &[usize], strides: &[usize], positions: &[usize]) -> Vec<usize> {
    let sizes: Vec<usize> = positions.iter().map(|&p| dims[p]).collect();
    let count: usize = sizes.iter().product();
    let mut offsets = vec![0usize; count.max(1)];
    if positions.is_empty() {
        return offsets;
    }
    let mut digits = vec![0usize; positions.len()];
    for offset in offsets.iter_mut() {
        *offset = digits
            .iter()
            .zip(positions)
            .map(|(&digit, &p)| digit * strides[p])
            .sum();
        for axis in (0..digits.len()).rev() {
            digits[axis] += 1;
            if digits[axis] < sizes[axis] {
                break;
            }
            digits[axis] = 0;
        }
    }
    offsets
}

/// A validated multipartite mixed state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    layout: SystemLayout,
    matrix: CMat,
}

impl DensityMatrix {
    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Constructor for matrices that are valid by construction. Debug builds
    /// verify the cheap invariants.
    pub(crate) fn from_parts_unchecked(layout: SystemLayout, matrix: CMat) -> Self {
        debug_assert_eq!(layout.total_dim(), matrix.nrows());
        debug_assert!((matrix.trace().re - 1.0).abs() < 1e-6);
        Self { layout, matrix }
    }

    /// Full invariant check: Hermiticity, unit trace and positive
    /// semidefiniteness within [`STATE_TOL`].
    pub fn validate(&self) -> Result<()> {
        let asym = hermitian_asymmetry(&self.matrix);
        if asym > STATE_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let trace = self.matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceNotOne(trace));
        }
        let min_eig = linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(())
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        linalg::frobenius_sq(&self.matrix)
    }

    /// Rank at the [`RANK_EPS`] eigenvalue threshold.
    pub fn rank(&self) -> usize {
        linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .filter(|&l| l > RANK_EPS)
            .count()
    }
}

fn hermitian_asymmetry(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Validates and normalizes a raw matrix into a [`DensityMatrix`].
///
/// The input is symmetrized to `(M + M†)/2` when its asymmetry is within the
/// acceptance window; eigenvalues in `[-1e-9, 0)` are clamped to zero and the
/// spectrum renormalized to unit trace.
pub fn make_density(layout: SystemLayout, matrix: CMat) -> Result<DensityMatrix> {
    let n = layout.total_dim();
    if matrix.nrows() != n || matrix.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, layout total dimension is {n}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if n > CONSTRUCTOR_DIM_CAP {
        return Err(Error::TooLarge(format!(
            "total dimension {n} exceeds constructor cap {CONSTRUCTOR_DIM_CAP}"
        )));
    }
    let asym = hermitian_asymmetry(&matrix);
    if asym > ACCEPT_TOL {
        return Err(Error::NotHermitian(asym));
    }
    let mut sym = CMat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            sym[(i, j)] = (matrix[(i, j)] + matrix[(j, i)].conj()) * cr(0.5);
        }
    }
    let trace = sym.trace().re;
    if (trace - 1.0).abs() > ACCEPT_TOL {
        return Err(Error::TraceNotOne(trace));
    }
    let eigs = linalg::hermitian_eigenvalues(&sym);
    let min_eig = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < -STATE_TOL {
        return Err(Error::NotPositive(min_eig));
    }
    if min_eig < 0.0 {
        // Clamp the small negative tail; this needs eigenvectors.
        let (values, vectors) = linalg::hermitian_eigen_sorted(&sym);
        let clamped: Vec<f64> = values.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        let mut rebuilt = CMat::zeros(n, n);
        for (k, &l) in clamped.iter().enumerate() {
            if l == 0.0 {
                continue;
            }
            let col = vectors.column(k);
            let w = cr(l / total);
            for j in 0..n {
                let cj = col[j].conj() * w;
                for i in 0..n {
                    rebuilt[(i, j)] += col[i] * cj;
                }
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(layout, rebuilt))
    } else {
        let scale = cr(1.0 / trace);
        Ok(DensityMatrix::from_parts_unchecked(layout, sym * scale))
    }
}

/// Kronecker product of two states with disjoint label sets.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let layout = a.layout.concat(&b.layout)?;
    if layout.total_dim() > CONSTRUCTOR_DIM_CAP {
        return Err(Error::TooLarge(format!(
            "tensor product dimension {} exceeds cap {CONSTRUCTOR_DIM_CAP}",
            layout.total_dim()
        )));
    }
    let matrix = linalg::kron(&a.matrix, &b.matrix);
    Ok(DensityMatrix::from_parts_unchecked(layout, matrix))
}

fn split_keep_rest(layout: &SystemLayout, discard: &[impl AsRef<str>]) -> Result<(Vec<usize>, Vec<usize>)> {
    let drop_positions = layout.positions(discard)?;
    if drop_positions.len() == layout.len() {
        return Err(Error::EmptyRemainder);
    }
    let keep_positions: Vec<usize> =
        (0..layout.len()).filter(|p| !drop_positions.contains(p)).collect();
    Ok((keep_positions, drop_positions))
}

fn kept_layout(layout: &SystemLayout, keep_positions: &[usize]) -> SystemLayout {
    SystemLayout {
        subsystems: keep_positions
            .iter()
            .map(|&p| layout.subsystems[p].clone())
            .collect(),
    }
}

/// Reduced state on the labels not listed in `discard`, order preserved.
pub fn partial_trace(rho: &DensityMatrix, discard: &[impl AsRef<str>]) -> Result<DensityMatrix> {
    let layout = &rho.layout;
    let (keep_positions, drop_positions) = split_keep_rest(layout, discard)?;
    let dims = layout.dims();
    let strides = layout.strides();
    let keep_offsets = axis_offsets(&dims, &strides, &keep_positions);
    let drop_offsets = axis_offsets(&dims, &strides, &drop_positions);
    let k = keep_offsets.len();
    let n = rho.matrix.nrows();
    let data = rho.matrix.as_slice(); // column-major
    let mut out = CMat::zeros(k, k);
    for (col, &oc) in keep_offsets.iter().enumerate() {
        for (row, &or) in keep_offsets.iter().enumerate() {
            let mut acc = C64::default();
            for &od in &drop_offsets {
                acc += data[(or + od) + (oc + od) * n];
            }
            out[(row, col)] = acc;
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(
        kept_layout(layout, &keep_positions),
        out,
    ))
}

/// Von Neumann entropy in bits.
///
/// Eigenvalues at or below [`ENTROPY_FLOOR`] contribute zero. States with
/// purity within `1e-12` of 1 short-circuit to zero entropy: the largest
/// eigenvalue of a unit-trace positive matrix is at least its purity, so the
/// discrepancy is below `5e-11` bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    if rho.purity() >= 1.0 - 1e-12 {
        return 0.0;
    }
    entropy_of_spectrum(&linalg::hermitian_eigenvalues(&rho.matrix))
}

/// Entropy of a raw spectrum with the same floor rule as [`entropy`].
pub fn entropy_of_spectrum(eigs: &[f64]) -> f64 {
    -eigs
        .iter()
        .filter(|&&l| l > ENTROPY_FLOOR)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// Relative entropy `tr rho (log2 rho - log2 sigma)` in bits; `+inf` when the
/// support of `rho` is not contained in the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.layout != sigma.layout {
        return Err(Error::DimensionMismatch(
            "relative entropy needs operands with identical layouts".into(),
        ));
    }
    let (lr, vr) = linalg::hermitian_eigen_sorted(&rho.matrix);
    let (ls, vs) = linalg::hermitian_eigen_sorted(&sigma.matrix);
    // overlap[i][j] = |<e_i | f_j>|^2 between rho and sigma eigenvectors.
    let cross = vr.adjoint() * &vs;
    let n = lr.len();
    let mut value = 0.0;
    let mut leak = 0.0;
    for i in 0..n {
        let li = lr[i];
        if li <= ENTROPY_FLOOR {
            continue;
        }
        value += li * li.log2();
        for j in 0..n {
            let w = cross[(i, j)].norm_sqr();
            if ls[j] > ENTROPY_FLOOR {
                value -= li * w * ls[j].log2();
            } else {
                leak += li * w;
            }
        }
    }
    if leak > 1e-9 {
        return Ok(f64::INFINITY);
    }
    Ok(value)
}

/// Unnormalized trace distance `||rho - sigma||_1`, in `[0, 2]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.layout != sigma.layout {
        return Err(Error::DimensionMismatch(
            "trace distance needs operands with identical layouts".into(),
        ));
    }
    let diff = &rho.matrix - &sigma.matrix;
    Ok(linalg::hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum())
}

/// A validated pure state vector over a layout.
#[derive(Clone, Debug)]
pub struct PureState {
    layout: SystemLayout,
    vector: CVec,
}

impl PureState {
    /// Builds a pure state; the vector norm must be within `1e-9` of 1.
    pub fn new(layout: SystemLayout, vector: CVec) -> Result<Self> {
        if vector.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs layout dimension {}",
                vector.len(),
                layout.total_dim()
            )));
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, vector })
    }

    pub(crate) fn from_parts_unchecked(layout: SystemLayout, vector: CVec) -> Self {
        debug_assert_eq!(layout.total_dim(), vector.len());
        debug_assert!((vector.norm() - 1.0).abs() < 1e-6);
        Self { layout, vector }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn vector(&self) -> &CVec {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// The rank-one density matrix of this state.
    pub fn to_density(&self) -> DensityMatrix {
        let v = &self.vector;
        let n = v.len();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            let cj = v[j].conj();
            if cj.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..n {
                m[(i, j)] = v[i] * cj;
            }
        }
        DensityMatrix::from_parts_unchecked(self.layout.clone(), m)
    }

    /// Reduced density matrix after discarding the listed labels, computed
    /// directly from the vector.
    pub fn partial_trace(&self, discard: &[impl AsRef<str>]) -> Result<DensityMatrix> {
        let (keep_positions, drop_positions) = split_keep_rest(&self.layout, discard)?;
        let dims = self.layout.dims();
        let strides = self.layout.strides();
        let keep_offsets = axis_offsets(&dims, &strides, &keep_positions);
        let drop_offsets = axis_offsets(&dims, &strides, &drop_positions);
        let k = keep_offsets.len();
        let v = &self.vector;
        let mut out = CMat::zeros(k, k);
        for (col, &oc) in keep_offsets.iter().enumerate() {
            for (row, &or) in keep_offsets.iter().enumerate() {
                let mut acc = C64::default();
                for &od in &drop_offsets {
                    acc += v[or + od] * v[oc + od].conj();
                }
                out[(row, col)] = acc;
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(
            kept_layout(&self.layout, &keep_positions),
            out,
        ))
    }
}

/// Canonical purification of `rho` on an ancilla of dimension `rank(rho)`.
///
/// Uses the eigendecomposition form: eigenvalues sorted descending, each
/// eigenvector's phase fixed, and the overall global phase chosen so the
/// first nonzero amplitude is real positive.
pub fn purify(rho: &DensityMatrix, ancilla_label: &str) -> Result<PureState> {
    if rho.layout.contains(ancilla_label) {
        return Err(Error::LabelClash(ancilla_label.to_string()));
    }
    let (values, vectors) = linalg::hermitian_eigen_sorted(&rho.matrix);
    let rank = values.iter().filter(|&&l| l > RANK_EPS).count().max(1);
    let n = rho.dim();
    let mut v = CVec::zeros(n * rank);
    for k in 0..rank {
        let amp = cr(values[k].max(0.0).sqrt());
        let col = vectors.column(k);
        for s in 0..n {
            v[s * rank + k] = amp * col[s];
        }
    }
    let norm = v.norm();
    v /= cr(norm);
    linalg::fix_phase(&mut v);
    let layout = rho.layout.with_appended(ancilla_label, rank)?;
    Ok(PureState::from_parts_unchecked(layout, v))
}

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    input_dim: usize,
    output_dim: usize,
    kraus: Vec<CMat>,
}

impl KrausChannel {
    /// Builds a channel from a nonempty list of equally shaped Kraus
    /// operators satisfying the completeness relation within `1e-9`.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::BadParams("channel needs at least one Kraus operator".into()))?;
        let (output_dim, input_dim) = first.shape();
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::BadParams("Kraus operators must be nonempty".into()));
        }
        if kraus.iter().any(|k| k.shape() != (output_dim, input_dim)) {
            return Err(Error::DimensionMismatch(
                "all Kraus operators must share one shape".into(),
            ));
        }
        let mut completeness = CMat::zeros(input_dim, input_dim);
        for k in &kraus {
            completeness += k.adjoint() * k;
        }
        let deviation = linalg::max_abs_diff(&completeness, &CMat::identity(input_dim, input_dim));
        if deviation > STATE_TOL {
            return Err(Error::IncompleteChannel(deviation));
        }
        Ok(Self {
            input_dim,
            output_dim,
            kraus,
        })
    }

    pub(crate) fn from_parts_unchecked(input_dim: usize, output_dim: usize, kraus: Vec<CMat>) -> Self {
        Self {
            input_dim,
            output_dim,
            kraus,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// The identity channel on dimension `d`.
    pub fn identity(d: usize) -> Self {
        Self::from_parts_unchecked(d, d, vec![CMat::identity(d, d)])
    }

    /// Completely dephasing channel in the computational basis of dimension
    /// `d`.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| {
                let mut k = CMat::zeros(d, d);
                k[(i, i)] = cr(1.0);
                k
            })
            .collect();
        Self::from_parts_unchecked(d, d, kraus)
    }

    /// Completely depolarizing channel on dimension `d` (output is the
    /// maximally mixed state).
    pub fn depolarizing(d: usize) -> Self {
        let scale = cr(1.0 / (d as f64).sqrt());
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = CMat::zeros(d, d);
                k[(i, j)] = scale;
                kraus.push(k);
            }
        }
        Self::from_parts_unchecked(d, d, kraus)
    }

    /// Builds the measure-and-record channel for a projective measurement in
    /// the basis given by the columns of `basis` (a `d x d` unitary): the
    /// output is classical in the computational basis.
    pub fn measurement_in_basis(basis: &CMat) -> Result<Self> {
        let d = basis.nrows();
        if basis.ncols() != d {
            return Err(Error::BadBasis("measurement basis must be square".into()));
        }
        let gram = basis.adjoint() * basis;
        let dev = linalg::max_abs_diff(&gram, &CMat::identity(d, d));
        if dev > 1e-8 {
            return Err(Error::BadBasis(format!("basis not orthonormal (deviation {dev:.3e})")));
        }
        let kraus = (0..d)
            .map(|i| {
                let mut k = CMat::zeros(d, d);
                for j in 0..d {
                    k[(i, j)] = basis[(j, i)].conj();
                }
                k
            })
            .collect();
        Ok(Self::from_parts_unchecked(d, d, kraus))
    }
}

/// Applies a channel to the `target` factor of `rho`; the factor is resized
/// to the channel's output dimension and renamed to `new_label`.
pub fn apply_channel(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    target: &str,
    new_label: &str,
) -> Result<DensityMatrix> {
    let pos = rho
        .layout
        .position(target)
        .ok_or_else(|| Error::UnknownLabel(target.to_string()))?;
    let d_in = rho.layout.subsystems[pos].1;
    if ch.input_dim != d_in {
        return Err(Error::DimensionMismatch(format!(
            "channel input dimension {} vs subsystem {} dimension {d_in}",
            ch.input_dim, target
        )));
    }
    if new_label != target && rho.layout.contains(new_label) {
        return Err(Error::LabelClash(new_label.to_string()));
    }
    let dims = rho.layout.dims();
    let pre: usize = dims[..pos].iter().product();
    let post: usize = dims[pos + 1..].iter().product();
    let id_pre = CMat::identity(pre, pre);
    let id_post = CMat::identity(post, post);
    let n_out = pre * ch.output_dim * post;
    let mut out = CMat::zeros(n_out, n_out);
    for k in &ch.kraus {
        let f = linalg::kron(&linalg::kron(&id_pre, k), &id_post);
        out += &f * &rho.matrix * f.adjoint();
    }
    let mut subsystems = rho.layout.subsystems.clone();
    subsystems[pos] = (new_label.to_string(), ch.output_dim);
    Ok(DensityMatrix::from_parts_unchecked(
        SystemLayout { subsystems },
        out,
    ))
}

/// Zeroes every block off-diagonal in the computational basis of `target`.
pub fn dephase(rho: &DensityMatrix, target: &str) -> Result<DensityMatrix> {
    let pos = rho
        .layout
        .position(target)
        .ok_or_else(|| Error::UnknownLabel(target.to_string()))?;
    let dims = rho.layout.dims();
    let strides = rho.layout.strides();
    let d = dims[pos];
    let stride = strides[pos];
    let digit = |flat: usize| (flat / stride) % d;
    let n = rho.dim();
    let mut m = rho.matrix.clone();
    for j in 0..n {
        for i in 0..n {
            if digit(i) != digit(j) {
                m[(i, j)] = C64::default();
            }
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(rho.layout.clone(), m))
}

/// Builds the computational-basis vector |index> over `dim`.
pub(crate) fn basis_vector(dim: usize, index: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[index] = cr(1.0);
    v
}

/// Builds a diagonal density matrix from nonnegative weights summing to 1.
pub(crate) fn diagonal_density(layout: SystemLayout, weights: &[f64]) -> DensityMatrix {
    let n = layout.total_dim();
    debug_assert_eq!(weights.len(), n);
    let mut m = CMat::zeros(n, n);
    for (i, &w) in weights.iter().enumerate() {
        m[(i, i)] = cr(w);
    }
    DensityMatrix::from_parts_unchecked(layout, m)
}

pub(crate) use crate::linalg::{ci as complex, cr as real};
