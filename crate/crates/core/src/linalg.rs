//! Dense complex operators, states and the small helpers shared by every module.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
/// Square complex matrix. Hamiltonians are in rad/µs.
pub type Operator = DMatrix<C64>;
pub type Vector = DVector<C64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn zeros(dim: usize) -> Operator {
    Operator::zeros(dim, dim)
}

pub fn from_rows(rows: &[&[C64]]) -> Operator {
    let n = rows.len();
    Operator::from_fn(n, n, |i, j| rows[i][j])
}

pub fn sigma_x() -> Operator {
    from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn sigma_y() -> Operator {
    from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn sigma_z() -> Operator {
    from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]])
}

pub fn hadamard() -> Operator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    from_rows(&[&[c(s, 0.0), c(s, 0.0)], &[c(s, 0.0), c(-s, 0.0)]])
}

/// `exp(-i a σ_z / 2)`.
pub fn rz(angle: f64) -> Operator {
    let mut m = zeros(2);
    m[(0, 0)] = cis(-angle / 2.0);
    m[(1, 1)] = cis(angle / 2.0);
    m
}

/// `exp(-i a σ_x / 2)`.
pub fn rx(angle: f64) -> Operator {
    let (s, co) = (angle / 2.0).sin_cos();
    from_rows(&[&[c(co, 0.0), c(0.0, -s)], &[c(0.0, -s), c(co, 0.0)]])
}

/// `exp(-i a σ_y / 2)`.
pub fn ry(angle: f64) -> Operator {
    let (s, co) = (angle / 2.0).sin_cos();
    from_rows(&[&[c(co, 0.0), c(-s, 0.0)], &[c(s, 0.0), c(co, 0.0)]])
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

pub fn max_abs(m: &Operator) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_error(m: &Operator) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn unitarity_error(u: &Operator) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - identity(n)))
}

pub fn is_hermitian(m: &Operator) -> bool {
    m.is_square() && hermiticity_error(m) <= HERMITIAN_TOL
}

pub fn is_unitary(u: &Operator) -> bool {
    u.is_square() && unitarity_error(u) <= UNITARY_TOL
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    a * b - b * a
}

/// `min_φ ‖U − e^{iφ} V‖_F`, attained at `φ = arg tr(V† U)`.
pub fn phase_aligned_distance(u: &Operator, v: &Operator) -> f64 {
    assert_eq!(u.shape(), v.shape(), "operator shapes differ");
    let overlap = (v.adjoint() * u).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    (u - v * phase).norm()
}

/// Distance of two angles on the circle, in `[0, π]`.
pub fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// Single-qubit ladder operators, tensored into a register of `total` identical transmons.
///
/// Returns `(b₋, b_z)` with `b₋ = Σ_k √k |k−1⟩⟨k|` and `b_z = Σ_k k |k⟩⟨k|` acting on
/// qubit `index` (0-based).
pub fn ladder_ops(levels: usize, index: usize, total: usize) -> Result<(Operator, Operator)> {
    if levels < 2 {
        return Err(Error::InvalidDimension(format!("levels must be >= 2, got {levels}")));
    }
    if total == 0 || index >= total {
        return Err(Error::InvalidDimension(format!("qubit index {index} out of range for {total} qubits")));
    }
    let mut lower = zeros(levels);
    let mut number = zeros(levels);
    for k in 1..levels {
        lower[(k - 1, k)] = c((k as f64).sqrt(), 0.0);
        number[(k, k)] = c(k as f64, 0.0);
    }
    let embed = |op: &Operator| {
        (0..total).fold(identity(1), |acc, m| {
            if m == index {
                kron(&acc, op)
            } else {
                kron(&acc, &identity(levels))
            }
        })
    };
    Ok((embed(&lower), embed(&number)))
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket(Vector);

impl Ket {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amplitudes: Vector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::ContractViolation(format!("ket norm {norm} is not 1")));
        }
        Ok(Self(amplitudes))
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ContractViolation("cannot normalize a zero vector".into()));
        }
        Ok(Self(amplitudes / c(norm, 0.0)))
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::normalized(Vector::from_column_slice(amplitudes))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.0
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn projector(&self) -> Operator {
        &self.0 * self.0.adjoint()
    }
}

/// Positive semidefinite, unit-trace, Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-9;
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const EIGEN_TOL: f64 = 1e-9;

    pub fn new(entries: Operator) -> Result<Self> {
        let rho = Self(entries);
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps numerically evolved entries without validation.
    pub fn from_evolved(entries: Operator) -> Self {
        Self(entries)
    }

    pub fn pure(ket: &Ket) -> Self {
        Self(ket.projector())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(identity(dim) / c(dim as f64, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.0;
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDimension("density matrix must be square and non-empty".into()));
        }
        let trace = m.trace();
        if (trace - c(1.0, 0.0)).norm() > Self::TRACE_TOL {
            return Err(Error::ContractViolation(format!("trace {trace} is not 1")));
        }
        let herm = hermiticity_error(m);
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::ContractViolation(format!("not Hermitian (error {herm:e})")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -Self::EIGEN_TOL {
            return Err(Error::ContractViolation(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.0 + self.0.adjoint()) * c(0.5, 0.0);
        h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn entries(&self) -> &Operator {
        &self.0
    }

    pub fn into_inner(self) -> Operator {
        self.0
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0[(index, index)].re
    }
}
