//! Dense spin operators on `(C²)^{⊗N}` and column-stacking vectorization.
//!
//! Basis index bits run from site 1 (most significant) to site N; a set bit
//! is spin up, i.e. an occupied fermion site (`n = σ⁺σ⁻`).

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

const ZERO: C64 = Complex::new(0.0, 0.0);
const ONE: C64 = Complex::new(1.0, 0.0);
const I: C64 = Complex::new(0.0, 1.0);

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    // local order (down, up): σʸ|↑⟩ = i|↓⟩
    CMatrix::from_row_slice(2, 2, &[ZERO, I, -I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[-ONE, ZERO, ZERO, ONE])
}

/// `σ⁻ = |↓⟩⟨↑|`.
pub fn lowering() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

/// Tensor product of one local operator per site.
pub fn product(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// `op` acting on `site` (0-based) of an `n`-site chain.
pub fn on_site(op: &CMatrix, site: usize, n: usize) -> CMatrix {
    let factors: Vec<CMatrix> = (0..n)
        .map(|s| if s == site { op.clone() } else { CMatrix::identity(2, 2) })
        .collect();
    product(&factors)
}

/// Jordan–Wigner annihilator `c_j = Π_{m<j}(−σᶻ_m)·σ⁻_j`.
pub fn annihilator(site: usize, n: usize) -> CMatrix {
    let string = -pauli_z();
    let factors: Vec<CMatrix> = (0..n)
        .map(|s| match s.cmp(&site) {
            std::cmp::Ordering::Less => string.clone(),
            std::cmp::Ordering::Equal => lowering(),
            std::cmp::Ordering::Greater => CMatrix::identity(2, 2),
        })
        .collect();
    product(&factors)
}

/// Fermion parity `e^{iπN} = Π_m(−σᶻ_m)`.
pub fn parity(n: usize) -> CMatrix {
    product(&vec![-pauli_z(); n])
}

/// `vec(AXB) = (Bᵀ ⊗ A)·vec(X)` with columns stacked.
pub fn vectorize(x: &CMatrix) -> nalgebra::DVector<C64> {
    nalgebra::DVector::from_column_slice(x.as_slice())
}

pub fn unvectorize(v: &nalgebra::DVector<C64>, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().sum()
}

/// `tr(A·B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let d = a.nrows();
    let mut sum = ZERO;
    for i in 0..d {
        for j in 0..d {
            sum += a[(i, j)] * b[(j, i)];
        }
    }
    sum
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
