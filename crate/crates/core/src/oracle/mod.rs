//! Brute-force reference for small chains.
//!
//! Everything here works on the full `2^N`-dimensional spin Hilbert space:
//! the Hamiltonian is assembled from Pauli products, the global dissipator
//! from spectral projectors of that Hamiltonian, and the steady state from
//! the null space of the `4^N × 4^N` Liouvillian. None of it goes through
//! the single-particle machinery, which makes it an independent check of
//! the transport formulas.

pub mod ops;
pub mod verify;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::bath::{self, BathError, BathPair, Temperature};
use crate::chain::ChainSpec;
use ops::{C64, CMatrix};

pub use verify::{run_equivalence_suite, VerifyCheck, VerifyReport};

/// Largest chain the oracle will build; the Liouvillian has `4^N` rows.
pub const MAX_SITES: usize = 6;
/// Bohr frequencies closer than this are treated as one eigenoperator.
pub const FREQUENCY_TOLERANCE: f64 = 1e-9;
/// Matrix elements below this are dropped when extracting eigenoperators.
pub const ELEMENT_CUTOFF: f64 = 1e-10;
/// Stand-in for `T = ∞`, as a multiple of the largest `|ε|`.
pub const INFINITE_TEMPERATURE_SCALE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dense oracle supports at most {MAX_SITES} sites, got {0}")]
    TooManySites(usize),
    #[error("Hamiltonian is not Hermitian: deviation {0:e}")]
    NotHermitian(f64),
    #[error("zero Bohr frequency in the coupling operator; the chain has a zero-energy mode")]
    ZeroFrequency,
    #[error("single-particle frequencies {0} and {1} are closer than the binning tolerance")]
    DegenerateFrequencies(f64, f64),
    #[error("steady state is not unique: null space of dimension {0}")]
    DegenerateSteadyState(usize),
    #[error("steady state residual {0:e} exceeds tolerance")]
    NotStationary(f64),
    #[error(transparent)]
    Bath(#[from] BathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    Left,
    Right,
}

/// How the dissipator of each bath is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DissipatorKind {
    /// Eigenoperators of `σˣ` at the contact, extracted from the many-body
    /// spectrum.
    Eigenoperator,
    /// Jump operators `η̃_k` and `η̃†_k` per normal mode, optionally
    /// multiplied by the parity `e^{iπN}` that the Jordan–Wigner string of
    /// `σˣ_N` leaves behind.
    Fermionic { parity: bool },
}

/// The chain on the full Hilbert space.
#[derive(Debug, Clone)]
pub struct DenseModel {
    pub sites: usize,
    pub hamiltonian: CMatrix,
    /// Many-body energies, ascending.
    pub energies: Vec<f64>,
    /// Column `i` is the eigenvector of `energies[i]`.
    pub eigenvectors: DMatrix<f64>,
    pub sigma_x_left: CMatrix,
    pub sigma_x_right: CMatrix,
    /// Total fermion number `Σ_j n_j`.
    pub number: CMatrix,
    /// Single-particle energies from a dense eigensolve of `W`, ascending.
    pub mode_energies: Vec<f64>,
    /// `mode_vectors[(j, k)]` is the amplitude of mode `k` on site `j`.
    pub mode_vectors: DMatrix<f64>,
    /// Normal-mode annihilators `η̃_k = Σ_j S_{jk} c_j`.
    pub mode_annihilators: Vec<CMatrix>,
    pub parity: CMatrix,
    gamma: f64,
}

/// A linear map on vectorized `d × d` matrices.
#[derive(Debug, Clone)]
pub struct Superoperator {
    pub matrix: CMatrix,
    pub dim: usize,
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        Superoperator {
            matrix: CMatrix::zeros(dim * dim, dim * dim),
            dim,
        }
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        ops::unvectorize(&(&self.matrix * ops::vectorize(x)), self.dim)
    }

    fn add(&mut self, other: &Superoperator) {
        self.matrix += &other.matrix;
    }
}

/// One eigenoperator `A(ω)` of a coupling operator.
#[derive(Debug, Clone)]
pub struct Eigenoperator {
    pub omega: f64,
    pub op: CMatrix,
}

/// Energy and particle flows into the chain from each bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluxes {
    pub heat_left: f64,
    pub heat_right: f64,
    pub particle_left: f64,
    pub particle_right: f64,
}

pub fn build_dense_model(chain: &ChainSpec) -> Result<DenseModel, OracleError> {
    let n = chain.len();
    if n > MAX_SITES {
        return Err(OracleError::TooManySites(n));
    }
    let dim = 1 << n;
    let (x, y, z) = (ops::pauli_x(), ops::pauli_y(), ops::pauli_z());

    let mut h = CMatrix::zeros(dim, dim);
    for (j, &field) in chain.fields().iter().enumerate() {
        h += ops::on_site(&z, j, n) * C64::from(0.5 * field);
    }
    for (j, &alpha) in chain.couplings().iter().enumerate() {
        let xx = ops::on_site(&x, j, n) * ops::on_site(&x, j + 1, n);
        let yy = ops::on_site(&y, j, n) * ops::on_site(&y, j + 1, n);
        h += (xx + yy) * C64::from(0.5 * alpha);
    }
    let deviation = ops::max_abs(&(&h - h.adjoint()));
    let imaginary = h.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if deviation > 1e-12 || imaginary > 1e-12 {
        return Err(OracleError::NotHermitian(deviation.max(imaginary)));
    }

    let (energies, eigenvectors) = sorted_eigen(h.map(|c| c.re));

    let w = chain.w_matrix().to_dense();
    let (mode_energies, mode_vectors) = sorted_eigen(w);
    let annihilators: Vec<CMatrix> = (0..n).map(|j| ops::annihilator(j, n)).collect();
    let mode_annihilators = (0..n)
        .map(|k| {
            annihilators
                .iter()
                .enumerate()
                .fold(CMatrix::zeros(dim, dim), |acc, (j, c)| {
                    acc + c * C64::from(mode_vectors[(j, k)])
                })
        })
        .collect();
    let number = annihilators
        .iter()
        .fold(CMatrix::zeros(dim, dim), |acc, c| acc + c.adjoint() * c);

    Ok(DenseModel {
        sites: n,
        hamiltonian: h,
        energies,
        eigenvectors,
        sigma_x_left: ops::on_site(&x, 0, n),
        sigma_x_right: ops::on_site(&x, n - 1, n),
        number,
        mode_energies,
        mode_vectors,
        mode_annihilators,
        parity: ops::parity(n),
        gamma: chain.gamma(),
    })
}

fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

impl DenseModel {
    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    /// The bath coupling rate `γ` of the chain the model was built from.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn coupling(&self, contact: Contact) -> &CMatrix {
        match contact {
            Contact::Left => &self.sigma_x_left,
            Contact::Right => &self.sigma_x_right,
        }
    }

    fn contact_site(&self, contact: Contact) -> usize {
        match contact {
            Contact::Left => 0,
            Contact::Right => self.sites - 1,
        }
    }

    /// Finite temperature used for the bath; `∞` becomes a large multiple
    /// of the bandwidth.
    pub fn effective_temperature(&self, t: Temperature) -> Temperature {
        if t.is_infinite() {
            let scale = self.mode_energies.iter().fold(0.0f64, |m, e| m.max(e.abs()));
            Temperature::new(INFINITE_TEMPERATURE_SCALE * scale.max(1.0))
                .expect("positive finite temperature")
        } else {
            t
        }
    }

    /// `⟨η̃†_k η̃_k'⟩` in state `rho`.
    pub fn mode_correlation(&self, rho: &CMatrix, k: usize, k_prime: usize) -> C64 {
        let op = self.mode_annihilators[k].adjoint() * &self.mode_annihilators[k_prime];
        ops::trace_product(&op, rho)
    }

    pub fn mode_occupations(&self, rho: &CMatrix) -> Vec<f64> {
        (0..self.sites)
            .map(|k| self.mode_correlation(rho, k, k).re)
            .collect()
    }

    fn check_frequencies(&self) -> Result<(), OracleError> {
        if self.mode_energies.iter().any(|e| e.abs() < 0.5 * FREQUENCY_TOLERANCE) {
            return Err(OracleError::ZeroFrequency);
        }
        let mut freqs: Vec<f64> = self
            .mode_energies
            .iter()
            .flat_map(|&e| [e, -e])
            .collect();
        freqs.sort_by(f64::total_cmp);
        for pair in freqs.windows(2) {
            if pair[1] - pair[0] < FREQUENCY_TOLERANCE {
                return Err(OracleError::DegenerateFrequencies(pair[0], pair[1]));
            }
        }
        Ok(())
    }
}

/// Split the coupling operator at `contact` into eigenoperators
/// `A(ω) = Σ_{E'−E=ω} Π_E A Π_{E'}`, ordered by ascending `ω`.
pub fn eigenoperators(model: &DenseModel, contact: Contact) -> Result<Vec<Eigenoperator>, OracleError> {
    model.check_frequencies()?;
    let v = model.eigenvectors.map(C64::from);
    let a = v.adjoint() * model.coupling(contact) * &v;
    let d = model.dim();

    let mut elements: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if a[(i, j)].norm() > ELEMENT_CUTOFF {
                elements.push((model.energies[j] - model.energies[i], i, j));
            }
        }
    }
    elements.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut result = Vec::new();
    let mut start = 0;
    while start < elements.len() {
        let mut end = start + 1;
        while end < elements.len() && elements[end].0 - elements[end - 1].0 < FREQUENCY_TOLERANCE {
            end += 1;
        }
        let group = &elements[start..end];
        let omega = group.iter().map(|e| e.0).sum::<f64>() / group.len() as f64;
        if omega.abs() < FREQUENCY_TOLERANCE {
            return Err(OracleError::ZeroFrequency);
        }
        let mut block = CMatrix::zeros(d, d);
        for &(_, i, j) in group {
            block[(i, j)] = a[(i, j)];
        }
        result.push(Eigenoperator {
            omega,
            op: &v * block * v.adjoint(),
        });
        start = end;
    }
    Ok(result)
}

/// `Σ_i r_i (L_i ρ L_i† − ½{L_i†L_i, ρ})` as a superoperator.
pub fn lindblad_dissipator(dim: usize, jumps: &[(f64, CMatrix)]) -> Superoperator {
    let id = CMatrix::identity(dim, dim);
    let mut d = Superoperator::zeros(dim);
    for (rate, l) in jumps {
        if *rate == 0.0 {
            continue;
        }
        let ldl = l.adjoint() * l;
        let term = l.conjugate().kronecker(l)
            - id.kronecker(&ldl) * C64::from(0.5)
            - ldl.transpose().kronecker(&id) * C64::from(0.5);
        d.matrix += term * C64::from(*rate);
    }
    d
}

/// `−i[H, ·]` as a superoperator.
pub fn hamiltonian_part(model: &DenseModel) -> Superoperator {
    let d = model.dim();
    let id = CMatrix::identity(d, d);
    let h = &model.hamiltonian;
    Superoperator {
        matrix: (id.kronecker(h) - h.transpose().kronecker(&id)) * C64::new(0.0, -1.0),
        dim: d,
    }
}

/// Global dissipator of one bath from the eigenoperators of its coupling,
/// with rates `Γ(ω)` of a flat spectral density.
pub fn build_eigenoperator_dissipator(
    model: &DenseModel,
    contact: Contact,
    t: Temperature,
    gamma: f64,
) -> Result<Superoperator, OracleError> {
    let t = model.effective_temperature(t);
    let jumps = eigenoperators(model, contact)?
        .into_iter()
        .map(|e| Ok((bath::gamma_rate(e.omega, t, gamma)?, e.op)))
        .collect::<Result<Vec<_>, OracleError>>()?;
    Ok(lindblad_dissipator(model.dim(), &jumps))
}

/// Dissipator written in the normal-mode basis: `η̃_k` at rate
/// `γ g_k χ_k (1 − f_k)` and `η̃†_k` at rate `γ g_k χ_k f_k`.
pub fn build_fermionic_dissipator(
    model: &DenseModel,
    contact: Contact,
    t: Temperature,
    gamma: f64,
    with_parity: bool,
) -> Result<Superoperator, OracleError> {
    model.check_frequencies()?;
    let t = model.effective_temperature(t);
    let site = model.contact_site(contact);
    let mut jumps = Vec::with_capacity(2 * model.sites);
    for (k, eta) in model.mode_annihilators.iter().enumerate() {
        let eps = model.mode_energies[k];
        let g = model.mode_vectors[(site, k)].powi(2);
        let scale = gamma * g * bath::chi(eps, t);
        let f = bath::fermi(eps, t);
        let (lower, raise) = if with_parity {
            (eta * &model.parity, eta.adjoint() * &model.parity)
        } else {
            (eta.clone(), eta.adjoint())
        };
        jumps.push((scale * (1.0 - f), lower));
        jumps.push((scale * f, raise));
    }
    Ok(lindblad_dissipator(model.dim(), &jumps))
}

fn bath_dissipator(
    model: &DenseModel,
    contact: Contact,
    t: Temperature,
    gamma: f64,
    kind: DissipatorKind,
) -> Result<Superoperator, OracleError> {
    match kind {
        DissipatorKind::Eigenoperator => build_eigenoperator_dissipator(model, contact, t, gamma),
        DissipatorKind::Fermionic { parity } => {
            build_fermionic_dissipator(model, contact, t, gamma, parity)
        }
    }
}

/// Full generator `−i[H, ·] + D_L + D_R`.
pub fn liouvillian(
    model: &DenseModel,
    baths: BathPair,
    gamma: f64,
    kind: DissipatorKind,
) -> Result<Superoperator, OracleError> {
    let mut l = hamiltonian_part(model);
    l.add(&bath_dissipator(model, Contact::Left, baths.left, gamma, kind)?);
    l.add(&bath_dissipator(model, Contact::Right, baths.right, gamma, kind)?);
    Ok(l)
}

/// Unique trace-one `ρ` with `L(ρ) = 0`.
///
/// One row of `L` is redundant (trace preservation makes the diagonal rows
/// sum to zero), so it is replaced by the trace functional and the system
/// solved directly. A second vanishing pivot means a larger null space.
pub fn null_space_state(l: &Superoperator) -> Result<CMatrix, OracleError> {
    let d = l.dim;
    let size = d * d;
    let mut a = l.matrix.clone();
    for c in 0..size {
        a[(0, c)] = C64::from(0.0);
    }
    for i in 0..d {
        a[(0, i + i * d)] = C64::from(1.0);
    }
    let mut rhs = DVector::zeros(size);
    rhs[0] = C64::from(1.0);

    let lu = a.lu();
    let u = lu.u();
    let pivots: Vec<f64> = u.diagonal().iter().map(|z| z.norm()).collect();
    let largest = pivots.iter().cloned().fold(0.0, f64::max);
    let small = pivots.iter().filter(|&&p| p <= 1e-13 * largest).count();
    if small > 0 {
        return Err(OracleError::DegenerateSteadyState(small + 1));
    }
    let x = lu.solve(&rhs).ok_or(OracleError::DegenerateSteadyState(2))?;

    let rho = ops::unvectorize(&x, d);
    let mut rho = (&rho + rho.adjoint()) * C64::from(0.5);
    let tr = ops::trace(&rho);
    rho /= tr;

    let scale = ops::max_abs(&l.matrix).max(1.0);
    let residual = ops::max_abs(&l.apply(&rho)) / scale;
    if residual > 1e-10 {
        return Err(OracleError::NotStationary(residual));
    }
    Ok(rho)
}

/// Steady state under the eigenoperator (global) dissipator.
pub fn steady_state_density(model: &DenseModel, baths: BathPair, gamma: f64) -> Result<CMatrix, OracleError> {
    steady_state_with(model, baths, gamma, DissipatorKind::Eigenoperator)
}

pub fn steady_state_with(
    model: &DenseModel,
    baths: BathPair,
    gamma: f64,
    kind: DissipatorKind,
) -> Result<CMatrix, OracleError> {
    null_space_state(&liouvillian(model, baths, gamma, kind)?)
}

/// `Q̇_r = tr{H D_r(ρ)}` and `J_{N,r} = tr{N D_r(ρ)}` for both baths, using
/// the eigenoperator dissipators.
pub fn fluxes_from_density(
    model: &DenseModel,
    baths: BathPair,
    rho: &CMatrix,
    gamma: f64,
) -> Result<Fluxes, OracleError> {
    let flows = |contact, t| -> Result<(f64, f64), OracleError> {
        let d = build_eigenoperator_dissipator(model, contact, t, gamma)?.apply(rho);
        Ok((
            ops::trace_product(&model.hamiltonian, &d).re,
            ops::trace_product(&model.number, &d).re,
        ))
    };
    let (heat_left, particle_left) = flows(Contact::Left, baths.left)?;
    let (heat_right, particle_right) = flows(Contact::Right, baths.right)?;
    Ok(Fluxes {
        heat_left,
        heat_right,
        particle_left,
        particle_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::diagonalize;
    use crate::transport;
    use approx::assert_relative_eq;
    use nalgebra::Complex;
    use rand::{Rng, SeedableRng};

    fn pair(l: f64, r: f64) -> BathPair {
        BathPair::from_values(l, r).unwrap()
    }

    fn asymmetric() -> ChainSpec {
        ChainSpec::custom(vec![1.3, -0.4, 0.9], vec![0.7, 1.1], 1.0).unwrap()
    }

    fn random_matrix(d: usize, seed: u64) -> CMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(d, d, |_, _| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn rejects_large_chains() {
        let chain = ChainSpec::boundary_perturbed(7, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(build_dense_model(&chain), Err(OracleError::TooManySites(7))));
    }

    #[test]
    fn uncoupled_chain_is_diagonal() {
        let chain = ChainSpec::custom(vec![1.0, 2.0, -0.5], vec![0.0, 0.0], 1.0).unwrap();
        let model = build_dense_model(&chain).unwrap();
        let h = &model.hamiltonian;
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(h[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn many_body_spectrum_is_subset_sums() {
        for chain in [
            ChainSpec::custom(vec![4.0, 6.0], vec![1.0], 1.0).unwrap(),
            asymmetric(),
            ChainSpec::graded(5, -1.0, 0.6, 0.5, 0.2, 1.0).unwrap(),
        ] {
            let model = build_dense_model(&chain).unwrap();
            let eps = diagonalize(&chain).unwrap().eps.clone();
            let offset = -0.5 * chain.fields().iter().sum::<f64>();
            let n = eps.len();
            let mut sums: Vec<f64> = (0..1usize << n)
                .map(|mask| offset + (0..n).filter(|k| mask >> k & 1 == 1).map(|k| eps[k]).sum::<f64>())
                .collect();
            sums.sort_by(f64::total_cmp);
            for (a, b) in sums.iter().zip(&model.energies) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn eigenoperator_relations() {
        let model = build_dense_model(&asymmetric()).unwrap();
        for contact in [Contact::Left, Contact::Right] {
            let ops_list = eigenoperators(&model, contact).unwrap();
            let mut freqs: Vec<f64> = ops_list.iter().map(|e| e.omega).collect();
            let mut expected: Vec<f64> = model.mode_energies.iter().flat_map(|&e| [e, -e]).collect();
            expected.sort_by(f64::total_cmp);
            freqs.sort_by(f64::total_cmp);
            assert_eq!(freqs.len(), expected.len());
            for (f, e) in freqs.iter().zip(&expected) {
                assert!((f - e).abs() < 1e-10);
            }
            for e in &ops_list {
                let lhs = ops::commutator(&model.hamiltonian, &e.op);
                assert!(ops::max_abs(&(lhs + &e.op * C64::from(e.omega))) < 1e-10);
                let partner = ops_list.iter().find(|o| (o.omega + e.omega).abs() < 1e-9).unwrap();
                assert!(ops::max_abs(&(&partner.op - e.op.adjoint())) < 1e-12);
            }
            let total = ops_list.iter().fold(CMatrix::zeros(8, 8), |acc, e| acc + &e.op);
            assert!(ops::max_abs(&(total - model.coupling(contact))) < 1e-12);
        }
    }

    #[test]
    fn zero_mode_is_rejected() {
        // zero fields on three sites: ε ∈ {−√2, 0, √2}
        let chain = ChainSpec::custom(vec![0.0; 3], vec![1.0, 1.0], 1.0).unwrap();
        let model = build_dense_model(&chain).unwrap();
        assert_eq!(eigenoperators(&model, Contact::Left).unwrap_err(), OracleError::ZeroFrequency);
    }

    #[test]
    fn liouvillian_preserves_trace_and_hermiticity() {
        let model = build_dense_model(&asymmetric()).unwrap();
        for kind in [
            DissipatorKind::Eigenoperator,
            DissipatorKind::Fermionic { parity: true },
            DissipatorKind::Fermionic { parity: false },
        ] {
            let l = liouvillian(&model, pair(3.0, 0.4), 1.0, kind).unwrap();
            for seed in 0..5 {
                let x = random_matrix(8, seed);
                let h = &x + x.adjoint();
                assert!(ops::trace(&l.apply(&h)).norm() < 1e-10);
                let lhs = l.apply(&x.adjoint());
                let rhs = l.apply(&x).adjoint();
                assert!(ops::max_abs(&(lhs - rhs)) < 1e-10);
            }
        }
    }

    #[test]
    fn equilibrium_steady_state() {
        let model = build_dense_model(&asymmetric()).unwrap();
        let t = 1.3;
        let rho = steady_state_density(&model, pair(t, t), 1.0).unwrap();
        let temp = Temperature::new(t).unwrap();
        for (k, n) in model.mode_occupations(&rho).iter().enumerate() {
            assert!((n - bath::fermi(model.mode_energies[k], temp)).abs() < 1e-8);
        }
        // Gibbs state
        let weights: Vec<f64> = model.energies.iter().map(|e| (-e / t).exp()).collect();
        let z: f64 = weights.iter().sum();
        let v = model.eigenvectors.map(C64::from);
        let diag = v.adjoint() * &rho * &v;
        for i in 0..8 {
            assert!((diag[(i, i)].re - weights[i] / z).abs() < 1e-10);
        }
        let f = fluxes_from_density(&model, pair(t, t), &rho, 1.0).unwrap();
        for value in [f.heat_left, f.heat_right, f.particle_left, f.particle_right] {
            assert!(value.abs() < 1e-9);
        }
    }

    #[test]
    fn steady_state_is_a_density_matrix() {
        let model = build_dense_model(&asymmetric()).unwrap();
        let rho = steady_state_density(&model, pair(5.0, 0.3), 1.0).unwrap();
        assert!((ops::trace(&rho) - C64::from(1.0)).norm() < 1e-12);
        assert!(ops::max_abs(&(&rho - rho.adjoint())) < 1e-12);
        let eig = SymmetricEigen::new(rho.clone()).eigenvalues;
        assert!(eig.iter().all(|&p| p > -1e-10));
        for k in 0..3 {
            for kp in 0..3 {
                if k != kp {
                    assert!(model.mode_correlation(&rho, k, kp).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn parity_string_is_irrelevant() {
        let model = build_dense_model(&asymmetric()).unwrap();
        let baths = pair(4.0, 0.7);
        let with = steady_state_with(&model, baths, 1.0, DissipatorKind::Fermionic { parity: true }).unwrap();
        let without = steady_state_with(&model, baths, 1.0, DissipatorKind::Fermionic { parity: false }).unwrap();
        let global = steady_state_density(&model, baths, 1.0).unwrap();
        assert!(ops::max_abs(&(&with - &without)) < 1e-10);
        assert!(ops::max_abs(&(&with - &global)) < 1e-10);
    }

    #[test]
    fn two_site_heat_current_matches_transport() {
        let chain = ChainSpec::boundary_perturbed(2, 5.0, 1.0, 1.0).unwrap();
        let model = build_dense_model(&chain).unwrap();
        let baths = pair(2.0, 1.0);
        let rho = steady_state_density(&model, baths, 1.0).unwrap();
        let f = fluxes_from_density(&model, baths, &rho, 1.0).unwrap();
        let modes = diagonalize(&chain).unwrap();
        assert_relative_eq!(f.heat_left, transport::energy_current(&modes, baths, 1.0), max_relative = 1e-8);
        assert_relative_eq!(f.particle_left, transport::particle_current(&modes, baths, 1.0), max_relative = 1e-8);
        assert!((f.heat_left + f.heat_right).abs() < 1e-9);
        assert!((f.particle_left + f.particle_right).abs() < 1e-9);
    }

    #[test]
    fn energy_offset_cancels_in_heat_flux() {
        let model = build_dense_model(&asymmetric()).unwrap();
        let baths = pair(3.0, 1.0);
        let rho = steady_state_density(&model, baths, 1.0).unwrap();
        let d = build_eigenoperator_dissipator(&model, Contact::Left, baths.left, 1.0).unwrap().apply(&rho);
        let shift = CMatrix::identity(8, 8) * C64::from(-0.5 * 1.8);
        let plain = ops::trace_product(&model.hamiltonian, &d);
        let shifted = ops::trace_product(&(&model.hamiltonian + shift), &d);
        assert!((plain - shifted).norm() < 1e-12);
    }
}
