//! Momentum space: the 16×16 symbol of `d^c + δ^c`, exact plane-wave
//! Dirac-Kähler solutions, and propagator solves by Fourier block inversion.
//!
//! On a periodic lattice `Δ_μ` acts on `exp(2πi p·k/N)` as multiplication by
//! `z_μ = exp(2πi p_μ/N_μ) − 1`, so `(d^c + δ^c)` maps `plane_wave(p, a)` to
//! `plane_wave(p, D(p)·a)`. Forward differences make `i·D(p)` non-Hermitian;
//! its eigenvalues are in general complex.

use alloc::vec::Vec;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use num_traits::Zero;

use crate::algebra::{Multivector, BLADES};
use crate::calculus::{coexterior_terms, dk_residual, exterior_terms};
use crate::error::Error;
use crate::fields::{plane_wave, unit_root, FormField, SiteVector};
use crate::lattice::{LatticeDims, AXES};

pub type BlockMatrix = SMatrix<Complex64, BLADES, BLADES>;
pub type BlockVector = SVector<Complex64, BLADES>;

/// Eigenvalues closer than this (relative to the matrix scale) are treated as
/// one multiple eigenvalue. Defective blocks split by about `sqrt(eps)`.
const CLUSTER_TOL: f64 = 1e-6;
/// Singular values below this (relative) span an eigenspace.
const NULL_TOL: f64 = 1e-9;
const MAX_SCHUR_ITER: usize = 100_000;

/// `D(p)` in the canonical blade basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix {
    pub p: [usize; AXES],
    pub dims: LatticeDims,
    pub matrix: BlockMatrix,
}

/// `z_μ = exp(2πi p_μ/N_μ) − 1`, the multiplier of `Δ_μ` on momentum `p`.
pub fn difference_multipliers(p: [usize; AXES], dims: LatticeDims) -> [Complex64; AXES] {
    core::array::from_fn(|mu| unit_root(p[mu], dims.extent(mu)) - 1.0)
}

pub fn build_symbol(p: [usize; AXES], dims: LatticeDims) -> Result<SymbolMatrix, Error> {
    if !dims.contains_momentum(p) {
        return Err(Error::MomentumOutOfRange {
            p,
            dims: dims.extents(),
        });
    }
    let z = difference_multipliers(p, dims);
    let mut matrix = BlockMatrix::zeros();
    for j in 0..BLADES {
        let mut e = SiteVector::zero();
        e.0[j] = Complex64::new(1.0, 0.0);
        let diffs: [SiteVector; AXES] = core::array::from_fn(|mu| e.scale(&z[mu]));
        let col = exterior_terms(&diffs) + coexterior_terms(&diffs);
        for i in 0..BLADES {
            matrix[(i, j)] = col.0[i];
        }
    }
    Ok(SymbolMatrix { p, dims, matrix })
}

impl SymbolMatrix {
    /// `i·D(p)`, the Dirac-Kähler left side in momentum space.
    pub fn dirac_kahler(&self) -> BlockMatrix {
        self.matrix * Complex64::i()
    }

    pub fn apply(&self, a: &SiteVector) -> SiteVector {
        let v = to_vector(a);
        from_vector(&(self.matrix * v))
    }
}

pub fn to_vector(a: &SiteVector) -> BlockVector {
    BlockVector::from_fn(|i, _| a.0[i])
}

pub fn from_vector(v: &BlockVector) -> SiteVector {
    Multivector(core::array::from_fn(|i| v[i]))
}

fn max_entry(m: &BlockMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// One eigenpair of `i·D(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub lambda: Complex64,
    /// Unit 2-norm.
    pub amplitude: SiteVector,
    /// `‖(i·D)a − λa‖₂`.
    pub residual: f64,
}

/// Eigen-decomposition of `i·D(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub p: [usize; AXES],
    /// All 16 eigenvalues with algebraic multiplicity, sorted by `(re, im)`.
    /// Members of a numerically multiple eigenvalue share the cluster mean.
    pub eigenvalues: [Complex64; BLADES],
    /// A basis of every eigenspace, grouped by eigenvalue in the same order.
    /// Fewer than 16 pairs means `i·D(p)` is defective.
    pub pairs: Vec<EigenPair>,
}

impl Spectrum {
    pub fn is_defective(&self) -> bool {
        self.pairs.len() < BLADES
    }
}

fn lex(a: &Complex64, b: &Complex64) -> core::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Groups sorted eigenvalues into clusters of numerically equal values.
fn cluster(values: &mut [Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    values.sort_by(lex);
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &v in values.iter() {
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|w| (v - w).norm() <= tol))
        {
            Some(g) => g.push(v),
            None => groups.push(alloc::vec![v]),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .iter()
        .map(|g| {
            let mean = g.iter().sum::<Complex64>() / g.len() as f64;
            (mean, g.len())
        })
        .collect();
    out.sort_by(|a, b| lex(&a.0, &b.0));
    out
}

/// Eigenvalues of `i·D(p)`, clustered, with multiplicity.
pub fn eigenvalues(symbol: &SymbolMatrix) -> Result<Vec<(Complex64, usize)>, Error> {
    let a = symbol.dirac_kahler();
    let scale = max_entry(&a).max(1.0);
    if max_entry(&a) == 0.0 {
        return Ok(alloc::vec![(Complex64::zero(), BLADES)]);
    }
    let schur = nalgebra::Schur::try_new(a, 1e-15 * scale, MAX_SCHUR_ITER)
        .ok_or(Error::EigenNonConvergence { p: symbol.p })?;
    let (_, t) = schur.unpack();
    let mut diag: Vec<Complex64> = (0..BLADES).map(|i| t[(i, i)]).collect();
    if diag.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigenNonConvergence { p: symbol.p });
    }
    Ok(cluster(&mut diag, CLUSTER_TOL * scale))
}

/// All eigenvalues and an eigenbasis of `i·D(p)`.
pub fn eigen_solve(symbol: &SymbolMatrix) -> Result<Spectrum, Error> {
    let a = symbol.dirac_kahler();
    let scale = max_entry(&a).max(1.0);
    let clusters = eigenvalues(symbol)?;

    let mut values = Vec::with_capacity(BLADES);
    let mut pairs = Vec::with_capacity(BLADES);
    for (lambda, mult) in clusters {
        values.extend(core::iter::repeat_n(lambda, mult));
        let shifted = a - BlockMatrix::identity() * lambda;
        let svd = nalgebra::SVD::try_new(shifted, false, true, 1e-15 * scale, MAX_SCHUR_ITER)
            .ok_or(Error::EigenNonConvergence { p: symbol.p })?;
        let v_t = svd.v_t.ok_or(Error::EigenNonConvergence { p: symbol.p })?;
        let mut null: Vec<(f64, usize)> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= NULL_TOL * scale)
            .map(|(i, s)| (*s, i))
            .collect();
        null.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        null.truncate(mult);
        null.sort_by_key(|x| x.1);
        for (_, row) in null {
            let v: BlockVector = v_t.row(row).adjoint();
            let v = v.normalize();
            let residual = (a * v - v * lambda).norm();
            pairs.push(EigenPair {
                lambda,
                amplitude: from_vector(&v),
                residual,
            });
        }
    }
    let eigenvalues: [Complex64; BLADES] = core::array::from_fn(|i| values[i]);
    Ok(Spectrum {
        p: symbol.p,
        eigenvalues,
        pairs,
    })
}

/// The plane wave carried by an eigenpair, together with the (complex) mass at
/// which it solves `i(d^c+δ^c)Ω = mΩ` exactly.
pub fn build_dk_solution(
    p: [usize; AXES],
    pair: &EigenPair,
    dims: LatticeDims,
) -> Result<(FormField, Complex64), Error> {
    Ok((plane_wave(dims, p, &pair.amplitude)?, pair.lambda))
}

/// Every lattice momentum in canonical order.
pub fn momenta(dims: LatticeDims) -> impl Iterator<Item = [usize; AXES]> {
    dims.sites().map(|k| k.0)
}

/// Per-axis discrete Fourier transform of a field, in place.
///
/// Forward: `f̂(p) = Σ_k f(k) exp(−2πi p·k/N)`; inverse carries the `1/V`.
pub fn fourier(field: &FormField, inverse: bool) -> FormField {
    let dims = field.dims();
    let mut data: Vec<SiteVector> = field.sites().to_vec();
    for mu in 0..AXES {
        let n = dims.extent(mu);
        if n == 1 {
            continue;
        }
        let twiddle: Vec<Complex64> = (0..n)
            .map(|j| {
                let w = unit_root(j, n);
                if inverse {
                    w
                } else {
                    w.conj()
                }
            })
            .collect();
        let mut line = alloc::vec![SiteVector::zero(); n];
        for i in 0..dims.volume() {
            if dims.site(i).0[mu] != 0 {
                continue;
            }
            let mut idx = i;
            for slot in line.iter_mut() {
                *slot = data[idx];
                idx = dims.shift_linear(idx, mu);
            }
            let mut idx = i;
            for q in 0..n {
                let mut acc = SiteVector::zero();
                for (j, v) in line.iter().enumerate() {
                    acc += v.scale(&twiddle[(q * j) % n]);
                }
                data[idx] = acc;
                idx = dims.shift_linear(idx, mu);
            }
        }
    }
    let out = FormField::from_sites(dims, data).expect("one vector per site");
    if inverse {
        out.scale(Complex64::new(1.0 / dims.volume() as f64, 0.0))
    } else {
        out
    }
}

/// Relative a-posteriori bound for [`propagator_solve`].
pub const PROPAGATOR_TOL: f64 = 1e-11;
/// `|λ − m|` below this (relative) marks a singular momentum block.
const SINGULAR_TOL: f64 = 1e-10;

/// Solves `(i(d^c+δ^c) − m)Ω = source` by Fourier block inversion.
///
/// Fails if `m` is an eigenvalue of `i·D(p)` for some lattice momentum `p`,
/// or if the real-space residual exceeds `PROPAGATOR_TOL·max_abs(source)`.
pub fn propagator_solve(source: &FormField, mass: Complex64) -> Result<FormField, Error> {
    let dims = source.dims();
    let hat = fourier(source, false);
    let mut out = Vec::with_capacity(dims.volume());
    for (i, p) in momenta(dims).enumerate() {
        let symbol = build_symbol(p, dims)?;
        let scale = max_entry(&symbol.matrix).max(mass.norm()).max(1.0);
        for (lambda, _) in eigenvalues(&symbol)? {
            if (lambda - mass).norm() <= SINGULAR_TOL * scale {
                return Err(Error::SingularBlock {
                    p,
                    eigenvalue: lambda,
                });
            }
        }
        let block = symbol.dirac_kahler() - BlockMatrix::identity() * mass;
        let rhs = to_vector(&hat.sites()[i]);
        let sol = block.lu().solve(&rhs).ok_or(Error::SingularBlock {
            p,
            eigenvalue: mass,
        })?;
        out.push(from_vector(&sol));
    }
    let solution = fourier(&FormField::from_sites(dims, out)?, true);

    let residual = dk_residual(&solution, mass).try_sub(source)?.max_abs();
    let bound = PROPAGATOR_TOL * source.max_abs();
    if residual > bound {
        return Err(Error::PropagatorResidual { residual, bound });
    }
    Ok(solution)
}
