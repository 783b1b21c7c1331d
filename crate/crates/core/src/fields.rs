//! Discrete inhomogeneous forms: one 16-component multivector per lattice site.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{Blade, Multivector, Projector, BLADES};
use crate::error::Error;
use crate::lattice::{LatticeDims, MultiIndex, ScalarField, AXES};

/// Per-site coefficients of a field.
pub type SiteVector = Multivector<Complex64>;

/// A discrete inhomogeneous form `Ω = ω⁰ + ω¹ + ω² + ω³ + ω⁴`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    dims: LatticeDims,
    sites: Vec<SiteVector>,
}

impl FormField {
    pub fn zeros(dims: LatticeDims) -> Self {
        Self::constant(dims, &SiteVector::zero())
    }

    /// The same multivector at every site.
    pub fn constant(dims: LatticeDims, value: &SiteVector) -> Self {
        Self {
            dims,
            sites: alloc::vec![*value; dims.volume()],
        }
    }

    pub fn from_fn(dims: LatticeDims, f: impl FnMut(MultiIndex) -> SiteVector) -> Self {
        Self {
            dims,
            sites: dims.sites().map(f).collect(),
        }
    }

    /// Builds a field from per-site vectors in canonical site order.
    pub fn from_sites(dims: LatticeDims, sites: Vec<SiteVector>) -> Result<Self, Error> {
        if sites.len() != dims.volume() {
            return Err(Error::LengthMismatch {
                expected: dims.volume(),
                found: sites.len(),
            });
        }
        Ok(Self { dims, sites })
    }

    /// Builds a field from a flat coefficient list ordered site-major, then blade.
    pub fn from_coeffs(dims: LatticeDims, coeffs: &[Complex64]) -> Result<Self, Error> {
        if coeffs.len() != dims.volume() * BLADES {
            return Err(Error::LengthMismatch {
                expected: dims.volume() * BLADES,
                found: coeffs.len(),
            });
        }
        let sites = coeffs
            .chunks_exact(BLADES)
            .map(|c| Multivector(core::array::from_fn(|i| c[i])))
            .collect();
        Ok(Self { dims, sites })
    }

    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    pub fn sites(&self) -> &[SiteVector] {
        &self.sites
    }

    pub fn at(&self, k: MultiIndex) -> &SiteVector {
        &self.sites[self.dims.linear(k)]
    }

    /// All coefficients, site-major then blade.
    pub fn coeffs(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.sites.iter().flat_map(|s| s.0.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.sites.len() * BLADES
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// One blade's coefficient as a scalar field.
    pub fn component(&self, b: Blade) -> ScalarField {
        ScalarField::from_fn(self.dims, |k| self.at(k).0[b.index()])
    }

    pub fn map_sites(&self, f: impl FnMut(&SiteVector) -> SiteVector) -> Self {
        Self {
            dims: self.dims,
            sites: self.sites.iter().map(f).collect(),
        }
    }

    fn zip_sites(
        &self,
        other: &Self,
        mut f: impl FnMut(&SiteVector, &SiteVector) -> SiteVector,
    ) -> Result<Self, Error> {
        self.check_dims(other)?;
        Ok(Self {
            dims: self.dims,
            sites: self
                .sites
                .iter()
                .zip(other.sites.iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_dims(&self, other: &Self) -> Result<(), Error> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims.extents(),
                right: other.dims.extents(),
            });
        }
        Ok(())
    }

    /// Keeps only the grade-`r` blades.
    pub fn grade_part(&self, r: usize) -> Result<Self, Error> {
        if r > 4 {
            return Err(Error::InvalidGrade(r));
        }
        Ok(self.map_sites(|s| s.grade_part(r)))
    }

    pub fn even_part(&self) -> Self {
        self.map_sites(SiteVector::even_part)
    }

    pub fn odd_part(&self) -> Self {
        self.map_sites(SiteVector::odd_part)
    }

    /// Componentwise complex conjugate `Ω̄`.
    pub fn conjugate(&self) -> Self {
        self.map_sites(SiteVector::conj)
    }

    /// Real part `½(Ω + Ω̄)`.
    pub fn real_part(&self) -> Self {
        self.map_sites(|s| Multivector(core::array::from_fn(|i| Complex64::new(s.0[i].re, 0.0))))
    }

    /// Imaginary part `(Ω − Ω̄)/(2i)`.
    pub fn imag_part(&self) -> Self {
        self.map_sites(|s| Multivector(core::array::from_fn(|i| Complex64::new(s.0[i].im, 0.0))))
    }

    pub fn max_abs(&self) -> f64 {
        self.sites
            .iter()
            .map(SiteVector::max_abs)
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Sum of squared moduli of all coefficients.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// Root-mean-square over all coefficients.
    pub fn rms(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        libm::sqrt(self.norm_sqr() / self.len() as f64)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.odd_part().max_abs() <= tol
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        self.map_sites(|s| s.scale(&alpha))
    }

    /// `self + alpha·x`.
    pub fn axpy(&self, alpha: Complex64, x: &Self) -> Result<Self, Error> {
        self.zip_sites(x, |a, b| *a + b.scale(&alpha))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.zip_sites(other, |a, b| *a + *b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, Error> {
        self.zip_sites(other, |a, b| *a - *b)
    }

    /// Sitewise Clifford product; there are no cross-site terms.
    pub fn clifford_mul(&self, other: &Self) -> Result<Self, Error> {
        self.zip_sites(other, |a, b| a.product(b))
    }

    /// `c·Ω` for a constant form `c`.
    pub fn mul_left(&self, c: &SiteVector) -> Self {
        self.map_sites(|s| c.product(s))
    }

    /// `Ω·c` for a constant form `c`.
    pub fn mul_right(&self, c: &SiteVector) -> Self {
        self.map_sites(|s| s.product(c))
    }

    /// `Δ_μ` applied to every component.
    pub fn delta(&self, mu: usize) -> Self {
        let sites = (0..self.sites.len())
            .map(|i| self.sites[self.dims.shift_linear(i, mu)] - self.sites[i])
            .collect();
        Self {
            dims: self.dims,
            sites,
        }
    }

    /// Largest coefficient deviation from a site-independent field.
    pub fn site_variation(&self) -> f64 {
        match self.sites.first() {
            Some(first) => self
                .sites
                .iter()
                .map(|s| (*s - *first).max_abs())
                .fold(0.0, f64::max),
            None => 0.0,
        }
    }

    /// `max_abs(self − other)`.
    pub fn distance(&self, other: &Self) -> Result<f64, Error> {
        Ok(self.try_sub(other)?.max_abs())
    }
}

impl Add for &FormField {
    type Output = FormField;
    /// Panics on mismatched lattices; use [`FormField::try_add`] to handle that case.
    fn add(self, rhs: Self) -> FormField {
        self.try_add(rhs).expect("fields on different lattices")
    }
}

impl Sub for &FormField {
    type Output = FormField;
    fn sub(self, rhs: Self) -> FormField {
        self.try_sub(rhs).expect("fields on different lattices")
    }
}

impl Neg for &FormField {
    type Output = FormField;
    fn neg(self) -> FormField {
        self.map_sites(|s| -*s)
    }
}

impl Mul<&FormField> for Complex64 {
    type Output = FormField;
    fn mul(self, rhs: &FormField) -> FormField {
        rhs.scale(self)
    }
}

/// The unit 0-form `x = Σ_k x^k`.
pub fn unit_form(dims: LatticeDims) -> FormField {
    FormField::constant(dims, &SiteVector::unit())
}

/// The constant 1-form `e_μ = Σ_k e_μ^k`.
pub fn e_mu_form(mu: usize, dims: LatticeDims) -> FormField {
    FormField::constant(dims, &SiteVector::vector(mu))
}

pub fn projector_form(p: Projector, dims: LatticeDims) -> FormField {
    FormField::constant(dims, &p.multivector())
}

/// `exp(2πi j/n)`, exact at multiples of a quarter turn.
pub fn unit_root(j: usize, n: usize) -> Complex64 {
    let j = j % n;
    if (4 * j).is_multiple_of(n) {
        return match 4 * j / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = libm::sincos(2.0 * PI * j as f64 / n as f64);
    Complex64::new(c, s)
}

/// `exp(2πi Σ_μ p_μ k_μ / N_μ)`.
pub fn phase(dims: LatticeDims, p: [usize; AXES], k: MultiIndex) -> Complex64 {
    (0..AXES)
        .map(|mu| unit_root(p[mu] * k.0[mu], dims.extent(mu)))
        .product()
}

/// `Ω(k) = amplitude · exp(2πi p·k/N)`.
pub fn plane_wave(
    dims: LatticeDims,
    p: [usize; AXES],
    amplitude: &SiteVector,
) -> Result<FormField, Error> {
    if !dims.contains_momentum(p) {
        return Err(Error::MomentumOutOfRange {
            p,
            dims: dims.extents(),
        });
    }
    Ok(FormField::from_fn(dims, |k| {
        amplitude.scale(&phase(dims, p, k))
    }))
}

/// Seeded random field.
///
/// The stream is ChaCha8 seeded through `seed_from_u64(seed)`. Coefficients
/// are drawn site by site in canonical order, blades ascending, real part
/// before imaginary part. Each draw takes one `u64`, keeps its top 53 bits as
/// `u ∈ [0, 1)` and returns `2u − 1`.
pub fn random_field(dims: LatticeDims, seed: u64) -> FormField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    };
    FormField::from_fn(dims, |_| {
        Multivector(core::array::from_fn(|_| {
            let re = draw();
            let im = draw();
            Complex64::new(re, im)
        }))
    })
}

/// Random field with only the blades accepted by `keep`, all real when `real` is set.
pub fn random_field_filtered(
    dims: LatticeDims,
    seed: u64,
    real: bool,
    keep: impl Fn(Blade) -> bool,
) -> FormField {
    random_field(dims, seed).map_sites(|s| {
        let s = s.filter(&keep);
        if real {
            Multivector(core::array::from_fn(|i| Complex64::new(s.0[i].re, 0.0)))
        } else {
            s
        }
    })
}
