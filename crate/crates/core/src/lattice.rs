//! Finite periodic 4D lattice: extents, multi-indices, shifts and the forward
//! difference on per-site scalar data.
//!
//! Sites are enumerated in row-major order with `k0` varying slowest and `k3`
//! fastest. That order is the canonical storage and serialization order for
//! every field in the crate.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::Error;

/// Number of lattice axes.
pub const AXES: usize = 4;

/// Per-axis extents `(N0, N1, N2, N3)` of a periodic lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeDims {
    n: [usize; AXES],
    strides: [usize; AXES],
    volume: usize,
}

impl LatticeDims {
    /// Every extent must be at least one and the site count must fit in `usize`.
    pub fn new(n: [usize; AXES]) -> Result<Self, Error> {
        if n.contains(&0) {
            return Err(Error::InvalidDims(n));
        }
        let mut strides = [0usize; AXES];
        let mut acc: usize = 1;
        for mu in (0..AXES).rev() {
            strides[mu] = acc;
            acc = acc.checked_mul(n[mu]).ok_or(Error::InvalidDims(n))?;
        }
        // 16 complex coefficients per site must also be addressable.
        acc.checked_mul(16 * 2).ok_or(Error::InvalidDims(n))?;
        Ok(Self {
            n,
            strides,
            volume: acc,
        })
    }

    /// Isotropic lattice `n⁴`.
    pub fn cubic(n: usize) -> Result<Self, Error> {
        Self::new([n; AXES])
    }

    pub fn extents(&self) -> [usize; AXES] {
        self.n
    }

    pub fn extent(&self, mu: usize) -> usize {
        self.n[mu]
    }

    /// Total number of sites `N0·N1·N2·N3`.
    pub fn volume(&self) -> usize {
        self.volume
    }

    /// Builds a multi-index, reducing each component modulo its extent.
    pub fn index(&self, k: [i64; AXES]) -> MultiIndex {
        let mut out = [0usize; AXES];
        for mu in 0..AXES {
            out[mu] = k[mu].rem_euclid(self.n[mu] as i64) as usize;
        }
        MultiIndex(out)
    }

    /// Position of `k` in the canonical site order.
    pub fn linear(&self, k: MultiIndex) -> usize {
        k.0.iter()
            .zip(self.strides.iter())
            .map(|(a, s)| a * s)
            .sum()
    }

    /// Inverse of [`LatticeDims::linear`].
    pub fn site(&self, mut i: usize) -> MultiIndex {
        debug_assert!(i < self.volume);
        let mut k = [0usize; AXES];
        for mu in 0..AXES {
            k[mu] = i / self.strides[mu];
            i %= self.strides[mu];
        }
        MultiIndex(k)
    }

    /// `τ_μ k`: advance one step along `mu` with periodic wrap.
    pub fn shift(&self, k: MultiIndex, mu: usize) -> MultiIndex {
        let mut out = k.0;
        out[mu] += 1;
        if out[mu] == self.n[mu] {
            out[mu] = 0;
        }
        MultiIndex(out)
    }

    /// Linear index of `τ_μ k` given the linear index of `k`.
    pub fn shift_linear(&self, i: usize, mu: usize) -> usize {
        let stride = self.strides[mu];
        let coord = (i / stride) % self.n[mu];
        if coord + 1 == self.n[mu] {
            i + stride - self.n[mu] * stride
        } else {
            i + stride
        }
    }

    /// Every site exactly once, in canonical order.
    pub fn sites(&self) -> Sites {
        Sites {
            dims: *self,
            next: 0,
        }
    }

    /// Whether `p` is a valid lattice momentum (`0 ≤ p_μ < N_μ`).
    pub fn contains_momentum(&self, p: [usize; AXES]) -> bool {
        p.iter().zip(self.n.iter()).all(|(a, n)| a < n)
    }
}

impl fmt::Display for LatticeDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}x{}", self.n[0], self.n[1], self.n[2], self.n[3])
    }
}

/// A lattice site `k = (k0, k1, k2, k3)` with every component already reduced
/// into `0..N_μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [usize; AXES]);

impl MultiIndex {
    pub const ORIGIN: MultiIndex = MultiIndex([0; AXES]);
}

/// Iterator over the sites of a lattice in canonical order.
#[derive(Clone, Debug)]
pub struct Sites {
    dims: LatticeDims,
    next: usize,
}

impl Iterator for Sites {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        if self.next >= self.dims.volume {
            return None;
        }
        let k = self.dims.site(self.next);
        self.next += 1;
        Some(k)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.dims.volume - self.next;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Sites {}

/// Complex scalar data living on the sites of a lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    dims: LatticeDims,
    values: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(dims: LatticeDims) -> Self {
        Self {
            dims,
            values: alloc::vec![Complex64::new(0.0, 0.0); dims.volume()],
        }
    }

    pub fn from_values(dims: LatticeDims, values: Vec<Complex64>) -> Result<Self, Error> {
        if values.len() != dims.volume() {
            return Err(Error::LengthMismatch {
                expected: dims.volume(),
                found: values.len(),
            });
        }
        Ok(Self { dims, values })
    }

    pub fn from_fn(dims: LatticeDims, mut f: impl FnMut(MultiIndex) -> Complex64) -> Self {
        Self {
            dims,
            values: dims.sites().map(&mut f).collect(),
        }
    }

    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, k: MultiIndex) -> Complex64 {
        self.values[self.dims.linear(k)]
    }

    /// Forward difference `(Δ_μ f)(k) = f(τ_μ k) − f(k)`.
    pub fn delta(&self, mu: usize) -> ScalarField {
        let values = (0..self.values.len())
            .map(|i| self.values[self.dims.shift_linear(i, mu)] - self.values[i])
            .collect();
        ScalarField {
            dims: self.dims,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Free-function form of [`ScalarField::delta`].
pub fn delta_mu(f: &ScalarField, mu: usize) -> ScalarField {
    f.delta(mu)
}
