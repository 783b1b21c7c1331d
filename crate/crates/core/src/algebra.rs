//! Per-site Clifford algebra of the cochain complex.
//!
//! A basis element at a site is a subset of the axes `{0,1,2,3}`, stored as a
//! 4-bit mask with bit `μ` standing for `e_μ`. Mask `0` is the unit `x`, mask
//! `0b1111` is the volume element `e_{0123}`. Every blade is oriented with its
//! indices in ascending order, so for example mask `0b0110` is `e_{12} = e_1 e_2`.
//!
//! The product of two blades is computed once by rewriting the concatenated
//! index word into canonical form: adjacent distinct indices anticommute and
//! equal adjacent indices contract to `g_μμ x` with `g = diag(1, -1, -1, -1)`.
//! Products between different sites vanish, so the algebra is purely local
//! and everything here is site-independent.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, Zero};

/// Number of basis blades per site.
pub const BLADES: usize = 16;

/// Diagonal of the Minkowski metric, `g_μμ`.
pub const METRIC: [i8; 4] = [1, -1, -1, -1];

/// A basis blade, identified by the set of axes it spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(u8);

impl Blade {
    pub const UNIT: Blade = Blade(0);
    pub const E0: Blade = Blade(0b0001);
    pub const E1: Blade = Blade(0b0010);
    pub const E2: Blade = Blade(0b0100);
    pub const E3: Blade = Blade(0b1000);
    pub const E01: Blade = Blade(0b0011);
    pub const E02: Blade = Blade(0b0101);
    pub const E03: Blade = Blade(0b1001);
    pub const E12: Blade = Blade(0b0110);
    pub const E13: Blade = Blade(0b1010);
    pub const E23: Blade = Blade(0b1100);
    pub const E012: Blade = Blade(0b0111);
    pub const E013: Blade = Blade(0b1011);
    pub const E023: Blade = Blade(0b1101);
    pub const E123: Blade = Blade(0b1110);
    pub const E0123: Blade = Blade(0b1111);

    /// Blade from a mask; panics if the mask has bits above bit 3.
    pub const fn from_mask(mask: u8) -> Blade {
        assert!(mask < 16, "blade mask out of range");
        Blade(mask)
    }

    /// The generator `e_μ`.
    pub const fn vector(mu: usize) -> Blade {
        assert!(mu < 4, "axis out of range");
        Blade(1 << mu)
    }

    pub const fn mask(self) -> u8 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_even(self) -> bool {
        self.grade().is_multiple_of(2)
    }

    pub fn contains(self, mu: usize) -> bool {
        self.0 & (1 << mu) != 0
    }

    /// All 16 blades in ascending mask order.
    pub fn all() -> impl Iterator<Item = Blade> + Clone {
        (0..BLADES as u8).map(Blade)
    }

    /// Axes spanned by the blade, ascending.
    pub fn axes(self) -> impl Iterator<Item = usize> {
        (0..4).filter(move |&mu| self.contains(mu))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("x");
        }
        f.write_str("e")?;
        for mu in self.axes() {
            write!(f, "{mu}")?;
        }
        Ok(())
    }
}

/// Structure constants of the per-site algebra: `A·B = sign · result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTable {
    sign: [[i8; BLADES]; BLADES],
    result: [[u8; BLADES]; BLADES],
}

static TABLE: CliffordTable = CliffordTable::build();

/// The shared, compile-time-built product table.
pub fn table() -> &'static CliffordTable {
    &TABLE
}

/// Builds a fresh product table.
pub fn build_table() -> CliffordTable {
    CliffordTable::build()
}

impl CliffordTable {
    pub const fn build() -> CliffordTable {
        let mut sign = [[0i8; BLADES]; BLADES];
        let mut result = [[0u8; BLADES]; BLADES];
        let mut a = 0;
        while a < BLADES {
            let mut b = 0;
            while b < BLADES {
                let (s, r) = rewrite_product(a as u8, b as u8);
                sign[a][b] = s;
                result[a][b] = r;
                b += 1;
            }
            a += 1;
        }
        CliffordTable { sign, result }
    }

    #[inline]
    pub fn product(&self, a: Blade, b: Blade) -> (i8, Blade) {
        (
            self.sign[a.index()][b.index()],
            Blade(self.result[a.index()][b.index()]),
        )
    }
}

/// Canonicalizes the word `indices(a) ++ indices(b)`: bubble sort, flipping
/// the sign on every swap of distinct neighbours and contracting equal
/// neighbours to the metric factor.
const fn rewrite_product(a: u8, b: u8) -> (i8, u8) {
    let mut word = [0u8; 8];
    let mut len = 0;
    let mut mu = 0;
    while mu < 4 {
        if a & (1 << mu) != 0 {
            word[len] = mu as u8;
            len += 1;
        }
        mu += 1;
    }
    mu = 0;
    while mu < 4 {
        if b & (1 << mu) != 0 {
            word[len] = mu as u8;
            len += 1;
        }
        mu += 1;
    }

    let mut sign: i8 = 1;
    let mut changed = true;
    while changed {
        changed = false;
        let mut j = 0;
        while j + 1 < len {
            if word[j] > word[j + 1] {
                let t = word[j];
                word[j] = word[j + 1];
                word[j + 1] = t;
                sign = -sign;
                changed = true;
            } else if word[j] == word[j + 1] {
                sign *= METRIC[word[j] as usize];
                let mut m = j;
                while m + 2 < len {
                    word[m] = word[m + 2];
                    m += 1;
                }
                len -= 2;
                changed = true;
                // the pair is gone; re-examine from the same position
                continue;
            }
            j += 1;
        }
    }

    let mut mask = 0u8;
    let mut j = 0;
    while j < len {
        mask |= 1 << word[j];
        j += 1;
    }
    (sign, mask)
}

/// Coefficient types usable in a [`Multivector`].
pub trait Scalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Exact coefficients: Gaussian rationals.
pub type ExactScalar = Complex<Rational64>;

/// One element of the per-site algebra: 16 coefficients in ascending blade order.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<T>(pub [T; BLADES]);

impl<T: Copy> Copy for Multivector<T> {}

impl<T: Scalar> Multivector<T> {
    pub fn zero() -> Self {
        Multivector(core::array::from_fn(|_| T::zero()))
    }

    /// The unit `x`.
    pub fn unit() -> Self {
        Self::basis(Blade::UNIT)
    }

    pub fn basis(b: Blade) -> Self {
        let mut m = Self::zero();
        m.0[b.index()] = T::one();
        m
    }

    /// The generator `e_μ`.
    pub fn vector(mu: usize) -> Self {
        Self::basis(Blade::vector(mu))
    }

    pub fn coeff(&self, b: Blade) -> &T {
        &self.0[b.index()]
    }

    pub fn scale(&self, s: &T) -> Self {
        Multivector(core::array::from_fn(|i| self.0[i].clone() * s.clone()))
    }

    /// Keeps only the blades for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(Blade) -> bool) -> Self {
        Multivector(core::array::from_fn(|i| {
            if keep(Blade(i as u8)) {
                self.0[i].clone()
            } else {
                T::zero()
            }
        }))
    }

    pub fn grade_part(&self, r: usize) -> Self {
        self.filter(|b| b.grade() == r)
    }

    pub fn even_part(&self) -> Self {
        self.filter(Blade::is_even)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|b| !b.is_even())
    }

    /// Clifford product using the shared structure constants.
    pub fn product(&self, rhs: &Self) -> Self {
        let t = table();
        let mut out = Self::zero();
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (s, r) = t.product(Blade(i as u8), Blade(j as u8));
                let term = a.clone() * b.clone();
                let slot = &mut out.0[r.index()];
                *slot = if s > 0 {
                    slot.clone() + term
                } else {
                    slot.clone() - term
                };
            }
        }
        out
    }

    /// Product of several factors, left to right.
    pub fn product_of(factors: &[&Self]) -> Self {
        factors.iter().fold(Self::unit(), |acc, f| acc.product(f))
    }
}

impl<T: Scalar> Add for Multivector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Multivector(core::array::from_fn(|i| {
            self.0[i].clone() + rhs.0[i].clone()
        }))
    }
}

impl<T: Scalar> Sub for Multivector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Multivector(core::array::from_fn(|i| {
            self.0[i].clone() - rhs.0[i].clone()
        }))
    }
}

impl<T: Scalar> Neg for Multivector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Multivector(core::array::from_fn(|i| -self.0[i].clone()))
    }
}

impl<T: Scalar> AddAssign for Multivector<T> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a = a.clone() + b;
        }
    }
}

impl<T: Scalar> Mul for &Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: Self) -> Multivector<T> {
        self.product(rhs)
    }
}

impl<T: Scalar> Mul for Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: Self) -> Multivector<T> {
        self.product(&rhs)
    }
}

impl Multivector<Complex64> {
    pub fn conj(&self) -> Self {
        Multivector(core::array::from_fn(|i| self.0[i].conj()))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Multivector<ExactScalar> {
    /// Floating-point image; dyadic rationals convert exactly.
    pub fn to_complex64(&self) -> Multivector<Complex64> {
        let f = |q: &Rational64| *q.numer() as f64 / *q.denom() as f64;
        Multivector(core::array::from_fn(|i| {
            Complex64::new(f(&self.0[i].re), f(&self.0[i].im))
        }))
    }
}

/// The eight constant projectors built from `P_{±0} = ½(x ± e0)` and
/// `P_{±12} = ½(x ± i e1 e2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Projector {
    PlusZero,
    MinusZero,
    PlusTwelve,
    MinusTwelve,
    /// `P_{+0} P_{+12}`
    PlusPlus,
    /// `P_{+0} P_{-12}`
    PlusMinus,
    /// `P_{-0} P_{+12}`
    MinusPlus,
    /// `P_{-0} P_{-12}`
    MinusMinus,
}

impl Projector {
    pub const ALL: [Projector; 8] = [
        Projector::PlusZero,
        Projector::MinusZero,
        Projector::PlusTwelve,
        Projector::MinusTwelve,
        Projector::PlusPlus,
        Projector::PlusMinus,
        Projector::MinusPlus,
        Projector::MinusMinus,
    ];

    /// The four compound projectors, in the order `++, -+, +-, --`.
    pub const COMPOUND: [Projector; 4] = [
        Projector::PlusPlus,
        Projector::MinusPlus,
        Projector::PlusMinus,
        Projector::MinusMinus,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Projector::PlusZero => "+0",
            Projector::MinusZero => "-0",
            Projector::PlusTwelve => "+12",
            Projector::MinusTwelve => "-12",
            Projector::PlusPlus => "++",
            Projector::PlusMinus => "+-",
            Projector::MinusPlus => "-+",
            Projector::MinusMinus => "--",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Projector> {
        Projector::ALL.into_iter().find(|p| p.tag() == tag)
    }

    /// For a compound projector, its `(P_{±0}, P_{±12})` factors.
    pub fn factors(self) -> Option<(Projector, Projector)> {
        use Projector::*;
        match self {
            PlusPlus => Some((PlusZero, PlusTwelve)),
            PlusMinus => Some((PlusZero, MinusTwelve)),
            MinusPlus => Some((MinusZero, PlusTwelve)),
            MinusMinus => Some((MinusZero, MinusTwelve)),
            _ => None,
        }
    }

    /// Exact coefficients of the projector.
    pub fn exact(self) -> Multivector<ExactScalar> {
        let half = Rational64::new(1, 2);
        let zero = Rational64::zero();
        let mut m = Multivector::<ExactScalar>::zero();
        m.0[Blade::UNIT.index()] = Complex::new(half, zero);
        match self {
            Projector::PlusZero => m.0[Blade::E0.index()] = Complex::new(half, zero),
            Projector::MinusZero => m.0[Blade::E0.index()] = Complex::new(-half, zero),
            Projector::PlusTwelve => m.0[Blade::E12.index()] = Complex::new(zero, half),
            Projector::MinusTwelve => m.0[Blade::E12.index()] = Complex::new(zero, -half),
            compound => {
                let (a, b) = compound.factors().expect("compound projector");
                return a.exact().product(&b.exact());
            }
        }
        m
    }

    pub fn multivector(self) -> Multivector<Complex64> {
        self.exact().to_complex64()
    }
}

/// Matrix of left multiplication `y ↦ a·y` in the blade basis (row = output blade).
pub fn left_mul_matrix(a: &Multivector<Complex64>) -> [[Complex64; BLADES]; BLADES] {
    let mut m = [[Complex64::zero(); BLADES]; BLADES];
    let t = table();
    for i in Blade::all() {
        for j in Blade::all() {
            let (s, r) = t.product(i, j);
            m[r.index()][j.index()] += a.0[i.index()] * f64::from(s);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    type Ex = Multivector<ExactScalar>;

    /// Independent sign rule: count inversions between the two index sets and
    /// collect metric factors of the shared axes.
    fn bitwise_product(a: u8, b: u8) -> (i8, u8) {
        let mut swaps = 0;
        for i in 0..4 {
            if b & (1 << i) != 0 {
                swaps += (a >> (i + 1)).count_ones();
            }
        }
        let mut s: i8 = if swaps % 2 == 0 { 1 } else { -1 };
        for mu in 0..4 {
            if a & b & (1 << mu) != 0 {
                s *= METRIC[mu];
            }
        }
        (s, a ^ b)
    }

    #[test]
    fn table_matches_bitwise_rule() {
        let t = table();
        for a in 0..16u8 {
            for b in 0..16u8 {
                let (s, r) = t.product(Blade(a), Blade(b));
                assert_eq!((s, r.mask()), bitwise_product(a, b), "{a} * {b}");
            }
        }
        assert_eq!(&build_table(), t);
    }

    #[test]
    fn generator_products() {
        let t = table();
        assert_eq!(t.product(Blade::E0, Blade::E0), (1, Blade::UNIT));
        assert_eq!(t.product(Blade::E1, Blade::E1), (-1, Blade::UNIT));
        assert_eq!(t.product(Blade::E1, Blade::E2), (1, Blade::E12));
        assert_eq!(t.product(Blade::E2, Blade::E1), (-1, Blade::E12));
        assert_eq!(t.product(Blade::E12, Blade::E12), (-1, Blade::UNIT));
    }

    /// e1 e2 e1 e2 by explicit step-by-step rewriting.
    #[test]
    fn bivector_square_by_hand() {
        // e1 e2 e1 e2 = -e1 e1 e2 e2 = -(g11)(g22) x = -x
        let g11 = METRIC[1];
        let g22 = METRIC[2];
        assert_eq!(
            table().product(Blade::E12, Blade::E12),
            (-g11 * g22, Blade::UNIT)
        );
    }

    #[test]
    fn unit_is_neutral() {
        let t = table();
        for b in Blade::all() {
            assert_eq!(t.product(Blade::UNIT, b), (1, b));
            assert_eq!(t.product(b, Blade::UNIT), (1, b));
        }
    }

    #[test]
    fn generators_anticommute() {
        let t = table();
        for mu in 0..4 {
            for nu in 0..4 {
                let a = Multivector::<i64>::vector(mu);
                let b = Multivector::<i64>::vector(nu);
                let sym = a.product(&b) + b.product(&a);
                let expected = if mu == nu {
                    Multivector::<i64>::unit().scale(&(2 * i64::from(METRIC[mu])))
                } else {
                    Multivector::zero()
                };
                assert_eq!(sym, expected);
                if mu != nu {
                    let (s1, r1) = t.product(Blade::vector(mu), Blade::vector(nu));
                    let (s2, r2) = t.product(Blade::vector(nu), Blade::vector(mu));
                    assert_eq!((r1, s1), (r2, -s2));
                }
            }
        }
    }

    #[test]
    fn associativity_exhaustive() {
        let t = table();
        for a in Blade::all() {
            for b in Blade::all() {
                for c in Blade::all() {
                    let (s1, ab) = t.product(a, b);
                    let (s2, l) = t.product(ab, c);
                    let (s3, bc) = t.product(b, c);
                    let (s4, r) = t.product(a, bc);
                    assert_eq!((s1 * s2, l), (s3 * s4, r));
                }
            }
        }
    }

    #[test]
    fn rule_three_names_ascending_products() {
        // e_{μ1}...e_{μs} with ascending indices is the blade itself
        for b in Blade::all() {
            let word = Multivector::<i64>::product_of(
                &b.axes()
                    .map(Multivector::<i64>::vector)
                    .collect::<alloc::vec::Vec<_>>()
                    .iter()
                    .collect::<alloc::vec::Vec<_>>(),
            );
            assert_eq!(word, Multivector::basis(b));
        }
    }

    #[test]
    fn projector_coefficients() {
        let p = Projector::PlusZero.multivector();
        assert_eq!(p.0[0], Complex64::new(0.5, 0.0));
        assert_eq!(p.0[Blade::E0.index()], Complex64::new(0.5, 0.0));
        assert_eq!(p.0.iter().filter(|z| !z.is_zero()).count(), 2);
        let p = Projector::PlusTwelve.multivector();
        assert_eq!(p.0[0], Complex64::new(0.5, 0.0));
        assert_eq!(p.0[Blade::E12.index()], Complex64::new(0.0, 0.5));
        assert_eq!(p.0.iter().filter(|z| !z.is_zero()).count(), 2);
    }

    #[test]
    fn projectors_are_idempotent_exactly() {
        for p in Projector::ALL {
            let m = p.exact();
            assert_eq!(m.product(&m), m, "{}", p.tag());
        }
    }

    #[test]
    fn compound_projectors_sum_to_unit() {
        let sum = Projector::COMPOUND
            .iter()
            .fold(Ex::zero(), |acc, p| acc + p.exact());
        assert_eq!(sum, Ex::unit());
    }

    #[test]
    fn tags_round_trip() {
        for p in Projector::ALL {
            assert_eq!(Projector::from_tag(p.tag()), Some(p));
        }
        assert_eq!(Projector::from_tag("+3"), None);
    }

    #[test]
    fn left_matrix_reproduces_product() {
        let a = Multivector(core::array::from_fn(|i| {
            Complex64::new(i as f64 * 0.25 - 1.0, 0.5 - i as f64 * 0.125)
        }));
        let y = Multivector(core::array::from_fn(|i| {
            Complex64::new((i * i) as f64 * 0.01, -(i as f64))
        }));
        let m = left_mul_matrix(&a);
        let direct = a.product(&y);
        for r in 0..BLADES {
            let v: Complex64 = (0..BLADES).map(|c| m[r][c] * y.0[c]).sum();
            assert!((v - direct.0[r]).norm() < 1e-12);
        }
    }

    #[test]
    fn display_names() {
        assert_eq!(alloc::format!("{}", Blade::UNIT), "x");
        assert_eq!(alloc::format!("{}", Blade::E013), "e013");
    }
}
