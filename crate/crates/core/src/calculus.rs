//! Discrete differential `d^c`, codifferential `δ^c`, and the Dirac-Kähler and
//! Hestenes operators built from them.
//!
//! `d^c` and `δ^c` are written out component by component from their forward
//! difference expressions. [`d_plus_delta_clifford`] computes the same operator
//! as `Σ_μ e_μ Δ_μ Ω` through the Clifford product and exists as an independent
//! cross-check of every sign below.

use core::fmt;

use num_complex::Complex64;

use crate::algebra::{Blade, Multivector};
use crate::fields::{FormField, SiteVector};
use crate::lattice::{ScalarField, AXES};

/// Which operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorTag {
    D,
    Delta,
    DPlusDelta,
    /// `i(d^c + δ^c)`
    DiracKahlerLhs,
    /// `−(d^c + δ^c)Ω e_1 e_2`
    HestenesLhs,
}

impl OperatorTag {
    pub fn apply(self, omega: &FormField) -> FormField {
        match self {
            OperatorTag::D => d_c(omega),
            OperatorTag::Delta => delta_c(omega),
            OperatorTag::DPlusDelta => d_plus_delta(omega),
            OperatorTag::DiracKahlerLhs => dk_apply(omega),
            OperatorTag::HestenesLhs => hestenes_apply(omega),
        }
    }
}

/// Which field equation a residual refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `i(d^c+δ^c)Ω = mΩ`
    DiracKahler,
    /// `−(d^c+δ^c)Ω e_1e_2 = mΩe_0`
    Hestenes,
    /// The Hestenes equation with the sign of the right-hand side reversed.
    HestenesFlipped,
}

impl Equation {
    /// Sign in front of `mΩe_0` for the Hestenes variants.
    pub fn hestenes_sign(self) -> f64 {
        match self {
            Equation::HestenesFlipped => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::DiracKahler => "dirac-kahler",
            Equation::Hestenes => "hestenes",
            Equation::HestenesFlipped => "hestenes-flipped",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquationParams {
    pub mass: Complex64,
    pub equation: Equation,
}

impl EquationParams {
    pub fn new(equation: Equation, mass: Complex64) -> Self {
        Self { mass, equation }
    }

    /// Residual of the selected equation (left side minus right side).
    pub fn residual(&self, omega: &FormField) -> FormField {
        match self.equation {
            Equation::DiracKahler => dk_residual(omega, self.mass),
            eq => hestenes_residual(omega, self.mass, eq.hestenes_sign()),
        }
    }
}

/// Max-abs and root-mean-square of a residual field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualNorms {
    pub max_abs: f64,
    pub rms: f64,
}

impl ResidualNorms {
    pub fn of(field: &FormField) -> Self {
        Self {
            max_abs: field.max_abs(),
            rms: field.rms(),
        }
    }
}

/// Reads `Δ_μ ω^B` from a set of per-axis differences.
struct Diffs<'a>(&'a [SiteVector; AXES]);

impl Diffs<'_> {
    #[inline]
    fn at(&self, mu: usize, b: Blade) -> Complex64 {
        self.0[mu].0[b.index()]
    }
}

/// `d^c` at one site, given `Δ_μ Ω` for each axis.
pub(crate) fn exterior_terms(diffs: &[SiteVector; AXES]) -> SiteVector {
    use Blade as B;
    let w = Diffs(diffs);
    let mut out = SiteVector::zero();
    let o = &mut out.0;

    // grade 0 -> 1
    for mu in 0..AXES {
        o[B::vector(mu).index()] += w.at(mu, B::UNIT);
    }
    // grade 1 -> 2
    for mu in 0..AXES {
        for nu in mu + 1..AXES {
            let target = B::from_mask((1 << mu) | (1 << nu));
            o[target.index()] += w.at(mu, B::vector(nu)) - w.at(nu, B::vector(mu));
        }
    }
    // grade 2 -> 3
    o[B::E012.index()] += w.at(0, B::E12) - w.at(1, B::E02) + w.at(2, B::E01);
    o[B::E013.index()] += w.at(0, B::E13) - w.at(1, B::E03) + w.at(3, B::E01);
    o[B::E023.index()] += w.at(0, B::E23) - w.at(2, B::E03) + w.at(3, B::E02);
    o[B::E123.index()] += w.at(1, B::E23) - w.at(2, B::E13) + w.at(3, B::E12);
    // grade 3 -> 4; grade 4 is annihilated
    o[B::E0123.index()] +=
        w.at(0, B::E123) - w.at(1, B::E023) + w.at(2, B::E013) - w.at(3, B::E012);
    out
}

/// `δ^c` at one site, given `Δ_μ Ω` for each axis.
pub(crate) fn coexterior_terms(diffs: &[SiteVector; AXES]) -> SiteVector {
    use Blade as B;
    let w = Diffs(diffs);
    let mut out = SiteVector::zero();
    let o = &mut out.0;

    // grade 0 is annihilated; grade 1 -> 0
    o[B::UNIT.index()] += w.at(0, B::E0) - w.at(1, B::E1) - w.at(2, B::E2) - w.at(3, B::E3);
    // grade 2 -> 1
    o[B::E0.index()] += w.at(1, B::E01) + w.at(2, B::E02) + w.at(3, B::E03);
    o[B::E1.index()] += w.at(0, B::E01) + w.at(2, B::E12) + w.at(3, B::E13);
    o[B::E2.index()] += w.at(0, B::E02) - w.at(1, B::E12) + w.at(3, B::E23);
    o[B::E3.index()] += w.at(0, B::E03) - w.at(1, B::E13) - w.at(2, B::E23);
    // grade 3 -> 2
    o[B::E01.index()] += -w.at(2, B::E012) - w.at(3, B::E013);
    o[B::E02.index()] += w.at(1, B::E012) - w.at(3, B::E023);
    o[B::E03.index()] += w.at(1, B::E013) + w.at(2, B::E023);
    o[B::E12.index()] += w.at(0, B::E012) - w.at(3, B::E123);
    o[B::E13.index()] += w.at(0, B::E013) + w.at(2, B::E123);
    o[B::E23.index()] += w.at(0, B::E023) - w.at(1, B::E123);
    // grade 4 -> 3
    o[B::E012.index()] += w.at(3, B::E0123);
    o[B::E013.index()] += -w.at(2, B::E0123);
    o[B::E023.index()] += w.at(1, B::E0123);
    o[B::E123.index()] += w.at(0, B::E0123);
    out
}

fn site_diffs(omega: &FormField, i: usize) -> [SiteVector; AXES] {
    let dims = omega.dims();
    let s = omega.sites();
    core::array::from_fn(|mu| s[dims.shift_linear(i, mu)] - s[i])
}

fn apply_local(omega: &FormField, f: impl Fn(&[SiteVector; AXES]) -> SiteVector) -> FormField {
    let sites = (0..omega.dims().volume())
        .map(|i| f(&site_diffs(omega, i)))
        .collect();
    FormField::from_sites(omega.dims(), sites).expect("one vector per site")
}

/// Discrete exterior derivative; raises every grade by one.
pub fn d_c(omega: &FormField) -> FormField {
    apply_local(omega, exterior_terms)
}

/// Discrete codifferential; lowers every grade by one.
pub fn delta_c(omega: &FormField) -> FormField {
    apply_local(omega, coexterior_terms)
}

pub fn d_plus_delta(omega: &FormField) -> FormField {
    apply_local(omega, |w| exterior_terms(w) + coexterior_terms(w))
}

/// `Σ_μ e_μ Δ_μ Ω`, computed with the Clifford product.
pub fn d_plus_delta_clifford(omega: &FormField) -> FormField {
    let mut acc = FormField::zeros(omega.dims());
    for mu in 0..AXES {
        let term = omega.delta(mu).mul_left(&SiteVector::vector(mu));
        acc = &acc + &term;
    }
    acc
}

/// `i(d^c + δ^c)Ω`.
pub fn dk_apply(omega: &FormField) -> FormField {
    d_plus_delta(omega).scale(Complex64::i())
}

/// `i(d^c + δ^c)Ω − mΩ`.
pub fn dk_residual(omega: &FormField, mass: Complex64) -> FormField {
    dk_apply(omega).axpy(-mass, omega).expect("same lattice")
}

/// The five grade-separated Dirac-Kähler equations, indexed by output grade:
///
/// * 0: `iδ^cω¹ − mω⁰`
/// * 1: `i(d^cω⁰ + δ^cω²) − mω¹`
/// * 2: `i(d^cω¹ + δ^cω³) − mω²`
/// * 3: `i(d^cω² + δ^cω⁴) − mω³`
/// * 4: `id^cω³ − mω⁴`
pub fn graded_residuals(omega: &FormField, mass: Complex64) -> [FormField; 5] {
    let dims = omega.dims();
    let grade = |r: usize| omega.grade_part(r).expect("grade in range");
    core::array::from_fn(|r| {
        let mut lhs = FormField::zeros(dims);
        if r >= 1 {
            lhs = &lhs + &d_c(&grade(r - 1));
        }
        if r <= 3 {
            lhs = &lhs + &delta_c(&grade(r + 1));
        }
        lhs.scale(Complex64::i())
            .axpy(-mass, &grade(r))
            .expect("same lattice")
    })
}

/// `−(d^c + δ^c)Ω e_1 e_2`, multiplying on the right by `e_1` then `e_2`.
pub fn hestenes_apply(omega: &FormField) -> FormField {
    -&d_plus_delta(omega)
        .mul_right(&SiteVector::vector(1))
        .mul_right(&SiteVector::vector(2))
}

/// `−(d^c + δ^c)Ω e_1 e_2 − s·m·Ω e_0`; `sign = +1` is the Hestenes equation,
/// `sign = −1` its sign-flipped companion.
pub fn hestenes_residual(omega: &FormField, mass: Complex64, sign: f64) -> FormField {
    hestenes_apply(omega)
        .axpy(-mass * sign, &omega.mul_right(&SiteVector::vector(0)))
        .expect("same lattice")
}

/// Even blades carrying the unknowns of the componentwise Hestenes system, in
/// the order the eight equations are listed.
pub const HESTENES_BLADES: [Blade; 8] = [
    Blade::UNIT,
    Blade::E01,
    Blade::E02,
    Blade::E03,
    Blade::E12,
    Blade::E13,
    Blade::E23,
    Blade::E0123,
];

/// Residuals of the eight scalar difference equations of the Hestenes system.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentwiseResidual {
    /// `residuals[j]` belongs to the equation whose right side is `m ω^{HESTENES_BLADES[j]}`.
    pub residuals: [ScalarField; 8],
    /// Max-abs of the odd part of the input, which the system ignores.
    pub odd_part_max_abs: f64,
}

impl ComponentwiseResidual {
    /// Places residual `j` on blade `HESTENES_BLADES[j]`.
    pub fn pack(&self) -> FormField {
        let dims = self.residuals[0].dims();
        FormField::from_fn(dims, |k| {
            let mut v = SiteVector::zero();
            for (b, r) in HESTENES_BLADES.iter().zip(self.residuals.iter()) {
                v.0[b.index()] = r.at(k);
            }
            v
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.residuals
            .iter()
            .map(ScalarField::max_abs)
            .fold(0.0, f64::max)
    }
}

/// Evaluates the Hestenes equation as eight scalar difference equations on the
/// even components of `omega`.
///
/// The returned fields are "left side minus `s·m·ω^B`". They equal the even
/// blades of `hestenes_residual(Ω)·e_0` when `omega` is even.
pub fn hestenes_residual_componentwise(
    omega: &FormField,
    mass: Complex64,
    sign: f64,
) -> ComponentwiseResidual {
    use Blade as B;
    let dims = omega.dims();
    let odd_part_max_abs = omega.odd_part().max_abs();
    let even = omega.even_part();
    let sm = mass * sign;

    let mut rows: [alloc::vec::Vec<Complex64>; 8] =
        core::array::from_fn(|_| alloc::vec::Vec::with_capacity(dims.volume()));
    for i in 0..dims.volume() {
        let diffs = site_diffs(&even, i);
        let w = Diffs(&diffs);
        let om = |b: Blade| even.sites()[i].0[b.index()];
        let lhs = [
            w.at(0, B::E12) - w.at(1, B::E02) + w.at(2, B::E01) + w.at(3, B::E0123),
            w.at(2, B::UNIT) + w.at(0, B::E02) - w.at(1, B::E12) + w.at(3, B::E23),
            -w.at(1, B::UNIT) - w.at(0, B::E01) - w.at(2, B::E12) - w.at(3, B::E13),
            -w.at(1, B::E23) + w.at(2, B::E13) - w.at(3, B::E12) - w.at(0, B::E0123),
            -w.at(0, B::UNIT) - w.at(1, B::E01) - w.at(2, B::E02) - w.at(3, B::E03),
            -w.at(0, B::E23) + w.at(2, B::E03) - w.at(3, B::E02) - w.at(1, B::E0123),
            w.at(0, B::E13) - w.at(1, B::E03) + w.at(3, B::E01) - w.at(2, B::E0123),
            w.at(3, B::UNIT) + w.at(0, B::E03) - w.at(1, B::E13) - w.at(2, B::E23),
        ];
        for (j, l) in lhs.into_iter().enumerate() {
            rows[j].push(l - sm * om(HESTENES_BLADES[j]));
        }
    }
    let residuals = rows.map(|r| ScalarField::from_values(dims, r).expect("one value per site"));
    ComponentwiseResidual {
        residuals,
        odd_part_max_abs,
    }
}

/// Max-abs deviation between `(d^c+δ^c)(Ω·c)` and `((d^c+δ^c)Ω)·c` for a constant form `c`.
pub fn commutes_with_right_constant(omega: &FormField, c: &Multivector<Complex64>) -> f64 {
    let lhs = d_plus_delta(&omega.mul_right(c));
    let rhs = d_plus_delta(omega).mul_right(c);
    lhs.distance(&rhs).expect("same lattice")
}
