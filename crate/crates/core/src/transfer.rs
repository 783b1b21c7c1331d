//! From Dirac-Kähler solutions to Hestenes solutions.
//!
//! Right multiplication by the constant projectors splits any form into four
//! parts. For a Dirac-Kähler solution `Ω`, the parts `ΩP_{++}` and `ΩP_{--}`
//! solve the Hestenes equation and `ΩP_{-+}`, `ΩP_{+-}` solve it with the mass
//! term reversed. The real forms `Ω_± = ±½(Ω+Ω̄)e_0 ± ½i(Ω−Ω̄)e_1e_2` carry the
//! same `P_{++}` (resp. `P_{--}`) part, and the even parts of `Ω_+`, `Ω_+e_0`,
//! `Ω_+e_1e_2`, `Ω_+e_0e_1e_2` give four real Hestenes solutions when `m` is real.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::Projector;
use crate::calculus::{dk_residual, hestenes_residual, Equation};
use crate::error::Error;
use crate::fields::{FormField, SiteVector};
use crate::report::Report;

/// Route agreement and parity/realness bound, relative to `max_abs(Ω)`.
pub const QUADRUPLE_TOL: f64 = 1e-14;
/// Relative singular-value cut for the independence rank.
pub const RANK_TOL: f64 = 1e-10;

fn e0() -> SiteVector {
    SiteVector::vector(0)
}

fn e12() -> SiteVector {
    SiteVector::vector(1).product(&SiteVector::vector(2))
}

fn e012() -> SiteVector {
    e0().product(&e12())
}

/// `max_abs(Ω)·max(1, |m|)`: the size against which residuals are measured.
pub fn residual_scale(omega: &FormField, mass: Complex64) -> f64 {
    omega.max_abs() * mass.norm().max(1.0)
}

/// The four projections `ΩP_{++}, ΩP_{-+}, ΩP_{+-}, ΩP_{--}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionResult {
    pub parts: [(Projector, FormField); 4],
}

impl DecompositionResult {
    pub fn reconstruct(&self) -> FormField {
        let dims = self.parts[0].1.dims();
        self.parts
            .iter()
            .fold(FormField::zeros(dims), |acc, (_, f)| &acc + f)
    }

    pub fn part(&self, p: Projector) -> Option<&FormField> {
        self.parts.iter().find(|(q, _)| *q == p).map(|(_, f)| f)
    }
}

pub fn decompose(omega: &FormField) -> DecompositionResult {
    DecompositionResult {
        parts: Projector::COMPOUND.map(|p| (p, omega.mul_right(&p.multivector()))),
    }
}

/// Which of the two real forms to build on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `Ω_+` with `P_{++}`
    Plus,
    /// `Ω_-` with `P_{--}`
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn projector(self) -> Projector {
        match self {
            Branch::Plus => Projector::PlusPlus,
            Branch::Minus => Projector::MinusMinus,
        }
    }
}

/// `Ω_± = ±½(Ω+Ω̄)e_0 ± (i/2)(Ω−Ω̄)e_1e_2`.
pub fn omega_pm(omega: &FormField, branch: Branch) -> FormField {
    let s = branch.sign();
    let bar = omega.conjugate();
    let sum = (omega + &bar)
        .mul_right(&e0())
        .scale(Complex64::new(0.5 * s, 0.0));
    let diff = (omega - &bar)
        .mul_right(&e12())
        .scale(Complex64::new(0.0, 0.5 * s));
    &sum + &diff
}

/// The four even forms `Ω_j^ev`, `j = 1..4`.
#[derive(Clone, Debug, PartialEq)]
pub struct HestenesQuadruple {
    pub branch: Branch,
    pub fields: [FormField; 4],
    /// Max-abs deviation between the product route and the closed forms.
    pub route_deviation: f64,
}

/// `Ω_j` for the branch, before taking even parts: `Ω_±`, `Ω_±e_0`,
/// `Ω_±e_1e_2`, `Ω_±e_0e_1e_2`.
pub fn quadruple_full(omega: &FormField, branch: Branch) -> [FormField; 4] {
    let base = omega_pm(omega, branch);
    [
        base.clone(),
        base.mul_right(&e0()),
        base.mul_right(&e12()),
        base.mul_right(&e012()),
    ]
}

/// Closed forms of `Ω_j^ev` in terms of the even and odd parts of `Ω`.
/// The minus branch is the negative of the plus branch because `Ω_- = −Ω_+`.
pub fn quadruple_closed_form(omega: &FormField, branch: Branch) -> [FormField; 4] {
    let bar = omega.conjugate();
    let (ev, od) = (omega.even_part(), omega.odd_part());
    let (bev, bod) = (bar.even_part(), bar.odd_part());
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    let re_ev = (&ev + &bev).scale(half);
    let re_od = (&od + &bod).scale(half);
    let im_ev = (&ev - &bev).scale(half_i);
    let im_od = (&od - &bod).scale(half_i);

    let fields = [
        &re_od.mul_right(&e0()) + &im_ev.mul_right(&e12()),
        &re_ev + &im_od.mul_right(&e012()),
        &re_od.mul_right(&e012()) - &im_ev,
        &re_ev.mul_right(&e12()) - &im_od.mul_right(&e0()),
    ];
    let s = Complex64::new(branch.sign(), 0.0);
    fields.map(|f| f.scale(s))
}

/// Builds the quadruple by products and even parts, and checks it against
/// the closed forms.
pub fn hestenes_quadruple(omega: &FormField, branch: Branch) -> Result<HestenesQuadruple, Error> {
    let fields = quadruple_full(omega, branch).map(|f| f.even_part());
    let closed = quadruple_closed_form(omega, branch);
    let route_deviation = fields
        .iter()
        .zip(closed.iter())
        .map(|(a, b)| a.distance(b).expect("same lattice"))
        .fold(0.0, f64::max);
    let tolerance = QUADRUPLE_TOL * omega.max_abs();
    if route_deviation > tolerance {
        return Err(Error::RouteDisagreement {
            deviation: route_deviation,
            tolerance,
        });
    }
    Ok(HestenesQuadruple {
        branch,
        fields,
        route_deviation,
    })
}

impl HestenesQuadruple {
    /// Max-abs Hestenes residual of each field at mass `m`.
    pub fn residuals(&self, mass: Complex64) -> [f64; 4] {
        core::array::from_fn(|j| hestenes_residual(&self.fields[j], mass, 1.0).max_abs())
    }

    pub fn max_odd(&self) -> f64 {
        self.fields
            .iter()
            .map(|f| f.odd_part().max_abs())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.fields
            .iter()
            .map(FormField::max_imag)
            .fold(0.0, f64::max)
    }
}

/// Residuals of the four projected parts of a Dirac-Kähler solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Prop4Report {
    pub dk_residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub precondition_ok: bool,
    /// `(projector, equation checked, max-abs residual)`
    pub residuals: [(Projector, Equation, f64); 4],
}

impl Prop4Report {
    pub fn passed(&self) -> bool {
        self.precondition_ok
            && self
                .residuals
                .iter()
                .all(|(_, _, r)| *r <= self.tolerance * self.scale)
    }

    pub fn to_report(&self) -> Report {
        let bound = self.tolerance * self.scale;
        let mut r = Report::new();
        r.check("dk_residual", self.dk_residual, bound);
        r.check_flag("precondition", self.precondition_ok);
        for (p, eq, res) in &self.residuals {
            r.check(alloc::format!("P{}.{}", p.tag(), eq), *res, bound);
        }
        r
    }
}

/// Checks that `ΩP_{++}`, `ΩP_{--}` solve the Hestenes equation and `ΩP_{-+}`,
/// `ΩP_{+-}` the sign-flipped one, given that `Ω` solves Dirac-Kähler at `m`.
pub fn verify_prop4(omega: &FormField, mass: Complex64, tolerance: f64) -> Prop4Report {
    let scale = residual_scale(omega, mass);
    let dk = dk_residual(omega, mass).max_abs();
    let residuals = Projector::COMPOUND.map(|p| {
        let eq = match p {
            Projector::PlusPlus | Projector::MinusMinus => Equation::Hestenes,
            _ => Equation::HestenesFlipped,
        };
        let part = omega.mul_right(&p.multivector());
        (
            p,
            eq,
            hestenes_residual(&part, mass, eq.hestenes_sign()).max_abs(),
        )
    });
    Prop4Report {
        dk_residual: dk,
        scale,
        tolerance,
        precondition_ok: dk <= tolerance * scale,
        residuals,
    }
}

/// Numerical rank of four fields viewed as vectors of coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

pub fn verify_quadruple_independence(q: &HestenesQuadruple) -> IndependenceReport {
    fields_rank(&q.fields)
}

pub fn fields_rank(fields: &[FormField]) -> IndependenceReport {
    let rows = fields.first().map_or(0, FormField::len);
    let cols: Vec<Complex64> = fields.iter().flat_map(|f| f.coeffs()).collect();
    let m = DMatrix::from_column_slice(rows, fields.len(), &cols);
    let mut singular_values: Vec<f64> = m.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let top = singular_values.first().copied().unwrap_or(0.0);
    let rank = if top == 0.0 {
        0
    } else {
        singular_values
            .iter()
            .filter(|s| **s > RANK_TOL * top)
            .count()
    };
    IndependenceReport {
        singular_values,
        rank,
    }
}

/// Full check of the quadruple for a Dirac-Kähler solution `Ω` at mass `m`:
/// route agreement, evenness, Hestenes residuals, realness and rank.
///
/// Realness is enforced only for real `m`; otherwise it is reported as
/// informational.
pub fn verify_quadruple(
    omega: &FormField,
    mass: Complex64,
    branch: Branch,
    tolerance: f64,
) -> Report {
    let mut r = Report::new();
    let scale = omega.max_abs();
    let q = match hestenes_quadruple(omega, branch) {
        Ok(q) => q,
        Err(e) => {
            r.push("error", e);
            r.fail();
            return r;
        }
    };
    r.check("route_deviation", q.route_deviation, QUADRUPLE_TOL * scale);
    r.check("odd_part", q.max_odd(), QUADRUPLE_TOL * scale);
    if mass.im == 0.0 {
        r.check("imag_part", q.max_imag(), QUADRUPLE_TOL * scale);
    } else {
        r.push("imag_part_info", format_args!("{:e}", q.max_imag()));
    }
    let bound = tolerance * residual_scale(omega, mass);
    for (j, res) in q.residuals(mass).iter().enumerate() {
        r.check(alloc::format!("hestenes_residual_{}", j + 1), *res, bound);
    }
    let ind = verify_quadruple_independence(&q);
    r.push("rank", ind.rank);
    for (j, s) in ind.singular_values.iter().enumerate() {
        r.push(
            alloc::format!("singular_value_{}", j + 1),
            format_args!("{s:e}"),
        );
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Blade;
    use crate::fields::{projector_form, random_field, random_field_filtered, unit_form};
    use crate::lattice::LatticeDims;
    use crate::spectral::{build_dk_solution, build_symbol, eigen_solve};

    fn d3() -> LatticeDims {
        LatticeDims::cubic(3).unwrap()
    }

    fn constant_random(seed: u64) -> FormField {
        FormField::constant(
            d3(),
            &random_field(LatticeDims::cubic(1).unwrap(), seed).sites()[0],
        )
    }

    #[test]
    fn decompose_unit() {
        let dec = decompose(&unit_form(d3()));
        assert_eq!(dec.reconstruct(), unit_form(d3()));
        for (p, f) in &dec.parts {
            assert_eq!(*f, projector_form(*p, d3()));
        }
    }

    #[test]
    fn decompose_zero() {
        let dec = decompose(&FormField::zeros(d3()));
        assert!(dec.parts.iter().all(|(_, f)| f.max_abs() == 0.0));
    }

    #[test]
    fn decompose_reconstructs() {
        for seed in 0..10 {
            let f = random_field(d3(), seed);
            assert!(decompose(&f).reconstruct().distance(&f).unwrap() <= 1e-14 * f.max_abs());
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let f = random_field(d3(), 3);
        for p in Projector::ALL {
            let once = f.mul_right(&p.multivector());
            let twice = once.mul_right(&p.multivector());
            assert!(once.distance(&twice).unwrap() < 1e-15);
        }
    }

    #[test]
    fn omega_pm_is_real() {
        let f = random_field(d3(), 4);
        assert_eq!(omega_pm(&f, Branch::Plus).max_imag(), 0.0);
        assert_eq!(omega_pm(&f, Branch::Minus).max_imag(), 0.0);
    }

    #[test]
    fn omega_plus_of_real_field() {
        let f = random_field(d3(), 5).real_part();
        assert_eq!(omega_pm(&f, Branch::Plus), f.mul_right(&e0()));
    }

    #[test]
    fn omega_pm_carries_projected_part() {
        for seed in 0..5 {
            let f = random_field(d3(), seed);
            for branch in [Branch::Plus, Branch::Minus] {
                let p = branch.projector().multivector();
                let lhs = f.mul_right(&p);
                let rhs = omega_pm(&f, branch).mul_right(&p);
                assert!(lhs.distance(&rhs).unwrap() <= 1e-14 * f.max_abs());
            }
        }
    }

    #[test]
    fn quadruple_of_real_even_field() {
        let f = random_field_filtered(d3(), 6, true, Blade::is_even);
        let q = hestenes_quadruple(&f, Branch::Plus).unwrap();
        assert_eq!(q.fields[0].max_abs(), 0.0);
        assert!(q.fields[1].distance(&f).unwrap() == 0.0);
    }

    #[test]
    fn quadruple_routes_agree() {
        for seed in 0..10 {
            let f = random_field(d3(), seed);
            for branch in [Branch::Plus, Branch::Minus] {
                let q = hestenes_quadruple(&f, branch).unwrap();
                assert!(q.route_deviation <= 1e-14 * f.max_abs());
                assert!(q.max_odd() == 0.0);
                assert!(q.max_imag() == 0.0);
            }
        }
    }

    #[test]
    fn quadruple_at_zero_mass_constant() {
        let f = constant_random(7);
        let zero = Complex64::new(0.0, 0.0);
        let q = hestenes_quadruple(&f, Branch::Plus).unwrap();
        assert_eq!(q.residuals(zero), [0.0; 4]);
        let rep = verify_quadruple(&f, zero, Branch::Plus, 1e-12);
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.get("rank"), Some("4"));
    }

    #[test]
    fn independence_rank() {
        let zero = hestenes_quadruple(&FormField::zeros(d3()), Branch::Plus).unwrap();
        assert_eq!(verify_quadruple_independence(&zero).rank, 0);
        let q = hestenes_quadruple(&constant_random(8), Branch::Plus).unwrap();
        let base = verify_quadruple_independence(&q).rank;
        let doubled: Vec<FormField> = q
            .fields
            .iter()
            .chain(q.fields.iter())
            .map(|f| f.scale(Complex64::new(2.0, 0.0)))
            .chain(q.fields.iter().cloned())
            .collect();
        assert_eq!(fields_rank(&doubled).rank, base);
    }

    #[test]
    fn prop4_on_constant_zero_mass() {
        let rep = verify_prop4(&constant_random(9), Complex64::new(0.0, 0.0), 1e-12);
        assert!(rep.passed());
        assert!(rep.residuals.iter().all(|(_, _, r)| *r == 0.0));
    }

    #[test]
    fn prop4_flags_non_solution() {
        let rep = verify_prop4(&random_field(d3(), 10), Complex64::new(1.0, 0.0), 1e-12);
        assert!(!rep.precondition_ok);
        assert!(!rep.passed());
        assert!(!rep.to_report().passed());
    }

    #[test]
    fn prop4_on_plane_wave_solutions() {
        let d = LatticeDims::cubic(4).unwrap();
        let p = [1, 3, 2, 1];
        let sp = eigen_solve(&build_symbol(p, d).unwrap()).unwrap();
        for pair in &sp.pairs {
            let (omega, m) = build_dk_solution(p, pair, d).unwrap();
            let rep = verify_prop4(&omega, m, 1e-12);
            assert!(rep.passed(), "{}", rep.to_report());
        }
    }

    /// A spatial half-momentum gives real eigenvalues ±2, so the realness
    /// argument applies to a non-constant solution.
    #[test]
    fn quadruple_at_real_nonzero_mass() {
        let d = LatticeDims::new([2, 2, 1, 1]).unwrap();
        let p = [0, 1, 0, 0];
        let sp = eigen_solve(&build_symbol(p, d).unwrap()).unwrap();
        let mut seen = 0;
        for pair in &sp.pairs {
            assert!(pair.lambda.im.abs() < 1e-14);
            let m = Complex64::new(pair.lambda.re, 0.0);
            assert!((m.re.abs() - 2.0).abs() < 1e-14);
            let (omega, _) = build_dk_solution(p, pair, d).unwrap();
            for branch in [Branch::Plus, Branch::Minus] {
                let rep = verify_quadruple(&omega, m, branch, 1e-12);
                assert!(rep.passed(), "{rep}");
            }
            seen += 1;
        }
        assert_eq!(seen, 16);
    }
}
