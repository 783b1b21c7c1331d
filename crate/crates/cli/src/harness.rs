//! Seeded verification suites. Each suite returns a [`Report`] of worst-case
//! deviations and fails if any exceeds its tolerance.

use std::fmt;
use std::str::FromStr;

use dkcalc::algebra::{table, ExactScalar, BLADES, METRIC};
use dkcalc::calculus::{
    d_c, d_plus_delta, d_plus_delta_clifford, delta_c, dk_apply, dk_residual, hestenes_residual,
    hestenes_residual_componentwise,
};
use dkcalc::fields::{plane_wave, random_field, random_field_filtered};
use dkcalc::lattice::AXES;
use dkcalc::report::Report;
use dkcalc::spectral::{build_dk_solution, build_symbol, eigen_solve, propagator_solve};
use dkcalc::transfer::{
    decompose, omega_pm, residual_scale, verify_prop4, verify_quadruple, Branch,
};
use dkcalc::{Blade, Complex64, FormField, LatticeDims, Multivector, Projector, SiteVector};
use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PROP1_TOL: f64 = 1e-13;
pub const PROP2_TOL: f64 = 1e-15;
pub const DECOMPOSE_TOL: f64 = 1e-14;
pub const NILPOTENCY_TOL: f64 = 1e-13;
pub const MATRIX_TOL: f64 = 1e-13;
pub const SOLUTION_TOL: f64 = 1e-12;
pub const SYMBOL_TOL: f64 = 1e-13;
pub const PROP4_TOL: f64 = 1e-12;
pub const QUADRUPLE_TOL: f64 = 1e-14;
pub const COMPONENTWISE_TOL: f64 = 1e-14;
pub const PROPAGATOR_TOL: f64 = 1e-11;

/// Momenta sampled by the spectral suites and sources used by the propagator suite.
pub const MIN_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Clifford,
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Nilpotency,
    Hestenes,
    Matrix,
    Spectral,
    Propagator,
    All,
}

impl Suite {
    pub const EACH: [Suite; 11] = [
        Suite::Clifford,
        Suite::Prop1,
        Suite::Prop2,
        Suite::Prop3,
        Suite::Prop4,
        Suite::Prop5,
        Suite::Nilpotency,
        Suite::Hestenes,
        Suite::Matrix,
        Suite::Spectral,
        Suite::Propagator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Prop1 => "1",
            Suite::Prop2 => "2",
            Suite::Prop3 => "3",
            Suite::Prop4 => "4",
            Suite::Prop5 => "5",
            Suite::Nilpotency => "nilpotency",
            Suite::Hestenes => "hestenes",
            Suite::Matrix => "matrix",
            Suite::Spectral => "spectral",
            Suite::Propagator => "propagator",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub dims: LatticeDims,
    pub trials: usize,
    pub seed: u64,
}

impl Config {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn samples(&self) -> usize {
        MIN_SAMPLES.max(self.trials / 5)
    }
}

pub fn run(suite: Suite, cfg: &Config) -> Report {
    match suite {
        Suite::Clifford => clifford(),
        Suite::Prop1 => prop1(cfg),
        Suite::Prop2 => prop2(),
        Suite::Prop3 => prop3(cfg),
        Suite::Prop4 => prop4(cfg),
        Suite::Prop5 => prop5(cfg),
        Suite::Nilpotency => nilpotency(cfg),
        Suite::Hestenes => hestenes_componentwise(cfg),
        Suite::Matrix => matrix(cfg),
        Suite::Spectral => spectral(cfg),
        Suite::Propagator => propagator(cfg),
        Suite::All => {
            let mut r = Report::new();
            r.push("dims", cfg.dims);
            r.push("trials", cfg.trials);
            r.push("seed", cfg.seed);
            for s in Suite::EACH {
                r.merge(s.name(), run(s, cfg));
            }
            r
        }
    }
}

fn random_site(rng: &mut impl RngCore) -> SiteVector {
    let mut draw = || rng.random_range(-1.0..1.0);
    Multivector(std::array::from_fn(|_| Complex64::new(draw(), draw())))
}

/// Product of two blades by reducing the concatenated generator word: adjacent
/// distinct generators anticommute, equal ones contract to the metric sign.
fn word_product(a: Blade, b: Blade) -> (i8, Blade) {
    let mut word: Vec<usize> = a.axes().chain(b.axes()).collect();
    let mut sign = 1i8;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < word.len() {
            if word[i] == word[i + 1] {
                sign *= METRIC[word[i]];
                word.drain(i..i + 2);
                changed = true;
            } else if word[i] > word[i + 1] {
                word.swap(i, i + 1);
                sign = -sign;
                changed = true;
                i += 1;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let mask = word.iter().fold(0u8, |m, &mu| m | (1 << mu));
    (sign, Blade::from_mask(mask))
}

pub fn clifford() -> Report {
    let t = table();
    let mut r = Report::new();

    let unit_failures = Blade::all()
        .filter(|&b| t.product(Blade::UNIT, b) != (1, b) || t.product(b, Blade::UNIT) != (1, b))
        .count();
    r.check("unit_failures", unit_failures as f64, 0.0);

    let mut anticommutator = 0.0f64;
    for mu in 0..AXES {
        for nu in 0..AXES {
            let (e_mu, e_nu) = (Multivector::vector(mu), Multivector::vector(nu));
            let sum = e_mu.product(&e_nu) + e_nu.product(&e_mu);
            let g = if mu == nu { f64::from(METRIC[mu]) } else { 0.0 };
            let expected = Multivector::<Complex64>::unit().scale(&Complex64::new(2.0 * g, 0.0));
            anticommutator = anticommutator.max((sum - expected).max_abs());
        }
    }
    r.check("anticommutator_deviation", anticommutator, 0.0);

    let ordered_failures = Blade::all()
        .filter(|&b| {
            let mut acc: Multivector<Complex64> = Multivector::unit();
            for mu in b.axes() {
                acc = acc.product(&Multivector::vector(mu));
            }
            acc != Multivector::basis(b)
        })
        .count();
    r.check("ordered_product_failures", ordered_failures as f64, 0.0);

    let pair_failures = Blade::all()
        .flat_map(|a| Blade::all().map(move |b| (a, b)))
        .filter(|&(a, b)| t.product(a, b) != word_product(a, b))
        .count();
    r.push("pairs", BLADES * BLADES);
    r.check("pair_failures", pair_failures as f64, 0.0);

    let mut triples = 0;
    let mut assoc_failures = 0;
    for a in Blade::all() {
        for b in Blade::all() {
            for c in Blade::all() {
                let (s1, ab) = t.product(a, b);
                let (s2, ab_c) = t.product(ab, c);
                let (s3, bc) = t.product(b, c);
                let (s4, a_bc) = t.product(a, bc);
                triples += 1;
                if s1 * s2 != s3 * s4 || ab_c != a_bc {
                    assoc_failures += 1;
                }
            }
        }
    }
    r.push("triples", triples);
    r.check("associativity_failures", assoc_failures as f64, 0.0);
    r
}

/// Runs `f` on `trials` seeded random fields and returns the worst relative deviation.
fn worst_over_fields(cfg: &Config, salt: u64, mut f: impl FnMut(&FormField) -> f64) -> f64 {
    let mut rng = cfg.rng(salt);
    (0..cfg.trials)
        .map(|_| {
            let omega = random_field(cfg.dims, rng.next_u64());
            f(&omega) / omega.max_abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

fn dist(a: &FormField, b: &FormField) -> f64 {
    a.distance(b).expect("same lattice")
}

pub fn prop1(cfg: &Config) -> Report {
    let mut r = Report::new();
    r.push("trials", cfg.trials);
    let dev = worst_over_fields(cfg, 1, |omega| {
        dist(&d_plus_delta(omega), &d_plus_delta_clifford(omega))
    });
    r.check("max_rel_deviation", dev, PROP1_TOL);
    r
}

pub fn prop2() -> Report {
    let mut r = Report::new();
    let e0 = Multivector::<Complex64>::vector(0);
    let e12 = Multivector::basis(Blade::E12);
    let i = Complex64::i();
    let dev = |a: Multivector<Complex64>, b: Multivector<Complex64>| (a - b).max_abs();
    let exact_dev = |a: Multivector<ExactScalar>, b: Multivector<ExactScalar>| a != b;

    use Projector::*;
    let zero_family = [(PlusZero, 1.0), (MinusZero, -1.0)];
    let twelve_family = [(PlusTwelve, 1.0), (MinusTwelve, -1.0)];

    let mut worst = 0.0f64;
    let mut exact_failures = 0;
    for (p0, _) in zero_family {
        for (p12, _) in twelve_family {
            let (a, b) = (p0.multivector(), p12.multivector());
            let d = dev(a.product(&b), b.product(&a));
            r.push(
                format!("commute_{}_{}", p0.tag(), p12.tag()),
                format_args!("{d:e}"),
            );
            worst = worst.max(d);
            let (ea, eb) = (p0.exact(), p12.exact());
            exact_failures += usize::from(exact_dev(ea.product(&eb), eb.product(&ea)));
        }
    }
    for (p, s) in zero_family {
        let a = p.multivector();
        let d = dev(e0.product(&a), a.product(&e0));
        r.push(format!("e0_commute_{}", p.tag()), format_args!("{d:e}"));
        worst = worst.max(d);
        let d = dev(a, a.product(&e0).scale(&Complex64::new(s, 0.0)));
        r.push(format!("absorb_e0_{}", p.tag()), format_args!("{d:e}"));
        worst = worst.max(d);
    }
    for (p, s) in twelve_family {
        let a = p.multivector();
        let d = dev(e12.product(&a), a.product(&e12));
        r.push(format!("e12_commute_{}", p.tag()), format_args!("{d:e}"));
        worst = worst.max(d);
        let d = dev(a, a.product(&e12).scale(&(i * s)));
        r.push(format!("absorb_e12_{}", p.tag()), format_args!("{d:e}"));
        worst = worst.max(d);
    }
    for p in Projector::ALL {
        let a = p.multivector();
        worst = worst.max(dev(a.product(&a), a));
        let e = p.exact();
        exact_failures += usize::from(exact_dev(e.product(&e), e));
    }
    r.check("max_deviation", worst, PROP2_TOL);
    r.check("exact_failures", exact_failures as f64, 0.0);
    r
}

pub fn prop3(cfg: &Config) -> Report {
    let mut r = Report::new();
    r.push("trials", cfg.trials);
    let dev = worst_over_fields(cfg, 3, |omega| dist(&decompose(omega).reconstruct(), omega));
    r.check("max_rel_reconstruction", dev, DECOMPOSE_TOL);

    let exact_sum = Projector::COMPOUND
        .iter()
        .map(|p| p.exact())
        .fold(Multivector::zero(), |acc, p| acc + p);
    r.check_flag("projector_sum_is_unit", exact_sum == Multivector::unit());

    let idem = worst_over_fields(cfg, 31, |omega| {
        Projector::COMPOUND
            .iter()
            .map(|p| {
                let once = omega.mul_right(&p.multivector());
                dist(&once.mul_right(&p.multivector()), &once)
            })
            .fold(0.0, f64::max)
    });
    r.check("max_rel_idempotence", idem, DECOMPOSE_TOL);

    let mut realness = 0.0f64;
    let mut projected = 0.0f64;
    let mut rng = cfg.rng(32);
    for _ in 0..cfg.trials {
        let omega = random_field(cfg.dims, rng.next_u64());
        let scale = omega.max_abs();
        for branch in [Branch::Plus, Branch::Minus] {
            let w = omega_pm(&omega, branch);
            realness = realness.max(w.max_imag() / scale);
            let p = branch.projector().multivector();
            projected = projected.max(dist(&omega.mul_right(&p), &w.mul_right(&p)) / scale);
        }
    }
    r.check("max_rel_omega_pm_imag", realness, DECOMPOSE_TOL);
    r.check("max_rel_projected_identity", projected, DECOMPOSE_TOL);
    r
}

pub fn nilpotency(cfg: &Config) -> Report {
    let mut r = Report::new();
    r.push("trials", cfg.trials);
    let dd = worst_over_fields(cfg, 6, |omega| d_c(&d_c(omega)).max_abs());
    let ss = worst_over_fields(cfg, 7, |omega| delta_c(&delta_c(omega)).max_abs());
    r.check("max_rel_dd", dd, NILPOTENCY_TOL);
    r.check("max_rel_delta_delta", ss, NILPOTENCY_TOL);
    r
}

pub fn hestenes_componentwise(cfg: &Config) -> Report {
    let mut r = Report::new();
    r.push("trials", cfg.trials);
    let mut rng = cfg.rng(8);
    let e0 = SiteVector::vector(0);
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials {
        let seed = rng.next_u64();
        let omega = random_field_filtered(cfg.dims, seed, false, Blade::is_even);
        let mass = random_site(&mut rng).0[0];
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let operator = hestenes_residual(&omega, mass, sign).mul_right(&e0);
        let packed = hestenes_residual_componentwise(&omega, mass, sign).pack();
        worst = worst.max(dist(&operator, &packed) / residual_scale(&omega, mass));
    }
    r.check("max_rel_deviation", worst, COMPONENTWISE_TOL);
    r
}

/// Lattice used by the matrix oracle.
pub fn matrix_dims() -> LatticeDims {
    LatticeDims::cubic(2).expect("valid")
}

/// Dense matrix of `i Σ_μ L(e_μ)(S_μ − 1)` in site-major, blade-minor order,
/// where `S_μ` is the unit shift and `L` left Clifford multiplication.
pub fn assemble_dk_matrix(dims: LatticeDims) -> Vec<Vec<Complex64>> {
    let n = dims.volume() * BLADES;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let i = Complex64::i();
    for mu in 0..AXES {
        let l = dkcalc::algebra::left_mul_matrix(&Multivector::vector(mu));
        for s in 0..dims.volume() {
            let t = dims.shift_linear(s, mu);
            for (a, row) in l.iter().enumerate() {
                for (b, &c) in row.iter().enumerate() {
                    m[s * BLADES + a][t * BLADES + b] += i * c;
                    m[s * BLADES + a][s * BLADES + b] -= i * c;
                }
            }
        }
    }
    m
}

pub fn matrix(cfg: &Config) -> Report {
    let dims = matrix_dims();
    let m = assemble_dk_matrix(dims);
    let vectors = 20;
    let mut rng = cfg.rng(9);
    let mut worst = 0.0f64;
    for _ in 0..vectors {
        let omega = random_field(dims, rng.next_u64());
        let x: Vec<Complex64> = omega.coeffs().collect();
        let y: Vec<Complex64> = m
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        let expected = FormField::from_coeffs(dims, &y).expect("length");
        worst = worst.max(dist(&dk_apply(&omega), &expected));
    }
    let mut r = Report::new();
    r.push("dims", dims);
    r.push("dimension", dims.volume() * BLADES);
    r.push("vectors", vectors);
    r.check("max_deviation", worst, MATRIX_TOL);
    r
}

/// A plane-wave Dirac-Kähler solution and its mass.
pub struct Solution {
    pub p: [usize; AXES],
    pub omega: FormField,
    pub mass: Complex64,
}

/// Distinct random momenta, at most one per lattice momentum.
pub fn sample_momenta(cfg: &Config, salt: u64) -> Vec<[usize; AXES]> {
    let mut rng = cfg.rng(salt);
    let v = cfg.dims.volume();
    sample(&mut rng, v, cfg.samples().min(v))
        .into_iter()
        .map(|i| cfg.dims.site(i).0)
        .collect()
}

/// Checks the symbol against real space and every eigenpair as an exact
/// solution; returns the solutions for further checks.
fn spectral_solutions(cfg: &Config, r: &mut Report) -> Vec<Solution> {
    let momenta = sample_momenta(cfg, 10);
    let mut rng = cfg.rng(11);
    let mut symbol_dev = 0.0f64;
    let mut solution_dev = 0.0f64;
    let mut eigen_dev = 0.0f64;
    let mut defective = 0;
    let mut out = Vec::new();
    for p in &momenta {
        let p = *p;
        let symbol = match build_symbol(p, cfg.dims) {
            Ok(s) => s,
            Err(e) => {
                r.push("error", e);
                r.fail();
                continue;
            }
        };
        let a = random_site(&mut rng);
        let wave = plane_wave(cfg.dims, p, &a).expect("momentum in range");
        let via_symbol = plane_wave(cfg.dims, p, &symbol.apply(&a).scale(&Complex64::i()))
            .expect("momentum in range");
        symbol_dev = symbol_dev.max(dist(&dk_apply(&wave), &via_symbol) / a.max_abs());

        let spectrum = match eigen_solve(&symbol) {
            Ok(s) => s,
            Err(e) => {
                r.push("error", e);
                r.fail();
                continue;
            }
        };
        if spectrum.is_defective() {
            defective += 1;
        }
        for pair in &spectrum.pairs {
            eigen_dev = eigen_dev.max(pair.residual);
            let (omega, mass) = build_dk_solution(p, pair, cfg.dims).expect("momentum in range");
            let res = dk_residual(&omega, mass).max_abs() / residual_scale(&omega, mass);
            solution_dev = solution_dev.max(res);
            out.push(Solution { p, omega, mass });
        }
    }
    r.push("dims", cfg.dims);
    r.push("momenta", momenta.len());
    r.push("solutions", out.len());
    r.push("defective_momenta", defective);
    r.push("max_eigen_residual", format_args!("{eigen_dev:e}"));
    r.check("max_rel_symbol_deviation", symbol_dev, SYMBOL_TOL);
    r.check("max_rel_solution_residual", solution_dev, SOLUTION_TOL);
    out
}

pub fn spectral(cfg: &Config) -> Report {
    let mut r = Report::new();
    spectral_solutions(cfg, &mut r);
    r
}

pub fn prop4(cfg: &Config) -> Report {
    let mut r = Report::new();
    let mut sub = Report::new();
    let solutions = spectral_solutions(cfg, &mut sub);
    r.merge("solutions", sub);
    let mut worst = [0.0f64; 4];
    let mut precondition_failures = 0;
    for s in &solutions {
        let rep = verify_prop4(&s.omega, s.mass, PROP4_TOL);
        if !rep.precondition_ok {
            precondition_failures += 1;
        }
        for (w, (_, _, res)) in worst.iter_mut().zip(rep.residuals.iter()) {
            *w = w.max(res / rep.scale);
        }
    }
    r.check("precondition_failures", precondition_failures as f64, 0.0);
    for (p, w) in Projector::COMPOUND.iter().zip(worst) {
        let eq = match p {
            Projector::PlusPlus | Projector::MinusMinus => "hestenes",
            _ => "hestenes_flipped",
        };
        r.check(format!("max_rel_P{}_{eq}", p.tag()), w, PROP4_TOL);
    }
    r
}

pub fn prop5(cfg: &Config) -> Report {
    let mut r = Report::new();
    let mut rng = cfg.rng(5);
    let trials = cfg.trials.clamp(1, MIN_SAMPLES);
    r.push("trials", trials);
    let mut min_rank = 4;
    for t in 0..trials {
        let omega = FormField::constant(cfg.dims, &random_site(&mut rng));
        for branch in [Branch::Plus, Branch::Minus] {
            let rep = verify_quadruple(&omega, Complex64::new(0.0, 0.0), branch, 0.0);
            let rank: usize = rep.get("rank").and_then(|s| s.parse().ok()).unwrap_or(0);
            min_rank = min_rank.min(rank);
            let tag = if branch == Branch::Plus {
                "plus"
            } else {
                "minus"
            };
            if t == 0 || !rep.passed() {
                r.merge(&format!("constant_{t}_{tag}"), rep);
            }
        }
    }
    r.push("min_rank", min_rank);

    // A real eigenvalue exists when some spatial extent is even.
    if let Some(mu) = (1..AXES).find(|&mu| cfg.dims.extent(mu).is_multiple_of(2)) {
        let mut p = [0; AXES];
        p[mu] = cfg.dims.extent(mu) / 2;
        let spectrum = build_symbol(p, cfg.dims).and_then(|s| eigen_solve(&s));
        match spectrum {
            Ok(spectrum) => {
                let pair = &spectrum.pairs[0];
                let (omega, lambda) = build_dk_solution(p, pair, cfg.dims).expect("in range");
                let mass = Complex64::new(lambda.re, 0.0);
                r.push("real_mass", mass.re);
                let rep = verify_quadruple(&omega, mass, Branch::Plus, SOLUTION_TOL);
                r.merge("real_mass_plus", rep);
            }
            Err(e) => {
                r.push("error", e);
                r.fail();
            }
        }
    }
    r
}

pub fn propagator(cfg: &Config) -> Report {
    let mut r = Report::new();
    let mass = Complex64::new(1.0, 0.0);
    let sources = cfg.samples();
    r.push("dims", cfg.dims);
    r.push("mass", mass);
    r.push("sources", sources);
    let mut rng = cfg.rng(12);
    let mut worst = 0.0f64;
    for _ in 0..sources {
        let source = random_field(cfg.dims, rng.next_u64());
        match propagator_solve(&source, mass) {
            Ok(sol) => {
                let res = dist(&dk_residual(&sol, mass), &source) / source.max_abs();
                worst = worst.max(res);
            }
            Err(e) => {
                r.push("error", e);
                r.fail();
            }
        }
    }
    r.check("max_rel_residual", worst, PROPAGATOR_TOL);
    r
}
