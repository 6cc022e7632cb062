//! Invariant suites behind `schwarz verify`. Every check is deterministic and
//! reported in canonical (suite, id) order.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::{One, ToPrimitive, Zero};
use schwarz_core::exactcore::{
    chu_vandermonde, factorial, factorial_gap, int, koebe_cd, ratio, sharp_constant, to_f64, tq_polynomial,
};
use schwarz_core::multiplier::{
    certified_lower_bound, domination_upper_bound, polar_points, test_family_quotient, PowerIteration,
};
use schwarz_core::norms::{
    asymptotic_ratio, bergman_norm_sq, bloch_bound_check, koebe_growth_estimate, subcritical_bounded_check,
    test_family_norm_sq, GridSpec, TestFamilyParams, BOUNDEDNESS_GRID,
};
use schwarz_core::quad::disk_bergman_norm_sq;
use schwarz_core::schwarzian::{
    classical_schwarzian, grunsky, grunsky_quadratic, higher_schwarzian, higher_schwarzian_grid, pq_identity_check,
    CatalogId,
};
use schwarz_core::series::divided_difference;
use schwarz_core::{BiSeries, Complex64, ExactScalar, FunctionSpec, KoebeClosedForm, MultiplierProblem, UniSeries};
use serde_json::json;

use crate::output::{csv_rows, Rendered};
use crate::{Failure, VerifyArgs};

const SUITES: [&str; 5] = ["exact", "series", "schwarzian", "norms", "multiplier"];

struct Check {
    suite: &'static str,
    id: String,
    passed: bool,
    detail: String,
}

struct Suite {
    name: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self { name, checks: Vec::new() }
    }

    fn record(&mut self, id: &str, outcome: schwarz_core::Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            suite: self.name,
            id: id.to_string(),
            passed,
            detail,
        });
    }
}

type Q = ExactScalar;

fn exact_suite() -> Suite {
    let mut s = Suite::new("exact");
    s.record("chu_vandermonde", (|| {
        let mut count = 0;
        for n in 0..=30 {
            for (an, ad) in [(1, 2), (-7, 3), (5, 1), (11, 13)] {
                for (cn, cd) in [(3, 4), (9, 2), (-13, 5), (17, 7)] {
                    let (l, r) = chu_vandermonde(n, &ratio(an, ad), &ratio(cn, cd))?;
                    if l != r {
                        return Ok((false, format!("n={n} a={an}/{ad} c={cn}/{cd}")));
                    }
                    count += 1;
                }
            }
        }
        Ok((true, format!("{count} instances")))
    })());
    s.record("tq_at_one", (|| {
        for p in 1..=12 {
            for q in 1..=p {
                let v = tq_polynomial(p, q)?.eval(&Q::one());
                let expect = Q::new(factorial(p + q - 1), factorial(p));
                if v != expect {
                    return Ok((false, format!("p={p} q={q}")));
                }
            }
        }
        Ok((true, "1 <= q <= p <= 12".into()))
    })());
    s.record("tq_positive_coefficients", (|| {
        for p in 1..=10 {
            for q in 1..=p {
                if (0..q).any(|d| koebe_cd(p, q, d).map_or(true, |c| c <= Q::zero())) {
                    return Ok((false, format!("p={p} q={q}")));
                }
            }
        }
        Ok((true, "p <= 10".into()))
    })());
    s.record("factorial_gap", (|| {
        for p in 1..=10 {
            for q in 1..=10 {
                let g = factorial_gap(p, q)?;
                if (p == q) != g.is_zero() || g < Q::zero() {
                    return Ok((false, format!("p={p} q={q}")));
                }
            }
        }
        Ok((true, "p, q <= 10".into()))
    })());
    s.record("sharp_constant_koebe_display", (|| {
        if sharp_constant(&int(0), 1, 1)? != ratio(15, 8) {
            return Ok((false, "N(0,1,1) != 15/8".into()));
        }
        for alpha in [int(0), ratio(1, 2), int(1), int(2)] {
            let lhs = sharp_constant(&alpha, 1, 1)? * int(36);
            let rhs = int(36) * (&alpha + int(3)) * (&alpha + int(5)) / ((&alpha + int(2)) * (&alpha + int(4)));
            if lhs != rhs {
                return Ok((false, format!("alpha={alpha}")));
            }
        }
        Ok((true, "alpha in {0, 1/2, 1, 2}".into()))
    })());
    s
}

fn series_suite(order: usize) -> Suite {
    let mut s = Suite::new("series");
    let n = order.min(40);
    s.record("bivariate_log_of_one_minus_zw", (|| {
        let a = BiSeries::from_fn(n, |i, j| {
            if i == 0 && j == 0 {
                int(1)
            } else if i == 1 && j == 1 {
                int(-1)
            } else {
                int(0)
            }
        });
        let l = a.log()?;
        let expect = BiSeries::from_fn(n, |i, j| if i == j && i > 0 { ratio(-1, i as i64) } else { int(0) });
        Ok((l == expect, format!("order {n}")))
    })());
    s.record("reciprocal_and_log", (|| {
        let f = FunctionSpec::koebe().taylor::<Q>(n + 1)?;
        let over_z = UniSeries::from_fn(n, |k| f.coeff(k + 1).clone());
        let inv = over_z.reciprocal()?;
        let ok_inv = over_z.mul(&inv) == UniSeries::one(n);
        // log((1−z)^{−2}) = 2 Σ z^k/k
        let expect = UniSeries::from_fn(n, |k| if k == 0 { int(0) } else { ratio(2, k as i64) });
        Ok((ok_inv && over_z.log()? == expect, format!("order {n}")))
    })());
    s.record("divided_difference_symmetric", (|| {
        let f = FunctionSpec::catalog(CatalogId::Strip).taylor::<Q>(n)?;
        Ok((divided_difference(&f)?.is_symmetric(), format!("order {n}")))
    })());
    s
}

fn schwarzian_suite(order: usize) -> Suite {
    let mut s = Suite::new("schwarzian");
    s.record("koebe_closed_form", (|| {
        let grid = higher_schwarzian_grid::<Q>(&FunctionSpec::koebe(), 4, order)?;
        for p in 1..=4 {
            for q in 1..=4 {
                if grid[p - 1][q - 1] != KoebeClosedForm::new(p, q)?.to_series(order) {
                    return Ok((false, format!("p={p} q={q}")));
                }
            }
        }
        Ok((true, format!("p, q <= 4 to order {order}")))
    })());
    s.record("koebe_grunsky", (|| {
        let n = order.min(40);
        let t = grunsky::<Q>(&FunctionSpec::koebe(), n)?;
        for i in 1..=n {
            for k in 1..=n {
                let expect = if i == k { ratio(-1, i as i64) } else { int(0) };
                if *t.get(i, k) != expect {
                    return Ok((false, format!("gamma_({i},{k})")));
                }
            }
        }
        Ok((true, format!("order {n}")))
    })());
    s.record("pq_identity", (|| {
        let n = order.min(50);
        for q in 1..=5 {
            if !pq_identity_check(q, n)? {
                return Ok((false, format!("q={q}")));
            }
        }
        Ok((true, format!("q <= 5 to order {n}")))
    })());
    s.record("classical_schwarzian", (|| {
        let n = order.min(40);
        for id in CatalogId::FIXED {
            let f = FunctionSpec::catalog(id);
            let s11 = higher_schwarzian::<Q>(&f, 1, 1, n)?;
            let (_, sf) = classical_schwarzian::<Q>(&f, n)?;
            if s11.scale(&int(6)) != sf {
                return Ok((false, id.name()));
            }
        }
        Ok((true, format!("catalog to order {n}")))
    })());
    s.record("grunsky_inequality", (|| {
        let n = 12;
        for id in CatalogId::FIXED {
            let t = grunsky::<Q>(&FunctionSpec::catalog(id), n)?;
            for trial in 0..25 {
                let x: Vec<Complex64> = (0..n)
                    .map(|k| {
                        let a = (1 + trial * 7 + k * 13) as f64;
                        Complex64::from_polar(1.0 / (1.0 + k as f64).sqrt(), a.sin() * 6.0 + a)
                    })
                    .collect();
                let (lhs, rhs) = grunsky_quadratic(&t, &x)?;
                if lhs > rhs * (1.0 + 1e-12) {
                    return Ok((false, format!("{} trial {trial}", id.name())));
                }
            }
        }
        Ok((true, "25 vectors per catalog entry".into()))
    })());
    s
}

fn norms_suite() -> Suite {
    let mut s = Suite::new("norms");
    s.record("artanh_case", (|| {
        let r = 0.5;
        let v = test_family_norm_sq(&TestFamilyParams::new(r, 1.0, 0, 0.0)?, 1e-14)?;
        Ok(((v - 3f64.ln()).abs() < 1e-12, format!("{v}")))
    })());
    s.record("asymptotics", (|| {
        let mut worst = 0.0f64;
        for (alpha, lambda) in [(0.0, 1.3), (0.0, 1.5), (1.0, 2.0)] {
            let v = [0.9, 0.99, 0.999].map(|r| asymptotic_ratio(alpha, lambda, r));
            let [a, b, c] = [v[0].clone()?, v[1].clone()?, v[2].clone()?];
            // the ratio approaches 1 monotonically from one side
            if !((a >= b && b >= c) || (a <= b && b <= c)) {
                return Ok((false, format!("not monotone at alpha={alpha} lambda={lambda}")));
            }
            worst = worst.max((c - 1.0).abs());
        }
        Ok((worst < 0.05, format!("worst deviation {worst:.4}")))
    })());
    s.record("subcritical_bounded", (|| {
        let (ok, m) = subcritical_bounded_check(4.0, 1.0, &BOUNDEDNESS_GRID)?;
        Ok((ok, format!("M = {m:.6}")))
    })());
    s.record("koebe_growth_norms", (|| {
        let grid = GridSpec::default();
        for p in 1..=4 {
            for q in 1..=4 {
                let e = koebe_growth_estimate(p, q, &grid)?;
                let target = factorial(p + q - 1).to_f64().unwrap();
                if e.lower_estimate > target * (1.0 + 1e-12) || e.lower_estimate < target * (1.0 - 1e-3) {
                    return Ok((false, format!("p={p} q={q}: {}", e.lower_estimate)));
                }
            }
        }
        Ok((true, "p, q <= 4".into()))
    })());
    s.record("bloch_bound", (|| {
        let grid = GridSpec {
            radial: 100,
            angular: 48,
            outer_gap: 1e-7,
        };
        for id in CatalogId::FIXED {
            for p in 1..=3 {
                for q in 1..=3 {
                    let c = bloch_bound_check(&FunctionSpec::catalog(id), p, q, &grid)?;
                    if !c.holds() {
                        return Ok((false, format!("{} p={p} q={q}", id.name())));
                    }
                }
            }
        }
        Ok((true, "catalog, p, q <= 3".into()))
    })());
    s.record("coefficient_formula_vs_quadrature", (|| {
        let mut worst = 0.0f64;
        for seed in 0..10 {
            let phi = UniSeries::from_fn(10, |k| {
                let a = (seed * 31 + k * 17) as f64;
                Complex64::new(a.sin(), (1.3 * a).cos())
            });
            for alpha in [0.0, 1.0, 4.0] {
                let a = bergman_norm_sq(&phi, alpha, None)?.partial;
                let b = disk_bergman_norm_sq(|z| phi.eval(z), alpha, 16, 24);
                worst = worst.max((a - b).abs());
            }
        }
        Ok((worst < 1e-8, format!("max difference {worst:.2e}")))
    })());
    s
}

fn multiplier_suite() -> Suite {
    let mut s = Suite::new("multiplier");
    s.record("domination_equals_sharp_constant", (|| {
        for alpha in 0..=2 {
            for p in 1..=4 {
                for q in 1..=4 {
                    if domination_upper_bound(p, q, &int(alpha))? != sharp_constant(&int(alpha), p, q)? {
                        return Ok((false, format!("alpha={alpha} p={p} q={q}")));
                    }
                }
            }
        }
        Ok((true, "p, q <= 4, alpha in {0, 1, 2}".into()))
    })());
    s.record("pointwise_domination", (|| {
        let pts = polar_points(100, 100);
        for p in 1..=3 {
            for q in 1..=3 {
                if !schwarz_core::multiplier::pointwise_domination_check(p, q, &pts)? {
                    return Ok((false, format!("p={p} q={q}")));
                }
            }
        }
        Ok((true, "10^4 points, p, q <= 3".into()))
    })());
    s.record("lower_below_upper", (|| {
        let cfg = PowerIteration {
            max_iterations: 2_000,
            ..PowerIteration::default()
        };
        for (p, q) in [(1, 1), (2, 1), (2, 2)] {
            let problem = MultiplierProblem::koebe(p, q, &int(0))?;
            let lower = certified_lower_bound(&problem, 0.99, 400, 800, &cfg)?.value;
            let upper = to_f64(&domination_upper_bound(p, q, &int(0))?).sqrt();
            if lower > upper + 1e-9 {
                return Ok((false, format!("p={p} q={q}: {lower} > {upper}")));
            }
        }
        Ok((true, "r = 0.99, N = 400".into()))
    })());
    s.record("test_family_below_target", (|| {
        let v = test_family_quotient(1, 1, 0.0, 1.05, 0.9999)?;
        Ok((v > 0.0 && v <= 1.875, format!("{v:.6}")))
    })());
    s
}

pub fn run(a: &VerifyArgs) -> Result<(Rendered, u8), Failure> {
    let mut selected: Vec<&str> = Vec::new();
    for name in &a.suites {
        match name.as_str() {
            "all" => selected.extend(SUITES),
            n if SUITES.contains(&n) => selected.push(SUITES[SUITES.iter().position(|s| *s == n).unwrap()]),
            other => return Err(Failure::usage(format!("unknown suite {other:?}"))),
        }
    }
    selected.sort_by_key(|n| SUITES.iter().position(|s| s == n));
    selected.dedup();
    if a.order < 4 {
        return Err(Failure::usage("order must be at least 4"));
    }

    let mut suites = Vec::new();
    let mut timings = Vec::new();
    for name in selected {
        let start = Instant::now();
        suites.push(match name {
            "exact" => exact_suite(),
            "series" => series_suite(a.order),
            "schwarzian" => schwarzian_suite(a.order),
            "norms" => norms_suite(),
            _ => multiplier_suite(),
        });
        timings.push(start.elapsed().as_secs_f64());
    }

    let mut checks: Vec<&Check> = suites.iter().flat_map(|s| &s.checks).collect();
    checks.sort_by(|x, y| {
        let sx = SUITES.iter().position(|s| *s == x.suite);
        let sy = SUITES.iter().position(|s| *s == y.suite);
        sx.cmp(&sy).then_with(|| x.id.cmp(&y.id))
    });
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;

    let mut human = String::new();
    for c in &checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        writeln!(human, "{mark}  {}/{}  {}", c.suite, c.id, c.detail).unwrap();
    }
    for (s, t) in suites.iter().zip(&timings) {
        writeln!(human, "suite {} finished in {t:.1}s", s.name).unwrap();
    }
    writeln!(human, "{passed} passed, {failed} failed").unwrap();

    // timings stay out of json and csv so identical runs give identical bytes
    let json = json!({
        "suites": suites.iter().map(|s| s.name).collect::<Vec<_>>(),
        "order": a.order,
        "passed": passed,
        "failed": failed,
        "checks": checks.iter().map(|c| json!({
            "suite": c.suite,
            "id": c.id,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    });
    let csv = csv_rows(
        "suite,check,passed,detail",
        checks.iter().map(|c| {
            vec![
                c.suite.to_string(),
                c.id.clone(),
                c.passed.to_string(),
                c.detail.replace(',', ";"),
            ]
        }),
    );
    let code = if failed == 0 { 0 } else { 1 };
    Ok((
        Rendered {
            human,
            json,
            csv: Some(csv),
        },
        code,
    ))
}
