use std::fmt::Write as _;
use std::time::Duration;

use num_traits::{One, ToPrimitive, Zero};
use schwarz_core::exactcore::{classical_bounds, factorial, format_rational, int, parse_rational, sharp_constant, to_f64};
use schwarz_core::multiplier::{sandwich, Budget};
use schwarz_core::schwarzian::{grunsky, higher_schwarzian, CatalogId};
use schwarz_core::series::Coeff;
use schwarz_core::{Complex64, ExactScalar, FunctionSpec, KoebeClosedForm, MultiplierProblem, UniSeries};
use serde_json::{json, Value};

use crate::output::{complex, complex_str, csv_rows, exact, float, float_str, sig12, Rendered};
use crate::{BoundArgs, Failure, KoebeArgs, SchwarzianArgs, TableArgs};

fn parse_q(s: &str) -> Result<ExactScalar, Failure> {
    Ok(parse_rational(s)?)
}

fn parse_point(s: &str) -> Result<(ExactScalar, ExactScalar), Failure> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| Failure::usage(format!("expected re,im but got {s:?}")))?;
    Ok((parse_q(re)?, parse_q(im)?))
}

/// Exact `S_κ^{[p,q]}(x)` at a real rational point.
fn koebe_exact_at(c: &KoebeClosedForm, x: &ExactScalar) -> ExactScalar {
    let x2 = x * x;
    let t = c.tq().eval(&x2);
    let mono = (0..c.monomial_power).fold(ExactScalar::one(), |acc, _| acc * x);
    let pole = (0..c.pole_order).fold(ExactScalar::one(), |acc, _| acc * (ExactScalar::one() - &x2));
    ExactScalar::from_integer(c.prefactor.clone()) * mono * t / pole
}

fn coeff_json<T: Coeff>(c: &T, tol: f64) -> Value {
    match c.as_exact() {
        Some(q) => exact(q),
        None => complex(c.to_complex(), tol),
    }
}

fn coeff_str<T: Coeff>(c: &T) -> String {
    match c.as_exact() {
        Some(q) => format_rational(q),
        None => complex_str(c.to_complex()),
    }
}

pub fn koebe(a: &KoebeArgs) -> Result<Rendered, Failure> {
    let c = KoebeClosedForm::new(a.p, a.q)?;
    let mut human = String::new();
    writeln!(human, "S_kappa^[{},{}](z) = {c}", a.p, a.q).unwrap();
    writeln!(human, "prefactor      {}", c.prefactor).unwrap();
    writeln!(human, "monomial power {}", c.monomial_power).unwrap();
    writeln!(human, "pole order     {}", c.pole_order).unwrap();
    let cd: Vec<String> = c.cd.iter().map(format_rational).collect();
    writeln!(human, "C_d            [{}]", cd.join(", ")).unwrap();
    let mut json = json!({
        "p": a.p,
        "q": a.q,
        "display": c.to_string(),
        "prefactor": { "exact": c.prefactor.to_string() },
        "monomial_power": c.monomial_power,
        "pole_order": c.pole_order,
        "cd": c.cd.iter().map(exact).collect::<Vec<_>>(),
    });
    let mut csv = vec![];

    if let Some(point) = &a.eval {
        let (re, im) = parse_point(point)?;
        let z = Complex64::new(to_f64(&re), to_f64(&im));
        if &re * &re + &im * &im >= int(1) {
            return Err(Failure::usage("evaluation point must satisfy |z| < 1"));
        }
        let value = c.evaluate(z);
        if im.is_zero() {
            let v = koebe_exact_at(&c, &re);
            writeln!(human, "value at {}    {} ({})", format_rational(&re), format_rational(&v), float_str(to_f64(&v)))
                .unwrap();
            json["value"] = json!({ "z": complex(z, 0.0), "exact": format_rational(&v), "float": sig12(to_f64(&v)) });
        } else {
            writeln!(human, "value at {}    {}", complex_str(z), complex_str(value)).unwrap();
            json["value"] = json!({ "z": complex(z, 0.0), "value": complex(value, 1e-12) });
        }
    }
    if let Some(order) = a.series {
        let s = c.to_series(order);
        let items: Vec<String> = s.coeffs().iter().map(format_rational).collect();
        writeln!(human, "series         [{}]", items.join(", ")).unwrap();
        json["series"] = Value::Array(s.coeffs().iter().map(exact).collect());
        csv = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, v)| vec![k.to_string(), format_rational(v)])
            .collect();
    }
    let csv = if a.series.is_some() {
        Some(csv_rows("k,coefficient", csv))
    } else {
        Some(csv_rows(
            "d,C_d",
            c.cd.iter().enumerate().map(|(d, v)| vec![d.to_string(), format_rational(v)]),
        ))
    };
    Ok(Rendered { human, json, csv })
}

fn parse_pq_list(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    s.split(',')
        .map(|item| {
            let (p, q) = item
                .split_once(':')
                .ok_or_else(|| Failure::usage(format!("expected p:q but got {item:?}")))?;
            let p = p.trim().parse().map_err(|_| Failure::usage(format!("bad p in {item:?}")))?;
            let q = q.trim().parse().map_err(|_| Failure::usage(format!("bad q in {item:?}")))?;
            Ok((p, q))
        })
        .collect()
}

pub fn table(a: &TableArgs) -> Result<Rendered, Failure> {
    let alphas = a.alphas.split(',').map(parse_q).collect::<Result<Vec<_>, _>>()?;
    let pqs = parse_pq_list(&a.pq)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for alpha in &alphas {
        for &(p, q) in &pqs {
            let n = sharp_constant(alpha, p, q)?;
            let b = classical_bounds(alpha, p, q)?;
            let growth = factorial(p + q - 1);
            let bloch = b.bloch_sq.to_f64().expect("finite").sqrt();
            let sqrt_n = to_f64(&n).sqrt();
            rows.push(vec![
                format_rational(alpha),
                p.to_string(),
                q.to_string(),
                format_rational(&n),
                float_str(sqrt_n),
                format_rational(&b.donaire_sq),
                growth.to_string(),
                float_str(bloch),
            ]);
            json_rows.push(json!({
                "alpha": exact(alpha),
                "p": p,
                "q": q,
                "N_exact": exact(&n),
                "sqrtN": float(sqrt_n, 1e-15),
                "donaire_sq": exact(&b.donaire_sq),
                "growth": { "exact": growth.to_string() },
                "bloch": float(bloch, 1e-15),
            }));
        }
    }
    let header = "alpha,p,q,N_exact,sqrtN,donaire_sq,growth,bloch";
    let widths: Vec<usize> = (0..8)
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain(std::iter::once(header.split(',').nth(i).unwrap().len()))
                .max()
                .unwrap()
        })
        .collect();
    let mut human = String::new();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(human, "{}", line(header.split(',').collect())).unwrap();
    for r in &rows {
        writeln!(human, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
    }
    Ok(Rendered {
        human,
        json: Value::Array(json_rows),
        csv: Some(csv_rows(header, rows)),
    })
}

fn load_function(a: &SchwarzianArgs) -> Result<FunctionSpec, Failure> {
    match (&a.function, &a.coeffs) {
        (Some(name), None) => Ok(FunctionSpec::catalog(CatalogId::parse(name)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(FunctionSpec::from_json(&text)?)
        }
        _ => Err(Failure::usage("give exactly one of --function or --coeffs")),
    }
}

fn series_output<T: Coeff>(
    f: &FunctionSpec,
    a: &SchwarzianArgs,
) -> Result<(Vec<Value>, Vec<String>, Option<Vec<Vec<String>>>, Option<Value>), Failure> {
    let tol = if T::EXACT { 0.0 } else { 1e-9 };
    let s: UniSeries<T> = higher_schwarzian::<T>(f, a.p, a.q, a.order)?;
    let json = s.coeffs().iter().map(|c| coeff_json(c, tol)).collect();
    let text = s.coeffs().iter().map(coeff_str).collect();
    let (grid, grid_json) = match a.grunsky {
        Some(n) => {
            let table = grunsky::<T>(f, n)?;
            let rows: Vec<Vec<String>> = table.rows().iter().map(|r| r.iter().map(coeff_str).collect()).collect();
            let js = Value::Array(
                table
                    .rows()
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|c| coeff_json(c, tol)).collect()))
                    .collect(),
            );
            (Some(rows), Some(js))
        }
        None => (None, None),
    };
    Ok((json, text, grid, grid_json))
}

pub fn schwarzian(a: &SchwarzianArgs) -> Result<Rendered, Failure> {
    let f = load_function(a)?;
    let (coeffs_json, coeffs, grid, grid_json) = if f.is_exact() {
        series_output::<ExactScalar>(&f, a)?
    } else {
        series_output::<Complex64>(&f, a)?
    };
    let provenance = serde_json::to_value(f.provenance()).expect("serializable");
    let mut human = String::new();
    writeln!(human, "S_f^[{},{}] for {} ({}), order {}", a.p, a.q, f.label(), provenance.as_str().unwrap_or(""), a.order)
        .unwrap();
    for (k, c) in coeffs.iter().enumerate() {
        writeln!(human, "  z^{k:<3} {c}").unwrap();
    }
    if let Some(rows) = &grid {
        writeln!(human, "Grunsky coefficients gamma_(n,k), rows n = 1..{}", rows.len()).unwrap();
        for row in rows {
            writeln!(human, "  {}", row.join("  ")).unwrap();
        }
    }
    let mut json = json!({
        "function": f.label(),
        "provenance": provenance,
        "exact": f.is_exact(),
        "p": a.p,
        "q": a.q,
        "order": a.order,
        "coefficients": coeffs_json,
    });
    if let Some(g) = grid_json {
        json["grunsky"] = g;
    }
    let csv = csv_rows(
        "k,coefficient",
        coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.clone()]),
    );
    Ok(Rendered {
        human,
        json,
        csv: Some(csv),
    })
}

fn parse_schedule(s: &str) -> Result<Vec<(f64, usize)>, Failure> {
    s.split(',')
        .map(|item| {
            let (r, n) = item
                .split_once(':')
                .ok_or_else(|| Failure::usage(format!("expected r:N but got {item:?}")))?;
            let r: f64 = r.trim().parse().map_err(|_| Failure::usage(format!("bad r in {item:?}")))?;
            let n: usize = n.trim().parse().map_err(|_| Failure::usage(format!("bad N in {item:?}")))?;
            if !(0.0..1.0).contains(&r) {
                return Err(Failure::usage(format!("r must lie in [0, 1) in {item:?}")));
            }
            Ok((r, n))
        })
        .collect()
}

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(sig12(n.as_f64().unwrap())),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn bound(a: &BoundArgs) -> Result<Rendered, Failure> {
    let alpha = parse_q(&a.alpha)?;
    if !(a.budget > 0.0 && a.budget.is_finite()) {
        return Err(Failure::usage("budget must be a positive number of seconds"));
    }
    let problem = MultiplierProblem::koebe(a.p, a.q, &alpha)?;
    let mut budget = Budget::standard(Duration::from_secs_f64(a.budget));
    if let Some(s) = &a.schedule {
        budget.rayleigh = parse_schedule(s)?;
    }
    let rep = sandwich(&problem, &budget)?;
    let upper_sq = sharp_constant(&alpha, a.p, a.q)?;

    let mut human = String::new();
    writeln!(human, "multiplier norm of S_kappa^[{},{}] from A^2_{} to A^2_{}", a.p, a.q, rep.alpha, format_rational(&(&alpha + int(2 * (a.p + a.q) as i64)))).unwrap();
    writeln!(human, "target  sqrt({}) = {}", format_rational(&upper_sq), float_str(rep.upper)).unwrap();
    writeln!(human, "upper   {} (exact domination bound)", float_str(rep.upper)).unwrap();
    writeln!(human, "lower   {} ({})", float_str(rep.lower), rep.lower_source).unwrap();
    writeln!(human, "gap     {}", float_str(rep.gap)).unwrap();
    if rep.budget_exhausted {
        writeln!(human, "warning: time budget exhausted; best bound so far reported").unwrap();
    }
    writeln!(human, "trace").unwrap();
    for entry in serde_json::to_value(&rep.trace).expect("serializable").as_array().unwrap() {
        writeln!(human, "  {}", round_floats(entry.clone())).unwrap();
    }

    let json = json!({
        "p": rep.p,
        "q": rep.q,
        "alpha": exact(&alpha),
        "lower": float(rep.lower, 1e-12),
        "lower_source": rep.lower_source,
        "upper": float(rep.upper, 1e-15),
        "upper_sq": exact(&upper_sq),
        "target": float(rep.upper, 1e-15),
        "gap": float(rep.gap, 1e-12),
        "parameters": round_floats(serde_json::to_value(&rep.parameters).expect("serializable")),
        "budget_exhausted": rep.budget_exhausted,
        "trace": round_floats(serde_json::to_value(&rep.trace).expect("serializable")),
    });
    let csv = csv_rows(
        "p,q,alpha,lower,upper,upper_sq,gap,budget_exhausted",
        [vec![
            rep.p.to_string(),
            rep.q.to_string(),
            rep.alpha.clone(),
            float_str(rep.lower),
            float_str(rep.upper),
            format_rational(&upper_sq),
            float_str(rep.gap),
            rep.budget_exhausted.to_string(),
        ]],
    );
    Ok(Rendered {
        human,
        json,
        csv: Some(csv),
    })
}
