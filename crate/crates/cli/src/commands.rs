use std::path::Path;

use gale_core::generators::{generate_gale_of_quiddity, generate_polygon_lift, generate_quiddity, LIFT_TOLERANCE};
use gale_core::json::{
    commuting_report_to_value, gale_pair_to_value, operator_document, operator_to_value, parse, polynomial_to_value,
};
use gale_core::{
    bc_curve, dual_pair, is_superperiodic, kernel_basis, matrix_duality_check, normalize_to_superperiodic, rat,
    scramble, Error, GeneratorSource, Operator, Poly, Rational, ScaledPair, Scalar, ScalingConstant,
};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::check::{self, CheckOptions};
use crate::report::Report;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Failure(m) => m,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A parsed operator file and the numeric tolerance recorded by the sampler
/// that produced it, if any.
pub struct Input {
    pub operator: Operator,
    pub numeric_tolerance: Option<f64>,
}

pub fn read_operator(path: &Path) -> CliResult<Input> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let doc = parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let operator: Operator =
        operator_document(&doc).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    operator.order().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let numeric_tolerance = doc.pointer("/provenance/numeric_tolerance").and_then(Value::as_f64);
    Ok(Input { operator, numeric_tolerance })
}

fn default_source(k: usize, n: usize) -> GeneratorSource {
    if k == 1 {
        GeneratorSource::Quiddity
    } else if k + 3 == n {
        GeneratorSource::GaleOfQuiddity
    } else {
        GeneratorSource::PolygonLift
    }
}

fn precondition(e: Error) -> CliError {
    match e {
        Error::Generator(m) => CliError::Failure(m),
        other => CliError::Usage(other.to_string()),
    }
}

/// Operator document with a provenance block; byte-identical for a seed.
pub fn gen(k: usize, n: usize, seed: u64, source: Option<GeneratorSource>) -> CliResult<Value> {
    let source = source.unwrap_or_else(|| default_source(k, n));
    let mut provenance = json!({ "generator": source.name(), "seed": seed, "k": k, "n": n });
    let operator = match source {
        GeneratorSource::Quiddity => {
            if k != 1 {
                return Err(CliError::Usage(format!("the quiddity generator needs k = 1, got k = {k}")));
            }
            let (q, l) = generate_quiddity(n, seed).map_err(precondition)?;
            provenance["quiddity"] = json!(q);
            l
        }
        GeneratorSource::GaleOfQuiddity => {
            if k + 3 != n {
                return Err(CliError::Usage(format!("the Gale-of-quiddity generator needs k = n - 3, got k = {k}")));
            }
            let (q, _) = generate_quiddity(n, seed).map_err(precondition)?;
            provenance["quiddity"] = json!(q);
            generate_gale_of_quiddity(n, seed).map_err(precondition)?
        }
        GeneratorSource::PolygonLift => {
            let l = generate_polygon_lift(k, n, seed, LIFT_TOLERANCE).map_err(precondition)?;
            provenance["numeric_tolerance"] = json!(LIFT_TOLERANCE);
            provenance["polygon"] = json!("moment curve, consecutive determinants normalized to 1");
            // binary floats are dyadic rationals, so this is lossless
            l.map(|x| Rational::from_float(*x).expect("finite coefficients"))
        }
    };
    let mut doc = operator_to_value(&operator);
    doc["provenance"] = provenance;
    Ok(doc)
}

pub fn check(input: &Input, series_order: usize, tolerance: Option<f64>) -> Report {
    let opts = CheckOptions { series_order, numeric_tolerance: tolerance.or(input.numeric_tolerance) };
    check::run(&input.operator, &opts)
}

/// `{"operator", "dual_commuting", "gale"}` for a superperiodic operator.
pub fn dual(l: &Operator) -> CliResult<(Value, String)> {
    let pair = dual_pair(l).map_err(|e| CliError::Failure(e.to_string()))?;
    let mut doc = gale_pair_to_value(&pair);
    doc["operator"] = operator_to_value(l);
    let text = format!("L   = {}\n𝓛   = {}\n𝒢(L) = {}\n", l, pair.dual_commuting, pair.gale);
    Ok((doc, text))
}

/// `alpha=3,c=2`; both values rational.
pub fn parse_scramble(spec: &str) -> CliResult<(Rational, Rational)> {
    let (mut alpha, mut c) = (Rational::zero(), rat(1));
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("scramble entry {part:?} is not key=value")))?;
        let value = Rational::from_text(value).map_err(|e| CliError::Usage(e.to_string()))?;
        match key.trim() {
            "alpha" => alpha = value,
            "c" => c = value,
            other => return Err(CliError::Usage(format!("unknown scramble key {other:?}"))),
        }
    }
    if c.is_zero() {
        return Err(CliError::Usage("scramble constant c must be nonzero".into()));
    }
    Ok((alpha, c))
}

fn scaling_text(c: &ScalingConstant) -> String {
    match c {
        ScalingConstant::Exact(c) => c.to_string(),
        ScalingConstant::Approx { value, .. } => value.to_string(),
    }
}

fn normalization_checks(report: &mut Report, l: &Operator, k: &Operator) -> Option<gale_core::Normalization> {
    match bc_curve(l, k) {
        Ok(bc) => report.exact(
            "bc_curve",
            true,
            format!("R(kappa, E) = {}", bc.poly.display_in("κ", "E")),
            Value::Null,
        ),
        Err(e) => report.exact("bc_curve", false, e.to_string(), Value::Null),
    }
    match normalize_to_superperiodic(l, k) {
        Ok(norm) => {
            report.exact(
                "recovery",
                norm.data.q.coeff(0).is_zero() && norm.data.p.coeff(0).is_zero(),
                format!(
                    "e = {}, Q = {}, mu = {}, P = {}",
                    norm.data.e,
                    norm.data.q.display_in("E"),
                    norm.data.mu,
                    norm.data.p.display_in("E")
                ),
                commuting_report_to_value(&norm.data),
            );
            match &norm.scaled {
                ScaledPair::Exact { l: l2, .. } => report.exact(
                    "scaled_superperiodic",
                    is_superperiodic(l2).unwrap_or(false),
                    format!("c = {} (exact)", scaling_text(&norm.data.c)),
                    Value::Null,
                ),
                ScaledPair::Approx { l: l2, .. } => {
                    let res = gale_core::superperiodic::superperiodic_residual(l2).unwrap_or(f64::INFINITY);
                    report.numeric(
                        "scaled_superperiodic",
                        res <= gale_core::commuting::NUMERIC_TOLERANCE,
                        format!("c ~ {} (numeric), residual {res:.3e}", scaling_text(&norm.data.c)),
                        Value::Null,
                    );
                }
            }
            Some(norm)
        }
        Err(e) => {
            report.exact("recovery", false, e.to_string(), Value::Null);
            None
        }
    }
}

pub fn commuting(l: &Operator, partner: Option<&Operator>, scramble_spec: Option<&str>) -> CliResult<Report> {
    let mut report = Report::new("commuting pair");
    if let Some(k) = partner {
        if scramble_spec.is_some() {
            return Err(CliError::Usage("--scramble applies only without --partner".into()));
        }
        let norm = normalization_checks(&mut report, l, k);
        if let Some(norm) = norm {
            report.artifact("lambda", Value::String(norm.lambda.to_string()));
        }
        return Ok(report);
    }
    let (alpha, c0) = parse_scramble(scramble_spec.unwrap_or(""))?;
    let pair = dual_pair(l).map_err(|e| CliError::Failure(format!("round trip needs a superperiodic input: {e}")))?;
    let (l_in, k_in) = scramble(l, &pair.dual_commuting, &alpha, &c0).map_err(|e| CliError::Usage(e.to_string()))?;
    report.artifact("scrambled_partner", Value::String(k_in.to_string()));
    let Some(norm) = normalization_checks(&mut report, &l_in, &k_in) else {
        return Ok(report);
    };
    let c_ok = matches!(&norm.data.c, ScalingConstant::Exact(c) if *c == c0);
    report.exact("recovered_c", c_ok, format!("c = {}, scramble c = {c0}", scaling_text(&norm.data.c)), Value::Null);
    let expected_p = Poly::new(vec![Rational::zero(), -alpha.clone()]);
    report.exact(
        "recovered_p",
        norm.data.p == expected_p,
        format!("P = {}, expected {}", norm.data.p.display_in("E"), expected_p.display_in("E")),
        polynomial_to_value(&norm.data.p),
    );
    match &norm.scaled {
        ScaledPair::Exact { l: l2, lambda } => {
            report.exact("operator_round_trip", l2 == l, "tau_c(L_in) = L", Value::Null);
            report.exact("dual_round_trip", *lambda == pair.dual_commuting, "tau_c(K + P(L)) = 𝓛", Value::Null);
        }
        ScaledPair::Approx { .. } => {
            report.skip("operator_round_trip", "scaling constant is not rational");
            report.skip("dual_round_trip", "scaling constant is not rational");
        }
    }
    Ok(report)
}

/// The n = 5 tower: quiddity (order 2) -> Gale dual (order 3) -> back.
pub fn demo() -> Report {
    let mut report = Report::new("pentagramma mirificum: 5-periodic orders 2 and 3");
    let quiddity = [1, 3, 1, 2, 2];
    let l = gale_core::generators::quiddity_operator(&quiddity).expect("valid");
    report.exact("order2_superperiodic", is_superperiodic(&l).unwrap_or(false), "quiddity (1,3,1,2,2)", Value::Null);
    let pair = match dual_pair(&l) {
        Ok(p) => p,
        Err(e) => {
            report.exact("order3_gale_dual", false, e.to_string(), Value::Null);
            return report;
        }
    };
    let g = &pair.gale;
    report.exact("order3_gale_dual", g.order().ok() == Some(3), format!("𝒢(L) = {g}"), operator_to_value(g));
    let back = dual_pair(g).map(|p| p.gale);
    report.exact("tower_returns", back.as_ref().ok() == Some(&l), "𝒢(𝒢(L)) = L", Value::Null);

    // V_i = a V_{i-1} - b V_{i-2} + V_{i-3}: all solutions 5-periodic
    let minus_one = -rat(1);
    let periodic = kernel_basis(g, &minus_one).and_then(|b| b.v_gauged()).map(|v| {
        v.iter().all(|s| (-10..10).all(|i| s.value(i + 5) == s.value(i)))
    });
    report.exact("order3_periodic", periodic == Ok(true), "V_{i+5} = V_i", Value::Null);
    // W_i = a W_{i-1} - W_{i-2}: all solutions 5-antiperiodic
    let anti = kernel_basis(&l, &minus_one).and_then(|b| b.v_gauged()).map(|w| {
        w.iter().all(|s| (-10..10).all(|i| s.value(i + 5) == -s.value(i)))
    });
    report.exact("order2_antiperiodic", anti == Ok(true), "W_{i+5} = -W_i", Value::Null);
    // both equations carry the same sequence a_i up to relabeling
    let a3 = g.term(-1).expect("order 3").clone();
    let a2 = l.term(-1).expect("order 2").clone();
    let shift = (0..5).find(|&d| a3 == a2.shifted(d));
    report.exact(
        "shared_coefficient",
        shift.is_some(),
        format!("a^1 of the order-3 equation = quiddity shifted by {}", shift.map_or("-".into(), |d| d.to_string())),
        Value::Null,
    );
    let duality = matrix_duality_check(&l, g, 3).map(|d| d.is_zero());
    report.exact("matrix_duality", duality == Ok(true), "W eps V = 0 at offset n-k-1 = 3", Value::Null);
    report.artifact("pair", Value::String(format!("order 2: {l}\norder 3: {g}")));
    report
}
