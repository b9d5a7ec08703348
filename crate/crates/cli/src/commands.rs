use std::fmt::Write as _;

use serde_json::{json, Value};

use lgspin_core::givental::{
    big_i, default_params, extract_correlators, mirror_map_and_j, pf_check, small_i, split_i,
    CorrelatorTarget, ZSeries,
};
use lgspin_core::statespace::{basis, degree, pairing, parse_state, parse_states, StateVector};
use lgspin_core::symmetry::{aut_group, grading_element, DEFAULT_CAP};
use lgspin_core::{correlator3, BasisState, Error, InvertiblePolynomial, ParamSeries, Q};

use crate::args::Command;

pub enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("report values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn rat(x: &Q) -> Value {
    Value::String(x.to_string())
}

fn states_of(
    w: &InvertiblePolynomial,
    list: &str,
    want: usize,
) -> Result<Vec<BasisState>, Failure> {
    let states = parse_states(w, list)?;
    if states.len() != want {
        return Err(Failure::Usage(format!(
            "expected {want} insertions, got {}",
            states.len()
        )));
    }
    Ok(states)
}

fn params_of(w: &InvertiblePolynomial, list: Option<&str>) -> Result<Vec<BasisState>, Failure> {
    Ok(match list {
        Some(l) => parse_states(w, l)?,
        None => default_params(w)?,
    })
}

fn series_json(s: &ParamSeries) -> Value {
    Value::Array(
        s.terms()
            .map(|(e, c)| json!({ "t_exp": e, "coeff": rat(c) }))
            .collect(),
    )
}

fn monomial(exps: &[u16]) -> String {
    if exps.len() == 1 {
        format!("t^{}", exps[0])
    } else {
        let e: Vec<String> = exps.iter().map(|x| x.to_string()).collect();
        format!("t^[{}]", e.join(","))
    }
}

fn zseries_report(s: &ZSeries) -> (Value, String) {
    let terms = s.terms();
    let mut text = String::new();
    let records = terms
        .iter()
        .map(|t| {
            let _ = writeln!(
                text,
                "{:<12} z^{:<3} {:<40} {}",
                monomial(&t.t_exp),
                t.z_exp,
                t.state,
                t.coeff
            );
            json!({
                "t_exp": t.t_exp,
                "z_exp": t.z_exp,
                "state": t.state.to_string(),
                "coeff": rat(&t.coeff),
            })
        })
        .collect();
    (Value::Array(records), text)
}

fn vector_report(v: &StateVector<ParamSeries>, label: &str, text: &mut String) -> Value {
    Value::Array(
        v.iter()
            .map(|(s, c)| {
                let _ = writeln!(text, "{label} {s}: {c}");
                json!({ "state": s.to_string(), "series": series_json(c) })
            })
            .collect(),
    )
}

fn classify(w: &InvertiblePolynomial) -> Report {
    let comps = &w.decomposition().components;
    let kind = if comps.len() == 1 {
        comps[0].kind.name()
    } else {
        "sum"
    };
    let ws = w.weights();
    let charges: Vec<String> = ws.charges.iter().map(|c| c.to_string()).collect();
    let comp_json: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "kind": c.kind.name(),
                "vars": c.vars.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "exponents": c.exps,
            })
        })
        .collect();
    let excluded = w.excluded_shape();
    let weights: Vec<String> = ws.weights.iter().map(|x| x.to_string()).collect();
    let mut text = String::new();
    let _ = writeln!(text, "polynomial: {w}");
    let _ = writeln!(text, "kind: {kind}");
    for c in comps {
        let vars: Vec<String> = c.vars.iter().map(|v| format!("x{}", v + 1)).collect();
        let _ = writeln!(text, "component: {} ({})", c.kind.name(), vars.join(", "));
    }
    let _ = writeln!(text, "weights: ({})", weights.join(","));
    let _ = writeln!(text, "degree: {}", ws.degree);
    let _ = writeln!(text, "charges: ({})", charges.join(","));
    let _ = writeln!(text, "central charge: {}", w.central_charge());
    let _ = writeln!(text, "calabi-yau: {}", w.is_calabi_yau());
    let _ = writeln!(
        text,
        "excluded shape: {}",
        excluded.as_deref().unwrap_or("none")
    );
    Report {
        json: json!({
            "polynomial": w.to_string(),
            "matrix": w.matrix().rows(),
            "kind": kind,
            "components": comp_json,
            "weights": ws.weights,
            "degree": ws.degree,
            "charges": charges,
            "central_charge": w.central_charge().to_string(),
            "calabi_yau": w.is_calabi_yau(),
            "excluded_shape": excluded,
        }),
        text,
    }
}

fn aut(w: &InvertiblePolynomial) -> Report {
    let g = aut_group(w);
    let gens: Vec<String> = g.generators.iter().map(|x| x.to_string()).collect();
    let j = grading_element(w).to_string();
    let factors: Vec<String> = g.invariant_factors.iter().map(|x| x.to_string()).collect();
    let mut text = String::new();
    let _ = writeln!(text, "order: {}", g.order);
    let _ = writeln!(text, "invariant factors: {}", factors.join(" x "));
    let _ = writeln!(text, "exponent: {}", g.exponent);
    let _ = writeln!(text, "j: {j}");
    for s in &gens {
        let _ = writeln!(text, "generator: {s}");
    }
    Report {
        json: json!({
            "order": g.order,
            "invariant_factors": g.invariant_factors,
            "exponent": g.exponent,
            "grading_element": j,
            "generators": gens,
        }),
        text,
    }
}

fn states(w: &InvertiblePolynomial) -> Result<Report, Failure> {
    let all = basis(w, DEFAULT_CAP)?;
    let mut text = String::new();
    let _ = writeln!(text, "dimension: {}", all.len());
    let records = all
        .iter()
        .map(|s| {
            let deg = degree(w, s);
            let narrow = s.gamma().is_narrow();
            let _ = writeln!(
                text,
                "{:<48} degree {:<6} {}",
                s.to_string(),
                deg,
                if narrow { "narrow" } else { "broad" }
            );
            json!({ "state": s.to_string(), "degree": deg.to_string(), "narrow": narrow })
        })
        .collect::<Vec<_>>();
    Ok(Report {
        json: json!({ "dimension": all.len(), "states": records }),
        text,
    })
}

fn value_report(v: &Q) -> Report {
    Report {
        json: json!({ "value": rat(v) }),
        text: format!("{v}\n"),
    }
}

pub fn execute(w: &InvertiblePolynomial, cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Classify { .. } => Ok(classify(w)),
        Command::Aut { .. } => Ok(aut(w)),
        Command::States { .. } => states(w),
        Command::Pairing { insertions, .. } => {
            let s = states_of(w, insertions, 2)?;
            Ok(value_report(&pairing(w, &s[0], &s[1])))
        }
        Command::Correlator3 { insertions, .. } => {
            let s = states_of(w, insertions, 3)?;
            Ok(value_report(&correlator3(w, [&s[0], &s[1], &s[2]])?))
        }
        Command::Ifunction {
            order,
            big,
            params,
            n_max,
            ..
        } => {
            let (series, head) = if *big {
                let p = params_of(w, params.as_deref())?;
                let names: Vec<String> = p.iter().map(|s| s.to_string()).collect();
                (
                    big_i(w, &p, *n_max)?,
                    json!({ "kind": "big", "n_max": n_max, "params": names }),
                )
            } else {
                (
                    small_i(w, *order)?,
                    json!({ "kind": "small", "order": order }),
                )
            };
            let (records, text) = zseries_report(&series);
            let mut json = head;
            json["terms"] = records;
            Ok(Report { json, text })
        }
        Command::Pfcheck { order, .. } => {
            let ok = pf_check(w, &small_i(w, *order)?, *order);
            let weights: Vec<String> = w.weights().weights.iter().map(|x| x.to_string()).collect();
            let text = format!(
                "operator weights: ({}), degree {}\norder: {order}\nannihilated: {ok}\n",
                weights.join(","),
                w.degree()
            );
            Ok(Report {
                json: json!({ "annihilated": ok, "order": order, "weights": w.weights().weights, "degree": w.degree() }),
                text,
            })
        }
        Command::Jfunction { order, .. } => {
            let split = split_i(w, &small_i(w, *order)?)?;
            let mirror = mirror_map_and_j(&split)?;
            let mut text = format!("omega_0: {}\n", split.omega0);
            let tau = vector_report(&mirror.tau, "tau", &mut text);
            let pieces: Vec<Value> = mirror
                .j_pieces
                .iter()
                .enumerate()
                .skip(2)
                .map(|(k, v)| {
                    let z = 1 - k as i64;
                    json!({ "minus_z_exp": z, "terms": vector_report(v, &format!("(-z)^{z}"), &mut text) })
                })
                .collect();
            Ok(Report {
                json: json!({ "order": order, "omega0": series_json(&split.omega0), "tau": tau, "j": pieces }),
                text,
            })
        }
        Command::Correlator {
            insertions,
            last,
            params,
            n_max,
            ..
        } => {
            let ins = parse_states(w, insertions)?;
            let last = parse_state(w, last)?;
            let p = params_of(w, params.as_deref())?;
            let n = n_max.unwrap_or(ins.len());
            let target = CorrelatorTarget {
                insertions: ins,
                last,
            };
            let v = extract_correlators(w, &p, &[target], n)?;
            Ok(value_report(&v[0]))
        }
    }
}
