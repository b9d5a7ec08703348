mod common;

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use lgspin_core::charclass::correlator3;
use lgspin_core::givental::{
    big_i, default_params, extract_correlators, m_product, pf_check, restrict_to_line, small_i,
    twisted_i_oracle, CorrelatorTarget,
};
use lgspin_core::rational::{q, qi};
use lgspin_core::statespace::{pairing, unique_state, BasisState, Decoration};
use lgspin_core::symmetry::{grading_element, DiagonalSymmetry};
use lgspin_core::{Frac, Q};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn jstate(w: &lgspin_core::InvertiblePolynomial, k: i64) -> BasisState {
    unique_state(w, &grading_element(w).pow(k)).unwrap()
}

fn weights_and_degree() -> Outcome {
    let w = poly(CHAIN5);
    let ok = w.weights().weights == vec![4, 3, 2, 1, 1] && w.degree() == 11;
    check(
        ok,
        format!("weights {:?}, d = {}", w.weights().weights, w.degree()),
    )
}

fn pairing_sweep() -> Outcome {
    let mut count = 0;
    for text in [CHAIN5, D5] {
        let w = poly(text);
        let unit = jstate(&w, 1);
        for g in elements(&w) {
            let e = unique_state(&w, &g).unwrap();
            let f = unique_state(&w, &g.inv()).unwrap();
            let value = if e.zero_flag || f.zero_flag {
                Q::zero()
            } else {
                correlator3(&w, [&e, &f, &unit]).unwrap()
            };
            if value != pairing(&w, &e, &f) {
                return check(false, format!("{text}: mismatch at {g}"));
            }
            count += 1;
        }
    }
    pass(format!("{count} pairs"))
}

fn three_point() -> Outcome {
    let w = poly(CHAIN5);
    let v = correlator3(&w, [&jstate(&w, 3), &jstate(&w, 3), &jstate(&w, 6)]).unwrap();
    check(v == qi(-2), format!("<j^3, j^3, j^6> = {v}"))
}

fn loop_matrix() -> Outcome {
    let w = poly(LOOP4);
    let fr = |v: &[i64]| DiagonalSymmetry::new(v.iter().map(|&n| Frac::new(n, 35)).collect());
    let u = fr(&[1, -2, 6, -12]);
    let v = fr(&[-18, 1, -3, 6]);
    let j = grading_element(&w);
    let id = DiagonalSymmetry::identity(4);
    let minus = BasisState::new(&w, Decoration::new(id.clone(), vec![1, 3])).unwrap();
    let plus = BasisState::new(&w, Decoration::new(id, vec![0, 2])).unwrap();
    let mut m = vec![vec![Q::zero(); 2]; 2];
    for (r, row) in [&minus, &plus].iter().enumerate() {
        for (c, g) in [&u, &v].iter().enumerate() {
            let a = unique_state(&w, g).unwrap();
            let b = unique_state(&w, &j.mul(&g.inv())).unwrap();
            m[r][c] = correlator3(&w, [row, &a, &b]).unwrap();
        }
    }
    let expect = vec![vec![qi(4), qi(1)], vec![qi(1), qi(9)]];
    check(
        m == expect,
        format!("B = ({}, {}; {}, {})", m[0][0], m[0][1], m[1][0], m[1][1]),
    )
}

fn picard_fuchs() -> Outcome {
    let w = poly(CHAIN5);
    let s = small_i(&w, 25).unwrap();
    check(pf_check(&w, &s, 25), "small I annihilated through t^25")
}

fn restriction() -> Outcome {
    let w = poly(CHAIN5);
    let big = big_i(&w, &[jstate(&w, 2)], 14).unwrap();
    let restricted = restrict_to_line(&big).unwrap();
    let small = small_i(&w, 15).unwrap();
    check(
        restricted == small,
        format!("{} terms through t^15", small.terms().len()),
    )
}

fn oracle() -> Outcome {
    let w = poly(CHAIN5);
    let elems = elements(&w);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonzero = 0;
    for i in 0..200 {
        let n = rng.gen_range(0..=5);
        let tuple: Vec<DiagonalSymmetry> = (0..n)
            .map(|_| elems[rng.gen_range(0..elems.len())].clone())
            .collect();
        let mp = m_product(&w, &tuple).unwrap();
        let or = twisted_i_oracle(&w, &tuple).unwrap();
        if or.coeff != mp.coeff || (!mp.coeff.is_zero() && or.z_power != mp.z_power) {
            return check(
                false,
                format!("tuple {i}: oracle {} vs closed form {}", or.coeff, mp.coeff),
            );
        }
        if !mp.coeff.is_zero() {
            nonzero += 1;
        }
    }
    pass(format!("200 tuples, {nonzero} with non-zero limit"))
}

fn extracted() -> (Outcome, Vec<Q>) {
    let w = poly(CHAIN5);
    let params = default_params(&w).unwrap();
    let (j2, j3, j4, j6) = (jstate(&w, 2), jstate(&w, 3), jstate(&w, 4), jstate(&w, 6));
    let targets = vec![
        CorrelatorTarget {
            insertions: vec![j2.clone(); 4],
            last: j6.clone(),
        },
        CorrelatorTarget {
            insertions: vec![j2.clone(), j2.clone(), j3.clone()],
            last: j6.clone(),
        },
        CorrelatorTarget {
            insertions: vec![j2, j4],
            last: j6.clone(),
        },
        CorrelatorTarget {
            insertions: vec![j3.clone(), j3],
            last: j6,
        },
    ];
    let values = extract_correlators(&w, &params, &targets, 6).unwrap();
    let ok = values[..3] == [q(-2, 121), q(-4, 11), qi(1)];
    (
        check(ok, format!("{}, {}, {}", values[0], values[1], values[2])),
        values,
    )
}

fn relation(values: &[Q]) -> Outcome {
    let lhs = q(121, 12) * &values[0] - q(11, 2) * &values[1]
        + q(5, 3) * &values[2]
        + q(1, 4) * &values[3];
    check(
        lhs == qi(3),
        format!("combination = {lhs} with <j^3 j^3 j^6> = {}", values[3]),
    )
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = 1000;
    let corpus: Vec<_> = CORPUS
        .iter()
        .map(|t| (poly(t), elements(&poly(t))))
        .collect();
    let chains: Vec<_> = CHAINS
        .iter()
        .map(|t| (poly(t), elements(&poly(t))))
        .collect();
    let narrow: Vec<_> = CHAINS
        .iter()
        .map(|t| (poly(t), narrow_elements(&poly(t))))
        .collect();
    let mut failures = Vec::new();
    let mut run = |name: &str, f: &mut dyn FnMut(&mut ChaCha8Rng) -> bool| {
        if !(0..cases).all(|_| f(&mut rng)) {
            failures.push(name.to_string());
        }
    };
    let pick = |rng: &mut ChaCha8Rng,
                set: &[(lgspin_core::InvertiblePolynomial, Vec<DiagonalSymmetry>)],
                n: usize| {
        let (w, el) = &set[rng.gen_range(0..set.len())];
        let t: Vec<DiagonalSymmetry> = (0..n)
            .map(|_| el[rng.gen_range(0..el.len())].clone())
            .collect();
        (w.clone(), t)
    };
    run("degree duality", &mut |r| {
        let (w, t) = pick(r, &corpus, 1);
        degree_duality(&w, &t[0])
    });
    run("D^R two forms", &mut |r| {
        let n = r.gen_range(0..=6);
        let (w, t) = pick(r, &chains, n);
        notationfin_forms(&w, &t)
    });
    run("Ch0 identity", &mut |r| {
        let n = r.gen_range(0..=6);
        let (w, t) = pick(r, &chains, n);
        ch0_identity(&w, &t)
    });
    run("case pairing", &mut |r| {
        let n = r.gen_range(0..=6);
        let (w, t) = pick(r, &chains, n);
        degco(&w, &t)
    });
    run("eps valuation", &mut |r| {
        let n = r.gen_range(2..=4);
        let (w, t) = pick(r, &chains, n);
        eps_valuation(&w, &closed_tuple(&w, &t), 2)
    });
    run("correlator3 vanishing", &mut |r| {
        let (w, t) = pick(r, &chains, 2);
        correlator3_vanishing(&w, &closed_tuple(&w, &t))
    });
    run("z-power bookkeeping", &mut |r| {
        let n = r.gen_range(0..=6);
        let (w, t) = pick(r, &narrow, n);
        z_power_bookkeeping(&w, &t)
    });
    run("series identities", &mut |r| {
        let x = q(r.gen_range(-20..=20), r.gen_range(1..=9));
        x == qi(1) || (lemma_exponential(&x, 10) && lemma_twisting_series(&x, 10) && lemma_todd(10))
    });
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "8 suites x 1000 cases".to_string()
        } else {
            failures.join(", ")
        },
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn main() {
    let mut all_ok = true;
    let mut report = |id: usize, name: &str, out: Outcome, took: Duration, budget: Duration| {
        let in_time = took <= budget;
        let ok = out.ok && in_time;
        all_ok &= ok;
        println!(
            "criterion {id:>2} {}: {name} [{}] ({:.3?}, budget {:?}){}",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took,
            budget,
            if in_time { "" } else { " over budget" }
        );
    };
    let (o, t) = timed(weights_and_degree);
    report(1, "weights and degree", o, t, Duration::from_millis(1));
    let (o, t) = timed(pairing_sweep);
    report(
        2,
        "pairing as a three-point correlator",
        o,
        t,
        Duration::from_secs(10),
    );
    let (o, t) = timed(three_point);
    report(3, "three-point value", o, t, Duration::from_millis(100));
    let (o, t) = timed(loop_matrix);
    report(4, "loop B-matrix", o, t, Duration::from_secs(1));
    let (o, t) = timed(picard_fuchs);
    report(
        5,
        "Picard-Fuchs annihilation",
        o,
        t,
        Duration::from_secs(30),
    );
    let (o, t) = timed(restriction);
    report(6, "restriction identity", o, t, Duration::from_secs(60));
    let (o, t) = timed(oracle);
    report(7, "oracle equivalence", o, t, Duration::from_secs(60));
    let ((o, values), t) = timed(extracted);
    report(8, "extracted correlators", o, t, Duration::from_secs(300));
    let (o, t2) = timed(|| relation(&values));
    report(9, "relation check", o, t + t2, Duration::from_secs(300));
    let (o, t) = timed(properties);
    report(10, "property suites", o, t, Duration::from_secs(120));
    if !all_ok {
        std::process::exit(1);
    }
}
