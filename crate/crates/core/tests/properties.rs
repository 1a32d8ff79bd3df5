use proptest::prelude::*;

use fraccable::emit::{study_table, Table};
use fraccable::expr::{parse_expression, Vars};
use fraccable::report::compute_orders;
use fraccable::rl::{midpoint_rl_apply, TimeHistory};
use fraccable::study::{aligned_derivative_study, StudyReport, StudyRow};
use fraccable::weights::{midpoint_weights_direct, midpoint_weights_recurrence};
use fraccable::ErrorNorm;

/// Straight-from-text evaluator used as an independent reference for the
/// library parser. Same grammar, no syntax tree.
mod reference {
    use fraccable::expr::Vars;
    use statrs::function::gamma::gamma;

    pub struct Eval<'a> {
        s: &'a [u8],
        i: usize,
        v: Vars,
    }

    pub fn eval(text: &str, v: Vars) -> f64 {
        let mut e = Eval {
            s: text.as_bytes(),
            i: 0,
            v,
        };
        let r = e.expr();
        e.ws();
        assert_eq!(e.i, e.s.len(), "trailing input in {text}");
        r
    }

    impl Eval<'_> {
        fn ws(&mut self) {
            while self.i < self.s.len() && self.s[self.i] == b' ' {
                self.i += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.ws();
            self.s.get(self.i).copied()
        }

        fn expr(&mut self) -> f64 {
            let mut acc = self.term();
            while let Some(c @ (b'+' | b'-')) = self.peek() {
                self.i += 1;
                let r = self.term();
                acc = if c == b'+' { acc + r } else { acc - r };
            }
            acc
        }

        fn term(&mut self) -> f64 {
            let mut acc = self.unary();
            while let Some(c @ (b'*' | b'/')) = self.peek() {
                self.i += 1;
                let r = self.unary();
                acc = if c == b'*' { acc * r } else { acc / r };
            }
            acc
        }

        fn unary(&mut self) -> f64 {
            if self.peek() == Some(b'-') {
                self.i += 1;
                return -self.unary();
            }
            let base = self.primary();
            if self.peek() == Some(b'^') {
                self.i += 1;
                return base.powf(self.unary());
            }
            base
        }

        fn primary(&mut self) -> f64 {
            match self.peek().expect("operand") {
                b'(' => {
                    self.i += 1;
                    let r = self.expr();
                    assert_eq!(self.peek(), Some(b')'));
                    self.i += 1;
                    r
                }
                c if c.is_ascii_digit() || c == b'.' => {
                    let start = self.i;
                    while self.i < self.s.len()
                        && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.')
                    {
                        self.i += 1;
                    }
                    std::str::from_utf8(&self.s[start..self.i])
                        .unwrap()
                        .parse()
                        .unwrap()
                }
                _ => {
                    let start = self.i;
                    while self.i < self.s.len() && self.s[self.i].is_ascii_alphabetic() {
                        self.i += 1;
                    }
                    let name = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                    let mut args = Vec::new();
                    if self.peek() == Some(b'(') {
                        self.i += 1;
                        loop {
                            args.push(self.expr());
                            match self.peek() {
                                Some(b',') => self.i += 1,
                                _ => break,
                            }
                        }
                        assert_eq!(self.peek(), Some(b')'));
                        self.i += 1;
                    }
                    match (name, args.as_slice()) {
                        ("x", []) => self.v.x,
                        ("y", []) => self.v.y,
                        ("t", []) => self.v.t,
                        ("pi", []) => std::f64::consts::PI,
                        ("e", []) => std::f64::consts::E,
                        ("sin", [a]) => a.sin(),
                        ("cos", [a]) => a.cos(),
                        ("exp", [a]) => a.exp(),
                        ("sqrt", [a]) => a.sqrt(),
                        ("gamma", [a]) => gamma(*a),
                        ("pow", [a, b]) => a.powf(*b),
                        _ => panic!("unknown call {name}/{}", args.len()),
                    }
                }
            }
        }
    }
}

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..40).prop_map(|n| format!("{}", n as f64 / 4.0)),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("t".to_string()),
        Just("pi".to_string()),
        Just("e".to_string()),
    ]
}

/// Random well-formed source text with mixed operators, optional
/// parentheses and unary minus in any operand position.
fn expression_text() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 40, 3, |inner| {
        prop_oneof![
            (
                inner.clone(),
                prop::sample::select(vec!["+", "-", "*", "/", "^"]),
                inner.clone(),
                any::<bool>()
            )
                .prop_map(|(a, op, b, wrap)| {
                    let s = format!("{a} {op} {b}");
                    if wrap {
                        format!("({s})")
                    } else {
                        s
                    }
                }),
            inner.clone().prop_map(|a| format!("-{a}")),
            (
                prop::sample::select(vec!["sin", "cos", "exp", "sqrt", "gamma"]),
                inner.clone()
            )
                .prop_map(|(f, a)| format!("{f}({a})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("pow({a}, {b})")),
        ]
    })
}

fn same_value(a: f64, b: f64) -> bool {
    if a.is_nan() || b.is_nan() {
        return a.is_nan() && b.is_nan();
    }
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-14 * a.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_print_is_a_fixed_point(text in expression_text()) {
        let e = parse_expression(&text).unwrap();
        let printed = e.to_string();
        let reparsed = parse_expression(&printed).unwrap();
        prop_assert_eq!(&reparsed, &e);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn parser_matches_reference_evaluator(
        text in expression_text(),
        x in 0.1f64..2.0,
        y in 0.1f64..2.0,
        t in 0.1f64..2.0,
    ) {
        let v = Vars::xyt(x, y, t);
        let ours = parse_expression(&text).unwrap().eval(&v);
        let theirs = reference::eval(&text, v);
        prop_assert!(same_value(ours, theirs), "{text}: {ours} vs {theirs}");
    }
}

proptest! {
    #[test]
    fn orders_are_scale_invariant(
        errors in prop::collection::vec(1e-8f64..1.0, 2..7),
        scale in 1e-6f64..1e6,
    ) {
        let n = errors.len();
        let taus: Vec<f64> = (0..n).map(|i| 1.0 / (5.0 * ((i + 1) * (i + 1)) as f64)).collect();
        let hs: Vec<f64> = (0..n).map(|i| 1.0 / (5.0 * (i + 1) as f64)).collect();
        let scaled: Vec<f64> = errors.iter().map(|e| e * scale).collect();
        let (t1, s1) = compute_orders(&errors, &taus, &hs).unwrap();
        let (t2, s2) = compute_orders(&scaled, &taus, &hs).unwrap();
        for (a, b) in t1.iter().zip(&t2).chain(s1.iter().zip(&s2)) {
            match (a, b) {
                (None, None) => {}
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}"),
                _ => prop_assert!(false, "order presence differs"),
            }
        }
    }

    #[test]
    fn midpoint_operator_is_linear(
        beta in 0.05f64..1.0,
        k in 0usize..40,
        seed_a in prop::collection::vec(-1.0f64..1.0, 41),
        seed_b in prop::collection::vec(-1.0f64..1.0, 41),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let tau = 0.01;
        let w = midpoint_weights_recurrence(beta, k).unwrap();
        let ha = TimeHistory::new(tau, seed_a[..=k].to_vec()).unwrap();
        let hb = TimeHistory::new(tau, seed_b[..=k].to_vec()).unwrap();
        let combined = ha.combine(a, &hb, b).unwrap();
        let lhs = midpoint_rl_apply(&w, &combined, k).unwrap();
        let rhs = a * midpoint_rl_apply(&w, &ha, k).unwrap() + b * midpoint_rl_apply(&w, &hb, k).unwrap();
        let scale = tau.powf(-beta) * (a.abs() + b.abs() + 1.0) * (k as f64 + 1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn weight_oracles_agree(beta in 0.01f64..=1.0, n in 0usize..300) {
        let r = midpoint_weights_recurrence(beta, n).unwrap();
        let d = midpoint_weights_direct(beta, n).unwrap();
        for l in 0..=n {
            let tol = (1e-10 * d[l].abs()).max(1e-14);
            prop_assert!((r[l] - d[l]).abs() <= tol, "l = {l}: {} vs {}", r[l], d[l]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn aligned_ladder_is_second_order(beta in 0.1f64..0.9) {
        let taus: Vec<f64> = [41, 81, 161, 321].iter().map(|&d| 1.0 / d as f64).collect();
        let rows = aligned_derivative_study(beta, &taus).unwrap();
        for r in &rows[1..] {
            let o = r.observed_order.unwrap();
            prop_assert!((1.85..=2.10).contains(&o), "beta = {beta}: {o}");
        }
    }

    #[test]
    fn study_csv_is_deterministic_and_round_trips(
        rows in prop::collection::vec((1e-6f64..1.0, 1e-3f64..1.0, 1e-9f64..1.0, prop::option::of(0.0f64..5.0)), 1..6)
    ) {
        let report = StudyReport {
            norm: ErrorNorm::MaxAll,
            rows: rows
                .iter()
                .map(|&(tau, h, error, order)| StudyRow { tau, h, error, tco: order, sco: order.map(|o| 2.0 * o) })
                .collect(),
        };
        let text = study_table(&report).to_csv_string();
        prop_assert_eq!(&text, &study_table(&report).to_csv_string());
        prop_assert!(!text.contains('\r'));
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        prop_assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), vec!["tau", "h", "error", "tco", "sco"]);
        for (record, row) in reader.records().zip(&report.rows) {
            let record = record.unwrap();
            let close = |field: &str, v: f64| {
                let parsed: f64 = field.parse().unwrap();
                (parsed - v).abs() <= 5e-9 * v.abs()
            };
            prop_assert!(close(&record[0], row.tau) && close(&record[1], row.h) && close(&record[2], row.error));
            match row.tco {
                Some(o) => prop_assert!(close(&record[3], o)),
                None => prop_assert_eq!(&record[3], ""),
            }
        }
    }
}

#[test]
fn header_only_table_round_trips() {
    let t = Table::new(vec!["tau", "abs_error", "observed_order"]);
    let text = t.to_csv_string();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 3);
    assert_eq!(reader.records().count(), 0);
}
