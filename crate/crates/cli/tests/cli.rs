use std::io::Write;
use std::process::{Command, Stdio};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pforms::commands::read_form;
use pforms::{parse_form, run_command, FormDocument};
use pforms_core::random::{random_closed_form, random_form, random_rational_form, Shape};
use pforms_core::{Prime, Ring};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["pforms"];
    argv.extend_from_slice(args);
    let out = run_command(argv, &mut std::io::empty());
    (out.code, out.stdout, out.stderr)
}

fn ring(p: u64, n: usize) -> Ring {
    Ring::new(Prime::new(p).unwrap(), n)
}

#[test]
fn spec_examples() {
    assert_eq!(
        run(&["--p", "3", "--n", "1", "pclosed", "z^2 dz"]),
        (0, "false\n".into(), String::new())
    );

    let (code, eta, _) = run(&["--p", "3", "--n", "2", "integrate", "(x^2+y^2) dx^dy"]);
    assert_eq!(code, 0);
    let (code, d, _) = run(&["--p", "3", "--n", "2", "d", eta.trim()]);
    assert_eq!(code, 0);
    let r = ring(3, 2);
    assert_eq!(
        parse_form(d.trim(), r).unwrap(),
        parse_form("(x^2+y^2) dx^dy", r).unwrap()
    );

    let (code, out, err) = run(&["--p", "3", "--n", "1", "integrate", "z^2 dz"]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.contains("NotPClosed at I=(1)"), "{err}");
}

#[test]
fn subcommand_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["--p", "3", "--n", "2", "d", "x^2*y"],
            "2*z1*z2 dz1 + z1^2 dz2",
        ),
        (&["--p", "3", "--n", "2", "wedge", "dy", "dx"], "2 dz1^dz2"),
        (&["--p", "3", "--n", "2", "closed", "y dx"], "false"),
        (
            &["--p", "3", "--n", "2", "split-ri", "(x^2+x) dx"],
            "z1 dz1\nz1^2 dz1",
        ),
        (&["--p", "3", "--n", "1", "phi", "z^2 dz"], "2 dz1"),
        (&["--p", "3", "--n", "1", "cartier", "z^2 dz"], "dz1"),
        (&["--p", "3", "--n", "1", "gamma0", "dz"], "z1^2 dz1"),
        (&["--p", "3", "--n", "1", "gamma0", "x dx"], "z1^5 dz1"),
        (&["--p", "3", "--n", "1", "class", "(x^2+x) dx"], "z1^2 dz1"),
        (
            &["--p", "3", "--n", "1", "same-class", "z^2 dz", "0"],
            "false",
        ),
        (
            &["--p", "3", "--n", "1", "same-class", "(x^2+x) dx", "x^2 dx"],
            "true",
        ),
        (&["--p", "3", "--n", "1", "oracle", "z^2 dz"], "none"),
        (
            &["--p", "3", "--n", "1", "integrate", "(1/z^2) dz"],
            "(2*z1^2/z1^3)",
        ),
        (
            &["--p", "3", "--n", "1", "cartier", "(1/z) dz"],
            "(z1^2/z1^3) dz1",
        ),
    ];
    for (args, expected) in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_eq!(out.trim_end(), *expected, "{args:?}");
    }
}

#[test]
fn split_ct_text_and_json() {
    let (code, out, _) = run(&["--p", "3", "--n", "1", "split-ct", "(x^2+x) dx"]);
    assert_eq!(code, 0);
    assert_eq!(out, "z1 dz1\nz1^2 dz1\n");
    let (_, out, _) = run(&["--p", "3", "--n", "1", "--json", "split-ri", "(x^2+x) dx"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["rational"]["terms"].is_array() && v["irrational"]["terms"].is_array());
    let (_, out, _) = run(&["--p", "3", "--n", "1", "--json", "class", "z^2 dz"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact_difference_check"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--p", "3", "--n", "1", "d", "q"]).0, 1);
    assert_eq!(run(&["--p", "4", "--n", "1", "d", "x"]).0, 1);
    assert_eq!(run(&["--p", "3", "--n", "1", "d", "z2"]).0, 1);
    assert_eq!(run(&["--p", "3", "d", "x"]).0, 1);
    assert_eq!(run(&["--p", "3", "--n", "1", "frobnicate"]).0, 1);
    assert_eq!(run(&["--p", "3", "--n", "2", "cartier", "y dx"]).0, 2);
    assert_eq!(run(&["--p", "3", "--n", "1", "integrate", "x"]).0, 2);
    assert_eq!(run(&["--p", "3", "--n", "1", "split-ct", "(1/x) dx"]).0, 2);
    assert_eq!(run(&["--p", "3", "--n", "1", "same-class", "dx", "x"]).0, 2);
    let (code, _, err) = run(&[
        "--p",
        "3",
        "--n",
        "3",
        "oracle",
        "--max-unknowns",
        "10",
        "dx",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("SystemTooLarge"));
    let (code, _, err) = run(&["--p", "3", "--n", "2", "d", "x dx +"]);
    assert_eq!(code, 1);
    assert!(err.contains("1:7"), "{err}");
}

#[test]
fn json_arguments_infer_the_ring() {
    let r = ring(5, 2);
    let w = parse_form("x^4*y dx + dy", r).unwrap();
    let doc = FormDocument::from_form(&w).to_json();
    let (code, out, _) = run(&["--json", "d", &doc]);
    assert_eq!(code, 0);
    let back = FormDocument::from_json(out.trim()).unwrap();
    assert_eq!(back.to_form(r).unwrap(), w.exterior_derivative());
    assert_eq!(run(&["--p", "3", "d", &doc]).0, 1);
}

#[test]
fn binary_reads_stdin_and_sets_exit_codes() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pforms"))
        .args(["--p", "3", "--n", "2", "integrate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"(x^2+y^2) dx^dy")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "2*z1^2*z2 dz1 + z1*z2^2 dz2\n"
    );

    let status = Command::new(env!("CARGO_BIN_EXE_pforms"))
        .args(["--p", "3", "--n", "1", "integrate", "z^2 dz"])
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn check_is_reproducible() {
    let a = run(&["check", "--seed", "7", "--trials", "30"]);
    let b = run(&["check", "--seed", "7", "--trials", "30"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert!(a.1.contains("REFUTED   contested o-r-kills-exact"));
    assert!(!a.1.contains("FAIL"));
}

fn shape() -> Shape {
    Shape {
        max_deg: 4,
        max_terms: 3,
        max_indices: 3,
    }
}

const FORM_COMMANDS: &[&str] = &[
    "d",
    "phi",
    "gamma0",
    "integrate",
    "cartier",
    "split-ri",
    "split-ct",
    "class",
    "oracle",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn print_parse_fixpoint(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize, r in 0..=3usize) {
        let ring = ring([2, 3, 5][pi], n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = r.min(n);
        let w = random_form(&mut rng, ring, r, shape()).to_rational();
        let text = w.to_string();
        let back = parse_form(&text, ring).unwrap();
        if !w.is_zero() {
            prop_assert_eq!(&back, &w);
        }
        prop_assert_eq!(back.to_string(), text);

        let q = random_rational_form(&mut rng, ring, r, shape());
        prop_assert_eq!(parse_form(&q.to_string(), ring).unwrap().to_string(), q.to_string());
        let doc = FormDocument::from_form(&q);
        let json = doc.to_json();
        let again = FormDocument::from_json(&json).unwrap().to_form(ring).unwrap();
        prop_assert_eq!(FormDocument::from_form(&again).to_json(), json);
    }

    #[test]
    fn outputs_reparse(seed in any::<u64>(), pi in 0..3usize, n in 1..=2usize, json: bool) {
        let p = [2u64, 3, 5][pi];
        let ring = ring(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 1 + (seed % n as u64) as usize;
        let w = random_closed_form(&mut rng, ring, r, shape());
        let text = w.to_string();
        let (ps, ns) = (p.to_string(), n.to_string());
        for cmd in FORM_COMMANDS {
            let mut args = vec!["--p", ps.as_str(), "--n", ns.as_str()];
            if json {
                args.push("--json");
            }
            args.extend([*cmd, text.as_str()]);
            let (code, out, err) = run(&args);
            if code != 0 {
                prop_assert_eq!(code, 2, "{} {}: {}", cmd, text, err);
                continue;
            }
            for line in out.lines() {
                if json {
                    let v: serde_json::Value = serde_json::from_str(line).unwrap();
                    let docs: Vec<serde_json::Value> = match v {
                        serde_json::Value::Object(ref m) if m.contains_key("format") => vec![v.clone()],
                        serde_json::Value::Object(m) => m.into_iter().map(|(_, d)| d).filter(|d| d.is_object()).collect(),
                        _ => vec![],
                    };
                    for d in docs {
                        prop_assert!(read_form(&d.to_string(), ring).is_ok(), "{} {}", cmd, d);
                    }
                } else if line != "none" {
                    prop_assert!(parse_form(line, ring).is_ok(), "{} printed {}", cmd, line);
                }
            }
        }
    }
}
