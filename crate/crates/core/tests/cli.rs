use gysin::cli::{run, Document};
use serde_json::Value;

fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut input = stdin.as_bytes();
    let mut argv = vec!["gysin"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn example(spec: &str) -> String {
    let (code, out, err) = cli(&["example", spec], "");
    assert_eq!(code, 0, "{err}");
    out
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/document.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::draft202012::new(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}\n{doc}");
}

#[test]
fn hopf_pipe_into_gysin() {
    let (code, out, _) = cli(&["gysin"], &example("hopf"));
    assert_eq!(code, 0);
    let line = |name: &str| out.lines().find(|l| l.starts_with(name)).unwrap().to_string();
    assert!(line("H0(tot)").ends_with(" Z"));
    assert!(line("H3(tot)").ends_with(" Z"));
    assert!(line("H1(tot)").ends_with(" 0"));
    assert!(line("H2(tot)").ends_with(" 0"));
}

#[test]
fn homology_of_cp2_from_file() {
    let dir = std::env::temp_dir().join(format!("gysin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cpn2.json");
    std::fs::write(&path, example("cpn(2)")).unwrap();
    let (code, out, _) = cli(&["homology", "--in", path.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "H0=Z H1=0 H2=Z H3=0 H4=Z");

    let out_path = dir.join("report.json");
    let (code, out, _) = cli(
        &["homology", "--in", path.to_str().unwrap(), "--format", "json", "--out", out_path.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["homology"][2]["free_rank"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn validate_reports_failing_degree() {
    let bad = r#"{"schema_version":1,"kind":"complex","ring":"Z","degrees":{"0":1,"1":1,"2":1},
        "differentials":{"1":[[0,0,"1"]],"2":[[0,0,"1"]]}}"#;
    let (code, _, err) = cli(&["validate"], bad);
    assert_eq!(code, 1);
    assert!(err.contains("degree 2"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["frobnicate"], "").0, 2);
    assert_eq!(cli(&["homology", "--in", "/nonexistent/file.json"], "").0, 2);
    assert_eq!(cli(&["homology"], "not json").0, 1);
    assert_eq!(cli(&["example", "nope"], "").0, 1);
    // wrong kind for the command
    assert_eq!(cli(&["gysin"], &example("cpn(1)")).0, 1);
    assert_eq!(cli(&["--help"], "").0, 0);
}

#[test]
fn ring_flag_changes_coefficients() {
    let (_, out, _) = cli(&["homology", "--ring", "Q"], &example("rp2"));
    assert_eq!(out.trim(), "H0=Q H1=0 H2=0");
    let (_, out, _) = cli(&["homology", "--ring", "Zp:2"], &example("rp2"));
    assert_eq!(out.trim(), "H0=F2 H1=F2 H2=F2");
}

#[test]
fn seed_and_size_flags() {
    let (_, a, _) = cli(&["example", "random_complex", "--seed", "7", "--size", "10"], "");
    let (_, b, _) = cli(&["example", "random_complex(7,10)"], "");
    assert_eq!(a, b);
    let doc = Document::from_json(&a).unwrap();
    match doc {
        Document::Complex(c) => assert_eq!(c.total_rank(), 10),
        other => panic!("unexpected {}", other.kind()),
    }
}

#[test]
fn round_trip_through_cli() {
    for spec in ["hopf", "rp2", "morse_bott_hopf", "random_ses_morphism(2,8)", "random_mb_datum(3,9)"] {
        let text = example(spec);
        let doc = Document::from_json(&text).unwrap();
        assert_eq!(doc.to_json(), text, "{spec}");
        let (code, out, _) = cli(&["validate"], &text);
        assert_eq!(code, 0);
        assert!(out.starts_with("ok"));
    }
}

#[test]
fn solve_partial_sequence() {
    let les = r#"{"schema_version":1,"kind":"les","ring":"Q","bounded":true,
        "slots":[{"name":"A"},{"name":"B","dim":0},{"name":"C"},{"name":"D","dim":0}],
        "maps":[{"name":"a"},{"name":"b"},{"name":"c"}]}"#;
    let (code, out, err) = cli(&["solve", "--format", "json"], les);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["solution"]["dims"][0], 0);
    assert_eq!(v["solution"]["dims"][2], 0);
}

#[test]
fn order_of_a_filtered_map() {
    let doc = r#"{"schema_version":1,"kind":"chain_map","ring":"Z","shift":0,
        "source":{"degrees":{"0":2},"filtration":{"0":[0,1]}},
        "target":{"degrees":{"0":2},"filtration":{"0":[0,1]}},
        "matrices":{"0":[[1,0,"1"]]}}"#;
    let (code, out, err) = cli(&["order"], doc);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), "order 1");
}

#[test]
fn every_command_output_matches_the_schema() {
    let v = schema();
    let inputs: Vec<(&str, String)> = vec![
        ("homology", example("rp2")),
        ("cone", example("random_two_line(1,5)")),
        ("snake", example("random_two_line(2,5)")),
        ("grid57", example("random_ses_morphism(3,8)")),
        ("spectral", example("hopf")),
        ("gysin", example("hopf")),
        ("check-lemma58", example("random_two_line(4,6)")),
        ("equivariant", example("morse_bott_hopf")),
        ("mb-assemble", example("random_mb_datum(5,8)")),
        ("phi", example("random_mb_datum(6,8)")),
        ("theorem11", example("morse_bott_hopf")),
        ("bv", example("morse_bott_hopf")),
        ("borel", example("rp2")),
        ("diagram17", example("random_mb_datum(7,10)")),
        ("validate", example("cpn(3)")),
    ];
    for (cmd, input) in &inputs {
        let (code, out, err) = cli(&[cmd, "--format", "json"], input);
        assert_eq!(code, 0, "{cmd}: {err}");
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_valid(&v, &doc, cmd);
        // table output works too
        assert_eq!(cli(&[cmd], input).0, 0, "{cmd} table");
    }
    let (code, out, _) = cli(&["diagram17", "--sawc", "2", "--format", "json"], "");
    assert_eq!(code, 0);
    assert_valid(&v, &serde_json::from_str(&out).unwrap(), "diagram17 --sawc");

    let (_, les, _) = cli(&["gysin", "--format", "json"], &example("hopf"));
    let (code, out, _) = cli(&["solve", "--format", "json"], &les);
    assert_eq!(code, 0);
    assert_valid(&v, &serde_json::from_str(&out).unwrap(), "solve");

    let order = r#"{"schema_version":1,"kind":"chain_map","ring":"Z","shift":0,
        "source":{"degrees":{"0":1},"filtration":{"0":[0]}},"target":{"degrees":{"0":1},"filtration":{"0":[0]}}}"#;
    let (code, out, _) = cli(&["order", "--format", "json"], order);
    assert_eq!(code, 0);
    assert_valid(&v, &serde_json::from_str(&out).unwrap(), "order");

    // every corpus document
    for spec in [
        "sphere(0)",
        "sphere(2)",
        "cpn(2)",
        "rp2",
        "hopf",
        "morse_bott_hopf",
        "trivial_borel(sphere(1),2)",
        "random_complex(1,9)",
        "random_two_line(1,6)",
        "random_ses_morphism(1,8)",
        "random_mb_datum(1,10)",
    ] {
        assert_valid(&v, &serde_json::from_str(&example(spec)).unwrap(), spec);
    }
}

#[test]
fn schema_rejects_malformed_documents() {
    let v = schema();
    let bad: Value = serde_json::from_str(r#"{"schema_version":1,"kind":"complex","ring":"R","degrees":{}}"#).unwrap();
    assert!(!v.is_valid(&bad));
    let bad: Value = serde_json::from_str(r#"{"schema_version":1,"kind":"complex","ring":"Z","degrees":{"0":1},"extra":1}"#).unwrap();
    assert!(!v.is_valid(&bad));
}
