use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use parametra_core::ordering::ModOrder;
use parametra_core::Ring;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parametra"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(script: &Path, args: &[&str]) -> Output {
    bin().arg(script).args(args).env_remove("PARAMETRA_FORMAT").env_remove("PARAMETRA_CONFIG").output().expect("binary runs")
}

fn run_text(text: &str, args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.prm");
    std::fs::write(&p, text).unwrap();
    run(&p, args)
}

fn scripts() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map_or(false, |e| e == "prm"))
        .collect();
    v.sort();
    assert!(v.len() >= 5);
    v
}

/// Text output equals the stored transcript; `PARAMETRA_BLESS=1` rewrites the transcripts.
#[test]
fn golden_transcripts() {
    for s in scripts() {
        let out = run(&s, &[]);
        assert!(out.status.success(), "{}: {}", s.display(), String::from_utf8_lossy(&out.stderr));
        let expected = s.with_extension("txt");
        if std::env::var_os("PARAMETRA_BLESS").is_some() {
            std::fs::write(&expected, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&expected).unwrap_or_else(|_| panic!("missing {}", expected.display()));
        assert_eq!(String::from_utf8_lossy(&out.stdout), want, "{}", s.display());
    }
}

#[test]
fn byte_determinism() {
    for s in scripts() {
        for fmt in ["text", "json"] {
            let a = run(&s, &["--format", fmt, "--seed", "11"]);
            let b = run(&s, &["--format", fmt, "--seed", "11"]);
            assert_eq!(a.stdout, b.stdout, "{} {}", s.display(), fmt);
        }
    }
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::options().with_draft(jsonschema::Draft::Draft202012).compile(&v).expect("schema compiles")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("invalid json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn validate(schema: &jsonschema::JSONSchema, v: &Value) {
    if let Err(errors) = schema.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("schema violations: {msgs:#?}");
    }
}

#[test]
fn reports_validate_against_schema() {
    let schema = schema();
    for s in scripts() {
        let out = run(&s, &["--format", "json", "--constraints", "pos=g,m1,m2"]);
        assert!(out.status.success());
        validate(&schema, &json_of(&out));
    }
    let every = "ring r = (0,a,b),(d,e),(c,dp);\nmodule M = [a*d+b, e], [0, d];\nmodule I = [1, 0], [0, 1];\n\
                 gb M; trinity M; lift M, M; syz M; leftinverse M; rightinverse M; leftkernel M; rightkernel M;\n\
                 rank M; dim M; control M; autonom M; genericity M; stratify M; stratify (a*b, a-b); lw-obstruction M;\n\
                 verify M; print M; specialize a=1;\n";
    let out = run_text(every, &["--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["commands"].as_array().unwrap().len(), 19);
    validate(&schema, &v);
    let bad = run_text("ring r = (0,a),(d),(c,dp);\nmodule M = [d^^2];\n", &["--format", "json"]);
    assert_eq!(bad.status.code(), Some(1));
    validate(&schema, &json_of(&bad));
}

fn ring_of(cmd: &Value) -> Ring {
    let names = |k: &str| cmd["ring"][k].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect::<Vec<_>>();
    Ring::new(&names("parameters"), &names("variables"), ModOrder::parse(cmd["ordering"].as_str().unwrap()).unwrap())
}

fn polys_in<'a>(v: &'a Value, out: &mut Vec<&'a str>) {
    match v {
        Value::String(s) => out.push(s),
        Value::Array(xs) => xs.iter().for_each(|x| polys_in(x, out)),
        Value::Object(m) => m.values().for_each(|x| polys_in(x, out)),
        _ => {}
    }
}

/// Every printed polynomial parses back in the reported ring and prints identically.
#[test]
fn printed_polynomials_round_trip() {
    let mut checked = 0;
    for s in scripts() {
        let v = json_of(&run(&s, &["--format", "json"]));
        for cmd in v["commands"].as_array().unwrap() {
            let ring = ring_of(cmd);
            let r = &cmd["result"];
            let mut texts = Vec::new();
            for key in ["image_representation", "left_inverse", "kernel_representation", "obstruction_to_controllability", "torsion_annihilator", "generators", "groebner_basis", "transformation", "syzygies", "matrix"] {
                polys_in(&r[key], &mut texts);
            }
            for t in texts {
                let p = ring.parse(t).unwrap_or_else(|e| panic!("`{t}` does not re-parse: {e}"));
                assert_eq!(ring.render(&p), t);
                checked += 1;
            }
            let mut factors = Vec::new();
            polys_in(&r["obstructions"]["factors"], &mut factors);
            polys_in(&r["factors"], &mut factors);
            polys_in(&r["h"], &mut factors);
            for t in factors {
                let p = ring.parse_param_poly(t).unwrap_or_else(|e| panic!("`{t}` does not re-parse: {e}"));
                assert_eq!(ring.render_param_poly(&p), t);
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "only {checked} polynomials checked");
}

/// `a` and `b` agree up to a nonzero rational factor.
fn proportional(ring: &Ring, a: &str, b: &str) -> bool {
    let (pa, pb) = (ring.parse(a).unwrap(), ring.parse(b).unwrap());
    if pa.is_zero() || pb.is_zero() {
        return pa.is_zero() && pb.is_zero();
    }
    let c = pa.leading_coeff().unwrap().checked_div(pb.leading_coeff().unwrap()).unwrap();
    c.is_constant() && pa == pb.scale(&c)
}

/// The generic and equal-length bipendulum sessions reproduce the published transcript
/// items, entries compared up to a common constant factor. Singular's short exponent form
/// (`d2`) is written out as `d^2`.
#[test]
fn bipendulum_matches_published_session() {
    let v = json_of(&run(&golden_dir().join("bipendulum.prm"), &["--format", "json"]));
    let cmds = v["commands"].as_array().unwrap();
    let generic = &cmds[0]["result"];
    let ring = ring_of(&cmds[0]);
    assert_eq!(generic["first_nonzero_ext"], -1);
    assert_eq!(generic["verdict"], "strongly controllable(flat)");
    assert_eq!(generic["dimension"], 1);
    let image: Vec<&str> = generic["image_representation"][0].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    let published = ["(-g*l2)*d^2+(-g^2)", "(-g*l1)*d^2+(-g^2)", "(-l1*l2)*d^4+(-g*l1-g*l2)*d^2+(-g^2)"];
    // one common factor for the whole column
    let scale = ring.parse(image[0]).unwrap().leading_coeff().unwrap().checked_div(ring.parse(published[0]).unwrap().leading_coeff().unwrap()).unwrap();
    for (ours, theirs) in image.iter().zip(published) {
        assert_eq!(ring.parse(ours).unwrap(), ring.parse(theirs).unwrap().scale(&scale));
    }
    let inv: Vec<&str> = generic["left_inverse"]["entries"][0].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    let published_inv = ["(-l1)/(g^2*l1-g^2*l2)", "(l2)/(g^2*l1-g^2*l2)", "0"];
    for (ours, theirs) in inv.iter().zip(published_inv) {
        // the inverse scales by the reciprocal of the image's factor
        assert_eq!(ring.parse(ours).unwrap().scale(&scale), ring.parse(theirs).unwrap());
    }
    assert_eq!(generic["obstructions"]["items"], serde_json::json!(["g", "l1-l2"]));

    let equal = &cmds[4]["result"];
    let ring2 = ring_of(&cmds[4]);
    assert_eq!(ring2.params, vec!["g".to_string(), "l".to_string()]);
    assert_eq!(equal["first_nonzero_ext"], 1);
    assert_eq!(equal["verdict"], "not controllable");
    assert_eq!(equal["dimension"], 1);
    let ann = equal["torsion_annihilator"].as_array().unwrap();
    assert_eq!(ann.len(), 1);
    assert!(proportional(&ring2, ann[0].as_str().unwrap(), "(-l)*d^2+(-g)"));
    let image2 = equal["image_representation"][0].as_array().unwrap();
    for (ours, theirs) in image2.iter().zip(["(g)", "(g)", "(l)*d^2+(g)"]) {
        assert_eq!(ring2.parse(ours.as_str().unwrap()).unwrap(), ring2.parse(theirs).unwrap());
    }
    let autonom = &cmds[5]["result"];
    assert_eq!(autonom["first_nonzero_ext"], 0);
    assert_eq!(autonom["verdict"], "not autonomous");
    assert_eq!(autonom["column_rank"], 2);
    assert_eq!(autonom["dimension"], 1);

    let text = String::from_utf8(run(&golden_dir().join("bipendulum.prm"), &[]).stdout).unwrap();
    for line in [
        "   number of first nonzero Ext:",
        "   strongly controllable(flat), image representation:",
        "   left inverse to image representation:",
        "   dimension of the system:",
        "   Parameter constellations which might lead to a non-controllable system:",
        "   not controllable, image representation for controllable part:",
        "   kernel representation for controllable part:",
        "   obstruction to controllability",
        "   annihilator of torsion module (of obstruction to controllability)",
        "   column rank of the matrix",
        "[10]:",
    ] {
        assert!(text.lines().any(|l| l == line), "missing `{line}`");
    }
}

#[test]
fn admissibility_constraints_filter_obstructions() {
    let out = run(&golden_dir().join("bipendulum.prm"), &["--format", "json", "--constraints", "pos=g,l1,l2"]);
    let v = json_of(&out);
    assert_eq!(v["commands"][1]["result"]["obstructions"]["factors"], serde_json::json!(["l1-l2"]));
    assert_eq!(v["commands"][1]["result"]["obstructions"]["excluded"], serde_json::json!(["g"]));
}

#[test]
fn exit_codes_and_diagnostics() {
    let syntax = run_text("ring r = (0,a,b),(d),(c,dp);\nmodule M = [d^^2];\n", &[]);
    assert_eq!(syntax.status.code(), Some(1));
    let err = String::from_utf8_lossy(&syntax.stderr);
    assert!(err.contains(":2:15: syntax error"), "{err}");

    let undeclared = run_text("ring r = (0,a),(d),(c,dp);\nmodule M = [a*d+x];\n", &[]);
    assert_eq!(undeclared.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&undeclared.stderr).contains("2:17: undeclared identifier"));

    let ordering = run_text("ring r = (0,a),(d),(c,xy);\n", &[]);
    assert_eq!(ordering.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&ordering.stderr).contains("malformed ordering"));

    let engine = run_text("ring r = (0,a),(d),(c,dp);\nmodule M = [d/a];\nspecialize a=0;\n", &[]);
    assert_eq!(engine.status.code(), Some(2));

    let empty = run_text("ring r = (0,a,b),(d),(c,dp);\nmodule M = [a*d+b];\n", &[]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(empty.stdout.is_empty());

    let flag = run_text("ring r = (0,a),(d),(c,dp);\n", &["--format", "yaml"]);
    assert_eq!(flag.status.code(), Some(1));
    assert_eq!(bin().output().unwrap().status.code(), Some(1));
    assert_eq!(run(Path::new("/nonexistent/x.prm"), &[]).status.code(), Some(1));
}

#[test]
fn settings_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("s.prm");
    std::fs::write(&script, "ring r = (0,a),(d),(c,dp);\nmodule M = [a*d+1];\nrank M;\n").unwrap();
    let cfg = dir.path().join("p.conf");
    std::fs::write(&cfg, "format = json\nout_dir = ".to_string() + &dir.path().display().to_string() + "\n").unwrap();

    // config file alone: json into the output directory
    let out = bin().arg(&script).arg("--config").arg(&cfg).env_remove("PARAMETRA_FORMAT").output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("s.json")).unwrap();
    assert!(written.contains("\"rank\": 1"));

    // environment beats the config file, the flag beats both
    let out = bin().arg(&script).arg("--config").arg(&cfg).arg("-o").arg(dir.path().join("o.txt")).env("PARAMETRA_FORMAT", "text").output().unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_to_string(dir.path().join("o.txt")).unwrap().starts_with("> rank M;"));
    let out = bin().arg(&script).arg("--format").arg("json").env("PARAMETRA_FORMAT", "text").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).starts_with('{'));
}

#[test]
fn order_flag_overrides_script() {
    let text = "ring r = (0,a),(d,e),(c,dp);\nmodule M = [d^2+e, e^2];\norder (C,lp);\ngb M;\n";
    let v = json_of(&run_text(text, &["--format", "json"]));
    assert_eq!(v["commands"][0]["ordering"], "(C,lp)");
    let v = json_of(&run_text(text, &["--format", "json", "--order", "(c,dp)"]));
    assert_eq!(v["commands"][0]["ordering"], "(c,dp)");
}

#[test]
fn timing_is_opt_in() {
    let s = golden_dir().join("first_order.prm");
    assert!(!String::from_utf8_lossy(&run(&s, &[]).stdout).contains(" ms"));
    assert!(String::from_utf8_lossy(&run(&s, &["--timing"]).stdout).contains(" ms\n"));
}
