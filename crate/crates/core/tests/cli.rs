use std::io::Cursor;

use matula::cli::run;

fn matula(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("matula").chain(args.iter().copied());
    let code = run(argv, &mut Cursor::new(stdin.as_bytes()), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn encode_and_decode() {
    assert_eq!(
        matula(&["encode", "17"], ""),
        (0, "((()()))\n".into(), String::new())
    );
    assert_eq!(matula(&["decode", "((()()))"], "").1, "17\n");
    assert_eq!(matula(&["encode", "1"], "").1, "\n");
    assert_eq!(matula(&["decode", ""], "").1, "1\n");
}

#[test]
fn batch_mode_reads_lines() {
    let (code, out, _) = matula(&["encode"], "2\n3\n\n6\n");
    assert_eq!(code, 0);
    assert_eq!(out, "()\n(())\n()(())\n");

    // An empty line decodes to 1.
    let (code, out, _) = matula(&["decode"], "()\n\n(())()\r\n");
    assert_eq!(code, 2);
    assert_eq!(out, "2\n1\n");
    let (code, out, _) = matula(&["--lenient", "decode"], "(())()\n");
    assert_eq!((code, out.as_str()), (0, "6\n"));
}

#[test]
fn g_and_big_g() {
    assert_eq!(matula(&["g", "17"], "").1, "4\n");
    assert_eq!(matula(&["G", "4"], "").1, "5\n");
    assert_eq!(matula(&["big-g", "2"], "").1, "1\n");
    let big = format!("{}", num_bigint::BigUint::from(2u32).pow(100));
    assert_eq!(matula(&["g", &big], "").1, "100\n");
}

#[test]
fn malformed_input_exits_2() {
    let (code, _, err) = matula(&["decode", "(()"], "");
    assert_eq!(code, 2);
    assert!(err.contains("offset 0"), "{err}");
    let (code, _, err) = matula(&["decode", "())("], "");
    assert_eq!(code, 2);
    assert!(err.contains("offset 2"), "{err}");
    let (code, _, err) = matula(&["encode", "017"], "");
    assert_eq!(code, 2);
    assert!(err.contains("offset 0"), "{err}");
    assert_eq!(matula(&["encode", "0"], "").0, 2);
    assert_eq!(matula(&["encode", "12x"], "").0, 2);
    assert_eq!(matula(&["bogus"], "").0, 2);
}

#[test]
fn overflow_exits_3() {
    let (code, _, err) = matula(
        &[
            "--sieve-limit",
            "100",
            "--hard-ceiling",
            "1000",
            "encode",
            "1009",
        ],
        "",
    );
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = matula(
        &[
            "--sieve-limit",
            "100",
            "--hard-ceiling",
            "1000",
            "decode",
            "((((((((()))))))))",
        ],
        "",
    );
    assert_eq!(code, 3);
}

#[test]
fn table_formats() {
    let (code, out, _) = matula(&["--format", "csv", "table", "--limit", "2"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "n,g,G,lower,upper,floor\n1,0,0,,,0.0\n2,1,1,,,1.0\n");
    let (_, out, _) = matula(&["--format", "json", "table", "3"], "");
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows[2]["G"], 3);
}

#[test]
fn tree_rendering() {
    let (code, out, _) = matula(&["tree", "17"], "");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "n = 17\nword = ((()()))\nedges = 4\no 17\n`-- o 7\n    `-- o 4\n        |-- o 1\n        `-- o 1\n"
    );
}

#[test]
fn verify_suites() {
    let (code, out, _) = matula(&["verify", "kraft-primes", "--limit", "1000"], "");
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("ALL PASS\n"));
    let (code, out, _) = matula(
        &["--format", "json", "verify", "bounds", "--limit", "1000"],
        "",
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["pass"], true);
    let (code, out, _) = matula(
        &["--format", "csv", "verify", "conclusion3", "--limit", "100"],
        "",
    );
    assert_eq!(code, 0);
    assert!(out.starts_with("check,limit,value,bound,pass,argmin_n,argmin_slack\n"));
}

#[test]
fn shannon_reports_are_reproducible() {
    let a = matula(&["--seed", "7", "verify", "shannon", "--limit", "50"], "");
    let b = matula(&["--seed", "7", "verify", "shannon", "--limit", "50"], "");
    assert_eq!(a, b);
    assert!(a.0 == 0 || a.0 == 1);
}

#[test]
fn config_file_then_flags() {
    let dir = std::env::temp_dir().join(format!("matula-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("matula.conf");
    std::fs::write(&path, "format = csv\nlenient = true\n").unwrap();
    let p = path.to_str().unwrap();

    let (code, out, _) = matula(&["--config", p, "decode", "(())()"], "");
    assert_eq!((code, out.as_str()), (0, "input,output\n(())(),6\n"));
    let (code, _, _) = matula(
        &[
            "--config", p, "--strict", "--format", "plain", "decode", "(())()",
        ],
        "",
    );
    assert_eq!(code, 2);

    std::fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(matula(&["--config", p, "encode", "3"], "").0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
