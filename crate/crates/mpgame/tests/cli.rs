use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

fn mpgame(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mpgame")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mpgame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn documented_examples() {
    let (code, out) = mpgame(&["payoff", "--game", &fixture("example1.game"), "--profile", &fixture("alternating.profile")]);
    assert_eq!((code, out.as_str()), (0, "1/4,1/4\n"));

    let (code, out) = mpgame(&["nonempty", "--game", &fixture("example2.game")]);
    assert_eq!((code, out.as_str()), (1, "no\n"));

    let (code, out) = mpgame(&["dominated", "--game", &fixture("example2.game"), "--state", "s", "--vector", "2,1,0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("yes C={2,3} "), "{out}");
}

#[test]
fn exit_codes() {
    let (code, _) = mpgame(&["nonempty", "--game", &fixture("example2-modified.game")]);
    assert_eq!(code, 0);
    let (code, _) = mpgame(&["nonempty", "--game", &fixture("missing.game")]);
    assert_eq!(code, 2);
    let (code, _) = mpgame(&["dominated", "--game", &fixture("example2.game"), "--vector", "1,2"]);
    assert_eq!(code, 2);
    let (code, _) = mpgame(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _) = mpgame(&["nonempty", "--game", &fixture("example2-modified.game"), "--max-search-nodes", "1"]);
    assert_eq!(code, 3);
}

#[test]
fn vectors_accept_fractions_and_negatives() {
    let (code, out) = mpgame(&["dominated", "--game", &fixture("example1.game"), "--vector", "-1/2,1/4"]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = mpgame(&["dominated", "--game", &fixture("example1.game"), "--vector", "1,1"]);
    assert_eq!(code, 1);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "ecore", "--game", &fixture("example2-modified.game"), "--spec", "true -> GF at_s"];
    let (c1, a) = mpgame(&args);
    let (c2, b) = mpgame(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["witness"]["payoff"], serde_json::json!(["1/1", "1/1", "1/1"]));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

/// Every yes answer re-verifies, with the oracles enabled.
#[test]
fn yes_answers_verify() {
    let e1 = fixture("example1.game");
    let e2 = fixture("example2.game");
    let e2m = fixture("example2-modified.game");
    let p1 = fixture("prop1.game");
    let cases: Vec<(Vec<String>, Option<String>)> = vec![
        (vec!["dominated".into(), "--game".into(), e2.clone(), "--vector".into(), "2,1,0".into()], None),
        (vec!["bendev".into(), "--game".into(), e1.clone(), "--profile".into(), fixture("bad-ne.profile")], Some(fixture("bad-ne.profile"))),
        (vec!["membership".into(), "--game".into(), p1.clone(), "--profile".into(), fixture("prop1-ll.profile")], Some(fixture("prop1-ll.profile"))),
        (vec!["nonempty".into(), "--game".into(), e2m.clone()], None),
        (vec!["ecore".into(), "--game".into(), e2m.clone(), "--spec".into(), "true -> GF at_s".into()], None),
        (vec!["ecore".into(), "--game".into(), e1.clone(), "--spec".into(), "true -> GF l".into()], None),
        (vec!["acore".into(), "--game".into(), e1.clone(), "--spec".into(), "true -> GF l & GF r".into()], None),
        (vec!["values".into(), "--game".into(), e2.clone(), "--coalition".into(), "2,3".into()], None),
        (vec!["payoff".into(), "--game".into(), e1.clone(), "--profile".into(), fixture("alternating.profile")], Some(fixture("alternating.profile"))),
    ];
    for (k, (args, prof)) in cases.iter().enumerate() {
        let mut full = vec!["--json".to_string()];
        full.extend(args.iter().cloned());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let (_, out) = mpgame(&refs);
        let path = scratch(&format!("result{k}.json"));
        std::fs::write(&path, &out).unwrap();
        let game = &args[args.iter().position(|a| a == "--game").unwrap() + 1];
        let mut v = vec!["verify", "--paranoid", "--jobs", "2", "--game", game, "--result", path.to_str().unwrap()];
        if let Some(p) = prof {
            v.extend(["--profile", p.as_str()]);
        }
        let (code, text) = mpgame(&v);
        assert_eq!(code, 0, "{args:?}: {text}");
        assert!(text.starts_with("verified"), "{text}");
    }
}

#[test]
fn tampered_witness_is_rejected() {
    let (_, out) = mpgame(&["--json", "dominated", "--game", &fixture("example2.game"), "--vector", "2,1,0"]);
    let mut v: serde_json::Value = serde_json::from_str(&out).unwrap();
    v["witness"]["z"] = serde_json::json!(["3/1", "1/1"]);
    let path = scratch("tampered.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, text) = mpgame(&["verify", "--game", &fixture("example2.game"), "--result", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{text}");
}

#[test]
fn generators_write_instances() {
    let cases = [
        ("qsat2", Some("phi.qbf"), "yes"),
        ("qsat3", Some("psi.qbf"), "yes"),
        ("dfa", Some("unary.dfa"), "no"),
        ("gadget", None, "no"),
    ];
    for (kind, input, expected) in cases {
        let prefix = scratch(kind);
        let mut args = vec!["gen".to_string(), kind.to_string(), "--out".into(), prefix.display().to_string()];
        if let Some(i) = input {
            args.extend(["--input".to_string(), fixture(i)]);
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _) = mpgame(&refs);
        assert_eq!(code, 0);
        let side: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(format!("{}.expected.json", prefix.display())).unwrap()).unwrap();
        assert_eq!(side["expected"], expected, "{kind}");
        let game = format!("{}.game", prefix.display());
        let (code, out) = match side["command"].as_str().unwrap() {
            "dominated" => {
                let x: Vec<String> = side["vector"].as_array().unwrap().iter().map(|r| r.as_str().unwrap().to_string()).collect();
                mpgame(&["dominated", "--game", &game, "--state", side["state"].as_str().unwrap(), "--vector", &x.join(",")])
            }
            "bendev" => mpgame(&["bendev", "--game", &game, "--profile", &format!("{}.profile", prefix.display())]),
            _ => mpgame(&["nonempty", "--game", &game]),
        };
        assert_eq!(code, if expected == "yes" { 0 } else { 1 }, "{kind}: {out}");
    }
}
