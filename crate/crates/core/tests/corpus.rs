use std::fs;
use std::path::PathBuf;

use gmodel::actions::samples;
use gmodel::document::{self, parse, serialize};
use gmodel::fixtures;

fn corpus(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// The document without its leading comment lines.
fn body(text: &str) -> String {
    text.lines().skip_while(|l| l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

fn corpus_files() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".gm"))
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_documents_are_canonical() {
    let files = corpus_files();
    assert!(files.len() >= 13);
    for f in files {
        let text = corpus(&f);
        let inst = parse(&text).unwrap_or_else(|e| panic!("{f}: {e}"));
        let out = serialize(&inst);
        assert_eq!(out, body(&text), "{f}");
        assert_eq!(parse(&out).unwrap(), inst, "{f}");
    }
}

#[test]
fn corpus_matches_fixtures() {
    let mut all = fixtures::all();
    all.push(("broken-odometer", fixtures::broken_odometer()));
    for (name, c) in all {
        let inst = parse(&corpus(&format!("{name}.gm"))).unwrap();
        assert_eq!(inst.correspondence, c, "{name}");
    }
    let o2 = parse(&corpus("o2.gm")).unwrap();
    assert_eq!(o2.regular, Some(fixtures::set_of(&o2.correspondence, &["v"])));
    assert_eq!(o2.parameters.depth, Some(3));
}

#[test]
fn corpus_actions_match_samples() {
    let cases = [
        ("loop-z3.gm", samples::loop_z3()),
        ("loop-chain.gm", samples::loop_chain()),
        ("groupoid-swap.gm", samples::swap_pair()),
        ("o2-bare-point.gm", (fixtures::o_n(2), samples::bare_point())),
    ];
    for (f, (c, a)) in cases {
        let inst = parse(&corpus(f)).unwrap();
        assert_eq!(inst.correspondence, c, "{f}");
        assert_eq!(inst.action, Some(a), "{f}");
    }
}

#[test]
fn conformance_valid() {
    let text = corpus("conformance/valid.gm");
    let inst = parse(&text).unwrap();
    let c = &inst.correspondence;
    assert!(c.validate(2).is_empty());
    assert_eq!(inst.parameters.depth, Some(4));
    assert_eq!(inst.parameters.wordcap, Some(2));
    assert_eq!(c.edges().len(), 2);
    let canon = serialize(&inst);
    assert_ne!(canon, body(&text));
    assert_eq!(parse(&canon).unwrap(), inst);
    assert_eq!(serialize(&parse(&canon).unwrap()), canon);
}

#[test]
fn conformance_invalid() {
    let text = corpus("conformance/invalid.gm");
    let expected = text.lines().next().unwrap().strip_prefix("# expect-error: ").unwrap();
    let e = parse(&text).unwrap_err();
    assert_eq!(e.to_string(), expected);
    assert_eq!(e.line, 12);
}

#[test]
fn errors_carry_locations() {
    let cases: [(&str, usize); 6] = [
        ("[base]\nkind = vertices\nobjects = v\n[nonsense]\n", 4),
        ("[base]\nkind = vertices\nobjects = v\n[edges]\na = v -> x\n", 5),
        ("[base]\nkind = vertices\nobjects = v\n[edges]\na v v\n", 5),
        ("[base]\nkind = wheel\n", 2),
        ("objects = v\n", 1),
        ("[base]\nkind = vertices\nobjects = v\n[edges]\na = v -> v\n[parameters]\ndepth = deep\n", 7),
    ];
    for (text, line) in cases {
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, line, "{text:?}: {e}");
        assert!(!e.message.is_empty());
    }
}

#[test]
fn instance_new_round_trips_every_fixture() {
    for (name, c) in fixtures::all() {
        let inst = document::Instance::new(c);
        assert_eq!(parse(&serialize(&inst)).unwrap(), inst, "{name}");
    }
}
