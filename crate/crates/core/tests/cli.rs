use std::path::Path;
use std::process::{Command, Output};

use berge_core::{BergeWitness, ColoredHypergraph};

fn berge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn affine_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = berge(dir.path(), &["construct", "affine", "--p", "3", "--d", "2", "--r", "3", "--c", "4", "-o", "ag23.brc"]);
    assert_eq!(o.status.code(), Some(0));
    let h = ColoredHypergraph::read_brc1(dir.path().join("ag23.brc")).unwrap();
    assert_eq!((h.num_vertices(), h.num_edges()), (9, 84));
    assert!(dir.path().join("ag23.brc.manifest.json").exists());

    let o = berge(dir.path(), &["verify", "--coloring", "ag23.brc", "--target", "K4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "color 1: FREE\ncolor 2: FREE\ncolor 3: FREE\ncolor 4: FREE\n");
    let manifest: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(manifest["subcommand"], "verify");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = berge(dir.path(), &["verify", "--coloring", "nosuch.brc", "--target", "K4"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(berge(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(berge(dir.path(), &["construct", "affine", "--p", "3"]).status.code(), Some(2));

    std::fs::write(dir.path().join("bad.brc"), "BRC1 3 2 4\n1 2\n").unwrap();
    let o = berge(dir.path(), &["verify", "--coloring", "bad.brc", "--target", "K3"]);
    assert_eq!(o.status.code(), Some(2));

    // some triple of AG(2,3) is separated only by the fourth class
    let o = berge(dir.path(), &["construct", "affine", "--p", "3", "--d", "2", "--r", "3", "--c", "3", "-o", "x.brc"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no valid color"));
}

#[test]
fn witness_written_and_rechecked() {
    let dir = tempfile::tempdir().unwrap();
    let h = ColoredHypergraph::monochromatic(3, 2, 6, 2).unwrap();
    h.write_brc1(dir.path().join("mono.brc")).unwrap();
    let o = berge(dir.path(), &["verify", "--coloring", "mono.brc", "--target", "K4", "-o", "w.json"]);
    assert_eq!(stdout(&o), "color 1: FREE\ncolor 2: WITNESS\n");
    let w = BergeWitness::read(dir.path().join("w.json")).unwrap();
    assert_eq!(w.color, 2);

    let o = berge(dir.path(), &["verify", "--coloring", "mono.brc", "--target", "K4", "--color", "2", "--witness", "w.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("witness: VALID"));

    let mut bad = w.clone();
    bad.color = 1;
    bad.write(dir.path().join("bad.json")).unwrap();
    let o = berge(dir.path(), &["verify", "--coloring", "mono.brc", "--target", "K4", "--witness", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));

    let o = berge(dir.path(), &["verify", "--coloring", "mono.brc", "--target", "K4", "--color", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_gives_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    ColoredHypergraph::monochromatic(3, 1, 7, 1).unwrap().write_brc1(dir.path().join("m.brc")).unwrap();
    let o = berge(dir.path(), &["verify", "--coloring", "m.brc", "--target", "K5", "--budget", "0"]);
    assert_eq!(stdout(&o), "color 1: INCONCLUSIVE\n");
}

#[test]
fn reduce_then_lift() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let o = berge(dir.path(), args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        o
    };
    run(&["construct", "affine", "--p", "5", "--d", "2", "--r", "3", "--c", "6", "--tie-break", "random", "--seed", "2", "-o", "a.brc"]);
    run(&["reduce", "--coloring", "a.brc", "--drop-color", "1", "-o", "r.brc", "--trace", "t.json"]);
    let reduced = ColoredHypergraph::read_brc1(dir.path().join("r.brc")).unwrap();
    assert_eq!(reduced.uniformity(), 2);
    assert!(reduced.colors().iter().all(|&c| c != 1));

    let o = run(&["verify", "--coloring", "r.brc", "--target", "K3", "-o", "w.json"]);
    assert!(stdout(&o).contains("WITNESS"));
    run(&["lift", "--trace", "t.json", "--coloring", "a.brc", "--witness", "w.json", "--target", "K3", "-o", "up.json"]);
    let o = run(&["verify", "--coloring", "a.brc", "--target", "K3", "--witness", "up.json"]);
    assert!(stdout(&o).starts_with("witness: VALID"));
}

#[test]
fn degenerate_reduction_keeps_trace() {
    let dir = tempfile::tempdir().unwrap();
    ColoredHypergraph::monochromatic(3, 2, 7, 1).unwrap().write_brc1(dir.path().join("m.brc")).unwrap();
    let o = berge(dir.path(), &["reduce", "--coloring", "m.brc", "--drop-color", "1", "-o", "r.brc"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("r.brc.trace.json").exists());
    assert!(!dir.path().join("r.brc").exists());
}

#[test]
fn layered_pipeline_and_shadow() {
    let dir = tempfile::tempdir().unwrap();
    let o = berge(dir.path(), &["construct", "erdos-base", "--m", "8", "--n", "4", "--beta", "3", "--seed", "1", "-o", "b.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = berge(dir.path(), &["construct", "layered", "--base", "b.json", "--copies", "3", "--beta", "3", "-o", "l.json", "--brc", "l.brc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nesting=0 witness=0 clique=0"));
    let h = ColoredHypergraph::read_brc1(dir.path().join("l.brc")).unwrap();
    assert_eq!((h.uniformity(), h.num_colors(), h.num_vertices()), (3, 3, 24));

    let o = berge(dir.path(), &["shadow", "--coloring", "l.brc"]);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["intersections"].as_array().unwrap().len(), 3);
}

#[test]
fn ramsey_writes_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let o = berge(dir.path(), &["search", "ramsey", "--r", "3", "--c", "2", "--target", "K3", "--max-vertices", "7", "-o", "k3.json"]);
    assert_eq!(o.status.code(), Some(0));
    let result: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("k3.json")).unwrap()).unwrap();
    assert_eq!(result["value"], 5);
    let cert = ColoredHypergraph::read_brc1(dir.path().join("k3.N4.brc")).unwrap();
    assert_eq!(cert.num_vertices(), 4);
    let o = berge(dir.path(), &["verify", "--coloring", "k3.N4.brc", "--target", "K3"]);
    assert_eq!(stdout(&o), "color 1: FREE\ncolor 2: FREE\n");
}

#[test]
fn search_avoid_reports_status() {
    let dir = tempfile::tempdir().unwrap();
    let o = berge(dir.path(), &["search", "avoid", "--r", "3", "--c", "2", "--vertices", "5", "--target", "K3"]);
    assert_eq!(stdout(&o), "status: EXHAUSTED\n");
    let o = berge(dir.path(), &["--threads", "4", "search", "avoid", "--r", "3", "--c", "2", "--vertices", "6", "--target", "K5", "-o", "c.brc"]);
    assert_eq!(stdout(&o), "status: FOUND\n");
    assert!(dir.path().join("c.brc").exists());
}
