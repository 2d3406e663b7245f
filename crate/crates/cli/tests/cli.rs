use std::process::{Command, Output};

fn motifscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motifscope")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.txt");
    std::fs::write(&path, "# K4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let o = motifscope(&["count", "--graph", path.to_str().unwrap(), "--motif", "triangle", "--motif", "clique:4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("triangle,4,"), "{out}");
    assert!(out.contains("clique:4,1,"), "{out}");
}

#[test]
fn estimate_at_full_observation_is_exact() {
    let o = motifscope(&["estimate", "--er", "60,0.1", "--estimator", "adaptive", "--p", "1", "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4].parse::<f64>().unwrap(), row[5].parse::<f64>().unwrap());
}

#[test]
fn estimate_dumps_sample() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("s.txt");
    let o = motifscope(&[
        "estimate", "--er", "50,0.1", "--estimator", "linear", "--motif", "triangle", "--p", "0.5", "--dump-sample",
        dump.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&dump).unwrap();
    assert!(text.starts_with("0.5 "));
    assert!(text.lines().any(|l| l.starts_with("B ")));
}

#[test]
fn experiment_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("s{threads}.csv"));
        let o = Command::new(env!("CARGO_BIN_EXE_motifscope"))
            .env("MOTIFSCOPE_THREADS", threads)
            .args([
                "experiment", "--er", "300,0.03", "--estimator", "linear", "--motif", "triangle", "--p", "0.3,0.6",
                "--reps", "5", "--seed", "9", "--out", out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    assert!(outs[0].starts_with("# "));
    assert!(outs[0].contains("p,mean_rel_err,std_rel_err,n_reps"));
}

#[test]
fn mismatched_estimator_and_sampler_fail() {
    let o = motifscope(&["estimate", "--er", "30,0.1", "--estimator", "adaptive", "--sampler", "subgraph", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = motifscope(&["estimate", "--er", "30,0.1", "--estimator", "adaptive", "--motif", "triangle", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gadgets_export_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let o = motifscope(&["gadgets", "--matching", "cycle:4", "--stars", "2,1,second", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")), "{out}");
    assert!(dir.path().join("manifest.csv").exists());
    assert!(dir.path().join("paw-vs-C4.H.txt").exists());
}

#[test]
fn verify_subset() {
    let o = motifscope(&["verify", "--only", "4a", "--only", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().all(|l| l.starts_with("[PASS]")));
}
