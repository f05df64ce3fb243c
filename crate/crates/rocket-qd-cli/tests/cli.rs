//! End-to-end checks driving the compiled binary: a pair of tiny runs, then
//! every analysis subcommand over their outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rocket-qd"))
}

fn ok(output: Output) -> String {
    assert!(
        output.status.success(),
        "command failed:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

fn workspace(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("rocket-qd-cli-test").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn tiny_run(out: &Path, algo: &str, seed: u64) -> PathBuf {
    ok(bin()
        .args([
            "run",
            "--algo",
            algo,
            "--seed",
            &seed.to_string(),
            "--gens",
            "3",
        ])
        .args([
            "--solutions-per-gen",
            "6",
            "--emitters",
            "2",
            "--log-every",
            "3",
        ])
        .arg("--out")
        .arg(out)
        .output()
        .unwrap());
    out.join(algo).join(seed.to_string())
}

#[test]
fn full_pipeline_over_tiny_runs() {
    let ws = workspace("pipeline");
    let run_a = tiny_run(&ws.join("runs"), "map-elites", 1);
    let run_b = tiny_run(&ws.join("runs"), "map-elites", 2);

    for file in [
        "config",
        "log.csv",
        "archive_gen_3.csv",
        "archive_final.csv",
        "heatmap_final.svg",
    ] {
        assert!(run_a.join(file).exists(), "missing {file}");
    }

    // Same seed elsewhere: byte-identical archive and log.
    let rerun = tiny_run(&ws.join("rerun"), "map-elites", 1);
    assert_eq!(
        fs::read(run_a.join("archive_final.csv")).unwrap(),
        fs::read(rerun.join("archive_final.csv")).unwrap()
    );
    assert_eq!(
        fs::read(run_a.join("log.csv")).unwrap(),
        fs::read(rerun.join("log.csv")).unwrap()
    );

    // metrics: header plus 3 rows per run, tagged with algorithm and seed.
    let metrics = ok(bin()
        .args(["metrics", "--runs"])
        .arg(&run_a)
        .arg(&run_b)
        .output()
        .unwrap());
    let lines: Vec<&str> = metrics.lines().collect();
    assert_eq!(
        lines[0],
        "algorithm,seed,generation,evaluations,occupied,qd_score,best_fitness"
    );
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("map-elites,1,1,6,"));
    assert!(lines[4].starts_with("map-elites,2,1,6,"));

    // merge accepts run directories and writes a readable archive.
    let merged = ws.join("merged.csv");
    ok(bin()
        .args(["merge", "--out"])
        .arg(&merged)
        .arg(&run_a)
        .arg(&run_b)
        .output()
        .unwrap());
    let merged_text = fs::read_to_string(&merged).unwrap();
    assert!(merged_text.starts_with("xi,yi,"));

    // counts over the two runs.
    let counts = ok(bin()
        .arg("counts")
        .arg(&run_a)
        .arg(&run_b)
        .output()
        .unwrap());
    assert!(counts.starts_with("xi,yi,count\n"));
    assert!(counts.lines().skip(1).all(|l| {
        let c: u32 = l.rsplit(',').next().unwrap().parse().unwrap();
        c == 1 || c == 2
    }));

    // compare group {a} against itself: z = 0, p = 1 at every row.
    let compare = ok(bin()
        .args(["compare", "--group-a"])
        .arg(&run_a)
        .arg("--group-b")
        .arg(&run_a)
        .args(["--every", "1"])
        .output()
        .unwrap());
    let rows: Vec<&str> = compare.lines().skip(1).collect();
    assert_eq!(rows.len(), 6); // 3 generations x 2 metrics
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[5], "0", "expected z=0 in {row}");
        assert!(
            fields[6].parse::<f64>().unwrap() > 0.99,
            "expected p~1 in {row}"
        );
    }

    // select emits the candidate table (possibly only the header on a run
    // this small) and build sheets for every row.
    let docs = ws.join("docs");
    let select = ok(bin()
        .args(["select", "--archive"])
        .arg(run_a.join("archive_final.csv"))
        .arg("--docs")
        .arg(&docs)
        .output()
        .unwrap());
    assert!(select.starts_with("target,nose_type,"));
    let sheet_count = fs::read_dir(&docs).unwrap().count();
    assert_eq!(sheet_count, select.lines().count() - 1);

    // heatmaps in all three modes.
    for (mode, inputs) in [
        ("fitness", vec![run_a.clone()]),
        ("category", vec![run_a.clone(), run_b.clone()]),
        ("counts", vec![run_a.clone(), run_b.clone()]),
    ] {
        let svg_path = ws.join(format!("{mode}.svg"));
        let mut cmd = bin();
        cmd.args(["heatmap", "--mode", mode, "--archive"]);
        for input in &inputs {
            cmd.arg(input);
        }
        ok(cmd.arg("--out").arg(&svg_path).output().unwrap());
        let svg = fs::read_to_string(&svg_path).unwrap();
        assert!(svg.starts_with("<svg"), "{mode} heatmap is not svg");
    }
    // The category legend names runs as algo/seed.
    let category = fs::read_to_string(ws.join("category.svg")).unwrap();
    assert!(category.contains("map-elites/1"));
    assert!(category.contains("map-elites/1 + map-elites/2"));
}

#[test]
fn run_flags_override_config_file() {
    let ws = workspace("config");
    let config = ws.join("run.toml");
    fs::write(
        &config,
        format!(
            "algorithm = \"cma-me\"\nseed = 9\ngenerations = 2\nsolutions_per_gen = 6\n\
             emitters = 2\nout_dir = \"{}\"\n",
            ws.join("from-config").display()
        ),
    )
    .unwrap();

    // Config alone.
    ok(bin()
        .arg("run")
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap());
    assert!(ws.join("from-config/cma-me/9/archive_final.csv").exists());

    // Flag beats file: the seed changes, everything else sticks.
    ok(bin()
        .arg("run")
        .arg("--config")
        .arg(&config)
        .args(["--seed", "10"])
        .output()
        .unwrap());
    assert!(ws.join("from-config/cma-me/10/archive_final.csv").exists());

    let log = fs::read_to_string(ws.join("from-config/cma-me/10/log.csv")).unwrap();
    assert_eq!(log.lines().count(), 3); // header + 2 generations
}

#[test]
fn simulate_prints_a_sheet_and_writes_a_trace() {
    let ws = workspace("simulate");
    let trace = ws.join("trace.csv");
    let genome = ["0"; 11].join(",");
    let stdout = ok(bin()
        .args(["simulate", "--genome", &genome, "--trace"])
        .arg(&trace)
        .output()
        .unwrap());
    assert!(stdout.contains("genome: 0,0,0,0,0,0,0,0,0,0,0"));
    assert!(stdout.contains("stability:"));
    assert!(stdout.contains("flight:"));
    let csv = fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("t,x,z,u,w,mass\n"));

    // A leading negative gene must not read as a flag.
    let negative = ["-0.5"; 11].join(",");
    let stdout = ok(bin()
        .args(["simulate", "--genome", &negative])
        .output()
        .unwrap());
    assert!(stdout.contains("genome: -0.5,"));

    // Eleven genes or nothing.
    let short = bin()
        .args(["simulate", "--genome", "1,2,3"])
        .output()
        .unwrap();
    assert!(!short.status.success());
}
