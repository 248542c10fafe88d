//! Drives the command-line front end in-process.

use std::io;

use wentropy::cli::{main_with_args, run, JobSpec};

fn main() {
    let jobs: [&[&str]; 3] = [
        &["wentropy", "entropy", "--dist", "exponential:lambda=1", "--measure", "weighted"],
        &[
            "wentropy",
            "curve",
            "--dist",
            "uniform:a=0,b=1",
            "--measure",
            "weighted-past",
            "--start",
            "0.2",
            "--end",
            "0.8",
            "--steps",
            "4",
            "--format",
            "csv",
        ],
        &["wentropy", "classify", "--dist", "uniform:a=0,b=0.3", "--kind", "wupl", "--format", "csv"],
    ];
    for args in jobs {
        println!("$ {}", args.join(" "));
        let job = JobSpec::from_args(args.iter().copied()).expect("valid arguments");
        let mut out = Vec::new();
        let code = run(&job, &mut out);
        let text = String::from_utf8(out).unwrap();
        let shown: Vec<&str> = text.lines().take(6).collect();
        println!("{}\n(exit {code})\n", shown.join("\n"));
    }

    let code =
        main_with_args(["wentropy", "entropy", "--dist", "gamma:alpha=-1,beta=1"], &mut io::stdout(), &mut io::sink());
    println!("(exit {code})");
}
