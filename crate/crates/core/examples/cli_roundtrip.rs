//! Drive the command-line front end in-process and print its JSON output.
//!
//! cargo run --release --example cli_roundtrip

use clap::Parser;
use fseries::cli::{run, RunConfig};

fn main() -> fseries::Result<()> {
    for argv in [
        vec!["fseries", "--x", "rational:2/7", "--out", "json", "eval"],
        vec!["fseries", "--construct", "golden", "--depth", "12", "cf"],
    ] {
        let cfg = RunConfig::try_parse_from(&argv).map_err(|e| fseries::Error::Parse(e.to_string()))?;
        let out = run(&cfg)?;
        println!("$ {}\n{}", argv[1..].join(" "), out.text);
    }
    Ok(())
}
