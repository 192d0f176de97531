use clap::Parser;
use fseries::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(out) => {
            print!("{}", out.text);
            std::process::exit(out.exit_code);
        }
        Err(e) => {
            eprintln!("fseries: {e}");
            std::process::exit(2);
        }
    }
}
