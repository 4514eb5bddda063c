use std::io::Write;

use clap::Parser;
use log::LevelFilter;

use percentile_indicators::cli::{run, Cli};

fn main() {
    env_logger::Builder::new()
        .filter_level(LevelFilter::Warn)
        .format(|buf, record| {
            writeln!(
                buf,
                "pbi: {}: {}",
                record.level().as_str().to_lowercase(),
                record.args()
            )
        })
        .init();

    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("pbi: error: {err:#}");
        std::process::exit(1);
    }
}
