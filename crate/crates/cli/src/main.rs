use clap::Parser;
use mimo_outage_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli).and_then(|output| {
        for w in &output.warnings {
            eprintln!("{w}");
        }
        output.write()?;
        Ok(output.failed_checks)
    }) {
        Ok(0) => 0,
        Ok(failed) => {
            eprintln!("{failed} oracle check(s) failed");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
