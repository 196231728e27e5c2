use clap::Parser;
use modtower_cli::{emit, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("mt: {e}");
            std::process::exit(1);
        }
    }
    if let Err(e) = run(&cli).and_then(|a| emit(&a, cli.report.as_deref())) {
        eprintln!("mt: {e}");
        std::process::exit(e.exit_code());
    }
}
