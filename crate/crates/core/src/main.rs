use std::io::Write;
use std::process::ExitCode;

use superjordan::cli;

fn main() -> ExitCode {
    let (json, quiet) = {
        let args: Vec<String> = std::env::args().collect();
        (args.iter().any(|a| a == "--json"), args.iter().any(|a| a == "--quiet"))
    };
    let r = cli::run_from(std::env::args_os());
    if !quiet {
        let text = match (&r.payload, json) {
            (Some(p), true) => serde_json::to_string_pretty(p).expect("json") + "\n",
            _ => r.report.clone(),
        };
        let mut out: Box<dyn Write> = if r.status == 2 {
            Box::new(std::io::stderr())
        } else {
            Box::new(std::io::stdout())
        };
        let _ = out.write_all(text.as_bytes());
    }
    ExitCode::from(r.status)
}
