use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rankp_cli::{exit_code, parse_document, render_table, run, Options};
use rankp_core::degeneration::ExtensionPolicy;
use rankp_core::fp::Window;

#[derive(Parser, Debug)]
#[command(name = "rankp", version, about = "Classify and lift rank-p torsors described in a document")]
struct Args {
    /// Document to run; reads standard input when omitted or `-`
    file: Option<PathBuf>,

    /// p-adic precision N (overrides the header)
    #[arg(long)]
    prec: Option<i64>,

    /// T-window LO:HI (overrides the header)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<Window>,

    /// Ramified extensions: off, auto, or c=K for a fixed factor
    #[arg(long, default_value = "off", value_parser = parse_extend)]
    extend: ExtensionPolicy,

    /// Emit newline-delimited JSON instead of a table
    #[arg(long)]
    json: bool,

    /// Seed for randomized commands
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Print the document in canonical form and exit
    #[arg(long)]
    canonical: bool,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad window start: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad window end: {e}"))?;
    if lo > hi {
        return Err("window start exceeds window end".into());
    }
    Ok(Window::new(lo, hi))
}

fn parse_extend(s: &str) -> Result<ExtensionPolicy, String> {
    match s {
        "off" => Ok(ExtensionPolicy::Off),
        "auto" => Ok(ExtensionPolicy::Auto),
        _ => {
            let c = s.strip_prefix("c=").ok_or("expected off, auto or c=K")?;
            match c.parse::<u32>() {
                Ok(c) if c > 0 => Ok(ExtensionPolicy::Fixed(c)),
                _ => Err(format!("bad extension factor `{c}`")),
            }
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut src = String::new();
    let read = match &args.file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map(|s| src = s),
        _ => std::io::stdin().read_to_string(&mut src).map(|_| ()),
    };
    if let Err(e) = read {
        eprintln!("rankp: cannot read input: {e}");
        return ExitCode::from(2);
    }
    let doc = match parse_document(&src) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("rankp: {e}");
            return ExitCode::from(2);
        }
    };
    if args.canonical {
        print!("{doc}");
        return ExitCode::SUCCESS;
    }
    let opts = Options { prec: args.prec, window: args.window, extend: args.extend, seed: args.seed };
    let records = match run(&doc, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("rankp: {e}");
            return ExitCode::from(2);
        }
    };
    let mut out = std::io::stdout().lock();
    if args.json {
        for r in &records {
            let line = serde_json::to_string(r).expect("records serialize");
            let _ = writeln!(out, "{line}");
        }
    } else if !records.is_empty() {
        let _ = write!(out, "{}", render_table(&records));
    }
    ExitCode::from(exit_code(&records) as u8)
}
