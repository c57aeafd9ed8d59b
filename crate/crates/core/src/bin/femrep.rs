use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command as Cli};
use femrep::pipeline::{run, Command, KeyKind, PipelineError, RunConfig, CONFIG_ENV, CONFIG_KEYS};

fn about(command: Command) -> &'static str {
    match command {
        Command::Ingest => "Parse and join the corpus files into the bundle cache",
        Command::TrainGender => "Train the name-based gender model",
        Command::Analyze => "Compute per-movie features, Bechdel results and ratio tables",
        Command::Pca => "Run PCA with KMO and Bartlett diagnostics on the feature table",
        Command::Bechdel => "Score the Bechdel criteria only",
        Command::Report => "Regenerate the cast/crew and dialogue/POS ratio tables",
    }
}

fn cli() -> Cli {
    let mut cli = Cli::new("femrep")
        .about("Female-representation features and PCA for screenplay corpora")
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .global(true)
                .help(format!("TOML config file (default: ${CONFIG_ENV})")),
        );
    for (key, kind, help) in CONFIG_KEYS {
        let arg = Arg::new(*key).long(*key).global(true).help(*help);
        cli = cli.arg(match kind {
            KeyKind::Flag => arg.action(ArgAction::SetTrue),
            KeyKind::Path => arg.value_name("PATH"),
            KeyKind::Text => arg.value_name("TEXT"),
            KeyKind::Integer => arg.value_name("N"),
            KeyKind::Number => arg.value_name("X"),
            KeyKind::List => arg.value_name("A,B,..."),
        });
    }
    cli.subcommands(Command::ALL.map(|c| Cli::new(c.name()).about(about(c))))
}

fn configure(matches: &ArgMatches) -> Result<RunConfig, PipelineError> {
    let mut cfg = RunConfig::load(
        matches
            .get_one::<String>("config")
            .map(PathBuf::from)
            .as_deref(),
    )?;
    for (key, kind, _) in CONFIG_KEYS {
        if *kind == KeyKind::Flag {
            if matches.get_flag(key) {
                cfg.set(key, "true")?;
            }
        } else if let Some(v) = matches.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command: Command = name.parse().expect("subcommands come from Command::ALL");
    let result = configure(sub).and_then(|cfg| run(command, &cfg));
    match result {
        Ok(report) => {
            for path in &report.outputs {
                println!("wrote {}", path.display());
            }
            for (key, value) in &report.summary {
                println!("{key}: {value}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("femrep {command}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
