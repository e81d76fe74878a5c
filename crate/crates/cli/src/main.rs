use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use metacrysl::diagnostic::{has_errors, Diagnostic};
use metacrysl::emit::{emit, rendered_files};
use metacrysl::metrics::{meta_files, savings};
use metacrysl::model::BuildConfig;
use metacrysl::preprocess::build;
use metacrysl::source::{FileSource, Language, OsFs, SourceFile};
use metacrysl::syntax::{parse_abstract, parse_config, parse_crysl, parse_refinement};
use metacrysl::trace::{check_trace, parse_trace, report, ReportFormat, RuleSet};
use metacrysl::validate::{validate_abstract, validate_spec};
use metacrysl::{compile_order, to_dot};

const OK: u8 = 0;
const FINDINGS: u8 = 1;
const FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "metacrysl", version, about = "Generate, validate and check CrySL rule families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the rules of every configuration in a .conf file
    Build {
        config: PathBuf,
        /// List the files that would be written without writing them
        #[arg(long)]
        dry_run: bool,
        #[arg(long)]
        json: bool,
    },
    /// Parse and validate rule, refinement and configuration files
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Check a JSON-lines event trace against a directory of .crysl rules
    Check {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Line-count savings and duplication of a rule family
    Metrics {
        #[arg(long)]
        meta: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        configs: Vec<PathBuf>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Print the per-configuration curve as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Show the typestate automaton of a rule's ORDER
    Fsm {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { FAILURE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Build { config, dry_run, json } => cmd_build(&config, dry_run, json),
        Command::Validate { paths } => cmd_validate(&paths),
        Command::Check { rules, trace, format } => cmd_check(&rules, &trace, format),
        Command::Metrics { meta, configs, json, csv } => cmd_metrics(&meta, &configs, json, csv),
        Command::Fsm { rule, dot } => cmd_fsm(&rule, dot),
    };
    ExitCode::from(code)
}

fn print_diags(diags: &[Diagnostic]) {
    let mut err = std::io::stderr().lock();
    for d in diags {
        let _ = writeln!(err, "{d}");
    }
}

fn fail(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    FAILURE
}

/// Parses a .conf file; the file sources of its configs are rooted at the
/// file's directory.
fn read_configs(path: &Path) -> Result<(Vec<BuildConfig>, PathBuf), u8> {
    let file = SourceFile::read(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
    match parse_config(&file) {
        Ok(configs) => Ok((configs, root)),
        Err(diags) => {
            print_diags(&diags);
            Err(FINDINGS)
        }
    }
}

fn cmd_build(path: &Path, dry_run: bool, json: bool) -> u8 {
    let (configs, root) = match read_configs(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let fs = OsFs::new(&root);
    let mut code = OK;
    let mut reports = Vec::new();
    for config in &configs {
        let out_dir = root.join(&config.out);
        let result = match build(config, &fs) {
            Ok(r) => r,
            Err(diags) => {
                print_diags(&diags);
                code = FINDINGS;
                reports.push(json!({ "name": config.name, "out": config.out, "files": [], "diagnostics": diags }));
                continue;
            }
        };
        print_diags(&result.diagnostics);
        if result.has_errors() {
            code = FINDINGS;
        }
        let files: Vec<String> = if dry_run {
            match rendered_files(&result) {
                Ok(files) => files.into_iter().map(|(name, _)| Path::new(&config.out).join(name).display().to_string()).collect(),
                Err(e) => return fail(e),
            }
        } else {
            match emit(&result, &out_dir) {
                Ok(paths) => paths.iter().map(|p| p.strip_prefix(&root).unwrap_or(p).display().to_string()).collect(),
                Err(e) => return fail(e),
            }
        };
        if !json {
            if dry_run {
                for f in &files {
                    println!("{f}");
                }
            }
            let verb = if dry_run { "would write" } else { "wrote" };
            eprintln!("{}: {verb} {} rule(s) to {}", config.name, files.len(), out_dir.display());
        }
        reports.push(json!({
            "name": config.name,
            "out": config.out,
            "files": files,
            "stats": result.stats,
            "diagnostics": result.diagnostics,
        }));
    }
    if json {
        println!("{}", json!({ "dry_run": dry_run, "configs": reports }));
    }
    code
}

fn expand_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>, u8> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let fs = OsFs::new(p);
            let mut files = fs.list_files(Path::new("")).map_err(|e| fail(format!("{}: {e}", p.display())))?;
            files.retain(|f| Language::from_path(f).is_some());
            out.extend(files.into_iter().map(|f| p.join(f)));
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            return Err(fail(format!("{}: no such file or directory", p.display())));
        }
    }
    Ok(out)
}

fn cmd_validate(paths: &[PathBuf]) -> u8 {
    let files = match expand_paths(paths) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let mut all = Vec::new();
    for path in &files {
        let file = match SourceFile::read(path) {
            Ok(f) => f,
            Err(e) => return fail(format!("{}: {e}", path.display())),
        };
        let diags = match file.language {
            Some(Language::CrySL) => parse_crysl(&file).map(|s| validate_spec(&s)),
            Some(Language::AbstractCrySL) => parse_abstract(&file).map(|s| validate_abstract(&s)),
            Some(Language::Refinement) => parse_refinement(&file).map(|_| Vec::new()),
            Some(Language::Config) => parse_config(&file).map(|_| Vec::new()),
            None => return fail(format!("{}: unknown file type", path.display())),
        };
        all.extend(diags.unwrap_or_else(|d| d));
    }
    print_diags(&all);
    let errors = all.iter().filter(|d| d.is_error()).count();
    eprintln!("{} file(s) checked: {errors} error(s), {} warning(s)", files.len(), all.len() - errors);
    if errors > 0 {
        FINDINGS
    } else {
        OK
    }
}

fn cmd_check(rules: &Path, trace: &Path, format: Format) -> u8 {
    let rule_set = match RuleSet::from_dir(rules) {
        Ok(r) => r,
        Err(diags) => {
            print_diags(&diags);
            return FAILURE;
        }
    };
    let text = match std::fs::read_to_string(trace) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", trace.display())),
    };
    let (events, diags) = parse_trace(&trace.display().to_string(), &text);
    print_diags(&diags);
    let result = check_trace(&rule_set, &events);
    for w in &result.warnings {
        eprintln!("warning: seq {} ({}): {}", w.seq, w.object_id, w.message);
    }
    let format = match format {
        Format::Json => ReportFormat::Json,
        Format::Table => ReportFormat::Table,
    };
    print!("{}", report(&result.violations, format));
    if result.violations.is_empty() && !has_errors(&diags) {
        OK
    } else {
        FINDINGS
    }
}

fn cmd_metrics(meta: &Path, conf_paths: &[PathBuf], json: bool, csv: bool) -> u8 {
    let mut configs = Vec::new();
    for p in conf_paths {
        match read_configs(p) {
            Ok((cs, root)) => configs.extend(cs.into_iter().map(|c| (c, root.clone()))),
            Err(code) => return code,
        }
    }
    let exclude: Vec<PathBuf> = configs.iter().map(|(c, root)| root.join(&c.out)).collect();
    let files = match meta_files(meta, &exclude) {
        Ok(f) => f,
        Err(e) => return fail(format!("{}: {e}", meta.display())),
    };
    let sources: Vec<OsFs> = configs.iter().map(|(_, root)| OsFs::new(root)).collect();
    let inputs: Vec<(BuildConfig, &dyn FileSource)> =
        configs.iter().zip(&sources).map(|((c, _), fs)| (c.clone(), fs as &dyn FileSource)).collect();
    let report = match savings(&files, &inputs) {
        Ok(r) => r,
        Err(diags) => {
            print_diags(&diags);
            return FINDINGS;
        }
    };
    if json {
        print!("{}", report.to_json());
    } else if csv {
        print!("{}", report.to_csv());
    } else {
        print!("{}", report.to_text());
    }
    OK
}

fn cmd_fsm(path: &Path, dot: bool) -> u8 {
    let file = match SourceFile::read(path) {
        Ok(f) => f,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let parsed = match file.language {
        Some(Language::CrySL) => parse_crysl(&file),
        Some(Language::AbstractCrySL) => parse_abstract(&file).map(|a| a.spec),
        _ => return fail(format!("{}: expected a .crysl or .mcsl file", path.display())),
    };
    let spec = match parsed {
        Ok(s) => s,
        Err(diags) => {
            print_diags(&diags);
            return FINDINGS;
        }
    };
    let automaton = compile_order(&spec.order, &spec.aggregates);
    if dot {
        print!("{}", to_dot(&automaton));
    } else {
        println!("{}: {} state(s), alphabet {{{}}}", spec.class_name, automaton.num_states(), automaton.alphabet().join(", "));
        for s in 0..automaton.num_states() {
            let mark = if automaton.is_accepting(s) { " (accepting)" } else { "" };
            println!("state {s}{mark}");
            for (_, label, to) in automaton.transitions().filter(|(from, _, _)| *from == s) {
                println!("  {label} -> {to}");
            }
        }
    }
    OK
}
