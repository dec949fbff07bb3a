use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adams_chart::chartir;
use adams_chart::extract::extract_document;
use adams_chart::model::{chart_key, materialize_towers, ChartPage, DEFAULT_F_CAP, MAX_STEM};
use adams_chart::pages::{
    check_chain, default_compare_stems, turn_pages, DiscrepancyReport, Window,
};
use adams_chart::stats::chart_stats;
use adams_chart::svg::{render, StyleProfile};
use adams_chart::validate::{
    ctau_check, leibniz_audit, leibniz_findings, report, validate_structure,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Extract, check, turn and draw the Adams charts of a source document.
///
/// Exit status: 0 clean, 1 findings or discrepancies, 2 bad input.
#[derive(Parser)]
#[command(name = "adams-chart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Inputs {
    /// chartir files, or directories holding them.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Only charts with this tag (e.g. E3-mot); repeatable.
    #[arg(long)]
    chart: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write one chartir file per chart block of the source document.
    Extract {
        source: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        chart: Vec<String>,
    },
    /// Check legend laws and the Leibniz rule.
    Validate {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the next page from the chart's differentials.
    Turn {
        input: PathBuf,
        /// Differential pages to apply in order, e.g. 2 or 4,5.
        #[arg(long, value_delimiter = ',', required = true)]
        page: Vec<u8>,
        /// Largest stem taken to be complete in the input.
        #[arg(long)]
        window: Option<i32>,
        #[arg(long)]
        include_uncertain: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Turn pages and compare with the published next chart.
    Diff {
        source: PathBuf,
        published: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        page: Vec<u8>,
        /// Largest stem compared; defaults to both charts' class windows.
        #[arg(long)]
        window: Option<i32>,
        /// Also report the outcome with uncertain differentials included.
        #[arg(long)]
        include_uncertain: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Draw a chart as SVG.
    Render {
        input: PathBuf,
        /// Only stems up to this one.
        #[arg(long)]
        window: Option<i32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Counts by bidegree, τ-order and edge species.
    Stats {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
    },
    /// Check cofiber-of-τ class counts against the sphere's E2 page.
    Ctau {
        sphere: PathBuf,
        ctau: PathBuf,
        #[arg(long, default_value_t = 59)]
        window: i32,
        #[command(flatten)]
        output: Output,
    },
}

type Outcome = Result<ExitCode, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes through a temporary sibling so readers never see a partial file.
fn write_atomic(path: &Path, text: &str) -> Result<(), String> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).map_err(|e| format!("{}: {e}", tmp.display()))?;
    fs::rename(&tmp, path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(output: &Output, text: &str) -> Result<(), String> {
    match &output.out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_selectors(tags: &[String]) -> Result<(), String> {
    match tags.iter().find(|t| chart_key(t).is_none()) {
        Some(t) => Err(format!("unknown chart '{t}'")),
        None => Ok(()),
    }
}

fn load(path: &Path) -> Result<ChartPage, String> {
    chartir::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_inputs(inputs: &Inputs) -> Result<Vec<(PathBuf, ChartPage)>, String> {
    check_selectors(&inputs.chart)?;
    let mut paths = Vec::new();
    for p in &inputs.inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| format!("{}: {e}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|x| x == "chartir"))
                .collect();
            found.sort();
            paths.extend(found);
        } else {
            paths.push(p.clone());
        }
    }
    let mut out = Vec::new();
    for p in paths {
        let chart = load(&p)?;
        if inputs.chart.is_empty() || inputs.chart.iter().any(|t| t == chart.tag()) {
            out.push((p, chart));
        }
    }
    Ok(out)
}

fn status(clean: bool) -> ExitCode {
    if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_extract(source: &Path, out: &Path, chart: &[String]) -> Outcome {
    check_selectors(chart)?;
    let doc = read(source)?;
    let charts = extract_document(&doc).map_err(|e| format!("{}: {e}", source.display()))?;
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    for c in charts
        .iter()
        .filter(|c| chart.is_empty() || chart.contains(&c.tag))
    {
        write_atomic(
            &out.join(format!("{}.chartir", c.tag)),
            &chartir::serialize(&c.chart),
        )?;
        let p = &c.chart;
        println!(
            "{} classes={} struct={} diff={} arrows={} ext={} towers={} notes={}",
            c.tag,
            p.classes.len(),
            p.struct_edges.len(),
            p.diff_edges.len(),
            p.diff_arrows.len(),
            p.extension_edges.len(),
            p.towers.len(),
            c.notes.len()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(inputs: &Inputs, output: &Output) -> Outcome {
    let mut findings = Vec::new();
    for (_, chart) in load_inputs(inputs)? {
        findings.extend(validate_structure(&chart));
        findings.extend(leibniz_findings(&chart, &leibniz_audit(&chart)));
    }
    emit(output, &report(&findings, output.format == Format::Records))?;
    Ok(status(!findings.iter().any(|f| f.is_error())))
}

fn cmd_turn(
    input: &Path,
    pages: &[u8],
    window: Option<i32>,
    include_uncertain: bool,
    output: &Output,
) -> Outcome {
    let chart = load(input)?;
    let chart = materialize_towers(&chart, DEFAULT_F_CAP).map_err(|e| e.to_string())?;
    let window = Window::new(window.unwrap_or(MAX_STEM), DEFAULT_F_CAP);
    let computed =
        turn_pages(&chart, pages, window, include_uncertain).map_err(|e| e.to_string())?;
    emit(output, &computed.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_diff(
    source: &Path,
    published: &Path,
    pages: &[u8],
    window: Option<i32>,
    include_uncertain: bool,
    output: &Output,
) -> Outcome {
    let (src, dst) = (load(source)?, load(published)?);
    let stems = window.unwrap_or_else(|| default_compare_stems(&src, &dst));
    let run = |uncertain: bool| -> Result<DiscrepancyReport, String> {
        check_chain(&src, pages, &dst, stems, uncertain)
            .map(|(_, r)| r)
            .map_err(|e| e.to_string())
    };
    let main = run(false)?;
    let mut text = String::new();
    if include_uncertain {
        let with = run(true)?;
        let _ = writeln!(text, "# uncertain differentials excluded");
        text.push_str(&main.to_text());
        let _ = writeln!(text, "# uncertain differentials included");
        text.push_str(&with.to_text());
    } else {
        text = main.to_text();
    }
    emit(output, &text)?;
    Ok(status(main.is_empty()))
}

fn cmd_render(input: &Path, window: Option<i32>, out: &Path) -> Outcome {
    let mut chart = load(input)?;
    if let Some(w) = window {
        chart = chart.excerpt(w);
    }
    let svg = render(&chart, &StyleProfile::default()).map_err(|e| e.to_string())?;
    write_atomic(out, &svg)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(inputs: &Inputs, output: &Output) -> Outcome {
    let text: String = load_inputs(inputs)?
        .iter()
        .map(|(_, c)| chart_stats(c).to_text())
        .collect();
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_ctau(sphere: &Path, ctau: &Path, window: i32, output: &Output) -> Outcome {
    let load_mat = |p: &Path| -> Result<ChartPage, String> {
        materialize_towers(&load(p)?, DEFAULT_F_CAP).map_err(|e| format!("{}: {e}", p.display()))
    };
    let (s, c) = (load_mat(sphere)?, load_mat(ctau)?);
    let counts =
        ctau_check(&s, &c, Window::new(window, DEFAULT_F_CAP)).map_err(|e| e.to_string())?;
    let mut text = format!(
        "shift {},{} checked {} findings {}\n",
        counts.shift.0,
        counts.shift.1,
        counts.checked,
        counts.findings.len()
    );
    text.push_str(&report(&counts.findings, output.format == Format::Records));
    emit(output, &text)?;
    Ok(status(counts.findings.is_empty()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Extract { source, out, chart } => cmd_extract(source, out, chart),
        Command::Validate { inputs, output } => cmd_validate(inputs, output),
        Command::Turn {
            input,
            page,
            window,
            include_uncertain,
            output,
        } => cmd_turn(input, page, *window, *include_uncertain, output),
        Command::Diff {
            source,
            published,
            page,
            window,
            include_uncertain,
            output,
        } => cmd_diff(source, published, page, *window, *include_uncertain, output),
        Command::Render { input, window, out } => cmd_render(input, *window, out),
        Command::Stats { inputs, output } => cmd_stats(inputs, output),
        Command::Ctau {
            sphere,
            ctau,
            window,
            output,
        } => cmd_ctau(sphere, ctau, *window, output),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
