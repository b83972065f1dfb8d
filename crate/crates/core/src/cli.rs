//! Command-line interface. Exit codes: 0 success, 1 validation, parse or
//! runtime failure, 2 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fixtures::{table1_corpus, table1_target_id, TABLE1};
use crate::harvest::{export, HarvestConfig, Harvester};
use crate::ingest::{load_corpus_with, parse_citations_partial, parse_papers_partial, ParseOptions};
use crate::metrics::{all_author_metrics, author_metrics, paper_score, round_half_up};
use crate::model::{corpus_validate, Corpus, RawCorpus, Violation};
use crate::report::{write_aligned, write_ranking, write_report, RankMetric, ReportFormat};
use crate::selfcite::{breakdown, incoming_classified, CitationClass};

#[derive(Debug, Parser)]
#[command(name = "uindex", version, about = "u-index and baseline citation metrics for a citation corpus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Papers file (JSON lines)
    #[arg(long)]
    pub papers: PathBuf,
    /// Citations file (CSV with header citing_id,cited_id)
    #[arg(long)]
    pub citations: PathBuf,
    /// Collect every parse error instead of stopping at the first
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full scorecards for every author (or the selected ones)
    Compute {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Author identity key, e.g. "id:0000-0002-1825-0097" or "name:keller/m"
        #[arg(long = "author")]
        authors: Vec<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every citation a paper receives
    Classify {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        paper: String,
    },
    /// Authors sorted by one metric
    Rank {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum)]
        metric: RankMetric,
    },
    /// Score the bundled six-paper reference fixture
    #[command(name = "demo-table1")]
    DemoTable1,
    /// Check corpus files; exit code 0 iff clean
    Validate {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Fetch an author's works and citing works into corpus files
    Harvest {
        #[arg(long)]
        base_url: String,
        #[arg(long)]
        author_id: String,
        #[arg(long, default_value_t = 100)]
        max_works: usize,
        #[arg(long)]
        out: PathBuf,
        /// Requests per second
        #[arg(long, default_value_t = 5.0)]
        rate_limit: f64,
        /// Defaults to <out>/cache
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Per-request timeout in seconds
        #[arg(long, default_value_t = 30)]
        timeout: u64,
    },
}

fn load(args: &CorpusArgs) -> Result<Corpus> {
    let loaded = load_corpus_with(
        &args.papers,
        &args.citations,
        ParseOptions {
            lenient: args.lenient,
        },
    )?;
    for w in &loaded.warnings {
        log::warn!("{w}");
    }
    Ok(loaded.corpus)
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes the reference table: row number, totals, I, S, N and u at one decimal.
pub fn demo_table1(sink: &mut impl Write) -> Result<()> {
    let corpus = table1_corpus()?;
    let mut rows = Vec::new();
    for index in 0..TABLE1.len() {
        let id = table1_target_id(index + 1);
        let b = breakdown(&corpus, &id)?;
        let n = corpus.paper(&id).expect("fixture paper").author_count();
        let u = paper_score(&corpus, &id)?.u;
        rows.push(vec![
            (index + 1).to_string(),
            b.total.to_string(),
            b.independent.to_string(),
            b.self_cites.to_string(),
            n.to_string(),
            format!("{:.1}", round_half_up(u, 1)),
        ]);
    }
    write_aligned(&["#", "Total Citations", "I", "S", "N", "u-Index"], &rows, sink)
}

fn classify(corpus: &Corpus, paper: &str, sink: &mut impl Write) -> Result<()> {
    let rows: Vec<Vec<String>> = incoming_classified(corpus, paper)?
        .into_iter()
        .map(|(citing, c)| {
            let matched = match c.matched {
                Some((a, b)) if c.class == CitationClass::SelfCitation => format!("{a} = {b}"),
                _ => String::new(),
            };
            vec![citing.to_string(), c.class.to_string(), matched]
        })
        .collect();
    write_aligned(&["citing_id", "class", "matched_authors"], &rows, sink)?;
    let b = breakdown(corpus, paper)?;
    writeln!(sink, "I={} S={} total={}", b.independent, b.self_cites, b.total)?;
    Ok(())
}

/// Returns whether the corpus was clean.
fn validate(args: &CorpusArgs, sink: &mut impl Write) -> Result<bool> {
    let papers_name = args.papers.display().to_string();
    let citations_name = args.citations.display().to_string();
    let papers_file = File::open(&args.papers).map_err(|e| Error::io(&args.papers, e))?;
    let citations_file = File::open(&args.citations).map_err(|e| Error::io(&args.citations, e))?;
    let (papers, mut errors) = parse_papers_partial(papers_file, &papers_name)?;
    let (citations, citation_errors) = parse_citations_partial(citations_file, &citations_name)?;
    errors.extend(citation_errors);
    let mut problems: Vec<String> = errors.iter().map(ToString::to_string).collect();

    for w in &citations.warnings {
        writeln!(sink, "warning: {w}")?;
    }
    let rows = citations.rows.clone();
    let raw = RawCorpus::new(papers, citations.edges);
    for v in corpus_validate(&raw) {
        problems.push(match &v {
            Violation::DanglingEndpoint { edge_index, .. } => {
                format!("{citations_name}:{}: {v}", rows[*edge_index])
            }
            _ => v.to_string(),
        });
    }
    for p in &problems {
        writeln!(sink, "error: {p}")?;
    }
    if problems.is_empty() {
        writeln!(sink, "ok")?;
    }
    Ok(problems.is_empty())
}

fn run_command(command: Command) -> Result<ExitCode> {
    match command {
        Command::Compute {
            corpus,
            authors,
            format,
            out,
        } => {
            let corpus = load(&corpus)?;
            let rows = if authors.is_empty() {
                all_author_metrics(&corpus)?
            } else {
                authors
                    .iter()
                    .map(|a| author_metrics(&corpus, a))
                    .collect::<Result<_>>()?
            };
            let mut sink = open_sink(out.as_deref())?;
            write_report(&rows, format, &mut sink)?;
        }
        Command::Classify { corpus, paper } => {
            let corpus = load(&corpus)?;
            classify(&corpus, &paper, &mut io::stdout().lock())?;
        }
        Command::Rank { corpus, metric } => {
            let corpus = load(&corpus)?;
            write_ranking(&all_author_metrics(&corpus)?, metric, &mut io::stdout().lock())?;
        }
        Command::DemoTable1 => demo_table1(&mut io::stdout().lock())?,
        Command::Validate { corpus } => {
            if !validate(&corpus, &mut io::stdout().lock())? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Harvest {
            base_url,
            author_id,
            max_works,
            out,
            rate_limit,
            cache_dir,
            timeout,
        } => {
            let mut cfg = HarvestConfig::new(base_url, author_id, cache_dir.unwrap_or_else(|| out.join("cache")));
            cfg.max_works = max_works;
            cfg.rate_limit = rate_limit;
            cfg.timeout = Duration::from_secs(timeout);
            let harvest = Harvester::new(cfg)?.run()?;
            let (papers, citations) = export(&harvest.corpus()?, &out)?;
            println!(
                "{} papers, {} citations ({} requests, {} cache hits)",
                harvest.papers.len(),
                harvest.edges.len(),
                harvest.stats.network_requests,
                harvest.stats.cache_hits
            );
            println!("{}", papers.display());
            println!("{}", citations.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run_command(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Multiple(all) = &e {
                for err in all.iter().skip(1) {
                    eprintln!("error: {err}");
                }
            }
            ExitCode::from(1)
        }
    }
}
