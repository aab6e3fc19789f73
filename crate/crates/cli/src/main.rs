mod cases;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fcpc_core::bounds::{join_bounds, partition_bounds, partition_gains, support_bounds, weight_bounds};
use fcpc_core::codec::{
    construction_locally_bounded, decode, optimal_redundancy, parse_word, verify_encoding, word_json, Encoding,
    OptimizeOptions, Strategy,
};
use fcpc_core::contraction::{coset_contraction, verify_contraction, weight_contraction, Contraction, VerifyOptions};
use fcpc_core::dcode::{min_dcode, SearchOptions, SearchStatus, MAX_LENGTH};
use fcpc_core::metrics::{pdm, pdrm_full, pdrm_grouped, pdrm_partition, DistanceMatrix};
use fcpc_core::partitions::{function_class_size, join_grouped, Partition, Subspace};
use fcpc_core::pgraph::{find_full_clique, is_locally_bounded, is_locally_bounded_grouped, Clique, CliqueOutcome, CliqueSearchConfig, PartitionGraph};
use fcpc_core::word::set_explicit_cap;
use fcpc_core::{Error, Field, Word};

const EXIT_DOMAIN: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "fcpc", version, about = "Function-correcting partition codes: partitions, distance matrices, D-codes and encoders")]
struct Cli {
    /// Node budget for searches (shared across cases for `example --all`).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled verification.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

/// A partition from a file or from flags.
#[derive(Args, Clone, Default)]
struct PartitionArgs {
    /// Partition JSON file.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Partition kind when building from flags: weight, support, hwdf, coordinate.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    /// Interval width for hwdf.
    #[arg(long)]
    width: Option<usize>,
    /// 1-based coordinates for the coordinate kind.
    #[arg(long, value_delimiter = ',')]
    coords: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a partition, or count its function class.
    Partition {
        #[command(flatten)]
        p: PartitionArgs,
        /// Materialize grouped partitions.
        #[arg(long)]
        explicit: bool,
        /// Codomain size H; prints the number of functions inducing the partition.
        #[arg(long)]
        classes: Option<u64>,
    },
    /// Coarsest common refinement of two partitions.
    Join {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Distance requirement matrix over chosen vectors.
    Pdrm {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        t: u32,
        /// JSON array of words; defaults to weight representatives (grouped) or every word.
        #[arg(long)]
        vectors: Option<PathBuf>,
        /// Clique JSON whose vertices are used as the vectors.
        #[arg(long)]
        clique: Option<PathBuf>,
    },
    /// Block-distance requirement matrix.
    Pdm {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        t: u32,
    },
    /// Least full-size clique of the partition graph.
    Clique {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long, default_value_t = 16)]
        max_blocks: usize,
    },
    /// Check a block-preserving contraction.
    Contraction {
        #[command(flatten)]
        p: PartitionArgs,
        /// Contraction JSON file.
        #[arg(long)]
        contraction: Option<PathBuf>,
        /// Use the weight contraction.
        #[arg(long)]
        weight: bool,
        /// Mask off the coordinates outside these (1-based), for coset partitions.
        #[arg(long, value_delimiter = ',')]
        keep: Vec<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Shortest code meeting a distance matrix.
    Dcode {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = MAX_LENGTH)]
        r_max: usize,
    },
    /// Redundancy bounds.
    Bounds {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        t: u32,
        /// Closed-form family: weight, support or join (default: the given partition).
        #[arg(long)]
        family: Option<String>,
        /// Individual optimal redundancies, for the join family.
        #[arg(long, value_delimiter = ',')]
        rs: Vec<usize>,
        /// Known N(q^k, 2t+1), for the join family.
        #[arg(long)]
        n_full: Option<usize>,
    },
    /// Redundancy and rate gains of one encoding over separate ones.
    Gains {
        #[arg(long, value_delimiter = ',', required = true)]
        rs: Vec<usize>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
    },
    /// Synthesize an encoding of least redundancy.
    Encode {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Candidate contraction JSON.
        #[arg(long)]
        contraction: Option<PathBuf>,
        /// Use the fixed 2t construction for locally (2t,2)-bounded partitions.
        #[arg(long)]
        locally_bounded: bool,
        /// Also encode this message.
        #[arg(long)]
        message: Option<String>,
    },
    /// Check an encoding against a partition.
    Verify {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        encoding: PathBuf,
    },
    /// Nearest-codeword decoding to a message and its block.
    Decode {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Whether every radius-rho ball meets at most lambda blocks.
    LocallyBounded {
        #[command(flatten)]
        p: PartitionArgs,
        #[arg(long)]
        rho: usize,
        #[arg(long, default_value_t = 2)]
        lambda: usize,
    },
    /// Re-derive worked cases and compare with the shipped goldens.
    Example {
        /// Case id; omit with --all.
        id: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        list: bool,
        /// Directory of golden files overriding the built-in ones.
        #[arg(long)]
        goldens: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Clique,
    Contraction,
    Full,
}

enum Failure {
    Usage(String),
    Domain(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::SearchBudgetExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

type Out = Result<(String, u8), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

fn ok(v: Value) -> Out {
    Ok((pretty(&v), 0))
}

impl PartitionArgs {
    fn load(&self) -> Result<Partition, Failure> {
        let v = match (&self.partition, &self.kind) {
            (Some(path), None) => read_json(path)?,
            (None, Some(kind)) => {
                let (q, k) = match (self.q, self.k) {
                    (Some(q), Some(k)) => (q, k),
                    _ => return Err(Failure::Usage("--kind needs --q and --k".into())),
                };
                let mut v = json!({"q": q, "k": k, "kind": kind});
                if let Some(w) = self.width {
                    v["T"] = json!(w);
                }
                if !self.coords.is_empty() {
                    v["J"] = json!(self.coords);
                }
                v
            }
            (Some(_), Some(_)) => return Err(Failure::Usage("give either --partition or --kind, not both".into())),
            (None, None) => return Err(Failure::Usage("a partition is required (--partition FILE or --kind ...)".into())),
        };
        Ok(Partition::from_json(&v)?)
    }
}

fn matrix_out(d: &DistanceMatrix, format: Format) -> Out {
    match format {
        Format::Csv => Ok((d.to_csv(), 0)),
        _ => ok(d.to_json()),
    }
}

fn search_opts(budget: Option<u64>) -> SearchOptions {
    let mut o = SearchOptions::default();
    if let Some(b) = budget {
        o.budget = b;
    }
    o
}

fn load_encoding(path: &Path, p: Partition) -> Result<Encoding, Failure> {
    let v = read_json(path)?;
    // accepts the output of `encode` as well as a bare encoding
    let e = v.get("encoding").unwrap_or(&v);
    Ok(Encoding::from_json(e, p)?)
}

fn run(cli: Cli) -> Out {
    let Cli { budget, seed, format, command, .. } = cli;
    match command {
        Command::Partition { p, explicit, classes } => {
            let part = p.load()?;
            if let Some(h) = classes {
                let e = part.num_blocks() as u64;
                return ok(json!({
                    "blocks": e,
                    "codomain": h,
                    "function_class_size": function_class_size(h, e)?.to_string(),
                }));
            }
            let part = if explicit { Partition::Explicit(part.to_explicit()?) } else { part };
            ok(part.to_json())
        }
        Command::Join { a, b } => {
            let (pa, pb) = (Partition::from_json(&read_json(&a)?)?, Partition::from_json(&read_json(&b)?)?);
            let joined = match (&pa, &pb) {
                (Partition::Grouped { groups: ga, field: fa }, Partition::Grouped { groups: gb, field: fb }) if fa == fb => {
                    Partition::Grouped { groups: join_grouped(ga, gb)?, field: fa.clone() }
                }
                _ => Partition::Explicit(pa.to_explicit()?.join(&pb.to_explicit()?)?),
            };
            ok(joined.to_json())
        }
        Command::Pdm { p, t } => {
            let part = p.load()?;
            matrix_out(&pdm(&part.to_explicit()?, t), format)
        }
        Command::Pdrm { p, t, vectors, clique } => {
            let part = p.load()?;
            let q = part.field().q();
            let d = match (vectors, clique) {
                (Some(_), Some(_)) => return Err(Failure::Usage("give --vectors or --clique, not both".into())),
                (Some(path), None) => {
                    let v = read_json(&path)?;
                    let arr = v.as_array().ok_or_else(|| Failure::Domain("vectors file must hold a JSON array".into()))?;
                    let words = arr.iter().map(|x| parse_word(q, x)).collect::<Result<Vec<Word>, _>>()?;
                    pdrm_partition(&part, t, &words)?
                }
                (None, Some(path)) => pdrm_partition(&part, t, &Clique::from_json(q, &read_json(&path)?)?.vertices)?,
                (None, None) => match &part {
                    Partition::Grouped { groups, .. } => pdrm_grouped(groups, t),
                    Partition::Explicit(ep) => pdrm_full(ep, t),
                },
            };
            matrix_out(&d, format)
        }
        Command::Clique { p, max_blocks } => {
            let ep = p.load()?.to_explicit()?;
            if format == Format::Dot {
                return Ok((PartitionGraph::new(&ep).to_dot(), 0));
            }
            let mut cfg = CliqueSearchConfig { max_blocks, ..Default::default() };
            if let Some(b) = budget {
                cfg.node_budget = b;
            }
            match find_full_clique(&ep, &cfg)? {
                CliqueOutcome::Found(c) => {
                    let mut v = c.to_json();
                    v["found"] = json!(true);
                    ok(v)
                }
                CliqueOutcome::NotFound => ok(json!({"found": false, "size": 0, "vertices": []})),
            }
        }
        Command::Contraction { p, contraction, weight, keep, samples } => {
            let part = p.load()?;
            let ep = part.to_explicit()?;
            let c = match (contraction, weight, keep.is_empty()) {
                (Some(path), false, true) => Contraction::from_json(&read_json(&path)?)?,
                (None, true, true) => weight_contraction(ep.field(), ep.k()),
                (None, false, false) => {
                    if keep.iter().any(|&j| j == 0 || j > ep.k()) {
                        return Err(Failure::Usage("--keep entries must lie in 1..=k".into()));
                    }
                    let block0: Vec<Vec<u8>> = (0..ep.space().size())
                        .filter(|&r| ep.block_of(r) == ep.block_of(0))
                        .map(|r| ep.space().word(r).into_digits())
                        .collect();
                    let v = Subspace::from_generators(ep.field().clone(), ep.k(), &block0)?;
                    if v.coset_partition()? != ep {
                        return Err(Failure::Domain("--keep applies to coset partitions only".into()));
                    }
                    let coords: Vec<usize> = keep.iter().map(|j| j - 1).collect();
                    coset_contraction(&v, &coords)?.ok_or_else(|| {
                        Failure::Domain("the masked coordinates do not span a complement of the subspace".into())
                    })?
                }
                _ => return Err(Failure::Usage("give exactly one of --contraction, --weight, --keep".into())),
            };
            let opts = VerifyOptions { samples, seed, ..Default::default() };
            let verdict = verify_contraction(&ep, &c, &opts)?;
            let code = if verdict.valid { 0 } else { EXIT_DOMAIN };
            let mut v = serde_json::to_value(&verdict).unwrap();
            v["image_size"] = json!(c.image().len());
            v["blocks"] = json!(ep.num_blocks());
            v["contraction"] = c.to_json();
            Ok((pretty(&v), code))
        }
        Command::Dcode { matrix, q, r_max } => {
            let d = DistanceMatrix::from_json(&read_json(&matrix)?)?;
            let field = Field::new(q)?;
            let opts = SearchOptions { r_max, ..search_opts(budget) };
            let rep = min_dcode(&d, &field, &opts)?;
            let code = if rep.status == SearchStatus::BudgetExceeded { EXIT_BUDGET } else { 0 };
            Ok((pretty(&serde_json::to_value(&rep).unwrap()), code))
        }
        Command::Bounds { p, t, family, rs, n_full } => {
            let opts = search_opts(budget);
            let field = || -> Result<Field, Failure> { Ok(Field::new(p.q.unwrap_or(2))?) };
            let need_k = || p.k.ok_or_else(|| Failure::Usage("--k is required for this family".into()));
            let rep = match family.as_deref() {
                None => partition_bounds(&p.load()?.to_explicit()?, t, None, &opts)?,
                Some("weight") => weight_bounds(need_k()?, t, &field()?, &opts)?,
                Some("support") => support_bounds(need_k()?, t, &field()?, &opts)?,
                Some("join") => join_bounds(&rs, need_k()?, t, n_full)?,
                Some(other) => return Err(Failure::Usage(format!("unknown family {other}"))),
            };
            ok(serde_json::to_value(&rep).unwrap())
        }
        Command::Gains { rs, r, k } => ok(serde_json::to_value(partition_gains(&rs, r, k)?).unwrap()),
        Command::Encode { p, t, strategy, contraction, locally_bounded, message } => {
            let part = p.load()?;
            let (cert, enc) = if locally_bounded {
                (Value::Null, construction_locally_bounded(&part, t)?)
            } else {
                let user = contraction.map(|path| read_json(&path).and_then(|v| Ok(Contraction::from_json(&v)?))).transpose()?;
                let strategy = match strategy {
                    StrategyArg::Auto => Strategy::Auto,
                    StrategyArg::Clique => Strategy::CliqueOnly,
                    StrategyArg::Contraction => Strategy::ContractionOnly,
                    StrategyArg::Full => Strategy::FullPdrm,
                };
                let opts = OptimizeOptions {
                    search: search_opts(budget),
                    verify: VerifyOptions { seed, ..Default::default() },
                    ..Default::default()
                };
                let (cert, enc) = optimal_redundancy(&part, t, strategy, user.as_ref(), &opts)?;
                (serde_json::to_value(cert).unwrap(), enc)
            };
            let mut v = json!({"certificate": cert, "encoding": enc.to_json()});
            if let Some(m) = message {
                let q = part.field().q();
                let u = parse_word(q, &Value::String(m))?;
                v["message"] = word_json(q, &u);
                v["codeword"] = word_json(q, &enc.encode(&u)?);
            }
            ok(v)
        }
        Command::Verify { p, encoding } => {
            let part = p.load()?;
            let enc = load_encoding(&encoding, part.clone())?;
            let verdict = verify_encoding(&part, &enc)?;
            let code = if verdict.valid { 0 } else { EXIT_DOMAIN };
            Ok((pretty(&serde_json::to_value(verdict).unwrap()), code))
        }
        Command::Decode { p, encoding, word } => {
            let part = p.load()?;
            let enc = load_encoding(&encoding, part.clone())?;
            let y = parse_word(part.field().q(), &Value::String(word))?;
            ok(serde_json::to_value(decode(&enc, &y)?).unwrap())
        }
        Command::LocallyBounded { p, rho, lambda } => {
            let bounded = match p.load()? {
                Partition::Grouped { groups, .. } => is_locally_bounded_grouped(&groups, rho, lambda),
                Partition::Explicit(ep) => is_locally_bounded(&ep, rho, lambda),
            };
            ok(json!({"rho": rho, "lambda": lambda, "bounded": bounded}))
        }
        Command::Example { id, all, list, goldens } => {
            if list {
                return ok(json!(cases::ids()));
            }
            let ids: Vec<String> = match (id, all) {
                (Some(id), false) => vec![id],
                (None, true) => cases::ids().iter().map(|s| s.to_string()).collect(),
                _ => return Err(Failure::Usage("give a case id or --all".into())),
            };
            let (report, code) = cases::run(&ids, budget.unwrap_or(cases::DEFAULT_BUDGET), goldens.as_deref())?;
            Ok((pretty(&report), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Ok(cap) = std::env::var("FCPC_CAP") {
        match cap.trim().parse::<u64>() {
            Ok(c) if c > 0 => set_explicit_cap(c),
            _ => {
                eprintln!("error: FCPC_CAP must be a positive integer, got {cap:?}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: --threads must be a positive integer");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok((text, code)) => {
            println!("{text}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}
