//! `tga`: build tree graph automata, emit their Schreier multigraphs, and
//! compute/verify their exact invariants.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid tree input, 3 size guard,
//! 4 verification mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num::traits::ToPrimitive;
use num::{BigInt, BigRational};
use serde_json::{json, Value};

use tga_core::formulas::{self, FactoredTutte, PowerProduct, Variant};
use tga_core::mealy::MealyAutomaton;
use tga_core::oracle;
use tga_core::schreier::{SchreierMultigraph, DEFAULT_VERTEX_CAP};
use tga_core::tree::OrientedTree;
use tga_core::verify::{self, VerifyConfig};
use tga_core::{FormulaError, SchreierError};

/// Environment variable overriding the graph-build vertex cap.
const VERTEX_CAP_ENV: &str = "TGA_MAX_VERTICES";
/// Largest graph the distance-based oracles run on from `indices`.
const ORACLE_VERTEX_CAP: u64 = 4096;

#[derive(Parser)]
#[command(
    name = "tga",
    version,
    about = "Tree graph automata: Schreier multigraphs and their exact invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AutomatonFormat {
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Formula,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Published,
    Corrected,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Published => Variant::Published,
            VariantArg::Corrected => Variant::Corrected,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit the level-n Schreier multigraph of a seed tree
    Graph {
        /// Tree file: one "u v" edge per line, '#' comments
        #[arg(long)]
        tree: PathBuf,
        /// Level (word length)
        #[arg(short)]
        n: u32,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Emit the Moore diagram of the tree's automaton
    Automaton {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = AutomatonFormat::Dot)]
        format: AutomatonFormat,
    },
    /// Compute every index of the level-n graph (JSON on stdout)
    Indices {
        #[arg(long)]
        tree: PathBuf,
        #[arg(short)]
        n: u32,
        /// Closed forms, brute force on the explicit graph, or both
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Which reading of the closed forms drives the result
        #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
        variant: VariantArg,
    },
    /// Emit the factored Tutte polynomial, optionally evaluated at a point
    Tutte {
        #[arg(long)]
        tree: PathBuf,
        #[arg(short)]
        n: u32,
        /// Evaluate at x y (exact rationals like 2 or -1/3)
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
        eval: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
        variant: VariantArg,
    },
    /// Run the formula-versus-oracle verification suite
    Verify {
        /// Directory of *.txt tree files; the built-in corpus when absent
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Largest graph materialized for oracle checks
        #[arg(long, default_value_t = 4096)]
        max_vertices: u64,
        /// Machine-readable report instead of text
        #[arg(long)]
        json: bool,
    },
}

enum CliError {
    Tree(String),
    SizeGuard(String),
    VerifyMismatch,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Tree(_) => 2,
            CliError::SizeGuard(_) => 3,
            CliError::VerifyMismatch => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version are not errors
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Tree(msg) => eprintln!("error: {msg}"),
                CliError::SizeGuard(msg) => eprintln!("error: {msg}"),
                CliError::VerifyMismatch => eprintln!("error: verification found mismatches"),
            }
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Graph { tree, n, format } => {
            let tree = load_tree(&tree)?;
            let graph = build_graph(&tree, n)?;
            match format {
                GraphFormat::Dot => print!("{}", graph.to_dot()),
                GraphFormat::Json => println!("{}", graph.to_json()),
            }
            Ok(())
        }
        Command::Automaton { tree, format: _ } => {
            let tree = load_tree(&tree)?;
            print!("{}", MealyAutomaton::from_tree(&tree).moore_dot());
            Ok(())
        }
        Command::Indices {
            tree,
            n,
            mode,
            variant,
        } => {
            let tree = load_tree(&tree)?;
            let report = indices_report(&tree, n, mode, variant.into())?;
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
            Ok(())
        }
        Command::Tutte {
            tree,
            n,
            eval,
            variant,
        } => {
            let tree = load_tree(&tree)?;
            let report = tutte_report(&tree, n, eval, variant.into())?;
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
            Ok(())
        }
        Command::Verify {
            corpus,
            max_vertices,
            json,
        } => {
            let corpus = match corpus {
                Some(dir) => load_corpus(&dir)?,
                None => verify::default_corpus(),
            };
            let config = VerifyConfig {
                max_vertices,
                ..VerifyConfig::default()
            };
            let report = verify::run_all(&corpus, &config);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("valid json")
                );
            } else {
                print!("{}", report.render_text());
            }
            if report.is_success() {
                Ok(())
            } else {
                Err(CliError::VerifyMismatch)
            }
        }
    }
}

fn load_tree(path: &Path) -> Result<OrientedTree, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Tree(format!("{}: {e}", path.display())))?;
    OrientedTree::parse(&text).map_err(|e| CliError::Tree(format!("{}: {e}", path.display())))
}

fn load_corpus(dir: &Path) -> Result<Vec<(String, OrientedTree)>, CliError> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Tree(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(CliError::Tree(format!(
            "{}: no .txt tree files",
            dir.display()
        )));
    }
    entries
        .into_iter()
        .map(|path| {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            load_tree(&path).map(|tree| (name, tree))
        })
        .collect()
}

fn vertex_cap() -> u64 {
    std::env::var(VERTEX_CAP_ENV)
        .ok()
        .and_then(|raw| raw.parse().ok())
        .unwrap_or(DEFAULT_VERTEX_CAP)
}

fn build_graph(tree: &OrientedTree, n: u32) -> Result<SchreierMultigraph, CliError> {
    SchreierMultigraph::build_with_cap(&MealyAutomaton::from_tree(tree), n, vertex_cap()).map_err(
        |err| match err {
            SchreierError::LevelTooLarge { .. } => CliError::SizeGuard(err.to_string()),
            other => CliError::Tree(other.to_string()),
        },
    )
}

// ---------------------------------------------------------------------------
// indices
// ---------------------------------------------------------------------------

/// Big integers that fit a JSON number stay numbers; anything wider becomes
/// a decimal string.
fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

fn power_product_json(p: &PowerProduct) -> Value {
    let value = p
        .expand(formulas::DEFAULT_BIT_BUDGET)
        .ok()
        .map(|v| big_json(&v))
        .unwrap_or(Value::Null);
    json!({ "expr": p.to_string(), "value": value })
}

fn factored_json(f: &FactoredTutte) -> Value {
    json!({
        "loop_exp": big_json(&f.loop_exp),
        "factors": f.factors.iter()
            .map(|(m, mult)| json!([m, big_json(mult)]))
            .collect::<Vec<_>>(),
    })
}

struct Entry {
    formula: Value,
    alt: Option<(&'static str, Value)>,
    oracle: Option<Value>,
    skip: Option<String>,
    agree: Option<bool>,
}

impl Entry {
    fn json(self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("formula".into(), self.formula);
        if let Some((name, value)) = self.alt {
            obj.insert(name.into(), value);
        }
        obj.insert("oracle".into(), self.oracle.unwrap_or(Value::Null));
        if let Some(reason) = self.skip {
            obj.insert("skipped".into(), json!(reason));
        }
        obj.insert(
            "agree".into(),
            self.agree.map(Value::Bool).unwrap_or(Value::Null),
        );
        Value::Object(obj)
    }
}

fn indices_report(
    tree: &OrientedTree,
    n: u32,
    mode: Mode,
    variant: Variant,
) -> Result<Value, CliError> {
    let k = tree.k() as u64;
    let needed = (k as u128).pow(n);
    let want_oracle = mode != Mode::Formula;
    let want_formula = mode != Mode::Oracle;

    // one graph build shared by every oracle below
    let graph = if want_oracle && needed <= ORACLE_VERTEX_CAP as u128 {
        Some(build_graph(tree, n)?)
    } else {
        None
    };
    let size_skip = || -> Option<String> {
        if !want_oracle {
            Some("mode=formula".into())
        } else if graph.is_none() {
            Some(format!("size guard: k^n = {needed} > {ORACLE_VERTEX_CAP}"))
        } else {
            None
        }
    };

    let entry = |formula: Option<Value>,
                 alt: Option<(&'static str, Value)>,
                 oracle: Option<Value>,
                 skip: Option<String>| {
        let agree = match (&formula, &oracle) {
            (Some(f), Some(o)) if want_formula => Some(f == o),
            _ => None,
        };
        Entry {
            formula: formula.unwrap_or(Value::Null),
            alt,
            oracle,
            skip,
            agree,
        }
        .json()
    };

    // diameter
    let diameter = entry(
        want_formula.then(|| json!(formulas::diameter_formula(tree.diameter() as u64, n))),
        None,
        graph.as_ref().map(|g| json!(oracle::diameter_oracle(g))),
        size_skip(),
    );

    // wiener / szeged
    let wiener = entry(
        want_formula
            .then(|| big_json(&formulas::wiener_formula(k, n, tree.wiener()).expect("integral"))),
        None,
        graph.as_ref().map(|g| big_json(&oracle::wiener_oracle(g))),
        size_skip(),
    );
    let szeged = entry(
        want_formula
            .then(|| big_json(&formulas::szeged_formula(k, n, tree.szeged()).expect("integral"))),
        None,
        graph.as_ref().map(|g| big_json(&oracle::szeged_oracle(g))),
        size_skip(),
    );

    // perfect matchings: tighter oracle guard
    let pm_graph = graph.as_ref().filter(|g| g.num_vertices() <= 64);
    let pm_formula = formulas::pm_count_formula(tree, n);
    let pm_count = {
        let oracle_value = pm_graph.map(|g| {
            big_json(&oracle::pm_oracle(g).expect("guarded").count)
        });
        let formula_value = want_formula.then(|| power_product_json(&pm_formula));
        let agree = match (&formula_value, &oracle_value) {
            (Some(f), Some(o)) => Some(&f["value"] == o),
            _ => None,
        };
        Entry {
            formula: formula_value.unwrap_or(Value::Null),
            alt: None,
            oracle: oracle_value,
            skip: if pm_graph.is_none() {
                Some(if want_oracle {
                    format!("size guard: k^n = {needed} > 64")
                } else {
                    "mode=formula".into()
                })
            } else {
                None
            },
            agree,
        }
        .json()
    };

    // spanning trees: formula may be non-integral in the published reading
    let trees_formula = formulas::spanning_trees_formula(k, n, variant);
    let trees_alt = formulas::spanning_trees_formula(k, n, other_variant(variant));
    let spanning_trees = {
        let det_graph = graph.as_ref().filter(|g| g.num_vertices() <= 512);
        let oracle_value = det_graph.map(|g| {
            big_json(&oracle::spanning_trees_oracle(g).expect("guarded"))
        });
        let formula_value = match &trees_formula {
            Ok(p) => want_formula.then(|| power_product_json(p)),
            Err(err) => want_formula.then(|| json!({ "error": err.to_string() })),
        };
        let agree = match (&formula_value, &oracle_value) {
            (Some(f), Some(o)) => Some(&f["value"] == o),
            _ => None,
        };
        Entry {
            formula: formula_value.unwrap_or(Value::Null),
            alt: Some((
                alt_name(variant),
                match &trees_alt {
                    Ok(p) => power_product_json(p),
                    Err(err) => json!({ "error": err.to_string() }),
                },
            )),
            oracle: oracle_value,
            skip: if det_graph.is_none() {
                Some(if want_oracle {
                    format!("size guard: k^n = {needed} > 512")
                } else {
                    "mode=formula".into()
                })
            } else {
                None
            },
            agree,
        }
        .json()
    };

    // spanning forests: oracle side is the block factorization at (2, 1)
    let forests_formula =
        formulas::spanning_forests_formula(k, n, variant, formulas::DEFAULT_BIT_BUDGET);
    let spanning_forests = entry(
        want_formula.then(|| match &forests_formula {
            Ok(v) => big_json(v),
            Err(err) => json!({ "error": err.to_string() }),
        }),
        Some((
            alt_name(variant),
            match formulas::spanning_forests_formula(
                k,
                n,
                other_variant(variant),
                formulas::DEFAULT_BIT_BUDGET,
            ) {
                Ok(v) => big_json(&v),
                Err(err) => json!({ "error": err.to_string() }),
            },
        )),
        graph.as_ref().map(|g| {
            let block = oracle::tutte_block_oracle(g).expect("cactus");
            let two = BigRational::from_integer(BigInt::from(2));
            let one = BigRational::from_integer(BigInt::from(1));
            let value = block
                .evaluate(&two, &one, formulas::DEFAULT_BIT_BUDGET)
                .expect("guarded");
            big_json(&value.to_integer())
        }),
        size_skip(),
    );

    // cycle census: the formula is generator-independent
    let census_formula: Vec<Value> = (0..=n)
        .map(|i| json!([i, big_json(&formulas::cycle_count_formula(k, n, i))]))
        .collect();
    let census_oracle = graph.as_ref().map(|g| {
        let census = g.cycle_census().expect("built graph");
        Value::Array(
            census
                .iter()
                .map(|(&(label, i), &count)| json!([label + 1, i, count]))
                .collect(),
        )
    });
    let census_agree = graph.as_ref().map(|g| {
        g.cycle_census()
            .expect("built graph")
            .iter()
            .all(|(&(_, i), &count)| {
                BigInt::from(count) == formulas::cycle_count_formula(k, n, i)
            })
    });
    let cycle_census = Entry {
        formula: if want_formula {
            json!(census_formula)
        } else {
            Value::Null
        },
        alt: None,
        oracle: census_oracle,
        skip: size_skip(),
        agree: if want_formula { census_agree } else { None },
    }
    .json();

    // factored Tutte polynomial vs the block structure
    let tutte_formula = formulas::tutte_factored(k, n, variant)
        .map_err(|err| CliError::SizeGuard(err.to_string()))?;
    let tutte_alt = formulas::tutte_factored(k, n, other_variant(variant))
        .map_err(|err| CliError::SizeGuard(err.to_string()))?;
    let tutte_block = graph.as_ref().map(|g| oracle::tutte_block_oracle(g).expect("cactus"));
    let tutte_factored = Entry {
        formula: if want_formula {
            factored_json(&tutte_formula)
        } else {
            Value::Null
        },
        alt: Some((alt_name(variant), factored_json(&tutte_alt))),
        oracle: tutte_block.as_ref().map(factored_json),
        skip: size_skip(),
        agree: match (&tutte_block, want_formula) {
            (Some(block), true) => Some(*block == tutte_formula),
            _ => None,
        },
    }
    .json();

    // the published asymptotic constant has no finite oracle
    let asymptotic_ratio = entry(
        want_formula.then(|| json!(formulas::asymptotic_ratio(k, tree.wiener()).to_string())),
        None,
        None,
        want_oracle.then(|| "no finite oracle: asymptotic statement".to_string()),
    );

    Ok(json!({
        "k": tree.k(),
        "n": n,
        "mode": match mode { Mode::Formula => "formula", Mode::Oracle => "oracle", Mode::Both => "both" },
        "variant": variant_name(variant),
        "diameter": diameter,
        "wiener": wiener,
        "szeged": szeged,
        "pm_count": pm_count,
        "spanning_trees": spanning_trees,
        "spanning_forests": spanning_forests,
        "cycle_census": cycle_census,
        "tutte_factored": tutte_factored,
        "asymptotic_ratio": asymptotic_ratio,
    }))
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Published => "published",
        Variant::Corrected => "corrected",
    }
}

fn other_variant(v: Variant) -> Variant {
    match v {
        Variant::Published => Variant::Corrected,
        Variant::Corrected => Variant::Published,
    }
}

fn alt_name(selected: Variant) -> &'static str {
    variant_name(other_variant(selected))
}

// ---------------------------------------------------------------------------
// tutte
// ---------------------------------------------------------------------------

fn tutte_report(
    tree: &OrientedTree,
    n: u32,
    eval: Option<Vec<String>>,
    variant: Variant,
) -> Result<Value, CliError> {
    let k = tree.k() as u64;
    let factored = formulas::tutte_factored(k, n, variant)
        .map_err(|err| CliError::SizeGuard(err.to_string()))?;
    let mut report = serde_json::Map::new();
    report.insert("k".into(), json!(tree.k()));
    report.insert("n".into(), json!(n));
    report.insert("variant".into(), json!(variant_name(variant)));
    report.insert("display".into(), json!(factored.to_string()));
    if let Value::Object(body) = factored_json(&factored) {
        report.extend(body);
    }
    if let Some(point) = eval {
        let parse = |raw: &str| {
            BigRational::from_str(raw)
                .map_err(|e| CliError::Tree(format!("bad rational `{raw}`: {e}")))
        };
        let (x, y) = (parse(&point[0])?, parse(&point[1])?);
        let value = factored
            .evaluate(&x, &y, formulas::DEFAULT_BIT_BUDGET)
            .map_err(|err| match err {
                FormulaError::ValueTooLarge(msg) => CliError::SizeGuard(msg),
                other => CliError::Tree(other.to_string()),
            })?;
        report.insert(
            "eval".into(),
            json!({
                "x": x.to_string(),
                "y": y.to_string(),
                "value": value.to_string(),
            }),
        );
    }
    Ok(Value::Object(report))
}
