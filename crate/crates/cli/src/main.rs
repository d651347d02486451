//! `qmat`: matroids over idylls, morphisms and quiver Grassmannians from the command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qmat_core::grading::find_nice_sequence;
use qmat_core::json::{
    parse, point_json, vectors_json, EulerReportJson, GradingJson, GradingsJson, MatroidJson, MorphismJson, RepJson,
};
use qmat_core::morphism::{
    contract_morphism, factorization_check, is_morphism_circuits, is_morphism_vectors, pluecker_witness, preimage,
    restrict_morphism,
};
use qmat_core::quiver_matroid::enumerate_points;
use qmat_core::tits::{euler_via_tits, tits_space};
use qmat_core::{Error, F1Rep, Idyll, IdyllMorphism, Matroid, SubmonomialMatrix, Subset, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "qmat", version, about = "Matroids over idylls, submonomial morphisms and quiver Grassmannians")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Cap on enumerated candidates.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Single matroids.
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Submonomial morphisms between matroids.
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// F1-representations and their quiver Grassmannians.
    #[command(subcommand)]
    Quiver(QuiverCmd),
    /// Same as `quiver enumerate`.
    Enumerate(EnumerateArgs),
    /// Same as `quiver tits`.
    Tits(RankArgs),
    /// Same as `quiver euler`.
    Euler(EulerArgs),
}

#[derive(Subcommand)]
enum MatroidCmd {
    /// Check the Plücker relations.
    Validate { file: PathBuf },
    Dual { file: PathBuf },
    /// Contract and then delete sets of labels.
    Minor {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "")]
        contract: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        delete: Vec<String>,
    },
    Circuits {
        file: PathBuf,
        /// Cocircuits instead.
        #[arg(long)]
        co: bool,
    },
    Vectors {
        file: PathBuf,
        /// Covectors instead.
        #[arg(long)]
        co: bool,
    },
    /// Push forward along the morphism to another idyll.
    Pushforward {
        file: PathBuf,
        #[arg(long)]
        to: String,
    },
}

#[derive(Args)]
struct MorphismFiles {
    /// Submonomial matrix JSON.
    #[arg(long)]
    matrix: PathBuf,
    /// Source matroid JSON.
    #[arg(long)]
    source: PathBuf,
    /// Target matroid JSON.
    #[arg(long)]
    target: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MinorKind {
    Contract,
    Restrict,
}

#[derive(Subcommand)]
enum MorphismCmd {
    /// Run every morphism criterion and report their agreement.
    Check(MorphismFiles),
    /// The pre-image of the target matroid.
    Preimage {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Contraction or restriction along `A → B`.
    Minor {
        #[command(flatten)]
        files: MorphismFiles,
        #[arg(long, value_delimiter = ',', default_value = "")]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        b: Vec<String>,
        #[arg(long, value_enum, default_value_t = MinorKind::Contract)]
        kind: MinorKind,
    },
    Transpose {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Args)]
struct RankArgs {
    /// Representation JSON.
    #[arg(long)]
    rep: PathBuf,
    /// Rank vector, comma separated in vertex order.
    #[arg(long, value_delimiter = ',', required = true)]
    rank: Vec<usize>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    target: RankArgs,
    #[arg(long, default_value = "K")]
    idyll: String,
    /// Print only the number of points.
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
struct EulerArgs {
    #[command(flatten)]
    target: RankArgs,
    /// A grading or list of gradings forming a nice distinguishing sequence.
    #[arg(long)]
    gradings: Option<PathBuf>,
}

#[derive(Subcommand)]
enum QuiverCmd {
    Enumerate(EnumerateArgs),
    Tits(RankArgs),
    Euler(EulerArgs),
    /// Subrepresentations of a dimension vector.
    Subreps {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        dim: Vec<usize>,
    },
    /// The coefficient quiver and its shape.
    Coeffquiver {
        #[arg(long)]
        rep: PathBuf,
    },
    /// Search for a nice distinguishing sequence of gradings.
    Sequence {
        #[arg(long)]
        rep: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Math(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::ShapeMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Math(format!("{}: {e}", path.display())))
}

fn load_matroid(path: &Path) -> Result<Matroid, Failure> {
    load::<MatroidJson>(path)?.to_matroid().map_err(|e| Failure::from(e).context(path))
}

fn load_matrix(path: &Path) -> Result<SubmonomialMatrix, Failure> {
    load::<MorphismJson>(path)?.to_matrix().map_err(|e| Failure::from(e).context(path))
}

fn load_rep(path: &Path) -> Result<F1Rep, Failure> {
    load::<RepJson>(path)?.to_rep().map_err(|e| Failure::from(e).context(path))
}

impl Failure {
    fn context(self, path: &Path) -> Failure {
        let p = path.display();
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{p}: {m}")),
            Failure::Math(m) => Failure::Math(format!("{p}: {m}")),
            Failure::Budget(m) => Failure::Budget(format!("{p}: {m}")),
        }
    }
}

fn labels_subset(m_ground: &qmat_core::GroundSet, labels: &[String]) -> Result<Subset, Failure> {
    let labels: Vec<&String> = labels.iter().filter(|l| !l.is_empty()).collect();
    Ok(m_ground.subset_of(&labels)?)
}

fn matroid_text(m: &Matroid) -> String {
    let j = MatroidJson::from(m);
    let vals: Vec<String> = j.values.iter().map(|(k, v)| format!("  {{{k}}} -> {v}")).collect();
    format!("{} matroid of rank {} on {{{}}}\n{}", j.idyll, j.rank, j.ground.join(","), vals.join("\n"))
}

fn matroid_out(m: &Matroid) -> Outcome {
    Ok((serde_json::to_value(MatroidJson::from(m)).expect("serializable"), matroid_text(m)))
}

fn matrix_out(phi: &SubmonomialMatrix) -> Outcome {
    let j = MorphismJson::from(phi);
    let text = j.entries.iter().map(|e| format!("{} -> {} : {}", e.from, e.to, e.coeff)).collect::<Vec<_>>().join("\n");
    Ok((serde_json::to_value(j).expect("serializable"), text))
}

fn run_matroid(cmd: &MatroidCmd, budget: u64) -> Outcome {
    match cmd {
        MatroidCmd::Validate { file } => {
            let m = load_matroid(file)?;
            let value = json!({"valid": true, "rank": m.rank(), "bases": m.num_bases()});
            Ok((value, format!("valid: rank {}, {} bases", m.rank(), m.num_bases())))
        }
        MatroidCmd::Dual { file } => matroid_out(&load_matroid(file)?.dual()),
        MatroidCmd::Minor { file, contract, delete } => {
            let m = load_matroid(file)?;
            let c = labels_subset(m.ground(), contract)?;
            let d = labels_subset(m.ground(), delete)?;
            if !c.intersection(d).is_empty() {
                return Err(Failure::Usage("contracted and deleted sets overlap".into()));
            }
            let mc = m.contract(c);
            let rest = mc.ground().subset_of(&m.ground().labels_of(d))?;
            matroid_out(&mc.delete(rest))
        }
        MatroidCmd::Circuits { file, co } => {
            let m = load_matroid(file)?;
            let vs = if *co { m.cocircuits() } else { m.circuits() };
            vectors_out(&vs)
        }
        MatroidCmd::Vectors { file, co } => {
            let m = load_matroid(file)?;
            let vs = if *co { m.covectors(budget)? } else { m.vectors(budget)? };
            vectors_out(&vs)
        }
        MatroidCmd::Pushforward { file, to } => {
            let m = load_matroid(file)?;
            let target: Idyll = to.parse()?;
            let f = if target == Idyll::Krasner {
                IdyllMorphism::to_krasner(m.idyll())
            } else if target == m.idyll() {
                IdyllMorphism::identity(target)
            } else {
                IdyllMorphism::inclusion(m.idyll(), target)?
            };
            matroid_out(&m.push_forward(&f)?)
        }
    }
}

fn vectors_out(vs: &[qmat_core::VectorF]) -> Outcome {
    let lits = vectors_json(vs);
    let text = lits.iter().map(|v| format!("({})", v.join(", "))).collect::<Vec<_>>().join("\n");
    Ok((json!(lits), text))
}

fn run_morphism(cmd: &MorphismCmd, budget: u64) -> Outcome {
    match cmd {
        MorphismCmd::Check(files) => {
            let phi = load_matrix(&files.matrix)?;
            let n = load_matroid(&files.source)?;
            let m = load_matroid(&files.target)?;
            let witness = pluecker_witness(&phi, &n, &m)?;
            let pl = witness.is_none();
            let circuits = is_morphism_circuits(&phi, &n, &m)?;
            let factor = factorization_check(&phi, &n, &m)?;
            let vectors = match is_morphism_vectors(&phi, &n, &m, budget) {
                Ok(b) => Some(b),
                Err(Error::InfiniteCarrier(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let concordant = circuits == pl && factor == pl && vectors.is_none_or(|v| v == pl);
            let value = json!({
                "morphism": pl,
                "criteria": {"pluecker": pl, "circuits": circuits, "vectors": vectors, "factorization": factor},
                "concordant": concordant,
                "witness": witness.as_ref().map(|w| json!({"y": w.y, "x": w.x})),
            });
            let mut text = format!(
                "morphism: {pl}\npluecker: {pl}\ncircuits: {circuits}\nvectors: {}\nfactorization: {factor}\nconcordant: {concordant}",
                vectors.map_or("n/a".to_string(), |v| v.to_string())
            );
            if let Some(w) = &witness {
                text.push_str(&format!("\nwitness: y = {{{}}}, x = {{{}}}", w.y.join(","), w.x.join(",")));
            }
            Ok((value, text))
        }
        MorphismCmd::Preimage { matrix, target } => matroid_out(&preimage(&load_matrix(matrix)?, &load_matroid(target)?)?),
        MorphismCmd::Minor { files, a, b, kind } => {
            let phi = load_matrix(&files.matrix)?;
            let n = load_matroid(&files.source)?;
            let m = load_matroid(&files.target)?;
            let sa = labels_subset(phi.source(), a)?;
            let sb = labels_subset(phi.target(), b)?;
            let (psi, nn, mm) = match kind {
                MinorKind::Contract => (contract_morphism(&phi, sa, sb)?, n.contract(sa), m.contract(sb)),
                MinorKind::Restrict => (restrict_morphism(&phi, sa, sb)?, n.restrict(sa), m.restrict(sb)),
            };
            let ok = pluecker_witness(&psi, &nn, &mm)?.is_none();
            let value = json!({
                "matrix": MorphismJson::from(&psi),
                "source": MatroidJson::from(&nn),
                "target": MatroidJson::from(&mm),
                "morphism": ok,
            });
            let text = format!("{}\nsource: {}\ntarget: {}\nmorphism: {ok}", matrix_out(&psi)?.1, matroid_text(&nn), matroid_text(&mm));
            Ok((value, text))
        }
        MorphismCmd::Transpose { matrix } => matrix_out(&load_matrix(matrix)?.transpose()),
    }
}

fn idyll_of(s: &str) -> Result<Idyll, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn run_enumerate(args: &EnumerateArgs, budget: u64) -> Outcome {
    let rep = load_rep(&args.target.rep)?;
    let idyll = idyll_of(&args.idyll)?;
    let pts = enumerate_points(&rep, &args.target.rank, idyll, budget)?;
    if args.count_only {
        return Ok((json!(pts.len()), pts.len().to_string()));
    }
    let list: Vec<_> = pts.iter().map(point_json).collect();
    Ok((json!(list), points_text(&list)))
}

fn points_text(list: &[qmat_core::json::PointJson]) -> String {
    list.iter()
        .map(|p| {
            p.iter()
                .map(|(v, vals)| format!("{v}: {}", vals.iter().map(|(k, x)| format!("{{{k}}}={x}")).collect::<Vec<_>>().join(" ")))
                .collect::<Vec<_>>()
                .join(" | ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_tits(args: &RankArgs, budget: u64) -> Outcome {
    let rep = load_rep(&args.rep)?;
    let pts = tits_space(&rep, &args.rank, budget)?;
    let list: Vec<_> = pts.iter().map(point_json).collect();
    let text = format!("{} points\n{}", list.len(), points_text(&list));
    Ok((json!({"count": list.len(), "points": list}), text))
}

fn run_euler(args: &EulerArgs, budget: u64) -> Outcome {
    let rep = load_rep(&args.target.rep)?;
    let seq = match &args.gradings {
        Some(p) => Some(load::<GradingsJson>(p)?.to_sequence(&rep).map_err(|e| Failure::from(e).context(p))?),
        None => None,
    };
    let report = euler_via_tits(&rep, &args.target.rank, seq.as_deref(), budget)?;
    let j = EulerReportJson::from(&report);
    let text = format!(
        "tits: {}\nsubreps: {}\ncoordinate: {}\ncertificate: {}\neuler: {}",
        j.tits_count,
        j.subrep_count,
        j.coordinate_count,
        j.certificate,
        j.euler.map_or("-".to_string(), |e| e.to_string())
    );
    Ok((serde_json::to_value(j).expect("serializable"), text))
}

fn run_quiver(cmd: &QuiverCmd, budget: u64) -> Outcome {
    match cmd {
        QuiverCmd::Enumerate(a) => run_enumerate(a, budget),
        QuiverCmd::Tits(a) => run_tits(a, budget),
        QuiverCmd::Euler(a) => run_euler(a, budget),
        QuiverCmd::Subreps { rep, dim } => {
            let rep = load_rep(rep)?;
            let subs = rep.subrepresentations(dim)?;
            let list: Vec<Value> = subs
                .iter()
                .map(|o| {
                    let m: serde_json::Map<String, Value> = rep
                        .quiver()
                        .vertices()
                        .iter()
                        .zip(o)
                        .enumerate()
                        .map(|(v, (name, &s))| (name.clone(), json!(rep.set(v).labels_of(s))))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            let text = subs
                .iter()
                .map(|o| {
                    o.iter().enumerate().map(|(v, &s)| format!("{{{}}}", rep.set(v).labels_of(s).join(","))).collect::<Vec<_>>().join(" ")
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok((json!({"count": subs.len(), "subrepresentations": list}), format!("{} subrepresentations\n{text}", subs.len())))
        }
        QuiverCmd::Coeffquiver { rep } => {
            let rep = load_rep(rep)?;
            let g = rep.coefficient_quiver();
            let nodes: Vec<String> = g.nodes.iter().map(|&(v, e)| rep.node_label(v, e)).collect();
            let arrows: Vec<Value> = g
                .edges
                .iter()
                .map(|e| json!({"arrow": rep.quiver().arrows()[e.arrow].name, "from": nodes[e.from], "to": nodes[e.to]}))
                .collect();
            let (tree, forest, cycle) = (g.is_tree(), g.is_forest(), g.is_primitive_cycle(&rep));
            let value = json!({"nodes": nodes, "arrows": arrows, "tree": tree, "forest": forest, "primitive_cycle": cycle});
            let text = format!(
                "{} nodes, {} arrows\ntree: {tree}\nforest: {forest}\nprimitive cycle: {cycle}\n{}",
                nodes.len(),
                g.edges.len(),
                g.edges
                    .iter()
                    .map(|e| format!("{}: {} -> {}", rep.quiver().arrows()[e.arrow].name, nodes[e.from], nodes[e.to]))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            Ok((value, text))
        }
        QuiverCmd::Sequence { rep } => {
            let rep = load_rep(rep)?;
            let seq = find_nice_sequence(&rep, rep.coefficient_quiver().num_nodes().max(1))?;
            let list: Vec<GradingJson> = seq.iter().map(|g| GradingJson::from_grading(g, &rep)).collect();
            let text = list
                .iter()
                .map(|g| g.values.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((serde_json::to_value(list).expect("serializable"), text))
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Matroid(c) => run_matroid(c, cli.budget),
        Command::Morphism(c) => run_morphism(c, cli.budget),
        Command::Quiver(c) => run_quiver(c, cli.budget),
        Command::Enumerate(a) => run_enumerate(a, cli.budget),
        Command::Tits(a) => run_tits(a, cli.budget),
        Command::Euler(a) => run_euler(a, cli.budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((value, text)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
                Format::Text => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Math(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Budget(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
