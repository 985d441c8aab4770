//! Command-line surface: sparsify / mincut / mincut-random-order / effres /
//! oracle / gen / accept over graphs in the text format.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cutstream::config::Config;
use cutstream::gen;
use cutstream::graph::write_graph_text;
use cutstream::stream::EdgeStream;
use cutstream::{oracle, Graph};
use cutstream_cli::load_graph;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "cutstream", version, about = "Graph-streaming minimum cuts, sparsifiers, and effective resistances")]
struct Cli {
    /// Seed for all randomized components.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Shuffle the input line order with this seed before streaming.
    #[arg(long, global = true)]
    shuffle: Option<u64>,
    /// Dump the space-meter time series as CSV to this path.
    #[arg(long, global = true)]
    space_log: Option<PathBuf>,
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream a one-pass sparsifier and write graph + JSON sidecar.
    Sparsify(SparsifyArgs),
    /// One-pass (1+eps)-approximate minimum cut.
    Mincut(MincutArgs),
    /// Exact minimum cut of a simple graph on a random-order stream.
    MincutRandomOrder(RandomOrderArgs),
    /// All-pairs effective resistance estimates (CSV).
    Effres(EffresArgs),
    /// Exact reference answers (JSON/CSV).
    Oracle(OracleArgs),
    /// Instance generators with manifests.
    Gen(GenArgs),
    /// Run the acceptance suite and print one line per criterion.
    Accept(AcceptArgs),
}

#[derive(Args)]
struct SparsifyArgs {
    /// for-all or for-each
    #[arg(long, value_parser = ["forall", "foreach"])]
    mode: String,
    #[arg(long)]
    eps: f64,
    /// Output path prefix; writes <prefix>.txt and <prefix>.json.
    #[arg(long)]
    out: Option<PathBuf>,
    graph: PathBuf,
}

#[derive(Args)]
struct MincutArgs {
    #[arg(long)]
    eps: f64,
    /// Candidate radius constant: alpha = 1 + C/log2(n).
    #[arg(long)]
    alpha_c: Option<f64>,
    /// Contraction tree repetitions (default ceil(8 log2(n)^2)).
    #[arg(long)]
    reps: Option<usize>,
    graph: PathBuf,
}

#[derive(Args)]
struct RandomOrderArgs {
    /// Freeze threshold constant: freeze once the prefix min cut exceeds C*log2(n).
    #[arg(long)]
    c_thresh: Option<f64>,
    graph: PathBuf,
}

#[derive(Args)]
struct EffresArgs {
    #[arg(long)]
    eps: f64,
    /// File of `u v` lines to query.
    #[arg(long, conflicts_with = "all")]
    pairs: Option<PathBuf>,
    /// Query every pair.
    #[arg(long)]
    all: bool,
    /// Median over independent sparsifier copies instead of sketch copies.
    #[arg(long)]
    strict: bool,
    graph: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_parser = ["mincut", "cut-family", "effres", "leverage"])]
    what: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    graph: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_parser = ["gnp", "dumbbell", "cycle", "planted-bisection", "kedge-layered", "hard-exact", "hard-approx"])]
    kind: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    cross: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    index: Option<usize>,
}

#[derive(Args)]
struct AcceptArgs {
    /// Run only this criterion id.
    #[arg(long)]
    only: Option<usize>,
}

fn load_stream(path: &PathBuf, shuffle: Option<u64>) -> Result<(Graph, EdgeStream)> {
    let g = load_graph(path)?;
    let stream = EdgeStream::from_graph(&g);
    let stream = match shuffle {
        Some(s) => stream.shuffled(s),
        None => stream,
    };
    Ok((g, stream))
}

fn dump_space_log(path: &Option<PathBuf>, meter: &cutstream::SpaceMeter) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, meter.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let cfg = Config::default();
    match &cli.command {
        Command::Sparsify(a) => {
            let (_, stream) = load_stream(&a.graph, cli.shuffle)?;
            let reducer = match a.mode.as_str() {
                "forall" => cutstream::stream::Reducer::ForAll,
                _ => cutstream::stream::Reducer::ForEach,
            };
            let mut engine =
                cutstream::stream::StreamEngine::new(stream.n(), a.eps, reducer, cli.seed, 1.0, &cfg);
            if cli.space_log.is_some() {
                engine = engine.with_space_log();
            }
            for e in stream.into_iter_counted() {
                engine.push(e);
            }
            let out = engine.finish();
            dump_space_log(&cli.space_log, &out.meter)?;
            let sidecar = serde_json::to_string_pretty(&out.sparsifier.sidecar())?;
            if let Some(prefix) = &a.out {
                let mut txt = prefix.clone();
                txt.set_extension("txt");
                std::fs::write(&txt, write_graph_text(&out.sparsifier.graph))?;
                let mut meta = prefix.clone();
                meta.set_extension("json");
                std::fs::write(&meta, &sidecar)?;
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "edges": out.sparsifier.graph.m(),
                        "fallback": out.sparsifier.fallback,
                        "space_words_peak": out.meter.peak_words(),
                        "cascades": out.cascades,
                    })
                );
            } else {
                println!(
                    "{} sparsifier: {} edges (peak {} words, {} cascades{})",
                    a.mode,
                    out.sparsifier.graph.m(),
                    out.meter.peak_words(),
                    out.cascades,
                    if out.sparsifier.fallback { ", fallback" } else { "" }
                );
            }
        }
        Command::Mincut(a) => {
            let (_, stream) = load_stream(&a.graph, cli.shuffle)?;
            let mut cfg = cfg.clone();
            if let Some(c) = a.alpha_c {
                cfg.c_alpha = c;
            }
            cfg.tree_reps = a.reps.or(cfg.tree_reps);
            let out = cutstream::mincut::approx_min_cut_stream(stream, a.eps, cli.seed, &cfg);
            if cli.json {
                println!("{}", out.to_json());
            } else {
                println!(
                    "min cut ~ {:.4} (side {} vertices, {} crossing edges, family {}, peak {} words)",
                    out.value,
                    out.side.count(),
                    out.crossing_edges.len(),
                    out.family_size,
                    out.space_words_peak
                );
            }
        }
        Command::MincutRandomOrder(a) => {
            let (_, stream) = load_stream(&a.graph, cli.shuffle)?;
            let mut cfg = cfg.clone();
            if let Some(c) = a.c_thresh {
                cfg.c_thresh = c;
            }
            let out = cutstream::random_order::exact_min_cut_random_order(stream, cli.seed, &cfg)?;
            if cli.json {
                println!("{}", out.to_json());
            } else {
                println!(
                    "exact min cut {} ({} minimum cuts, |T| = {}, froze at {:?}, peak {} words)",
                    out.value,
                    out.cuts.len(),
                    out.t_size,
                    out.froze_at,
                    out.space_words_peak
                );
            }
        }
        Command::Effres(a) => {
            let (g, stream) = load_stream(&a.graph, cli.shuffle)?;
            let eps_half = a.eps / 2.0;
            let pairs: Vec<(usize, usize)> = if a.all {
                (0..g.n()).flat_map(|u| (u + 1..g.n()).map(move |v| (u, v))).collect()
            } else if let Some(pf) = &a.pairs {
                let text = std::fs::read_to_string(pf)?;
                text.lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| {
                        let mut it = l.split_whitespace();
                        Ok((
                            it.next().context("pair line needs u")?.parse()?,
                            it.next().context("pair line needs v")?.parse()?,
                        ))
                    })
                    .collect::<Result<_>>()?
            } else {
                bail!("pass --all or --pairs <file>");
            };
            print!("{}", run_effres(stream, eps_half, cli.seed, a.strict, &pairs, &cfg)?);
        }
        Command::Oracle(a) => {
            let g = load_graph(&a.graph)?;
            match a.what.as_str() {
                "mincut" => {
                    let (v, cut) = oracle::stoer_wagner_min_cut(&g);
                    println!(
                        "{}",
                        serde_json::json!({"value": v, "side": cut.side.iter().collect::<Vec<_>>()})
                    );
                }
                "cut-family" => {
                    let fam = oracle::brute_force_cut_family(&g, a.alpha, 20)?;
                    let cuts: Vec<serde_json::Value> = fam
                        .iter()
                        .map(|(s, v)| serde_json::json!({"side": s.iter().collect::<Vec<_>>(), "value": v}))
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({"alpha": a.alpha, "min": fam.min_value(), "cuts": cuts})
                    );
                }
                "effres" => {
                    let r = oracle::dense_er_matrix(&g, cfg.dense_oracle_cap)?;
                    let mut out = String::from("u,v,resistance\n");
                    for u in 0..g.n() {
                        for v in u + 1..g.n() {
                            out.push_str(&format!("{u},{v},{}\n", r[(u, v)]));
                        }
                    }
                    print!("{out}");
                }
                _ => {
                    let lev = oracle::exact_leverage_scores(&g, cfg.dense_oracle_cap)?;
                    let mut out = String::from("edge,u,v,leverage\n");
                    for (i, (e, l)) in g.edges().iter().zip(lev).enumerate() {
                        out.push_str(&format!("{i},{},{},{l}\n", e.u, e.v));
                    }
                    print!("{out}");
                }
            }
        }
        Command::Gen(a) => run_gen(a, cli.seed)?,
        Command::Accept(a) => {
            let results = match a.only {
                Some(id) => {
                    let f = cutstream_cli::accept::all_criteria()
                        .into_iter()
                        .nth(id.checked_sub(1).context("criterion ids start at 1")?)
                        .context("no such criterion")?;
                    let r = f();
                    println!("{}", r.line());
                    vec![r]
                }
                None => cutstream_cli::accept::run_all(),
            };
            if results.iter().any(|r| !r.pass) {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn run_effres(
    stream: EdgeStream,
    eps_half: f64,
    seed: u64,
    strict: bool,
    pairs: &[(usize, usize)],
    cfg: &Config,
) -> Result<String> {
    use cutstream::effres::build_er_sketch;
    let mut out = String::from("u,v,estimate\n");
    if strict {
        // Independent sparsifier copies, one sketch copy each.
        let mut single = cfg.clone();
        single.amplify_reps = 1;
        let sketches: Vec<_> = (0..cfg.amplify_reps as u64)
            .map(|rep| {
                let s = cutstream::stream::stream_foreach_sparsifier(
                    stream.clone(),
                    eps_half,
                    seed ^ (rep + 1),
                    cfg,
                );
                build_er_sketch(&s.sparsifier, eps_half, seed ^ (rep + 101), &single)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for &(u, v) in pairs {
            let mut vals: Vec<f64> =
                sketches.iter().map(|sk| sk.query(u, v)).collect::<Result<_, _>>()?;
            out.push_str(&format!("{u},{v},{}\n", cutstream::sketch::median(&mut vals)));
        }
    } else {
        let s = cutstream::stream::stream_foreach_sparsifier(stream, eps_half, seed, cfg);
        let sk = build_er_sketch(&s.sparsifier, eps_half, seed ^ 0xe5, cfg)?;
        for &(u, v) in pairs {
            out.push_str(&format!("{u},{v},{}\n", sk.query(u, v)?));
        }
    }
    Ok(out)
}

fn run_gen(a: &GenArgs, seed: u64) -> Result<()> {
    std::fs::create_dir_all(&a.out)?;
    let need = |opt: Option<usize>, name: &str| opt.with_context(|| format!("--{name} is required"));
    let (name, graph, extra): (String, Graph, serde_json::Value) = match a.kind.as_str() {
        "gnp" => {
            let n = need(a.n, "n")?;
            let p = a.p.context("--p is required")?;
            (format!("gnp-{n}-{seed}"), gen::gnp(n, p, seed), serde_json::json!({"n": n, "p": p}))
        }
        "dumbbell" => {
            let k = need(a.k, "k")?;
            (format!("dumbbell-{k}"), gen::dumbbell(k), serde_json::json!({"k": k}))
        }
        "cycle" => {
            let n = need(a.n, "n")?;
            (format!("cycle-{n}"), gen::cycle(n), serde_json::json!({"n": n}))
        }
        "planted-bisection" => {
            let n = need(a.n, "n")?;
            let p_in = a.p_in.context("--p-in is required")?;
            let cross = need(a.cross, "cross")?;
            (
                format!("planted-{n}-{seed}"),
                gen::planted_bisection(n, p_in, cross, seed),
                serde_json::json!({"n": n, "p_in": p_in, "cross": cross}),
            )
        }
        "kedge-layered" => {
            let layers = need(a.layers, "layers")?;
            let width = need(a.width, "width")?;
            let k = need(a.k, "k")?;
            (
                format!("kedge-{layers}x{width}-k{k}"),
                gen::kedge_layered(layers, width, k),
                serde_json::json!({"layers": layers, "width": width, "k": k}),
            )
        }
        "hard-exact" => {
            let n = need(a.n, "n")?;
            let index = need(a.index, "index")?;
            let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let bits: Vec<bool> = (0..gen::bits_len_exact(n)).map(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect();
            let (g, info) = gen::hard_exact(n, &bits, index)?;
            (format!("hard-exact-{n}-{index}-{seed}"), g, serde_json::to_value(&info)?)
        }
        _ => {
            let eps = gen::admissible_eps(a.eps.context("--eps is required")?);
            let blocks = need(a.blocks, "blocks")?;
            let index = need(a.index, "index")?;
            let s = (1.0 / (4.0 * eps)).round() as usize;
            let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let bits: Vec<bool> =
                (0..gen::bits_len_approx(blocks, s)).map(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect();
            let (g, info) = gen::hard_approx(eps, blocks, &bits, index)?;
            println!("eps snapped to {eps}");
            (format!("hard-approx-{blocks}x{s}-{index}-{seed}"), g, serde_json::to_value(&info)?)
        }
    };
    let manifest = gen::CorpusManifest {
        kind: a.kind.clone(),
        params: extra,
        seed,
        n: graph.n(),
        m: graph.m(),
    };
    let base = a.out.join(&name);
    std::fs::write(base.with_extension("txt"), write_graph_text(&graph))?;
    std::fs::write(base.with_extension("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    println!("wrote {}.txt ({} vertices, {} edges)", base.display(), graph.n(), graph.m());
    Ok(())
}

use rand_chacha::ChaCha8Rng;
