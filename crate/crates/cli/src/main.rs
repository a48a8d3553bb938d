//! `synchro`: command-line front end for the synchronizing-automata toolkit.
//!
//! Exit codes: 0 success, 1 negative answer (not synchronizing, nothing decoded),
//! 2 input or usage error, 3 capacity exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use synchro::bench::{bench_checkers, write_csv};
use synchro::{
    cluster_structure, decode_and_verify, decode_word, encode_binary, estimate_sync_probability,
    gen_cerny, greedy_reset, is_synchronizing_fast_with, is_synchronizing_quadratic,
    reduce_to_automaton, sample_dfa, sample_set_cover, shortest_reset, BinaryCodec, Dfa, Error,
    FastCheckConfig, SetCoverInstance, Word,
};

#[derive(Parser)]
#[command(name = "synchro", version, about = "Synchronizing automata toolkit")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format where a command supports several.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Pair-collection budget factor of the fast check.
    #[arg(long, global = true)]
    budget_ext: Option<usize>,
    /// Small-cluster scan budget factor of the fast check.
    #[arg(long, global = true)]
    budget_fin: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an automaton is synchronizing (exit 1 when it is not).
    Check {
        /// DFA file, `-` for standard input.
        #[arg(default_value = "-")]
        file: PathBuf,
        /// Expected-linear checker with quadratic fallback (the default).
        #[arg(long, conflicts_with = "quadratic")]
        fast: bool,
        /// Exhaustive pair search only.
        #[arg(long)]
        quadratic: bool,
        /// Cross-check every fast yes against the pair search.
        #[arg(long, conflicts_with = "quadratic")]
        paranoid: bool,
    },
    /// Reset threshold: exact subset search or the greedy pair-merging word.
    Rt {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        #[arg(long)]
        greedy: bool,
    },
    /// Cycle and tree structure of each letter's functional graph.
    Clusters {
        #[arg(default_value = "-")]
        file: PathBuf,
        /// Only this letter (1-based).
        #[arg(long)]
        letter: Option<usize>,
    },
    /// Reduce a Set-Cover instance to an automaton with reset threshold OPT.
    ReduceSc {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode an automaton over the binary alphabet.
    Encode {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the codec (required to decode words later).
        #[arg(long)]
        codec: Option<PathBuf>,
    },
    /// Decode a binary word into a word over the original alphabet.
    DecodeWord {
        /// Word file (letters 1 and 2 stand for bits 0 and 1), `-` for standard input.
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        codec: PathBuf,
        /// Original automaton; the result must then reset it.
        #[arg(long)]
        dfa: Option<PathBuf>,
    },
    /// Generate an automaton or a Set-Cover instance.
    Gen {
        #[command(flatten)]
        kind: GenKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Estimate the probability that a random automaton is synchronizing.
    Prob {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Time the fast and quadratic checkers; writes CSV.
    Bench {
        /// Comma-separated state counts.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        warmup: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GenKind {
    /// Uniformly random automaton with N states and K letters.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    random: Option<Vec<usize>>,
    /// The Černý automaton with N states.
    #[arg(long, value_name = "N")]
    cerny: Option<usize>,
    /// Random Set-Cover instance: universe N, M subsets, membership DENSITY.
    #[arg(long, num_args = 3, value_names = ["N", "M", "DENSITY"])]
    setcover: Option<Vec<String>>,
}

/// Failure of a command, carrying its exit code.
enum Failure {
    Input(String),
    Capacity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity(_) => Failure::Capacity(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        _ => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_dfa(path: &Path) -> Result<Dfa, Failure> {
    Ok(Dfa::parse(&read_input(path)?)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Check {
            file,
            quadratic,
            paranoid,
            ..
        } => {
            let dfa = read_dfa(file)?;
            if *quadratic {
                let yes = is_synchronizing_quadratic(&dfa);
                let answer = if yes { "yes" } else { "no" };
                if csv {
                    println!("answer,path,stage,visits\n{answer},quadratic,,");
                } else {
                    println!("{answer} path=quadratic");
                }
                return Ok(yes);
            }
            let mut config = FastCheckConfig {
                paranoid: *paranoid,
                ..FastCheckConfig::default()
            };
            if let Some(c) = cli.budget_ext {
                config.c_ext = c;
            }
            if let Some(c) = cli.budget_fin {
                config.c_fin = c;
            }
            let out = is_synchronizing_fast_with(&dfa, &config);
            if csv {
                let answer = if out.answer { "yes" } else { "no" };
                println!(
                    "answer,path,stage,visits\n{answer},{},{},{}",
                    out.path, out.stage, out.visits
                );
            } else {
                let mut line = out.to_string();
                if let Some((p, q)) = out.witness {
                    line.push_str(&format!(" witness={},{}", p + 1, q + 1));
                }
                if out.discrepancy {
                    line.push_str(" discrepancy");
                }
                println!("{line}");
            }
            Ok(out.answer)
        }
        Command::Rt { file, greedy, .. } => {
            let dfa = read_dfa(file)?;
            let result = if *greedy {
                greedy_reset(&dfa)
            } else {
                shortest_reset(&dfa)?
            };
            let method = if *greedy { "greedy" } else { "exact" };
            match result {
                Some(r) if csv => println!(
                    "method,length,word\n{method},{},{}",
                    r.length,
                    r.word.to_text()
                ),
                Some(r) => println!("length={}\nword={}", r.length, r.word.to_text()),
                None if csv => println!("method,length,word\n{method},,"),
                None => println!("not synchronizing"),
            }
            Ok(true)
        }
        Command::Clusters { file, letter } => {
            let dfa = read_dfa(file)?;
            let letters: Vec<usize> = match letter {
                Some(0) => return Err(Failure::Input("letters are numbered from 1".into())),
                Some(x) => vec![x - 1],
                None => (0..dfa.letters()).collect(),
            };
            let mut out = String::new();
            if csv {
                out.push_str("letter,cluster,label,size,cycle_len,height\n");
            }
            for x in letters {
                let cs = cluster_structure(&dfa, x)?;
                if !csv {
                    out.push_str(&format!(
                        "letter {}: clusters={}\n",
                        x + 1,
                        cs.num_clusters()
                    ));
                }
                for (c, size, cycle, height) in cs.cluster_summaries() {
                    let label = cs.cluster_label(c) + 1;
                    if csv {
                        out.push_str(&format!(
                            "{},{},{label},{size},{cycle},{height}\n",
                            x + 1,
                            c + 1
                        ));
                    } else {
                        out.push_str(&format!(
                            "  cluster {} label={label} size={size} cycle={cycle} height={height}\n",
                            c + 1
                        ));
                    }
                }
                if !csv {
                    match cs.highest_tree_info() {
                        Some(ht) => out.push_str(&format!(
                            "  highest tree root={} height={} second={} size={} top={}\n",
                            ht.tree_root + 1,
                            ht.height,
                            ht.second_height.map_or("-".to_string(), |h| h.to_string()),
                            ht.tree_size,
                            ht.top_set_size
                        )),
                        None => out.push_str("  highest tree: not unique\n"),
                    }
                }
            }
            write_output(None, &out)?;
            Ok(true)
        }
        Command::ReduceSc { file, output } => {
            let inst = SetCoverInstance::parse(&read_input(file)?)?;
            write_output(output.as_deref(), &reduce_to_automaton(&inst).serialize())?;
            Ok(true)
        }
        Command::Encode {
            file,
            output,
            codec,
        } => {
            let dfa = read_dfa(file)?;
            let (encoded, c) = encode_binary(&dfa)?;
            if let Some(path) = codec {
                write_output(Some(path), &c.serialize())?;
            }
            write_output(output.as_deref(), &encoded.serialize())?;
            Ok(true)
        }
        Command::DecodeWord { file, codec, dfa } => {
            let codec = BinaryCodec::parse(&read_input(codec)?)?;
            let bw = Word::parse(&read_input(file)?)?;
            if let Some(x) = bw.iter().find(|&x| x > 1) {
                return Err(Error::LetterOutOfRange { letter: x, k: 2 }.into());
            }
            let decoded = match dfa {
                Some(path) => decode_and_verify(&read_dfa(path)?, &codec, &bw),
                None => decode_word(&codec, &bw),
            };
            match decoded {
                Some(u) => {
                    println!("{}", u.to_text());
                    Ok(true)
                }
                None => {
                    println!("none");
                    Ok(false)
                }
            }
        }
        Command::Gen { kind, output } => {
            let text = if let Some(nk) = &kind.random {
                let (n, k) = (nk[0], nk[1]);
                if n == 0 || k == 0 {
                    return Err(Failure::Input(
                        "need at least one state and one letter".into(),
                    ));
                }
                sample_dfa(n, k, cli.seed).serialize()
            } else if let Some(n) = kind.cerny {
                gen_cerny(n)?.serialize()
            } else {
                let args = kind.setcover.as_ref().expect("clap requires one generator");
                let int = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Failure::Input(format!("not a non-negative integer: `{s}`")))
                };
                let (n, m) = (int(&args[0])?, int(&args[1])?);
                let density: f64 = args[2]
                    .parse()
                    .ok()
                    .filter(|d: &f64| (0.0..=1.0).contains(d))
                    .ok_or_else(|| {
                        Failure::Input(format!("density must lie in [0, 1], got `{}`", args[2]))
                    })?;
                if n == 0 || m == 0 {
                    return Err(Failure::Input(
                        "need a non-empty universe and family".into(),
                    ));
                }
                sample_set_cover(n, m, density, cli.seed).serialize()
            };
            write_output(output.as_deref(), &text)?;
            Ok(true)
        }
        Command::Prob { n, k, trials } => {
            if *n == 0 || *k == 0 || *trials == 0 {
                return Err(Failure::Input("n, k and trials must be positive".into()));
            }
            let p = estimate_sync_probability(*n, *k, *trials, cli.seed);
            if csv {
                println!(
                    "n,k,trials,seed,sync_fraction\n{n},{k},{trials},{},{p}",
                    cli.seed
                );
            } else {
                println!(
                    "n={n} k={k} trials={trials} seed={} sync_fraction={p}",
                    cli.seed
                );
            }
            Ok(true)
        }
        Command::Bench {
            sizes,
            k,
            trials,
            warmup,
            output,
        } => {
            if sizes.contains(&0) || *k == 0 || *trials == 0 {
                return Err(Failure::Input(
                    "sizes, k and trials must be positive".into(),
                ));
            }
            let records = bench_checkers(sizes, *k, *trials, cli.seed, *warmup);
            let mut buf = Vec::new();
            write_csv(&records, &mut buf).map_err(|e| Failure::Input(e.to_string()))?;
            write_output(output.as_deref(), &String::from_utf8_lossy(&buf))?;
            Ok(true)
        }
    }
}
