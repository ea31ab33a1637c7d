use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use isoresidual::arrangement::{chamber_graph, chamber_walls, is_simplicial, Chamber};
use isoresidual::fiber::{
    deep_resonance_count, edge_marked_count, enumerate_fiber, generic_degree,
    single_resonance_count,
};
use isoresidual::monodromy::{
    commutator, commutator_structure, local_gamma, monodromy_group, topological_class_partition,
};
use isoresidual::report::{Check, Report};
use isoresidual::verify::{run_suite, Suite};
use isoresidual::{Error, PoleSubset, ResidueConfig, SignFunction, StratumSignature};

/// Exact combinatorics of isoresidual fibers: decorated tree enumeration,
/// resonance chambers, and monodromy groups.
#[derive(Parser)]
#[command(name = "isoresidual", version, about)]
struct Cli {
    /// Emit the machine-readable JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the verification sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for all deterministic sampling.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SigArgs {
    /// Order of the unique zero.
    #[arg(long)]
    a: u32,
    /// Comma-separated pole orders, e.g. `2,3,3`.
    #[arg(long)]
    b: String,
}

impl SigArgs {
    fn parse(&self) -> Result<StratumSignature, Error> {
        let b = self
            .b
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("pole order `{t}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        StratumSignature::new(self.a, b)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degree of the cover over the complement of the resonance arrangement.
    Degree(SigArgs),
    /// Enumerate the fiber over a residue configuration or sign function.
    Enumerate {
        #[command(flatten)]
        sig: SigArgs,
        /// Residues as comma-separated rationals, e.g. `1,-1/4,-3/4`.
        #[arg(long)]
        residues: Option<String>,
        /// Sign map over subsets, e.g. `1=+;2=-;1,2=+`; residues win if both given.
        #[arg(long)]
        psi: Option<String>,
    },
    /// Closed-form fiber counts: generic, on one wall, or deep resonance.
    Count {
        #[command(flatten)]
        sig: SigArgs,
        /// Count on the wall of this subset, e.g. `2` or `1,3`.
        #[arg(long)]
        wall: Option<String>,
        /// Count over the locus where the middle residues all vanish.
        #[arg(long)]
        deep: bool,
        /// Edge-marked count and class structure for this subset.
        #[arg(long)]
        edge_marked: Option<String>,
    },
    /// Chambers of the real resonance arrangement and their shared walls.
    Chambers {
        #[arg(long)]
        poles: usize,
    },
    /// Meridian permutation of one hyperplane on the fiber of a chamber.
    Monodromy {
        #[command(flatten)]
        sig: SigArgs,
        /// Hyperplane subset, e.g. `2` or `1,3`.
        #[arg(long)]
        hyperplane: String,
        /// Base chamber as residues; defaults to the standard chamber.
        #[arg(long)]
        base: Option<String>,
    },
    /// Monodromy group of the isoresidual cover: order, transitivity, kind.
    Group {
        #[command(flatten)]
        sig: SigArgs,
        /// Base chamber as residues; defaults to the standard chamber.
        #[arg(long)]
        base: Option<String>,
    },
    /// Commutator of two meridians, classified.
    Commutator {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
    },
    /// Topological class partition for strata ending in two simple poles.
    Classes(SigArgs),
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value = "quick")]
        suite: String,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Infeasible | Error::UnrealizableSign => 3,
        Error::ScaleLimit(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut report = Report::new("");
    report.seed = cli.seed;
    report.threads = cli.threads;
    let outcome = run(&cli, &mut report);
    report.duration = started.elapsed();
    match outcome {
        Ok(()) => {
            emit(&cli, &report);
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn emit(cli: &Cli, report: &Report) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
    } else {
        print!("{}", report.to_table());
    }
}

fn base_chamber(p: usize, base: &Option<String>) -> Result<Chamber, Error> {
    match base {
        Some(text) => {
            let res = ResidueConfig::parse(text)?;
            if res.num_poles() != p {
                return Err(Error::Parse(format!("expected {p} residues")));
            }
            Chamber::from_residues(&res)
        }
        None => Chamber::from_psi(&SignFunction::standard(p)),
    }
}

fn run(cli: &Cli, report: &mut Report) -> Result<(), Error> {
    match &cli.command {
        Command::Degree(sig_args) => {
            let sig = sig_args.parse()?;
            report.command = "degree".into();
            report.inputs = json!({"a": sig.zero_order(), "b": sig.pole_orders()});
            let d = generic_degree(&sig);
            report.outputs = json!({
                "degree": d as u64,
                "formula": format!("{}! / {}!", sig.zero_order(), sig.zero_order() + 2 - sig.num_poles() as u32),
            });
        }
        Command::Enumerate { sig, residues, psi } => {
            let sig = sig.parse()?;
            let p = sig.num_poles();
            report.command = "enumerate".into();
            let (sign_fn, checked) = match (residues, psi) {
                (Some(r), _) => {
                    let res = ResidueConfig::parse(r)?;
                    if res.num_poles() != p {
                        return Err(Error::Parse(format!("expected {p} residues")));
                    }
                    (res.sign_function(), false)
                }
                // abstract sign maps must be realizable
                (None, Some(m)) => (SignFunction::parse(p, m)?, true),
                (None, None) => (SignFunction::standard(p), false),
            };
            report.inputs = json!({
                "a": sig.zero_order(), "b": sig.pole_orders(), "psi": sign_fn.key(),
            });
            let fiber = if checked {
                isoresidual::fiber::enumerate_fiber_checked(&sig, &sign_fn)?
            } else {
                enumerate_fiber(&sig, &sign_fn)?
            };
            report.outputs = json!({
                "count": fiber.len(),
                "fiber": fiber.to_json(),
            });
        }
        Command::Count { sig, wall, deep, edge_marked } => {
            let sig = sig.parse()?;
            let p = sig.num_poles();
            report.command = "count".into();
            report.inputs = json!({"a": sig.zero_order(), "b": sig.pole_orders()});
            let outputs = if let Some(w) = wall {
                let subset = PoleSubset::parse(p, w)?;
                json!({
                    "wall": subset.to_string(),
                    "count": single_resonance_count(&sig, &subset) as u64,
                })
            } else if *deep {
                json!({"deep": deep_resonance_count(&sig) as u64})
            } else if let Some(m) = edge_marked {
                let subset = PoleSubset::parse(p, m)?;
                let c = edge_marked_count(&sig, &subset);
                json!({
                    "subset": subset.to_string(),
                    "total": c.total as u64,
                    "class_count": c.class_count as u64,
                    "class_size": c.class_size as u64,
                })
            } else {
                json!({"generic": generic_degree(&sig) as u64})
            };
            report.outputs = outputs;
        }
        Command::Chambers { poles } => {
            report.command = "chambers".into();
            report.inputs = json!({"poles": poles});
            let graph = chamber_graph(*poles)?;
            report.outputs = json!({
                "chambers": graph.chambers.iter().map(|c| json!({
                    "psi": c.psi.key(),
                    "witness": c.witness.to_string(),
                    "walls": chamber_walls(c).iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    "simplicial": is_simplicial(c),
                })).collect::<Vec<_>>(),
                "edges": graph.edges.iter().map(|&(a, b, w)| json!({
                    "from": a, "to": b, "wall": w.to_string(),
                })).collect::<Vec<_>>(),
            });
        }
        Command::Monodromy { sig, hyperplane, base } => {
            let sig = sig.parse()?;
            let p = sig.num_poles();
            report.command = "monodromy".into();
            let subset = PoleSubset::parse(p, hyperplane)?;
            let chamber = base_chamber(p, base)?;
            report.inputs = json!({
                "a": sig.zero_order(), "b": sig.pole_orders(),
                "hyperplane": subset.to_string(), "base": chamber.psi.key(),
            });
            let (fiber, gamma) = local_gamma(&sig, &chamber, &subset)?;
            report.outputs = json!({
                "fiber": fiber.keys(),
                "permutation": gamma.cycle_notation(),
                "cycle_type": gamma.cycle_type(),
                "even": gamma.is_even(),
            });
        }
        Command::Group { sig, base } => {
            let sig = sig.parse()?;
            let p = sig.num_poles();
            report.command = "group".into();
            let chamber = base_chamber(p, base)?;
            report.inputs = json!({
                "a": sig.zero_order(), "b": sig.pole_orders(), "base": chamber.psi.key(),
            });
            let (gens, group, gr) = monodromy_group(&sig, &chamber.psi)?;
            report.outputs = json!({
                "order": gr.order.to_string(),
                "transitive": gr.transitive,
                "parity": if gr.all_generators_even { "even" } else { "mixed" },
                "identification": gr.kind.to_string(),
                "fiber_size": gr.fiber_size,
                "generators": gens.generators.len(),
                "point_stabilizer_order": group.point_stabilizer_order().to_string(),
            });
        }
        Command::Commutator { sig, i, j } => {
            let sig = sig.parse()?;
            let p = sig.num_poles();
            report.command = "commutator".into();
            let si = PoleSubset::parse(p, i)?;
            let sj = PoleSubset::parse(p, j)?;
            report.inputs = json!({
                "a": sig.zero_order(), "b": sig.pole_orders(),
                "i": si.to_string(), "j": sj.to_string(),
            });
            let r = commutator_structure(&sig, &si, &sj)?;
            let fiber = enumerate_fiber(&sig, &r.chamber.psi)?;
            let gi = isoresidual::monodromy::meridian_on(&fiber, &si);
            let gj = isoresidual::monodromy::meridian_on(&fiber, &sj);
            report.outputs = json!({
                "pair": format!("{:?}", r.kind),
                "chamber": r.chamber.psi.key(),
                "commutator": commutator(&gi, &gj).cycle_notation(),
                "observed": format!("{:?}", r.observed),
                "predicted": format!("{:?}", r.predicted),
            });
        }
        Command::Classes(sig_args) => {
            let sig = sig_args.parse()?;
            report.command = "classes".into();
            report.inputs = json!({"a": sig.zero_order(), "b": sig.pole_orders()});
            let tc = topological_class_partition(&sig)?;
            report.outputs = json!({
                "k": tc.k,
                "fiber_size": tc.fiber_size,
                "base": tc.base_psi.key(),
                "classes": tc.classes,
                "shift_on_classes": tc.shift.cycle_notation(),
            });
        }
        Command::Verify { suite } => {
            report.command = "verify".into();
            let suite = match suite.as_str() {
                "quick" => Suite::Quick,
                "full" => Suite::Full,
                other => return Err(Error::Parse(format!("suite `{other}`"))),
            };
            report.inputs = json!({"suite": format!("{suite:?}")});
            let checks: Vec<Check> = run_suite(suite, cli.threads, cli.seed);
            let passed = checks.iter().filter(|c| c.pass).count();
            report.outputs = json!({"passed": passed, "total": checks.len()});
            report.checks = checks;
        }
    }
    Ok(())
}
