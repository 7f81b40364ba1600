mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use graphoid::connectivity::{scheme_disconnection, yw_disconnection, Disconnection};
use graphoid::graph::{boundary_dag, d_separated, factorize, to_dot};
use graphoid::independence::{check_axiom, closure, extract_i, extract_i_prime, holds_i, holds_i_prime};
use graphoid::model::GcppViolation;
use graphoid::qcpp::{gcpp_from_sqcpp, infer, Status};
use graphoid::sufficiency::{check_cancellation_combine, check_conditional_coherence, check_weak_cc, sufficiency_report, DependencyViolation, FdCondition, Tier};
use graphoid::{Axiom, GcppTable, IndependenceStructure, Scheme};
use input::ReadOptions;
use output as out;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "graphoid", version, about = "Independence structures of generalised conditional probability tables")]
struct Cli {
    /// Snap binary floats in input files to fractions with at most this denominator
    #[arg(long, global = true, value_name = "DENOMINATOR")]
    snap: Option<u64>,

    /// Rescale joints into normal form before extending them
    #[arg(long, global = true)]
    normalize: bool,

    /// Print an indented text report instead of JSON
    #[arg(long, global = true)]
    human: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// `ρ(x|yz) = ρ(x|z)` wherever defined
    I,
    /// `ρ(x|yz)` constant over `y` wherever defined
    Iprime,
}

#[derive(Subcommand)]
enum Command {
    /// Check the GCPP axioms, fullness and coherence of a measure file
    Validate {
        file: PathBuf,
        /// Also write the extended table as a `gcpp` measure file
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// List an extracted independence structure, or test one triple
    Indep {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "i")]
        structure: Which,
        /// A triple "X;Z;Y" of comma-separated variable names
        #[arg(long)]
        query: Option<String>,
        /// Leave out triples with an empty side
        #[arg(long)]
        nontrivial: bool,
    },
    /// Check graphoid axioms on a measure's structure or on a structure file
    Axioms {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "i")]
        structure: Which,
        /// "all", "semigraphoid", or a comma-separated list of axiom names
        #[arg(long, default_value = "all")]
        axioms: String,
    },
    /// Rook-move connectivity of the scheme, or of one pair "Y;W;Z"
    Connect {
        file: PathBuf,
        #[arg(long)]
        pair: Option<String>,
    },
    /// Sufficient conditions for the graphoid axioms and the resulting tier
    Suff { file: PathBuf },
    /// Close a structure file under axioms
    Closure {
        file: PathBuf,
        #[arg(long, default_value = "semigraphoid")]
        axioms: String,
        #[arg(long)]
        nontrivial: bool,
    },
    /// Boundary DAG of a measure's independence structure
    Dag {
        file: PathBuf,
        /// Comma-separated variable order (default: scheme order)
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value = "i")]
        structure: Which,
        /// Print only the DOT graph
        #[arg(long)]
        dot: bool,
    },
    /// d-separation query "X;Z;Y" on a DAG file
    Dsep { file: PathBuf, query: String },
    /// Rebuild the joint from the boundary DAG's conditionals
    Factorize {
        file: PathBuf,
        #[arg(long)]
        order: Option<String>,
    },
    /// Run the qualitative inference engine on a program
    Qcpp {
        program: PathBuf,
        /// Any file with a "variables" list of {"name", "values"}
        scheme: PathBuf,
    },
}

/// A report and whether its verdict is positive.
struct Report {
    body: Value,
    ok: bool,
}

fn report(body: Value, ok: bool) -> Result<Report> {
    Ok(Report { body, ok })
}

fn max_vars() -> Result<usize> {
    match std::env::var("GRAPHOID_MAX_VARS") {
        Ok(v) => v.trim().parse().map_err(|_| anyhow::anyhow!("GRAPHOID_MAX_VARS must be a number, got {v:?}")),
        Err(_) => Ok(8),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = max_vars().and_then(|max_vars| {
        let opts = ReadOptions {
            max_vars,
            snap: cli.snap,
            normalize: cli.normalize,
        };
        run(&cli.command, &opts)
    });
    match result {
        Ok(r) => {
            if let Value::String(s) = &r.body {
                print!("{s}");
            } else if cli.human {
                print!("{}", out::human(&r.body));
            } else {
                println!("{}", serde_json::to_string_pretty(&r.body).expect("serializable"));
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn measure(path: &Path, opts: &ReadOptions) -> Result<GcppTable> {
    input::load_measure(&input::read_json(path)?, opts)
}

fn names_of(scheme: &Scheme) -> Vec<String> {
    scheme.variables().iter().map(|v| v.name.clone()).collect()
}

fn structure_of(t: &GcppTable, which: Which) -> IndependenceStructure {
    match which {
        Which::I => extract_i(t),
        Which::Iprime => extract_i_prime(t),
    }
}

fn parse_axioms(spec: &str) -> Result<Vec<Axiom>> {
    Ok(match spec.trim() {
        "all" | "graphoid" => Axiom::ALL.to_vec(),
        "semigraphoid" => Axiom::SEMIGRAPHOID.to_vec(),
        list => list.split(',').map(str::parse).collect::<Result<_, _>>()?,
    })
}

fn parse_order(scheme_names: &[String], order: Option<&str>) -> Result<Vec<usize>> {
    let Some(order) = order else {
        return Ok((0..scheme_names.len()).collect());
    };
    order
        .split(',')
        .map(str::trim)
        .map(|n| scheme_names.iter().position(|m| m == n).ok_or_else(|| anyhow::anyhow!("unknown variable {n:?} in order")))
        .collect()
}

fn run(cmd: &Command, opts: &ReadOptions) -> Result<Report> {
    match cmd {
        Command::Validate { file, emit } => validate(file, emit.as_deref(), opts),
        Command::Indep { file, structure, query, nontrivial } => {
            let t = measure(file, opts)?;
            let names = names_of(t.scheme());
            match query {
                Some(q) => {
                    let [x, z, y] = input::parse_query(&names, q)?;
                    let triple = graphoid::Triple::new(x, z, y)?;
                    let holds = match structure {
                        Which::I => holds_i(&t, triple)?,
                        Which::Iprime => holds_i_prime(&t, triple)?,
                    };
                    report(json!({ "query": out::triple(&names, triple), "holds": holds }), holds)
                }
                None => report(out::structure(&structure_of(&t, *structure), *nontrivial), true),
            }
        }
        Command::Axioms { file, structure, axioms } => {
            let doc = input::read_json(file)?;
            let s = if doc.get("triples").is_some() {
                input::load_structure(&doc, opts)?
            } else {
                structure_of(&input::load_measure(&doc, opts)?, *structure)
            };
            let mut results = Map::new();
            let mut all = true;
            for a in parse_axioms(axioms)? {
                let v = check_axiom(&s, a);
                all &= v.is_empty();
                results.insert(
                    a.name().into(),
                    json!({
                        "holds": v.is_empty(),
                        "violations": v.len(),
                        "witness": v.first().map(|w| out::violation(s.names(), w)),
                    }),
                );
            }
            report(json!({ "axioms": results, "all_hold": all }), all)
        }
        Command::Connect { file, pair } => {
            let t = measure(file, opts)?;
            let scheme = t.scheme();
            let names = names_of(scheme);
            match pair {
                Some(p) => {
                    let [y, w, z] = input::parse_query(&names, p)?;
                    let d = yw_disconnection(&t, y, w, z)?;
                    report(
                        json!({
                            "Y": out::set_names(&names, y),
                            "W": out::set_names(&names, w),
                            "Z": out::set_names(&names, z),
                            "connected": d.is_none(),
                            "witness": d.map(|d| disconnection(scheme, &d)),
                        }),
                        true,
                    )
                }
                None => {
                    let d = scheme_disconnection(&t);
                    let witness = d.as_ref().map(|d| {
                        json!({
                            "Y": out::set_names(&names, d.y),
                            "W": out::set_names(&names, d.w),
                            "Z": out::set_names(&names, d.z),
                            "split": disconnection(scheme, &d.detail),
                        })
                    });
                    report(json!({ "connected": d.is_none(), "witness": witness }), d.is_none())
                }
            }
        }
        Command::Suff { file } => suff(&measure(file, opts)?),
        Command::Closure { file, axioms, nontrivial } => {
            let s = input::load_structure(&input::read_json(file)?, opts)?;
            let axioms = parse_axioms(axioms)?;
            let c = closure(&s, &axioms);
            let mut body = out::structure(&c, *nontrivial);
            body["axioms"] = json!(axioms.iter().map(|a| a.name()).collect::<Vec<_>>());
            body["added"] = json!(c.len() - s.len());
            report(body, true)
        }
        Command::Dag { file, order, structure, dot } => {
            let t = measure(file, opts)?;
            let names = names_of(t.scheme());
            let order = parse_order(&names, order.as_deref())?;
            let b = boundary_dag(&structure_of(&t, *structure), &order)?;
            if *dot {
                return report(Value::String(to_dot(&b.dag)), true);
            }
            let parents: Map<String, Value> = (0..names.len())
                .map(|v| (names[v].clone(), json!(out::set_names(&names, b.dag.parents(v)))))
                .collect();
            let ambiguous: Map<String, Value> = b
                .ambiguous
                .iter()
                .map(|(v, bs)| (names[*v].clone(), json!(bs.iter().map(|&s| out::set_names(&names, s)).collect::<Vec<_>>())))
                .collect();
            report(
                json!({
                    "order": order.iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
                    "parents": parents,
                    "ambiguous": ambiguous,
                    "edges": b.dag.edges().iter().map(|&(p, c)| [names[p].clone(), names[c].clone()]).collect::<Vec<_>>(),
                    "dot": to_dot(&b.dag),
                }),
                true,
            )
        }
        Command::Dsep { file, query } => {
            let dag = input::load_dag(&input::read_json(file)?, opts)?;
            let [x, z, y] = input::parse_query(dag.names(), query)?;
            let sep = d_separated(&dag, x, z, y)?;
            let t = graphoid::Triple::new(x, z, y)?;
            report(json!({ "query": out::triple(dag.names(), t), "separated": sep }), sep)
        }
        Command::Factorize { file, order } => {
            let t = measure(file, opts)?;
            let scheme = t.scheme();
            let names = names_of(scheme);
            let order = parse_order(&names, order.as_deref())?;
            let dag = boundary_dag(&extract_i(&t), &order)?.dag;
            let f = factorize(&t, &dag)?;
            let cells: Vec<_> = scheme.assignments(scheme.all()).collect();
            let joint: Map<String, Value> = cells.iter().zip(&f.joint).map(|(u, p)| (out::assignment(scheme, u), out::plaus(p))).collect();
            let parents: Map<String, Value> = (0..names.len())
                .map(|v| (names[v].clone(), json!(out::set_names(&names, dag.parents(v)))))
                .collect();
            report(
                json!({
                    "exact": f.exact(),
                    "joint": joint,
                    "mismatches": f.mismatches.iter().map(|&i| out::assignment(scheme, &cells[i])).collect::<Vec<_>>(),
                    "undefined_factors": f.undefined_factors,
                    "parents": parents,
                }),
                f.exact(),
            )
        }
        Command::Qcpp { program, scheme } => {
            let scheme = input::parse_scheme(&input::read_json(scheme)?, opts)?;
            let p = input::load_program(&input::read_json(program)?, &scheme)?;
            let r = infer(&p, &scheme)?;
            let classes: Vec<Vec<String>> = r
                .sqcpp
                .classes()
                .into_iter()
                .filter(|c| c.len() > 1)
                .map(|c| c.iter().map(|e| element_key(&scheme, e)).collect())
                .collect();
            let independence = match r.status {
                Status::Consistent => Some(out::structure(&extract_i(&gcpp_from_sqcpp(&r.sqcpp)?), true)),
                _ => None,
            };
            report(
                json!({
                    "status": r.status.as_str(),
                    "classes": classes,
                    "zero_set": r.zero_set.iter().map(|a| out::assignment(&scheme, a)).collect::<Vec<_>>(),
                    "leak": r.leak.map(|e| element_key(&scheme, &e)),
                    "rounds": r.rounds,
                    "independence": independence,
                }),
                r.status == Status::Consistent,
            )
        }
    }
}

fn element_key(scheme: &Scheme, e: &graphoid::qcpp::Element) -> String {
    match e {
        graphoid::qcpp::Element::Atom(a) => out::atom(scheme, a),
        other => other.key(scheme),
    }
}

fn disconnection(scheme: &Scheme, d: &Disconnection) -> Value {
    json!({
        "z": out::assignment(scheme, &d.z),
        "components": d.components.iter().map(|c| {
            c.iter().map(|(y, w)| json!({ "y": out::assignment(scheme, y), "w": out::assignment(scheme, w) })).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

fn gcpp_violation(scheme: &Scheme, v: &GcppViolation) -> Value {
    match v {
        GcppViolation::DegenerateTop { undefined } => json!({ "rule": "top", "undefined": undefined }),
        GcppViolation::ZeroExtension { x, extension, marginal_zero } => json!({
            "rule": "zero_extension",
            "x": out::assignment(scheme, x),
            "extension": out::set_names(&names_of(scheme), *extension),
            "marginal_zero": marginal_zero,
        }),
        GcppViolation::UndefinedCondition { atom, condition_zero } => json!({
            "rule": "undefined_condition",
            "atom": out::atom(scheme, atom),
            "condition_zero": condition_zero,
        }),
    }
}

fn validate(file: &Path, emit: Option<&Path>, opts: &ReadOptions) -> Result<Report> {
    let t = measure(file, opts)?;
    let scheme = t.scheme();
    let names = names_of(scheme);
    let violations = t.validate();
    let coherence: Vec<Value> = check_conditional_coherence(&t)
        .iter()
        .map(|c| {
            json!({
                "X": out::set_names(&names, c.x_vars),
                "Y": out::set_names(&names, c.y_vars),
                "Z": out::set_names(&names, c.z_vars),
                "x": out::assignment(scheme, &c.x),
                "z": out::assignment(scheme, &c.z),
                "constant": out::plaus(&c.constant),
                "marginal": out::plaus(&c.marginal),
            })
        })
        .collect();
    if let Some(path) = emit {
        let text = serde_json::to_string_pretty(&out::table_file(&t))?;
        std::fs::write(path, text + "\n").map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }
    report(
        json!({
            "kind": t.kind().as_str(),
            "valid": violations.is_empty(),
            "violations": violations.iter().map(|v| gcpp_violation(scheme, v)).collect::<Vec<_>>(),
            "full": t.is_full(),
            "fullness_witness": t.fullness_witness().map(|a| out::atom(scheme, &a)),
            "conditional_coherence": { "holds": coherence.is_empty(), "violations": coherence },
            "weak_cc": check_weak_cc(&t),
        }),
        violations.is_empty(),
    )
}

fn dependency(scheme: &Scheme, v: &DependencyViolation) -> Value {
    let names = names_of(scheme);
    json!({
        "W": out::set_names(&names, v.w),
        "Y": out::set_names(&names, v.y),
        "X": out::set_names(&names, v.x_vars),
        "x1": out::assignment(scheme, &v.x1),
        "x2": out::assignment(scheme, &v.x2),
    })
}

fn suff(t: &GcppTable) -> Result<Report> {
    let scheme = t.scheme();
    let r = sufficiency_report(t);
    let mut conditions = Map::new();
    for (cond, v) in [(FdCondition::M, &r.m), (FdCondition::C, &r.c), (FdCondition::J, &r.j)] {
        conditions.insert(
            cond.to_string(),
            json!({ "holds": v.is_none(), "axiom": cond.axiom().name(), "witness": v.as_ref().map(|v| dependency(scheme, v)) }),
        );
    }
    conditions.insert(
        "S".into(),
        json!({
            "applicable": r.s.is_some(),
            "holds": r.holds(FdCondition::S),
            "axiom": Axiom::Intersection.name(),
            "witness": r.s.as_ref().and_then(|s| s.as_ref()).map(|v| dependency(scheme, v)),
        }),
    );
    let combine = match check_cancellation_combine(t) {
        Ok(c) => json!({ "holds": c.holds(), "globally_functional": c.globally_functional }),
        Err(graphoid::Error::NotFull) => json!({ "holds": false, "reason": "not full" }),
        Err(e) => bail!(e),
    };
    let names = names_of(scheme);
    report(
        json!({
            "full": r.full,
            "weak_cc": r.weak_cc,
            "nonzero_on_joint": r.nonzero_on_joint,
            "top_condition": { "holds": r.top_condition(), "witness": r.top_witness.as_ref().map(|a| out::assignment(scheme, a)) },
            "conditions": conditions,
            "cancellative_combination": combine,
            "tier": r.tier.as_str(),
            "guaranteed_axioms": r.tier.axioms().iter().map(|a| a.name()).collect::<Vec<_>>(),
            "cross_check": r.cross_check.iter().map(|v| out::violation(&names, v)).collect::<Vec<_>>(),
        }),
        r.tier != Tier::None && r.cross_check.is_empty(),
    )
}
