mod problem;

use clap::Parser;
use nilform::barlet::{barlet_generators, completeness_check, noetherian_operators};
use nilform::homalg::{cm_test, ext_module, free_resolution, minimalize};
use nilform::ideal::Ideal;
use nilform::kaehler::{nullstellensatz_exponent, oz_generators, strong_forms};
use nilform::pairing::{duality_report, generic_injectivity, t_matrix};
use nilform::{forms::render_label, Rat, DEFAULT_ORDER};
use problem::{parse_problem, OutputFormat, ProblemSpec};
use std::collections::BTreeMap;
use std::process::ExitCode;

/// Exact invariants of non-reduced subspaces with smooth reduction w = 0:
/// differential modules, resolutions, Ext, Barlet-sheaf generators,
/// Noetherian operators, and duality pairings.
#[derive(Parser, Debug)]
#[command(name = "nilform", version)]
struct Args {
    /// Problem file (ring/ideal/options)
    #[arg(long)]
    input: String,

    /// Command: resolve | ext | cm | kaehler | strong-forms | barlet |
    /// noetherian | verify | pairing | report
    #[arg(long)]
    command: String,

    /// Form degree p (overrides the file option)
    #[arg(long)]
    p: Option<usize>,

    /// Output format: human | machine
    #[arg(long)]
    format: Option<String>,

    /// Seed for the randomized verification harness
    #[arg(long)]
    seed: Option<u64>,

    /// Number of randomized trials
    #[arg(long)]
    trials: Option<usize>,

    /// Resolution length cap
    #[arg(long = "max-len")]
    max_len: Option<usize>,
}

type Tree = BTreeMap<String, String>;

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return input_error(format!("cannot read {}: {e}", args.input)),
    };
    let mut spec = match parse_problem(&text) {
        Ok(s) => s,
        Err(d) => return input_error(d),
    };
    if let Some(p) = args.p {
        spec.p = vec![p];
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    if let Some(t) = args.trials {
        spec.trials = t;
    }
    if let Some(l) = args.max_len {
        spec.max_len = Some(l);
    }
    if let Some(f) = &args.format {
        spec.format = match f.as_str() {
            "human" => OutputFormat::Human,
            "machine" => OutputFormat::Machine,
            other => return input_error(format!("unknown format `{other}`")),
        };
    }
    let ideal = match spec.ideal() {
        Ok(i) => i,
        Err(d) => return input_error(d),
    };
    let mut tree = Tree::new();
    tree.insert("input.generators".into(), spec.generators.len().to_string());
    tree.insert("input.n".into(), spec.zvars.len().to_string());
    tree.insert("input.kappa".into(), spec.wvars.len().to_string());
    let mut failed_verification = false;
    for &p in &spec.p.clone() {
        let prefix = if spec.p.len() > 1 {
            format!("p{p}.")
        } else {
            String::new()
        };
        match run(&args.command, &spec, &ideal, p) {
            Ok(CommandResult {
                tree: sub,
                verification_failed,
            }) => {
                failed_verification |= verification_failed;
                for (k, v) in sub {
                    tree.insert(format!("{prefix}{k}"), v);
                }
            }
            Err(msg) => return input_error(msg),
        }
    }
    emit(&tree, spec.format, &args.command);
    if failed_verification {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

struct CommandResult {
    tree: Tree,
    verification_failed: bool,
}

fn ok(tree: Tree) -> Result<CommandResult, String> {
    Ok(CommandResult {
        tree,
        verification_failed: false,
    })
}

fn run(
    command: &str,
    spec: &ProblemSpec,
    ideal: &Ideal<Rat>,
    p: usize,
) -> Result<CommandResult, String> {
    let ord = DEFAULT_ORDER;
    let ring = ideal.ring().clone();
    let mut tree = Tree::new();
    match command {
        "resolve" => {
            let strong = strong_forms(ideal, p, ord).map_err(|e| e.to_string())?;
            let max_len = spec.max_len.unwrap_or(ring.nvars() + 2);
            let res = minimalize(&free_resolution(&strong.forms.module(), max_len, ord));
            tree.insert("resolution.length".into(), res.length().to_string());
            tree.insert("resolution.complete".into(), res.complete.to_string());
            tree.insert("resolution.minimal".into(), res.minimal.to_string());
            tree.insert(
                "resolution.betti".into(),
                format!(
                    "[{}]",
                    res.ranks()
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            );
            ok(tree)
        }
        "ext" => {
            let strong = strong_forms(ideal, p, ord).map_err(|e| e.to_string())?;
            let res = minimalize(&free_resolution(
                &strong.forms.module(),
                ring.nvars() + 2,
                ord,
            ));
            let kappa = strong.kappa;
            for k in kappa..=res.length() {
                let e = ext_module(&res, k, ord);
                tree.insert(format!("ext.vanishes.{k}"), e.is_zero.to_string());
            }
            tree.insert("kappa".into(), kappa.to_string());
            ok(tree)
        }
        "cm" => {
            let strong = strong_forms(ideal, p, ord).map_err(|e| e.to_string())?;
            let cert = cm_test(&strong.forms.module(), ord).map_err(|e| e.to_string())?;
            tree.insert("cm".into(), cert.cohen_macaulay.to_string());
            tree.insert("cm.length".into(), cert.resolution_length.to_string());
            tree.insert("cm.kappa".into(), cert.kappa.to_string());
            ok(tree)
        }
        "kaehler" => {
            let set = oz_generators(ideal, p, ord).map_err(|e| e.to_string())?;
            let m = nullstellensatz_exponent(ideal, ord).map_err(|e| e.to_string())?;
            tree.insert("oz.nu".into(), set.nu.to_string());
            tree.insert("oz.free".into(), set.free.to_string());
            tree.insert("nullstellensatz.m".into(), m.to_string());
            for (i, g) in set.generators.iter().enumerate() {
                tree.insert(format!("oz.gen.{i}"), render_oz(&ring, g));
            }
            ok(tree)
        }
        "strong-forms" => {
            let strong = strong_forms(ideal, p, ord).map_err(|e| e.to_string())?;
            tree.insert("pure".into(), strong.purity.pure.to_string());
            tree.insert("kappa".into(), strong.kappa.to_string());
            tree.insert(
                "torsion.count".into(),
                strong.torsion_gens.len().to_string(),
            );
            for (i, t) in strong.torsion_gens.iter().enumerate() {
                let parts: Vec<String> = t
                    .iter()
                    .map(|(c, q)| {
                        format!(
                            "({}) * {}",
                            q.render(&ring, ord),
                            render_label(&ring, strong.forms.basis.label(c))
                        )
                    })
                    .collect();
                tree.insert(format!("torsion.gen.{i}"), parts.join(" + "));
            }
            ok(tree)
        }
        "barlet" => {
            let data = barlet_generators(ideal, p, ord).map_err(|e| e.to_string())?;
            tree.insert("ba.count".into(), data.generators.len().to_string());
            tree.insert("ba.m".into(), data.m_nss.to_string());
            for (i, g) in data.generators.iter().enumerate() {
                tree.insert(format!("ba.gen.{i}"), g.render(ord));
            }
            ok(tree)
        }
        "noetherian" => {
            let data = barlet_generators(ideal, p, ord).map_err(|e| e.to_string())?;
            let ops = noetherian_operators(&data);
            tree.insert("noetherian.count".into(), ops.len().to_string());
            tree.insert("noetherian.order_bound".into(), data.m_op.to_string());
            for (i, o) in ops.iter().enumerate() {
                let alpha = o
                    .alpha
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                tree.insert(
                    format!("noetherian.op.{i}"),
                    format!("j={} alpha=({alpha}): {}", o.gen_index, o.op.render(ord)),
                );
            }
            ok(tree)
        }
        "verify" => {
            let data = barlet_generators(ideal, p, ord).map_err(|e| e.to_string())?;
            let ops = noetherian_operators(&data);
            let nonmember_trials = spec.trials.div_ceil(4).max(1);
            let rep =
                completeness_check(&data, &ops, spec.trials, nonmember_trials, spec.seed, ord);
            tree.insert("verify.passed".into(), rep.passed().to_string());
            tree.insert(
                "verify.trials.members".into(),
                rep.trials_members.to_string(),
            );
            tree.insert(
                "verify.trials.nonmembers".into(),
                rep.trials_nonmembers.to_string(),
            );
            tree.insert(
                "verify.failures.members".into(),
                rep.member_failures.len().to_string(),
            );
            tree.insert(
                "verify.failures.nonmembers".into(),
                rep.nonmember_failures.len().to_string(),
            );
            Ok(CommandResult {
                verification_failed: !rep.passed(),
                tree,
            })
        }
        "pairing" => {
            let data = barlet_generators(ideal, p, ord).map_err(|e| e.to_string())?;
            let oz = oz_generators(ideal, p, ord).map_err(|e| e.to_string())?;
            let t = t_matrix(&data, &oz).map_err(|e| e.to_string())?;
            let v = generic_injectivity(&t, ord);
            tree.insert("pairing.rows".into(), t.nrows().to_string());
            tree.insert("pairing.cols".into(), t.ncols().to_string());
            tree.insert("pairing.rank".into(), v.rank.to_string());
            tree.insert("pairing.injective".into(), v.injective.to_string());
            ok(tree)
        }
        "report" => {
            let rep =
                duality_report(ideal, p, spec.trials, spec.seed, ord).map_err(|e| e.to_string())?;
            let failed = !rep.completeness.passed() || !rep.consistent;
            Ok(CommandResult {
                tree: rep.tree(ord),
                verification_failed: failed,
            })
        }
        other => Err(format!("unknown command `{other}`")),
    }
}

fn render_oz(ring: &nilform::Ring, g: &nilform::kaehler::OzGenerator) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, &a) in g.alpha.iter().enumerate() {
        if a == 1 {
            parts.push(ring.wvar_names()[k].clone());
        } else if a > 1 {
            parts.push(format!("{}^{a}", ring.wvar_names()[k]));
        }
    }
    let label = render_label(ring, g.label);
    if parts.is_empty() {
        label
    } else if label == "1" {
        parts.join("*")
    } else {
        format!("{} * {}", parts.join("*"), label)
    }
}

fn emit(tree: &Tree, format: OutputFormat, command: &str) {
    match format {
        OutputFormat::Machine => {
            for (k, v) in tree {
                println!("{k} = {v}");
            }
        }
        OutputFormat::Human => {
            println!("nilform {command}");
            println!("{}", "-".repeat(40));
            for (k, v) in tree {
                println!("  {k:<32} {v}");
            }
        }
    }
}
