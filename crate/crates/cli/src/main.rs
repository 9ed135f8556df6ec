use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use freeha_core::axioms::{run_suite, SuiteOptions, SuiteReport};
use freeha_core::export::{layer_dot, layer_json, point_label, LayerJson};
use freeha_core::formula::{default_var_name, parse, VarTable};
use freeha_core::kripke::{countermodel_search, Countermodel};
use freeha_core::{AnyTower, Decider, Error, GradedTower, HeytingOptions, Variety, Verdict};

/// Dual towers of free weak Heyting, pre-Heyting and Heyting algebras.
///
/// Formula syntax, loosest first: `->` (right-associative), `|`, `&`, `~`.
/// Atoms are identifiers, `0`, `1` and parenthesised formulas; `~p` means
/// `p -> 0`.
#[derive(Parser, Debug)]
#[command(name = "freeha", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Refuse to build a layer with more points than this.
    #[arg(long, global = true, env = "HEYT_MAX_LAYER_POINTS", default_value_t = 1 << 20)]
    max_layer_points: usize,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "HEYT_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a tower and report layer sizes and structural checks.
    Layers(LayersArgs),
    /// Decide validity of a formula or equality of two formulas.
    Decide(DecideArgs),
    /// Check the implication laws of a variety on a built tower.
    Axioms(AxiomsArgs),
    /// Search small Kripke models for a countermodel.
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VarietyArg {
    Wha,
    Pha,
    Ha,
}

impl From<VarietyArg> for Variety {
    fn from(v: VarietyArg) -> Variety {
        match v {
            VarietyArg::Wha => Variety::Wha,
            VarietyArg::Pha => Variety::Pha,
            VarietyArg::Ha => Variety::Ha,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct LayersArgs {
    #[arg(long, value_enum, default_value_t = VarietyArg::Ha)]
    variety: VarietyArg,
    #[arg(long, default_value_t = 1)]
    gens: usize,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include the points and covers of this layer (dot: the layer drawn).
    #[arg(long)]
    export_layer: Option<usize>,
    /// Build the Heyting tower without the admissibility filter.
    #[arg(long)]
    no_g_filter: bool,
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long, value_enum, default_value_t = VarietyArg::Ha)]
    variety: VarietyArg,
    /// Compare two formulas instead of testing one for validity.
    #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"], conflicts_with = "formula")]
    equal: Option<Vec<String>>,
    /// Generators of the free algebra (default: variables used).
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(required_unless_present = "equal")]
    formula: Option<String>,
}

#[derive(Args, Debug)]
struct AxiomsArgs {
    #[arg(long, value_enum, default_value_t = VarietyArg::Ha)]
    variety: VarietyArg,
    #[arg(long, default_value_t = 1)]
    gens: usize,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long)]
    no_g_filter: bool,
    /// Tuples drawn per law when exhaustive checking is too large.
    #[arg(long, default_value_t = SuiteOptions::default().samples)]
    samples: usize,
    #[arg(long, default_value_t = SuiteOptions::default().seed)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct OracleArgs {
    formula: String,
    #[arg(long, default_value_t = freeha_core::kripke::DEFAULT_MAX_FRAME)]
    max_size: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Outcome of a subcommand: text to print and whether the check held.
struct Outcome {
    output: String,
    ok: bool,
}

#[derive(Serialize)]
struct LayerCheck {
    layer: usize,
    surjective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    star: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axiom9: Option<bool>,
}

#[derive(Serialize)]
struct LayersReport {
    variety: Variety,
    gens: usize,
    depth: usize,
    sizes: Vec<usize>,
    surjective_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    star_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axiom9_ok: Option<bool>,
    checks: Vec<LayerCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    export: Option<LayerJson>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn check_format(format: Format, what: &str) -> Result<(), Error> {
    if format == Format::Dot {
        return Err(Error::InvalidInput(format!("{what} has no dot output")));
    }
    Ok(())
}

fn cmd_layers(g: &Global, a: &LayersArgs) -> Result<Outcome, Error> {
    let variety = Variety::from(a.variety);
    if a.no_g_filter && variety != Variety::Ha {
        return Err(Error::InvalidInput(
            "--no-g-filter only applies to --variety ha".into(),
        ));
    }
    let opts = HeytingOptions {
        cap: g.max_layer_points,
        g_filter: !a.no_g_filter,
    };
    let t = AnyTower::build(variety, a.gens, a.depth, opts)?;
    let mut checks = Vec::new();
    for k in 1..=t.depth() {
        let check = match &t {
            AnyTower::Rank1(r) => LayerCheck {
                layer: k,
                surjective: r.projection(k - 1)?.is_surjective(),
                star: None,
                axiom9: None,
            },
            AnyTower::Heyting(h) => LayerCheck {
                layer: k,
                surjective: h.root_surjective(k)?,
                star: Some(h.star_check(k)?),
                axiom9: if k < t.depth() {
                    Some(h.axiom9_check(k)?)
                } else {
                    None
                },
            },
        };
        checks.push(check);
    }
    let all = |f: fn(&LayerCheck) -> Option<bool>| -> Option<bool> {
        let vals: Vec<bool> = checks.iter().filter_map(f).collect();
        (variety == Variety::Ha).then(|| vals.iter().all(|&b| b))
    };
    let star_ok = all(|c| c.star);
    let axiom9_ok = all(|c| c.axiom9);
    let surjective_ok = checks.iter().all(|c| c.surjective);
    let ok = surjective_ok && star_ok != Some(false) && axiom9_ok != Some(false);
    let export_k = a.export_layer;
    if let Some(k) = export_k {
        t.layer(k)?;
    }

    let output = match a.format {
        Format::Dot => {
            let k = export_k.unwrap_or(t.depth());
            layer_dot(k, t.layer(k)?)
        }
        Format::Json => to_json(&LayersReport {
            variety,
            gens: a.gens,
            depth: a.depth,
            sizes: t.sizes(),
            surjective_ok,
            star_ok,
            axiom9_ok,
            checks,
            export: export_k.map(|k| layer_json(k, &t.layers()[k])),
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "variety {variety}, {} generators, depth {}",
                a.gens, a.depth
            );
            for (k, size) in t.sizes().iter().enumerate() {
                let _ = write!(s, "X{k}: {size} points");
                if let Some(c) = checks.iter().find(|c| c.layer == k) {
                    let _ = write!(s, ", surjective {}", c.surjective);
                    if let Some(v) = c.star {
                        let _ = write!(s, ", star {v}");
                    }
                    if let Some(v) = c.axiom9 {
                        let _ = write!(s, ", axiom9 {v}");
                    }
                }
                s.push('\n');
            }
            if let Some(k) = export_k {
                let layer = t.layer(k)?;
                for p in 0..layer.size() {
                    let _ = writeln!(s, "  {p}: {}", point_label(&layer.decode(p)));
                }
            }
            let _ = writeln!(s, "{}", if ok { "ok" } else { "FAILED" });
            s
        }
    };
    Ok(Outcome { output, ok })
}

#[derive(Serialize)]
struct DecideReport<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<String>,
    variables: &'a [String],
    rank: usize,
    verdict: &'a Verdict,
}

fn cmd_decide(g: &Global, a: &DecideArgs) -> Result<Outcome, Error> {
    check_format(a.format, "decide")?;
    let variety = Variety::from(a.variety);
    let mut table = VarTable::default();
    let (lhs, rhs) = match (&a.equal, &a.formula) {
        (Some(pair), _) => (parse(&pair[0], &mut table)?, parse(&pair[1], &mut table)?),
        (None, Some(f)) => (parse(f, &mut table)?, freeha_core::Formula::Top),
        (None, None) => return Err(Error::InvalidInput("no formula given".into())),
    };
    let gens = a.gens.unwrap_or(table.len());
    let mut decider = Decider::new(g.max_layer_points);
    let verdict = decider.decide_equal(variety, &lhs, &rhs, gens)?;
    let names = table.names();
    let show = |f: &freeha_core::Formula| f.display_with(names).to_string();
    let output = match a.format {
        Format::Json => {
            let equal = a.equal.is_some();
            to_json(&DecideReport {
                formula: (!equal).then(|| show(&lhs)),
                left: equal.then(|| show(&lhs)),
                right: equal.then(|| show(&rhs)),
                variables: names,
                rank: lhs.rank().max(rhs.rank()),
                verdict: &verdict,
            })
        }
        _ => {
            let word = match (a.equal.is_some(), verdict.holds) {
                (false, true) => "valid",
                (false, false) => "invalid",
                (true, true) => "equal",
                (true, false) => "unequal",
            };
            let mut s = format!(
                "{word} in free {variety} on {gens} generators (layer {}, {} points)\n",
                verdict.layer, verdict.layer_size
            );
            if let Some(sep) = &verdict.separation {
                let side = if sep.in_left { "left" } else { "right" };
                let _ = writeln!(
                    s,
                    "separating point {} = {} lies only in the {side} side",
                    sep.point,
                    point_label(&sep.decode)
                );
            }
            s
        }
    };
    Ok(Outcome {
        output,
        ok: verdict.holds,
    })
}

fn cmd_axioms(g: &Global, a: &AxiomsArgs) -> Result<Outcome, Error> {
    check_format(a.format, "axioms")?;
    let variety = Variety::from(a.variety);
    if a.no_g_filter && variety != Variety::Ha {
        return Err(Error::InvalidInput(
            "--no-g-filter only applies to --variety ha".into(),
        ));
    }
    let opts = HeytingOptions {
        cap: g.max_layer_points,
        g_filter: !a.no_g_filter,
    };
    let t = AnyTower::build(variety, a.gens, a.depth, opts)?;
    let report: SuiteReport = run_suite(
        &t,
        SuiteOptions {
            samples: a.samples,
            seed: a.seed,
            ..SuiteOptions::default()
        },
    )?;
    let ok = report.passed();
    let output = match a.format {
        Format::Json => to_json(&report),
        _ => {
            let mut s = String::new();
            for r in &report.results {
                let _ = writeln!(
                    s,
                    "{:<4} layer {} {:<36} {:>6} {} {}",
                    if r.violations == 0 { "ok" } else { "FAIL" },
                    r.layer,
                    r.law,
                    r.checked,
                    if r.exhaustive {
                        "exhaustive"
                    } else {
                        "sampled"
                    },
                    if r.violations == 0 {
                        String::new()
                    } else {
                        format!("({} violations)", r.violations)
                    },
                );
            }
            let _ = writeln!(
                s,
                "{}",
                if ok {
                    "all laws hold"
                } else {
                    "violations found"
                }
            );
            s
        }
    };
    Ok(Outcome { output, ok })
}

#[derive(Serialize)]
struct OracleReport<'a> {
    formula: String,
    variables: &'a [String],
    max_size: usize,
    countermodel: Option<&'a Countermodel>,
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome, Error> {
    check_format(a.format, "oracle")?;
    let mut table = VarTable::default();
    let phi = parse(&a.formula, &mut table)?;
    let found = countermodel_search(&phi, a.max_size)?;
    let names = table.names();
    let output = match a.format {
        Format::Json => to_json(&OracleReport {
            formula: phi.display_with(names).to_string(),
            variables: names,
            max_size: a.max_size,
            countermodel: found.as_ref(),
        }),
        _ => match &found {
            None => format!("no countermodel with at most {} worlds\n", a.max_size),
            Some(w) => {
                let mut s = format!(
                    "countermodel with {} worlds, failing at world {}\n",
                    w.frame.size, w.world
                );
                let _ = writeln!(
                    s,
                    "order: {}",
                    serde_json::to_string(&w.frame.leq).expect("serializes")
                );
                for (i, v) in w.valuation.iter().enumerate() {
                    let name = names.get(i).cloned().unwrap_or_else(|| default_var_name(i));
                    let _ = writeln!(s, "{name}: {v:?}");
                }
                s
            }
        },
    };
    Ok(Outcome {
        output,
        ok: found.is_none(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Layers(a) => cmd_layers(&cli.global, a),
        Command::Decide(a) => cmd_decide(&cli.global, a),
        Command::Axioms(a) => cmd_axioms(&cli.global, a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(out) => {
            print!("{}", out.output);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
