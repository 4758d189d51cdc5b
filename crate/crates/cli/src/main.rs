//! `starforge`: construct and verify star products from JSON inputs.
//!
//! Exit status is 0 on success or a passed check, 1 on a failed check and
//! 2 on any input error.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use starforge::algebra::{format_rational, Exponent, NuSeries, Poly, Scalar};
use starforge::berezin::{disk_asymptotic, disk_compose, DiskSymbol};
use starforge::fedosov::{fedosov_star, FedosovInput};
use starforge::formats::{DiskSymbolJson, FedosovJson, LieJson, MultiDiffOpJson, NuSeriesJson, PoissonJson, PolyJson};
use starforge::gutt::{gutt_product, LieAlgebraData};
use starforge::moyal::{moyal_product, ConstantPoisson};
use starforge::polydiff::{MultiDiffOp, OpSeries, StarProduct};
use starforge::reduction::ReductionSetup;
use starforge::symmetry::{covariance_defect, derivation_defect, strong_invariance_defect, twist_cocycle_defect, udf_star, MomentMapData, TensorElement};

use input::{load, load_poly, rational, AssocInput, DerivationInput, InputError, MomentInput, ReductionInput, TwistInput};
use report::{BerezinReport, CheckReport, Defect, ProductReport, Provenance, Rendered};

#[derive(Parser, Debug)]
#[command(name = "starforge", version, about = "Exact construction and verification of formal star products")]
struct Cli {
    /// Truncation order N in ν.
    #[arg(long, global = true, default_value_t = 3)]
    order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized property sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Degree bound of the monomial test basis.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Assoc,
    Derivation,
    StrongInvariance,
    Covariance,
    Twist,
}

impl CheckKind {
    fn name(self) -> &'static str {
        match self {
            CheckKind::Assoc => "assoc",
            CheckKind::Derivation => "derivation",
            CheckKind::StrongInvariance => "strong-invariance",
            CheckKind::Covariance => "covariance",
            CheckKind::Twist => "twist",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moyal product for a constant Poisson tensor.
    Moyal {
        #[arg(long)]
        poisson: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Gutt product on the dual of a Lie algebra.
    Gutt {
        #[arg(long)]
        lie: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Fedosov product from a symplectic connection and a series of 2-forms.
    Fedosov {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Reduced product from a moment-map setup.
    Reduce {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Exact composition of disk symbols, optionally expanded in 1/κ.
    Berezin {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        expand: Option<usize>,
    },
    /// Runs one of the structural checks.
    Check {
        #[arg(long, value_enum)]
        kind: CheckKind,
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Json => print!("{}", r.json),
                Format::Pretty => print!("{}", r.pretty),
            }
            if r.passed {
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

fn product_report(op: &str, construction: &str, order: usize, s: &NuSeries) -> Rendered {
    let r = ProductReport { provenance: Provenance::new(op, construction, order), result: s.into() };
    Rendered::product(&r, s)
}

fn run(cli: &Cli) -> Result<Rendered, InputError> {
    let n = cli.order;
    match &cli.command {
        Command::Moyal { poisson, left, right } => {
            let pj: PoissonJson = load(poisson)?;
            let p = ConstantPoisson::try_from(&pj).map_err(|e| InputError::from(e).in_file(poisson))?;
            let u = load_poly(left, p.vars())?;
            let v = load_poly(right, p.vars())?;
            Ok(product_report("moyal", "Moyal product", n, &moyal_product(&u, &v, &p, n)?))
        }
        Command::Gutt { lie, left, right } => {
            let lj: LieJson = load(lie)?;
            let g = LieAlgebraData::try_from(&lj).map_err(|e| InputError::from(e).in_file(lie))?;
            let u = load_poly(left, g.vars())?;
            let v = load_poly(right, g.vars())?;
            Ok(product_report("gutt", "Gutt product", n, &gutt_product(&u, &v, &g, n)?))
        }
        Command::Fedosov { input, left, right } => {
            let fj: FedosovJson = load(input)?;
            let f = FedosovInput::try_from(&fj).map_err(|e| InputError::from(e).in_file(input))?;
            let u = load_poly(left, f.vars())?;
            let v = load_poly(right, f.vars())?;
            Ok(product_report("fedosov", "Fedosov product", n, &fedosov_star(&f, &u, &v, n)?))
        }
        Command::Reduce { setup, left, right } => {
            let rj: ReductionInput = load(setup)?;
            let s = build_reduction(&rj, n).map_err(|e| e.in_file(setup))?;
            let rv = s.reduced_vars();
            let u = load_poly(left, &rv)?;
            let v = load_poly(right, &rv)?;
            let construction = format!("reduction of {}", rj.ambient.name());
            Ok(product_report("reduce", &construction, n, &s.reduced_star(&u, &v)?))
        }
        Command::Berezin { left, right, expand } => {
            let a = load_disk(left)?;
            let b = load_disk(right)?;
            let exact = disk_compose(&a, &b);
            let expansion = expand.map(|m| disk_asymptotic(&a, &b, m)).transpose()?;
            let r = BerezinReport {
                provenance: Provenance::new("berezin", "disk symbol composition", expand.unwrap_or(0)),
                result: (&exact).into(),
                expansion: expansion.as_ref().map(|e| e.iter().map(DiskSymbolJson::from).collect()),
            };
            Ok(Rendered::berezin(&r, &exact, expansion.as_deref()))
        }
        Command::Check { kind, input } => {
            let mut prov = Provenance::new("check", "", n);
            prov.max_degree = cli.max_degree;
            prov.seed = cli.seed;
            let (construction, defects) = run_check(*kind, input, n, cli).map_err(|e| e.in_file(input))?;
            prov.construction = construction;
            Ok(Rendered::check(&CheckReport::new(prov, kind.name(), defects)))
        }
    }
}

fn load_disk(path: &PathBuf) -> Result<DiskSymbol, InputError> {
    let j: DiskSymbolJson = load(path)?;
    DiskSymbol::try_from(&j).map_err(|e| InputError::from(e).in_file(path))
}

fn build_reduction(r: &ReductionInput, order: usize) -> Result<ReductionSetup, InputError> {
    let star = r.ambient.build(order)?;
    let lie = LieAlgebraData::try_from(&r.lie)?;
    Ok(ReductionSetup::new(star, lie, r.mu.clone(), r.reduced.clone(), rational(&r.kappa)?)?)
}

fn poly_value(p: &Poly) -> Value {
    serde_json::to_value(PolyJson::from(p)).expect("polynomials serialize")
}

fn series_value(s: &NuSeries) -> Value {
    serde_json::to_value(NuSeriesJson::from(s)).expect("series serialize")
}

fn op_defects(source: &str, ops: &OpSeries) -> Vec<Defect> {
    ops.first_nonzero()
        .map(|k| Defect {
            source: source.into(),
            order: k,
            witness: None,
            value: serde_json::to_value(MultiDiffOpJson::from(&ops.terms[k])).expect("operators serialize"),
            text: format!("{} nonzero operator terms", ops.terms[k].terms().len()),
        })
        .into_iter()
        .collect()
}

fn tensor_value(t: &TensorElement, k: u32) -> Value {
    let terms: Vec<Value> = t
        .at_order(k)
        .terms()
        .iter()
        .map(|((words, _), c)| json!({"words": words, "coeff": format_rational(c)}))
        .collect();
    Value::Array(terms)
}

/// Random polynomials with small integer coefficients, for sampled sweeps.
fn random_poly(rng: &mut ChaCha8Rng, s: &StarProduct, max_degree: u32) -> Poly {
    let vars = s.vars().clone();
    let mut p = Poly::zero(vars.clone());
    for _ in 0..rng.gen_range(1..=3) {
        let mut e: Exponent = vec![0; vars.len()];
        let mut budget = rng.gen_range(0..=max_degree);
        while budget > 0 && !vars.is_empty() {
            e[rng.gen_range(0..vars.len())] += 1;
            budget -= 1;
        }
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            p.add_term(e, Scalar::from(starforge::algebra::int(c)));
        }
    }
    p
}

fn run_check(kind: CheckKind, path: &PathBuf, n: usize, cli: &Cli) -> Result<(String, Vec<Defect>), InputError> {
    match kind {
        CheckKind::Assoc => {
            let inp: AssocInput = load(path)?;
            let s = inp.star.build(n)?;
            let mut defects = op_defects("maurer-cartan", &s.maurer_cartan_defect());
            let d = cli.max_degree.unwrap_or(n as u32 + 2 * s.max_operator_order());
            if let Some(t) = s.triple_defect(d) {
                defects.push(Defect {
                    source: "triple".into(),
                    order: t.order,
                    witness: Some(Value::Array(t.args.iter().map(poly_value).collect())),
                    value: poly_value(&t.value),
                    text: format!("({}, {}, {}) ↦ {}", t.args[0], t.args[1], t.args[2], t.value),
                });
            }
            if let Some(seed) = cli.seed {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..16 {
                    let args: Vec<Poly> = (0..3).map(|_| random_poly(&mut rng, &s, d.min(3))).collect();
                    let a = s.associator(&args[0], &args[1], &args[2]);
                    if let Some(k) = a.first_nonzero() {
                        defects.push(Defect {
                            source: "random".into(),
                            order: k,
                            witness: Some(Value::Array(args.iter().map(poly_value).collect())),
                            value: poly_value(a.coeff(k)),
                            text: format!("({}, {}, {}) ↦ {}", args[0], args[1], args[2], a.coeff(k)),
                        });
                        break;
                    }
                }
            }
            Ok((inp.star.name().into(), defects))
        }
        CheckKind::Derivation => {
            let inp: DerivationInput = load(path)?;
            let s = inp.star.build(n)?;
            let x = MultiDiffOp::try_from(&inp.field)?;
            Ok((inp.star.name().into(), op_defects("derivation", &derivation_defect(&s, &x)?)))
        }
        CheckKind::StrongInvariance | CheckKind::Covariance => {
            let inp: MomentInput = load(path)?;
            let s = inp.star.build(n)?;
            let lie = LieAlgebraData::try_from(&inp.lie)?;
            let j = inp.moment_map.iter().map(Poly::try_from).collect::<Result<Vec<_>, _>>()?;
            let m = MomentMapData::new(lie, j)?;
            let defects = if kind == CheckKind::Covariance {
                covariance_defect(&s, &m)?
                    .into_iter()
                    .map(|((a, b), d)| {
                        let k = d.first_nonzero().expect("listed defects are nonzero");
                        Defect {
                            source: format!("J_{a}, J_{b}"),
                            order: k,
                            witness: Some(json!([a, b])),
                            value: series_value(&d),
                            text: format!("{}", d.coeff(k)),
                        }
                    })
                    .collect()
            } else {
                let d = cli.max_degree.unwrap_or(3);
                strong_invariance_defect(&s, &m, d)?
                    .into_iter()
                    .map(|(a, u, d)| {
                        let k = d.first_nonzero().expect("listed defects are nonzero");
                        Defect {
                            source: format!("J_{a}"),
                            order: k,
                            witness: Some(json!({"component": a, "argument": poly_value(&u)})),
                            value: series_value(&d),
                            text: format!("u = {u}: {}", d.coeff(k)),
                        }
                    })
                    .collect()
            };
            Ok((inp.star.name().into(), defects))
        }
        CheckKind::Twist => {
            let inp: TwistInput = load(path)?;
            let (f, action) = inp.build(n as u32)?;
            let defect = twist_cocycle_defect(&f);
            let mut defects = Vec::new();
            for (source, t) in [("cocycle", &defect.cocycle), ("left counit", &defect.left_counit), ("right counit", &defect.right_counit)] {
                if let Some(k) = t.first_nonzero() {
                    defects.push(Defect {
                        source: source.into(),
                        order: k as usize,
                        witness: None,
                        value: tensor_value(t, k),
                        text: format!("{} terms", t.at_order(k).terms().len()),
                    });
                }
            }
            if !action.is_empty() {
                let s = udf_star(&f, &action)?;
                defects.extend(op_defects("udf maurer-cartan", &s.maurer_cartan_defect()));
            }
            Ok(("twist".into(), defects))
        }
    }
}
