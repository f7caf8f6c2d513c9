use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ybe_core::constructors::{
    b_cg, classical_rp, hecke_to_mqybe, make_boundary_op, make_cg_op, make_qp_op, make_rp_op, make_su_op, rp_matrix_formula,
};
use ybe_core::dynamical::{dbe_residual, make_a, make_dyn_r, vertex_irf_residual, Sign, WeightBasis};
use ybe_core::exact::{identifiers, int, parse_rat, parse_ratfunc, Ctx, RatFunc};
use ybe_core::verifiers::{
    bcg_vs_rp, boundary_limit, cybe_residual, exponential_residual, formula_vs_operator, hecke_residual,
    mqybe_residual, nilpotent_residual, qybe_residual, semiclassical, similarity_check, twist_lemma,
    unitarity_residual, Report, Residual,
};
use ybe_core::{Error, FieldOp, TensorMat};

#[derive(Parser)]
#[command(name = "ybe", version, about = "Exact Cremmer-Gervais type R-matrices and their identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named matrix and print it.
    Build {
        #[arg(value_enum)]
        object: Object,
        #[command(flatten)]
        params: Params,
        /// Specialize a parameter after construction, e.g. `--at h=0`.
        #[arg(long = "at", value_name = "VAR=VALUE")]
        at: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verifier; exit 0 if the residual vanishes, 1 otherwise.
    Check {
        #[arg(value_enum)]
        check: CheckName,
        /// Matrix to test (qybe, mqybe, cybe, hecke, unitary, semiclassical).
        #[arg(long, value_enum)]
        object: Option<Object>,
        #[command(flatten)]
        params: Params,
        /// Print a machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Dynamical checks over the weight field.
    Dyn {
        #[arg(value_enum)]
        check: DynCheck,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone)]
struct Params {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, default_value = "kappa", allow_hyphen_values = true)]
    kappa: String,
    #[arg(long, default_value = "h", allow_hyphen_values = true)]
    h: String,
    #[arg(long, default_value = "p", allow_hyphen_values = true)]
    p: String,
    #[arg(long, default_value = "q", allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    sign: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Object {
    Rp,
    Su,
    RpFormula,
    ClassicalRp,
    Bcg,
    Cg,
    QModified,
    Qp,
    Boundary,
    DynR,
    #[value(name = "irf-A")]
    IrfA,
    Identity,
    IdentityPlusJunk,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckName {
    Qybe,
    Mqybe,
    Cybe,
    Hecke,
    Unitary,
    Nilpotent,
    TwistLemma,
    Semiclassical,
    Similarity,
    BoundaryLimit,
    Dbe,
    Irf,
    FormulaVsOperator,
    BcgVsRp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DynCheck {
    Dbe,
    Irf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Latex,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parsed parameters, all in one ring built from the identifiers they use.
struct Env {
    n: usize,
    ring: Ctx,
    kappa: RatFunc,
    h: RatFunc,
    p: RatFunc,
    q: RatFunc,
}

impl Env {
    fn new(params: &Params, used: &[&str]) -> CliResult<Env> {
        let texts = [("p", &params.p), ("q", &params.q), ("h", &params.h), ("kappa", &params.kappa)];
        let mut vars: Vec<String> = Vec::new();
        for (name, text) in texts {
            if !used.contains(&name) {
                continue;
            }
            for v in identifiers(text)? {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        let ring = Ctx::new(&vars);
        let parse = |name: &str, text: &str| -> CliResult<RatFunc> {
            if used.contains(&name) {
                Ok(parse_ratfunc(text, &ring)?)
            } else {
                Ok(RatFunc::zero(&ring))
            }
        };
        Ok(Env {
            n: params.n as usize,
            kappa: parse("kappa", &params.kappa)?,
            h: parse("h", &params.h)?,
            p: parse("p", &params.p)?,
            q: parse("q", &params.q)?,
            ring,
        })
    }
}

fn used_params(object: Object) -> &'static [&'static str] {
    match object {
        Object::Rp => &["h"],
        Object::Su => &["kappa"],
        Object::Cg | Object::QModified => &["p", "q"],
        Object::Qp => &["p"],
        Object::Boundary => &["p", "h"],
        _ => &[],
    }
}

fn build_matrix(object: Object, env: &Env) -> CliResult<TensorMat> {
    let n = env.n;
    let m = match object {
        Object::Rp => make_rp_op(n, &env.h)?.restrict(n)?,
        Object::Su => make_su_op(&env.kappa)?.restrict(n)?,
        Object::RpFormula => rp_matrix_formula(n)?,
        Object::ClassicalRp => classical_rp(n)?,
        Object::Bcg => b_cg(n)?,
        Object::Cg => make_cg_op(&env.p, &env.q)?.restrict(n)?,
        Object::QModified => hecke_to_mqybe(&make_cg_op(&env.p, &env.q)?.restrict(n)?, &env.q)?.0,
        Object::Qp => make_qp_op(n, &env.p)?.restrict(n)?,
        Object::Boundary => make_boundary_op(n, &env.p, &env.h)?.restrict(n)?,
        Object::DynR => make_dyn_r(&WeightBasis::new(n)?)?.matrix().clone(),
        Object::IrfA => make_a(&WeightBasis::new(n)?)?.matrix().clone(),
        Object::Identity => TensorMat::identity(n, 2, &env.ring),
        Object::IdentityPlusJunk => {
            let mut m = TensorMat::identity(n, 2, &env.ring);
            if n < 2 {
                return Err(CliError::Usage("identity-plus-junk needs n >= 2".into()));
            }
            m.add_at(&[1, 2], &[2, 1], &RatFunc::one(&env.ring))?;
            m
        }
    };
    Ok(m)
}

fn cayley_squared(n: usize, p: &RatFunc) -> CliResult<RatFunc> {
    let one = RatFunc::one(p.ctx());
    let pn = p.pow(n as i32)?;
    let a = &one - &pn;
    let b = &one + &pn;
    Ok((&a * &a).checked_div(&(&b * &b))?)
}

#[derive(Serialize)]
struct Named {
    name: String,
    #[serde(flatten)]
    report: Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

struct Outcome {
    parts: Vec<Named>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { parts: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, r: &Residual) {
        self.parts.push(Named { name: name.into(), report: r.report(), note: None });
    }

    fn note(&mut self, text: String) {
        if let Some(last) = self.parts.last_mut() {
            last.note = Some(text);
        }
    }

    fn ok(&self) -> bool {
        self.parts.iter().all(|p| p.report.zero)
    }

    fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(&self.parts).expect("plain data serializes"));
            return;
        }
        for p in &self.parts {
            match &p.report.witness {
                None => println!("{}: zero", p.name),
                Some(w) => println!("{}: nonzero at row {:?} col {:?}: {}", p.name, w.row, w.col, w.value),
            }
            if let Some(t) = &p.note {
                println!("  {t}");
            }
        }
    }
}

fn run_check(check: CheckName, object: Option<Object>, params: &Params) -> CliResult<Outcome> {
    let mut out = Outcome::new();
    let with_object = |default: Object, extra: &[&str]| -> CliResult<(Object, Env, TensorMat)> {
        let obj = object.unwrap_or(default);
        let mut used = used_params(obj).to_vec();
        used.extend_from_slice(extra);
        let env = Env::new(params, &used)?;
        let m = build_matrix(obj, &env)?;
        Ok((obj, env, m))
    };
    let n = params.n as usize;
    match check {
        CheckName::Qybe => {
            let (_, _, m) = with_object(Object::Rp, &[])?;
            out.push("qybe", &qybe_residual(&m)?);
        }
        CheckName::Mqybe => {
            let (obj, env, m) = with_object(Object::Qp, &[])?;
            let lambda = match obj {
                Object::Qp | Object::Boundary => cayley_squared(n, &env.p)?,
                Object::QModified => hecke_to_mqybe(&make_cg_op(&env.p, &env.q)?.restrict(n)?, &env.q)?.1,
                _ => RatFunc::zero(m.ring()),
            };
            out.push("mqybe", &mqybe_residual(&m, &lambda)?);
            out.note(format!("lambda = {lambda}"));
        }
        CheckName::Cybe => {
            let (_, _, m) = with_object(Object::ClassicalRp, &[])?;
            out.push("cybe", &cybe_residual(&m, &RatFunc::zero(m.ring()))?);
        }
        CheckName::Hecke => {
            let (_, env, m) = with_object(Object::Cg, &["q"])?;
            out.push("hecke", &hecke_residual(&m, &env.q)?);
        }
        CheckName::Unitary => {
            let (_, _, m) = with_object(Object::Qp, &[])?;
            out.push("unitary", &unitarity_residual(&m)?);
        }
        CheckName::Nilpotent => {
            out.push("r^2", &nilpotent_residual(n)?);
            out.push("I + kappa r - exp(kappa r)", &exponential_residual(n)?);
        }
        CheckName::TwistLemma => {
            for (name, r) in twist_lemma(FieldOp::equality_bound(n))? {
                out.push(name, &r);
            }
        }
        CheckName::Semiclassical => {
            let (_, _, m) = with_object(Object::Rp, &[])?;
            let (o0, o1) = semiclassical(&m)?;
            let id = TensorMat::identity(n, 2, o0.ring());
            out.push("order0 - I", &Residual::new(o0.sub(&id)?));
            let crp = classical_rp(n)?.reembed(o1.ring())?;
            out.push("order1 - r_p", &Residual::new(o1.sub(&crp)?));
            out.push("cybe(r_p)", &cybe_residual(&classical_rp(n)?, &RatFunc::zero(&Ctx::empty()))?);
        }
        CheckName::Similarity => out.push("similarity", &similarity_check(n, None)?),
        CheckName::BoundaryLimit => out.push("boundary-limit", &boundary_limit(n)?),
        CheckName::Dbe => dyn_check(DynCheck::Dbe, params, &mut out)?,
        CheckName::Irf => dyn_check(DynCheck::Irf, params, &mut out)?,
        CheckName::FormulaVsOperator => out.push("formula - operator", &formula_vs_operator(n)?),
        CheckName::BcgVsRp => {
            let (c, r) = bcg_vs_rp(n)?;
            out.push("phi(b_CG) - c r_p", &r);
            match c {
                Some(c) if c != int(0) => out.note(format!("c = {}", ybe_core::exact::format_rat(&c))),
                _ => {
                    return Err(CliError::Usage(format!("no nonzero scalar relates the two at n = {n}")));
                }
            }
            out.push("cybe(b_CG)", &cybe_residual(&b_cg(n)?, &RatFunc::zero(&Ctx::empty()))?);
        }
    }
    Ok(out)
}

fn dyn_check(check: DynCheck, params: &Params, out: &mut Outcome) -> CliResult<()> {
    let sign: Sign = params.sign.parse()?;
    let basis = WeightBasis::new(params.n as usize)?;
    match check {
        DynCheck::Dbe => out.push(format!("dbe (s = {sign})"), &dbe_residual(&make_dyn_r(&basis)?, sign)?),
        DynCheck::Irf => out.push(format!("vertex-irf (s = {sign})"), &vertex_irf_residual(&basis, sign)?),
    }
    Ok(())
}

fn run_build(object: Object, params: &Params, at: &[String], format: Format, out: Option<&PathBuf>) -> CliResult<()> {
    if matches!(object, Object::Identity | Object::IdentityPlusJunk) {
        return Err(CliError::Usage(format!("{object:?} is a check-only object")));
    }
    let env = Env::new(params, used_params(object))?;
    let mut m = build_matrix(object, &env)?;
    for spec in at {
        let (var, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--at expects VAR=VALUE, got `{spec}`")))?;
        m = m.specialize(var.trim(), &parse_rat(value.trim())?)?;
    }
    let text = match format {
        Format::Json => m.to_json(),
        Format::Latex => m.to_latex(),
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { object, params, at, format, out } => {
            run_build(*object, params, at, *format, out.as_ref()).map(|_| true)
        }
        Command::Check { check, object, params, json } => run_check(*check, *object, params).map(|o| {
            o.print(*json);
            o.ok()
        }),
        Command::Dyn { check, params, json } => {
            let mut o = Outcome::new();
            dyn_check(*check, params, &mut o).map(|_| {
                o.print(*json);
                o.ok()
            })
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
