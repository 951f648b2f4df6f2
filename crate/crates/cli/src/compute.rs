//! `ssf-lab compute`: single computations on explicit operands.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Deserialize;
use ssf_lab_core::functionals::strong_coupling_gamma;
use ssf_lab_core::operator::eigenvalues;
use ssf_lab_core::ssf::{counting_function, eigenvalue_sum, integrated_ssf, ssf};
use ssf_lab_core::{FunctionalContext, HermitianOperator, Sign, Weight};

use crate::error::CliError;
use crate::scenario::zeta_trace_csv;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// ξ(·; A, A0) as `lo,hi,value` intervals.
    Ssf,
    /// ζ^(±)(λ), or a trace at breakpoints and midpoints without `--lambda`.
    Zeta,
    /// Counting functions and eigenvalue sums of A.
    Sums,
    /// Ratios g(αV)/α on α = alpha_max / 2^k.
    Gamma,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub quantity: Quantity,
    /// JSON file with any of `a0`, `a`, `v`, `weight`; flags override it.
    #[arg(long)]
    pub operands: Option<PathBuf>,
    /// Unperturbed operator as JSON rows, e.g. `[[0,0],[0,0]]`.
    #[arg(long)]
    pub a0: Option<String>,
    /// Perturbed operator; defaults to `a0 + v`.
    #[arg(long)]
    pub a: Option<String>,
    /// Perturbation; defaults to `a − a0`.
    #[arg(long)]
    pub v: Option<String>,
    /// Weight as JSON, e.g. `{"kind":"threshold","lambda0":1,"side":"minus"}`.
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, default_value = "minus")]
    pub sign: Sign,
    #[arg(long, default_value_t = 4096.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 13)]
    pub points: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Rows of real entries, or the serialized operator form.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixArg {
    Rows(Vec<Vec<f64>>),
    Operator(HermitianOperator),
}

impl MatrixArg {
    fn build(self, field: &str) -> Result<HermitianOperator, CliError> {
        match self {
            MatrixArg::Rows(rows) => HermitianOperator::from_rows(&rows).map_err(|e| CliError::Config(format!("{field}: {e}"))),
            MatrixArg::Operator(op) => Ok(op),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperandFile {
    a0: Option<MatrixArg>,
    a: Option<MatrixArg>,
    v: Option<MatrixArg>,
    weight: Option<Weight>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(field: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("--{field}: {e}")))
}

struct Operands {
    a0: Option<HermitianOperator>,
    a: Option<HermitianOperator>,
    v: Option<HermitianOperator>,
    weight: Option<Weight>,
}

fn core(e: ssf_lab_core::Error) -> CliError {
    CliError::from_core("compute", e)
}

impl Operands {
    fn load(args: &ComputeArgs) -> Result<Self, CliError> {
        let mut file = match &args.operands {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<OperandFile>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => OperandFile::default(),
        };
        for (field, flag, slot) in [("a0", &args.a0, &mut file.a0), ("a", &args.a, &mut file.a), ("v", &args.v, &mut file.v)] {
            if let Some(text) = flag {
                *slot = Some(parse_json(field, text)?);
            }
        }
        if let Some(text) = &args.weight {
            file.weight = Some(parse_json("weight", text)?);
        }
        if let Some(w) = &file.weight {
            w.validate().map_err(|e| CliError::Config(format!("weight: {e}")))?;
        }
        Ok(Operands {
            a0: file.a0.map(|m| m.build("a0")).transpose()?,
            a: file.a.map(|m| m.build("a")).transpose()?,
            v: file.v.map(|m| m.build("v")).transpose()?,
            weight: file.weight,
        })
    }

    /// `(A, A0)`, completing whichever of `a`, `a0`, `v` is missing.
    fn pair(&self) -> Result<(HermitianOperator, HermitianOperator), CliError> {
        match (&self.a, &self.a0, &self.v) {
            (Some(a), Some(a0), _) => Ok((a.clone(), a0.clone())),
            (None, Some(a0), Some(v)) => Ok((a0.try_add(v).map_err(core)?, a0.clone())),
            (Some(a), None, Some(v)) => Ok((a.clone(), a.try_sub(v).map_err(core)?)),
            _ => Err(CliError::Config("need two of --a0, --a, --v".into())),
        }
    }

    fn perturbation(&self) -> Result<(HermitianOperator, HermitianOperator), CliError> {
        let (a, a0) = self.pair()?;
        let v = match &self.v {
            Some(v) => v.clone(),
            None => a.try_sub(&a0).map_err(core)?,
        };
        Ok((a0, v))
    }
}

pub fn compute(args: &ComputeArgs) -> Result<String, CliError> {
    let ops = Operands::load(args)?;
    let mut out = String::new();
    match args.quantity {
        Quantity::Ssf => {
            let (a, a0) = ops.pair()?;
            let xi = ssf(&a, &a0).map_err(core)?;
            out.push_str("lo,hi,value\n");
            for (lo, hi, v) in xi.intervals() {
                let _ = writeln!(out, "{lo:?},{hi:?},{v:?}");
            }
        }
        Quantity::Zeta => {
            let (a, a0) = ops.pair()?;
            let xi = ssf(&a, &a0).map_err(core)?;
            match args.lambda {
                Some(l) => {
                    let _ = writeln!(out, "lambda,zeta_{}", args.sign);
                    let _ = writeln!(out, "{l:?},{:?}", integrated_ssf(&xi, l, args.sign));
                }
                None => out = zeta_trace_csv(&xi),
            }
        }
        Quantity::Sums => {
            let a = match (&ops.a, &ops.v) {
                (Some(a), _) | (None, Some(a)) => a.clone(),
                _ => return Err(CliError::Config("sums needs --a or --v".into())),
            };
            let spec = eigenvalues(&a);
            let points = match args.lambda {
                Some(l) => vec![l],
                None => {
                    let v = spec.values();
                    let mut p: Vec<f64> = v.iter().flat_map(|&x| [x - 1.0, x]).chain([v[v.len() - 1] + 1.0]).collect();
                    p.sort_by(f64::total_cmp);
                    p.dedup();
                    p
                }
            };
            out.push_str("lambda,count_minus,sum_minus,count_plus,sum_plus\n");
            for l in points {
                let _ = writeln!(
                    out,
                    "{l:?},{},{:?},{},{:?}",
                    counting_function(&spec, l, Sign::Minus),
                    eigenvalue_sum(&spec, l, Sign::Minus),
                    counting_function(&spec, l, Sign::Plus),
                    eigenvalue_sum(&spec, l, Sign::Plus)
                );
            }
        }
        Quantity::Gamma => {
            let (a0, v) = ops.perturbation()?;
            let weight = ops.weight.clone().ok_or_else(|| CliError::Config("gamma needs --weight".into()))?;
            let ctx = FunctionalContext::new(a0, weight);
            let sc = strong_coupling_gamma(&ctx, &v, args.alpha_max, args.points).map_err(core)?;
            out = sc.curve.to_csv();
        }
    }
    Ok(out)
}
