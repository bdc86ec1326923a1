//! Command-line front end: reads a JSON record, runs a verification pipeline
//! and emits a human summary plus an optional structured report.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bialgebroid::check_morphism;
use crate::error::{Error, Result};
use crate::exterior::Frame;
use crate::extension::PeelOrder;
use crate::filippov::{check_alternating, check_fundamental_identity};
use crate::io;
use crate::poly::default_names;
use crate::report::{Verdict, VerificationReport, Witness};
use crate::sample::CheckConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Alternation and fundamental identity of an n-Lie algebra table.
    CheckNlie,
    /// Nambu-Poisson axioms of a multivector field.
    CheckNambu,
    /// Evaluate the graded extension of a bracket on multivector arguments.
    ExtendBracket,
    /// Bracket of 1-forms induced by a Nambu tensor.
    FormBracket,
    /// Linearity clauses of a Nambu structure on a vector bundle.
    CheckLinear,
    /// Dual algebroid induced by a linear Nambu structure.
    InduceDual,
    /// Weak and strong Lie-Filippov bialgebroid axioms.
    CheckBialgebroid,
    /// Nambu-Poisson tensor induced on the base of a bialgebroid.
    InduceBase,
    /// Morphism of Lie-Filippov bialgebroids.
    CheckMorphism,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckNlie => "check-nlie",
            Command::CheckNambu => "check-nambu",
            Command::ExtendBracket => "extend-bracket",
            Command::FormBracket => "form-bracket",
            Command::CheckLinear => "check-linear",
            Command::InduceDual => "induce-dual",
            Command::CheckBialgebroid => "check-bialgebroid",
            Command::InduceBase => "induce-base",
            Command::CheckMorphism => "check-morphism",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "nambu", version, about = "Exact verification of n-ary bracket structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON input record.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Polynomial degree bound for exhaustive monomial families.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree_bound: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Size of each randomized family.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Write the structured JSON report here.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub degree_bound: u32,
    pub samples: u64,
    pub overall: Verdict,
    pub records: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("[{}] {}\n", r.clause, r.summary()));
        }
        if let Some(Value::Object(o)) = &self.output {
            if let Some(Value::String(s)) = o.get("rendered") {
                out.push_str(&format!("output: {s}\n"));
            }
        }
        let verdict = match self.overall {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        };
        out.push_str(&format!("overall: {verdict}\n"));
        out
    }
}

fn report(cli: &Cli, records: Vec<VerificationReport>, output: Option<Value>) -> Report {
    let overall = if records.iter().all(VerificationReport::passed) { Verdict::Pass } else { Verdict::Fail };
    Report {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cli.seed,
        degree_bound: cli.degree_bound,
        samples: cli.samples,
        overall,
        records,
        output,
    }
}

/// Runs a job on `text`; `Err` means malformed input (exit code 2).
pub fn run(cli: &Cli, text: &str) -> Result<Report> {
    let cfg = CheckConfig { degree_bound: cli.degree_bound, seed: cli.seed, samples: cli.samples as usize };
    let (records, output) = match cli.command {
        Command::CheckNlie => {
            let sc = io::structure_constants(&io::from_json(text)?, "$")?;
            (vec![check_alternating(&sc), check_fundamental_identity(&sc)], None)
        }
        Command::CheckNambu => {
            let t = io::tensor(&io::from_json(text)?, "$")?;
            (t.check_nambu_poisson(&cfg), None)
        }
        Command::ExtendBracket => {
            let rec: io::ExtendRecord = io::from_json(text)?;
            let gb = io::graded_bracket(&rec.bracket, "$.bracket")?;
            let names = default_names(gb.frame().base_dim);
            let args = rec
                .arguments
                .iter()
                .enumerate()
                .map(|(k, a)| io::multivector(a, gb.frame(), &names, &format!("$.arguments[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let value = gb.extend(&args)?;
            let mut witness = None;
            for order in [PeelOrder::LeftmostFirst, PeelOrder::RightmostFirst] {
                let other = gb.extend_with(&args, order)?;
                let d = value.sub(&other);
                if witness.is_none() && !d.is_zero() {
                    witness = Some(Witness::new(args.iter().map(|a| a.render()), d.render()));
                }
            }
            let rec = VerificationReport::new("confluence", "extension-confluence", "the given arguments, three peeling orders", 1, witness);
            let out = json!({ "value": io::multivector_record(&value), "rendered": value.render() });
            (vec![rec], Some(out))
        }
        Command::FormBracket => {
            let rec: io::FormBracketRecord = io::from_json(text)?;
            let t = io::tensor(&rec.tensor, "$.tensor")?;
            let m = t.base_dim();
            let names = default_names(m);
            let forms = rec
                .forms
                .iter()
                .enumerate()
                .map(|(k, a)| io::multivector(a, Frame::cotangent(m), &names, &format!("$.forms[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let (lhs, rhs) = t.form_bracket_expressions(&forms)?;
            let d = lhs.sub(&rhs);
            let witness = (!d.is_zero()).then(|| Witness::new(forms.iter().map(|a| a.render()), d.render()));
            let rec = VerificationReport::new("form-bracket-expressions", "form-bracket-expressions", "the given 1-forms", 1, witness);
            let out = json!({ "value": io::multivector_record(&lhs), "rendered": lhs.render() });
            (vec![rec], Some(out))
        }
        Command::CheckLinear => {
            let ld = io::linear(&io::from_json(text)?)?;
            (ld.check_linear(&cfg), None)
        }
        Command::InduceDual => {
            let ld = io::linear(&io::from_json(text)?)?;
            let sc = ld.induce_dual_bracket()?;
            let anchor = ld.induce_dual_anchor()?;
            let records = ld.verify_dual_algebroid(&cfg)?;
            let out = json!({
                "bracket": io::structure_constants_record(&sc),
                "anchor": io::anchor_record(&anchor),
            });
            (records, Some(out))
        }
        Command::CheckBialgebroid => {
            let bd = io::bialgebroid(&io::from_json(text)?, "$")?;
            let mut records = bd.check_weak(&cfg);
            records.extend(bd.check_strong_compatibility(&cfg));
            records.push(bd.check_exact_bracket(&cfg));
            (records, None)
        }
        Command::InduceBase => {
            let bd = io::bialgebroid(&io::from_json(text)?, "$")?;
            match bd.induce_base_nambu(&cfg) {
                Ok((t, mut records)) => {
                    records.extend(bd.check_anchor_morphism(&t, &cfg));
                    let out = json!({ "tensor": io::tensor_record(&t), "rendered": t.tensor().render() });
                    (records, Some(out))
                }
                Err(Error::Verification(r)) => (vec![*r], None),
                Err(e) => return Err(e),
            }
        }
        Command::CheckMorphism => {
            let (src, dst, f) = io::morphism(&io::from_json(text)?)?;
            (check_morphism(&src, &dst, &f, &cfg)?, None)
        }
    };
    Ok(report(cli, records, output))
}

/// Entry point; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let Some(path) = cli.input.clone() else {
        eprintln!("error: --input <path> is required");
        return 2;
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return 2;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return 2;
        }
    };
    let result = pool.install(|| run(&cli, &text));
    match result {
        Ok(rep) => {
            print!("{}", rep.human());
            if let Some(out) = &cli.report {
                if let Err(e) = std::fs::write(out, rep.to_json()) {
                    eprintln!("error: cannot write {}: {e}", out.display());
                    return 2;
                }
            }
            rep.exit_code()
        }
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(command: Command) -> Cli {
        Cli { command, input: None, degree_bound: 2, seed: 0, samples: 10, workers: None, report: None }
    }

    #[test]
    fn flags_parse() {
        let c = Cli::try_parse_from(["nambu", "check-nambu", "--input", "t.json", "--degree-bound", "2", "--workers", "4"]).unwrap();
        assert_eq!(c.command, Command::CheckNambu);
        assert_eq!((c.degree_bound, c.seed, c.samples, c.workers), (2, 0, 200, Some(4)));
        assert!(Cli::try_parse_from(["nambu", "check-nambu", "--degree-bound", "0"]).is_err());
        assert!(Cli::try_parse_from(["nambu", "check-nambu", "--samples", "0"]).is_err());
    }

    #[test]
    fn form_bracket_on_coordinate_forms() {
        let text = r#"{"tensor": {"base_dim": 3, "order": 3, "tensor": [{"indices": [1,2,3], "coeff": "x1"}]},
                       "forms": [[{"indices": [1], "coeff": "1"}], [{"indices": [2], "coeff": "1"}], [{"indices": [3], "coeff": "1"}]]}"#;
        let rep = run(&cli(Command::FormBracket), text).unwrap();
        assert_eq!(rep.overall, Verdict::Pass);
        // [dx1,dx2,dx3] = d(P(dx1,dx2,dx3)) = dx1
        assert_eq!(rep.output.unwrap()["rendered"], "dx1");
    }

    #[test]
    fn extend_bracket_function_slot() {
        let text = r#"{"bracket": {"frame": {"base_dim": 3, "rank": 3, "kind": "cotangent"},
                                   "generator": {"nambu_form": {"base_dim": 3, "order": 3, "tensor": [{"indices": [1,2,3], "coeff": "1"}]}},
                                   "anchor": [{"indices": [1,2], "value": ["0","0","1"]},
                                              {"indices": [1,3], "value": ["0","-1","0"]},
                                              {"indices": [2,3], "value": ["1","0","0"]}]},
                       "arguments": [[{"indices": [1], "coeff": "1"}], [{"indices": [2], "coeff": "1"}], [{"indices": [], "coeff": "x3"}]]}"#;
        let rep = run(&cli(Command::ExtendBracket), text).unwrap();
        assert_eq!(rep.overall, Verdict::Pass);
        assert_eq!(rep.output.unwrap()["rendered"], "(1)");
    }

    #[test]
    fn report_is_stable_json() {
        let text = r#"{"dim": 3, "arity": 3, "entries": [{"indices": [1,2,3], "value": ["1","0","0"]}]}"#;
        let a = run(&cli(Command::CheckNlie), text).unwrap().to_json();
        let b = run(&cli(Command::CheckNlie), text).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
    }

    #[test]
    fn wrong_record_is_an_input_error() {
        assert!(run(&cli(Command::CheckNambu), r#"{"dim": 3}"#).is_err());
    }
}
