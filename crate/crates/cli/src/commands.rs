use std::fs;
use std::io::Write as _;
use std::path::Path;

use amenable_core::folner::reiter::{extract_folner_from_reiter, kappa_verify, reiter_defect, KappaVerdict, ReiterFunction};
use amenable_core::folner::word_problem::{decide_mult_from_folner, BoxOracle, FolnerOracle, SearchOracle};
use amenable_core::folner::{folner_function, folner_sequence, search_folner, FolnerCertificate};
use amenable_core::harem::{CayleyBipartite, HallWitness, HaremMatchingState, RadiusPolicy};
use amenable_core::paradox::{
    build_decomposition_with_policy, check_prefix, expand_key, first_letter_prefix, ResolvedPrefix,
};
use amenable_core::rational::{self, Q};
use amenable_core::witness::{
    decide_witness_commutation, refute_witness_bounded, restrict_folner_to_subgroup, Evidence, Refutation, Verdict,
};
use amenable_core::{Budget, Error, Exhausted, FiniteSubset, GroupCode, GroupOracle, Outcome};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Command, Common, EXIT_UNKNOWN};

pub enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

pub struct Report {
    pub json: Value,
    pub text: String,
    pub exit: u8,
}

impl Report {
    fn done(json: Value, text: String) -> Self {
        Self { json, text, exit: 0 }
    }

    fn unknown(budget: Budget, e: Exhausted) -> Self {
        Self {
            json: json!({ "status": "UNKNOWN", "budget": budget.steps(), "consumed": e.consumed }),
            text: format!("UNKNOWN: budget of {} steps exhausted after {}", budget.steps(), e.consumed),
            exit: EXIT_UNKNOWN,
        }
    }

    /// A closed stdout (e.g. piping into `head`) is not an error.
    pub fn print(&self, json: bool) {
        let mut out = std::io::stdout().lock();
        let _ = if json { writeln!(out, "{}", self.json) } else { writeln!(out, "{}", self.text) };
    }
}

struct Ctx {
    g: GroupOracle,
    budget: Budget,
}

impl Ctx {
    fn new(common: &Common) -> Run<Self> {
        Ok(Self {
            g: GroupOracle::from_spec(&common.group)?,
            budget: Budget::new(common.budget)?,
        })
    }

    fn set(&self, words: &str) -> Run<FiniteSubset> {
        Ok(FiniteSubset::new(self.g.parse_elements(words)?))
    }

    fn show(&self, s: &FiniteSubset) -> String {
        let items: Vec<String> = s.iter().map(|x| self.g.format_element(x)).collect();
        format!("{{{}}}", items.join(", "))
    }
}

fn write_out(common: &Common, value: &Value) -> Run<()> {
    if let Some(path) = &common.out {
        let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        fs::write(path, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Run<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn certificate_report(ctx: &Ctx, common: &Common, cert: &FolnerCertificate) -> Run<Report> {
    let value = to_json(cert);
    write_out(common, &value)?;
    let text = format!(
        "F = {} (|F| = {}), max defect {} <= 1/{}",
        ctx.show(&cert.f),
        cert.f.len(),
        rational::to_text(&cert.max_defect()),
        cert.n
    );
    Ok(Report::done(value, text))
}

fn defects_text(defects: &std::collections::BTreeMap<GroupCode, Q>) -> Value {
    Value::Object(defects.iter().map(|(k, v)| (k.0.to_string(), Value::String(rational::to_text(v)))).collect())
}

pub fn run(cmd: Command) -> Run<Report> {
    match cmd {
        Command::FolnerSearch { common, d, n } => {
            let ctx = Ctx::new(&common)?;
            match search_folner(&ctx.g, &ctx.set(&d)?, n, ctx.budget)? {
                Outcome::Done(cert) => certificate_report(&ctx, &common, &cert),
                Outcome::Unknown(e) => Ok(Report::unknown(ctx.budget, e)),
            }
        }
        Command::FolnerSeq { common, n } => {
            let ctx = Ctx::new(&common)?;
            match folner_sequence(&ctx.g, n, ctx.budget)? {
                Outcome::Done(cert) => certificate_report(&ctx, &common, &cert),
                Outcome::Unknown(e) => Ok(Report::unknown(ctx.budget, e)),
            }
        }
        Command::FolnerFunction { common, d, n } => {
            let ctx = Ctx::new(&common)?;
            match folner_function(&ctx.g, &ctx.set(&d)?, n, ctx.budget)? {
                Outcome::Done(v) => {
                    let value = json!({ "min_size": v.size, "witness": to_json(&v.witness) });
                    write_out(&common, &value)?;
                    let text = format!("min size {} realised by {}", v.size, ctx.show(&v.witness.f));
                    Ok(Report::done(value, text))
                }
                Outcome::Unknown(e) => Ok(Report::unknown(ctx.budget, e)),
            }
        }
        Command::ReiterCheck { common, f, d, n } => {
            let ctx = Ctx::new(&common)?;
            let h: ReiterFunction = read_json(&f)?;
            let d = ctx.set(&d)?;
            let defects = reiter_defect(&ctx.g, &h, &d)?;
            let bound = rational::reciprocal(n.max(1));
            let below = defects.values().all(|v| *v < bound);
            let level = match extract_folner_from_reiter(&ctx.g, &h, &d, n) {
                Ok(s) => Some(s),
                Err(Error::NoLevelSet | Error::PreconditionFailed(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let value = json!({ "defects": defects_text(&defects), "below_1_over_n": below, "folner_set": level });
            write_out(&common, &value)?;
            let text = format!(
                "defects {}; all below 1/{n}: {below}; level set: {}",
                value["defects"],
                level.as_ref().map_or("none".to_string(), |s| ctx.show(s))
            );
            Ok(Report::done(value, text))
        }
        Command::Kappa { common, f, d, n } => {
            let ctx = Ctx::new(&common)?;
            let h: ReiterFunction = read_json(&f)?;
            let report = kappa_verify(&ctx.g.as_ce(), n, &ctx.set(&d)?, &h, ctx.budget)?;
            let mut value = to_json(&report);
            let exit = if report.verdict == KappaVerdict::Unknown {
                value["budget"] = json!(ctx.budget.steps());
                EXIT_UNKNOWN
            } else {
                0
            };
            write_out(&common, &value)?;
            let text = format!("{:?} after {} merges, {} pairs consumed", report.verdict, report.merges, report.consumed);
            Ok(Report { json: value, text, exit })
        }
        Command::WpFromFolner { common, triple, oracle } => {
            let ctx = Ctx::new(&common)?;
            let t = ctx.g.parse_elements(&triple)?;
            let [x, y, z] = t[..] else {
                return Err(Error::InvalidArgument(format!("--triple needs three elements, got {}", t.len())).into());
            };
            let mut oracle: Box<dyn FolnerOracle> = match oracle.as_str() {
                "search" => Box::new(SearchOracle::new(ctx.g, ctx.budget)?),
                "box" => Box::new(BoxOracle::new(ctx.g)?),
                other => return Err(Error::InvalidArgument(format!("unknown oracle `{other}`")).into()),
            };
            match decide_mult_from_folner(&ctx.g.as_ce(), oracle.as_mut(), x, y, z, ctx.budget)? {
                Outcome::Done(d) => {
                    let value = to_json(&d);
                    write_out(&common, &value)?;
                    let rel = if d.equal { "=" } else { "!=" };
                    let text = format!("{x} * {y} {rel} {z} (|F| = {}, {} confirmations)", d.k, d.confirmations);
                    Ok(Report::done(value, text))
                }
                Outcome::Unknown(e) => Ok(Report::unknown(ctx.budget, e)),
            }
        }
        Command::HaremDemo { common, k, steps, mult, slope, offset } => {
            let ctx = Ctx::new(&common)?;
            let gamma = CayleyBipartite::new(&ctx.g, &ctx.set(&k)?)?;
            let mut st = HaremMatchingState::new(gamma, HallWitness::affine(slope, offset), mult)?;
            let mut meter = ctx.budget.meter();
            let mut records = Vec::new();
            let mut stopped = None;
            for _ in 0..steps {
                match st.step_metered(&mut meter)? {
                    Outcome::Done(Some(r)) => records.push(r),
                    Outcome::Done(None) => break,
                    Outcome::Unknown(e) => {
                        stopped = Some(e);
                        break;
                    }
                }
            }
            let dump = st.dump();
            let mut value = json!({ "steps": to_json(&records), "dump": dump });
            let mut exit = 0;
            if let Some(e) = stopped {
                value["status"] = json!("UNKNOWN");
                value["budget"] = json!(ctx.budget.steps());
                value["consumed"] = json!(e.consumed);
                exit = EXIT_UNKNOWN;
            }
            write_out(&common, &value)?;
            let mut text = String::new();
            for r in &records {
                text += &format!("step {} ({:?}): radius {}, ball {}\n", r.step, r.side, r.radius, r.ball_size);
            }
            if let Some(e) = stopped {
                text += &format!("UNKNOWN: budget exhausted after {} steps\n", e.consumed);
            }
            text += dump.trim_end();
            Ok(Report { json: value, text, exit })
        }
        Command::Paradox { common, k0, n, verify, fixed_radius } => {
            let ctx = Ctx::new(&common)?;
            let k0 = ctx.set(&k0)?;
            let policy = match fixed_radius {
                None => RadiusPolicy::Witness,
                Some(s) => {
                    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
                    let parsed: Option<Vec<u32>> = parts.iter().map(|p| p.parse().ok()).collect();
                    match parsed.as_deref() {
                        Some(&[left, right]) => RadiusPolicy::Fixed { left, right },
                        _ => return Err(Error::InvalidArgument(format!("--fixed-radius expects `left,right`, got `{s}`")).into()),
                    }
                }
            };
            let Some(count) = verify else {
                let key = expand_key(&ctx.g, &k0, n)?;
                let value = to_json(&key);
                write_out(&common, &value)?;
                let text = format!("n1 = {}, |K| = {}, K = {}", key.n1, key.k.len(), ctx.show(&key.k));
                return Ok(Report::done(value, text));
            };
            let mut d = build_decomposition_with_policy(&ctx.g, &k0, n, policy)?;
            let report = d.verify_prefix(count, ctx.budget)?;
            let mut value = to_json(&report);
            value["spec"] = json!(ctx.g.spec().to_string());
            write_out(&common, &value)?;
            let exit = if report.unresolved.is_empty() { 0 } else { EXIT_UNKNOWN };
            if exit == EXIT_UNKNOWN {
                value["status"] = json!("UNKNOWN");
                value["budget"] = json!(ctx.budget.steps());
            }
            let text = format!(
                "n1 = {}, |K| = {}; resolved {} of {count} left codes, {} unresolved queries, {} violations, {} steps used",
                report.n1,
                report.k.len(),
                report.resolved.len(),
                report.unresolved.len(),
                report.violations.len(),
                report.consumed
            );
            Ok(Report { json: value, text, exit })
        }
        Command::ParadoxVerify { common, input, verify } => {
            let ctx = Ctx::new(&common)?;
            let (key, prefix, source) = match (input, verify) {
                (Some(path), _) => {
                    let saved: SavedReport = read_json(&path)?;
                    let mut prefix = ResolvedPrefix::default();
                    for r in &saved.resolved {
                        prefix.insert_left(&ctx.g, r.m, r.psi1, r.psi2);
                        prefix.right.insert(r.psi1, r.m);
                        prefix.right.insert(r.psi2, r.m);
                        if prefix.left[&r.m].theta1 != r.theta1 || prefix.left[&r.m].theta2 != r.theta2 {
                            return Err(Error::PreconditionFailed(format!("stored θ of {} disagrees with ψ", r.m)).into());
                        }
                    }
                    (saved.k, prefix, path.display().to_string())
                }
                (None, Some(count)) => {
                    let key = FiniteSubset::new(ctx.g.parse_elements("1,a^-1,b^-1")?);
                    (key, first_letter_prefix(&ctx.g, count)?, "first-letter".to_string())
                }
                (None, None) => return Err(Error::InvalidArgument("give --input or --verify".into()).into()),
            };
            let violations = check_prefix(&ctx.g, &key, &prefix);
            let value = json!({ "source": source, "checked": prefix.left.len(), "violations": to_json(&violations) });
            write_out(&common, &value)?;
            let text = format!("{source}: {} codes checked, {} violations", prefix.left.len(), violations.len());
            Ok(Report::done(value, text))
        }
        Command::Witness { common, k, n, size_bound } => {
            let ctx = Ctx::new(&common)?;
            let k = ctx.set(&k)?;
            let mut verdict = decide_witness_commutation(&ctx.g, &k)?;
            let mut exit = 0;
            if let (Some(n), Verdict::NotWitness) = (n, verdict.verdict) {
                match refute_witness_bounded(&ctx.g, &k, n, size_bound, ctx.budget)? {
                    Refutation::Certificate(c) => verdict.evidence = Some(Evidence::Certificate(c)),
                    Refutation::NoneFound => {}
                    Refutation::Unknown(_) => exit = EXIT_UNKNOWN,
                }
            }
            let value = to_json(&verdict);
            write_out(&common, &value)?;
            let text = format!("{} ({})", value["verdict"].as_str().unwrap_or_default(), verdict.rationale);
            Ok(Report { json: value, text, exit })
        }
        Command::RestrictFolner { common, k, n, f } => {
            let ctx = Ctx::new(&common)?;
            let k = ctx.set(&k)?;
            let m = n.saturating_mul(k.len() as u64);
            let f_m = match f {
                Some(words) => ctx.set(&words)?,
                None => match search_folner(&ctx.g, &k, m, ctx.budget)? {
                    Outcome::Done(c) => c.f,
                    Outcome::Unknown(e) => return Ok(Report::unknown(ctx.budget, e)),
                },
            };
            let slice = restrict_folner_to_subgroup(&ctx.g, &k, n, &f_m)?;
            let value = json!({ "m": m, "F_m": f_m, "slice": slice });
            write_out(&common, &value)?;
            let text = format!("{m}-Følner set {} restricts to {}", ctx.show(&f_m), ctx.show(&slice));
            Ok(Report::done(value, text))
        }
    }
}

#[derive(Deserialize)]
struct SavedResolved {
    m: GroupCode,
    theta1: GroupCode,
    theta2: GroupCode,
    psi1: GroupCode,
    psi2: GroupCode,
}

#[derive(Deserialize)]
struct SavedReport {
    #[serde(rename = "K")]
    k: FiniteSubset,
    resolved: Vec<SavedResolved>,
}
