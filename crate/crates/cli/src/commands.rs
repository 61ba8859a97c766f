use serde::Serialize;
use serde_json::json;

use leafcoh::cohomology::{solve_primitive, solve_tilde_primitive};
use leafcoh::sequences::{identity_cover, laurent_cover, make_mv_ses, relative_reports, residue_cover, snake_les};
use leafcoh::{
    run_suite, CohomologyReport, Error, FoliatedForm, FormJson, LongExactSequenceReport, OperatorTag, Primitive,
    Series, Suite, SuiteInput, TildePrimitive, Variant,
};

use crate::scene::{Scene, TargetJson};
use crate::{Failure, Format, Outcome};

pub struct Options {
    pub format: Format,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

const DEFAULT_TRIALS: usize = 100;

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn core(context: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::from_core(context, e)
}

pub fn check(scene: &Scene, suite: &str, opts: &Options) -> Result<Outcome, Failure> {
    let suite = Suite::parse(suite).ok_or_else(|| Failure::input(format!("unknown suite `{suite}`")))?;
    let seed = opts
        .seed
        .or(scene.raw.seed)
        .ok_or_else(|| Failure::input("randomized suites need a seed (scene \"seed\" or --seed)"))?;
    let trials = opts.trials.or(scene.raw.trials).unwrap_or(DEFAULT_TRIALS);
    let input = SuiteInput {
        model: scene.model.clone(),
        g: scene.g.clone(),
        h: scene.h.clone(),
        k: scene.raw.k,
        morphism: scene.morphism.clone(),
        f_prime: scene.f_prime.clone(),
        alpha: scene.alpha.clone(),
    };
    let report = run_suite(suite, &input, trials, seed).map_err(core("check"))?;
    let text = match opts.format {
        Format::Json => pretty(&report),
        Format::Csv => to_csv(
            &["identity", "cases", "failures", "skipped", "out_of_domain", "first_counterexample"],
            report.identities.iter().map(|i| {
                [
                    i.identity.clone(),
                    i.cases.to_string(),
                    i.failures.to_string(),
                    i.skipped.clone().unwrap_or_default(),
                    i.out_of_domain.to_string(),
                    i.first_counterexample.clone().unwrap_or_default(),
                ]
            }),
        ),
    };
    Ok(Outcome {
        text,
        code: if report.passed() { 0 } else { 1 },
    })
}

pub fn cohomology(scene: &Scene, variant: &str, k: Option<i64>, opts: &Options) -> Result<Outcome, Failure> {
    let k = k.or(scene.raw.k);
    let v = Variant::parse(variant, k).ok_or_else(|| {
        if variant == "k" {
            Failure::input("variant k needs --k or a scene \"k\"")
        } else {
            Failure::input(format!("unknown variant `{variant}`"))
        }
    })?;
    let m = scene.model.m();
    let grid = scene.grid();
    let full: Vec<usize> = (0..=m).collect();
    let ps = grid.p.unwrap_or_else(|| full.clone());
    let qs = grid.q.unwrap_or(full);
    let ds = grid.d.unwrap_or_else(|| vec![scene.model.budget()]);
    for (name, range) in [("p", &ps), ("q", &qs)] {
        if let Some(bad) = range.iter().find(|&&x| x > m) {
            return Err(Failure::input(format!("grid.{name} value {bad} is outside [0, {m}]")));
        }
    }
    let report = CohomologyReport::grid(&scene.model, v, &ps, &qs, &ds).map_err(core("cohomology"))?;
    let text = match opts.format {
        Format::Json => pretty(&report),
        Format::Csv => report.to_csv(),
    };
    Ok(Outcome { text, code: 0 })
}

fn les_csv(les: &LongExactSequenceReport) -> String {
    to_csv(
        &["group", "dim", "out_map", "out_map_rank", "exact"],
        les.nodes.iter().map(|n| {
            [
                n.group.clone(),
                n.dim.to_string(),
                n.out_map.clone(),
                n.out_map_rank.to_string(),
                n.exact.to_string(),
            ]
        }),
    )
}

fn mv(scene: &Scene, opts: &Options) -> Result<Outcome, Failure> {
    let spec = scene
        .raw
        .cover
        .as_ref()
        .ok_or_else(|| Failure::input("sequence mv needs a scene \"cover\""))?;
    let d = spec.d.unwrap_or(2);
    let cover = match spec.fixture.as_str() {
        "laurent" => laurent_cover(d),
        "residue" => residue_cover(d),
        "identity" => identity_cover(&scene.model, spec.p.unwrap_or(0), scene.model.m() as i64),
        other => return Err(Failure::input(format!("unknown cover fixture `{other}`"))),
    }
    .map_err(core("cover"))?;
    let expect_failure = scene.raw.expect_failure;
    match make_mv_ses(&cover) {
        Ok(ses) => {
            let les = snake_les(&ses).map_err(core("mv"))?;
            let ok = les.exact && !expect_failure;
            let text = match opts.format {
                Format::Json => pretty(&json!({
                    "kind": "mv",
                    "fixture": spec.fixture,
                    "ses_valid": true,
                    "expect_failure": expect_failure,
                    "les": les,
                })),
                Format::Csv => les_csv(&les),
            };
            Ok(Outcome {
                text,
                code: if ok { 0 } else { 1 },
            })
        }
        Err(Error::Ses { grade, condition }) => {
            let finding = json!({
                "kind": "mv",
                "fixture": spec.fixture,
                "ses_valid": false,
                "expect_failure": expect_failure,
                "finding": {"grade": grade, "condition": condition.to_string()},
            });
            let text = match opts.format {
                Format::Json => pretty(&finding),
                Format::Csv => to_csv(&["grade", "condition"], [[grade.to_string(), condition.to_string()]]),
            };
            Ok(Outcome {
                text,
                code: if expect_failure { 0 } else { 1 },
            })
        }
        Err(e) => Err(Failure::from_core("mv", e)),
    }
}

fn relative(scene: &Scene, kind: &str, opts: &Options) -> Result<Outcome, Failure> {
    let mu = scene
        .morphism
        .as_ref()
        .ok_or_else(|| Failure::input(format!("sequence {kind} needs a scene \"morphism\"")))?;
    let f_prime = scene
        .f_prime
        .clone()
        .unwrap_or_else(|| Series::one(mu.target(), scene.model.budget()));
    let grid = scene.grid();
    let p = grid.p.as_ref().and_then(|v| v.first().copied()).unwrap_or(0);
    let d = grid
        .d
        .as_ref()
        .and_then(|v| v.first().copied())
        .unwrap_or(scene.model.budget());
    if p > mu.source().m.min(mu.target().m) {
        return Err(Failure::input(format!("grid.p value {p} exceeds the leaf dimension")));
    }
    let (rel, les, delta, cor) = relative_reports(mu, &f_prime, p, d).map_err(core(kind))?;
    let (value, passed, csv) = match kind {
        "relative" => {
            let dims = rel.complex().betti().map_err(core(kind))?;
            let value = json!({
                "kind": kind,
                "p": p,
                "D": d,
                "budgets": rel.budgets,
                "relative_dims": dims,
                "les": les,
            });
            (value, les.exact, les_csv(&les))
        }
        "corollary28" => {
            let csv = to_csv(
                &["item", "passed", "witnesses"],
                cor.items
                    .iter()
                    .map(|i| [i.item.clone(), i.passed.to_string(), i.witnesses.join("; ")]),
            );
            (serde_json::to_value(&cor).expect("report serializes"), les.exact && cor.passed, csv)
        }
        _ => {
            let csv = to_csv(
                &["grade", "class", "equal"],
                delta
                    .classes
                    .iter()
                    .map(|c| [c.grade.to_string(), c.class.to_string(), c.equal.to_string()]),
            );
            (serde_json::to_value(&delta).expect("report serializes"), delta.passed, csv)
        }
    };
    let text = match opts.format {
        Format::Json => pretty(&value),
        Format::Csv => csv,
    };
    Ok(Outcome {
        text,
        code: if passed { 0 } else { 1 },
    })
}

pub fn sequence(scene: &Scene, kind: &str, opts: &Options) -> Result<Outcome, Failure> {
    match kind {
        "mv" => mv(scene, opts),
        "relative" | "corollary28" | "delta" => relative(scene, kind, opts),
        other => Err(Failure::input(format!("unknown sequence kind `{other}`"))),
    }
}

fn not_closed(e: Error, opts: &Options) -> Failure {
    let mut f = Failure::from_core("solve", e.clone());
    if let (Error::NotClosed(residual), Format::Json) = (&e, opts.format) {
        f.report = Some(pretty(&json!({"status": "not_closed", "residual": residual})));
    }
    f
}

fn form_value(form: &FoliatedForm) -> serde_json::Value {
    serde_json::to_value(FormJson::from_form(form)).expect("form serializes")
}

pub fn solve(scene: &Scene, k: Option<i64>, opts: &Options) -> Result<Outcome, Failure> {
    if opts.format == Format::Csv {
        return Err(Failure::input("solve reports are JSON only"));
    }
    let target = scene
        .raw
        .target
        .as_ref()
        .ok_or_else(|| Failure::input("solve needs a scene \"target\""))?;
    let slack = scene.raw.slack.unwrap_or(0);
    let budget = scene.model.budget();
    let value = match target {
        TargetJson::Single(form) => {
            let name = scene.raw.operator.as_deref().unwrap_or("dbar_f");
            let tag = OperatorTag::parse(name, k.or(scene.raw.k))
                .ok_or_else(|| Failure::input(format!("unknown or incomplete operator `{name}`")))?;
            let form = form.to_form(scene.model.vars(), budget).map_err(core("target"))?;
            match solve_primitive(tag, &scene.model, &form, slack).map_err(|e| not_closed(e, opts))? {
                Primitive::Found(eta) => json!({
                    "status": "found",
                    "operator": tag.name(),
                    "slack": slack,
                    "primitive": form_value(&eta),
                }),
                Primitive::NoneWithinSlack { budget } => json!({
                    "status": "none_within_slack",
                    "operator": tag.name(),
                    "slack": slack,
                    "budget": budget,
                }),
            }
        }
        TargetJson::Pair { phi, psi } => {
            let mu = scene
                .morphism
                .as_ref()
                .ok_or_else(|| Failure::input("a (phi, psi) target needs a scene \"morphism\""))?;
            let f_prime = scene.f_prime.clone().unwrap_or_else(|| Series::one(mu.target(), budget));
            let phi = phi.to_form(mu.target(), budget).map_err(core("target.phi"))?;
            let psi = psi.to_form(mu.source(), budget).map_err(core("target.psi"))?;
            match solve_tilde_primitive(mu, &f_prime, &phi, &psi, slack).map_err(|e| not_closed(e, opts))? {
                TildePrimitive::Found { phi, psi } => json!({
                    "status": "found",
                    "operator": "tilde_dbar",
                    "slack": slack,
                    "primitive": {"phi": form_value(&phi), "psi": psi.as_ref().map(form_value)},
                }),
                TildePrimitive::NoneWithinSlack { budget } => json!({
                    "status": "none_within_slack",
                    "operator": "tilde_dbar",
                    "slack": slack,
                    "budget": budget,
                }),
            }
        }
    };
    Ok(Outcome {
        text: pretty(&value),
        code: 0,
    })
}
