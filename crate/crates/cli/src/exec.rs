//! Executes checked tasks and renders their results as JSON values.

use charsub::arith::fmt_rat;
use charsub::classify::{admits_minap_fg, autochar_verdict, k_char_impossible_finite, not_t_characterizable};
use charsub::construct::{claim_lift, dense_enum_zero_characterizer, describe_quotient, k_characterize_chain, quotient_lift};
use charsub::groups::finite::fmt_tuple;
use charsub::groups::{Element, GroupDescriptor};
use charsub::membership::{is_autochar_witness, member, s_v_finite, Autochar, Certificate, Limits, Verdict};
use charsub::radicals::radical;
use charsub::sequences::CharSequence;
use charsub::verify::run_suite;
use serde_json::{json, Value};

use crate::job::{Options, Task};

/// A task result; `suite_failed` is set by verify tasks with failures.
pub struct Done {
    pub value: Value,
    pub suite_failed: bool,
}

fn done(value: Value) -> Done {
    Done { value, suite_failed: false }
}

fn limits(opts: &Options) -> Limits {
    Limits { horizon: opts.horizon, cap: opts.cap, ..Limits::default() }
}

pub fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Vanishing { rule, start, bound } => json!({
            "kind": "vanishing",
            "rule": rule,
            "start": start,
            "bound": bound.to_string(),
        }),
        Certificate::Escape { rule, period, residue, from_index, value, norm_floor, escapes_t_plus } => json!({
            "kind": "escape",
            "rule": rule,
            "period": period,
            "residue": residue,
            "from_index": from_index,
            "limit": value.to_string(),
            "norm_floor": fmt_rat(norm_floor),
            "escapes_t_plus": escapes_t_plus,
        }),
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    let mut out = json!({ "verdict": v.label(), "summary": v.to_string() });
    match v {
        Verdict::ProvenIn(c) | Verdict::ProvenNotIn(c) => out["certificate"] = certificate_json(c),
        Verdict::Undecided(e) => {
            out["evidence"] = json!({
                "horizon": e.horizon,
                "window_start": e.window_start,
                "worst_upper": e.worst_upper.as_ref().map(fmt_rat),
                "escapes": e.escapes,
                "threshold": fmt_rat(&e.threshold),
                "no_rule": e.no_rule,
                "reason": e.reason,
                "trace": e.trace.iter().map(|t| json!([t.n, fmt_rat(&t.lower), fmt_rat(&t.upper)])).collect::<Vec<_>>(),
            })
        }
    }
    out
}

fn point_json(group: &GroupDescriptor, seq: &CharSequence, text: &str, x: &Element, v: &Verdict) -> Value {
    let mut out = verdict_json(v);
    out["point"] = json!(text);
    // enough to rerun the decision from the report alone
    out["replay"] = json!({ "group": group.to_string(), "sequence": seq.to_string(), "point": x.to_string() });
    out
}

fn autochar_json(a: &Autochar) -> Value {
    let samples = |s: &[(Element, Verdict)]| -> Value {
        let decided = s.iter().filter(|(_, v)| !v.is_undecided()).count();
        json!({ "count": s.len(), "decided": decided })
    };
    match a {
        Autochar::Confirmed { schema, samples: s } => json!({ "status": a.label(), "schema": schema, "samples": samples(s) }),
        Autochar::Refuted { reason, witness } => json!({
            "status": a.label(),
            "reason": reason,
            "witness": witness.as_ref().map(|(x, v)| json!({ "point": x.to_string(), "verdict": verdict_json(v) })),
        }),
        Autochar::Undecided { reason, samples: s } => json!({ "status": a.label(), "reason": reason, "samples": samples(s) }),
    }
}

pub fn execute(task: &Task, opts: &Options) -> charsub::Result<Done> {
    let l = limits(opts);
    Ok(match task {
        Task::Member { group, seq, points } => {
            let rows = points
                .iter()
                .map(|(text, x)| member(group, seq, x, &l).map(|v| point_json(group, seq, text, x, &v)))
                .collect::<charsub::Result<Vec<_>>>()?;
            done(json!({ "points": rows }))
        }
        Task::Radical { seq } => {
            let r = radical(seq, opts.cap)?;
            done(json!({ "radical": r.presentation.to_string(), "trace": r.certificate.trace() }))
        }
        Task::SVFinite { group, seq } => {
            let s = s_v_finite(group, seq, opts.cap)?;
            done(json!({
                "subgroup": s.to_string(),
                "order": s.order(),
                "index": s.index(),
                "elements": s.elements().iter().map(|x| fmt_tuple(x)).collect::<Vec<_>>(),
            }))
        }
        Task::ClaimLift { a, m } => {
            let b = claim_lift(a, *m)?;
            done(json!({ "a": a.to_string(), "m": m, "b": b.to_string(), "norm_a": fmt_rat(&a.norm()) }))
        }
        Task::KCharacterize { levels, check_bound } => {
            let k = k_characterize_chain(levels, None, &l)?;
            let check = k.verify(*check_bound, 256, &l)?;
            done(json!({
                "subgroup": format!("{}Z", k.chain.subgroup()),
                "levels": k.chain.levels,
                "sequence": k.sequence.to_string(),
                "steps": k.steps,
                "check": {
                    "bound": check_bound,
                    "passed": check.passed(),
                    "mismatches": check.mismatches,
                    "undecided": check.undecided,
                    "one_to_one": check.one_to_one,
                    "nonzero": check.nonzero,
                },
            }))
        }
        Task::QuotientLift { quotient, seq } => {
            let lift = quotient_lift(quotient, seq, opts.cap)?;
            let sv = s_v_finite(&quotient.ambient, &lift.sequence, opts.cap)?;
            done(json!({
                "quotient": describe_quotient(quotient),
                "u": seq.to_string(),
                "v": lift.sequence.to_string(),
                "s_v": sv.to_string(),
            }))
        }
        Task::DenseEnumeration => {
            let seq = dense_enum_zero_characterizer();
            done(json!({ "group": "T", "sequence": seq.to_string(), "characterizes": "{0}" }))
        }
        Task::TCharacterization { group } => {
            let v = not_t_characterizable(group)?;
            done(json!({
                "eo": v.eo.to_string(),
                "exp": v.exp.to_string(),
                "not_t_characterizable": v.not_t_characterizable,
                "witness": v.witness,
                "witness_image": v.witness_image,
            }))
        }
        Task::Autocharacterization { group } => {
            let v = autochar_verdict(group, &l)?;
            done(json!({
                "autocharacterized": v.autocharacterized,
                "reason": v.reason,
                "witness": v.witness.as_ref().map(ToString::to_string),
                "check": v.check.as_ref().map(autochar_json),
            }))
        }
        Task::AutocharWitness { group, seq } => done(autochar_json(&is_autochar_witness(group, seq, &l)?)),
        Task::Pigeonhole { group, seq } => {
            let fact = k_char_impossible_finite(group);
            let repeated = match seq {
                Some(s) => Some(fact.certify(s)?.iter().map(ToString::to_string).collect::<Vec<_>>()),
                None => None,
            };
            done(json!({ "group": group.to_string(), "dual_size": fact.dual_size, "k_characterizable": false, "repeated": repeated }))
        }
        Task::Minap { rank, torsion } => {
            let v = admits_minap_fg(*rank, torsion);
            done(json!({ "admits": v.admits, "witness": v.witness, "trivial_edge_case": v.trivial_edge_case }))
        }
        Task::Verify { suite, seed, sizes } => {
            let s = run_suite(suite, *seed, sizes)?;
            Done {
                value: json!({
                    "suite": s.suite,
                    "seed": s.seed,
                    "sizes": { "max_order": sizes.max_order, "cases": sizes.cases, "bound": sizes.bound },
                    "cases": s.cases,
                    "passed": s.passed(),
                    "failed": s.failed,
                    "counterexamples": s.counterexamples,
                }),
                suite_failed: !s.ok(),
            }
        }
    })
}
