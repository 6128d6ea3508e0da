use std::collections::BTreeMap;

use koszulkit::ainfty::AInfinityAlgebra;
use koszulkit::checks::{
    complicial_check_silting, one_generated_span_check, one_generated_via_dual, recognition_check, semibrick_check,
    GenerationVerdict, SimpleCollection,
};
use koszulkit::dgmod::{check_concentration, double_dual_compare, koszul_dual, koszul_dual_of_coconnective, DgModule, KoszulDual};
use koszulkit::loewy::{height_report, loewy_profile};
use koszulkit::presentations::{parse_document, parse_field, realize, DegreeWindow, Document, Realization};
use koszulkit::twisted::{hom_complex, mc_check, TwistedComplex};
use koszulkit::{CheckReport, Error, FieldTag, Fp, LinComb, Result, Scalar, Verdict, Window, Q};
use serde_json::{json, Value};

use crate::{CheckKind, Command, KoszulMode, Opts};

/// Span checks give up beyond this many raw candidates.
const MAX_CANDIDATES: u64 = 2_000_000;

pub struct Output {
    pub summary: Vec<String>,
    pub document: Value,
    pub exit: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::Presentation(_) => 1,
        Error::Uncertified(_) => 3,
        _ => 2,
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => 4,
        Verdict::Inconclusive => 3,
    }
}

fn input_of(cmd: &Command) -> &std::path::Path {
    match cmd {
        Command::Realize { input }
        | Command::Koszul { input, .. }
        | Command::Check { input, .. }
        | Command::Loewy { input, .. }
        | Command::TwHom { input, .. } => input,
    }
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Realize { .. } => "realize".into(),
        Command::Koszul { mode, .. } => format!("koszul {}", kebab(mode)),
        Command::Check { which, .. } => format!("check {}", kebab(which)),
        Command::Loewy { .. } => "loewy".into(),
        Command::TwHom { .. } => "tw-hom".into(),
    }
}

fn kebab<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_value(x).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

pub fn execute(cmd: &Command, opts: &Opts) -> Result<Output> {
    let path = input_of(cmd);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Presentation(format!("cannot read {}: {e}", path.display())))?;
    let mut doc = parse_document(&text)?;
    if let Some(f) = &opts.field {
        doc.presentation.field =
            parse_field(f).ok_or_else(|| Error::Presentation(format!("unknown field `{f}`; use Q or Fp for a prime p")))?;
    }
    if opts.d == 0 || opts.arity < 2 || opts.size_bound == 0 || opts.max_steps == 0 {
        return Err(Error::InvalidArgument("d, size bound and max steps must be positive and arity at least 2".into()));
    }
    let field = doc.presentation.field;
    let (report, data) = match field {
        FieldTag::Rationals => run::<Q>(cmd, opts, &doc)?,
        FieldTag::Prime(2) => run::<Fp<2>>(cmd, opts, &doc)?,
        FieldTag::Prime(3) => run::<Fp<3>>(cmd, opts, &doc)?,
        FieldTag::Prime(5) => run::<Fp<5>>(cmd, opts, &doc)?,
        FieldTag::Prime(7) => run::<Fp<7>>(cmd, opts, &doc)?,
        FieldTag::Prime(11) => run::<Fp<11>>(cmd, opts, &doc)?,
        FieldTag::Prime(13) => run::<Fp<13>>(cmd, opts, &doc)?,
        other => return Err(Error::UnsupportedField(format!("{other} is not built in; use Q or F2..F13"))),
    };
    let exit = match cmd {
        Command::Realize { .. } => {
            if report.holds() {
                0
            } else {
                2
            }
        }
        Command::Koszul { mode: KoszulMode::DoubleDual, .. } => verdict_exit(report.verdict),
        Command::Koszul { .. } if report.verdict == Verdict::Inconclusive => 3,
        _ => verdict_exit(report.verdict),
    };
    let summary = summarize(&command_name(cmd), &report);
    let document = json!({
        "schema": 1,
        "command": command_name(cmd),
        "config": {
            "field": field.to_string(),
            "min_degree": opts.min_degree,
            "max_degree": opts.max_degree,
            "arity": opts.arity,
            "d": opts.d,
            "size_bound": opts.size_bound,
            "max_steps": opts.max_steps,
            "subcommand": cmd,
        },
        "report": report,
        "data": data,
    });
    Ok(Output { summary, document, exit })
}

fn summarize(name: &str, r: &CheckReport) -> Vec<String> {
    let mut out = vec![format!("{name}: {} ({})", r.check, kebab(&r.verdict))];
    push_details(r, "  ", &mut out);
    out
}

fn push_details(r: &CheckReport, indent: &str, out: &mut Vec<String>) {
    for (k, w) in &r.windows {
        let show = |x: Option<i64>| x.map_or("*".to_string(), |v| v.to_string());
        out.push(format!("{indent}window {k}: [{}, {}]", show(w.min), show(w.max)));
    }
    for (k, t) in &r.dims {
        let parts: Vec<String> = t.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        out.push(format!("{indent}{k}: {{{}}}", parts.join(", ")));
    }
    if let Some(c) = &r.certificate {
        out.push(format!("{indent}certificate: {c}"));
    }
    for n in &r.notes {
        out.push(format!("{indent}note: {n}"));
    }
    for p in &r.parts {
        out.push(format!("{indent}{}: {}", p.check, kebab(&p.verdict)));
        push_details(p, &format!("{indent}  "), out);
    }
}

fn degree_window(opts: &Opts) -> DegreeWindow {
    DegreeWindow::new(opts.min_degree.unwrap_or(i64::MIN), opts.max_degree.unwrap_or(i64::MAX))
}

fn comb_json<F: Scalar>(x: &LinComb<F>, label: impl Fn(usize) -> String) -> Value {
    let mut terms: Vec<(String, String)> = x.iter().map(|(i, c)| (label(i), c.to_string())).collect();
    terms.sort();
    Value::Array(terms.into_iter().map(|(l, c)| json!([c, l])).collect())
}

fn run<F: Scalar>(cmd: &Command, opts: &Opts, doc: &Document) -> Result<(CheckReport, Value)> {
    let r: Realization<F> = realize(&doc.presentation, degree_window(opts), opts.max_steps)?;
    match cmd {
        Command::Realize { .. } => Ok(cmd_realize(&r, opts)),
        Command::Koszul { mode, .. } => cmd_koszul(&r, *mode, opts),
        Command::Check { which, members, candidates, n, top_degree, .. } => {
            cmd_check(&r, doc, *which, members, candidates, *n, *top_degree, opts)
        }
        Command::Loewy { module, .. } => cmd_loewy(&r, doc, module, opts),
        Command::TwHom { source, target, .. } => cmd_tw_hom(&r, doc, source, target, opts),
    }
}

fn cmd_realize<F: Scalar>(r: &Realization<F>, opts: &Opts) -> (CheckReport, Value) {
    let a = &r.algebra;
    let label = |i: usize| a.basis[i].label.clone();
    let mut products: Vec<(usize, usize, Value)> =
        a.mult_entries().filter(|(&(x, y), _)| !a.is_idempotent(x) && !a.is_idempotent(y)).map(|(&(x, y), v)| (x, y, comb_json(v, label))).collect();
    products.sort_by_key(|p| (p.0, p.1));
    let differential: Vec<Value> = (0..a.dim())
        .filter(|&x| !a.d_basis(x).is_zero())
        .map(|x| json!({ "of": label(x), "value": comb_json(a.d_basis(x), label) }))
        .collect();
    let basis: Vec<Value> = a
        .basis
        .iter()
        .map(|b| json!({ "label": b.label, "degree": b.degree, "source": a.vertices[b.source], "target": a.vertices[b.target] }))
        .collect();
    let validation = a.validate();
    let mut report = CheckReport::new("realize", Verdict::from_bool(validation.is_ok()))
        .with_dims("algebra", a.graded_dims())
        .with_window("degrees", Window { min: opts.min_degree, max: opts.max_degree });
    if let Err(e) = &validation {
        report = report.with_certificate(e.to_string());
    }
    let data = json!({
        "dim": a.dim(),
        "vertices": a.vertices,
        "dims": a.graded_dims(),
        "basis": basis,
        "products": products.into_iter().map(|(x, y, v)| json!({ "left": label(x), "right": label(y), "value": v })).collect::<Vec<_>>(),
        "differential": differential,
    });
    (report, data)
}

fn dual_json<F: Scalar>(kd: &KoszulDual<F>, arity: usize) -> Value {
    let e = &kd.algebra;
    let label = |i: usize| e.basis[i].label.clone();
    let mut blocks: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
    for b in &e.basis {
        *blocks.entry((b.source, b.target, b.degree)).or_insert(0) += 1;
    }
    let mut ops = serde_json::Map::new();
    for n in 2..=arity.min(e.arity_bound) {
        let mut rows: Vec<(Vec<usize>, Value)> = e
            .entries(n)
            .filter(|(t, v)| !v.is_zero() && !t.iter().any(|&x| e.is_unit(x)))
            .map(|(t, v)| (t.clone(), comb_json(v, label)))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        if !rows.is_empty() {
            ops.insert(
                n.to_string(),
                Value::Array(rows.into_iter().map(|(t, v)| json!({ "inputs": e.tuple_label(&t), "value": v })).collect()),
            );
        }
    }
    json!({
        "certificate": kd.certificate,
        "word_length": kd.word_length,
        "dims": kd.graded_dims(),
        "blocks": blocks.iter().map(|(&(s, t, n), &k)| json!({ "source": e.vertices[s], "target": e.vertices[t], "degree": n, "dim": k })).collect::<Vec<_>>(),
        "basis": e.basis.iter().map(|b| json!({ "label": b.label, "degree": b.degree, "source": e.vertices[b.source], "target": e.vertices[b.target] })).collect::<Vec<_>>(),
        "operations": ops,
    })
}

fn cmd_koszul<F: Scalar>(r: &Realization<F>, mode: KoszulMode, opts: &Opts) -> Result<(CheckReport, Value)> {
    let a = &r.algebra;
    let kd = match mode {
        KoszulMode::DoubleDual => return Ok((double_dual_compare(a, opts.max_steps, opts.arity)?, json!({}))),
        KoszulMode::Dual => koszul_dual(a, opts.max_steps, opts.arity)?,
        KoszulMode::DualOfCoconnective => koszul_dual_of_coconnective(a, opts.max_steps, opts.arity)?,
    };
    let dims = kd.graded_dims();
    let mut report = CheckReport::new("koszul_dual", Verdict::Holds).with_dims("koszul_dual", dims.clone());
    if let Some(w) = kd.window() {
        report = report.with_window("koszul_dual", w);
    }
    if let Some(m) = kd.certificate.max_weight.filter(|_| !kd.certificate.complete) {
        report = report.with_note(format!("exact up to weight {m}"));
    }
    let mut data = dual_json(&kd, opts.arity);
    match check_concentration(&dims, kd.window(), opts.d as i64) {
        Ok((ok, offending)) => {
            data["concentration"] = json!({ "d": opts.d, "holds": ok, "offending": offending });
            report = report.with_note(format!("cohomology concentrated in (-{}, 0]: {ok}", opts.d));
            if !ok {
                report = report.with_certificate(format!("nonzero in degrees {offending:?}"));
            }
        }
        Err(Error::Uncertified(msg)) => {
            report.verdict = Verdict::Inconclusive;
            report = report.with_note(format!("concentration undecided: {msg}"));
            data["concentration"] = Value::Null;
        }
        Err(e) => return Err(e),
    }
    Ok((report, data))
}

enum Named<F> {
    Module(DgModule<F>),
    Twisted(TwistedComplex<F>),
}

fn lookup<F: Scalar>(r: &Realization<F>, doc: &Document, name: &str) -> Result<Named<F>> {
    if let Some(m) = doc.module(name) {
        return Ok(Named::Module(DgModule::from_spec(m, r)?));
    }
    if let Some(t) = doc.twisted_complex(name) {
        return Ok(Named::Twisted(TwistedComplex::from_spec(t, r)?));
    }
    Err(Error::InvalidArgument(format!("no module or twisted block named `{name}`")))
}

fn twisted_members<F: Scalar>(r: &Realization<F>, doc: &Document, names: &[String]) -> Result<Vec<(String, TwistedComplex<F>)>> {
    names
        .iter()
        .map(|n| match lookup(r, doc, n)? {
            Named::Twisted(t) => Ok((n.clone(), t)),
            Named::Module(_) => Err(Error::InvalidArgument(format!("`{n}` is a module, a twisted block is needed"))),
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_check<F: Scalar>(
    r: &Realization<F>,
    doc: &Document,
    which: CheckKind,
    members: &[String],
    candidates: &[String],
    n: usize,
    top_degree: usize,
    opts: &Opts,
) -> Result<(CheckReport, Value)> {
    let a = &r.algebra;
    let e = || AInfinityAlgebra::from_dg(a, opts.arity);
    match which {
        CheckKind::OneGenSpan => {
            let e = e();
            let cert = one_generated_span_check(&e, opts.d, top_degree, opts.size_bound, MAX_CANDIDATES)?;
            let data = json!({
                "verdict": cert.verdict,
                "objects": cert.objects,
                "witness": cert.witness.as_ref().map(|w| json!({
                    "degree": w.degree,
                    "source": w.source.label(&e),
                    "target": w.target.label(&e),
                    "morphism": koszulkit::checks::describe_morphism(&e, w),
                })),
            });
            debug_assert_eq!(cert.witness.is_some(), cert.verdict == GenerationVerdict::NotGeneratedWithWitness);
            Ok((cert.report(&e), data))
        }
        CheckKind::OneGenDual => Ok((one_generated_via_dual(a, opts.d, opts.max_steps, opts.arity)?, json!({}))),
        CheckKind::Complicial => {
            let v = complicial_check_silting(a, opts.d)?;
            Ok((v.report, json!({ "holds": v.holds, "strict": v.strict })))
        }
        CheckKind::Semibrick => {
            let c = collection(r, doc, members, opts)?;
            let report = semibrick_check(&c, n, opts.d)?;
            Ok((report, collection_json(&c)))
        }
        CheckKind::Recognize => {
            let e = e();
            let simples = SimpleCollection::from_twisted(&e, twisted_members(r, doc, members)?)?;
            let cands: Vec<TwistedComplex<F>> =
                twisted_members(r, doc, candidates)?.into_iter().map(|(_, t)| t).collect();
            let report = recognition_check(&e, &simples, &cands, opts.d)?;
            Ok((report, collection_json(&simples)))
        }
    }
}

fn collection<F: Scalar>(r: &Realization<F>, doc: &Document, names: &[String], opts: &Opts) -> Result<SimpleCollection<F>> {
    if names.is_empty() {
        return Err(Error::InvalidArgument("--members is empty".into()));
    }
    let named = names.iter().map(|n| lookup(r, doc, n)).collect::<Result<Vec<_>>>()?;
    if named.iter().all(|x| matches!(x, Named::Module(_))) {
        let mods = names
            .iter()
            .cloned()
            .zip(named)
            .map(|(n, x)| match x {
                Named::Module(m) => (n, m),
                Named::Twisted(_) => unreachable!(),
            })
            .collect();
        return SimpleCollection::from_modules(&r.algebra, mods, 1);
    }
    let e = AInfinityAlgebra::from_dg(&r.algebra, opts.arity);
    SimpleCollection::from_twisted(&e, twisted_members(r, doc, names)?)
}

fn collection_json<F: Scalar>(c: &SimpleCollection<F>) -> Value {
    let homs: Vec<Value> = c
        .homs
        .iter()
        .map(|(&(i, j), t)| json!({ "source": c.labels[i], "target": c.labels[j], "dims": t }))
        .collect();
    json!({ "members": c.labels, "homs": homs, "window": c.window })
}

fn cmd_loewy<F: Scalar>(r: &Realization<F>, doc: &Document, name: &str, opts: &Opts) -> Result<(CheckReport, Value)> {
    let spec = doc.module(name).ok_or_else(|| Error::InvalidArgument(format!("no module block named `{name}`")))?;
    let m = DgModule::from_spec(spec, r)?;
    let profile = loewy_profile(&m, &r.algebra, opts.d)?;
    let mut report = CheckReport::new("loewy", Verdict::Holds)
        .with_dims("module", m.cohomology_dims())
        .with_window("heart", Window::new(1 - opts.d as i64, 0))
        .with_note(format!("big_loewy {}, loewy in [{}, {}]", profile.big_loewy, profile.loewy_lower, profile.loewy_upper));
    if profile.heart.len() > 1 {
        let parts: Vec<String> = profile.heart.iter().map(|(k, n)| format!("{n} (H^{k})")).collect();
        report = report.with_note(format!("sum formula checked: {} = {}", profile.big_loewy, parts.join(" + ")));
    }
    let height = height_report(&r.algebra, opts.d).ok();
    Ok((report, json!({ "profile": profile, "height": height })))
}

fn cmd_tw_hom<F: Scalar>(
    r: &Realization<F>,
    doc: &Document,
    source: &str,
    target: &str,
    opts: &Opts,
) -> Result<(CheckReport, Value)> {
    let e = AInfinityAlgebra::from_dg(&r.algebra, opts.arity);
    let objs = twisted_members(r, doc, &[source.to_string(), target.to_string()])?;
    let mut mc: Vec<CheckReport> = objs.iter().map(|(_, t)| mc_check(&e, t)).collect::<Result<_>>()?;
    for (r, (name, _)) in mc.iter_mut().zip(&objs) {
        r.check = format!("maurer_cartan {name}");
    }
    if mc.iter().any(|x| !x.holds()) {
        return Ok((CheckReport::all("tw_hom", mc), json!({})));
    }
    let h = hom_complex(&e, &objs[0].1, &objs[1].1)?;
    let report = CheckReport::all("tw_hom", mc)
        .with_dims("hom_complex", h.dims())
        .with_dims("cohomology", h.cohomology_dims());
    let data = json!({
        "source": objs[0].1.label(&e),
        "target": objs[1].1.label(&e),
        "chain_dims": h.dims(),
        "cohomology": h.cohomology_dims(),
    });
    Ok((report, data))
}
