mod error;
mod render;
mod syntax;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ress_core::binaryquartic::family_invariants;
use ress_core::exactfield::{Field, QuadExt, Rat};
use ress_core::families::{gen_mixed_24, gen_mixed_33, gen_mixed_42, gen_special_i2, gen_special_ii, FamilyModel};
use ress_core::lattice::{
    eight_vector_table, enumerate_roots, mixed24_table, sigma_self_intersection, validating_attachments,
    verify_dynkin_table, verify_table, CartanGraph, SectionData, DYNKIN_ROWS,
};
use ress_core::planecurves::{analyze_pair, chisini_quartic, hesse_cubic, normal_form, pencil_c4, NormalForm, QuarticPair};
use ress_core::ternaryform::restrict_to_pencil;
use ress_core::weierstrass::WeierstrassModel;

use error::CliError;
use syntax::{FieldSel, Node};

#[derive(Parser)]
#[command(name = "ress", version, about = "Rational elliptic surfaces with six double singular fibres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the singular fibres of y^2 = x^3 + A(t) x + B(t).
    Classify {
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 1)]
        weight: u32,
    },
    /// Build a model from one of the explicit families.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        params: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Plane quartics with a pencil of lines.
    Quartic {
        #[command(subcommand)]
        command: QuarticCommand,
    },
    /// Pencils of plane cubics.
    Pencil {
        #[command(subcommand)]
        command: PencilCommand,
    },
    /// The E8 lattice.
    E8 {
        #[command(subcommand)]
        command: E8Command,
    },
    /// Mordell-Weil heights.
    Mw {
        #[command(subcommand)]
        command: MwCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    I2,
    Ii,
    #[value(name = "42")]
    Mixed42,
    #[value(name = "33")]
    Mixed33,
    #[value(name = "24")]
    Mixed24,
}

#[derive(Subcommand)]
enum QuarticCommand {
    /// Analyze a quartic C with pencil centre p.
    Analyze {
        #[arg(long = "C")]
        c: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        nodes: Option<String>,
        #[arg(long)]
        components: Option<String>,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Build and analyze one of the quartic normal forms.
    NormalForm {
        #[arg(long = "case")]
        case: String,
        #[arg(long)]
        params: String,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// The Chisini quartic of a cubic, or of the Hesse cubic with parameter gamma.
    Chisini {
        #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
        phi3: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, default_value = "[0,0,1]")]
        p: String,
        #[arg(long, default_value = "q")]
        field: String,
    },
}

#[derive(Subcommand)]
enum PencilCommand {
    /// c4 along the pencil g0 + t g1.
    C4 {
        #[arg(long)]
        g0: String,
        #[arg(long)]
        g1: String,
        #[arg(long, default_value = "q")]
        field: String,
    },
}

#[derive(Subcommand)]
enum E8Command {
    /// List the 240 roots.
    Enumerate,
    /// Verify one of the built-in pairing tables.
    Verify {
        #[arg(long, value_parser = ["eight", "dynkin", "mixed24"])]
        table: String,
    },
}

#[derive(Subcommand)]
enum MwCommand {
    /// Height of a section from S.S0 and the I2 components it meets.
    Height {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value = "")]
        components: String,
    },
}

macro_rules! in_field {
    ($sel:expr, $f:ident($($arg:expr),*)) => {
        match $sel {
            FieldSel::Q => $f::<Rat>((), $($arg),*),
            FieldSel::Sqrt(d) => $f::<QuadExt>(d, $($arg),*),
        }
    };
}

fn object(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn classify<F: Field>(tag: F::Tag, a: &str, b: &str, weight: u32) -> Result<Value, CliError> {
    let a = syntax::parse_with(a, |n| syntax::poly::<F>(n, tag))?;
    let b = syntax::parse_with(b, |n| syntax::poly::<F>(n, tag))?;
    let model = WeierstrassModel::with_weight(a, b, weight)?;
    let report = model.classify_fibres()?;
    let mut out = object(vec![("field", json!(F::describe_tag(tag))), ("model", render::model(&model))]);
    render::fibres(&mut out, &report);
    Ok(Value::Object(out))
}

fn param<'a>(params: &'a Map<String, Value>, key: &str) -> Result<Node, CliError> {
    let v = params.get(key).ok_or_else(|| CliError::parse(format!("missing parameter {key:?}")))?;
    syntax::from_json(v)
}

fn parse_params(s: &str) -> Result<Map<String, Value>, CliError> {
    match serde_json::from_str::<Value>(s) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(CliError::parse("--params must be a JSON object")),
        Err(e) => Err(CliError::parse(format!("--params: {e}"))),
    }
}

fn family_json<F: Field>(family: &str, tag: F::Tag, fm: &FamilyModel<F>) -> Value {
    let mut out = object(vec![
        ("family", json!(family)),
        ("field", json!(F::describe_tag(tag))),
        ("model", render::model(&fm.model)),
    ]);
    render::fibres(&mut out, &fm.report);
    Value::Object(out)
}

fn gen_rational<F: Field>(tag: F::Tag, family: Family, params: &Map<String, Value>) -> Result<Value, CliError> {
    let p = |k: &str| syntax::poly::<F>(&param(params, k)?, tag);
    let (name, fm) = match family {
        Family::I2 => ("i2", gen_special_i2(&p("Q1")?, &p("Q2")?)?),
        Family::Ii => ("ii", gen_special_ii(&p("B")?)?),
        Family::Mixed42 => ("42", gen_mixed_42(&p("P")?, &p("Q")?)?),
        Family::Mixed33 | Family::Mixed24 => unreachable!("handled over q-sqrt:3"),
    };
    Ok(family_json(name, tag, &fm))
}

fn gen(family: Family, params: &str, field: Option<&str>) -> Result<Value, CliError> {
    let params = parse_params(params)?;
    match family {
        Family::I2 | Family::Ii | Family::Mixed42 => {
            let sel = FieldSel::parse(field.unwrap_or("q"))?;
            in_field!(sel, gen_rational(family, &params))
        }
        Family::Mixed33 | Family::Mixed24 => {
            let d = match FieldSel::parse(field.unwrap_or("q-sqrt:3"))? {
                FieldSel::Sqrt(d) => d,
                FieldSel::Q => return Err(CliError::domain("wrong_field", "this family is defined over q-sqrt:3, got q")),
            };
            let s = |k: &str| syntax::scalar::<QuadExt>(&param(&params, k)?, d);
            let p = |k: &str| syntax::poly::<QuadExt>(&param(&params, k)?, d);
            let (name, fm) = if let Family::Mixed33 = family {
                ("33", gen_mixed_33(&s("alpha")?, &s("lambda")?)?)
            } else {
                ("24", gen_mixed_24(&p("L1")?, &p("L2")?, &p("N1")?, &p("N2")?, &s("alpha")?)?)
            };
            Ok(family_json(name, d, &fm))
        }
    }
}

fn analyze_json<F: Field>(tag: F::Tag, pair: &QuarticPair<F>, extra: Vec<(&str, Value)>) -> Result<Value, CliError> {
    let rep = analyze_pair(pair)?;
    let mut out = object(extra);
    out.insert("field".into(), json!(F::describe_tag(tag)));
    render::pair(&mut out, pair);
    render::pair_report(&mut out, &rep);
    Ok(Value::Object(out))
}

fn quartic_analyze<F: Field>(
    tag: F::Tag,
    c: &str,
    p: &str,
    nodes: Option<&str>,
    components: Option<&str>,
) -> Result<Value, CliError> {
    let curve = syntax::parse_with(c, |n| syntax::form::<F>(n, tag))?;
    let centre = syntax::parse_with(p, |n| syntax::point::<F>(n, tag))?;
    let nodes = match nodes {
        Some(s) => syntax::parse_with(s, |n| syntax::list(n)?.iter().map(|q| syntax::point::<F>(q, tag)).collect())?,
        None => Vec::new(),
    };
    let mut pair = QuarticPair::new(curve, centre, nodes)?;
    if let Some(s) = components {
        let comps = syntax::parse_with(s, |n| syntax::list(n)?.iter().map(|f| syntax::form::<F>(f, tag)).collect())?;
        pair = pair.with_components(comps)?;
    }
    analyze_json(tag, &pair, vec![])
}

fn normal_form_case<F: Field>(tag: F::Tag, case: &str, params: &str) -> Result<Value, CliError> {
    let params = parse_params(params)?;
    let s = |k: &str| syntax::scalar::<F>(&param(&params, k)?, tag);
    let t = |k: &str| syntax::triple::<F>(&param(&params, k)?, tag);
    let nf = match case {
        "binodal" => NormalForm::Binodal { a: s("a")?, b: s("b")?, c: s("c")?, d: s("d")?, q2: t("q2")? },
        "binodal_reduced" => NormalForm::BinodalReduced { h: s("h")?, k: s("k")? },
        "trinodal" => NormalForm::Trinodal { a: s("a")?, b: s("b")?, c: s("c")?, f: s("f")?, g: s("g")?, h: s("h")? },
        "two_conics" => NormalForm::TwoConics { a: s("a")?, b: s("b")? },
        "conic_two_lines" => NormalForm::ConicTwoLines { a: s("a")?, p: t("p")? },
        "four_lines" => NormalForm::FourLines { p: t("p")? },
        "fermat_line" => NormalForm::FermatLine { line: t("line")? },
        "nodal_cubic_line" => NormalForm::NodalCubicLine { line: t("line")? },
        other => return Err(CliError::parse(format!("unknown normal form {other:?}"))),
    };
    let pair = normal_form(&nf, tag)?;
    analyze_json(tag, &pair, vec![("case", json!(nf.name()))])
}

fn chisini<F: Field>(tag: F::Tag, phi3: Option<&str>, gamma: Option<&str>, p: &str) -> Result<Value, CliError> {
    let cubic = match (phi3, gamma) {
        (Some(s), _) => syntax::parse_with(s, |n| syntax::form::<F>(n, tag))?,
        (None, Some(g)) => hesse_cubic(&F::parse_in(g, tag).map_err(|e| CliError::parse(e.to_string()))?),
        (None, None) => return Err(CliError::usage("one of --phi3 or --gamma is required")),
    };
    let centre = syntax::parse_with(p, |n| syntax::point::<F>(n, tag))?;
    let f4 = chisini_quartic(&cubic, &centre)?;
    let (i, j) = family_invariants(&restrict_to_pencil(&f4, &centre).coeffs);
    let mut out = object(vec![
        ("cubic", render::form(&cubic)),
        ("quartic", render::form(&f4)),
        ("invariant_I", render::poly(&i)),
        ("invariant_J", render::poly(&j)),
        ("equianharmonic", json!(i.is_zero())),
    ]);
    let pair = QuarticPair::new(f4, centre, vec![])?;
    match analyze_json(tag, &pair, vec![]) {
        Ok(Value::Object(rep)) => out.extend(rep),
        Ok(_) => unreachable!(),
        Err(e) => {
            out.insert("field".into(), json!(F::describe_tag(tag)));
            out.insert("analysis_error".into(), e.to_json()["error"].clone());
        }
    }
    Ok(Value::Object(out))
}

fn c4<F: Field>(tag: F::Tag, g0: &str, g1: &str) -> Result<Value, CliError> {
    let g0 = syntax::parse_with(g0, |n| syntax::form::<F>(n, tag))?;
    let g1 = syntax::parse_with(g1, |n| syntax::form::<F>(n, tag))?;
    let c = pencil_c4(&g0, &g1)?;
    Ok(json!({
        "field": F::describe_tag(tag),
        "a1": render::poly(&c.a1),
        "a2": render::poly(&c.a2),
        "a3": render::poly(&c.a3),
        "a4": render::poly(&c.a4),
        "b2": render::poly(&c.b2),
        "b4": render::poly(&c.b4),
        "c4": render::poly(&c.c4),
    }))
}

fn int_or_string(q: &Rat) -> Value {
    match q.to_string().parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(q.to_string()),
    }
}

fn e8_verify(table: &str) -> Result<Value, CliError> {
    if table == "dynkin" {
        let labels: Vec<String> = (1..=8).map(|i| format!("r{i}")).collect();
        let graph = CartanGraph::standard();
        let rep = verify_dynkin_table(&graph, &DYNKIN_ROWS);
        let mut pairings = Vec::new();
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j { -2 } else { -1 };
                let actual = rep.matrix[i][j];
                pairings.push(json!({
                    "row": labels[i], "col": labels[j], "expected": expected, "actual": actual,
                    "status": if actual == expected { "ok" } else { "mismatch" },
                }));
            }
        }
        let attachments: Vec<String> = validating_attachments(&DYNKIN_ROWS).iter().map(|k| format!("x{}", k + 1)).collect();
        return Ok(json!({
            "table": "dynkin",
            "labels": labels,
            "rows": DYNKIN_ROWS.to_vec(),
            "edges": graph.edges.iter().map(|(a, b)| [graph.labels[*a].clone(), graph.labels[*b].clone()]).collect::<Vec<_>>(),
            "matrix": rep.matrix,
            "pairings": pairings,
            "validating_attachments": attachments,
            "status": if rep.ok() { "ok" } else { "mismatch" },
        }));
    }
    let t = if table == "eight" { eight_vector_table() } else { mixed24_table() };
    let rep = verify_table(&t);
    let mut pairings = Vec::new();
    for (i, row) in t.expected.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let Some(e) = e else { continue };
            let actual = &rep.matrix[i][j];
            let ok = *actual == Rat::from(*e);
            pairings.push(json!({
                "row": t.labels[i], "col": t.labels[j], "expected": e, "actual": int_or_string(actual),
                "status": if ok { "ok" } else { "mismatch" },
            }));
        }
    }
    let vectors: Vec<Value> =
        t.vectors.iter().map(|v| Value::Array(v.coords().iter().map(render::scalar).collect())).collect();
    Ok(json!({
        "table": rep.name,
        "labels": rep.labels,
        "vectors": vectors,
        "matrix": rep.matrix.iter().map(|r| r.iter().map(int_or_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "non_roots": rep.non_roots,
        "pairings": pairings,
        "notes": rep.notes,
        "status": if rep.ok() { "ok" } else { "mismatch" },
    }))
}

fn mw_height(b: usize, k: i64, components: &str) -> Result<Value, CliError> {
    let flags = SectionData::parse_flags(components)?;
    let s = SectionData::new(b, k, flags)?;
    let h = s.height()?;
    Ok(json!({
        "b": s.b(),
        "k": s.k,
        "m": s.m(),
        "components": components.to_ascii_uppercase(),
        "height": render::scalar(&h),
        "torsion": h.is_zero(),
        "order_two": s.order_two(),
        "sigma_self_intersection": sigma_self_intersection(k)?,
    }))
}

fn run(cli: Cli) -> Result<Value, CliError> {
    match cli.command {
        Command::Classify { field, a, b, weight } => in_field!(FieldSel::parse(&field)?, classify(&a, &b, weight)),
        Command::Gen { family, params, field } => gen(family, &params, field.as_deref()),
        Command::Quartic { command } => match command {
            QuarticCommand::Analyze { c, p, nodes, components, field } => {
                in_field!(FieldSel::parse(&field)?, quartic_analyze(&c, &p, nodes.as_deref(), components.as_deref()))
            }
            QuarticCommand::NormalForm { case, params, field } => {
                in_field!(FieldSel::parse(&field)?, normal_form_case(&case, &params))
            }
            QuarticCommand::Chisini { phi3, gamma, p, field } => {
                in_field!(FieldSel::parse(&field)?, chisini(phi3.as_deref(), gamma.as_deref(), &p))
            }
        },
        Command::Pencil { command: PencilCommand::C4 { g0, g1, field } } => in_field!(FieldSel::parse(&field)?, c4(&g0, &g1)),
        Command::E8 { command } => match command {
            E8Command::Enumerate => {
                let roots: Vec<Value> = enumerate_roots()
                    .iter()
                    .map(|r| Value::Array(r.coords().iter().map(render::scalar).collect()))
                    .collect();
                Ok(json!({ "count": roots.len(), "roots": roots }))
            }
            E8Command::Verify { table } => e8_verify(&table),
        },
        Command::Mw { command: MwCommand::Height { b, k, components } } => mw_height(b, k, &components),
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let msg = msg.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            emit(&CliError::usage(msg).to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&e.to_json());
            ExitCode::from(e.exit_code)
        }
    }
}
