//! JSON rendering. Scalars are strings in the input syntax so every report re-parses.

use ress_core::exactfield::Field;
use ress_core::planecurves::{ModelKind, NodeLines, PairReport, QuarticPair};
use ress_core::ternaryform::{PencilParam, Point3, TernaryForm};
use ress_core::unipoly::UniPoly;
use ress_core::weierstrass::{FibreReport, Locus, Order, WeierstrassModel};
use serde_json::{json, Map, Value};

pub fn scalar<F: Field>(x: &F) -> Value {
    Value::String(x.to_string())
}

pub fn poly<F: Field>(p: &UniPoly<F>) -> Value {
    Value::Array(p.coeffs().iter().map(scalar).collect())
}

pub fn form<F: Field>(f: &TernaryForm<F>) -> Value {
    let mut terms: Vec<Value> = f.terms().map(|(e, c)| json!([e[0], e[1], e[2], scalar(c)])).collect();
    terms.reverse();
    Value::Array(terms)
}

pub fn point<F: Field>(p: &Point3<F>) -> Value {
    Value::Array(p.normalized().iter().map(scalar).collect())
}

fn order(o: Order) -> Value {
    match o {
        Order::Finite(n) => json!(n),
        Order::Infinite => json!("inf"),
    }
}

pub fn locus<F: Field>(l: &Locus<F>) -> Value {
    match l {
        Locus::Finite(p) => poly(p),
        Locus::Infinity => json!("infinity"),
    }
}

pub fn param<F: Field>(m: &PencilParam<F>) -> Value {
    match m {
        PencilParam::Finite(x) => scalar(x),
        PencilParam::Infinity => json!("infinity"),
    }
}

pub fn model<F: Field>(m: &WeierstrassModel<F>) -> Value {
    json!({ "A": poly(m.a()), "B": poly(m.b()), "weight": m.weight() })
}

/// Adds `classes`, `special_type`, `euler_number` and `types` to `out`.
pub fn fibres<F: Field>(out: &mut Map<String, Value>, rep: &FibreReport<F>) {
    let classes: Vec<Value> = rep
        .classes
        .iter()
        .map(|c| {
            json!({
                "locus": locus(&c.locus),
                "ordA": order(c.ord_a),
                "ordB": order(c.ord_b),
                "ordD": c.ord_d,
                "type": c.kodaira.to_string(),
                "count": c.count,
            })
        })
        .collect();
    out.insert("classes".into(), Value::Array(classes));
    out.insert("special_type".into(), rep.special_type.map_or(Value::Null, |(a, b)| json!([a, b])));
    out.insert("euler_number".into(), json!(rep.euler_number()));
    out.insert("types".into(), json!(rep.type_multiset()));
}

fn node_lines<F: Field>(n: &NodeLines<F>) -> Value {
    json!({ "finite": poly(&n.finite), "at_infinity": n.at_infinity, "count": n.count() })
}

pub fn pair<F: Field>(out: &mut Map<String, Value>, pair: &QuarticPair<F>) {
    out.insert("curve".into(), form(&pair.curve));
    out.insert("centre".into(), point(&pair.centre));
    out.insert("declared_nodes".into(), Value::Array(pair.declared_nodes.iter().map(point).collect()));
    out.insert("components".into(), Value::Array(pair.components.iter().map(form).collect()));
}

pub fn pair_report<F: Field>(out: &mut Map<String, Value>, rep: &PairReport<F>) {
    let kind = match rep.kind {
        ModelKind::Split => "split",
        ModelKind::Ramified => "ramified",
    };
    out.insert("kind".into(), json!(kind));
    out.insert("model".into(), model(&rep.model));
    fibres(out, &rep.fibres);
    out.insert("node_count".into(), json!(rep.node_count));
    out.insert("node_lines".into(), node_lines(&rep.node_lines));
    out.insert("node_lines_i2".into(), json!(rep.node_lines_i2));
    out.insert("i2_count".into(), json!(rep.i2_count));
    out.insert("flex_line_count".into(), json!(rep.flex_line_count));
    out.insert("bitangent_count".into(), json!(rep.bitangent_count));
    let tangent = rep
        .tangent_line
        .as_ref()
        .map_or(Value::Null, |(m, k)| json!({ "param": param(m), "type": k.to_string() }));
    out.insert("tangent_line".into(), tangent);
}
