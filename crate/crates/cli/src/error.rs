use std::fmt;

use ress_core::binaryquartic::QuarticError;
use ress_core::exactfield::FieldError;
use ress_core::families::FamilyError;
use ress_core::lattice::LatticeError;
use ress_core::planecurves::CurveError;
use ress_core::ternaryform::FormError;
use ress_core::unipoly::PolyError;
use ress_core::weierstrass::WeierstrassError;
use serde_json::{json, Value};

/// An error document together with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub locus: Option<String>,
    pub exit_code: u8,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { kind: "parse".into(), message: message.into(), locus: None, exit_code: 2 }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: "usage".into(), message: message.into(), locus: None, exit_code: 2 }
    }

    pub fn domain(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into(), locus: None, exit_code: 1 }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message, "locus": self.locus } })
    }
}

/// Innermost variant name of an error, in snake case.
fn kind_of<E: fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    let mut rest = s.as_str();
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let (name, after) = rest.split_at(end);
        match after.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return snake(name),
        }
    }
}

fn snake(name: &str) -> String {
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_ascii_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

pub trait Domain: fmt::Debug + fmt::Display {
    fn locus(&self) -> Option<String> {
        None
    }

    fn is_parse(&self) -> bool {
        false
    }
}

impl<E: Domain> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError {
            kind: kind_of(&e),
            message: e.to_string(),
            locus: e.locus(),
            exit_code: if e.is_parse() { 2 } else { 1 },
        }
    }
}

impl Domain for WeierstrassError {
    fn locus(&self) -> Option<String> {
        match self {
            WeierstrassError::NonMinimal { locus } | WeierstrassError::InconsistentOrders { locus, .. } => {
                Some(locus.clone())
            }
            _ => None,
        }
    }
}

impl Domain for FieldError {
    fn is_parse(&self) -> bool {
        matches!(self, FieldError::Parse { .. })
    }
}

impl Domain for PolyError {}

impl Domain for FormError {}

impl Domain for QuarticError {
    fn locus(&self) -> Option<String> {
        match self {
            QuarticError::Weierstrass(w) => w.locus(),
            _ => None,
        }
    }
}

impl Domain for FamilyError {
    fn locus(&self) -> Option<String> {
        match self {
            FamilyError::Weierstrass(w) => w.locus(),
            _ => None,
        }
    }
}

impl Domain for CurveError {
    fn locus(&self) -> Option<String> {
        match self {
            CurveError::NotANode(p) => Some(p.clone()),
            CurveError::Weierstrass(w) => w.locus(),
            CurveError::Quartic(q) => q.locus(),
            _ => None,
        }
    }
}

impl Domain for LatticeError {
    fn is_parse(&self) -> bool {
        matches!(self, LatticeError::UnknownFlag(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_come_from_the_innermost_variant() {
        let e = CurveError::Weierstrass(WeierstrassError::NonMinimal { locus: "t".into() });
        let c = CliError::from(e);
        assert_eq!(c.kind, "non_minimal");
        assert_eq!(c.locus.as_deref(), Some("t"));
        assert_eq!(c.exit_code, 1);
        assert_eq!(CliError::from(CurveError::Inadmissible("x".into())).kind, "inadmissible");
        assert_eq!(CliError::from(LatticeError::UnknownFlag('x')).exit_code, 2);
    }
}
