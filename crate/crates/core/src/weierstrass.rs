//! Weierstrass models `y^2 = x^3 + A(t) x + B(t)` over the projective
//! `t`-line and root-free Kodaira classification of their singular fibres.
//!
//! A model of weight `w` has `deg A <= 4w` and `deg B <= 6w`; the place at
//! infinity is read off from the degree deficiency. Rational elliptic
//! surfaces are the minimal models of weight 1.

use std::fmt;

use thiserror::Error;

use crate::exactfield::Field;
use crate::unipoly::{PolyError, SquarefreePart, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeierstrassError {
    #[error("discriminant 4A^3 + 27B^2 vanishes identically")]
    IdenticallySingular,
    #[error("degrees ({deg_a}, {deg_b}) exceed the weight-{weight} bounds")]
    DegreeOutOfRange { deg_a: usize, deg_b: usize, weight: u32 },
    #[error("non-minimal place at {locus}")]
    NonMinimal { locus: String },
    #[error("minimalization stopped at weight {weight}; the model is not rational")]
    NotRational { weight: u32 },
    #[error("vanishing orders ({ord_a}, {ord_b}, {ord_d}) at {locus} match no Kodaira type")]
    InconsistentOrders { ord_a: Order, ord_b: Order, ord_d: u32, locus: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Vanishing order of `A` or `B`, infinite when the coefficient is identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Order::Finite(n) => n >= k,
            Order::Infinite => true,
        }
    }

    pub fn is(self, k: u32) -> bool {
        self == Order::Finite(k)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    /// `I_n`; `I_0` is a smooth fibre.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

/// Kodaira type from the vanishing orders of `A`, `B` and the discriminant.
///
/// Returns `None` for a non-minimal place (`ord A >= 4`, `ord B >= 6`) or a
/// triple that cannot occur.
pub fn kodaira_type(a: Order, b: Order, d: u32) -> Option<Kodaira> {
    if a.at_least(4) && b.at_least(6) {
        return None;
    }
    let t = if d == 0 {
        Kodaira::I(0)
    } else if a.is(0) && b.is(0) {
        Kodaira::I(d)
    } else if a.at_least(1) && b.is(1) && d == 2 {
        Kodaira::II
    } else if a.is(1) && b.at_least(2) && d == 3 {
        Kodaira::III
    } else if a.at_least(2) && b.is(2) && d == 4 {
        Kodaira::IV
    } else if (a.at_least(2) && b.is(3) && d == 6) || (a.is(2) && b.at_least(4) && d == 6) {
        Kodaira::IStar(0)
    } else if a.is(2) && b.is(3) && d > 6 {
        Kodaira::IStar(d - 6)
    } else if a.at_least(3) && b.is(4) && d == 8 {
        Kodaira::IVStar
    } else if a.is(3) && b.at_least(5) && d == 9 {
        Kodaira::IIIStar
    } else if a.at_least(4) && b.is(5) && d == 10 {
        Kodaira::IIStar
    } else {
        return None;
    };
    Some(t)
}

/// Support of a fibre class: the roots of a monic squarefree polynomial, or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locus<F: Field> {
    Finite(UniPoly<F>),
    Infinity,
}

impl<F: Field> fmt::Display for Locus<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Finite(p) => write!(f, "{p}"),
            Locus::Infinity => write!(f, "infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreClass<F: Field> {
    pub locus: Locus<F>,
    pub ord_a: Order,
    pub ord_b: Order,
    pub ord_d: u32,
    pub kodaira: Kodaira,
    /// Number of geometric points in the locus.
    pub count: usize,
}

impl<F: Field> FibreClass<F> {
    pub fn is_singular(&self) -> bool {
        self.ord_d > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreReport<F: Field> {
    pub classes: Vec<FibreClass<F>>,
    /// `(a, b)` = numbers of `II` and `I2` fibres when these are the only singular fibres.
    pub special_type: Option<(usize, usize)>,
}

impl<F: Field> FibreReport<F> {
    pub fn singular_classes(&self) -> impl Iterator<Item = &FibreClass<F>> {
        self.classes.iter().filter(|c| c.is_singular())
    }

    /// Number of geometric fibres of the given type.
    pub fn count_of(&self, k: Kodaira) -> usize {
        self.classes.iter().filter(|c| c.kodaira == k).map(|c| c.count).sum()
    }

    /// `sum count * ord D`, which is `12 w` for a model of weight `w`.
    pub fn euler_number(&self) -> usize {
        self.classes.iter().map(|c| c.count * c.ord_d as usize).sum()
    }

    /// Class containing the fibre over a finite parameter value or infinity.
    pub fn class_at(&self, m: Option<&F>) -> Option<&FibreClass<F>> {
        self.classes.iter().find(|c| match (&c.locus, m) {
            (Locus::Infinity, None) => true,
            (Locus::Finite(p), Some(x)) => p.eval(x).is_zero(),
            _ => false,
        })
    }

    /// Sorted multiset of singular fibre types, counted with multiplicity.
    pub fn type_multiset(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .singular_classes()
            .flat_map(|c| std::iter::repeat(c.kodaira.to_string()).take(c.count))
            .collect();
        v.sort();
        v
    }
}

/// `4 A^3 + 27 B^2`.
pub fn discriminant<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>) -> Result<UniPoly<F>, WeierstrassError> {
    let tag = a.tag();
    let d = a.pow(3).scale(&F::from_int(4, tag)) + b.pow(2).scale(&F::from_int(27, tag));
    if d.is_zero() {
        Err(WeierstrassError::IdenticallySingular)
    } else {
        Ok(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassModel<F: Field> {
    a: UniPoly<F>,
    b: UniPoly<F>,
    weight: u32,
}

impl<F: Field> WeierstrassModel<F> {
    pub fn new(a: UniPoly<F>, b: UniPoly<F>) -> Result<Self, WeierstrassError> {
        WeierstrassModel::with_weight(a, b, 1)
    }

    pub fn with_weight(a: UniPoly<F>, b: UniPoly<F>, weight: u32) -> Result<Self, WeierstrassError> {
        let (da, db) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
        let w = weight as usize;
        if weight == 0 || da > 4 * w || db > 6 * w {
            return Err(WeierstrassError::DegreeOutOfRange { deg_a: da, deg_b: db, weight });
        }
        discriminant(&a, &b)?;
        Ok(WeierstrassModel { a, b, weight })
    }

    pub fn a(&self) -> &UniPoly<F> {
        &self.a
    }

    pub fn b(&self) -> &UniPoly<F> {
        &self.b
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn tag(&self) -> F::Tag {
        self.a.tag()
    }

    pub fn discriminant(&self) -> UniPoly<F> {
        discriminant(&self.a, &self.b).expect("checked at construction")
    }

    fn orders_at_infinity(&self) -> (Order, Order, u32) {
        let w = self.weight as usize;
        let ord = |p: &UniPoly<F>, k: usize| match p.degree() {
            None => Order::Infinite,
            Some(d) => Order::Finite((k * w - d) as u32),
        };
        let dd = self.discriminant().degree().expect("nonzero");
        (ord(&self.a, 4), ord(&self.b, 6), (12 * w - dd) as u32)
    }

    /// Vanishing orders `(ord A, ord B, ord D)` at a finite point.
    pub fn orders_at(&self, m: &F) -> (Order, Order, u32) {
        let ord = |p: &UniPoly<F>| {
            if p.is_zero() {
                return Order::Infinite;
            }
            let lin = UniPoly::linear_root(m.clone());
            let mut q = p.clone();
            let mut k = 0;
            while q.eval(m).is_zero() {
                q = q.exact_div(&lin).expect("root");
                k += 1;
            }
            Order::Finite(k)
        };
        let Order::Finite(d) = ord(&self.discriminant()) else {
            unreachable!("nonzero discriminant")
        };
        (ord(&self.a), ord(&self.b), d)
    }

    /// Root-free classification of all singular fibres plus the fibre at infinity.
    pub fn classify_fibres(&self) -> Result<FibreReport<F>, WeierstrassError> {
        let disc = self.discriminant();
        let d_parts = disc.squarefree_decomposition()?.parts;
        let a_parts = parts_or_infinite(&self.a)?;
        let b_parts = parts_or_infinite(&self.b)?;
        let mut classes = Vec::new();
        for dp in d_parts {
            for (qa, oa) in split_by_orders(&dp.poly, a_parts.as_deref())? {
                for (qb, ob) in split_by_orders(&qa, b_parts.as_deref())? {
                    let count = qb.degree().expect("non-constant");
                    let locus = Locus::Finite(qb);
                    let kodaira = classify_triple(oa, ob, dp.multiplicity, &locus)?;
                    classes.push(FibreClass {
                        locus,
                        ord_a: oa,
                        ord_b: ob,
                        ord_d: dp.multiplicity,
                        kodaira,
                        count,
                    });
                }
            }
        }
        let (oa, ob, od) = self.orders_at_infinity();
        let kodaira = classify_triple(oa, ob, od, &Locus::<F>::Infinity)?;
        classes.push(FibreClass { locus: Locus::Infinity, ord_a: oa, ord_b: ob, ord_d: od, kodaira, count: 1 });
        let special_type = special_type_of(&classes);
        Ok(FibreReport { classes, special_type })
    }

    /// Absorb non-minimal places, lowering the weight by one for each.
    pub fn minimalize(&self) -> Result<Self, WeierstrassError> {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut weight = self.weight;
        loop {
            let l = nonminimal_locus(&a, &b)?;
            if let Some(deg) = l.degree().filter(|&d| d > 0) {
                if deg as u32 >= weight {
                    return Err(WeierstrassError::NotRational { weight: 0 });
                }
                a = a.exact_div(&l.pow(4))?;
                b = b.exact_div(&l.pow(6))?;
                weight -= deg as u32;
                continue;
            }
            let probe = WeierstrassModel { a: a.clone(), b: b.clone(), weight };
            let (oa, ob, _) = probe.orders_at_infinity();
            if oa.at_least(4) && ob.at_least(6) {
                if weight == 1 {
                    return Err(WeierstrassError::NotRational { weight: 0 });
                }
                weight -= 1;
                continue;
            }
            break;
        }
        if weight != 1 {
            return Err(WeierstrassError::NotRational { weight });
        }
        WeierstrassModel::with_weight(a, b, weight)
    }

    /// Quadratic twist `(u^2 A, u^3 B)`.
    pub fn twist(&self, u: &F) -> Result<Self, WeierstrassError> {
        WeierstrassModel::with_weight(self.a.scale(&u.pow(2)), self.b.scale(&u.pow(3)), self.weight)
    }

    /// Pull back along `t -> (a t + b) / (c t + d)`.
    pub fn mobius(&self, m: [&F; 4]) -> Result<Self, WeierstrassError> {
        let w = self.weight as usize;
        let a = self.a.homogeneous_substitution(4 * w, m)?;
        let b = self.b.homogeneous_substitution(6 * w, m)?;
        WeierstrassModel::with_weight(a, b, self.weight)
    }
}

fn classify_triple<F: Field>(oa: Order, ob: Order, od: u32, locus: &Locus<F>) -> Result<Kodaira, WeierstrassError> {
    if oa.at_least(4) && ob.at_least(6) {
        return Err(WeierstrassError::NonMinimal { locus: locus.to_string() });
    }
    kodaira_type(oa, ob, od).ok_or_else(|| WeierstrassError::InconsistentOrders {
        ord_a: oa,
        ord_b: ob,
        ord_d: od,
        locus: locus.to_string(),
    })
}

fn special_type_of<F: Field>(classes: &[FibreClass<F>]) -> Option<(usize, usize)> {
    let mut a = 0;
    let mut b = 0;
    for c in classes.iter().filter(|c| c.is_singular()) {
        match (c.kodaira, c.ord_d) {
            (Kodaira::II, 2) => a += c.count,
            (Kodaira::I(2), 2) => b += c.count,
            _ => return None,
        }
    }
    Some((a, b))
}

fn parts_or_infinite<F: Field>(p: &UniPoly<F>) -> Result<Option<Vec<SquarefreePart<F>>>, PolyError> {
    if p.is_zero() {
        Ok(None)
    } else {
        Ok(Some(p.squarefree_decomposition()?.parts))
    }
}

/// Split a squarefree locus by the exact vanishing order of a coefficient.
fn split_by_orders<F: Field>(
    locus: &UniPoly<F>,
    parts: Option<&[SquarefreePart<F>]>,
) -> Result<Vec<(UniPoly<F>, Order)>, PolyError> {
    let Some(parts) = parts else {
        return Ok(vec![(locus.clone(), Order::Infinite)]);
    };
    let mut rest = locus.clone();
    let mut out = Vec::new();
    for part in parts {
        let g = rest.gcd_monic(&part.poly)?;
        if !g.is_constant() {
            rest = rest.exact_div(&g)?;
            out.push((g, Order::Finite(part.multiplicity)));
        }
    }
    if !rest.is_constant() {
        out.push((rest.monic(), Order::Finite(0)));
    }
    Ok(out)
}

/// Monic squarefree polynomial whose roots are the finite places with `ord A >= 4`, `ord B >= 6`.
fn nonminimal_locus<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>) -> Result<UniPoly<F>, PolyError> {
    let high = |p: &UniPoly<F>, k: u32| -> Result<Option<UniPoly<F>>, PolyError> {
        if p.is_zero() {
            Ok(None)
        } else {
            Ok(Some(p.squarefree_decomposition()?.product_with_multiplicity_at_least(k)))
        }
    };
    Ok(match (high(a, 4)?, high(b, 6)?) {
        (Some(x), Some(y)) => x.gcd_monic(&y)?,
        (None, Some(y)) => y,
        (Some(x), None) => x,
        (None, None) => UniPoly::one(a.tag()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Rat;

    fn p(c: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_ints(c, ())
    }

    #[test]
    fn constant_cusp_model_is_singular() {
        assert_eq!(discriminant(&p(&[-3]), &p(&[2])), Err(WeierstrassError::IdenticallySingular));
    }

    #[test]
    fn six_cusps() {
        let w = WeierstrassModel::new(p(&[]), p(&[-1, 0, 0, 0, 0, 0, 1])).unwrap();
        let r = w.classify_fibres().unwrap();
        assert_eq!(r.special_type, Some((6, 0)));
        let first = &r.classes[0];
        assert_eq!(first.locus, Locus::Finite(p(&[-1, 0, 0, 0, 0, 0, 1])));
        assert_eq!((first.kodaira, first.count), (Kodaira::II, 6));
        let inf = r.classes.last().unwrap();
        assert_eq!((inf.ord_a, inf.ord_b, inf.ord_d, inf.kodaira), (Order::Infinite, Order::Finite(0), 0, Kodaira::I(0)));
        assert_eq!(r.euler_number(), 12);
    }

    #[test]
    fn non_minimal_place_is_reported() {
        let w = WeierstrassModel::new(p(&[0, 0, 0, 0, 1]), p(&[0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert!(matches!(w.classify_fibres(), Err(WeierstrassError::NonMinimal { .. })));
    }

    #[test]
    fn kodaira_table() {
        use Order::{Finite as F, Infinite as Inf};
        assert_eq!(kodaira_type(F(0), F(0), 3), Some(Kodaira::I(3)));
        assert_eq!(kodaira_type(Inf, F(1), 2), Some(Kodaira::II));
        assert_eq!(kodaira_type(F(1), F(3), 3), Some(Kodaira::III));
        assert_eq!(kodaira_type(F(2), F(2), 4), Some(Kodaira::IV));
        assert_eq!(kodaira_type(F(3), F(3), 6), Some(Kodaira::IStar(0)));
        assert_eq!(kodaira_type(F(2), F(5), 6), Some(Kodaira::IStar(0)));
        assert_eq!(kodaira_type(F(2), F(3), 9), Some(Kodaira::IStar(3)));
        assert_eq!(kodaira_type(F(5), F(4), 8), Some(Kodaira::IVStar));
        assert_eq!(kodaira_type(F(3), Inf, 9), Some(Kodaira::IIIStar));
        assert_eq!(kodaira_type(Inf, F(5), 10), Some(Kodaira::IIStar));
        assert_eq!(kodaira_type(F(4), F(6), 12), None);
        assert_eq!(kodaira_type(F(1), F(1), 3), None);
    }

    #[test]
    fn minimalize_absorbs_a_finite_place() {
        let a0 = p(&[1, 2, 0, -1, 3]);
        let b0 = p(&[5, 0, 1, 0, 0, -2, 1]);
        let t4 = p(&[0, 1]).pow(4);
        let t6 = p(&[0, 1]).pow(6);
        let big = WeierstrassModel::with_weight(&a0 * &t4, &b0 * &t6, 2).unwrap();
        let m = big.minimalize().unwrap();
        assert_eq!(m, WeierstrassModel::new(a0, b0).unwrap());
    }

    #[test]
    fn minimalize_absorbs_infinity() {
        let a0 = p(&[1, 2, 0, -1, 3]);
        let b0 = p(&[5, 0, 1, 0, 0, -2, 1]);
        let big = WeierstrassModel::with_weight(a0.clone(), b0.clone(), 2).unwrap();
        assert_eq!(big.minimalize().unwrap(), WeierstrassModel::new(a0, b0).unwrap());
    }

    #[test]
    fn minimal_weight_two_model_is_not_rational() {
        let a = p(&[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let b = p(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let k3 = WeierstrassModel::with_weight(a, b, 2).unwrap();
        assert_eq!(k3.minimalize(), Err(WeierstrassError::NotRational { weight: 2 }));
    }

    #[test]
    fn orders_at_points() {
        let w = WeierstrassModel::new(p(&[0, 0, 1]), p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(w.orders_at(&Rat::from(0)), (Order::Finite(2), Order::Finite(3), 6));
        let r = w.classify_fibres().unwrap();
        assert_eq!(r.class_at(Some(&Rat::from(0))).unwrap().kodaira, Kodaira::IStar(0));
    }
}
