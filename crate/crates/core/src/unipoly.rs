//! Dense univariate polynomials over an exact [`Field`].
//!
//! Coefficients are stored low to high with trailing zeros stripped, so the
//! zero polynomial has no coefficients and `degree()` is `None`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exactfield::{Field, FieldError, Rat};
use crate::linalg::det_bareiss;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("degree {degree} exceeds weight {weight}")]
    DegreeExceedsWeight { degree: usize, weight: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    coeffs: Vec<F>,
    tag: F::Tag,
}

/// One factor of a squarefree decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreePart<F: Field> {
    pub poly: UniPoly<F>,
    pub multiplicity: u32,
}

/// `f = lead * prod parts[i].poly ^ parts[i].multiplicity`, parts monic,
/// squarefree, pairwise coprime and listed by increasing multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition<F: Field> {
    pub lead: F,
    pub parts: Vec<SquarefreePart<F>>,
}

impl<F: Field> SquarefreeDecomposition<F> {
    pub fn reconstruct(&self) -> UniPoly<F> {
        self.parts.iter().fold(UniPoly::constant(self.lead.clone()), |acc, p| {
            acc * p.poly.pow(p.multiplicity)
        })
    }

    /// Product of the parts whose multiplicity is at least `k`.
    pub fn product_with_multiplicity_at_least(&self, k: u32) -> UniPoly<F> {
        let tag = self.lead.tag();
        self.parts
            .iter()
            .filter(|p| p.multiplicity >= k)
            .fold(UniPoly::one(tag), |acc, p| acc * &p.poly)
    }

    /// Squarefree kernel: product of all parts.
    pub fn radical(&self) -> UniPoly<F> {
        self.product_with_multiplicity_at_least(1)
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>, tag: F::Tag) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.tag() == tag));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs, tag }
    }

    pub fn zero(tag: F::Tag) -> Self {
        UniPoly { coeffs: Vec::new(), tag }
    }

    pub fn one(tag: F::Tag) -> Self {
        UniPoly::constant(F::one(tag))
    }

    pub fn constant(c: F) -> Self {
        let tag = c.tag();
        UniPoly::new(vec![c], tag)
    }

    /// `c * t^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let tag = c.tag();
        let mut v = vec![F::zero(tag); k];
        v.push(c);
        UniPoly::new(v, tag)
    }

    /// The indeterminate `t`.
    pub fn var(tag: F::Tag) -> Self {
        UniPoly::monomial(F::one(tag), 1)
    }

    /// `t - c`.
    pub fn linear_root(c: F) -> Self {
        let tag = c.tag();
        UniPoly::new(vec![-c, F::one(tag)], tag)
    }

    pub fn from_ints(coeffs: &[i64], tag: F::Tag) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| F::from_int(c, tag)).collect(), tag)
    }

    pub fn from_rats(coeffs: &[Rat], tag: F::Tag) -> Self {
        UniPoly::new(coeffs.iter().map(|c| F::from_rat(c.clone(), tag)).collect(), tag)
    }

    pub fn tag(&self) -> F::Tag {
        self.tag
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero(self.tag))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(self.tag), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &F) -> Self {
        UniPoly::new(self.coeffs.iter().map(|x| x.clone() * c).collect(), self.tag)
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        self.scale(&F::from_rat(q.clone(), self.tag))
    }

    /// Divide by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * F::from_int(i as i64, self.tag))
            .collect();
        UniPoly::new(v, self.tag)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::one(self.tag);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &UniPoly<F>) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(self.tag), |acc, c| &acc * g + &UniPoly::constant(c.clone()))
    }

    /// Euclidean division: `self = q * g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &UniPoly<F>) -> Result<(Self, Self), PolyError> {
        let lc = g.leading_coeff().ok_or(PolyError::DivisionByZero)?;
        let dg = g.coeffs.len() - 1;
        let lc_inv = lc.inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((UniPoly::zero(self.tag), self.clone()));
        }
        let mut q = vec![F::zero(self.tag); r.len() - dg];
        for i in (0..q.len()).rev() {
            let c = r[i + dg].clone() * &lc_inv;
            if !c.is_zero() {
                for (j, gj) in g.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * gj;
                }
            }
            q[i] = c;
        }
        r.truncate(dg);
        Ok((UniPoly::new(q, self.tag), UniPoly::new(r, self.tag)))
    }

    /// Quotient of an exact division.
    pub fn exact_div(&self, g: &UniPoly<F>) -> Result<Self, PolyError> {
        let (q, r) = self.divrem(g)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    /// Monic gcd; `gcd(f, 0)` is `f` made monic.
    pub fn gcd_monic(&self, g: &UniPoly<F>) -> Result<Self, PolyError> {
        if self.is_zero() && g.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero()
            && self
                .gcd_monic(&self.derivative())
                .map(|g| g.is_constant())
                .unwrap_or(false)
    }

    /// Yun's squarefree decomposition.
    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomposition<F>, PolyError> {
        let lead = self.leading_coeff().ok_or(PolyError::ZeroPolynomial)?.clone();
        let f = self.monic();
        let mut parts = Vec::new();
        if f.is_constant() {
            return Ok(SquarefreeDecomposition { lead, parts });
        }
        let df = f.derivative();
        let g = f.gcd_monic(&df)?;
        let mut c = f.exact_div(&g)?;
        let mut d = df.exact_div(&g)? - c.derivative();
        let mut i = 1u32;
        while !c.is_constant() {
            let a = c.gcd_monic(&d)?;
            c = c.exact_div(&a)?;
            d = d.exact_div(&a)? - c.derivative();
            if !a.is_constant() {
                parts.push(SquarefreePart { poly: a, multiplicity: i });
            }
            i += 1;
        }
        Ok(SquarefreeDecomposition { lead, parts })
    }

    /// `(c, S)` with `self = c * S^2` and `S` monic, if such a factorization exists.
    pub fn exact_square_root(&self) -> Result<Option<(F, Self)>, PolyError> {
        let sfd = self.squarefree_decomposition()?;
        if sfd.parts.iter().any(|p| p.multiplicity % 2 == 1) {
            return Ok(None);
        }
        let s = sfd
            .parts
            .iter()
            .fold(UniPoly::one(self.tag), |acc, p| acc * p.poly.pow(p.multiplicity / 2));
        Ok(Some((sfd.lead, s)))
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, g: &UniPoly<F>) -> Result<F, PolyError> {
        let (Some(m), Some(n)) = (self.degree(), g.degree()) else {
            return Err(PolyError::ZeroPolynomial);
        };
        Ok(sylvester_resultant(&self.coeffs, m, &g.coeffs, n, self.tag))
    }

    /// `sum c_i (a t + b)^i (c t + d)^(w - i)`, the weight-`w` Moebius transform.
    pub fn homogeneous_substitution(&self, weight: usize, m: [&F; 4]) -> Result<Self, PolyError> {
        if let Some(deg) = self.degree() {
            if deg > weight {
                return Err(PolyError::DegreeExceedsWeight { degree: deg, weight });
            }
        }
        let num = UniPoly::new(vec![m[1].clone(), m[0].clone()], self.tag);
        let den = UniPoly::new(vec![m[3].clone(), m[2].clone()], self.tag);
        let mut acc = UniPoly::zero(self.tag);
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = num.pow(i as u32) * den.pow((weight - i) as u32);
            acc = acc + term.scale(c);
        }
        Ok(acc)
    }

    /// Lagrange interpolation through points with distinct abscissae.
    pub fn interpolate(points: &[(F, F)], tag: F::Tag) -> Result<Self, PolyError> {
        let mut acc = UniPoly::zero(tag);
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = UniPoly::one(tag);
            let mut denom = F::one(tag);
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis * UniPoly::linear_root(xj.clone());
                    denom = denom * (xi.clone() - xj);
                }
            }
            acc = acc + basis.scale(&(yi.clone() * &denom.inv()?));
        }
        Ok(acc)
    }
}

/// Resultant of two coefficient vectors (low to high) with formal degrees
/// `m` and `n`, so vanishing leading coefficients are honoured.
pub fn sylvester_resultant<F: Field>(f: &[F], m: usize, g: &[F], n: usize, tag: F::Tag) -> F {
    let size = m + n;
    let at = |v: &[F], i: usize| v.get(i).cloned().unwrap_or_else(|| F::zero(tag));
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![F::zero(tag); size];
        for k in 0..=m {
            row[shift + k] = at(f, m - k);
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![F::zero(tag); size];
        for k in 0..=n {
            row[shift + k] = at(g, n - k);
        }
        rows.push(row);
    }
    det_bareiss(rows, tag)
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn add_coeffs<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>, negate_b: bool) -> UniPoly<F> {
    assert_eq!(a.tag, b.tag, "field mismatch in polynomial arithmetic");
    let n = a.coeffs.len().max(b.coeffs.len());
    let v = (0..n)
        .map(|i| {
            let x = a.coeff(i);
            let y = b.coeff(i);
            if negate_b {
                x - y
            } else {
                x + y
            }
        })
        .collect();
    UniPoly::new(v, a.tag)
}

fn mul_coeffs<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>) -> UniPoly<F> {
    assert_eq!(a.tag, b.tag, "field mismatch in polynomial arithmetic");
    if a.is_zero() || b.is_zero() {
        return UniPoly::zero(a.tag);
    }
    let mut v = vec![F::zero(a.tag); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            v[i + j] = v[i + j].clone() + x.clone() * y;
        }
    }
    UniPoly::new(v, a.tag)
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl<'a, F: Field> $tr<&'a UniPoly<F>> for &'a UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: &'a UniPoly<F>) -> UniPoly<F> {
                $f(self, rhs)
            }
        }
        impl<'a, F: Field> $tr<&'a UniPoly<F>> for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: &'a UniPoly<F>) -> UniPoly<F> {
                $f(&self, rhs)
            }
        }
        impl<F: Field> $tr<UniPoly<F>> for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: UniPoly<F>) -> UniPoly<F> {
                $f(&self, &rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a, b| add_coeffs(a, b, false));
poly_binop!(Sub, sub, |a, b| add_coeffs(a, b, true));
poly_binop!(Mul, mul, mul_coeffs);

impl<F: Field> Neg for UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        UniPoly::new(self.coeffs.into_iter().map(|c| -c).collect(), self.tag)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::QuadExt;

    fn p(c: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_ints(c, ())
    }

    #[test]
    fn yun_on_repeated_roots() {
        // t^2 (t-1)^3
        let f = p(&[0, 1]).pow(2) * p(&[-1, 1]).pow(3);
        let sfd = f.squarefree_decomposition().unwrap();
        assert_eq!(sfd.lead, Rat::from(1));
        assert_eq!(sfd.parts.len(), 2);
        assert_eq!(sfd.parts[0], SquarefreePart { poly: p(&[0, 1]), multiplicity: 2 });
        assert_eq!(sfd.parts[1], SquarefreePart { poly: p(&[-1, 1]), multiplicity: 3 });
    }

    #[test]
    fn yun_keeps_leading_coefficient() {
        let f = p(&[-1, 0, 1]).pow(2).scale(&Rat::from(4));
        let sfd = f.squarefree_decomposition().unwrap();
        assert_eq!(sfd.lead, Rat::from(4));
        assert_eq!(sfd.parts, vec![SquarefreePart { poly: p(&[-1, 0, 1]), multiplicity: 2 }]);
        assert_eq!(sfd.reconstruct(), f);
    }

    #[test]
    fn square_roots() {
        let f = p(&[1, 0, 1]).pow(2).scale(&Rat::from(9));
        assert_eq!(f.exact_square_root().unwrap(), Some((Rat::from(9), p(&[1, 0, 1]))));
        assert_eq!(p(&[0, 0, 0, 1]).exact_square_root().unwrap(), None);
    }

    #[test]
    fn resultant_of_linear_polynomials() {
        let a = Rat::from(7);
        let b = Rat::from(-2);
        let r = UniPoly::linear_root(a.clone()).resultant(&UniPoly::linear_root(b.clone())).unwrap();
        assert_eq!(r, a - b);
    }

    #[test]
    fn resultant_matches_product_over_roots() {
        // res(f, g) = lc(f)^deg g * prod g(root) for f = 2 (t-1)(t+3)(t-4)
        let roots = [1, -3, 4];
        let f = roots
            .iter()
            .fold(p(&[2]), |acc, &r| acc * UniPoly::linear_root(Rat::from(r)));
        let g = p(&[5, -1, 0, 3, 2]);
        let expected = roots
            .iter()
            .fold(Rat::from(2).pow(4), |acc, &r| acc * g.eval(&Rat::from(r)));
        assert_eq!(f.resultant(&g).unwrap(), expected);
    }

    #[test]
    fn gcd_conventions() {
        let f = p(&[2, 4]);
        assert_eq!(f.gcd_monic(&UniPoly::zero(())).unwrap(), p(&[1, 2]).monic());
        assert_eq!(
            UniPoly::<Rat>::zero(()).gcd_monic(&UniPoly::zero(())),
            Err(PolyError::ZeroPolynomial)
        );
        let g = p(&[-1, 0, 1]);
        let h = p(&[1, 2, 1]);
        assert_eq!(g.gcd_monic(&h).unwrap(), p(&[1, 1]));
    }

    #[test]
    fn divrem_reconstructs() {
        let f = p(&[3, 0, -2, 5, 1]);
        let g = p(&[1, 2]);
        let (q, r) = f.divrem(&g).unwrap();
        assert_eq!(&q * &g + &r, f);
        assert!(r.degree().unwrap_or(0) < 1);
        assert_eq!(f.divrem(&UniPoly::zero(())), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[1, -2, 0, 3]);
        let pts: Vec<_> = (0..4).map(|i| (Rat::from(i), f.eval(&Rat::from(i)))).collect();
        assert_eq!(UniPoly::interpolate(&pts, ()).unwrap(), f);
    }

    #[test]
    fn moebius_substitution() {
        // weight 2 transform of t by t -> 1/t gives 1 * t^1
        let f = p(&[0, 1]);
        let one = Rat::from(1);
        let zero = Rat::from(0);
        let g = f.homogeneous_substitution(2, [&zero, &one, &one, &zero]).unwrap();
        assert_eq!(g, p(&[0, 1]));
        let h = p(&[1, 0, 1]).homogeneous_substitution(2, [&zero, &one, &one, &zero]).unwrap();
        assert_eq!(h, p(&[1, 0, 1]));
        assert!(p(&[0, 0, 0, 1]).homogeneous_substitution(2, [&one, &zero, &zero, &one]).is_err());
    }

    #[test]
    fn works_over_quadratic_field() {
        let w = QuadExt::omega(-3).unwrap();
        let f = UniPoly::linear_root(w.clone()) * UniPoly::linear_root(-w.clone());
        assert_eq!(f, UniPoly::from_ints(&[3, 0, 1], -3));
        assert!(f.is_squarefree());
    }
}
