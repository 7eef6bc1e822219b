//! Homogeneous ternary forms, projective points and pencils of lines.
//!
//! A pencil of lines through a point `p` is parametrized after a linear
//! change of coordinates sending `p` to `(0:0:1)`: the line with slope `m`
//! is `{(s : m s : t)}` and the residual line `x = 0` is the point at
//! infinity of the parameter.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exactfield::{Field, FieldError};
use crate::linalg::{self, Mat3};
use crate::unipoly::{PolyError, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("derivative of a degree-0 form")]
    DegreeZero,
    #[error("monomial exponents {exps:?} do not sum to degree {degree}")]
    InhomogeneousTerm { exps: [u32; 3], degree: u32 },
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("the point coincides with the pencil centre")]
    PointIsCentre,
    #[error("forms of degree {0} and {1} cannot be added")]
    DegreeMismatch(u32, u32),
    #[error("the line is a component of the curve")]
    LineIsComponent,
    #[error("empty term list: degree cannot be inferred")]
    EmptyTermList,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Point of the projective plane; equality is proportionality.
#[derive(Clone)]
pub struct Point3<F: Field> {
    coords: [F; 3],
}

impl<F: Field> Point3<F> {
    pub fn new(coords: [F; 3]) -> Result<Self, FormError> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(FormError::ZeroPoint);
        }
        Ok(Point3 { coords })
    }

    pub fn from_ints(c: [i64; 3], tag: F::Tag) -> Result<Self, FormError> {
        Point3::new(c.map(|x| F::from_int(x, tag)))
    }

    pub fn coords(&self) -> &[F; 3] {
        &self.coords
    }

    pub fn tag(&self) -> F::Tag {
        self.coords[0].tag()
    }

    /// Representative whose first nonzero coordinate is 1.
    pub fn normalized(&self) -> [F; 3] {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero point");
        let inv = lead.inv().expect("nonzero");
        self.coords.clone().map(|c| c * &inv)
    }
}

impl<F: Field> PartialEq for Point3<F> {
    fn eq(&self, other: &Self) -> bool {
        linalg::cross(&self.coords, &other.coords).iter().all(|c| c.is_zero())
    }
}

impl<F: Field> Eq for Point3<F> {}

impl<F: Field> fmt::Display for Point3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "({a} : {b} : {c})")
    }
}

impl<F: Field> fmt::Debug for Point3<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Homogeneous form in `x, y, z`, stored as exponent triple to nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryForm<F: Field> {
    degree: u32,
    terms: BTreeMap<[u32; 3], F>,
    tag: F::Tag,
}

impl<F: Field> TernaryForm<F> {
    pub fn zero(degree: u32, tag: F::Tag) -> Self {
        TernaryForm { degree, terms: BTreeMap::new(), tag }
    }

    pub fn from_terms<I>(degree: u32, terms: I, tag: F::Tag) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = ([u32; 3], F)>,
    {
        let mut f = TernaryForm::zero(degree, tag);
        for (exps, c) in terms {
            if exps.iter().sum::<u32>() != degree {
                return Err(FormError::InhomogeneousTerm { exps, degree });
            }
            c.check_same(&F::zero(tag))?;
            f.add_term(exps, c);
        }
        Ok(f)
    }

    /// Build from `(i, j, k, c)` tuples meaning `c x^i y^j z^k`, inferring the degree.
    pub fn from_term_list(terms: Vec<(u32, u32, u32, F)>) -> Result<Self, FormError> {
        let first = terms.first().ok_or(FormError::EmptyTermList)?;
        let degree = first.0 + first.1 + first.2;
        let tag = first.3.tag();
        TernaryForm::from_terms(degree, terms.into_iter().map(|(i, j, k, c)| ([i, j, k], c)), tag)
    }

    pub fn from_int_terms(terms: &[(u32, u32, u32, i64)], tag: F::Tag) -> Result<Self, FormError> {
        TernaryForm::from_term_list(
            terms.iter().map(|&(i, j, k, c)| (i, j, k, F::from_int(c, tag))).collect(),
        )
    }

    /// The linear form `l0 x + l1 y + l2 z`.
    pub fn linear(l: &[F; 3]) -> Self {
        let tag = l[0].tag();
        let mut f = TernaryForm::zero(1, tag);
        for (i, c) in l.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            f.add_term(e, c.clone());
        }
        f
    }

    pub fn constant(c: F) -> Self {
        let tag = c.tag();
        let mut f = TernaryForm::zero(0, tag);
        f.add_term([0, 0, 0], c);
        f
    }

    fn add_term(&mut self, exps: [u32; 3], c: F) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(|| F::zero(self.tag));
        *entry = entry.clone() + &c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn tag(&self) -> F::Tag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: [u32; 3]) -> F {
        self.terms.get(&exps).cloned().unwrap_or_else(|| F::zero(self.tag))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut f = TernaryForm::zero(self.degree, self.tag);
        for (e, x) in &self.terms {
            f.add_term(*e, x.clone() * c);
        }
        f
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(TernaryForm::constant(F::one(self.tag)), |acc, _| &acc * self)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FormError> {
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch(self.degree, other.degree));
        }
        let mut f = self.clone();
        for (e, x) in &other.terms {
            f.add_term(*e, x.clone());
        }
        Ok(f)
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, var: usize) -> Result<Self, FormError> {
        if self.degree == 0 {
            return Err(FormError::DegreeZero);
        }
        let mut f = TernaryForm::zero(self.degree - 1, self.tag);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = *e;
                e2[var] -= 1;
                f.add_term(e2, c.clone() * F::from_int(e[var] as i64, self.tag));
            }
        }
        Ok(f)
    }

    pub fn gradient(&self) -> Result<[Self; 3], FormError> {
        Ok([self.partial(0)?, self.partial(1)?, self.partial(2)?])
    }

    pub fn evaluate(&self, v: &[F; 3]) -> F {
        let mut acc = F::zero(self.tag);
        for (e, c) in &self.terms {
            acc = acc + c.clone() * v[0].pow(e[0]) * v[1].pow(e[1]) * v[2].pow(e[2]);
        }
        acc
    }

    /// First polar `p . grad f`.
    pub fn polar(&self, p: &Point3<F>) -> Result<Self, FormError> {
        let g = self.gradient()?;
        let mut acc = TernaryForm::zero(self.degree - 1, self.tag);
        for (gi, pi) in g.iter().zip(p.coords()) {
            acc = acc.checked_add(&gi.scale(pi))?;
        }
        Ok(acc)
    }

    /// `f(M v)`: substitute old coordinates `M * (x, y, z)`.
    pub fn linear_substitution(&self, m: &Mat3<F>) -> Self {
        let lin: Vec<TernaryForm<F>> = (0..3).map(|r| TernaryForm::linear(&m[r])).collect();
        let mut powers: Vec<Vec<TernaryForm<F>>> = Vec::with_capacity(3);
        for l in &lin {
            let mut v = vec![TernaryForm::constant(F::one(self.tag))];
            for k in 1..=self.degree as usize {
                let next = &v[k - 1] * l;
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = TernaryForm::zero(self.degree, self.tag);
        for (e, c) in &self.terms {
            let term = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize];
            acc = acc.checked_add(&term.scale(c)).expect("same degree");
        }
        acc
    }
}

impl<F: Field> fmt::Display for TernaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["x", "y", "z"];
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, &k) in names.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for TernaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a, F: Field> Add<&'a TernaryForm<F>> for &'a TernaryForm<F> {
    type Output = TernaryForm<F>;
    fn add(self, rhs: &'a TernaryForm<F>) -> TernaryForm<F> {
        self.checked_add(rhs).expect("degree mismatch")
    }
}

impl<'a, F: Field> Sub<&'a TernaryForm<F>> for &'a TernaryForm<F> {
    type Output = TernaryForm<F>;
    fn sub(self, rhs: &'a TernaryForm<F>) -> TernaryForm<F> {
        self.checked_add(&-rhs).expect("degree mismatch")
    }
}

impl<'a, F: Field> Mul<&'a TernaryForm<F>> for &'a TernaryForm<F> {
    type Output = TernaryForm<F>;
    fn mul(self, rhs: &'a TernaryForm<F>) -> TernaryForm<F> {
        let mut f = TernaryForm::zero(self.degree + rhs.degree, self.tag);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                f.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1.clone() * c2);
            }
        }
        f
    }
}

impl<F: Field> Neg for &TernaryForm<F> {
    type Output = TernaryForm<F>;
    fn neg(self) -> TernaryForm<F> {
        self.scale(&-F::one(self.tag))
    }
}

/// Value of the pencil parameter: a slope `m`, or the residual line `x = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PencilParam<F: Field> {
    Finite(F),
    Infinity,
}

/// Coordinates in which the pencil centre becomes `(0:0:1)`.
///
/// `to_old` has columns `e_i, e_j, p` for the lowest-index pair of standard
/// basis vectors completing `p` to a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilChart<F: Field> {
    pub centre: Point3<F>,
    pub to_old: Mat3<F>,
    pub to_new: Mat3<F>,
}

impl<F: Field> PencilChart<F> {
    pub fn for_point(p: &Point3<F>) -> Self {
        let tag = p.tag();
        let basis = |i: usize| -> [F; 3] {
            std::array::from_fn(|k| if k == i { F::one(tag) } else { F::zero(tag) })
        };
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let cols = [basis(i), basis(j), p.coords().clone()];
            let m: Mat3<F> = std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r].clone()));
            if let Some(inv) = linalg::inverse3(&m) {
                return PencilChart { centre: p.clone(), to_old: m, to_new: inv };
            }
        }
        unreachable!("a nonzero vector always completes to a basis")
    }

    /// Pencil parameter of the line joining the centre to `q`.
    pub fn param_of_point(&self, q: &Point3<F>) -> Result<PencilParam<F>, FormError> {
        let v = linalg::mat_vec(&self.to_new, q.coords());
        match (v[0].is_zero(), v[1].is_zero()) {
            (true, true) => Err(FormError::PointIsCentre),
            (true, false) => Ok(PencilParam::Infinity),
            _ => Ok(PencilParam::Finite(v[1].clone() / &v[0])),
        }
    }

    /// The line with the given parameter, as linear-form coefficients in the original coordinates.
    pub fn line(&self, m: &PencilParam<F>) -> [F; 3] {
        match m {
            PencilParam::Infinity => self.to_new[0].clone(),
            PencilParam::Finite(m) => std::array::from_fn(|k| {
                self.to_new[1][k].clone() - m.clone() * &self.to_new[0][k]
            }),
        }
    }
}

/// Restriction of a form of degree `d` to the pencil through a point.
///
/// `coeffs[i]` is the coefficient `a_i(m)` of `s^(d-i) t^i`; it is a
/// polynomial of degree at most `d - i` in `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryFamily<F: Field> {
    pub degree: u32,
    pub coeffs: Vec<UniPoly<F>>,
    pub chart: PencilChart<F>,
}

impl<F: Field> BinaryFamily<F> {
    pub fn tag(&self) -> F::Tag {
        self.chart.centre.tag()
    }

    /// The binary form cut on the line with parameter `m`, coefficients of `s^(d-i) t^i`.
    pub fn section(&self, m: &PencilParam<F>) -> Vec<F> {
        let d = self.degree as usize;
        match m {
            PencilParam::Finite(m) => self.coeffs.iter().map(|a| a.eval(m)).collect(),
            PencilParam::Infinity => {
                self.coeffs.iter().enumerate().map(|(i, a)| a.coeff(d - i)).collect()
            }
        }
    }

    /// Coefficients of the residual line `x = 0` in original coordinates.
    pub fn excluded_line(&self) -> [F; 3] {
        self.chart.line(&PencilParam::Infinity)
    }
}

pub fn partial_derivative<F: Field>(f: &TernaryForm<F>, var: usize) -> Result<TernaryForm<F>, FormError> {
    f.partial(var)
}

pub fn polar<F: Field>(f: &TernaryForm<F>, p: &Point3<F>) -> Result<TernaryForm<F>, FormError> {
    f.polar(p)
}

pub fn evaluate<F: Field>(f: &TernaryForm<F>, p: &Point3<F>) -> F {
    f.evaluate(p.coords())
}

/// Restrict `c` to the pencil of lines through `p`.
pub fn restrict_to_pencil<F: Field>(c: &TernaryForm<F>, p: &Point3<F>) -> BinaryFamily<F> {
    let chart = PencilChart::for_point(p);
    let moved = c.linear_substitution(&chart.to_old);
    let tag = p.tag();
    let d = c.degree();
    let mut raw: Vec<Vec<F>> = vec![vec![F::zero(tag); d as usize + 1]; d as usize + 1];
    for (e, coef) in moved.terms() {
        // X^a Y^b Z^c -> s^(a+b) m^b t^c
        let slot = &mut raw[e[2] as usize][e[1] as usize];
        *slot = slot.clone() + coef;
    }
    let coeffs = raw.into_iter().map(|v| UniPoly::new(v, tag)).collect();
    BinaryFamily { degree: d, coeffs, chart }
}

pub fn is_singular_at<F: Field>(f: &TernaryForm<F>, p: &Point3<F>) -> Result<bool, FormError> {
    Ok(f.gradient()?.iter().all(|g| g.evaluate(p.coords()).is_zero()))
}

/// Quadratic part `(alpha, beta, gamma)` of `f` at `p` in the affine chart
/// centred at `p`, i.e. `alpha X^2 + beta X Y + gamma Y^2`.
pub fn quadratic_part_at<F: Field>(f: &TernaryForm<F>, p: &Point3<F>) -> Result<[F; 3], FormError> {
    if f.degree() < 2 {
        return Err(FormError::DegreeZero);
    }
    let chart = PencilChart::for_point(p);
    let g = f.linear_substitution(&chart.to_old);
    let k = f.degree() - 2;
    Ok([g.coefficient([2, 0, k]), g.coefficient([1, 1, k]), g.coefficient([0, 2, k])])
}

/// Ordinary double point: singular with a nondegenerate tangent cone.
pub fn is_node_at<F: Field>(f: &TernaryForm<F>, p: &Point3<F>) -> Result<bool, FormError> {
    if !is_singular_at(f, p)? {
        return Ok(false);
    }
    let [a, b, c] = quadratic_part_at(f, p)?;
    let disc = b.clone() * &b - F::from_int(4, f.tag()) * a * &c;
    Ok(!disc.is_zero())
}

/// Multiplicities of the roots, over the algebraic closure, of a nonzero
/// binary form given by coefficients of `s^(d-i) t^i`. Each entry is
/// `(multiplicity, number_of_roots)`.
pub fn binary_root_multiplicities<F: Field>(coeffs: &[F]) -> Result<Vec<(u32, usize)>, FormError> {
    let tag = coeffs.first().map(|c| c.tag()).ok_or(FormError::LineIsComponent)?;
    let d = coeffs.len() - 1;
    let f = UniPoly::new(coeffs.to_vec(), tag);
    let Some(deg) = f.degree() else {
        return Err(FormError::LineIsComponent);
    };
    let mut out = Vec::new();
    for part in f.squarefree_decomposition()?.parts {
        out.push((part.multiplicity, part.poly.degree().unwrap_or(0)));
    }
    if deg < d {
        out.push(((d - deg) as u32, 1));
    }
    Ok(out)
}

/// Whether the line through `p` with parameter `m` meets `c` in a point of multiplicity exactly 3.
pub fn is_flex_line<F: Field>(
    c: &TernaryForm<F>,
    p: &Point3<F>,
    m: &PencilParam<F>,
) -> Result<bool, FormError> {
    let fam = restrict_to_pencil(c, p);
    let mults = binary_root_multiplicities(&fam.section(m))?;
    Ok(mults.iter().any(|&(k, _)| k == 3))
}
