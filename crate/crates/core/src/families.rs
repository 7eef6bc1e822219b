//! Explicit families of rational elliptic surfaces with six double singular
//! fibres, one generator per type `(a, b)` = (number of `II`, number of `I2`),
//! and a checker for the conic-line pencil configurations that produce them.

use thiserror::Error;

use crate::exactfield::{Field, FieldError, QuadExt, Rat};
use crate::linalg::{self, Mat3};
use crate::ternaryform::{FormError, Point3, TernaryForm};
use crate::unipoly::{PolyError, UniPoly};
use crate::weierstrass::{discriminant, FibreReport, WeierstrassError, WeierstrassModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("root collision: {0}")]
    RootCollision(String),
    #[error("{name} must have degree {expected}, got {got:?}")]
    WrongDegree { name: &'static str, expected: &'static str, got: Option<usize> },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("identity {0} failed")]
    IdentityFailed(&'static str),
    #[error("expected type {expected:?}, classified as {got:?}")]
    UnexpectedType { expected: (usize, usize), got: Option<(usize, usize)> },
    #[error("this family is defined over q-sqrt:3, got {0}")]
    WrongField(String),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A generated model together with its verified classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyModel<F: Field> {
    pub model: WeierstrassModel<F>,
    pub report: FibreReport<F>,
}

fn check_degree<F: Field>(p: &UniPoly<F>, name: &'static str, ok: bool, expected: &'static str) -> Result<(), FamilyError> {
    if ok {
        Ok(())
    } else {
        Err(FamilyError::WrongDegree { name, expected, got: p.degree() })
    }
}

fn finish<F: Field>(
    a: UniPoly<F>,
    b: UniPoly<F>,
    expected: (usize, usize),
) -> Result<FamilyModel<F>, FamilyError> {
    let model = WeierstrassModel::new(a, b)?;
    let report = model.classify_fibres()?;
    if report.special_type != Some(expected) {
        return Err(FamilyError::UnexpectedType { expected, got: report.special_type });
    }
    Ok(FamilyModel { model, report })
}

fn int<F: Field>(n: i64, tag: F::Tag) -> F {
    F::from_int(n, tag)
}

/// Type `(0, 6)`: `A = -(Q1^2 + Q1 Q2 + Q2^2)`, `B = Q1 Q2 (Q1 + Q2)`,
/// so that `D = -[(Q1 - Q2)(Q1 + 2 Q2)(2 Q1 + Q2)]^2`.
pub fn gen_special_i2<F: Field>(q1: &UniPoly<F>, q2: &UniPoly<F>) -> Result<FamilyModel<F>, FamilyError> {
    check_degree(q1, "Q1", q1.degree().unwrap_or(0) <= 2, "<= 2")?;
    check_degree(q2, "Q2", q2.degree().unwrap_or(0) <= 2, "<= 2")?;
    let tag = q1.tag();
    let two = int::<F>(2, tag);
    let sextic = &(q1 - q2) * &(q1 + &q2.scale(&two)) * (q1.scale(&two) + q2);
    let homogeneous_ok = sextic.degree().is_some_and(|d| d >= 5) && sextic.is_squarefree();
    if !homogeneous_ok {
        return Err(FamilyError::RootCollision(
            "(Q1 - Q2)(Q1 + 2 Q2)(2 Q1 + Q2) is not a squarefree sextic".into(),
        ));
    }
    let a = -(q1 * q1 + q1 * q2 + q2 * q2);
    let b = &(q1 * q2) * &(q1 + q2);
    if discriminant(&a, &b)? != -(&sextic * &sextic) {
        return Err(FamilyError::IdentityFailed("D = -S^2"));
    }
    finish(a, b, (0, 6))
}

/// Type `(6, 0)`: `A = 0` and `B` a squarefree sextic.
pub fn gen_special_ii<F: Field>(b: &UniPoly<F>) -> Result<FamilyModel<F>, FamilyError> {
    check_degree(b, "B", b.degree() == Some(6), "exactly 6")?;
    if !b.is_squarefree() {
        return Err(FamilyError::RootCollision("B has a repeated root".into()));
    }
    finish(UniPoly::zero(b.tag()), b.clone(), (6, 0))
}

/// Type `(4, 2)`: `A = (P^2 - 27 Q^2)/4`, `B = A Q`, `D = A^2 P^2`.
pub fn gen_mixed_42<F: Field>(p: &UniPoly<F>, q: &UniPoly<F>) -> Result<FamilyModel<F>, FamilyError> {
    check_degree(p, "P", p.degree().unwrap_or(0) <= 2, "<= 2")?;
    check_degree(q, "Q", q.degree().unwrap_or(0) <= 2, "<= 2")?;
    let tag = p.tag();
    let a = (p * p - q.pow(2).scale(&int(27, tag))).scale_rat(&Rat::new(1, 4)?);
    if a.is_zero() {
        return Err(FamilyError::Degenerate("P^2 = 27 Q^2 makes A vanish".into()));
    }
    let b = &a * q;
    if discriminant(&a, &b)? != &(&a * &a) * &(p * p) {
        return Err(FamilyError::IdentityFailed("D = A^2 P^2"));
    }
    finish(a, b, (4, 2))
}

fn require_sqrt3(x: &QuadExt) -> Result<(), FamilyError> {
    if x.d() == 3 {
        Ok(())
    } else {
        Err(FamilyError::WrongField(QuadExt::describe_tag(x.d())))
    }
}

/// `r = 3 w` with `w^2 = 3`, so `r^2 = 27`.
fn r_const() -> QuadExt {
    QuadExt::new(Rat::from(0), Rat::from(3), 3).expect("3 is squarefree")
}

/// Type `(3, 3)` over `Q(sqrt 3)`: `A = t(t-1)(t-lambda)`, `B = t(t-1) P` with
/// `P = (alpha (t-lambda)^3 - beta t(t-1)) / (2r)`, `beta = 4/alpha`.
pub fn gen_mixed_33(alpha: &QuadExt, lambda: &QuadExt) -> Result<FamilyModel<QuadExt>, FamilyError> {
    require_sqrt3(alpha)?;
    require_sqrt3(lambda)?;
    let d = 3;
    if alpha.is_zero() {
        return Err(FamilyError::Degenerate("alpha = 0".into()));
    }
    if lambda.is_zero() || lambda.is_one() {
        return Err(FamilyError::RootCollision("lambda must differ from 0 and 1".into()));
    }
    let beta = QuadExt::from_int(4, d) / alpha;
    let r = r_const();
    let t = UniPoly::var(d);
    let tt1 = &t * &(&t - &UniPoly::one(d));
    let cube = UniPoly::linear_root(lambda.clone()).pow(3);
    let two_r = QuadExt::from_int(2, d) * &r;
    let p = (cube.scale(alpha) - tt1.scale(&beta)).scale(&two_r.inv()?);
    let q = (cube.scale(alpha) + tt1.scale(&beta)).scale_rat(&Rat::new(1, 2)?);
    let a = &tt1 * &UniPoly::linear_root(lambda.clone());
    let b = &tt1 * &p;
    let tq = &tt1 * &q;
    if discriminant(&a, &b)? != &tq * &tq {
        return Err(FamilyError::IdentityFailed("D = [t(t-1)Q]^2"));
    }
    finish(a, b, (3, 3))
}

/// Type `(2, 4)` over `Q(sqrt 3)`: `A = N1 N2 L1 L2`,
/// `B = N1 N2 (alpha L1^3 N1 - (4/alpha) L2^3 N2) / (2r)`.
pub fn gen_mixed_24(
    l1: &UniPoly<QuadExt>,
    l2: &UniPoly<QuadExt>,
    n1: &UniPoly<QuadExt>,
    n2: &UniPoly<QuadExt>,
    alpha: &QuadExt,
) -> Result<FamilyModel<QuadExt>, FamilyError> {
    require_sqrt3(alpha)?;
    let d = 3;
    for (name, f) in [("L1", l1), ("L2", l2), ("N1", n1), ("N2", n2)] {
        if f.tag() != d {
            return Err(FamilyError::WrongField(QuadExt::describe_tag(f.tag())));
        }
        check_degree(f, name, f.degree() == Some(1), "exactly 1")?;
    }
    if alpha.is_zero() {
        return Err(FamilyError::Degenerate("alpha = 0".into()));
    }
    if l1.monic() == l2.monic() {
        return Err(FamilyError::Degenerate("L1 and L2 are proportional".into()));
    }
    let lins = [l1, l2, n1, n2];
    for i in 0..4 {
        for j in i + 1..4 {
            if lins[i].monic() == lins[j].monic() {
                return Err(FamilyError::RootCollision("the four linear forms must be pairwise distinct".into()));
            }
        }
    }
    let r = r_const();
    let two_r = QuadExt::from_int(2, d) * &r;
    let u = (&l1.pow(3) * n1).scale(alpha);
    let v = (&l2.pow(3) * n2).scale(&(QuadExt::from_int(4, d) / alpha));
    let nn = n1 * n2;
    let a = &(&nn * l1) * l2;
    let b = (&nn * &(&u - &v)).scale(&two_r.inv()?);
    let w = (&u + &v).scale_rat(&Rat::new(1, 2)?);
    let nw = &nn * &w;
    if discriminant(&a, &b)? != &nw * &nw {
        return Err(FamilyError::IdentityFailed("D = [N1 N2 W]^2"));
    }
    finish(a, b, (2, 4))
}

/// Symmetric matrix of a conic.
pub fn conic_matrix<F: Field>(c: &TernaryForm<F>) -> Result<Mat3<F>, FormError> {
    if c.degree() != 2 {
        return Err(FormError::DegreeMismatch(c.degree(), 2));
    }
    let tag = c.tag();
    let half = F::from_rat(Rat::new(1, 2)?, tag);
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let v = c.coefficient(e);
            if i == j {
                v
            } else {
                v * &half
            }
        })
    }))
}

/// Two independent points spanning a line.
pub fn line_basis<F: Field>(line: &[F; 3]) -> Result<[[F; 3]; 2], FormError> {
    let tag = line[0].tag();
    let mut out = Vec::new();
    for k in 0..3 {
        let e: [F; 3] = std::array::from_fn(|i| if i == k { F::one(tag) } else { F::zero(tag) });
        let v = linalg::cross(line, &e);
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        if out.iter().all(|w: &[F; 3]| linalg::cross(w, &v).iter().any(|c| !c.is_zero())) {
            out.push(v);
        }
        if out.len() == 2 {
            return Ok([out[0].clone(), out[1].clone()]);
        }
    }
    Err(FormError::ZeroPoint)
}

/// `f(s v1 + t v2)` as coefficients of `s^(d-i) t^i`, plus the basis used.
pub fn restrict_to_line<F: Field>(f: &TernaryForm<F>, line: &[F; 3]) -> Result<(Vec<F>, [[F; 3]; 2]), FormError> {
    let basis = line_basis(line)?;
    let tag = f.tag();
    let m: Mat3<F> = std::array::from_fn(|r| [basis[0][r].clone(), basis[1][r].clone(), F::zero(tag)]);
    let g = f.linear_substitution(&m);
    let d = f.degree();
    let coeffs = (0..=d).map(|i| g.coefficient([d - i, i, 0])).collect();
    Ok((coeffs, basis))
}

fn quadratic_disc<F: Field>(q: &[F]) -> F {
    let tag = q[0].tag();
    q[1].clone() * &q[1] - F::from_int(4, tag) * &q[0] * &q[2]
}

/// `det(M1 + lambda M2)` as a polynomial in `lambda`.
pub fn pencil_determinant<F: Field>(m1: &Mat3<F>, m2: &Mat3<F>) -> Result<UniPoly<F>, PolyError> {
    let tag = m1[0][0].tag();
    let pts: Vec<(F, F)> = (0..4)
        .map(|k| {
            let l = F::from_int(k, tag);
            let m: Mat3<F> = std::array::from_fn(|i| {
                std::array::from_fn(|j| m1[i][j].clone() + l.clone() * &m2[i][j])
            });
            (l, linalg::det3(&m))
        })
        .collect();
    UniPoly::interpolate(&pts, tag)
}

/// Whether two irreducible conics meet in four distinct points.
pub fn conics_meet_transversally<F: Field>(c1: &TernaryForm<F>, c2: &TernaryForm<F>) -> Result<bool, FormError> {
    let g = pencil_determinant(&conic_matrix(c1)?, &conic_matrix(c2)?)?;
    Ok(g.degree() == Some(3) && !g.coeff(0).is_zero() && g.is_squarefree())
}

/// Outcome of checking a conic-line pencil configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicLinePencilReport<F: Field> {
    pub c1_irreducible: bool,
    pub c2_irreducible: bool,
    /// `C1` and `C2` meet in exactly two points, each with multiplicity 2.
    pub bitangent: bool,
    /// The doubled line of the pencil `C1 + lambda C2`, through both contact points.
    pub chord: Option<[F; 3]>,
    pub l1_tangent_to_c2: bool,
    pub l1_transverse_to_c1: bool,
    pub l2_tangent_to_c1: bool,
    pub l2_transverse_to_c2: bool,
    pub l1_contact: Option<Point3<F>>,
    pub l2_contact: Option<Point3<F>>,
    pub lines_meet: Point3<F>,
}

impl<F: Field> ConicLinePencilReport<F> {
    pub fn passed(&self) -> bool {
        self.c1_irreducible
            && self.c2_irreducible
            && self.bitangent
            && self.l1_tangent_to_c2
            && self.l1_transverse_to_c1
            && self.l2_tangent_to_c1
            && self.l2_transverse_to_c2
    }

    /// Names and outcomes of every condition, in a fixed order.
    pub fn checks(&self) -> [(&'static str, bool); 7] {
        [
            ("c1_irreducible", self.c1_irreducible),
            ("c2_irreducible", self.c2_irreducible),
            ("bitangent", self.bitangent),
            ("l1_tangent_to_c2", self.l1_tangent_to_c2),
            ("l1_transverse_to_c1", self.l1_transverse_to_c1),
            ("l2_tangent_to_c1", self.l2_tangent_to_c1),
            ("l2_transverse_to_c2", self.l2_transverse_to_c2),
        ]
    }
}

/// Tangency (`Some(contact)`) or transversality (`None`) of a line and a conic.
fn line_contact<F: Field>(c: &TernaryForm<F>, line: &[F; 3]) -> Result<Option<Point3<F>>, FormError> {
    let (q, basis) = restrict_to_line(c, line)?;
    if q.iter().all(|x| x.is_zero()) || !quadratic_disc(&q).is_zero() {
        return Ok(None);
    }
    let tag = c.tag();
    // double root of q0 s^2 + q1 s t + q2 t^2
    let (s, t) = if q[0].is_zero() {
        (F::one(tag), F::zero(tag))
    } else {
        (-q[1].clone(), F::from_int(2, tag) * &q[0])
    };
    let pt = std::array::from_fn(|k| s.clone() * &basis[0][k] + t.clone() * &basis[1][k]);
    Ok(Some(Point3::new(pt)?))
}

pub fn verify_conic_line_pencil<F: Field>(
    c1: &TernaryForm<F>,
    c2: &TernaryForm<F>,
    l1: &[F; 3],
    l2: &[F; 3],
) -> Result<ConicLinePencilReport<F>, FormError> {
    let m1 = conic_matrix(c1)?;
    let m2 = conic_matrix(c2)?;
    let c1_irreducible = !linalg::det3(&m1).is_zero();
    let c2_irreducible = !linalg::det3(&m2).is_zero();
    let mut bitangent = false;
    let mut chord = None;
    if c1_irreducible && c2_irreducible {
        let g = pencil_determinant(&m1, &m2)?;
        let sfd = g.squarefree_decomposition()?;
        let double = sfd.parts.iter().find(|p| p.multiplicity == 2 && p.poly.degree() == Some(1));
        if let Some(part) = double {
            let lambda = -part.poly.coeff(0);
            let n: Mat3<F> = std::array::from_fn(|i| {
                std::array::from_fn(|j| m1[i][j].clone() + lambda.clone() * &m2[i][j])
            });
            if linalg::rank3(&n) == 1 {
                let row = n.iter().find(|r| r.iter().any(|x| !x.is_zero())).expect("rank 1").clone();
                let (q, _) = restrict_to_line(c1, &row)?;
                bitangent = !quadratic_disc(&q).is_zero();
                chord = Some(row);
            }
        }
    }
    let l1_contact = line_contact(c2, l1)?;
    let l2_contact = line_contact(c1, l2)?;
    let transverse = |c: &TernaryForm<F>, l: &[F; 3]| -> Result<bool, FormError> {
        let (q, _) = restrict_to_line(c, l)?;
        Ok(!quadratic_disc(&q).is_zero())
    };
    Ok(ConicLinePencilReport {
        c1_irreducible,
        c2_irreducible,
        bitangent,
        chord,
        l1_tangent_to_c2: l1_contact.is_some(),
        l1_transverse_to_c1: transverse(c1, l1)?,
        l2_tangent_to_c1: l2_contact.is_some(),
        l2_transverse_to_c2: transverse(c2, l2)?,
        l1_contact,
        l2_contact,
        lines_meet: Point3::new(linalg::cross(l1, l2))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::{Kodaira, Locus, Order};

    fn p(c: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_ints(c, ())
    }

    fn pq(c: &[i64]) -> UniPoly<QuadExt> {
        UniPoly::from_ints(c, 3)
    }

    #[test]
    fn special_i2_example() {
        let m = gen_special_i2(&p(&[0, 0, 1]), &p(&[1])).unwrap();
        assert_eq!(m.report.special_type, Some((0, 6)));
        assert!(matches!(gen_special_i2(&p(&[1, 1]), &p(&[1, 1])), Err(FamilyError::RootCollision(_))));
    }

    #[test]
    fn special_ii_degree_checks() {
        assert_eq!(gen_special_ii(&p(&[-1, 0, 0, 0, 0, 0, 1])).unwrap().report.special_type, Some((6, 0)));
        assert!(matches!(gen_special_ii(&p(&[0, 0, 0, 0, 0, 0, 1])), Err(FamilyError::RootCollision(_))));
        assert!(matches!(gen_special_ii(&p(&[-1, 0, 0, 0, 0, 1])), Err(FamilyError::WrongDegree { .. })));
    }

    #[test]
    fn mixed_42_example() {
        let m = gen_mixed_42(&p(&[1, 0, 1]), &p(&[0, 1])).unwrap();
        assert_eq!(m.report.special_type, Some((4, 2)));
    }

    #[test]
    fn mixed_33_example() {
        let alpha = QuadExt::from_int(2, 3);
        let lambda = QuadExt::from_int(-1, 3);
        let m = gen_mixed_33(&alpha, &lambda).unwrap();
        assert_eq!(m.report.special_type, Some((3, 3)));
        let ii: Vec<_> = m.report.classes.iter().filter(|c| c.kodaira == Kodaira::II).collect();
        let finite: Vec<_> = ii.iter().filter_map(|c| match &c.locus {
            Locus::Finite(f) => Some(f.clone()),
            Locus::Infinity => None,
        }).collect();
        assert_eq!(finite.iter().fold(pq(&[1]), |acc, f| acc * f), pq(&[0, -1, 1]));
        assert!(ii.iter().any(|c| c.locus == Locus::Infinity));
        assert!(matches!(gen_mixed_33(&alpha, &QuadExt::one(3)), Err(FamilyError::RootCollision(_))));
        assert!(matches!(gen_mixed_33(&QuadExt::from_int(2, -3), &lambda), Err(FamilyError::WrongField(_))));
    }

    #[test]
    fn mixed_24_example() {
        let t = pq(&[0, 1]);
        let m = gen_mixed_24(&t, &pq(&[-1, 1]), &pq(&[-2, 1]), &pq(&[-3, 1]), &QuadExt::from_int(2, 3)).unwrap();
        assert_eq!(m.report.special_type, Some((2, 4)));
        // roots of L1 and L2 carry smooth fibres with ord A = 1
        for root in [0, 1] {
            let (a, b, d) = m.model.orders_at(&QuadExt::from_int(root, 3));
            assert_eq!((a, b, d), (Order::Finite(1), Order::Finite(0), 0));
        }
        assert!(matches!(
            gen_mixed_24(&t, &t.scale(&QuadExt::from_int(3, 3)), &pq(&[-2, 1]), &pq(&[-3, 1]), &QuadExt::from_int(2, 3)),
            Err(FamilyError::Degenerate(_))
        ));
    }

    fn conic(terms: &[(u32, u32, u32, i64)]) -> TernaryForm<Rat> {
        TernaryForm::from_int_terms(terms, ()).unwrap()
    }

    fn line(c: [i64; 3]) -> [Rat; 3] {
        c.map(Rat::from)
    }

    #[test]
    fn bitangent_conics_with_tangent_lines() {
        let c1 = conic(&[(2, 0, 0, 1), (0, 2, 0, 1), (0, 0, 2, -1)]);
        let c2 = conic(&[(2, 0, 0, 1), (0, 2, 0, 2), (0, 0, 2, -1)]);
        // tangent to C2 at (1:2:3) and to C1 at (3:4:5)
        let l1 = line([1, 4, -3]);
        let l2 = line([3, 4, -5]);
        let rep = verify_conic_line_pencil(&c1, &c2, &l1, &l2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(Point3::new(rep.chord.clone().unwrap()).unwrap(), Point3::from_ints([0, 1, 0], ()).unwrap());
        assert_eq!(rep.l1_contact.clone().unwrap(), Point3::from_ints([1, 2, 3], ()).unwrap());
        assert_eq!(rep.l2_contact.clone().unwrap(), Point3::from_ints([3, 4, 5], ()).unwrap());
    }

    #[test]
    fn failures_are_localized() {
        let c1 = conic(&[(2, 0, 0, 1), (0, 2, 0, 1), (0, 0, 2, -1)]);
        let c2 = conic(&[(1, 1, 0, 1), (0, 0, 2, 3)]);
        let rep = verify_conic_line_pencil(&c1, &c2, &line([1, 0, 0]), &line([1, 0, -1])).unwrap();
        assert!(rep.c1_irreducible && rep.c2_irreducible);
        assert!(!rep.bitangent);
        assert!(rep.l2_tangent_to_c1);
        assert!(!rep.passed());
        let degenerate = conic(&[(1, 1, 0, 1)]);
        let rep = verify_conic_line_pencil(&degenerate, &c2, &line([1, 0, 0]), &line([0, 1, 0])).unwrap();
        assert!(!rep.c1_irreducible);
    }
}
