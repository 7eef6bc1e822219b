//! Binary quartics, their invariants `I` and `J`, and the passage from a
//! pencil of quartic sections to a Weierstrass model.
//!
//! For `q = a0 u^4 + a1 u^3 v + a2 u^2 v^2 + a3 u v^3 + a4 v^4` the Jacobian
//! of `y^2 = q` is `y^2 = x^3 - (I/3) x - J/27`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactfield::{Field, Rat};
use crate::ternaryform::{BinaryFamily, PencilParam};
use crate::unipoly::{sylvester_resultant, PolyError, UniPoly};
use crate::weierstrass::{WeierstrassError, WeierstrassModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuarticError {
    #[error("the zero form")]
    ZeroForm,
    #[error("expected a family of quartics, got degree {0}")]
    NotQuartic(u32),
    #[error("every section is singular: the family has no Weierstrass model")]
    DegenerateFamily,
    #[error("the pencil centre does not lie on the curve")]
    CentreNotOnCurve,
    #[error("the pencil centre is a singular point of the curve")]
    SingularCentre,
    #[error("the pencil centre is a flex of the curve")]
    FlexCentre,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

/// `a0 u^4 + a1 u^3 v + a2 u^2 v^2 + a3 u v^3 + a4 v^4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryQuartic<F: Field> {
    pub a: [F; 5],
}

/// `q = scale * s^2` with `s = s0 u^2 + s1 u v + s2 v^2` normalized so its first nonzero coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareRoot<F: Field> {
    pub scale: F,
    pub s: [F; 3],
    /// Whether `s` has two distinct roots.
    pub squarefree: bool,
}

impl<F: Field> BinaryQuartic<F> {
    pub fn new(a: [F; 5]) -> Result<Self, QuarticError> {
        if a.iter().all(|c| c.is_zero()) {
            return Err(QuarticError::ZeroForm);
        }
        Ok(BinaryQuartic { a })
    }

    pub fn from_ints(a: [i64; 5], tag: F::Tag) -> Result<Self, QuarticError> {
        BinaryQuartic::new(a.map(|c| F::from_int(c, tag)))
    }

    pub fn tag(&self) -> F::Tag {
        self.a[0].tag()
    }

    pub fn invariant_i(&self) -> F {
        let c = |n: i64| F::from_int(n, self.tag());
        let [a0, a1, a2, a3, a4] = &self.a;
        c(12) * a0 * a4 - c(3) * a1 * a3 + a2.clone() * a2
    }

    pub fn invariant_j(&self) -> F {
        let c = |n: i64| F::from_int(n, self.tag());
        let [a0, a1, a2, a3, a4] = &self.a;
        c(72) * a0 * a2 * a4 - c(27) * a0 * a3 * a3 - c(27) * a1 * a1 * a4 + c(9) * a1 * a2 * a3
            - c(2) * a2 * a2 * a2
    }

    /// `q(u, v + c u)`.
    pub fn shear_v(&self, c: &F) -> Self {
        self.substitute([F::one(self.tag()), F::zero(self.tag()), c.clone(), F::one(self.tag())])
    }

    /// `q(u + c v, v)`.
    pub fn shear_u(&self, c: &F) -> Self {
        self.substitute([F::one(self.tag()), c.clone(), F::zero(self.tag()), F::one(self.tag())])
    }

    /// `q(p u + q v, r u + s v)` for `m = [p, q, r, s]`.
    pub fn substitute(&self, m: [F; 4]) -> Self {
        let tag = self.tag();
        let lu = UniPoly::new(vec![m[1].clone(), m[0].clone()], tag);
        let lv = UniPoly::new(vec![m[3].clone(), m[2].clone()], tag);
        // Work with v = 1 and track the formal degree 4.
        let mut acc = UniPoly::zero(tag);
        for (i, a) in self.a.iter().enumerate() {
            acc = acc + (lu.pow(4 - i as u32) * lv.pow(i as u32)).scale(a);
        }
        // acc is q(...)(u, 1) with coefficients low to high in u; a_i sits at u^(4-i).
        BinaryQuartic { a: std::array::from_fn(|i| acc.coeff(4 - i)) }
    }

    /// Binary discriminant `a0^6 prod (r_i - r_j)^2`, computed as `res(f, f') / a0`.
    pub fn discriminant(&self) -> F {
        let tag = self.tag();
        let mut q = self.clone();
        let mut c = 0;
        while q.a[0].is_zero() {
            c += 1;
            q = self.shear_v(&F::from_int(c, tag));
        }
        let f: Vec<F> = q.a.iter().rev().cloned().collect();
        let df: Vec<F> = (1..5).map(|k| f[k].clone() * F::from_int(k as i64, tag)).collect();
        sylvester_resultant(&f, 4, &df, 3, tag) / &q.a[0]
    }

    /// Decide whether `q = c s^2` for a binary quadratic `s`.
    pub fn is_perfect_square(&self) -> Result<Option<SquareRoot<F>>, QuarticError> {
        let tag = self.tag();
        let at_infinity = self.a.iter().take_while(|c| c.is_zero()).count();
        let f = UniPoly::new(self.a.iter().rev().cloned().collect(), tag);
        if at_infinity % 2 == 1 {
            return Ok(None);
        }
        let Some((scale, root)) = f.exact_square_root()? else {
            return Ok(None);
        };
        let k = at_infinity / 2;
        let mut s = [F::zero(tag), F::zero(tag), F::zero(tag)];
        let rd = root.degree().unwrap_or(0);
        for i in 0..=rd {
            // u^i v^(2-i) coefficient lives at index 2 - i
            s[2 - i] = root.coeff(i);
        }
        let squarefree = root.is_squarefree() && k <= 1;
        Ok(Some(SquareRoot { scale, s, squarefree }))
    }
}

/// `(I(m), J(m))` of a family of binary quartics.
pub fn family_invariants<F: Field>(a: &[UniPoly<F>]) -> (UniPoly<F>, UniPoly<F>) {
    let tag = a[0].tag();
    let c = |n: i64| F::from_int(n, tag);
    let [a0, a1, a2, a3, a4] = [&a[0], &a[1], &a[2], &a[3], &a[4]];
    let i = (a0 * a4).scale(&c(12)) - (a1 * a3).scale(&c(3)) + a2 * a2;
    let j = (&(a0 * a2) * a4).scale(&c(72)) - (&(a0 * a3) * a3).scale(&c(27))
        - (&(a1 * a1) * a4).scale(&c(27))
        + (&(a1 * a2) * a3).scale(&c(9))
        - (&(a2 * a2) * a2).scale(&c(2));
    (i, j)
}

/// Weight needed to hold `A` and `B` of the given degrees.
fn weight_for<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>) -> u32 {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    da.div_ceil(4).max(db.div_ceil(6)).max(1) as u32
}

fn model_or_degenerate<F: Field>(a: UniPoly<F>, b: UniPoly<F>) -> Result<WeierstrassModel<F>, QuarticError> {
    let w = weight_for(&a, &b);
    match WeierstrassModel::with_weight(a, b, w) {
        Err(WeierstrassError::IdenticallySingular) => Err(QuarticError::DegenerateFamily),
        other => Ok(rescale_integral(&other?)?),
    }
}

/// Split model: the Jacobian of `y^2 = q_m(s, t)`, `A = -I/3`, `B = -J/27`.
pub fn family_to_weierstrass<F: Field>(fam: &BinaryFamily<F>) -> Result<WeierstrassModel<F>, QuarticError> {
    if fam.degree != 4 {
        return Err(QuarticError::NotQuartic(fam.degree));
    }
    let tag = fam.tag();
    let (i, j) = family_invariants(&fam.coeffs);
    let a = i.scale_rat(&Rat::new(-1, 3).expect("nonzero"));
    let b = j.scale_rat(&Rat::new(-1, 27).expect("nonzero"));
    debug_assert_eq!(a.tag(), tag);
    model_or_degenerate(a, b)
}

/// Parameter of the tangent line at the centre when the centre lies on the curve.
pub fn centre_tangent<F: Field>(fam: &BinaryFamily<F>) -> Result<PencilParam<F>, QuarticError> {
    let a3 = &fam.coeffs[fam.degree as usize - 1];
    match a3.degree() {
        None => Err(QuarticError::SingularCentre),
        Some(0) => Ok(PencilParam::Infinity),
        Some(_) => Ok(PencilParam::Finite(-(a3.coeff(0) / &a3.coeff(1)))),
    }
}

/// `(A, B)` of the depressed form of `X^3 + c2 X^2 + c1 X + c0` under `X -> X - c2/3`.
pub fn depress_cubic<F: Field>(c2: &UniPoly<F>, c1: &UniPoly<F>, c0: &UniPoly<F>) -> (UniPoly<F>, UniPoly<F>) {
    let third = Rat::new(1, 3).expect("nonzero");
    let a = c1 - &(c2 * c2).scale_rat(&third);
    let b = c0 - &(c1 * c2).scale_rat(&third)
        + (&(c2 * c2) * c2).scale_rat(&Rat::new(2, 27).expect("nonzero"));
    (a, b)
}

/// Ramified model for a centre on the curve: factor out the section's root
/// at the centre and bring the residual cubic to Weierstrass form.
pub fn ramified_family_to_weierstrass<F: Field>(
    fam: &BinaryFamily<F>,
) -> Result<WeierstrassModel<F>, QuarticError> {
    if fam.degree != 4 {
        return Err(QuarticError::NotQuartic(fam.degree));
    }
    if !fam.coeffs[4].is_zero() {
        return Err(QuarticError::CentreNotOnCurve);
    }
    let [a0, a1, a2, a3] = [&fam.coeffs[0], &fam.coeffs[1], &fam.coeffs[2], &fam.coeffs[3]];
    let tangent = centre_tangent(fam)?;
    // On the tangent line q = s^2 (a0 s^2 + a1 s t + a2 t^2); a flex makes a2 vanish there.
    let a2_on_tangent = match &tangent {
        PencilParam::Finite(m) => a2.eval(m),
        PencilParam::Infinity => a2.coeff(2),
    };
    if a2_on_tangent.is_zero() {
        return Err(QuarticError::FlexCentre);
    }
    // q = s (a0 s^3 + a1 s^2 t + a2 s t^2 + a3 t^3); with T = t/s and X = a3 T, Y = a3 y:
    // Y^2 = X^3 + a2 X^2 + a1 a3 X + a0 a3^2.
    let c2 = a2.clone();
    let c1 = a1 * a3;
    let c0 = &(a0 * a3) * a3;
    let (a, b) = depress_cubic(&c2, &c1, &c0);
    model_or_degenerate(a, b)
}

fn factor_trial(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.clone();
    let mut primes = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= n && p < limit {
        if (&n % &p).is_zero() {
            primes.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        primes.push(n);
    }
    primes
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    k
}

/// Least positive integer `u` with `u^4 A` and `u^6 B` integral, and the rescaled model.
pub fn integral_scale<F: Field>(model: &WeierstrassModel<F>) -> BigInt {
    let dens_a: Vec<BigInt> = model.a().coeffs().iter().map(|c| c.denominator_lcm()).collect();
    let dens_b: Vec<BigInt> = model.b().coeffs().iter().map(|c| c.denominator_lcm()).collect();
    let all = dens_a.iter().chain(&dens_b).fold(BigInt::one(), |acc, d| acc.lcm(d));
    let mut u = BigInt::one();
    for p in factor_trial(&all) {
        let need = |dens: &[BigInt], w: u32| dens.iter().map(|d| valuation(d, &p).div_ceil(w)).max().unwrap_or(0);
        let e = need(&dens_a, 4).max(need(&dens_b, 6));
        u *= p.pow(e);
    }
    u
}

pub fn rescale_integral<F: Field>(model: &WeierstrassModel<F>) -> Result<WeierstrassModel<F>, WeierstrassError> {
    let u = Rat::from(integral_scale(model));
    let tag = model.tag();
    let u2 = F::from_rat(u.clone() * &u, tag);
    if u2.is_one() {
        return Ok(model.clone());
    }
    WeierstrassModel::with_weight(
        model.a().scale(&u2.pow(2)),
        model.b().scale(&u2.pow(3)),
        model.weight(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::QuadExt;

    fn bq(a: [i64; 5]) -> BinaryQuartic<Rat> {
        BinaryQuartic::from_ints(a, ()).unwrap()
    }

    #[test]
    fn invariants_of_simple_forms() {
        assert_eq!(bq([1, 0, 0, 0, 1]).invariant_i(), Rat::from(12));
        assert_eq!(bq([0, 0, 1, 0, 0]).invariant_j(), Rat::from(-2));
        let (p, r) = (7, -5);
        let dep = bq([0, 1, 0, p, r]);
        assert_eq!(dep.invariant_i(), Rat::from(-3 * p));
        assert_eq!(dep.invariant_j(), Rat::from(-27 * r));
    }

    #[test]
    fn equianharmonic_quartic_has_vanishing_i() {
        // u v (u - v)(u - lambda v) with lambda^2 - lambda + 1 = 0
        let d = -3;
        let w = QuadExt::omega(d).unwrap();
        let half = QuadExt::from_rat(Rat::new(1, 2).unwrap(), d);
        let lambda = half.clone() + half * &w;
        assert!((lambda.clone() * &lambda - &lambda + QuadExt::one(d)).is_zero());
        let q = product_of_roots(&[QuadExt::zero(d), QuadExt::one(d), lambda], d);
        assert!(q.invariant_i().is_zero());
        let q2 = product_of_roots(&[QuadExt::zero(d), QuadExt::one(d), QuadExt::from_int(2, d)], d);
        assert!(!q2.invariant_i().is_zero());
    }

    /// `v * prod (u - r v)` as a binary quartic.
    fn product_of_roots<F: Field>(roots: &[F], tag: F::Tag) -> BinaryQuartic<F> {
        let f = roots.iter().fold(UniPoly::one(tag), |acc, r| acc * UniPoly::linear_root(r.clone()));
        // q(u, 1) = f(u); the v factor supplies a root at infinity.
        BinaryQuartic::new(std::array::from_fn(|i| if i == 0 { F::zero(tag) } else { f.coeff(4 - i) })).unwrap()
    }

    #[test]
    fn perfect_squares() {
        // (u^2 - v^2)^2 = u^4 - 2 u^2 v^2 + v^4
        let sq = bq([1, 0, -2, 0, 1]).is_perfect_square().unwrap().unwrap();
        assert_eq!(sq.scale, Rat::from(1));
        assert_eq!(sq.s, [Rat::from(1), Rat::from(0), Rat::from(-1)]);
        assert!(sq.squarefree);
        // u^2 (u - v)(u + v)
        assert_eq!(bq([1, 0, -1, 0, 0]).is_perfect_square().unwrap(), None);
        // 3 u^2 v^2
        let uv = bq([0, 0, 3, 0, 0]).is_perfect_square().unwrap().unwrap();
        assert_eq!((uv.scale, uv.s.clone(), uv.squarefree), (Rat::from(3), [Rat::from(0), Rat::from(1), Rat::from(0)], true));
        // v^4 is a square of a non-squarefree quadratic
        assert!(!bq([0, 0, 0, 0, 2]).is_perfect_square().unwrap().unwrap().squarefree);
    }

    #[test]
    fn discriminant_with_vanishing_leading_coefficient() {
        // v (u - v)(u - 2v)(u - 3v): roots 1, 2, 3, infinity
        let q = product_of_roots(&[Rat::from(1), Rat::from(2), Rat::from(3)], ());
        let d = q.discriminant();
        // shear-invariant
        assert_eq!(q.shear_u(&Rat::from(5)).discriminant(), d);
        assert!(!d.is_zero());
        assert!(bq([1, 0, -2, 0, 1]).discriminant().is_zero());
    }

    #[test]
    fn depressing_a_depressed_cubic_is_the_identity() {
        let p = UniPoly::<Rat>::from_ints(&[1, 2, 0, 3], ());
        let r = UniPoly::<Rat>::from_ints(&[-4, 0, 1], ());
        let (a, b) = depress_cubic(&UniPoly::zero(()), &p, &r);
        assert_eq!((a, b), (p, r));
    }

    #[test]
    fn integral_rescaling() {
        let a = UniPoly::<Rat>::from_rats(&[Rat::new(1, 4).unwrap(), Rat::from(1)], ());
        let b = UniPoly::<Rat>::from_rats(&[Rat::new(1, 27).unwrap()], ());
        let m = WeierstrassModel::new(a, b).unwrap();
        // 2 clears 1/4 in A; 3 clears 1/27 in B since 3^6 >= 27.
        assert_eq!(integral_scale(&m), BigInt::from(6));
        let r = rescale_integral(&m).unwrap();
        assert!(r.a().coeffs().iter().chain(r.b().coeffs()).all(|c| c.is_integer()));
    }
}
