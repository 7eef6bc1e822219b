//! Plane quartics with a marked point: the double plane branched along `C`,
//! projected from `p`, is a rational elliptic surface whose fibres are the
//! double covers of the lines through `p`.

use thiserror::Error;

use crate::binaryquartic::{
    centre_tangent, family_to_weierstrass, ramified_family_to_weierstrass, BinaryQuartic, QuarticError,
};
use crate::exactfield::{Field, FieldError, Rat};
use crate::families::{conic_matrix, conics_meet_transversally};
use crate::linalg;
use crate::ternaryform::{
    binary_root_multiplicities, is_node_at, is_singular_at, restrict_to_pencil, BinaryFamily, FormError,
    PencilParam, Point3, TernaryForm,
};
use crate::unipoly::{sylvester_resultant, PolyError, UniPoly};
use crate::weierstrass::{FibreReport, Kodaira, Locus, WeierstrassError, WeierstrassModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("expected a form of degree {expected}, got {got}")]
    WrongDegree { expected: u32, got: u32 },
    #[error("the point lies on the cubic")]
    CentreOnCubic,
    #[error("declared node {0} is not an ordinary double point")]
    NotANode(String),
    #[error("the centre is a declared node")]
    CentreIsNode,
    #[error("the centre is a singular point of the quartic")]
    SingularCentre,
    #[error("the centre is a flex of the quartic")]
    FlexCentre,
    #[error("the product of the components is not the quartic")]
    ComponentMismatch,
    #[error("two components share a common factor")]
    SharedComponent,
    #[error("the quartic is a square or otherwise non-reduced along every line")]
    Degenerate,
    #[error("not special: singular fibres {0:?}")]
    NotSpecial(Vec<String>),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("the generators of the pencil are proportional")]
    Proportional,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Quartic(QuarticError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<QuarticError> for CurveError {
    fn from(e: QuarticError) -> Self {
        match e {
            QuarticError::DegenerateFamily => CurveError::Degenerate,
            QuarticError::SingularCentre => CurveError::SingularCentre,
            QuarticError::FlexCentre => CurveError::FlexCentre,
            other => CurveError::Quartic(other),
        }
    }
}

fn expect_degree<F: Field>(f: &TernaryForm<F>, d: u32) -> Result<(), CurveError> {
    if f.degree() == d {
        Ok(())
    } else {
        Err(CurveError::WrongDegree { expected: d, got: f.degree() })
    }
}

/// `f4 = phi_zz phi - (phi_z)^2 / 2` in coordinates where `p = (0:0:1)`.
pub fn chisini_quartic<F: Field>(phi3: &TernaryForm<F>, p: &Point3<F>) -> Result<TernaryForm<F>, CurveError> {
    expect_degree(phi3, 3)?;
    let chart = crate::ternaryform::PencilChart::for_point(p);
    let g = phi3.linear_substitution(&chart.to_old);
    if g.coefficient([0, 0, 3]).is_zero() {
        return Err(CurveError::CentreOnCubic);
    }
    let gz = g.partial(2)?;
    let gzz = gz.partial(2)?;
    let half = F::from_rat(Rat::new(1, 2)?, g.tag());
    let f = &(&gzz * &g) - &(&gz * &gz).scale(&half);
    Ok(f.linear_substitution(&chart.to_new))
}

/// `x^3 + y^3 + z^3 - 3 gamma x y z`.
pub fn hesse_cubic<F: Field>(gamma: &F) -> TernaryForm<F> {
    let tag = gamma.tag();
    let mut terms = vec![
        (3, 0, 0, F::one(tag)),
        (0, 3, 0, F::one(tag)),
        (0, 0, 3, F::one(tag)),
    ];
    terms.push((1, 1, 1, F::from_int(-3, tag) * gamma));
    TernaryForm::from_term_list(terms).expect("homogeneous cubic")
}

/// A plane quartic with a marked centre, declared nodes and optionally a factorization.
///
/// Nodes are counted as the declared points plus the pairwise intersections
/// of the components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticPair<F: Field> {
    pub curve: TernaryForm<F>,
    pub centre: Point3<F>,
    pub declared_nodes: Vec<Point3<F>>,
    pub components: Vec<TernaryForm<F>>,
}

impl<F: Field> QuarticPair<F> {
    pub fn new(curve: TernaryForm<F>, centre: Point3<F>, declared_nodes: Vec<Point3<F>>) -> Result<Self, CurveError> {
        expect_degree(&curve, 4)?;
        for n in &declared_nodes {
            if *n == centre {
                return Err(CurveError::CentreIsNode);
            }
            if !is_node_at(&curve, n)? {
                return Err(CurveError::NotANode(n.to_string()));
            }
        }
        Ok(QuarticPair { curve, centre, declared_nodes, components: Vec::new() })
    }

    /// Attach factors whose pairwise intersections are further nodes.
    pub fn with_components(mut self, components: Vec<TernaryForm<F>>) -> Result<Self, CurveError> {
        let tag = self.curve.tag();
        let product = components.iter().fold(TernaryForm::constant(F::one(tag)), |acc, c| &acc * c);
        if product != self.curve {
            return Err(CurveError::ComponentMismatch);
        }
        self.components = components;
        Ok(self)
    }

    pub fn tag(&self) -> F::Tag {
        self.curve.tag()
    }

    pub fn centre_on_curve(&self) -> bool {
        self.curve.evaluate(self.centre.coords()).is_zero()
    }

    pub fn node_count(&self) -> usize {
        let mut n = self.declared_nodes.len();
        for i in 0..self.components.len() {
            for j in i + 1..self.components.len() {
                n += (self.components[i].degree() * self.components[j].degree()) as usize;
            }
        }
        n
    }
}

/// Lines joining the centre to the nodes: the roots of `finite` and possibly `m = infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLines<F: Field> {
    /// Monic squarefree; constant 1 when there is no finite node line.
    pub finite: UniPoly<F>,
    pub at_infinity: bool,
    /// Whether each node lies on its own line (no two nodes collinear with the centre).
    pub distinct: bool,
}

impl<F: Field> NodeLines<F> {
    pub fn count(&self) -> usize {
        self.finite.degree().unwrap_or(0) + usize::from(self.at_infinity)
    }

    pub fn loci(&self) -> Vec<Locus<F>> {
        let mut v = Vec::new();
        if self.finite.degree().unwrap_or(0) > 0 {
            v.push(Locus::Finite(self.finite.clone()));
        }
        if self.at_infinity {
            v.push(Locus::Infinity);
        }
        v
    }

    pub fn contains(&self, m: &PencilParam<F>) -> bool {
        match m {
            PencilParam::Finite(x) => self.finite.degree().unwrap_or(0) > 0 && self.finite.eval(x).is_zero(),
            PencilParam::Infinity => self.at_infinity,
        }
    }

    /// How many of these lines lie in the given fibre locus.
    pub fn count_in(&self, locus: &Locus<F>) -> Result<usize, PolyError> {
        Ok(match locus {
            Locus::Infinity => usize::from(self.at_infinity),
            Locus::Finite(f) => self.finite.gcd_monic(f)?.degree().unwrap_or(0),
        })
    }
}

fn reversed<F: Field>(v: Vec<F>) -> Vec<F> {
    v.into_iter().rev().collect()
}

/// Homogeneous polynomial in the pencil parameter vanishing on the node lines.
fn node_line_polynomial<F: Field>(pair: &QuarticPair<F>) -> Result<(UniPoly<F>, usize), CurveError> {
    let tag = pair.tag();
    let chart = crate::ternaryform::PencilChart::for_point(&pair.centre);
    let mut finite = UniPoly::one(tag);
    let mut at_infinity = 0;
    for n in &pair.declared_nodes {
        match chart.param_of_point(n)? {
            PencilParam::Finite(m) => finite = finite * UniPoly::linear_root(m),
            PencilParam::Infinity => at_infinity += 1,
        }
    }
    let fams: Vec<BinaryFamily<F>> = pair.components.iter().map(|c| restrict_to_pencil(c, &pair.centre)).collect();
    for i in 0..fams.len() {
        for j in i + 1..fams.len() {
            let (di, dj) = (fams[i].degree as usize, fams[j].degree as usize);
            let n = di * dj;
            let pts = (0..=n as i64)
                .map(|k| {
                    let m = PencilParam::Finite(F::from_int(k, tag));
                    let a = reversed(fams[i].section(&m));
                    let b = reversed(fams[j].section(&m));
                    (F::from_int(k, tag), sylvester_resultant(&a, di, &b, dj, tag))
                })
                .collect::<Vec<_>>();
            let r = UniPoly::interpolate(&pts, tag)?;
            let Some(deg) = r.degree() else {
                return Err(CurveError::SharedComponent);
            };
            at_infinity += n - deg;
            finite = finite * r;
        }
    }
    Ok((finite, at_infinity))
}

pub fn node_lines<F: Field>(pair: &QuarticPair<F>) -> Result<NodeLines<F>, CurveError> {
    let (finite, inf) = node_line_polynomial(pair)?;
    let radical = if finite.is_constant() { UniPoly::one(pair.tag()) } else { finite.squarefree_decomposition()?.radical() };
    let lines = NodeLines { finite: radical, at_infinity: inf > 0, distinct: false };
    let distinct = lines.count() == pair.node_count();
    Ok(NodeLines { distinct, ..lines })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// The centre is off the quartic.
    Split,
    /// The centre is a smooth non-flex point of the quartic.
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport<F: Field> {
    pub kind: ModelKind,
    pub model: WeierstrassModel<F>,
    pub fibres: FibreReport<F>,
    pub node_count: usize,
    /// Pencil parameters of the lines through the declared nodes.
    pub node_line_params: Vec<PencilParam<F>>,
    pub node_lines: NodeLines<F>,
    /// Node lines whose fibre is `I2`.
    pub node_lines_i2: usize,
    pub i2_count: usize,
    pub flex_line_count: usize,
    /// `None` when the surface is not special.
    pub bitangent_count: Option<usize>,
    /// Tangent line at the centre and its fibre type, for the ramified model.
    pub tangent_line: Option<(PencilParam<F>, Kodaira)>,
}

impl<F: Field> PairReport<F> {
    pub fn require_special(&self) -> Result<(usize, usize), CurveError> {
        self.fibres.special_type.ok_or_else(|| CurveError::NotSpecial(self.fibres.type_multiset()))
    }
}

fn kodaira_at<F: Field>(fibres: &FibreReport<F>, m: &PencilParam<F>) -> Kodaira {
    let found = match m {
        PencilParam::Finite(x) => fibres.class_at(Some(x)),
        PencilParam::Infinity => fibres.class_at(None),
    };
    found.map(|c| c.kodaira).unwrap_or(Kodaira::I(0))
}

pub fn analyze_pair<F: Field>(pair: &QuarticPair<F>) -> Result<PairReport<F>, CurveError> {
    let c = &pair.curve;
    let p = &pair.centre;
    let fam = restrict_to_pencil(c, p);
    let (kind, raw, tangent) = if pair.centre_on_curve() {
        if is_singular_at(c, p)? {
            return Err(CurveError::SingularCentre);
        }
        let t = centre_tangent(&fam)?;
        (ModelKind::Ramified, ramified_family_to_weierstrass(&fam)?, Some(t))
    } else {
        (ModelKind::Split, family_to_weierstrass(&fam)?, None)
    };
    let model = raw.minimalize()?;
    let fibres = model.classify_fibres()?;
    let chart = &fam.chart;
    let node_line_params = pair
        .declared_nodes
        .iter()
        .map(|n| chart.param_of_point(n))
        .collect::<Result<Vec<_>, _>>()?;
    let node_lines = node_lines(pair)?;
    let mut node_lines_i2 = 0;
    for class in fibres.classes.iter().filter(|c| c.kodaira == Kodaira::I(2)) {
        node_lines_i2 += node_lines.count_in(&class.locus)?;
    }
    let i2_count = fibres.count_of(Kodaira::I(2));
    let flex_line_count = fibres.count_of(Kodaira::II);
    let bitangent_count = fibres.special_type.map(|_| i2_count - node_lines_i2);
    let tangent_line = tangent.map(|t| {
        let k = kodaira_at(&fibres, &t);
        (t, k)
    });
    Ok(PairReport {
        kind,
        model,
        fibres,
        node_count: pair.node_count(),
        node_line_params,
        node_lines,
        node_lines_i2,
        i2_count,
        flex_line_count,
        bitangent_count,
        tangent_line,
    })
}

/// Whether the line through the centre with parameter `m` meets the quartic
/// in two double points, certified over the base field.
pub fn certify_bitangent<F: Field>(pair: &QuarticPair<F>, m: &PencilParam<F>) -> Result<bool, CurveError> {
    let fam = restrict_to_pencil(&pair.curve, &pair.centre);
    let sec = fam.section(m);
    let q = BinaryQuartic::new([sec[0].clone(), sec[1].clone(), sec[2].clone(), sec[3].clone(), sec[4].clone()])
        .map_err(|_| FormError::LineIsComponent)?;
    Ok(q.is_perfect_square()?.is_some_and(|s| s.squarefree))
}

/// Whether the line through the centre with parameter `m` meets the quartic in a triple point.
pub fn certify_flex_line<F: Field>(pair: &QuarticPair<F>, m: &PencilParam<F>) -> Result<bool, CurveError> {
    let fam = restrict_to_pencil(&pair.curve, &pair.centre);
    Ok(binary_root_multiplicities(&fam.section(m))?.iter().any(|&(k, _)| k == 3))
}

/// The quartic normal forms, one per configuration of nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalForm<F: Field> {
    /// `(ax+by)^2 (cx+dy)^2 + z^2 (2 q2(x,y) + z^2)`, `q2 = q[0] x^2 + q[1] xy + q[2] y^2`, `p = (0:0:1)`.
    Binodal { a: F, b: F, c: F, d: F, q2: [F; 3] },
    /// `h x^2 y^2 + z^2 (2 (x^2 + k xy + y^2) + z^2)`, `p = (0:0:1)`.
    BinodalReduced { h: F, k: F },
    /// `a y^2 z^2 + b z^2 x^2 + c x^2 y^2 + 2xyz (fx + gy + hz)`, `p` the kernel of the rank-2 matrix.
    Trinodal { a: F, b: F, c: F, f: F, g: F, h: F },
    /// `(xy + a z^2)(xy + b (x+y-z)^2)`, `p = (0:0:1)`.
    TwoConics { a: F, b: F },
    /// `xy (a xy - (xz + yz - z^2))` with `p` on the conic.
    ConicTwoLines { a: F, p: [F; 3] },
    /// `xyz (x+y+z)`.
    FourLines { p: [F; 3] },
    /// Fermat cubic times a line, `p = (0:0:1)`.
    FermatLine { line: [F; 3] },
    /// `(xyz + x^3 + y^3)` times a line, `p = (1:1:-3)`.
    NodalCubicLine { line: [F; 3] },
}

impl<F: Field> NormalForm<F> {
    pub fn name(&self) -> &'static str {
        match self {
            NormalForm::Binodal { .. } => "binodal",
            NormalForm::BinodalReduced { .. } => "binodal_reduced",
            NormalForm::Trinodal { .. } => "trinodal",
            NormalForm::TwoConics { .. } => "two_conics",
            NormalForm::ConicTwoLines { .. } => "conic_two_lines",
            NormalForm::FourLines { .. } => "four_lines",
            NormalForm::FermatLine { .. } => "fermat_line",
            NormalForm::NodalCubicLine { .. } => "nodal_cubic_line",
        }
    }
}

fn form<F: Field>(terms: Vec<(u32, u32, u32, F)>) -> TernaryForm<F> {
    TernaryForm::from_term_list(terms).expect("homogeneous terms")
}

fn lin<F: Field>(a: &F, b: &F, c: &F) -> TernaryForm<F> {
    TernaryForm::linear(&[a.clone(), b.clone(), c.clone()])
}

fn point<F: Field>(c: [i64; 3], tag: F::Tag) -> Point3<F> {
    Point3::from_ints(c, tag).expect("nonzero")
}

fn inadmissible<T>(why: &str) -> Result<T, CurveError> {
    Err(CurveError::Inadmissible(why.to_string()))
}

/// Flex-line locus of a cubic family: lines meeting the cubic in a triple point.
fn triple_root_locus<F: Field>(fam: &BinaryFamily<F>) -> Result<(UniPoly<F>, bool), PolyError> {
    let tag = fam.tag();
    let [a, b, c, d] = [&fam.coeffs[0], &fam.coeffs[1], &fam.coeffs[2], &fam.coeffs[3]];
    let k = |n: i64| F::from_int(n, tag);
    let h0 = b * b - (a * c).scale(&k(3));
    let h1 = b * c - (a * d).scale(&k(9));
    let h2 = c * c - (b * d).scale(&k(3));
    let g = h0.gcd_monic(&h1)?.gcd_monic(&h2)?;
    let sec = fam.section(&PencilParam::Infinity);
    let at_inf = (sec[1].clone() * &sec[1] - k(3) * &sec[0] * &sec[2]).is_zero()
        && (sec[2].clone() * &sec[2] - k(3) * &sec[1] * &sec[3]).is_zero()
        && (sec[1].clone() * &sec[2] - k(9) * &sec[0] * &sec[3]).is_zero();
    Ok((g, at_inf))
}

fn check_node_lines_avoid_flexes<F: Field>(pair: &QuarticPair<F>, cubic: &TernaryForm<F>) -> Result<(), CurveError> {
    let lines = node_lines(pair)?;
    let (flex, flex_inf) = triple_root_locus(&restrict_to_pencil(cubic, &pair.centre))?;
    let shared = lines.finite.gcd_monic(&flex)?.degree().unwrap_or(0) > 0 || (flex_inf && lines.at_infinity);
    if shared {
        return inadmissible("a node lies on a flex line through the centre");
    }
    Ok(())
}

pub fn normal_form<F: Field>(nf: &NormalForm<F>, tag: F::Tag) -> Result<QuarticPair<F>, CurveError> {
    let zero = F::zero(tag);
    let one = F::one(tag);
    let k = |n: i64| F::from_int(n, tag);
    let origin = point::<F>([0, 0, 1], tag);
    let pair = match nf {
        NormalForm::Binodal { a, b, c, d, q2 } => {
            if (a.clone() * d - b.clone() * c).is_zero() {
                return inadmissible("ax+by and cx+dy are proportional");
            }
            let l1 = lin(a, b, &zero);
            let l2 = lin(c, d, &zero);
            let prod = &l1 * &l2;
            let q = form(vec![
                (2, 0, 2, k(2) * &q2[0]),
                (1, 1, 2, k(2) * &q2[1]),
                (0, 2, 2, k(2) * &q2[2]),
                (0, 0, 4, one.clone()),
            ]);
            let curve = &(&prod * &prod) + &q;
            let nodes = vec![
                Point3::new([-b.clone(), a.clone(), zero.clone()])?,
                Point3::new([-d.clone(), c.clone(), zero.clone()])?,
            ];
            QuarticPair::new(curve, origin, nodes)?
        }
        NormalForm::BinodalReduced { h, k: kk } => {
            if h.is_zero() {
                return inadmissible("h = 0");
            }
            let curve = form(vec![
                (2, 2, 0, h.clone()),
                (2, 0, 2, k(2)),
                (1, 1, 2, k(2) * kk),
                (0, 2, 2, k(2)),
                (0, 0, 4, one.clone()),
            ]);
            QuarticPair::new(curve, origin, vec![point([1, 0, 0], tag), point([0, 1, 0], tag)])?
        }
        NormalForm::Trinodal { a, b, c, f, g, h } => {
            let root = |x: F, name: &str| {
                x.sqrt().ok_or_else(|| CurveError::Inadmissible(format!("{name} has no square root in the field")))
            };
            let sbc = root(b.clone() * c, "bc")?;
            let sca = root(c.clone() * a, "ca")?;
            let sab = root(a.clone() * b, "ab")?;
            let m: linalg::Mat3<F> = [
                [f.clone() - &sbc, g.clone() - &sca, h.clone() - &sab],
                [f.clone() - &sbc, g.clone() + &sca, h.clone() + &sab],
                [f.clone() + &sbc, g.clone() - &sca, h.clone() + &sab],
            ];
            if linalg::rank3(&m) != 2 {
                return inadmissible("the matrix of the pencil point must have rank 2");
            }
            let p = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .map(|(i, j)| linalg::cross(&m[i], &m[j]))
                .find(|v| v.iter().any(|x| !x.is_zero()))
                .expect("rank 2");
            let cubic_part = lin(f, g, h).scale(&k(2));
            let xyz = form(vec![(1, 1, 1, one.clone())]);
            let curve = &form(vec![(0, 2, 2, a.clone()), (2, 0, 2, b.clone()), (2, 2, 0, c.clone())])
                + &(&xyz * &cubic_part);
            let nodes = vec![point([1, 0, 0], tag), point([0, 1, 0], tag), point([0, 0, 1], tag)];
            QuarticPair::new(curve, Point3::new(p)?, nodes)?
        }
        NormalForm::TwoConics { a, b } => {
            if a.is_zero() || b.is_zero() {
                return inadmissible("a and b must be nonzero");
            }
            let xy = form(vec![(1, 1, 0, one.clone())]);
            let c1 = &xy + &form(vec![(0, 0, 2, a.clone())]);
            let s = lin(&one, &one, &-one.clone());
            let c2 = &xy + &(&s * &s).scale(b);
            for cc in [&c1, &c2] {
                if linalg::det3(&conic_matrix(cc)?).is_zero() {
                    return inadmissible("both conics must be irreducible");
                }
            }
            if !conics_meet_transversally(&c1, &c2)? {
                return inadmissible("the conics must meet in four distinct points");
            }
            let curve = &c1 * &c2;
            QuarticPair::new(curve, origin, Vec::new())?.with_components(vec![c1, c2])?
        }
        NormalForm::ConicTwoLines { a, p } => {
            if a.is_zero() || a.is_one() {
                return inadmissible("the conic is irreducible only for a not in {0, 1}");
            }
            let conic = form(vec![
                (1, 1, 0, a.clone()),
                (1, 0, 1, -one.clone()),
                (0, 1, 1, -one.clone()),
                (0, 0, 2, one.clone()),
            ]);
            if !conic.evaluate(p).is_zero() {
                return inadmissible("p must lie on the conic");
            }
            if p[0].is_zero() || p[1].is_zero() {
                return inadmissible("p must satisfy x0 y0 != 0");
            }
            if (k(2) * &p[2] - &p[0] - &p[1]).is_zero() {
                return inadmissible("the tangent line at p passes through the node (0:0:1)");
            }
            let curve = &form(vec![(1, 1, 0, one.clone())]) * &conic;
            let nodes = [[0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [0, 0, 1]]
                .into_iter()
                .map(|c| point(c, tag))
                .collect();
            QuarticPair::new(curve, Point3::new(p.clone())?, nodes)?
        }
        NormalForm::FourLines { p } => {
            let forbidden: [[i64; 3]; 7] =
                [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
            for l in forbidden {
                let v = l.iter().zip(p).fold(zero.clone(), |acc, (&li, pi)| acc + k(li) * pi);
                if v.is_zero() {
                    return inadmissible("p must avoid the four lines and the diagonals");
                }
            }
            let curve = form(vec![(2, 1, 1, one.clone()), (1, 2, 1, one.clone()), (1, 1, 2, one.clone())]);
            let nodes = [[0, 0, 1], [0, 1, 0], [1, 0, 0], [0, 1, -1], [1, 0, -1], [1, -1, 0]]
                .into_iter()
                .map(|c| point(c, tag))
                .collect();
            QuarticPair::new(curve, Point3::new(p.clone())?, nodes)?
        }
        NormalForm::FermatLine { line } => {
            if line[2].is_zero() {
                return inadmissible("the line must not pass through p");
            }
            let cubic = form(vec![(3, 0, 0, one.clone()), (0, 3, 0, one.clone()), (0, 0, 3, one.clone())]);
            let l = TernaryForm::linear(line);
            let curve = &cubic * &l;
            let pair = QuarticPair::new(curve, origin, Vec::new())?.with_components(vec![cubic.clone(), l])?;
            check_node_lines_avoid_flexes(&pair, &cubic)?;
            pair
        }
        NormalForm::NodalCubicLine { line } => {
            let p = point::<F>([1, 1, -3], tag);
            if line[2].is_zero() {
                return inadmissible("the line must not pass through the node of the cubic");
            }
            if linalg::dot(line, p.coords()).is_zero() {
                return inadmissible("the line must not pass through p");
            }
            let cubic = form(vec![(1, 1, 1, one.clone()), (3, 0, 0, one.clone()), (0, 3, 0, one.clone())]);
            let l = TernaryForm::linear(line);
            let curve = &cubic * &l;
            let pair = QuarticPair::new(curve, p, vec![origin])?.with_components(vec![cubic.clone(), l])?;
            check_node_lines_avoid_flexes(&pair, &cubic)?;
            pair
        }
    };
    if pair.centre_on_curve() != matches!(nf, NormalForm::ConicTwoLines { .. }) {
        return inadmissible("p must lie off the quartic");
    }
    if !node_lines(&pair)?.distinct {
        return inadmissible("two nodes are collinear with p");
    }
    Ok(pair)
}

/// `x^a y^b z^c` coefficient names of a ternary cubic.
pub const CUBIC_MONOMIALS: [(&str, [u32; 3]); 10] = [
    ("A", [3, 0, 0]),
    ("B", [0, 3, 0]),
    ("C", [0, 0, 3]),
    ("P", [2, 1, 0]),
    ("Q", [0, 2, 1]),
    ("R", [1, 0, 2]),
    ("T", [1, 2, 0]),
    ("U", [0, 1, 2]),
    ("V", [2, 0, 1]),
    ("M", [1, 1, 1]),
];

/// The polynomials `a1..a4`, `b2`, `b4`, `c4` of the pencil `g0 + t g1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C4Pencil<F: Field> {
    pub a1: UniPoly<F>,
    pub a2: UniPoly<F>,
    pub a3: UniPoly<F>,
    pub a4: UniPoly<F>,
    pub b2: UniPoly<F>,
    pub b4: UniPoly<F>,
    pub c4: UniPoly<F>,
}

/// `c4` of a single cubic given its ten coefficients in the order of [`CUBIC_MONOMIALS`].
pub fn cubic_c4<R>(k: [R; 10]) -> [R; 7]
where
    R: Clone
        + std::ops::Add<Output = R>
        + std::ops::Sub<Output = R>
        + std::ops::Mul<Output = R>
        + std::ops::Neg<Output = R>,
{
    let [a, b, c, p, q, r, t, u, v, m] = k;
    let sc = |n: i64, x: R| -> R {
        let mut acc = x.clone();
        for _ in 1..n.abs() {
            acc = acc + x.clone();
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    };
    let m3 = |x: &R, y: &R, z: &R| x.clone() * y.clone() * z.clone();
    let m4 = |w: &R, x: &R, y: &R, z: &R| w.clone() * x.clone() * y.clone() * z.clone();
    let a1 = m.clone();
    let a2 = -(p.clone() * u.clone() + q.clone() * v.clone() + r.clone() * t.clone());
    let a3 = sc(9, m3(&a, &b, &c)) - (m3(&a, &q, &u) + m3(&b, &r, &v) + m3(&c, &p, &t)) - (m3(&t, &u, &v) + m3(&p, &q, &r));
    let a4 = (m4(&a, &r, &q, &q) + m4(&b, &p, &r, &r) + m4(&c, &q, &p, &p) + m4(&a, &t, &u, &u) + m4(&b, &u, &v, &v) + m4(&c, &v, &t, &t))
        + (m4(&p, &q, &u, &v) + m4(&q, &r, &v, &t) + m4(&r, &p, &t, &u))
        - sc(3, m4(&a, &b, &r, &u) + m4(&b, &c, &p, &v) + m4(&c, &a, &q, &t));
    let b2 = a1.clone() * a1.clone() + sc(4, a2.clone());
    let b4 = sc(2, a4.clone()) + a1.clone() * a3.clone();
    let c4 = b2.clone() * b2.clone() - sc(24, b4.clone());
    [a1, a2, a3, a4, b2, b4, c4]
}

pub fn cubic_coefficients<F: Field>(g: &TernaryForm<F>) -> [F; 10] {
    CUBIC_MONOMIALS.map(|(_, e)| g.coefficient(e))
}

pub fn pencil_c4<F: Field>(g0: &TernaryForm<F>, g1: &TernaryForm<F>) -> Result<C4Pencil<F>, CurveError> {
    expect_degree(g0, 3)?;
    expect_degree(g1, 3)?;
    let tag = g0.tag();
    let k0 = cubic_coefficients(g0);
    let k1 = cubic_coefficients(g1);
    let proportional = (0..10).all(|i| (0..10).all(|j| (k0[i].clone() * &k1[j] - k0[j].clone() * &k1[i]).is_zero()));
    if proportional {
        return Err(CurveError::Proportional);
    }
    let lin: [UniPoly<F>; 10] = std::array::from_fn(|i| UniPoly::new(vec![k0[i].clone(), k1[i].clone()], tag));
    let [a1, a2, a3, a4, b2, b4, c4] = cubic_c4(lin);
    Ok(C4Pencil { a1, a2, a3, a4, b2, b4, c4 })
}
