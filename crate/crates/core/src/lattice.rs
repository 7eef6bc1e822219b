//! The E8 lattice with the negative definite form on `R^8`, and the
//! height pairing on Mordell-Weil groups of rational elliptic surfaces.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactfield::{Field, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("{0:?} (doubled coordinates) is not in E8")]
    NotInLattice([i64; 8]),
    #[error("coordinate {0} is not a half-integer")]
    NotHalfIntegral(String),
    #[error("expected {expected} rows, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("not an E8 graph: {0}")]
    NotE8Graph(String),
    #[error("S.S0 = {0} must be at least -1")]
    InvalidIntersection(i64),
    #[error("negative height {0}: inconsistent section data")]
    NegativeHeight(Rat),
    #[error("unknown component flag {0:?}, expected C or D")]
    UnknownFlag(char),
}

/// Element of E8, stored as twice its coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct E8Vector {
    doubled: [i64; 8],
}

impl E8Vector {
    pub fn from_doubled(doubled: [i64; 8]) -> Result<Self, LatticeError> {
        let all_even = doubled.iter().all(|c| c % 2 == 0);
        let all_odd = doubled.iter().all(|c| c % 2 != 0);
        let sum: i64 = doubled.iter().sum();
        if (all_even || all_odd) && sum % 4 == 0 {
            Ok(E8Vector { doubled })
        } else {
            Err(LatticeError::NotInLattice(doubled))
        }
    }

    pub fn from_ints(c: [i64; 8]) -> Result<Self, LatticeError> {
        Self::from_doubled(c.map(|x| 2 * x))
    }

    pub fn from_rats(c: &[Rat]) -> Result<Self, LatticeError> {
        if c.len() != 8 {
            return Err(LatticeError::WrongLength { expected: 8, got: c.len() });
        }
        let mut d = [0i64; 8];
        for (slot, x) in d.iter_mut().zip(c) {
            let two = x.clone() * Rat::from(2);
            let n = if two.is_integer() { i64::try_from(two.numer()).ok() } else { None };
            *slot = n.ok_or_else(|| LatticeError::NotHalfIntegral(x.to_string()))?;
        }
        Self::from_doubled(d)
    }

    pub fn doubled(&self) -> [i64; 8] {
        self.doubled
    }

    pub fn coords(&self) -> [Rat; 8] {
        self.doubled.map(|c| Rat::new(c, 2).expect("nonzero"))
    }

    pub fn is_root(&self) -> bool {
        pairing(self, self) == Rat::from(-2)
    }
}

impl std::ops::Neg for E8Vector {
    type Output = E8Vector;
    fn neg(self) -> E8Vector {
        E8Vector { doubled: self.doubled.map(|c| -c) }
    }
}

impl fmt::Display for E8Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The negated Euclidean dot product.
pub fn pairing(u: &E8Vector, v: &E8Vector) -> Rat {
    let dot: i64 = u.doubled.iter().zip(&v.doubled).map(|(a, b)| a * b).sum();
    Rat::new(-dot, 4).expect("nonzero")
}

/// All 240 roots: `+-e_i +- e_j` and `(+-1/2, ..., +-1/2)` with an even number of minus signs.
pub fn enumerate_roots() -> Vec<E8Vector> {
    let mut out = Vec::with_capacity(240);
    for i in 0..8 {
        for j in i + 1..8 {
            for (si, sj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let mut d = [0i64; 8];
                d[i] = si;
                d[j] = sj;
                out.push(E8Vector { doubled: d });
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let d = std::array::from_fn(|k| if mask & (1 << k) != 0 { -1 } else { 1 });
            out.push(E8Vector { doubled: d });
        }
    }
    out.sort();
    out
}

/// Named vectors with the pairings they are claimed to have; `None` entries are not checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingTable {
    pub name: String,
    pub labels: Vec<String>,
    pub vectors: Vec<E8Vector>,
    pub expected: Vec<Vec<Option<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub row: String,
    pub col: String,
    pub expected: i64,
    pub actual: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub name: String,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<Rat>>,
    pub non_roots: Vec<String>,
    pub mismatches: Vec<Mismatch>,
    /// Remarks on sign conventions where the table is usually quoted with the positive form.
    pub notes: Vec<String>,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.non_roots.is_empty() && self.mismatches.is_empty()
    }
}

pub fn verify_table(table: &PairingTable) -> TableReport {
    let n = table.vectors.len();
    let matrix: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| pairing(&table.vectors[i], &table.vectors[j])).collect())
        .collect();
    let non_roots = (0..n).filter(|&i| !table.vectors[i].is_root()).map(|i| table.labels[i].clone()).collect();
    let mut mismatches = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Some(e) = table.expected.get(i).and_then(|r| r.get(j)).copied().flatten() {
                if matrix[i][j] != Rat::from(e) {
                    mismatches.push(Mismatch {
                        row: table.labels[i].clone(),
                        col: table.labels[j].clone(),
                        expected: e,
                        actual: matrix[i][j].clone(),
                    });
                }
            }
        }
    }
    let notes = if table.name == "mixed24" {
        vec![
            "u_i.C_j is -delta_ij in the negative definite form, quoted as delta_ij with the positive form".into(),
            "u_i.u_j is -1 for i != j in the negative definite form, quoted as 1 with the positive form".into(),
        ]
    } else {
        Vec::new()
    };
    TableReport { name: table.name.clone(), labels: table.labels.clone(), matrix, non_roots, mismatches, notes }
}

fn full_expectation(n: usize, off: i64) -> Vec<Vec<Option<i64>>> {
    (0..n).map(|i| (0..n).map(|j| Some(if i == j { -2 } else { off })).collect()).collect()
}

/// Eight roots pairwise meeting in -1.
pub fn eight_vector_table() -> PairingTable {
    let mut vectors = Vec::new();
    for k in 1..8 {
        let mut c = [0i64; 8];
        c[0] = 1;
        c[k] = 1;
        vectors.push(E8Vector::from_ints(c).expect("root"));
    }
    vectors.push(E8Vector::from_doubled([1; 8]).expect("root"));
    PairingTable {
        name: "eight".into(),
        labels: (1..=8).map(|i| format!("v{i}")).collect(),
        vectors,
        expected: full_expectation(8, -1),
    }
}

/// The components `C1..C4`, the sections `ua, ub` and `u1..u4` of the `(2, 4)` model.
pub fn mixed24_table() -> PairingTable {
    let ints = |c: [i64; 8]| E8Vector::from_ints(c).expect("root");
    let halves = |c: [i64; 8]| E8Vector::from_doubled(c).expect("root");
    let rows: Vec<(&str, E8Vector)> = vec![
        ("C1", ints([1, 1, 0, 0, 0, 0, 0, 0])),
        ("C2", ints([1, -1, 0, 0, 0, 0, 0, 0])),
        ("C3", ints([0, 0, 1, 1, 0, 0, 0, 0])),
        ("C4", ints([0, 0, 0, 0, 1, 1, 0, 0])),
        ("ua", ints([1, 0, 1, 0, 0, 0, 0, 0])),
        ("ub", ints([1, 0, 0, 1, 0, 0, 0, 0])),
        ("u1", halves([1, 1, 1, -1, 1, -1, 1, 1])),
        ("u2", halves([1, -1, 1, -1, 1, -1, 1, -1])),
        ("u3", ints([0, 0, 1, 0, 0, 0, 1, 0])),
        ("u4", ints([0, 0, 0, 0, 1, 0, 1, 0])),
    ];
    let n = rows.len();
    let is_c = |i: usize| i < 4;
    let is_ab = |i: usize| i == 4 || i == 5;
    let is_u = |i: usize| i >= 6;
    let expect = |i: usize, j: usize| -> Option<i64> {
        if i == j {
            return Some(-2);
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if is_c(i) && is_c(j) {
            Some(0)
        } else if is_c(i) && is_ab(j) {
            Some(if i < 3 { -1 } else { 0 })
        } else if is_ab(i) && is_ab(j) {
            Some(-1)
        } else if is_c(i) && is_u(j) {
            Some(if j - 6 == i { -1 } else { 0 })
        } else if is_u(i) && is_u(j) {
            Some(-1)
        } else {
            None
        }
    };
    PairingTable {
        name: "mixed24".into(),
        labels: rows.iter().map(|r| r.0.to_string()).collect(),
        vectors: rows.iter().map(|r| r.1).collect(),
        expected: (0..n).map(|i| (0..n).map(|j| expect(i, j)).collect()).collect(),
    }
}

/// Coefficients of `r1..r8` in the simple roots `x1..x8`.
pub const DYNKIN_ROWS: [[i64; 8]; 8] = [
    [1, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 1, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 0],
    [2, 3, 4, 5, 6, 4, 2, 3],
];

/// Graph on eight simple roots; adjacent roots pair to +1, each root to -2 with itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanGraph {
    pub labels: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl CartanGraph {
    /// Any graph on eight vertices, without shape checks.
    pub fn raw(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        CartanGraph { labels: (1..=8).map(|i| format!("x{i}")).collect(), edges }
    }

    /// A graph of shape E8: a tree with one branch vertex and arms of lengths 1, 2, 4.
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, LatticeError> {
        let g = Self::raw(edges);
        g.check_e8_shape()?;
        Ok(g)
    }

    /// Chain `x1 - ... - x7` with `x8` attached to `x5`.
    pub fn standard() -> Self {
        Self::chain_with_attachment(4)
    }

    /// Chain `x1 - ... - x7` with `x8` attached to the chain vertex with the given index.
    pub fn chain_with_attachment(k: usize) -> Self {
        Self::raw((0..6).map(|i| (i, i + 1)).chain(std::iter::once((k, 7))))
    }

    fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn check_e8_shape(&self) -> Result<(), LatticeError> {
        if self.edges.iter().any(|&(a, b)| a == b || b >= 8) {
            return Err(LatticeError::NotE8Graph("edge out of range".into()));
        }
        if self.edges.len() != 7 {
            return Err(LatticeError::NotE8Graph(format!("{} edges", self.edges.len())));
        }
        let mut seen = vec![false; 8];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen[b] {
                    stack.push(b);
                }
                if b == v && !seen[a] {
                    stack.push(a);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(LatticeError::NotE8Graph("disconnected".into()));
        }
        let branch: Vec<usize> = (0..8).filter(|&v| self.degree(v) == 3).collect();
        if branch.len() != 1 || (0..8).any(|v| self.degree(v) > 3) {
            return Err(LatticeError::NotE8Graph("needs exactly one vertex of degree 3".into()));
        }
        let centre = branch[0];
        let mut arms = Vec::new();
        for &(a, b) in &self.edges {
            let start = if a == centre { b } else if b == centre { a } else { continue };
            let (mut prev, mut cur, mut len) = (centre, start, 1);
            loop {
                let next = self
                    .edges
                    .iter()
                    .filter_map(|&(x, y)| if x == cur && y != prev { Some(y) } else if y == cur && x != prev { Some(x) } else { None })
                    .next();
                match next {
                    Some(n) => {
                        prev = cur;
                        cur = n;
                        len += 1;
                    }
                    None => break,
                }
            }
            arms.push(len);
        }
        arms.sort();
        if arms != [1, 2, 4] {
            return Err(LatticeError::NotE8Graph(format!("arms {arms:?}")));
        }
        Ok(())
    }

    pub fn form(&self, i: usize, j: usize) -> i64 {
        if i == j {
            -2
        } else if self.edges.contains(&(i.min(j), i.max(j))) {
            1
        } else {
            0
        }
    }

    pub fn pairing(&self, u: &[i64; 8], v: &[i64; 8]) -> i64 {
        let mut s = 0;
        for i in 0..8 {
            for j in 0..8 {
                s += u[i] * v[j] * self.form(i, j);
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinReport {
    pub matrix: Vec<Vec<i64>>,
    /// `(row, col, actual)` for every entry that is not `-2` on the diagonal or `-1` off it.
    pub mismatches: Vec<(usize, usize, i64)>,
}

impl DynkinReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn verify_dynkin_table(graph: &CartanGraph, rows: &[[i64; 8]]) -> DynkinReport {
    let n = rows.len();
    let matrix: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| graph.pairing(&rows[i], &rows[j])).collect()).collect();
    let mut mismatches = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { -2 } else { -1 };
            if matrix[i][j] != want {
                mismatches.push((i, j, matrix[i][j]));
            }
        }
    }
    DynkinReport { matrix, mismatches }
}

/// Chain vertices (0-based) to which attaching `x8` makes every row pattern valid.
pub fn validating_attachments(rows: &[[i64; 8]]) -> Vec<usize> {
    (0..7).filter(|&k| verify_dynkin_table(&CartanGraph::chain_with_attachment(k), rows).ok()).collect()
}

/// `sigma(S)^2 = -2 - 2 S.S0`.
pub fn sigma_self_intersection(k: i64) -> Result<i64, LatticeError> {
    if k < -1 {
        return Err(LatticeError::InvalidIntersection(k));
    }
    Ok(-2 - 2 * k)
}

/// Which component of an `I2` fibre a section meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// The component away from the zero section.
    C,
    /// The component meeting the zero section.
    D,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionData {
    pub k: i64,
    pub components: Vec<Component>,
}

impl SectionData {
    pub fn new(b: usize, k: i64, components: Vec<Component>) -> Result<Self, LatticeError> {
        if k < 0 {
            return Err(LatticeError::InvalidIntersection(k));
        }
        if components.len() != b {
            return Err(LatticeError::WrongLength { expected: b, got: components.len() });
        }
        Ok(SectionData { k, components })
    }

    /// Parse a flag string such as `"CCDD"`.
    pub fn parse_flags(s: &str) -> Result<Vec<Component>, LatticeError> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'C' => Ok(Component::C),
                'D' => Ok(Component::D),
                _ => Err(LatticeError::UnknownFlag(c)),
            })
            .collect()
    }

    pub fn b(&self) -> usize {
        self.components.len()
    }

    pub fn m(&self) -> usize {
        self.components.iter().filter(|&&c| c == Component::C).count()
    }

    /// `2 + 2k - m/2`.
    pub fn height(&self) -> Result<Rat, LatticeError> {
        let h = Rat::from(2 + 2 * self.k) - Rat::new(self.m() as i64, 2).expect("nonzero");
        if h.is_negative() {
            return Err(LatticeError::NegativeHeight(h));
        }
        Ok(h)
    }

    pub fn is_torsion(&self) -> Result<bool, LatticeError> {
        Ok(self.height()?.is_zero())
    }

    /// Raised for `(k, m) = (0, 4)`, where the section has order two.
    pub fn order_two(&self) -> bool {
        self.k == 0 && self.m() == 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let a = E8Vector::from_ints([1, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        let b = E8Vector::from_ints([1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(pairing(&a, &b), Rat::from(-1));
        let h = E8Vector::from_doubled([1; 8]).unwrap();
        assert_eq!(pairing(&h, &h), Rat::from(-2));
        assert!(E8Vector::from_ints([1, 0, 0, 0, 0, 0, 0, 0]).is_err());
        assert!(E8Vector::from_doubled([1, 1, 1, 1, 1, 1, 1, -1]).is_err());
        assert!(E8Vector::from_rats(&vec![Rat::new(1, 3).unwrap(); 8]).is_err());
    }

    #[test]
    fn roots() {
        let roots = enumerate_roots();
        assert_eq!(roots.len(), 240);
        let set: BTreeSet<_> = roots.iter().copied().collect();
        assert_eq!(set.len(), 240);
        for r in &roots {
            assert!(r.is_root());
            assert!(set.contains(&-*r));
        }
    }

    #[test]
    fn tables_verify() {
        assert!(verify_table(&eight_vector_table()).ok());
        let rep = verify_table(&mixed24_table());
        assert!(rep.ok(), "{:?}", rep.mismatches);
        assert_eq!(rep.matrix[6][3], Rat::from(0));
    }

    #[test]
    fn corrupted_row_is_localized() {
        let mut t = mixed24_table();
        t.vectors[8] = E8Vector::from_ints([0, 0, 1, 0, 0, 0, 0, 1]).unwrap();
        let rep = verify_table(&t);
        assert!(!rep.ok());
        assert!(rep.mismatches.iter().all(|m| m.row == "u3" || m.col == "u3"));
    }

    #[test]
    fn dynkin_attachment() {
        let g = CartanGraph::standard();
        assert!(CartanGraph::new(g.edges.clone()).is_ok());
        assert_eq!(g.pairing(&DYNKIN_ROWS[7], &DYNKIN_ROWS[7]), -2);
        assert_eq!(g.pairing(&DYNKIN_ROWS[6], &DYNKIN_ROWS[7]), -1);
        assert!(verify_dynkin_table(&g, &DYNKIN_ROWS).ok());
        assert_eq!(validating_attachments(&DYNKIN_ROWS), vec![4]);
        assert!(CartanGraph::new((0..7).map(|i| (i, i + 1))).is_err());
    }

    #[test]
    fn heights() {
        let sd = |k, s: &str| SectionData::new(s.len(), k, SectionData::parse_flags(s).unwrap()).unwrap();
        let t = sd(0, "CCCCDD");
        assert_eq!(t.height().unwrap(), Rat::from(0));
        assert!(t.is_torsion().unwrap() && t.order_two());
        assert_eq!(sd(0, "DDDDDD").height().unwrap(), Rat::from(2));
        let h = sd(0, "CCCDDD");
        assert_eq!(h.height().unwrap(), Rat::new(1, 2).unwrap());
        assert!(!h.is_torsion().unwrap());
        assert!(matches!(sd(0, "CCCCCC").height(), Err(LatticeError::NegativeHeight(_))));
        assert_eq!(sigma_self_intersection(0).unwrap(), -2);
        assert_eq!(sigma_self_intersection(-1).unwrap(), 0);
    }
}
