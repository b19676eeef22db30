//! Finite-dimensional superalgebras given by structure constants, and the
//! identity checkers for supercommutativity and the (super) Jordan identity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::field::{half, Field, Gf, Scalar};
use crate::linalg::{self, Matrix, Vector};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

/// Which sign to use on the second right-hand term of the super Jordan
/// identity. `Corrected` follows the Kaplansky sign rule for moving `b`
/// past `c` and `d`; `AsPrinted` omits the `|b||d|` exponent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    #[default]
    Corrected,
    AsPrinted,
}

/// Upper bound on `q^(2·dim)` for the exhaustive element-pair check.
pub const EXHAUSTIVE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Debug)]
pub struct SuperAlgebra {
    id: u64,
    n: usize,
    m: usize,
    field: Field,
    labels: Vec<String>,
    constants: Vec<Scalar>,
    products: Vec<Vec<(usize, Scalar)>>,
}

impl PartialEq for SuperAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.field == other.field
            && self.constants == other.constants
    }
}

impl Eq for SuperAlgebra {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    algebra: u64,
    pub coords: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub defect: Element,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl IdentityReport {
    pub fn ok() -> Self {
        IdentityReport {
            holds: true,
            ..Default::default()
        }
    }

    pub fn from_violations(violations: Vec<Violation>) -> Self {
        IdentityReport {
            holds: violations.is_empty(),
            violations,
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, v: Violation) {
        self.holds = false;
        self.violations.push(v);
    }

    pub fn merge(&mut self, other: IdentityReport) {
        self.holds &= other.holds;
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }
}

/// Whether each of the six terms of the super Jordan identity enters the
/// defect with a minus sign, for homogeneous arguments of parities `p`.
/// Term order: (ab)(cd), (ac)(bd), (ad)(bc), ((ab)c)d, ((ad)c)b, ((bd)c)a.
pub(crate) fn identity_signs(convention: SignConvention, p: [u8; 4]) -> [bool; 6] {
    let [pa, pb, pc, pd] = p;
    let s3 = match convention {
        SignConvention::Corrected => sign(pb * pc + pb * pd + pc * pd),
        SignConvention::AsPrinted => sign(pc * pd + pb * pc),
    };
    [
        false,
        sign(pb * pc),
        sign(pb * pd + pc * pd),
        true,
        !s3,
        !sign(pa * pb + pa * pc + pa * pd + pc * pd),
    ]
}

pub fn default_labels(n: usize, m: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("e{i}"))
        .chain((1..=m).map(|i| format!("o{i}")))
        .collect()
}

#[inline]
fn sign(exp: u8) -> bool {
    exp % 2 == 1
}

impl SuperAlgebra {
    /// Builds from a dense tensor indexed `(i·d + j)·d + k`.
    pub fn new(
        n: usize,
        m: usize,
        field: Field,
        labels: Option<Vec<String>>,
        constants: Vec<Scalar>,
    ) -> Result<Self> {
        if n + m == 0 {
            return Err(Error::InvalidAlgebra(
                "dimension must be at least 1 (use SuperAlgebra::empty)".into(),
            ));
        }
        Self::build(n, m, field, labels, constants)
    }

    /// The zero-dimensional algebra, the neutral element of direct sums.
    pub fn empty(field: Field) -> Self {
        Self::build(0, 0, field, None, Vec::new()).expect("empty algebra")
    }

    fn build(
        n: usize,
        m: usize,
        field: Field,
        labels: Option<Vec<String>>,
        constants: Vec<Scalar>,
    ) -> Result<Self> {
        let d = n + m;
        if constants.len() != d * d * d {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                d * d * d,
                constants.len()
            )));
        }
        let labels = labels.unwrap_or_else(|| default_labels(n, m));
        if labels.len() != d {
            return Err(Error::InvalidAlgebra(format!(
                "expected {d} labels, got {}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return Err(Error::InvalidAlgebra(format!("bad or duplicate label {l:?}")));
            }
        }
        let par = |i: usize| u8::from(i >= n);
        let mut products = vec![Vec::new(); d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = &constants[(i * d + j) * d + k];
                    if c.field() != field {
                        return Err(Error::FieldMismatch(c.field().to_string(), field.to_string()));
                    }
                    if c.is_zero() {
                        continue;
                    }
                    if par(k) != (par(i) + par(j)) % 2 {
                        return Err(Error::InvalidAlgebra(format!(
                            "grading closure fails: {}·{} has a {} component on {}",
                            labels[i],
                            labels[j],
                            if par(k) == 0 { "even" } else { "odd" },
                            labels[k]
                        )));
                    }
                    products[i * d + j].push((k, c.clone()));
                }
            }
        }
        Ok(SuperAlgebra {
            id: fresh_id(),
            n,
            m,
            field,
            labels,
            constants,
            products,
        })
    }

    /// Builds from listed basis products. With `complete`, a pair whose
    /// transpose is not listed gets its transpose by supercommutativity.
    #[allow(clippy::type_complexity)]
    pub fn from_products(
        n: usize,
        m: usize,
        field: Field,
        labels: Option<Vec<String>>,
        products: &[(usize, usize, Vec<(Scalar, usize)>)],
        complete: bool,
    ) -> Result<Self> {
        let d = n + m;
        let mut c = vec![field.zero(); d * d * d];
        let mut given = vec![false; d * d];
        for (i, j, terms) in products {
            let (i, j) = (*i, *j);
            if i >= d || j >= d {
                return Err(Error::InvalidAlgebra(format!("basis index out of range in ({i},{j})")));
            }
            if given[i * d + j] {
                return Err(Error::InvalidAlgebra(format!("product ({i},{j}) given twice")));
            }
            given[i * d + j] = true;
            for (s, k) in terms {
                if *k >= d {
                    return Err(Error::InvalidAlgebra(format!("basis index {k} out of range")));
                }
                let slot = &mut c[(i * d + j) * d + k];
                *slot = &*slot + s;
            }
        }
        if complete {
            let par = |i: usize| u8::from(i >= n);
            for i in 0..d {
                for j in 0..d {
                    if given[i * d + j] && !given[j * d + i] {
                        let odd_pair = par(i) == 1 && par(j) == 1;
                        for k in 0..d {
                            let v = c[(i * d + j) * d + k].clone();
                            c[(j * d + i) * d + k] = if odd_pair { -v } else { v };
                        }
                        given[j * d + i] = true;
                    }
                }
            }
        }
        if d == 0 {
            return Ok(Self::empty(field));
        }
        Self::new(n, m, field, labels, c)
    }

    /// Builds from rows `(left, right, result)` with results written as
    /// linear combinations of labels, e.g. `("e1", "o1", "1/2*o1")`.
    pub fn from_table(
        n: usize,
        m: usize,
        field: Field,
        labels: Option<Vec<String>>,
        rows: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let labels = labels.unwrap_or_else(|| default_labels(n, m));
        let index = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut prods = Vec::new();
        for (a, b, r) in rows {
            let coords = parse_combination(&field, &labels, r)?;
            let terms = coords
                .into_iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(k, s)| (s, k))
                .collect();
            prods.push((index(a)?, index(b)?, terms));
        }
        Self::from_products(n, m, field, Some(labels), &prods, true)
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn dim_even(&self) -> usize {
        self.n
    }

    pub fn dim_odd(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= self.n)
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.constants
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let d = self.dim();
        &self.constants[(i * d + j) * d + k]
    }

    /// Nonzero terms of `b_i · b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim() + j]
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        Self::build(self.n, self.m, self.field.clone(), Some(labels), self.constants.clone())
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.id,
            coords: vec![self.field.zero(); self.dim()],
        }
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut e = self.zero();
        e.coords[i] = self.field.one();
        e
    }

    pub fn element(&self, coords: Vector) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidAlgebra(format!(
                "element needs {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.field() != self.field) {
            return Err(Error::FieldMismatch(c.field().to_string(), self.field.to_string()));
        }
        Ok(Element {
            algebra: self.id,
            coords,
        })
    }

    /// Parses a combination like `e1 + 1/2*o2 - e3`.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let coords = parse_combination(&self.field, &self.labels, text)?;
        self.element(coords)
    }

    pub fn owns(&self, x: &Element) -> bool {
        x.algebra == self.id
    }

    fn check_parent(&self, x: &Element) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// Unchecked bilinear product on coordinate vectors.
    pub fn mul_coords(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let d = self.dim();
        let mut out = vec![self.field.zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.products[i * d + j] {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(Element {
            algebra: self.id,
            coords: self.mul_coords(&a.coords, &b.coords),
        })
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(Element {
            algebra: self.id,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(Element {
            algebra: self.id,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn scale(&self, s: &Scalar, a: &Element) -> Result<Element> {
        self.check_parent(a)?;
        Ok(Element {
            algebra: self.id,
            coords: a.coords.iter().map(|x| s * x).collect(),
        })
    }

    /// `Some(parity)` when the element is homogeneous and nonzero; zero
    /// counts as even.
    pub fn element_parity(&self, x: &Element) -> Option<u8> {
        let even = x.coords[..self.n].iter().any(|c| !c.is_zero());
        let odd = x.coords[self.n..].iter().any(|c| !c.is_zero());
        match (even, odd) {
            (true, true) => None,
            (false, true) => Some(1),
            _ => Some(0),
        }
    }

    fn violation(&self, indices: Vec<usize>, coords: Vector) -> Violation {
        Violation {
            indices,
            defect: Element {
                algebra: self.id,
                coords,
            },
        }
    }

    fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// `v · b_j` where `v` is given in coordinates.
    fn mul_right_basis(&self, v: &[Scalar], j: usize) -> Vector {
        let d = self.dim();
        let mut out = vec![self.field.zero(); d];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in &self.products[i * d + j] {
                out[*k] += &(x * c);
            }
        }
        out
    }

    pub fn check_supercommutativity(&self) -> IdentityReport {
        let d = self.dim();
        let mut report = IdentityReport::ok();
        for i in 0..d {
            for j in i..d {
                let odd = self.parity(i) == 1 && self.parity(j) == 1;
                let defect: Vector = (0..d)
                    .map(|k| {
                        let a = self.constant(i, j, k);
                        let b = self.constant(j, i, k);
                        if odd {
                            a + b
                        } else {
                            a - b
                        }
                    })
                    .collect();
                if defect.iter().any(|x| !x.is_zero()) {
                    report.push(self.violation(vec![i, j], defect));
                }
            }
        }
        report
    }

    pub fn check_super_jordan(&self) -> IdentityReport {
        self.check_super_jordan_with(SignConvention::Corrected)
    }

    /// Evaluates the super Jordan identity on every ordered basis quadruple.
    pub fn check_super_jordan_with(&self, convention: SignConvention) -> IdentityReport {
        let d = self.dim();
        let mut report = IdentityReport::ok();
        if !self.check_supercommutativity().holds {
            report
                .warnings
                .push("input is not supercommutative; super Jordan check run anyway".into());
        }
        let pairs: Vec<Vector> = (0..d * d)
            .map(|ij| self.mul_coords(&self.basis_vector(ij / d), &self.basis_vector(ij % d)))
            .collect();
        let xy = |a: usize, b: usize| &pairs[a * d + b];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let neg = identity_signs(
                            convention,
                            [self.parity(a), self.parity(b), self.parity(c), self.parity(e)],
                        );
                        let terms: [(bool, Vector); 6] = [
                            (neg[0], self.mul_coords(xy(a, b), xy(c, e))),
                            (neg[1], self.mul_coords(xy(a, c), xy(b, e))),
                            (neg[2], self.mul_coords(xy(a, e), xy(b, c))),
                            (neg[3], self.mul_right_basis(&self.mul_right_basis(xy(a, b), c), e)),
                            (neg[4], self.mul_right_basis(&self.mul_right_basis(xy(a, e), c), b)),
                            (neg[5], self.mul_right_basis(&self.mul_right_basis(xy(b, e), c), a)),
                        ];
                        let mut defect = vec![self.field.zero(); d];
                        for (neg, v) in &terms {
                            for (acc, x) in defect.iter_mut().zip(v) {
                                if *neg {
                                    *acc -= x;
                                } else {
                                    *acc += x;
                                }
                            }
                        }
                        if defect.iter().any(|x| !x.is_zero()) {
                            report.push(self.violation(vec![a, b, c, e], defect));
                        }
                    }
                }
            }
        }
        report
    }

    /// Ungraded check: commutativity, then the four-variable linearization
    /// of the Jordan identity on all basis quadruples.
    pub fn check_jordan_ungraded(&self) -> IdentityReport {
        let d = self.dim();
        let mut report = IdentityReport::ok();
        if let Some(w) = self.field.warning() {
            report.warnings.push(w.to_string());
        }
        for i in 0..d {
            for j in i + 1..d {
                let defect: Vector = (0..d)
                    .map(|k| self.constant(i, j, k) - self.constant(j, i, k))
                    .collect();
                if defect.iter().any(|x| !x.is_zero()) {
                    report.push(self.violation(vec![i, j], defect));
                }
            }
        }
        if !report.holds {
            report
                .warnings
                .push("not commutative as an ungraded algebra".into());
            return report;
        }
        let pairs: Vec<Vector> = (0..d * d)
            .map(|ij| self.mul_coords(&self.basis_vector(ij / d), &self.basis_vector(ij % d)))
            .collect();
        let xy = |a: usize, b: usize| &pairs[a * d + b];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let lhs = [
                            self.mul_coords(xy(a, b), xy(c, e)),
                            self.mul_coords(xy(a, c), xy(b, e)),
                            self.mul_coords(xy(a, e), xy(b, c)),
                        ];
                        let rhs = [
                            self.mul_right_basis(&self.mul_right_basis(xy(a, b), c), e),
                            self.mul_right_basis(&self.mul_right_basis(xy(a, e), c), b),
                            self.mul_right_basis(&self.mul_right_basis(xy(b, e), c), a),
                        ];
                        let mut defect = vec![self.field.zero(); d];
                        for v in &lhs {
                            for (acc, x) in defect.iter_mut().zip(v) {
                                *acc += x;
                            }
                        }
                        for v in &rhs {
                            for (acc, x) in defect.iter_mut().zip(v) {
                                *acc -= x;
                            }
                        }
                        if defect.iter().any(|x| !x.is_zero()) {
                            report.push(self.violation(vec![a, b, c, e], defect));
                        }
                    }
                }
            }
        }
        report
    }

    /// `(a²·b)·a − a²·(b·a)`, the defect of the Jordan identity itself.
    pub fn jordan_defect(&self, a: &Element, b: &Element) -> Result<Element> {
        let a2 = self.multiply(a, a)?;
        let left = self.multiply(&self.multiply(&a2, b)?, a)?;
        let right = self.multiply(&a2, &self.multiply(b, a)?)?;
        self.sub(&left, &right)
    }

    /// The Jordan identity on every pair of elements of a finite field
    /// algebra. Refuses when `q^(2·dim)` exceeds [`EXHAUSTIVE_LIMIT`].
    pub fn check_jordan_exhaustive(&self) -> Result<IdentityReport> {
        let gf = Gf::new(&self.field)?;
        let d = self.dim();
        let q = gf.order() as u64;
        let total = (q as f64).powi(2 * d as i32);
        if total > EXHAUSTIVE_LIMIT as f64 {
            return Err(Error::TooLarge(format!(
                "{q}^{} element pairs exceed the limit of {EXHAUSTIVE_LIMIT}",
                2 * d
            )));
        }
        let table: Vec<Vec<(usize, u16)>> = self
            .products
            .iter()
            .map(|t| t.iter().map(|(k, c)| (*k, gf.index(c))).collect())
            .collect();
        let mul = |x: &[u16], y: &[u16]| -> Vec<u16> {
            let mut out = vec![0u16; d];
            for (i, &a) in x.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in y.iter().enumerate() {
                    if b == 0 {
                        continue;
                    }
                    let ab = gf.mul(a, b);
                    for &(k, c) in &table[i * d + j] {
                        out[k] = gf.add(out[k], gf.mul(ab, c));
                    }
                }
            }
            out
        };
        let count = q.pow(d as u32);
        let decode = |mut idx: u64| -> Vec<u16> {
            (0..d)
                .map(|_| {
                    let v = (idx % q) as u16;
                    idx /= q;
                    v
                })
                .collect()
        };
        let mut report = IdentityReport::ok();
        if let Some(w) = self.field.warning() {
            report.warnings.push(w.to_string());
        }
        for xi in 0..count {
            let x = decode(xi);
            let x2 = mul(&x, &x);
            for yi in 0..count {
                let y = decode(yi);
                let l = mul(&mul(&x2, &y), &x);
                let r = mul(&x2, &mul(&y, &x));
                if l != r {
                    let defect = l.iter().zip(&r).map(|(a, b)| gf.scalar(gf.sub(*a, *b))).collect();
                    let mut v = self.violation(vec![xi as usize, yi as usize], defect);
                    v.indices.shrink_to_fit();
                    report.push(v);
                    if report.violations.len() >= 16 {
                        report.warnings.push("stopped after 16 failing pairs".into());
                        return Ok(report);
                    }
                }
            }
        }
        Ok(report)
    }

    fn span_dim(&self, vectors: Vec<Vector>) -> usize {
        linalg::rank(&vectors)
    }

    /// dim span(J₁·J₁).
    pub fn odd_square_dimension(&self) -> usize {
        let d = self.dim();
        let v = (self.n..d)
            .flat_map(|i| (self.n..d).map(move |j| (i, j)))
            .map(|(i, j)| self.mul_coords(&self.basis_vector(i), &self.basis_vector(j)))
            .collect();
        self.span_dim(v)
    }

    /// dim span(J·J).
    pub fn square_dimension(&self) -> usize {
        linalg::rank(&self.square_span())
    }

    pub fn square_span(&self) -> Vec<Vector> {
        let d = self.dim();
        (0..d * d)
            .map(|ij| self.mul_coords(&self.basis_vector(ij / d), &self.basis_vector(ij % d)))
            .collect()
    }

    /// dim {x : x·J = 0}.
    pub fn annihilator_dimension(&self) -> usize {
        let d = self.dim();
        // rows: for each (j, k) the linear form x ↦ (x·b_j)_k
        let mut rows: Matrix = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                rows.push((0..d).map(|i| self.constant(i, j, k).clone()).collect());
            }
        }
        d - linalg::rank(&rows)
    }

    pub fn is_associative(&self) -> bool {
        self.associator_report().holds
    }

    /// Associator `(xy)z − x(yz)` on all basis triples.
    pub fn associator_report(&self) -> IdentityReport {
        let d = self.dim();
        let mut report = IdentityReport::ok();
        for a in 0..d {
            let va = self.basis_vector(a);
            for b in 0..d {
                let ab = self.mul_coords(&va, &self.basis_vector(b));
                for c in 0..d {
                    let l = self.mul_right_basis(&ab, c);
                    let bc = self.mul_coords(&self.basis_vector(b), &self.basis_vector(c));
                    let r = self.mul_coords(&va, &bc);
                    let defect: Vector = l.iter().zip(&r).map(|(x, y)| x - y).collect();
                    if defect.iter().any(|x| !x.is_zero()) {
                        report.push(self.violation(vec![a, b, c], defect));
                    }
                }
            }
        }
        report
    }

    /// The two-sided unit, if one exists.
    pub fn find_unit(&self) -> Option<Element> {
        let d = self.dim();
        if d == 0 {
            return None;
        }
        // u·b_j = b_j and b_j·u = b_j, unknowns u_i
        let mut a: Matrix = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..d {
            for k in 0..d {
                a.push((0..d).map(|i| self.constant(i, j, k).clone()).collect());
                rhs.push(if j == k { self.field.one() } else { self.field.zero() });
                a.push((0..d).map(|i| self.constant(j, i, k).clone()).collect());
                rhs.push(if j == k { self.field.one() } else { self.field.zero() });
            }
        }
        let u = linalg::solve(&self.field, &a, &rhs)?;
        Some(Element {
            algebra: self.id,
            coords: u,
        })
    }

    pub fn is_unital(&self) -> bool {
        self.find_unit().is_some()
    }

    /// Even part as an algebra in its own right.
    pub fn even_part(&self) -> Option<SuperAlgebra> {
        if self.n == 0 {
            return None;
        }
        let n = self.n;
        let d = self.dim();
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c.push(self.constants[(i * d + j) * d + k].clone());
                }
            }
        }
        Some(
            SuperAlgebra::new(n, 0, self.field.clone(), Some(self.labels[..n].to_vec()), c)
                .expect("even part closes"),
        )
    }

    /// Same constants with every basis vector declared even.
    pub fn forget_grading(&self) -> SuperAlgebra {
        SuperAlgebra::build(
            self.dim(),
            0,
            self.field.clone(),
            Some(self.labels.clone()),
            self.constants.clone(),
        )
        .expect("trivial grading always closes")
    }

    /// Reorders the basis: new basis vector `t` is old `perm[t]`; the first
    /// `n_even` new vectors are declared even.
    pub fn permuted(&self, perm: &[usize], n_even: usize) -> Result<SuperAlgebra> {
        let d = self.dim();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidMap("not a permutation of the basis".into()));
        }
        if n_even > d {
            return Err(Error::InvalidMap("too many even vectors".into()));
        }
        let mut inv = vec![0; d];
        for (t, &p) in perm.iter().enumerate() {
            inv[p] = t;
        }
        let mut c = vec![self.field.zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                for (k, s) in self.basis_product(perm[i], perm[j]) {
                    c[(i * d + j) * d + inv[*k]] = s.clone();
                }
            }
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        SuperAlgebra::new(n_even, d - n_even, self.field.clone(), Some(labels), c)
    }

    /// Rewrites the constants in a new basis (rows of `basis` in old
    /// coordinates, evens first); the basis must be invertible.
    pub fn change_basis(
        &self,
        basis: &Matrix,
        n_even: usize,
        labels: Option<Vec<String>>,
    ) -> Result<SuperAlgebra> {
        let d = self.dim();
        let f = &self.field;
        if basis.len() != d || basis.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidMap("basis matrix has wrong shape".into()));
        }
        let inv = linalg::inverse(f, basis)
            .ok_or_else(|| Error::InvalidMap("basis vectors are dependent".into()))?;
        let mut c = vec![f.zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul_coords(&basis[i], &basis[j]);
                // new coords y with y·basis = prod, i.e. y = prod·inv
                for k in 0..d {
                    let mut acc = f.zero();
                    for (t, x) in prod.iter().enumerate() {
                        if !x.is_zero() {
                            acc += &(x * &inv[t][k]);
                        }
                    }
                    c[(i * d + j) * d + k] = acc;
                }
            }
        }
        SuperAlgebra::new(n_even, d - n_even, f.clone(), labels, c)
    }

    pub fn reduce(&self, field: &Field) -> Result<SuperAlgebra> {
        let c = self
            .constants
            .iter()
            .map(|s| s.reduce(field))
            .collect::<Result<Vec<_>>>()?;
        SuperAlgebra::build(self.n, self.m, field.clone(), Some(self.labels.clone()), c)
    }

    pub fn direct_sum(&self, other: &SuperAlgebra) -> Result<SuperAlgebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if other.dim() == 0 {
            return Ok(self.clone());
        }
        if self.dim() == 0 {
            return Ok(other.clone());
        }
        let (n, m) = (self.n + other.n, self.m + other.m);
        let d = n + m;
        // position of each summand's basis vector in the sum
        let place = |alg: &SuperAlgebra, first: bool, i: usize| -> usize {
            let (en, on) = if first { (0, 0) } else { (self.n, self.m) };
            if i < alg.n {
                en + i
            } else {
                n + on + (i - alg.n)
            }
        };
        let mut c = vec![self.field.zero(); d * d * d];
        for (alg, first) in [(self, true), (other, false)] {
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    for (k, s) in alg.basis_product(i, j) {
                        let (pi, pj, pk) = (place(alg, first, i), place(alg, first, j), place(alg, first, *k));
                        c[(pi * d + pj) * d + pk] = s.clone();
                    }
                }
            }
        }
        let defaults = |a: &SuperAlgebra| a.labels == default_labels(a.n, a.m);
        let labels = if defaults(self) && defaults(other) {
            None
        } else {
            let mut l = vec![String::new(); d];
            for (alg, first) in [(self, true), (other, false)] {
                for i in 0..alg.dim() {
                    l[place(alg, first, i)] = alg.labels[i].clone();
                }
            }
            for i in 0..d {
                while l[..i].contains(&l[i]) {
                    l[i].push('\'');
                }
            }
            Some(l)
        };
        SuperAlgebra::new(n, m, self.field.clone(), labels, c)
    }

    /// Grading induced by an involutive automorphism: even part the fixed
    /// vectors, odd part the negated ones. The input grading is ignored.
    pub fn split_by_involution(&self, phi: &Matrix) -> Result<SuperAlgebra> {
        let d = self.dim();
        let f = &self.field;
        if phi.len() != d || phi.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidMap("involution has wrong shape".into()));
        }
        // phi acts on column coordinate vectors
        let image = |v: &[Scalar]| linalg::mat_vec(f, phi, v);
        if linalg::mat_mul(f, phi, phi) != linalg::identity(f, d) {
            return Err(Error::InvalidMap("map is not an involution".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = image(&self.mul_coords(&self.basis_vector(i), &self.basis_vector(j)));
                let rhs = self.mul_coords(&image(&self.basis_vector(i)), &image(&self.basis_vector(j)));
                if lhs != rhs {
                    return Err(Error::InvalidMap(format!(
                        "map is not an automorphism at ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        let shifted = |s: i64| -> Matrix {
            let mut m = phi.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] -= &f.from_int(s);
            }
            m
        };
        let plus = linalg::nullspace(f, &shifted(1), d);
        let minus = linalg::nullspace(f, &shifted(-1), d);
        let n_even = plus.len();
        let basis: Matrix = plus.into_iter().chain(minus).collect();
        let standard = basis == linalg::identity(f, d);
        let labels = standard.then(|| self.labels.clone());
        let labels = match labels {
            Some(l) if l == default_labels(d, 0) => None,
            other => other,
        };
        self.change_basis(&basis, n_even, labels)
    }

    /// The unital superform algebra k·1 ⊕ V for a supersymmetric form on
    /// V = V₀ ⊕ V₁. Basis: the unit `e1`, then V₀ as `e2..`, then V₁.
    pub fn build_superform(
        field: &Field,
        dim_even: usize,
        dim_odd: usize,
        form: &Matrix,
    ) -> Result<SuperAlgebra> {
        let v = dim_even + dim_odd;
        if dim_odd % 2 == 1 {
            return Err(Error::Parity("odd part of a superform must have even dimension".into()));
        }
        if form.len() != v || form.iter().any(|r| r.len() != v) {
            return Err(Error::InvalidAlgebra("form has wrong shape".into()));
        }
        for i in 0..v {
            for j in 0..v {
                let (pi, pj) = (i >= dim_even, j >= dim_even);
                let ok = match (pi, pj) {
                    (false, false) => form[i][j] == form[j][i],
                    (true, true) => form[i][j] == -&form[j][i],
                    _ => form[i][j].is_zero(),
                };
                if !ok {
                    return Err(Error::InvalidAlgebra(format!(
                        "form is not supersymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let n = dim_even + 1;
        let d = n + dim_odd;
        let mut c = vec![field.zero(); d * d * d];
        for i in 0..d {
            c[i * d + i] = field.one();
            c[(i * d) * d + i] = field.one();
        }
        for i in 1..d {
            for j in 1..d {
                c[(i * d + j) * d] = form[i - 1][j - 1].reduce(field)?;
            }
        }
        SuperAlgebra::new(n, dim_odd, field.clone(), None, c)
    }

    pub fn format_coords(&self, coords: &[Scalar]) -> String {
        format_combination(&self.labels, coords)
    }

    pub fn format_element(&self, x: &Element) -> String {
        self.format_coords(&x.coords)
    }

    pub fn format_indices(&self, idx: &[usize]) -> String {
        let parts: Vec<&str> = idx.iter().map(|&i| self.labels[i].as_str()).collect();
        format!("({})", parts.join(", "))
    }

    /// Nonzero basis products as lines `a·b = result`.
    pub fn product_lines(&self) -> Vec<String> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let t = &self.products[i * d + j];
                if !t.is_empty() {
                    let mut v = vec![self.field.zero(); d];
                    for (k, s) in t {
                        v[*k] = s.clone();
                    }
                    out.push(format!("{}·{} = {}", self.labels[i], self.labels[j], self.format_coords(&v)));
                }
            }
        }
        out
    }

    /// Aligned multiplication table: row `i`, column `j` holds `b_i·b_j`.
    pub fn render_table(&self) -> String {
        let d = self.dim();
        let mut cells = vec![vec![String::new(); d + 1]; d + 1];
        cells[0][0] = "·".into();
        for i in 0..d {
            cells[0][i + 1] = self.labels[i].clone();
            cells[i + 1][0] = self.labels[i].clone();
            for j in 0..d {
                let v = self.mul_coords(&self.basis_vector(i), &self.basis_vector(j));
                cells[i + 1][j + 1] = self.format_coords(&v);
            }
        }
        let widths: Vec<usize> = (0..=d)
            .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut s = String::new();
        for (r, row) in cells.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(s, "{}", line.join(" | ").trim_end());
            if r == 0 {
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                let _ = writeln!(s, "{}", rule.join("-+-"));
            }
        }
        s
    }

    /// Left and right multiplication matrices `R_x` acting on columns:
    /// column `j` of `R_x` is `b_j · x`.
    pub fn right_multiplication(&self, x: &[Scalar]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vector> = (0..d).map(|j| self.mul_coords(&self.basis_vector(j), x)).collect();
        linalg::transpose(&self.field, &cols)
    }

    pub fn half(&self) -> Scalar {
        half(&self.field)
    }

    /// Cache of label positions, for callers that resolve many labels.
    pub fn label_map(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains('+') || s[1..].contains('-')
}

/// Renders `Σ c_i label_i` with unit coefficients elided.
pub fn format_combination(labels: &[String], coords: &[Scalar]) -> String {
    let mut out = String::new();
    for (i, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg_rational = c.as_rational().is_some_and(|r| r < &num_rational::BigRational::from_integer(0.into()));
        let (neg, mag) = if neg_rational { (true, -c) } else { (false, c.clone()) };
        let text = mag.to_string();
        let coeff = if mag.is_one() {
            String::new()
        } else if needs_parens(&text) {
            format!("({text})*")
        } else {
            format!("{text}*")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&coeff);
        out.push_str(&labels[i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses `Σ c·label` where coefficients use the scalar textual forms and
/// may be parenthesized; `*` between coefficient and label is optional.
pub fn parse_combination(field: &Field, labels: &[String], text: &str) -> Result<Vector> {
    let fail = |reason: &str| Error::ScalarParse {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coords = vec![field.zero(); labels.len()];
    if s == "0" {
        return Ok(coords);
    }
    if s.is_empty() {
        return Err(fail("empty combination"));
    }
    // split at top-level signs
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let prev_is_sep = cur.is_empty() || cur.ends_with('*') || cur.ends_with('/');
        if (ch == '+' || ch == '-') && depth == 0 && !prev_is_sep {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
            continue;
        }
        if (ch == '+' || ch == '-') && depth == 0 && cur.is_empty() && i == 0 {
            neg = ch == '-';
            continue;
        }
        cur.push(ch);
    }
    terms.push((neg, cur));
    let mut sorted: Vec<(usize, &String)> = labels.iter().enumerate().collect();
    sorted.sort_by_key(|(_, l)| std::cmp::Reverse(l.len()));
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(fail("dangling sign"));
        }
        let (idx, label) = sorted
            .iter()
            .find(|(_, l)| term.ends_with(l.as_str()))
            .ok_or_else(|| Error::UnknownLabel(term.clone()))?;
        let head = &term[..term.len() - label.len()];
        let head = head.strip_suffix('*').unwrap_or(head);
        let head = head
            .strip_prefix('(')
            .and_then(|h| h.strip_suffix(')'))
            .unwrap_or(head);
        let c = if head.is_empty() {
            field.one()
        } else if head == "-" {
            -field.one()
        } else {
            field.parse(head)?
        };
        let c = if neg { -c } else { c };
        coords[*idx] += &c;
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn k3() -> SuperAlgebra {
        SuperAlgebra::from_table(
            1,
            2,
            q(),
            Some(vec!["e".into(), "x".into(), "y".into()]),
            &[
                ("e", "e", "e"),
                ("e", "x", "1/2*x"),
                ("e", "y", "1/2*y"),
                ("x", "y", "e"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn k3_products_and_identities() {
        let a = k3();
        let x = a.parse_element("x").unwrap();
        let y = a.parse_element("y").unwrap();
        assert_eq!(a.multiply(&x, &y).unwrap(), a.parse_element("e").unwrap());
        assert_eq!(a.multiply(&y, &x).unwrap(), a.parse_element("-e").unwrap());
        assert!(a.check_supercommutativity().holds);
        assert!(a.check_super_jordan().holds);
        assert!(!a.check_super_jordan_with(SignConvention::AsPrinted).holds);
        assert!(!a.check_jordan_ungraded().holds);
    }

    #[test]
    fn kaplansky_defect_is_a() {
        let a = k3();
        let u = a.parse_element("e+x").unwrap();
        let y = a.parse_element("y").unwrap();
        assert_eq!(a.jordan_defect(&u, &y).unwrap(), u);
    }

    #[test]
    fn zero_times_anything() {
        let a = k3();
        let z = a.zero();
        let x = a.parse_element("x + 2*e").unwrap();
        assert_eq!(a.multiply(&z, &x).unwrap(), z);
    }

    #[test]
    fn parent_mismatch_rejected() {
        let a = k3();
        let b = k3();
        assert!(matches!(
            a.multiply(&a.basis(0), &b.basis(0)),
            Err(Error::ParentMismatch)
        ));
    }

    #[test]
    fn grading_closure_enforced() {
        let r = SuperAlgebra::from_table(1, 1, q(), None, &[("e1", "o1", "e1")]);
        assert!(matches!(r, Err(Error::InvalidAlgebra(_))));
        assert!(SuperAlgebra::new(0, 0, q(), None, vec![]).is_err());
    }

    #[test]
    fn odd_square_violates_supercommutativity() {
        let a = SuperAlgebra::from_table(1, 1, q(), None, &[("o1", "o1", "e1")]).unwrap();
        let r = a.check_supercommutativity();
        assert!(!r.holds);
        assert_eq!(r.violations[0].indices, vec![1, 1]);
    }

    #[test]
    fn quarter_action_fails() {
        let a = SuperAlgebra::from_table(
            1,
            1,
            q(),
            None,
            &[("e1", "e1", "e1"), ("e1", "o1", "1/4*o1")],
        )
        .unwrap();
        assert!(!a.check_super_jordan().holds);
    }

    #[test]
    fn zero_product_holds() {
        let a = SuperAlgebra::from_table(2, 2, q(), None, &[]).unwrap();
        assert!(a.check_super_jordan().holds);
        assert!(a.check_jordan_ungraded().holds);
    }

    #[test]
    fn unit_and_associativity() {
        let a = k3();
        assert!(a.find_unit().is_none());
        let s8 = SuperAlgebra::build_superform(&q(), 0, 2, &vec![
            vec![q().zero(), q().one()],
            vec![-q().one(), q().zero()],
        ])
        .unwrap();
        assert_eq!(s8.find_unit().unwrap(), s8.basis(0));
        assert_eq!(s8.multiply(&s8.basis(1), &s8.basis(2)).unwrap(), s8.basis(0));
        assert!(s8.check_super_jordan().holds);
        assert!(!a.is_associative());
    }

    #[test]
    fn superform_rejects_bad_forms() {
        let one = q().one();
        let sym_odd = vec![vec![q().zero(), one.clone()], vec![one.clone(), q().zero()]];
        assert!(SuperAlgebra::build_superform(&q(), 0, 2, &sym_odd).is_err());
        assert!(SuperAlgebra::build_superform(&q(), 0, 1, &vec![vec![q().zero()]]).is_err());
        let rank1 = SuperAlgebra::build_superform(&q(), 1, 0, &vec![vec![one]]).unwrap();
        assert_eq!(rank1.dim(), 2);
        assert!(rank1.is_unital());
        let zero = SuperAlgebra::build_superform(&q(), 2, 0, &linalg::zeros(&q(), 2, 2)).unwrap();
        assert_eq!(zero.product_lines().len(), 5);
    }

    #[test]
    fn invariants_of_k3() {
        let a = k3();
        assert_eq!(a.odd_square_dimension(), 1);
        assert_eq!(a.square_dimension(), 3);
        assert_eq!(a.annihilator_dimension(), 0);
    }

    #[test]
    fn direct_sum_with_empty() {
        let a = k3();
        let e = SuperAlgebra::empty(q());
        assert_eq!(a.direct_sum(&e).unwrap(), a);
        let s = a.direct_sum(&a).unwrap();
        assert_eq!((s.dim_even(), s.dim_odd()), (2, 4));
        assert!(s.check_super_jordan().holds);
        assert_eq!(s.labels()[4], "x'");
    }

    #[test]
    fn grading_involution_reproduces() {
        let a = k3();
        let f = q();
        let mut phi = linalg::identity(&f, 3);
        phi[1][1] = -f.one();
        phi[2][2] = -f.one();
        let b = a.split_by_involution(&phi).unwrap();
        assert_eq!(b, a);
        let triv = a.forget_grading().split_by_involution(&linalg::identity(&f, 3));
        // the ungraded K3 is not commutative but the identity is still an automorphism
        assert_eq!(triv.unwrap().dim_odd(), 0);
    }

    #[test]
    fn non_automorphism_rejected() {
        let a = k3();
        let f = q();
        let mut phi = linalg::identity(&f, 3);
        phi[1][1] = -f.one();
        assert!(a.split_by_involution(&phi).is_err());
        let mut psi = linalg::identity(&f, 3);
        psi[0][0] = f.from_int(2);
        assert!(a.split_by_involution(&psi).is_err());
    }

    #[test]
    fn combination_round_trip() {
        let a = k3();
        for s in ["e - 1/2*x + 3*y", "-x", "0", "2*e"] {
            let x = a.parse_element(s).unwrap();
            assert_eq!(a.format_element(&x), s);
        }
        assert!(a.parse_element("z").is_err());
    }

    #[test]
    fn exhaustive_matches_linearization() {
        let f5 = Field::prime(5).unwrap();
        let a = SuperAlgebra::from_table(2, 0, q(), None, &[("e1", "e1", "e1"), ("e1", "e2", "1/2*e2")])
            .unwrap()
            .reduce(&f5)
            .unwrap();
        assert!(a.check_jordan_ungraded().holds);
        assert!(a.check_jordan_exhaustive().unwrap().holds);
        let big = SuperAlgebra::from_table(6, 0, f5, None, &[]).unwrap();
        assert!(matches!(big.check_jordan_exhaustive(), Err(Error::TooLarge(_))));
    }
}
