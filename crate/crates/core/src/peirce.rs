//! Idempotents and Peirce decompositions, single and refined.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algebra::{Element, IdentityReport, SuperAlgebra, Violation};
use crate::catalog::{Component, PeirceNote};
use crate::error::{Error, Result};
use crate::field::{Field, Gf, Scalar};
use crate::linalg::{self, Matrix, Vector};

/// Largest number of candidates [`find_idempotents`] will scan.
pub const IDEMPOTENT_SCAN_LIMIT: u64 = 5_000_000;

/// Peirce eigenvalues in component order.
pub const EIGENVALUES: [&str; 3] = ["0", "1/2", "1"];

#[derive(Clone, Debug)]
pub struct PeirceDecomposition {
    pub algebra: SuperAlgebra,
    pub idempotent: Element,
    /// Bases of P₀, P½, P₁, each homogeneous, even vectors first.
    pub components: [Vec<Element>; 3],
    /// The odd parts J₁ ∩ Pᵢ.
    pub graded_components: [Vec<Element>; 3],
}

#[derive(Clone, Debug)]
pub struct RefinedPeirce {
    pub algebra: SuperAlgebra,
    pub idempotents: Vec<Element>,
    pub components: BTreeMap<(usize, usize), Vec<Element>>,
}

pub fn verify_idempotent(a: &SuperAlgebra, e: &Element) -> bool {
    if !a.owns(e) || a.element_parity(e) != Some(0) || e.coords.iter().all(Scalar::is_zero) {
        return false;
    }
    a.mul_coords(&e.coords, &e.coords) == e.coords
}

/// All nonzero even idempotents over a finite field, sorted by coordinates.
pub fn find_idempotents(a: &SuperAlgebra) -> Result<Vec<Element>> {
    let field = a.field();
    if !field.is_finite() {
        return Err(Error::NeedsFiniteField(format!(
            "{field}: idempotent search over the rationals is unbounded"
        )));
    }
    let gf = Gf::new(field)?;
    let n = a.dim_even();
    let q = gf.order() as u64;
    let total = (q as f64).powi(n as i32);
    if total > IDEMPOTENT_SCAN_LIMIT as f64 {
        return Err(Error::TooLarge(format!("{q}^{n} even candidates")));
    }
    let d = a.dim();
    let table: Vec<Vec<(usize, u16)>> = (0..n * n)
        .map(|ij| {
            a.basis_product(ij / n, ij % n)
                .iter()
                .map(|(k, c)| (*k, gf.index(c)))
                .collect()
        })
        .collect();
    let mut found = Vec::new();
    let mut x = vec![0u16; n];
    for _ in 0..q.pow(n as u32) {
        if x.iter().any(|&v| v != 0) {
            let mut sq = vec![0u16; n];
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    if x[j] == 0 {
                        continue;
                    }
                    let s = gf.mul(x[i], x[j]);
                    for &(k, c) in &table[i * n + j] {
                        sq[k] = gf.add(sq[k], gf.mul(s, c));
                    }
                }
            }
            if sq == x {
                let mut coords: Vector = x.iter().map(|&v| gf.scalar(v)).collect();
                coords.resize(d, field.zero());
                found.push(a.element(coords)?);
            }
        }
        // odometer, last coordinate fastest
        for slot in x.iter_mut().rev() {
            *slot += 1;
            if (*slot as u64) < q {
                break;
            }
            *slot = 0;
        }
    }
    found.sort_by(|u, v| u.coords.cmp(&v.coords));
    Ok(found)
}

/// Even idempotents over the rationals with every coordinate in
/// {−1, −1/2, 0, 1/2, 1}. A bounded scan, not a complete list.
pub fn scan_rational_idempotents(a: &SuperAlgebra) -> Result<Vec<Element>> {
    let f = a.field().clone();
    if f != Field::Rational {
        return Err(Error::InvalidField("bounded scan is for rational algebras".into()));
    }
    let values: Vec<Scalar> = ["0", "1", "1/2", "-1/2", "-1"]
        .iter()
        .map(|s| f.parse(s).unwrap())
        .collect();
    let n = a.dim_even();
    let count = values.len().pow(n as u32);
    if count as u64 > IDEMPOTENT_SCAN_LIMIT {
        return Err(Error::TooLarge(format!("5^{n} candidates")));
    }
    let mut out = Vec::new();
    for mut idx in 0..count {
        let mut coords = vec![f.zero(); a.dim()];
        for c in coords.iter_mut().take(n) {
            *c = values[idx % values.len()].clone();
            idx /= values.len();
        }
        let e = a.element(coords)?;
        if verify_idempotent(a, &e) {
            out.push(e);
        }
    }
    out.sort_by(|u, v| u.coords.cmp(&v.coords));
    Ok(out)
}

fn block(m: &Matrix, range: std::ops::Range<usize>) -> Matrix {
    m[range.clone()]
        .iter()
        .map(|r| r[range.clone()].to_vec())
        .collect()
}

fn shifted(m: &Matrix, lambda: &Scalar) -> Matrix {
    let mut m = m.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    m
}

/// Checks `2R³ − 3R² + R = 0` for the right multiplication by `e`.
pub fn operator_identity_holds(a: &SuperAlgebra, e: &Element) -> bool {
    let f = a.field();
    let r = a.right_multiplication(&e.coords);
    let r2 = linalg::mat_mul(f, &r, &r);
    let r3 = linalg::mat_mul(f, &r2, &r);
    let (two, three) = (f.from_int(2), f.from_int(3));
    let d = a.dim();
    (0..d).all(|i| {
        (0..d).all(|j| (&(&two * &r3[i][j]) - &(&three * &r2[i][j]) + &r[i][j]).is_zero())
    })
}

pub fn peirce_decompose(a: &SuperAlgebra, e: &Element) -> Result<PeirceDecomposition> {
    if !verify_idempotent(a, e) {
        return Err(Error::NotIdempotent(a.format_element(e)));
    }
    if !operator_identity_holds(a, e) {
        return Err(Error::PeirceOperator(a.format_element(e)));
    }
    let f = a.field();
    let (n, d) = (a.dim_even(), a.dim());
    let right = a.right_multiplication(&e.coords);
    let left_cols: Vec<Vector> = (0..d)
        .map(|j| a.mul_coords(&e.coords, &a.basis(j).coords))
        .collect();
    let left = linalg::transpose(f, &left_cols);
    let lambdas = [f.zero(), a.half(), f.one()];
    let mut components: [Vec<Element>; 3] = Default::default();
    let mut graded: [Vec<Element>; 3] = Default::default();
    for (slot, lambda) in lambdas.iter().enumerate() {
        for (range, odd) in [(0..n, false), (n..d, true)] {
            if range.is_empty() {
                continue;
            }
            let mut rows = block(&shifted(&right, lambda), range.clone());
            rows.extend(block(&shifted(&left, lambda), range.clone()));
            for v in linalg::nullspace(f, &rows, range.len()) {
                let mut coords = vec![f.zero(); d];
                for (t, x) in v.into_iter().enumerate() {
                    coords[range.start + t] = x;
                }
                let el = a.element(coords)?;
                if odd {
                    graded[slot].push(el.clone());
                }
                components[slot].push(el);
            }
        }
    }
    let total: usize = components.iter().map(Vec::len).sum();
    if total != d {
        return Err(Error::Peirce(format!(
            "eigenspaces of {} span only {total} of {d} dimensions",
            a.format_element(e)
        )));
    }
    Ok(PeirceDecomposition {
        algebra: a.clone(),
        idempotent: e.clone(),
        components,
        graded_components: graded,
    })
}

fn coords_of(v: &[Element]) -> Vec<Vector> {
    v.iter().map(|x| x.coords.clone()).collect()
}

/// The six containments of the single Peirce decomposition.
pub fn check_peirce_multiplication(dec: &PeirceDecomposition) -> IdentityReport {
    let a = &dec.algebra;
    // targets[i][j] lists the components P_i·P_j must land in
    let targets: [[&[usize]; 3]; 3] = [
        [&[0], &[1], &[]],
        [&[1], &[0, 2], &[1]],
        [&[], &[1], &[2]],
    ];
    let mut report = IdentityReport::ok();
    for i in 0..3 {
        for j in 0..3 {
            let allowed: Vec<Vector> = targets[i][j]
                .iter()
                .flat_map(|&t| coords_of(&dec.components[t]))
                .collect();
            for (ui, u) in dec.components[i].iter().enumerate() {
                for (vi, v) in dec.components[j].iter().enumerate() {
                    let p = a.mul_coords(&u.coords, &v.coords);
                    let ok = p.iter().all(Scalar::is_zero) || linalg::in_span(&allowed, &p);
                    if !ok {
                        report.push(Violation {
                            indices: vec![i, ui, j, vi],
                            defect: a.element(p).expect("same algebra"),
                        });
                    }
                }
            }
        }
    }
    report
}

/// Splits a homogeneous basis into its even and odd members.
fn by_parity(a: &SuperAlgebra, v: &[Element]) -> (Vec<Vector>, Vec<Vector>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for x in v {
        if a.element_parity(x) == Some(1) {
            odd.push(x.coords.clone());
        } else {
            even.push(x.coords.clone());
        }
    }
    (even, odd)
}

fn intersect_all(f: &Field, spaces: &[Vec<Vector>], dim: usize) -> Vec<Vector> {
    let mut acc = spaces[0].clone();
    for s in &spaces[1..] {
        acc = linalg::intersect(f, &acc, s, dim);
    }
    acc
}

pub fn refined_peirce(a: &SuperAlgebra, es: &[Element]) -> Result<RefinedPeirce> {
    if es.is_empty() {
        return Err(Error::Peirce("need at least one idempotent".into()));
    }
    for (i, x) in es.iter().enumerate() {
        for y in &es[i + 1..] {
            let p = a.multiply(x, y)?;
            if p.coords.iter().any(|c| !c.is_zero()) {
                return Err(Error::Peirce(format!(
                    "{} and {} are not orthogonal",
                    a.format_element(x),
                    a.format_element(y)
                )));
            }
        }
    }
    let decs = es
        .iter()
        .map(|e| peirce_decompose(a, e))
        .collect::<Result<Vec<_>>>()?;
    let f = a.field();
    let (n, d) = (es.len(), a.dim());
    // component (i, j) as required eigen-slot per idempotent (1-based)
    let slot_for = |i: usize, j: usize, k: usize| -> usize {
        if i == 0 && j == 0 {
            0
        } else if i == j {
            if k == i {
                2
            } else {
                0
            }
        } else if k == i || k == j {
            1
        } else {
            0
        }
    };
    let mut components = BTreeMap::new();
    for i in 0..=n {
        for j in i..=n {
            let mut basis = Vec::new();
            for parity in [0, 1] {
                let spaces: Vec<Vec<Vector>> = (1..=n)
                    .map(|k| {
                        let (even, odd) = by_parity(a, &decs[k - 1].components[slot_for(i, j, k)]);
                        if parity == 0 {
                            even
                        } else {
                            odd
                        }
                    })
                    .collect();
                let meet = if spaces.iter().any(Vec::is_empty) {
                    Vec::new()
                } else {
                    intersect_all(f, &spaces, d)
                };
                for v in meet {
                    basis.push(a.element(v)?);
                }
            }
            components.insert((i, j), basis);
        }
    }
    let total: usize = components.values().map(Vec::len).sum();
    if total != d {
        return Err(Error::Peirce(format!(
            "refined components span {total} of {d} dimensions"
        )));
    }
    let mut sum = a.zero();
    for e in es {
        sum = a.add(&sum, e)?;
    }
    if a.find_unit().is_some_and(|u| u == sum) {
        for i in 0..=n {
            if !components[&(0, i)].is_empty() {
                return Err(Error::Peirce(format!(
                    "P0{i} is nonzero although the idempotents sum to the unit"
                )));
            }
        }
    }
    Ok(RefinedPeirce {
        algebra: a.clone(),
        idempotents: es.to_vec(),
        components,
    })
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Components that `P_p · P_q` may land in; empty means it must vanish.
fn refined_targets(p: (usize, usize), q: (usize, usize)) -> Vec<(usize, usize)> {
    let (i, j) = p;
    let (k, l) = q;
    let shared: Vec<usize> = [i, j]
        .into_iter()
        .filter(|x| *x == k || *x == l)
        .collect();
    if shared.is_empty() {
        return Vec::new();
    }
    match (i == j, k == l) {
        (true, true) => vec![p],
        (true, false) => vec![q],
        (false, true) => vec![p],
        (false, false) if p == q => vec![(i, i), (j, j)],
        (false, false) => {
            let s = shared[0];
            let a = if i == s { j } else { i };
            let b = if k == s { l } else { k };
            vec![key(a, b)]
        }
    }
}

pub fn check_refined_multiplication(r: &RefinedPeirce) -> IdentityReport {
    let a = &r.algebra;
    let mut report = IdentityReport::ok();
    for (&p, up) in &r.components {
        for (&q, uq) in &r.components {
            let allowed: Vec<Vector> = refined_targets(p, q)
                .iter()
                .flat_map(|t| coords_of(&r.components[t]))
                .collect();
            for (xi, x) in up.iter().enumerate() {
                for (yi, y) in uq.iter().enumerate() {
                    let prod = a.mul_coords(&x.coords, &y.coords);
                    let ok = prod.iter().all(Scalar::is_zero) || linalg::in_span(&allowed, &prod);
                    if !ok {
                        report.push(Violation {
                            indices: vec![p.0, p.1, xi, q.0, q.1, yi],
                            defect: a.element(prod).expect("same algebra"),
                        });
                    }
                }
            }
        }
    }
    report
}

impl PeirceDecomposition {
    pub fn dims(&self) -> [usize; 3] {
        [
            self.components[0].len(),
            self.components[1].len(),
            self.components[2].len(),
        ]
    }

    /// Which component each basis vector lies in, if it lies in one.
    pub fn component_of(&self, x: &Element) -> Option<usize> {
        (0..3).find(|&c| linalg::in_span(&coords_of(&self.components[c]), &x.coords))
    }

    pub fn render(&self) -> String {
        let a = &self.algebra;
        let mut s = format!("idempotent {}\n", a.format_element(&self.idempotent));
        for (c, name) in EIGENVALUES.iter().enumerate() {
            let b: Vec<String> = self.components[c].iter().map(|x| a.format_element(x)).collect();
            let _ = writeln!(s, "  P{name}: [{}]", b.join(", "));
        }
        s
    }
}

impl RefinedPeirce {
    pub fn component_of(&self, x: &Element) -> Option<(usize, usize)> {
        self.components
            .iter()
            .find(|(_, b)| !b.is_empty() && linalg::in_span(&coords_of(b), &x.coords))
            .map(|(k, _)| *k)
    }

    pub fn render(&self) -> String {
        let a = &self.algebra;
        let es: Vec<String> = self.idempotents.iter().map(|x| a.format_element(x)).collect();
        let mut s = format!("idempotents [{}]\n", es.join(", "));
        for ((i, j), b) in &self.components {
            let b: Vec<String> = b.iter().map(|x| a.format_element(x)).collect();
            let _ = writeln!(s, "  P{i}{j}: [{}]", b.join(", "));
        }
        s
    }
}

/// Whether the computed placement of the odd basis vectors agrees with a
/// catalog note.
pub fn note_holds(a: &SuperAlgebra, note: &PeirceNote) -> Result<bool> {
    let odd: Vec<Element> = (a.dim_even()..a.dim()).map(|i| a.basis(i)).collect();
    match note {
        PeirceNote::Single { idempotent, odd: want, ordered } => {
            let e = a.parse_element(idempotent)?;
            let d = peirce_decompose(a, &e)?;
            let mut got: Vec<Option<usize>> = odd.iter().map(|x| d.component_of(x)).collect();
            let mut want: Vec<Option<usize>> = want
                .iter()
                .map(|c| Some(match c {
                    Component::P0 => 0,
                    Component::PHalf => 1,
                    Component::P1 => 2,
                }))
                .collect();
            if !ordered {
                got.sort();
                want.sort();
            }
            Ok(got == want)
        }
        PeirceNote::Refined { idempotents, odd: want, ordered } => {
            let es = idempotents
                .iter()
                .map(|t| a.parse_element(t))
                .collect::<Result<Vec<_>>>()?;
            let r = refined_peirce(a, &es)?;
            let mut got: Vec<Option<(usize, usize)>> = odd.iter().map(|x| r.component_of(x)).collect();
            let mut want: Vec<Option<(usize, usize)>> = want.iter().copied().map(Some).collect();
            if !ordered {
                got.sort();
                want.sort();
            }
            Ok(got == want)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn gf5() -> Field {
        Field::prime(5).unwrap()
    }

    #[test]
    fn k3_idempotents_and_split() {
        let k3 = catalog::get("K3").unwrap().algebra;
        let k5 = k3.reduce(&gf5()).unwrap();
        let ids = find_idempotents(&k5).unwrap();
        assert_eq!(ids.len(), 1);
        assert_eq!(k5.format_element(&ids[0]), "e1");
        let e = k3.basis(0);
        assert!(verify_idempotent(&k3, &e));
        assert!(!verify_idempotent(&k3, &k3.basis(1)));
        let dec = peirce_decompose(&k3, &e).unwrap();
        assert_eq!(dec.dims(), [0, 2, 1]);
        assert_eq!(dec.graded_components[1].len(), 2);
        assert!(check_peirce_multiplication(&dec).holds);
    }

    #[test]
    fn rational_search_refused() {
        let k3 = catalog::get("K3").unwrap().algebra;
        assert!(matches!(find_idempotents(&k3), Err(Error::NeedsFiniteField(_))));
    }

    #[test]
    fn two_orthogonal_units() {
        let a = catalog::get("U1s+U1s").unwrap().algebra.reduce(&gf5()).unwrap();
        let ids: Vec<String> = find_idempotents(&a)
            .unwrap()
            .iter()
            .map(|x| a.format_element(x))
            .collect();
        assert_eq!(ids, vec!["e2", "e1", "e1 + e2"]);
    }

    #[test]
    fn zero_algebra_has_no_idempotents() {
        let a = catalog::get("U2s+U2s").unwrap().algebra.reduce(&gf5()).unwrap();
        assert!(find_idempotents(&a).unwrap().is_empty());
    }

    #[test]
    fn t5_unit_is_idempotent() {
        let a = catalog::get("T5s").unwrap().algebra;
        let e = a.parse_element("e1+e2").unwrap();
        assert!(verify_idempotent(&a, &e));
        assert_eq!(a.find_unit().unwrap(), e);
    }

    #[test]
    fn refined_cases() {
        let s13 = catalog::get("S3_13").unwrap().algebra;
        let r = refined_peirce(&s13, &[s13.basis(0), s13.basis(1)]).unwrap();
        assert_eq!(r.component_of(&s13.basis(2)), Some((1, 2)));
        assert!(check_refined_multiplication(&r).holds);

        let u = catalog::get("U1s+U1s+S1_1").unwrap().algebra;
        let r = refined_peirce(&u, &[u.basis(0), u.basis(1)]).unwrap();
        assert_eq!(r.component_of(&u.basis(2)), Some((0, 0)));

        let t10 = catalog::get("T10s").unwrap().algebra;
        let r = refined_peirce(&t10, &[t10.basis(0), t10.basis(1)]).unwrap();
        assert!(check_refined_multiplication(&r).holds);
        assert!(r.components[&(0, 0)].is_empty());
    }

    #[test]
    fn non_orthogonal_rejected() {
        let t = catalog::get("U1s+U1s").unwrap().algebra;
        let e = t.parse_element("e1+e2").unwrap();
        assert!(refined_peirce(&t, &[t.basis(0), e]).is_err());
    }

    #[test]
    fn single_refined_matches_single() {
        let a = catalog::get("S3_4").unwrap().algebra;
        let e = a.basis(0);
        let dec = peirce_decompose(&a, &e).unwrap();
        let r = refined_peirce(&a, &[e]).unwrap();
        assert_eq!(r.components[&(0, 0)], dec.components[0]);
        assert_eq!(r.components[&(0, 1)], dec.components[1]);
        assert_eq!(r.components[&(1, 1)], dec.components[2]);
    }

    #[test]
    fn graded_corruption_is_caught() {
        // S3_4 with o1·o2 = e1 puts a P1·P1/2 product in P1
        let a = SuperAlgebra::from_table(
            1,
            2,
            Field::Rational,
            None,
            &[("e1", "e1", "e1"), ("e1", "o1", "o1"), ("e1", "o2", "1/2*o2"), ("o1", "o2", "e1")],
        )
        .unwrap();
        let dec = peirce_decompose(&a, &a.basis(0)).unwrap();
        let rep = check_peirce_multiplication(&dec);
        assert!(!rep.holds);
    }

    #[test]
    fn targets_cover_relations() {
        assert_eq!(refined_targets((1, 1), (2, 2)), vec![]);
        assert_eq!(refined_targets((1, 2), (2, 3)), vec![(1, 3)]);
        assert_eq!(refined_targets((1, 2), (1, 2)), vec![(1, 1), (2, 2)]);
        assert_eq!(refined_targets((1, 2), (3, 4)), vec![]);
        assert_eq!(refined_targets((1, 1), (1, 2)), vec![(1, 2)]);
    }

    #[test]
    fn catalog_notes_reproduced() {
        for name in catalog::all_names() {
            let e = catalog::get(&name).unwrap();
            for note in &e.peirce {
                assert!(note_holds(&e.algebra, note).unwrap(), "{name}: {note:?}");
            }
        }
        let k3 = catalog::get("K3").unwrap();
        let wrong = PeirceNote::Single { idempotent: "e1".into(), odd: vec![Component::P1, Component::P1], ordered: true };
        assert!(!note_holds(&k3.algebra, &wrong).unwrap());
    }
}
