//! Graded maps, invariant fingerprints and exhaustive isomorphism search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{IdentityReport, SuperAlgebra, Violation};
use crate::error::{Error, Result};
use crate::field::{Field, Gf, Scalar};
use crate::linalg::{self, Matrix};
use crate::peirce;

/// A parity-preserving linear map. Row `i` of a block holds the image of
/// source basis vector `i` in the target's basis of the same parity.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: SuperAlgebra,
    pub target: SuperAlgebra,
    pub even_block: Matrix,
    pub odd_block: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapBlocks {
    pub even: Vec<Vec<String>>,
    pub odd: Vec<Vec<String>>,
}

impl GradedMap {
    pub fn new(
        source: &SuperAlgebra,
        target: &SuperAlgebra,
        even_block: Matrix,
        odd_block: Matrix,
    ) -> Result<Self> {
        let shape_ok = |m: &Matrix, rows: usize, cols: usize| {
            m.len() == rows && m.iter().all(|r| r.len() == cols)
        };
        if !shape_ok(&even_block, source.dim_even(), target.dim_even())
            || !shape_ok(&odd_block, source.dim_odd(), target.dim_odd())
        {
            return Err(Error::InvalidMap("block shapes do not match the algebras".into()));
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(
                source.field().to_string(),
                target.field().to_string(),
            ));
        }
        Ok(GradedMap {
            source: source.clone(),
            target: target.clone(),
            even_block,
            odd_block,
        })
    }

    /// Builds a map from the image of each source basis vector, written as
    /// combinations of target labels.
    pub fn from_images(source: &SuperAlgebra, target: &SuperAlgebra, images: &[&str]) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::InvalidMap(format!(
                "expected {} images, got {}",
                source.dim(),
                images.len()
            )));
        }
        let (n, tn) = (source.dim_even(), target.dim_even());
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (i, text) in images.iter().enumerate() {
            let v = target.parse_element(text)?;
            let want = source.parity(i);
            if v.coords.iter().any(|c| !c.is_zero()) && target.element_parity(&v) != Some(want) {
                return Err(Error::Parity(format!("image of {} has the wrong parity", source.label(i))));
            }
            if i < n {
                even.push(v.coords[..tn].to_vec());
            } else {
                odd.push(v.coords[tn..].to_vec());
            }
        }
        GradedMap::new(source, target, even, odd)
    }

    pub fn identity(a: &SuperAlgebra) -> Self {
        let f = a.field();
        GradedMap {
            source: a.clone(),
            target: a.clone(),
            even_block: linalg::identity(f, a.dim_even()),
            odd_block: linalg::identity(f, a.dim_odd()),
        }
    }

    /// Image of source basis vector `i` in full target coordinates.
    pub fn image(&self, i: usize) -> Vec<Scalar> {
        let f = self.target.field();
        let (n, tn) = (self.source.dim_even(), self.target.dim_even());
        let mut v = vec![f.zero(); self.target.dim()];
        if i < n {
            v[..tn].clone_from_slice(&self.even_block[i]);
        } else {
            v[tn..].clone_from_slice(&self.odd_block[i - n]);
        }
        v
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let f = self.target.field();
        let mut out = vec![f.zero(); self.target.dim()];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(self.image(i)) {
                *o += &(c * &y);
            }
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        let f = self.source.field();
        let square = |m: &Matrix| m.iter().all(|r| r.len() == m.len());
        square(&self.even_block)
            && square(&self.odd_block)
            && !linalg::determinant(f, &self.even_block).is_zero()
            && !linalg::determinant(f, &self.odd_block).is_zero()
    }

    pub fn blocks(&self) -> MapBlocks {
        let s = |m: &Matrix| m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        MapBlocks {
            even: s(&self.even_block),
            odd: s(&self.odd_block),
        }
    }

    pub fn from_blocks(source: &SuperAlgebra, target: &SuperAlgebra, b: &MapBlocks) -> Result<Self> {
        let f = source.field();
        let parse = |m: &Vec<Vec<String>>| -> Result<Matrix> {
            m.iter()
                .map(|r| r.iter().map(|x| f.parse(x)).collect())
                .collect()
        };
        GradedMap::new(source, target, parse(&b.even)?, parse(&b.odd)?)
    }

    /// Human-readable images, one per source basis vector.
    pub fn describe(&self) -> Vec<String> {
        (0..self.source.dim())
            .map(|i| {
                format!(
                    "{} ↦ {}",
                    self.source.label(i),
                    self.target.format_coords(&self.image(i))
                )
            })
            .collect()
    }
}

/// Checks `f(x·y) = f(x)·f(y)` on all basis pairs.
pub fn verify_homomorphism(f: &GradedMap) -> IdentityReport {
    let (a, b) = (&f.source, &f.target);
    let images: Vec<Vec<Scalar>> = (0..a.dim()).map(|i| f.image(i)).collect();
    let mut report = IdentityReport::ok();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = f.apply(&a.mul_coords(&a.basis(i).coords, &a.basis(j).coords));
            let rhs = b.mul_coords(&images[i], &images[j]);
            if lhs != rhs {
                let defect: Vec<Scalar> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
                report.push(Violation {
                    indices: vec![i, j],
                    defect: b.element(defect).expect("target coordinates"),
                });
            }
        }
    }
    report
}

pub fn is_isomorphism(f: &GradedMap) -> bool {
    f.is_invertible() && verify_homomorphism(f).holds
}

/// Transports `a` along an invertible graded change of basis: new basis
/// vector `t` is row `t` of the block matrix, in old coordinates.
pub fn apply_basis_change(a: &SuperAlgebra, even: &Matrix, odd: &Matrix) -> Result<SuperAlgebra> {
    let f = a.field();
    let (n, d) = (a.dim_even(), a.dim());
    if even.len() != n || odd.len() != a.dim_odd() {
        return Err(Error::InvalidMap("block shapes do not match".into()));
    }
    let mut rows = linalg::zeros(f, d, d);
    for (i, r) in even.iter().enumerate() {
        rows[i][..n].clone_from_slice(r);
    }
    for (i, r) in odd.iter().enumerate() {
        rows[n + i][n..].clone_from_slice(r);
    }
    a.change_basis(&rows, n, Some(a.labels().to_vec()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub type_pair: (usize, usize),
    pub associative: bool,
    pub unital: bool,
    pub square_dim: usize,
    pub annihilator_dim: usize,
    pub odd_square_dim: usize,
    pub nilpotent: bool,
    /// Over GF(5) for rational algebras, otherwise over the algebra's field.
    pub idempotents: Option<usize>,
    pub even: Option<Box<Fingerprint>>,
}

fn is_nilpotent(a: &SuperAlgebra) -> bool {
    let d = a.dim();
    let full: Vec<Vec<Scalar>> = (0..d).map(|i| a.basis(i).coords).collect();
    let mut power = full.clone();
    for _ in 0..=d {
        if power.is_empty() {
            return true;
        }
        let mut next = Vec::new();
        for x in &power {
            for y in &full {
                next.push(a.mul_coords(x, y));
                next.push(a.mul_coords(y, x));
            }
        }
        let next = linalg::span_basis(&next);
        if next.len() == power.len() {
            return false;
        }
        power = next;
    }
    power.is_empty()
}

pub fn fingerprint(a: &SuperAlgebra) -> Fingerprint {
    let idempotents = match a.field() {
        Field::Rational => Field::prime(5)
            .ok()
            .and_then(|g| a.reduce(&g).ok())
            .and_then(|r| peirce::find_idempotents(&r).ok())
            .map(|v| v.len()),
        _ => peirce::find_idempotents(a).ok().map(|v| v.len()),
    };
    let even = if a.dim_odd() > 0 {
        a.even_part().map(|e| Box::new(fingerprint(&e)))
    } else {
        None
    };
    Fingerprint {
        type_pair: (a.dim_even(), a.dim_odd()),
        associative: a.is_associative(),
        unital: a.is_unital(),
        square_dim: a.square_dimension(),
        annihilator_dim: a.annihilator_dimension(),
        odd_square_dim: a.odd_square_dimension(),
        nilpotent: is_nilpotent(a),
        idempotents,
        even,
    }
}

impl Fingerprint {
    /// Names of the fields that differ.
    pub fn diff(&self, other: &Fingerprint) -> Vec<String> {
        let mut out = Vec::new();
        macro_rules! cmp {
            ($($f:ident),*) => {$(
                if self.$f != other.$f {
                    out.push(format!("{}: {:?} vs {:?}", stringify!($f), self.$f, other.$f));
                }
            )*};
        }
        cmp!(type_pair, associative, unital, square_dim, annihilator_dim, odd_square_dim, nilpotent, idempotents);
        match (&self.even, &other.even) {
            (Some(x), Some(y)) => out.extend(x.diff(y).into_iter().map(|s| format!("even {s}"))),
            (None, None) => {}
            _ => out.push("even part presence differs".into()),
        }
        out
    }
}

struct Search<'a> {
    gf: Gf,
    d: usize,
    n: usize,
    /// sparse constants of the source
    ca: Vec<Vec<(usize, u16)>>,
    /// dense constants of the target
    cb: Vec<u16>,
    /// pairs to check once row `k` is placed
    checks: Vec<Vec<(usize, usize)>>,
    even_cands: &'a [Vec<u16>],
    odd_cands: &'a [Vec<u16>],
}

impl Search<'_> {
    fn product(&self, x: &[u16], y: &[u16]) -> Vec<u16> {
        let d = self.d;
        let mut out = vec![0u16; d];
        for s in 0..d {
            if x[s] == 0 {
                continue;
            }
            for t in 0..d {
                if y[t] == 0 {
                    continue;
                }
                let st = self.gf.mul(x[s], y[t]);
                let base = (s * d + t) * d;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.cb[base + k];
                    if c != 0 {
                        *o = self.gf.add(*o, self.gf.mul(st, c));
                    }
                }
            }
        }
        out
    }

    fn consistent(&self, rows: &[Vec<u16>], k: usize) -> bool {
        self.checks[k].iter().all(|&(i, j)| {
            let lhs = self.product(&rows[i], &rows[j]);
            let mut rhs = vec![0u16; self.d];
            for &(l, c) in &self.ca[i * self.d + j] {
                for (r, &x) in rhs.iter_mut().zip(&rows[l]) {
                    *r = self.gf.add(*r, self.gf.mul(c, x));
                }
            }
            lhs == rhs
        })
    }

    fn independent(&self, rows: &[Vec<u16>], k: usize) -> bool {
        let start = if k < self.n { 0 } else { self.n };
        let block: Vec<Vec<u16>> = rows[start..=k].to_vec();
        self.gf.rank(&block) == block.len()
    }

    fn dfs(&self, rows: &mut Vec<Vec<u16>>) -> bool {
        let k = rows.len();
        if k == self.d {
            return true;
        }
        let cands = if k < self.n { self.even_cands } else { self.odd_cands };
        for c in cands {
            rows.push(c.clone());
            if self.independent(rows, k) && self.consistent(rows, k) && self.dfs(rows) {
                return true;
            }
            rows.pop();
        }
        false
    }
}

/// Nonzero vectors supported on `start..start+len`, lexicographic by index.
fn block_vectors(q: usize, d: usize, start: usize, len: usize) -> Vec<Vec<u16>> {
    let total = q.pow(len as u32);
    (1..total)
        .map(|mut idx| {
            let mut v = vec![0u16; d];
            for t in (0..len).rev() {
                v[start + t] = (idx % q) as u16;
                idx /= q;
            }
            v
        })
        .collect()
}

/// Least graded isomorphism `a → b` in row-major scan order, if any.
pub fn find_graded_isomorphism(a: &SuperAlgebra, b: &SuperAlgebra) -> Result<Option<GradedMap>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    if !a.field().is_finite() {
        return Err(Error::NeedsFiniteField(
            "isomorphism search over the rationals; verify an explicit map instead".into(),
        ));
    }
    if a.dim_even() != b.dim_even() || a.dim_odd() != b.dim_odd() {
        return Ok(None);
    }
    if a.dim_even() > 3 || a.dim_odd() > 3 {
        return Err(Error::TooLarge(format!(
            "GL search for type ({}, {})",
            a.dim_even(),
            a.dim_odd()
        )));
    }
    let gf = Gf::new(a.field())?;
    let (n, d) = (a.dim_even(), a.dim());
    let ca: Vec<Vec<(usize, u16)>> = (0..d * d)
        .map(|ij| {
            a.basis_product(ij / d, ij % d)
                .iter()
                .map(|(k, c)| (*k, gf.index(c)))
                .collect()
        })
        .collect();
    let cb: Vec<u16> = b.constants().iter().map(|c| gf.index(c)).collect();
    let mut checks = vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            let top = ca[i * d + j].iter().map(|(k, _)| *k).fold(i.max(j), usize::max);
            checks[top].push((i, j));
        }
    }
    let q = gf.order();
    let even_cands = block_vectors(q, d, 0, n);
    let odd_cands = block_vectors(q, d, n, d - n);
    let search = Search {
        gf,
        d,
        n,
        ca,
        cb,
        checks,
        even_cands: &even_cands,
        odd_cands: &odd_cands,
    };
    let first = if n > 0 { &even_cands } else { &odd_cands };
    let found = first.par_iter().find_map_first(|c| {
        let mut rows = vec![c.clone()];
        (search.independent(&rows, 0) && search.consistent(&rows, 0) && search.dfs(&mut rows))
            .then_some(rows)
    });
    let Some(rows) = found else {
        return Ok(None);
    };
    let gf = &search.gf;
    let even = rows[..n]
        .iter()
        .map(|r| r[..n].iter().map(|&x| gf.scalar(x)).collect())
        .collect();
    let odd = rows[n..]
        .iter()
        .map(|r| r[n..].iter().map(|&x| gf.scalar(x)).collect())
        .collect();
    GradedMap::new(a, b, even, odd).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn gf5() -> Field {
        Field::prime(5).unwrap()
    }

    fn entry5(name: &str) -> SuperAlgebra {
        catalog::get(name).unwrap().algebra.reduce(&gf5()).unwrap()
    }

    #[test]
    fn identity_is_least_self_map() {
        let k3 = entry5("K3");
        let f = find_graded_isomorphism(&k3, &k3).unwrap().unwrap();
        assert!(is_isomorphism(&f));
        assert!(verify_homomorphism(&GradedMap::identity(&k3)).holds);
    }

    #[test]
    fn s9_s12_separated() {
        let (a, b) = (entry5("S3_9"), entry5("S3_12"));
        assert!(find_graded_isomorphism(&a, &b).unwrap().is_none());
        assert_ne!(fingerprint(&a).even, fingerprint(&b).even);
    }

    #[test]
    fn swap_on_s3_fails() {
        let a = catalog::get("S3_3").unwrap().algebra;
        let f = GradedMap::from_images(&a, &a, &["e1", "o2", "o1"]).unwrap();
        assert!(!verify_homomorphism(&f).holds);
    }

    #[test]
    fn fingerprint_discriminators() {
        let fp = |n: &str| fingerprint(&catalog::get(n).unwrap().algebra);
        assert!(fp("S3_8").unital && !fp("S3_7").unital);
        assert!(fp("S3_2").associative && !fp("S3_1").associative);
        assert_eq!(fp("S1_1").square_dim, 0);
    }

    #[test]
    fn rational_search_rejected() {
        let a = catalog::get("K3").unwrap().algebra;
        assert!(find_graded_isomorphism(&a, &a).is_err());
    }

    #[test]
    fn basis_change_round_trip() {
        let a = entry5("S3_4");
        let f = a.field().clone();
        let even = vec![vec![f.from_int(1)]];
        let odd = vec![vec![f.from_int(1), f.from_int(2)], vec![f.from_int(0), f.from_int(3)]];
        let b = apply_basis_change(&a, &even, &odd).unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&b));
        let g = find_graded_isomorphism(&a, &b).unwrap().unwrap();
        assert!(is_isomorphism(&g));
        let blocks = g.blocks();
        let back = GradedMap::from_blocks(&a, &b, &blocks).unwrap();
        assert_eq!(back.even_block, g.even_block);
    }

    #[test]
    fn type_mismatch_is_absent() {
        assert!(find_graded_isomorphism(&entry5("S3_1"), &entry5("S3_9")).unwrap().is_none());
    }

    fn u2_template(field: &Field, v: [i64; 5]) -> SuperAlgebra {
        let t = crate::classify::standard_template(1, 2, "U2").unwrap();
        let vals: Vec<Scalar> = v.iter().map(|&x| field.from_int(x)).collect();
        t.instantiate(&vals).unwrap()
    }

    #[test]
    fn square_root_map_into_s3_1() {
        // α = γ = δ = 0, β = 1, ε = 2: needs √2, absent from GF(5)
        let f = Field::ext(5).unwrap();
        let j = u2_template(&f, [0, 1, 0, 0, 2]);
        let s = catalog::get("S3_1").unwrap().algebra.reduce(&f).unwrap();
        let (beta, eps) = (f.from_int(1), f.from_int(2));
        let r1 = crate::field::field_sqrt(&(&beta * &eps)).unwrap().unwrap().inv().unwrap();
        // √(β/ε) on the branch β·(βε)^{-1/2}
        let r2 = &beta * &r1;
        assert_eq!(&r2 * &r2, &beta * &eps.inv().unwrap());
        let even = vec![vec![f.one()]];
        let odd = vec![vec![-r1, f.zero()], vec![f.zero(), -r2]];
        // images of the S3_1 basis in the template algebra
        let m = GradedMap::new(&s, &j, even.clone(), odd.clone()).unwrap();
        assert!(is_isomorphism(&m));
        let reversed = GradedMap::new(&j, &s, even, odd).unwrap();
        assert!(!verify_homomorphism(&reversed).holds);
        let j5 = u2_template(&gf5(), [0, 1, 0, 0, 2]);
        assert!(find_graded_isomorphism(&j5, &entry5("S3_1")).unwrap().is_none());
    }

    #[test]
    fn nilpotent_action_matches_s3_3() {
        // α = β = 1, γ = δ = −1, ε = 0
        let j = u2_template(&gf5(), [1, 1, -1, -1, 0]);
        let s = entry5("S3_3");
        let found = find_graded_isomorphism(&j, &s).unwrap().unwrap();
        assert!(is_isomorphism(&found));
        let m = GradedMap::from_images(&s, &j, &["e1", "-o2", "o1 + o2"]).unwrap();
        assert!(is_isomorphism(&m));
        let reversed = GradedMap::from_images(&j, &s, &["e1", "-o2", "o1 + o2"]).unwrap();
        assert!(!verify_homomorphism(&reversed).holds);
    }
}
