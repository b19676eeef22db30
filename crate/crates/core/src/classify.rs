//! Parameterized templates, symbolic constraint generation, finite-field
//! enumeration and orbit matching against the catalog.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{default_labels, identity_signs, SignConvention, SuperAlgebra};
use crate::catalog;
use crate::error::{Error, Result};
use crate::field::{Field, Gf, Rational, Scalar};
use crate::iso::{self, Fingerprint};
use crate::poly::Poly;

/// Largest parameter space [`enumerate_solutions`] will scan.
pub const ENUMERATION_LIMIT: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: Rational,
    pub param: usize,
}

#[derive(Clone, Debug)]
pub struct Template {
    pub name: String,
    pub base: SuperAlgebra,
    pub unknowns: Vec<String>,
    pub placements: Vec<Placement>,
}

#[derive(Clone, Debug)]
pub struct TaggedPoly {
    pub poly: Poly,
    pub quadruple: [usize; 4],
    pub component: usize,
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub unknowns: Vec<String>,
    pub polynomials: Vec<TaggedPoly>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub values: Vec<Scalar>,
    pub algebra: SuperAlgebra,
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: SuperAlgebra,
    /// Indices into the partitioned input, ascending.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub template: String,
    pub field: Field,
    pub solutions: usize,
    pub orbits: Vec<(Orbit, Option<String>)>,
    pub warning: Option<&'static str>,
}

impl Template {
    pub fn new(
        name: &str,
        base: SuperAlgebra,
        unknowns: Vec<String>,
        placements: Vec<Placement>,
    ) -> Result<Self> {
        for (i, u) in unknowns.iter().enumerate() {
            if unknowns[..i].contains(u) {
                return Err(Error::Template(format!("unknown {u} declared twice")));
            }
        }
        let d = base.dim();
        for p in &placements {
            if p.i >= d || p.j >= d || p.k >= d || p.param >= unknowns.len() {
                return Err(Error::Template("placement out of range".into()));
            }
            if (base.parity(p.i) + base.parity(p.j)) % 2 != base.parity(p.k) {
                return Err(Error::Template(format!(
                    "placement {}·{} → {} breaks the grading",
                    base.label(p.i),
                    base.label(p.j),
                    base.label(p.k)
                )));
            }
        }
        Ok(Template {
            name: name.to_string(),
            base,
            unknowns,
            placements,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Constants as polynomials in the unknowns.
    pub fn symbolic_constants(&self) -> Vec<Poly> {
        let nv = self.unknowns.len();
        let mut c: Vec<Poly> = self
            .base
            .constants()
            .iter()
            .map(|s| Poly::constant(nv, s.as_rational().cloned().unwrap_or_default()))
            .collect();
        let d = self.dim();
        for p in &self.placements {
            let slot = &mut c[(p.i * d + p.j) * d + p.k];
            *slot = slot.add(&Poly::var(nv, p.param).scale(&p.coeff));
        }
        c
    }

    pub fn instantiate(&self, values: &[Scalar]) -> Result<SuperAlgebra> {
        let field = values
            .first()
            .map(Scalar::field)
            .unwrap_or_else(|| self.base.field().clone());
        let d = self.dim();
        let mut c: Vec<Scalar> = self
            .base
            .constants()
            .iter()
            .map(|s| s.reduce(&field))
            .collect::<Result<_>>()?;
        for p in &self.placements {
            let coeff = field.from_rational(&p.coeff)?;
            c[(p.i * d + p.j) * d + p.k] += &(&coeff * &values[p.param]);
        }
        SuperAlgebra::new(
            self.base.dim_even(),
            self.base.dim_odd(),
            field,
            Some(self.base.labels().to_vec()),
            c,
        )
    }
}

fn placement(i: usize, j: usize, k: usize, param: usize, odd_pair: bool) -> [Placement; 2] {
    let sign = if odd_pair { -Rational::one() } else { Rational::one() };
    [
        Placement { i, j, k, coeff: Rational::one(), param },
        Placement { i: j, j: i, k, coeff: sign, param },
    ]
}

/// Names accepted for the even part of each standard type.
pub fn even_options(n: usize, m: usize) -> &'static [&'static str] {
    match (n, m) {
        (1, 1) | (1, 2) => &["U1", "U2"],
        (2, 1) => &["B1", "B2", "B3", "U1+U1", "U1+U2", "U2+U2"],
        _ => &[],
    }
}

/// The templates used in the case analysis: even part fixed to a Jordan
/// algebra, odd part parameterized.
pub fn standard_template(n: usize, m: usize, even: &str) -> Result<Template> {
    if !even_options(n, m).contains(&even) {
        return Err(Error::Template(format!(
            "no template for type ({n}, {m}) with even part {even}"
        )));
    }
    let even_name: String = even.split('+').map(|s| format!("{s}s")).collect::<Vec<_>>().join("+");
    let mut alg = catalog::get(&even_name)?.algebra;
    for _ in 0..m {
        alg = alg.direct_sum(&catalog::get("S1_1")?.algebra)?;
    }
    let alg = alg.with_labels(default_labels(n, m))?;
    let greek = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (unknowns, placements) = match (n, m) {
        (1, 1) => (greek(&["β"]), placement(0, 1, 1, 0, false).to_vec()),
        (1, 2) => {
            let mut p = Vec::new();
            p.extend(placement(0, 1, 1, 0, false));
            p.extend(placement(0, 1, 2, 1, false));
            p.extend(placement(0, 2, 1, 2, false));
            p.extend(placement(0, 2, 2, 3, false));
            p.extend(placement(1, 2, 0, 4, true));
            (greek(&["α", "β", "γ", "δ", "ε"]), p)
        }
        _ => {
            let mut p = Vec::new();
            p.extend(placement(0, 2, 2, 0, false));
            p.extend(placement(1, 2, 2, 1, false));
            (greek(&["α", "β"]), p)
        }
    };
    Template::new(&format!("({n},{m})/{even}"), alg, unknowns, placements)
}

pub fn standard_templates() -> Vec<Template> {
    [(1, 1), (1, 2), (2, 1)]
        .iter()
        .flat_map(|&(n, m)| {
            even_options(n, m)
                .iter()
                .map(move |e| standard_template(n, m, e).expect("standard template"))
        })
        .collect()
}

fn sym_mul(c: &[Poly], d: usize, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    let nv = c[0].nvars();
    let mut out = vec![Poly::zero(nv); d];
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let xy = x[i].mul(&y[j]);
            for (k, o) in out.iter_mut().enumerate() {
                let ck = &c[(i * d + j) * d + k];
                if !ck.is_zero() {
                    *o = o.add(&xy.mul(ck));
                }
            }
        }
    }
    out
}

/// Evaluates the super Jordan identity symbolically on every basis
/// quadruple and collects the coefficient polynomials.
pub fn generate_constraints(t: &Template) -> ConstraintSystem {
    let d = t.dim();
    let nv = t.unknowns.len();
    let c = t.symbolic_constants();
    let basis = |i: usize| -> Vec<Poly> {
        (0..d)
            .map(|k| {
                if k == i {
                    Poly::constant(nv, Rational::one())
                } else {
                    Poly::zero(nv)
                }
            })
            .collect()
    };
    let b: Vec<Vec<Poly>> = (0..d).map(basis).collect();
    let pairs: Vec<Vec<Poly>> = (0..d * d).map(|ij| sym_mul(&c, d, &b[ij / d], &b[ij % d])).collect();
    let xy = |i: usize, j: usize| &pairs[i * d + j];
    let quads: Vec<[usize; 4]> = (0..d.pow(4))
        .map(|q| [q / (d * d * d), (q / (d * d)) % d, (q / d) % d, q % d])
        .collect();
    let polynomials = quads
        .par_iter()
        .flat_map_iter(|&[a, bb, cc, e]| {
            let p = |i| t.base.parity(i);
            let neg = identity_signs(SignConvention::Corrected, [p(a), p(bb), p(cc), p(e)]);
            let terms = [
                sym_mul(&c, d, xy(a, bb), xy(cc, e)),
                sym_mul(&c, d, xy(a, cc), xy(bb, e)),
                sym_mul(&c, d, xy(a, e), xy(bb, cc)),
                sym_mul(&c, d, &sym_mul(&c, d, xy(a, bb), &b[cc]), &b[e]),
                sym_mul(&c, d, &sym_mul(&c, d, xy(a, e), &b[cc]), &b[bb]),
                sym_mul(&c, d, &sym_mul(&c, d, xy(bb, e), &b[cc]), &b[a]),
            ];
            let mut defect = vec![Poly::zero(nv); d];
            for (s, v) in neg.iter().zip(&terms) {
                for (acc, x) in defect.iter_mut().zip(v) {
                    *acc = if *s { acc.sub(x) } else { acc.add(x) };
                }
            }
            defect
                .into_iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(move |(k, poly)| TaggedPoly {
                    poly,
                    quadruple: [a, bb, cc, e],
                    component: k,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    ConstraintSystem {
        unknowns: t.unknowns.clone(),
        polynomials,
    }
}

impl ConstraintSystem {
    /// The distinct polynomials up to scalar multiples, each made monic.
    pub fn distinct(&self) -> Vec<Poly> {
        let mut v: Vec<Poly> = self.polynomials.iter().map(|t| t.poly.monic()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// True when `expected` and the generated system agree polynomial by
    /// polynomial up to scalar multiples.
    pub fn matches(&self, expected: &[Poly]) -> bool {
        let mut e: Vec<Poly> = expected.iter().map(Poly::monic).collect();
        e.sort();
        e.dedup();
        e == self.distinct()
    }

    pub fn render(&self) -> String {
        self.distinct()
            .iter()
            .map(|p| p.render(&self.unknowns))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// All parameter assignments over a finite field that satisfy the
/// constraints, each cross-checked against the direct identity check.
pub fn enumerate_solutions(t: &Template, field: &Field) -> Result<Vec<Solution>> {
    if !field.is_finite() {
        return Err(Error::NeedsFiniteField("enumeration needs a finite field".into()));
    }
    if t.unknowns.len() > 6 {
        return Err(Error::TooLarge(format!("{} unknowns", t.unknowns.len())));
    }
    let gf = Gf::new(field)?;
    let q = gf.order() as u64;
    let k = t.unknowns.len() as u32;
    let total = q.pow(k);
    if total > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("{q}^{k} assignments")));
    }
    let system = generate_constraints(t);
    let reduced = system
        .distinct()
        .iter()
        .map(|p| p.reduce(&gf))
        .collect::<Result<Vec<_>>>()?;
    let hits: Vec<Vec<u16>> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut v = vec![0u16; k as usize];
            for slot in v.iter_mut().rev() {
                *slot = (idx % q) as u16;
                idx /= q;
            }
            reduced.iter().all(|p| p.eval(&gf, &v) == 0).then_some(v)
        })
        .collect();
    hits.into_iter()
        .map(|v| {
            let values: Vec<Scalar> = v.iter().map(|&x| gf.scalar(x)).collect();
            let algebra = t.instantiate(&values)?;
            if !algebra.check_super_jordan().holds {
                return Err(Error::Template(format!(
                    "assignment {} satisfies the constraints but fails the identity",
                    render_values(&t.unknowns, &values)
                )));
            }
            Ok(Solution { values, algebra })
        })
        .collect()
}

pub fn render_values(names: &[String], values: &[Scalar]) -> String {
    names
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn sort_key(a: &SuperAlgebra) -> Vec<Scalar> {
    a.constants().to_vec()
}

/// Partitions algebras of one type over one finite field into graded
/// isomorphism classes. Each orbit is represented by its member with the
/// least constant vector.
pub fn orbit_partition(algebras: &[SuperAlgebra]) -> Result<Vec<Orbit>> {
    let mut order: Vec<usize> = (0..algebras.len()).collect();
    order.sort_by(|&x, &y| sort_key(&algebras[x]).cmp(&sort_key(&algebras[y])).then(x.cmp(&y)));
    let prints: Vec<Fingerprint> = algebras.par_iter().map(iso::fingerprint).collect();
    let mut orbits: Vec<(Orbit, usize)> = Vec::new();
    for idx in order {
        let a = &algebras[idx];
        let mut home = None;
        for (o, (orbit, rep)) in orbits.iter().enumerate() {
            if prints[*rep] != prints[idx] {
                continue;
            }
            if sort_key(&orbit.representative) == sort_key(a)
                || iso::find_graded_isomorphism(&orbit.representative, a)?.is_some()
            {
                home = Some(o);
                break;
            }
        }
        match home {
            Some(o) => orbits[o].0.members.push(idx),
            None => orbits.push((
                Orbit {
                    representative: a.clone(),
                    members: vec![idx],
                },
                idx,
            )),
        }
    }
    Ok(orbits
        .into_iter()
        .map(|(mut o, _)| {
            o.members.sort();
            o
        })
        .collect())
}

fn match_in(rep: &SuperAlgebra, field: &Field) -> Result<Option<String>> {
    let rep = if rep.field() == field { rep.clone() } else { rep.reduce(field)? };
    let target = iso::fingerprint(&rep);
    for entry in catalog::all_of_dimension(rep.dim())? {
        if entry.type_pair() != (rep.dim_even(), rep.dim_odd()) {
            continue;
        }
        let cand = entry.algebra.reduce(field)?;
        if iso::fingerprint(&cand) != target {
            continue;
        }
        if iso::find_graded_isomorphism(&cand, &rep)?.is_some() {
            return Ok(Some(entry.name));
        }
    }
    Ok(None)
}

/// Name of the catalog entry isomorphic to `rep`, trying the quadratic
/// extension when allowed and nothing matches over the base field.
pub fn match_catalog(rep: &SuperAlgebra, allow_quadratic_extension: bool) -> Result<Option<String>> {
    let field = rep.field().clone();
    if !field.is_finite() {
        return Err(Error::NeedsFiniteField("catalog matching needs a finite field".into()));
    }
    if let Some(name) = match_in(rep, &field)? {
        return Ok(Some(name));
    }
    if allow_quadratic_extension {
        if let Field::Prime { .. } = field {
            return match_in(rep, &field.extension()?);
        }
    }
    Ok(None)
}

pub fn classify(t: &Template, field: &Field, allow_ext: bool) -> Result<ClassificationReport> {
    let sols = enumerate_solutions(t, field)?;
    let algebras: Vec<SuperAlgebra> = sols.iter().map(|s| s.algebra.clone()).collect();
    let orbits = orbit_partition(&algebras)?;
    let matched = orbits
        .into_par_iter()
        .map(|o| {
            let name = match_catalog(&o.representative, allow_ext)?;
            Ok((o, name))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassificationReport {
        template: t.name.clone(),
        field: field.clone(),
        solutions: sols.len(),
        orbits: matched,
        warning: field.warning(),
    })
}

impl ClassificationReport {
    pub fn unmatched(&self) -> Vec<&Orbit> {
        self.orbits
            .iter()
            .filter(|(_, n)| n.is_none())
            .map(|(o, _)| o)
            .collect()
    }

    pub fn names(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for (o, n) in &self.orbits {
            if let Some(n) = n {
                *m.entry(n.clone()).or_insert(0) += o.members.len();
            }
        }
        m
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if let Some(w) = self.warning {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "template {} over {}", self.template, self.field);
        let _ = writeln!(s, "solutions: {}", self.solutions);
        let _ = writeln!(s, "orbits: {}", self.orbits.len());
        for (i, (o, name)) in self.orbits.iter().enumerate() {
            let rep = &o.representative;
            let table = rep.product_lines();
            let table = if table.is_empty() { "zero product".to_string() } else { table.join(", ") };
            let _ = writeln!(
                s,
                "  orbit {}: {} members, {} [{}]",
                i + 1,
                o.members.len(),
                name.as_deref().unwrap_or("UNMATCHED"),
                table
            );
        }
        let unmatched = self.unmatched().len();
        let _ = writeln!(s, "unmatched: {unmatched}");
        s
    }
}

/// True when every constraint vanishes at `values`.
pub fn assignment_satisfies(t: &Template, values: &[Scalar]) -> Result<bool> {
    let sys = generate_constraints(t);
    let f = values.first().map(Scalar::field).unwrap_or(Field::Rational);
    for p in sys.distinct() {
        if !p.eval(&f, values)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polys(t: &Template, v: &[&str]) -> Vec<Poly> {
        v.iter().map(|s| Poly::parse(&t.unknowns, s).unwrap()).collect()
    }

    #[test]
    fn one_one_systems() {
        let t = standard_template(1, 1, "U1").unwrap();
        let sys = generate_constraints(&t);
        assert!(sys.matches(&polys(&t, &["(β-1)β(2β-1)"])));
        let t = standard_template(1, 1, "U2").unwrap();
        assert!(generate_constraints(&t).matches(&polys(&t, &["2β^3"])));
    }

    #[test]
    fn one_one_solutions() {
        let t = standard_template(1, 1, "U1").unwrap();
        let f = Field::prime(5).unwrap();
        let sols = enumerate_solutions(&t, &f).unwrap();
        let betas: Vec<String> = sols.iter().map(|s| s.values[0].to_string()).collect();
        assert_eq!(betas, vec!["0", "1", "3"]);
        let r = classify(&t, &f, true).unwrap();
        assert_eq!(r.orbits.len(), 3);
        assert!(r.unmatched().is_empty());
    }

    #[test]
    fn bad_template_rejected() {
        let t = standard_template(1, 1, "U1").unwrap();
        let bad = Template::new(
            "bad",
            t.base.clone(),
            vec!["a".into()],
            vec![Placement { i: 0, j: 1, k: 0, coeff: Rational::one(), param: 0 }],
        );
        assert!(bad.is_err());
        assert!(standard_template(1, 1, "B1").is_err());
    }

    #[test]
    fn null_even_part_forces_zero() {
        let t = standard_template(2, 1, "U2+U2").unwrap();
        let sols = enumerate_solutions(&t, &Field::prime(7).unwrap()).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].values.iter().all(Scalar::is_zero));
    }

    #[test]
    fn singleton_orbit() {
        let a = catalog::get("K3").unwrap().algebra.reduce(&Field::prime(5).unwrap()).unwrap();
        let o = orbit_partition(std::slice::from_ref(&a)).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(match_catalog(&a, false).unwrap().as_deref(), Some("S3_7"));
    }
}
