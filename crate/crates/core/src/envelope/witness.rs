//! Known speciality certificates.

use super::systems;
use super::{NcPoly, RewriteSystem};
use crate::algebra::{parse_combination, SuperAlgebra};
use crate::catalog;
use crate::error::Result;
use crate::field::Field;

#[derive(Clone, Debug)]
pub struct Witness {
    pub entry: &'static str,
    pub algebra: SuperAlgebra,
    pub system: RewriteSystem,
    pub images: Vec<NcPoly>,
}

fn build(entry: &'static str, system: RewriteSystem, images: &[&str]) -> Witness {
    let algebra = catalog::get(entry).expect("catalog entry").algebra;
    let images = images
        .iter()
        .map(|t| system.parse(t).expect("witness image parses"))
        .collect();
    Witness { entry, algebra, system, images }
}

/// K3 inside `M_{1|1}(W1)`.
pub fn k3() -> Witness {
    let m = systems::weyl().with_matrix(1, 1).expect("matrix layer");
    build("K3", m, &["e11", "2*e12 + 2*xi*e21", "eta*e12 + xi*eta*e21"])
}

/// S3_1 inside `M_{1|2}` with `e1 ↦ e23`, `o1 ↦ e13 + 4·e31` and
/// `o2 ↦ e1⊙o1`; the `o1⊙o2` check fails.
pub fn s3_1_as_printed() -> Witness {
    s3_1_from("e13 + 4*e31")
}

/// As [`s3_1_as_printed`] with the sign of the `e31` term flipped.
pub fn s3_1() -> Witness {
    s3_1_from("e13 - 4*e31")
}

fn s3_1_from(o1: &str) -> Witness {
    let mut w = build("S3_1", systems::matrices(1, 2), &["e23", o1, "0"]);
    w.images[2] = w
        .system
        .super_jordan_product(&w.images[0], &w.images[1])
        .expect("homogeneous");
    w
}

/// S3_8 inside the odd Weyl algebra `xy − yx = 1`.
pub fn s3_8() -> Witness {
    build("S3_8", systems::odd_weyl(), &["1", "x", "2*y"])
}

pub fn all() -> Vec<Witness> {
    vec![k3(), s3_1(), s3_8()]
}

const UT6_LABELS: [&str; 5] = ["u", "e1", "e2", "e3", "e4"];
const UT6_ROWS: [(&str, &str, &str); 11] = [
    ("e1", "e1", "e1"),
    ("e1", "e2", "e4"),
    ("e2", "e1", "e2 - e4"),
    ("e1", "e3", "e3"),
    ("e3", "e1", "e3"),
    ("e1", "e4", "e4"),
    ("e4", "e1", "0"),
    ("e2", "e2", "0"),
    ("e2", "e3", "0"),
    ("e3", "e2", "0"),
    ("e3", "e3", "0"),
];

/// A five-dimensional unital associative algebra containing T6 as a
/// Jordan subalgebra. Pass a replacement row to perturb the table.
pub fn ut6_with(rows_override: &[(&str, &str, &str)]) -> Result<SuperAlgebra> {
    let f = Field::Rational;
    let labels: Vec<String> = UT6_LABELS.iter().map(|s| s.to_string()).collect();
    let idx = |l: &str| labels.iter().position(|x| x == l).expect("label");
    let mut rows: Vec<(&str, &str, &str)> = UT6_ROWS.to_vec();
    for o in rows_override {
        match rows.iter_mut().find(|r| r.0 == o.0 && r.1 == o.1) {
            Some(r) => *r = *o,
            None => rows.push(*o),
        }
    }
    let mut prods = Vec::new();
    for l in &UT6_LABELS {
        prods.push((0, idx(l), vec![(f.one(), idx(l))]));
        if *l != "u" {
            prods.push((idx(l), 0, vec![(f.one(), idx(l))]));
        }
    }
    for (a, b, r) in rows {
        let coords = parse_combination(&f, &labels, r)?;
        let terms = coords
            .into_iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(k, s)| (s, k))
            .collect();
        prods.push((idx(a), idx(b), terms));
    }
    SuperAlgebra::from_products(5, 0, f, Some(labels), &prods, false)
}

pub fn ut6() -> SuperAlgebra {
    ut6_with(&[]).expect("table is well formed")
}

/// The same table with `e3` odd, an envelope for S3_12.
pub fn ut6_graded() -> SuperAlgebra {
    ut6().permuted(&[0, 1, 2, 4, 3], 4).expect("grading closes")
}

/// Images of the T6 and S3_12 bases in `ut6` and `ut6_graded`.
pub const UT6_INCLUSION: [&str; 3] = ["e1", "e2", "e3"];

#[cfg(test)]
mod tests {
    use super::super::{verify_associative_envelope_table, verify_special_embedding};
    use super::*;

    #[test]
    fn witnesses_hold() {
        for w in all() {
            let r = verify_special_embedding(&w.algebra, &w.images, &w.system).unwrap();
            assert!(r.holds, "{}: {}", w.entry, r.render(&w.algebra, &w.system));
        }
    }

    #[test]
    fn printed_s3_1_witness_fails_on_one_pair() {
        let w = s3_1_as_printed();
        let r = verify_special_embedding(&w.algebra, &w.images, &w.system).unwrap();
        assert!(!r.holds);
        let pairs: Vec<(usize, usize)> = r.violations.iter().map(|v| (v.0, v.1)).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 1)]);
        assert_eq!(w.system.render(&w.images[2]), "2*e21");
        assert_eq!(w.system.render(&s3_1().images[2]), "-2*e21");
    }

    #[test]
    fn k3_wrong_image_fails() {
        let mut w = k3();
        w.images[1] = w.system.parse("e12").unwrap();
        let r = verify_special_embedding(&w.algebra, &w.images, &w.system).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn ut6_envelopes() {
        let t6 = catalog::get("T6").unwrap().algebra;
        let r = verify_associative_envelope_table(&ut6(), &t6, &UT6_INCLUSION).unwrap();
        assert!(r.holds());
        let s = catalog::get("S3_12").unwrap().algebra;
        let g = ut6_graded();
        assert_eq!((g.dim_even(), g.dim_odd()), (4, 1));
        let r = verify_associative_envelope_table(&g, &s, &UT6_INCLUSION).unwrap();
        assert!(r.holds());
        assert!(ut6().is_unital());
    }

    #[test]
    fn perturbed_ut6_is_rejected() {
        let t6 = catalog::get("T6").unwrap().algebra;
        let bad = ut6_with(&[("e2", "e1", "e2")]).unwrap();
        let r = verify_associative_envelope_table(&bad, &t6, &UT6_INCLUSION).unwrap();
        assert!(!r.holds());
        assert!(!r.homomorphism.holds);
    }
}
