//! Every tabulated algebra and superalgebra of dimension at most three,
//! plus the Kac and Shestakov superalgebras.
//!
//! Indecomposable tables are stored once; direct sums are composed on
//! demand from `+`-joined names (`⊕` is accepted as a separator too).

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::SuperAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Associative,
    Unital,
    Simple,
    TrivialGrading,
    Decomposable,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Associative => "associative",
            Tag::Unital => "unital",
            Tag::Simple => "simple",
            Tag::TrivialGrading => "trivial-grading",
            Tag::Decomposable => "decomposable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    P0,
    PHalf,
    P1,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::P0 => "P0",
            Component::PHalf => "P1/2",
            Component::P1 => "P1",
        })
    }
}

/// Where the odd basis vectors sit relative to given idempotents.
/// When `ordered` is false the placements are compared as a multiset,
/// since a direct sum orders its odd vectors by summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeirceNote {
    Single {
        idempotent: String,
        odd: Vec<Component>,
        ordered: bool,
    },
    Refined {
        idempotents: Vec<String>,
        odd: Vec<(usize, usize)>,
        ordered: bool,
    },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: SuperAlgebra,
    pub annotations: BTreeSet<Tag>,
    pub underlying_algebra: Option<String>,
    pub source: String,
    pub peirce: Vec<PeirceNote>,
    pub summands: Vec<String>,
}

impl CatalogEntry {
    pub fn has(&self, tag: Tag) -> bool {
        self.annotations.contains(&tag)
    }

    pub fn type_pair(&self) -> (usize, usize) {
        (self.algebra.dim_even(), self.algebra.dim_odd())
    }

    pub fn tag_list(&self) -> String {
        let t: Vec<String> = self.annotations.iter().map(Tag::to_string).collect();
        t.join(",")
    }
}

type Row = (&'static str, &'static str, &'static str);

struct Def {
    n: usize,
    m: usize,
    labels: Option<&'static [&'static str]>,
    rows: &'static [Row],
    associative: bool,
    unital: bool,
    simple: bool,
    underlying: Option<&'static str>,
    source: &'static str,
}

const fn def(n: usize, m: usize, rows: &'static [Row], source: &'static str) -> Def {
    Def {
        n,
        m,
        labels: None,
        rows,
        associative: false,
        unital: false,
        simple: false,
        underlying: None,
        source,
    }
}

impl Def {
    const fn assoc(mut self) -> Self {
        self.associative = true;
        self
    }
    const fn unital(mut self) -> Self {
        self.unital = true;
        self
    }
    const fn simple(mut self) -> Self {
        self.simple = true;
        self
    }
    const fn under(mut self, name: &'static str) -> Self {
        self.underlying = Some(name);
        self
    }
}

const JORDAN: &str = "indecomposable Jordan algebras of dimension at most 3";
const TWO: &str = "two-dimensional Jordan superalgebras";
const T12U2: &str = "type (1,2) with even part U2";
const T12U1: &str = "type (1,2) with even part U1";
const T21B1: &str = "type (2,1) with even part B1";
const T21B2: &str = "type (2,1) with even part B2";
const T21U1U1: &str = "type (2,1) with even part U1+U1";
const KAC: &str = "ten-dimensional Kac superalgebra";
const SHESTAKOV: &str = "seven-dimensional Shestakov superalgebra";

const U1: &[Row] = &[("e1", "e1", "e1")];
const U2: &[Row] = &[];
const B1: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "e2")];
const B2: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "1/2*e2")];
const B3: &[Row] = &[("e1", "e1", "e2")];
const T1: &[Row] = &[("e1", "e1", "e1"), ("e2", "e2", "e3"), ("e1", "e2", "e2"), ("e1", "e3", "e3")];
const T2: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "e2"), ("e1", "e3", "e3")];
const T3: &[Row] = &[("e1", "e1", "e2"), ("e1", "e2", "e3")];
const T4: &[Row] = &[("e1", "e1", "e2"), ("e1", "e3", "e2")];
const T5: &[Row] = &[
    ("e1", "e1", "e1"),
    ("e2", "e2", "e2"),
    ("e3", "e3", "e1+e2"),
    ("e1", "e3", "1/2*e3"),
    ("e2", "e3", "1/2*e3"),
];
const T6: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "1/2*e2"), ("e1", "e3", "e3")];
const T7: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "1/2*e2"), ("e1", "e3", "1/2*e3")];
const T8: &[Row] = &[("e1", "e1", "e1"), ("e2", "e2", "e3"), ("e1", "e2", "1/2*e2")];
const T9: &[Row] = &[("e1", "e1", "e1"), ("e2", "e2", "e3"), ("e1", "e2", "1/2*e2"), ("e1", "e3", "e3")];
const T10: &[Row] = &[
    ("e1", "e1", "e1"),
    ("e2", "e2", "e2"),
    ("e1", "e3", "1/2*e3"),
    ("e2", "e3", "1/2*e3"),
];

const S2_2: &[Row] = &[("e1", "e1", "e1"), ("e1", "o1", "o1")];
const S1_2: &[Row] = &[("e1", "e1", "e1"), ("e1", "o1", "1/2*o1")];

const S3_1: &[Row] = &[("e1", "o1", "o2"), ("o1", "o2", "e1")];
const S3_2: &[Row] = &[("o1", "o2", "e1")];
const S3_3: &[Row] = &[("e1", "o1", "o2")];
const S3_4: &[Row] = &[("e1", "e1", "e1"), ("e1", "o1", "o1"), ("e1", "o2", "1/2*o2")];
const S3_5: &[Row] = &[("e1", "e1", "e1"), ("e1", "o1", "1/2*o1"), ("e1", "o2", "1/2*o2")];
const S3_6: &[Row] = &[("e1", "e1", "e1"), ("e1", "o1", "o1"), ("e1", "o2", "o2")];
const S3_7: &[Row] = &[
    ("e1", "e1", "e1"),
    ("e1", "o1", "1/2*o1"),
    ("e1", "o2", "1/2*o2"),
    ("o1", "o2", "e1"),
];
const S3_8: &[Row] = &[
    ("e1", "e1", "e1"),
    ("e1", "o1", "o1"),
    ("e1", "o2", "o2"),
    ("o1", "o2", "e1"),
];
const S3_9: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "e2"), ("e1", "o1", "1/2*o1")];
const S3_10: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "e2"), ("e1", "o1", "o1")];
const S3_11: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "1/2*e2"), ("e1", "o1", "1/2*o1")];
const S3_12: &[Row] = &[("e1", "e1", "e1"), ("e1", "e2", "1/2*e2"), ("e1", "o1", "o1")];
const S3_13: &[Row] = &[
    ("e1", "e1", "e1"),
    ("e2", "e2", "e2"),
    ("e1", "o1", "1/2*o1"),
    ("e2", "o1", "1/2*o1"),
];

const KAC_LABELS: &[&str] = &["a1", "a2", "a3", "a4", "a5", "a6", "xi1", "xi2", "xi3", "xi4"];
const KAC10: &[Row] = &[
    ("a1", "a1", "a1"),
    ("a1", "a2", "a2"),
    ("a1", "a3", "a3"),
    ("a1", "a4", "a4"),
    ("a1", "a5", "a5"),
    ("a1", "xi1", "1/2*xi1"),
    ("a1", "xi2", "1/2*xi2"),
    ("a1", "xi3", "1/2*xi3"),
    ("a1", "xi4", "1/2*xi4"),
    ("a2", "a3", "a1"),
    ("a2", "xi3", "xi1"),
    ("a2", "xi4", "xi2"),
    ("a3", "xi1", "1/2*xi3"),
    ("a3", "xi2", "1/2*xi4"),
    ("a4", "a5", "a1"),
    ("a4", "xi2", "xi1"),
    ("a4", "xi4", "xi3"),
    ("a5", "xi1", "1/2*xi2"),
    ("a5", "xi3", "1/2*xi4"),
    ("a6", "a6", "a6"),
    ("a6", "xi1", "1/2*xi1"),
    ("a6", "xi2", "1/2*xi2"),
    ("a6", "xi3", "1/2*xi3"),
    ("a6", "xi4", "1/2*xi4"),
    ("xi1", "xi2", "a2"),
    ("xi1", "xi3", "a4"),
    ("xi1", "xi4", "a1+a6"),
    ("xi2", "xi3", "a1+a6"),
    ("xi2", "xi4", "a5"),
    ("xi3", "xi4", "a3"),
];

const SHESTAKOV_LABELS: &[&str] = &["e1", "n1", "n2", "o1", "o2", "o3", "o4"];
const SHESTAKOV7: &[Row] = &[
    ("e1", "e1", "e1"),
    ("e1", "n1", "1/2*n1"),
    ("e1", "n2", "1/2*n2"),
    ("e1", "o2", "1/2*o2"),
    ("e1", "o3", "1/2*o3"),
    ("n1", "o1", "o2"),
    ("n1", "o3", "o4"),
    ("n2", "o1", "o3"),
    ("n2", "o2", "-o4"),
    ("o1", "o2", "n2"),
];

fn definition(name: &str) -> Option<Def> {
    let jordan = |rows, d| def(d, 0, rows, JORDAN);
    Some(match name {
        "U1" => jordan(U1, 1).assoc().unital().simple(),
        "U2" => jordan(U2, 1).assoc(),
        "B1" => jordan(B1, 2).assoc().unital(),
        "B2" => jordan(B2, 2),
        "B3" => jordan(B3, 2).assoc(),
        "T1" => jordan(T1, 3).assoc().unital(),
        "T2" => jordan(T2, 3).assoc().unital(),
        "T3" => jordan(T3, 3).assoc(),
        "T4" => jordan(T4, 3).assoc(),
        "T5" => jordan(T5, 3).unital(),
        "T6" => jordan(T6, 3),
        "T7" => jordan(T7, 3),
        "T8" => jordan(T8, 3),
        "T9" => jordan(T9, 3),
        "T10" => jordan(T10, 3).unital(),
        "S1_1" => def(0, 1, &[], "odd one-dimensional superalgebra").assoc(),
        "S2_2" => def(1, 1, S2_2, TWO).assoc().unital().under("B1"),
        "S1_2" => def(1, 1, S1_2, TWO).under("B2"),
        "S3_1" => def(1, 2, S3_1, T12U2),
        "S3_2" => def(1, 2, S3_2, T12U2).assoc(),
        "S3_3" => def(1, 2, S3_3, T12U2).assoc().under("T4"),
        "S3_4" => def(1, 2, S3_4, T12U1).under("T6"),
        "S3_5" => def(1, 2, S3_5, T12U1).under("T7"),
        "S3_6" => def(1, 2, S3_6, T12U1).assoc().unital().under("T2"),
        "S3_7" => def(1, 2, S3_7, T12U1).simple(),
        "S3_8" => def(1, 2, S3_8, T12U1).unital().simple(),
        "S3_9" => def(2, 1, S3_9, T21B1).under("T6"),
        "S3_10" => def(2, 1, S3_10, T21B1).assoc().unital().under("T2"),
        "S3_11" => def(2, 1, S3_11, T21B2).under("T7"),
        "S3_12" => def(2, 1, S3_12, T21B2).under("T6"),
        "S3_13" => def(2, 1, S3_13, T21U1U1).unital().under("T10"),
        "KAC10" => Def {
            labels: Some(KAC_LABELS),
            ..def(6, 4, KAC10, KAC).unital().simple()
        },
        "SHESTAKOV7" => Def {
            labels: Some(SHESTAKOV_LABELS),
            ..def(3, 4, SHESTAKOV7, SHESTAKOV)
        },
        _ => return None,
    })
}

const UNGRADED: [&str; 15] = [
    "U1", "U2", "B1", "B2", "B3", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10",
];

const DIM1: &[&str] = &["U1s", "U2s", "S1_1"];

const DIM2: &[&str] = &[
    "S2_2", "B1s", "S1_2", "B2s", "B3s", "U1s+U1s", "U1s+S1_1", "U1s+U2s", "S1_1+S1_1",
    "U2s+S1_1", "U2s+U2s",
];

const DIM3: &[&str] = &[
    // (0,3)
    "S1_1+S1_1+S1_1",
    // (1,2)
    "S3_1", "S3_2", "S3_3", "U2s+S1_1+S1_1", "S1_2+S1_1", "S3_4", "S2_2+S1_1",
    "U1s+S1_1+S1_1", "S3_5", "S3_6", "S3_7", "S3_8",
    // (2,1)
    "B1s+S1_1", "S3_9", "S3_10", "B2s+S1_1", "S3_11", "S3_12", "B3s+S1_1", "U1s+U1s+S1_1",
    "S1_2+U1s", "S2_2+U1s", "S3_13", "U1s+U2s+S1_1", "S1_2+U2s", "S2_2+U2s", "U2s+U2s+S1_1",
    // (3,0)
    "T1s", "T2s", "T3s", "T4s", "T5s", "T6s", "T7s", "T8s", "T9s", "T10s", "B1s+U1s",
    "B1s+U2s", "B2s+U1s", "B2s+U2s", "B3s+U1s", "B3s+U2s", "U1s+U1s+U1s", "U1s+U1s+U2s",
    "U1s+U2s+U2s", "U2s+U2s+U2s",
];

fn single(idem: &str, odd: &[Component], ordered: bool) -> PeirceNote {
    PeirceNote::Single {
        idempotent: idem.into(),
        odd: odd.to_vec(),
        ordered,
    }
}

fn refined(odd: &[(usize, usize)], ordered: bool) -> PeirceNote {
    PeirceNote::Refined {
        idempotents: vec!["e1".into(), "e2".into()],
        odd: odd.to_vec(),
        ordered,
    }
}

fn peirce_notes(name: &str) -> Vec<PeirceNote> {
    use Component::*;
    match name {
        "S1_2+S1_1" => vec![single("e1", &[P0, PHalf], false)],
        "S3_4" => vec![single("e1", &[P1, PHalf], true)],
        "S2_2+S1_1" => vec![single("e1", &[P0, P1], false)],
        "U1s+S1_1+S1_1" => vec![single("e1", &[P0, P0], false)],
        "S3_5" | "S3_7" => vec![single("e1", &[PHalf, PHalf], true)],
        "S3_6" | "S3_8" => vec![single("e1", &[P1, P1], true)],
        "B1s+S1_1" | "B2s+S1_1" => vec![single("e1", &[P0], true)],
        "S3_9" | "S3_11" => vec![single("e1", &[PHalf], true)],
        "S3_10" | "S3_12" => vec![single("e1", &[P1], true)],
        "S1_2+U2s" => vec![single("e1", &[PHalf], true)],
        "S2_2+U2s" => vec![single("e1", &[P1], true)],
        "U1s+U2s+S1_1" => vec![single("e1", &[P0], true)],
        "U1s+U1s+S1_1" => vec![refined(&[(0, 0)], true)],
        "S1_2+U1s" => vec![refined(&[(0, 1)], true)],
        "S2_2+U1s" => vec![refined(&[(1, 1)], true)],
        "S3_13" => vec![refined(&[(1, 2)], true)],
        _ => Vec::new(),
    }
}

fn split_name(name: &str) -> Vec<String> {
    name.replace('⊕', "+")
        .split('+')
        .map(|s| s.trim().to_string())
        .collect()
}

fn canonical(name: &str) -> String {
    match name.trim() {
        "K3" => "S3_7".to_string(),
        other => other.to_string(),
    }
}

fn indecomposable(name: &str) -> Result<CatalogEntry> {
    let name = canonical(name);
    let (base, graded_trivially) = match name.strip_suffix('s') {
        Some(b) if UNGRADED.contains(&b) => (b.to_string(), true),
        _ => (name.clone(), false),
    };
    let d = definition(&base).ok_or_else(|| Error::UnknownEntry(name.clone()))?;
    let labels = d
        .labels
        .map(|l| l.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    let algebra = SuperAlgebra::from_table(d.n, d.m, Field::Rational, labels, d.rows)
        .expect("catalog tables are well formed");
    let mut tags = BTreeSet::new();
    if d.associative {
        tags.insert(Tag::Associative);
    }
    if d.unital {
        tags.insert(Tag::Unital);
    }
    if d.simple {
        tags.insert(Tag::Simple);
    }
    if d.m == 0 {
        tags.insert(Tag::TrivialGrading);
    }
    let underlying = if graded_trivially {
        Some(base.clone())
    } else {
        d.underlying.map(str::to_string)
    };
    Ok(CatalogEntry {
        peirce: peirce_notes(&name),
        summands: vec![name.clone()],
        name,
        algebra,
        annotations: tags,
        underlying_algebra: underlying,
        source: d.source.to_string(),
    })
}

/// Looks up an entry by name. `+`-joined names of known summands are
/// composed by direct sum, in the order given.
pub fn get(name: &str) -> Result<CatalogEntry> {
    let parts = split_name(name);
    if parts.iter().any(String::is_empty) {
        return Err(Error::UnknownEntry(name.to_string()));
    }
    if parts.len() == 1 {
        return indecomposable(&parts[0]);
    }
    let entries = parts
        .iter()
        .map(|p| indecomposable(p))
        .collect::<Result<Vec<_>>>()?;
    let mut algebra = SuperAlgebra::empty(Field::Rational);
    for e in &entries {
        algebra = algebra.direct_sum(&e.algebra)?;
    }
    let all = |t: Tag| entries.iter().all(|e| e.has(t));
    let mut tags = BTreeSet::from([Tag::Decomposable]);
    for t in [Tag::Associative, Tag::Unital, Tag::TrivialGrading] {
        if all(t) {
            tags.insert(t);
        }
    }
    let under: Option<Vec<String>> = entries
        .iter()
        .map(|e| {
            e.underlying_algebra
                .clone()
                .or_else(|| (e.name == "S1_1").then(|| "U2".to_string()))
        })
        .collect();
    let joined = entries
        .iter()
        .map(|e| e.name.as_str())
        .collect::<Vec<_>>()
        .join("+");
    Ok(CatalogEntry {
        peirce: peirce_notes(&joined),
        name: joined,
        algebra,
        annotations: tags,
        underlying_algebra: under.map(|u| u.join("+")),
        source: "direct sum of catalog entries".into(),
        summands: parts,
    })
}

/// Names of the complete classification list in dimension `d`.
pub fn names_of_dimension(d: usize) -> Result<&'static [&'static str]> {
    match d {
        1 => Ok(DIM1),
        2 => Ok(DIM2),
        3 => Ok(DIM3),
        _ => Err(Error::UnknownEntry(format!("no classification list for dimension {d}"))),
    }
}

pub fn all_of_dimension(d: usize) -> Result<Vec<CatalogEntry>> {
    names_of_dimension(d)?.iter().map(|n| get(n)).collect()
}

/// The ungraded Jordan algebras as entries with trivial grading.
pub fn jordan_algebras() -> Vec<CatalogEntry> {
    UNGRADED.iter().map(|n| get(n).expect("known")).collect()
}

pub fn kac10() -> CatalogEntry {
    get("KAC10").expect("known")
}

pub fn shestakov7() -> CatalogEntry {
    get("SHESTAKOV7").expect("known")
}

/// Every name accepted by [`get`] without composing new sums.
pub fn all_names() -> Vec<String> {
    let mut v: Vec<String> = UNGRADED.iter().map(|s| s.to_string()).collect();
    for d in 1..=3 {
        v.extend(names_of_dimension(d).unwrap().iter().map(|s| s.to_string()));
    }
    v.push("K3".into());
    v.push("KAC10".into());
    v.push("SHESTAKOV7".into());
    v
}
