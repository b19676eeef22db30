//! Noncommutative polynomials over a rewrite system, an optional matrix
//! unit layer, the superized plus product and embedding certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{IdentityReport, SuperAlgebra, Violation};
use crate::error::{Error, Result};
use crate::field::{Field, Rational, Scalar};
use crate::linalg;

pub mod witness;

pub type Word = Vec<u16>;

/// A word over the generators, optionally followed by a matrix unit.
/// Written `w·e_ij`: the coefficient word sits to the left of the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub word: Word,
    pub unit: Option<(u8, u8)>,
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.word
            .len()
            .cmp(&o.word.len())
            .then_with(|| self.word.cmp(&o.word))
            .then_with(|| self.unit.cmp(&o.unit))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NcPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn scalar(c: Rational) -> Self {
        NcPoly::monomial(Monomial { word: vec![], unit: None }, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &NcPoly) -> NcPoly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> NcPoly {
        if s.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    names: Vec<String>,
    parities: Vec<u8>,
    rules: HashMap<(u16, u16), NcPoly>,
    /// Even and odd row counts of the matrix layer.
    matrix: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub generators: Vec<GeneratorDecl>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorDecl {
    pub name: String,
    pub parity: u8,
}

fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl RewriteSystem {
    /// Validates termination, parity homogeneity and local confluence.
    pub fn new(
        generators: &[(&str, u8)],
        rules: Vec<((u16, u16), NcPoly)>,
        matrix: Option<(usize, usize)>,
    ) -> Result<Self> {
        let mut sys = RewriteSystem {
            names: generators.iter().map(|(n, _)| n.to_string()).collect(),
            parities: generators.iter().map(|(_, p)| p % 2).collect(),
            rules: HashMap::new(),
            matrix,
        };
        if let Some((p, q)) = matrix {
            if p + q == 0 || p + q > 9 {
                return Err(Error::Rewrite("matrix layer needs 1 to 9 rows".into()));
            }
        }
        for (i, n) in sys.names.iter().enumerate() {
            if sys.names[..i].contains(n) || n.is_empty() {
                return Err(Error::Rewrite(format!("bad or repeated generator {n:?}")));
            }
        }
        let g = sys.names.len() as u16;
        for ((a, b), rhs) in rules {
            if a >= g || b >= g {
                return Err(Error::Rewrite("rule mentions an unknown generator".into()));
            }
            let lhs = Monomial { word: vec![a, b], unit: None };
            let lp = sys.word_parity(&lhs.word);
            for (m, _) in rhs.terms() {
                if m.unit.is_some() {
                    return Err(Error::Rewrite("rule right sides cannot carry matrix units".into()));
                }
                if *m >= lhs {
                    return Err(Error::Rewrite(format!(
                        "rule for {} does not decrease in the term order",
                        sys.render_word(&lhs.word)
                    )));
                }
                if sys.word_parity(&m.word) != lp {
                    return Err(Error::Rewrite(format!(
                        "rule for {} is not parity homogeneous",
                        sys.render_word(&lhs.word)
                    )));
                }
            }
            if sys.rules.insert((a, b), rhs).is_some() {
                return Err(Error::Rewrite("two rules share a left side".into()));
            }
        }
        sys.check_confluence()?;
        Ok(sys)
    }

    fn check_confluence(&self) -> Result<()> {
        let g = self.names.len() as u16;
        for a in 0..g {
            for b in 0..g {
                let Some(r1) = self.rules.get(&(a, b)) else { continue };
                for c in 0..g {
                    let Some(r2) = self.rules.get(&(b, c)) else { continue };
                    let left = self.normal_form(&self.concat_right(r1, c));
                    let right = self.normal_form(&self.concat_left(a, r2));
                    if left != right {
                        return Err(Error::Rewrite(format!(
                            "overlap {} is not confluent",
                            self.render_word(&[a, b, c])
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn concat_right(&self, p: &NcPoly, g: u16) -> NcPoly {
        let mut r = NcPoly::zero();
        for (m, c) in p.terms() {
            let mut w = m.word.clone();
            w.push(g);
            r.add_term(Monomial { word: w, unit: None }, c.clone());
        }
        r
    }

    fn concat_left(&self, g: u16, p: &NcPoly) -> NcPoly {
        let mut r = NcPoly::zero();
        for (m, c) in p.terms() {
            let mut w = vec![g];
            w.extend(&m.word);
            r.add_term(Monomial { word: w, unit: None }, c.clone());
        }
        r
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, u8)> {
        self.names.iter().map(String::as_str).zip(self.parities.iter().copied())
    }

    pub fn matrix(&self) -> Option<(usize, usize)> {
        self.matrix
    }

    /// Same relations with a matrix layer of `p` even and `q` odd rows.
    pub fn with_matrix(&self, p: usize, q: usize) -> Result<Self> {
        let rules = self.rules.iter().map(|(k, v)| (*k, v.clone())).collect();
        let gens: Vec<(&str, u8)> = self.generators().collect();
        RewriteSystem::new(&gens, rules, Some((p, q)))
    }

    /// Graded tensor product: generators of `other` follow those of `self`
    /// and pass them with the Koszul sign.
    pub fn tensor(&self, other: &RewriteSystem) -> Result<Self> {
        if self.matrix.is_some() && other.matrix.is_some() {
            return Err(Error::Rewrite("only one factor may carry matrix units".into()));
        }
        let off = self.names.len() as u16;
        let mut gens: Vec<(String, u8)> = self.generators().map(|(n, p)| (n.to_string(), p)).collect();
        gens.extend(other.generators().map(|(n, p)| (n.to_string(), p)));
        let mut rules: Vec<((u16, u16), NcPoly)> =
            self.rules.iter().map(|(k, v)| (*k, v.clone())).collect();
        for ((a, b), rhs) in &other.rules {
            let mut shifted = NcPoly::zero();
            for (m, c) in rhs.terms() {
                let word = m.word.iter().map(|x| x + off).collect();
                shifted.add_term(Monomial { word, unit: None }, c.clone());
            }
            rules.push(((a + off, b + off), shifted));
        }
        for (i, &pi) in self.parities.iter().enumerate() {
            for (j, &pj) in other.parities.iter().enumerate() {
                let sign = if pi * pj % 2 == 1 { -1 } else { 1 };
                rules.push((
                    (off + j as u16, i as u16),
                    NcPoly::monomial(
                        Monomial { word: vec![i as u16, off + j as u16], unit: None },
                        rational(sign),
                    ),
                ));
            }
        }
        let names: Vec<(&str, u8)> = gens.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        RewriteSystem::new(&names, rules, self.matrix.or(other.matrix))
    }

    pub fn word_parity(&self, w: &[u16]) -> u8 {
        w.iter().map(|&g| self.parities[g as usize]).sum::<u8>() % 2
    }

    fn row_parity(&self, i: u8) -> u8 {
        match self.matrix {
            Some((p, _)) if (i as usize) >= p => 1,
            _ => 0,
        }
    }

    pub fn unit_parity(&self, u: Option<(u8, u8)>) -> u8 {
        u.map_or(0, |(i, j)| (self.row_parity(i) + self.row_parity(j)) % 2)
    }

    pub fn monomial_parity(&self, m: &Monomial) -> u8 {
        (self.word_parity(&m.word) + self.unit_parity(m.unit)) % 2
    }

    /// `Ok(None)` for zero; an error for mixed parity.
    pub fn parity(&self, p: &NcPoly) -> Result<Option<u8>> {
        let set: BTreeSet<u8> = p.terms().map(|(m, _)| self.monomial_parity(m)).collect();
        match set.len() {
            0 => Ok(None),
            1 => Ok(set.into_iter().next()),
            _ => Err(Error::Parity(format!("{} is not homogeneous", self.render(p)))),
        }
    }

    fn rows(&self) -> usize {
        self.matrix.map_or(0, |(p, q)| p + q)
    }

    /// Replaces unit-free monomials by their product with the identity
    /// matrix when the system carries a matrix layer.
    fn saturate(&self, p: &NcPoly) -> NcPoly {
        if self.matrix.is_none() {
            return p.clone();
        }
        let mut r = NcPoly::zero();
        for (m, c) in p.terms() {
            match m.unit {
                Some(_) => r.add_term(m.clone(), c.clone()),
                None => {
                    for i in 0..self.rows() as u8 {
                        r.add_term(Monomial { word: m.word.clone(), unit: Some((i, i)) }, c.clone());
                    }
                }
            }
        }
        r
    }

    pub fn normal_form(&self, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        let mut stack: Vec<(Monomial, Rational)> =
            self.saturate(p).terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = stack.pop() {
            let hit = m
                .word
                .windows(2)
                .position(|w| self.rules.contains_key(&(w[0], w[1])));
            match hit {
                None => out.add_term(m, c),
                Some(i) => {
                    let rhs = &self.rules[&(m.word[i], m.word[i + 1])];
                    for (r, rc) in rhs.terms() {
                        let mut word = m.word[..i].to_vec();
                        word.extend(&r.word);
                        word.extend(&m.word[i + 2..]);
                        stack.push((Monomial { word, unit: m.unit }, &c * rc));
                    }
                }
            }
        }
        out
    }

    fn mul_raw(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        let mut r = NcPoly::zero();
        for (ma, ca) in a.terms() {
            let ua = self.unit_parity(ma.unit);
            for (mb, cb) in b.terms() {
                let unit = match (ma.unit, mb.unit) {
                    (None, u) | (u, None) => u,
                    (Some((i, j)), Some((k, l))) => {
                        if j != k {
                            continue;
                        }
                        Some((i, l))
                    }
                };
                let sign = ua * self.word_parity(&mb.word) % 2 == 1;
                let mut word = ma.word.clone();
                word.extend(&mb.word);
                let c = ca * cb;
                r.add_term(Monomial { word, unit }, if sign { -c } else { c });
            }
        }
        r
    }

    pub fn mul(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        self.normal_form(&self.mul_raw(&self.saturate(a), &self.saturate(b)))
    }

    /// `½(ab + (−1)^{|a||b|} ba)` in normal form.
    pub fn super_jordan_product(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        let pa = self.parity(a)?.unwrap_or(0);
        let pb = self.parity(b)?.unwrap_or(0);
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        let sum = if pa * pb == 1 { ab.sub(&ba) } else { ab.add(&ba) };
        Ok(sum.scale(&Rational::new(1.into(), 2.into())))
    }

    /// Irreducible monomials of word degree at most `degree` and the given
    /// parity, in term order.
    pub fn monomials(&self, degree: usize, parity: u8) -> Vec<Monomial> {
        let g = self.names.len() as u16;
        let mut words: Vec<Word> = vec![vec![]];
        let mut frontier: Vec<Word> = vec![vec![]];
        for _ in 0..degree {
            let mut next = Vec::new();
            for w in &frontier {
                for x in 0..g {
                    if let Some(&last) = w.last() {
                        if self.rules.contains_key(&(last, x)) {
                            continue;
                        }
                    }
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let units: Vec<Option<(u8, u8)>> = if self.matrix.is_some() {
            let n = self.rows() as u8;
            (0..n).flat_map(|i| (0..n).map(move |j| Some((i, j)))).collect()
        } else {
            vec![None]
        };
        let mut out: Vec<Monomial> = words
            .into_iter()
            .flat_map(|w| units.iter().map(move |&u| Monomial { word: w.clone(), unit: u }))
            .filter(|m| self.monomial_parity(m) == parity)
            .collect();
        out.sort();
        out
    }

    pub fn render_word(&self, w: &[u16]) -> String {
        w.iter().map(|&g| self.names[g as usize].as_str()).collect::<Vec<_>>().join("*")
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = m.word.iter().map(|&g| self.names[g as usize].clone()).collect();
        if let Some((i, j)) = m.unit {
            parts.push(format!("e{}{}", i + 1, j + 1));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn render(&self, p: &NcPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (m, c)) in p.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = self.render_monomial(m);
            if abs.is_one() {
                s.push_str(&body);
            } else if body == "1" {
                let _ = write!(s, "{abs}");
            } else {
                let _ = write!(s, "{abs}*{body}");
            }
        }
        s
    }

    /// Parses a polynomial such as `2*e12 + 2*xi*e21` without rewriting.
    pub fn parse(&self, text: &str) -> Result<NcPoly> {
        let mut p = NcParser {
            sys: self,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            text,
        };
        let r = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }

    pub fn from_file(file: &SystemFile) -> Result<Self> {
        let gens: Vec<(&str, u8)> = file
            .generators
            .iter()
            .map(|g| (g.name.as_str(), g.parity))
            .collect();
        let bare = RewriteSystem::new(&gens, vec![], None)?;
        let mut rules = Vec::new();
        for rel in &file.relations {
            let (lhs, rhs) = rel
                .split_once("->")
                .or_else(|| rel.split_once('='))
                .ok_or_else(|| Error::Rewrite(format!("relation {rel:?} has no '->'")))?;
            let l = bare.parse(lhs)?;
            let mut terms = l.terms();
            let (m, c) = match (terms.next(), terms.next()) {
                (Some(t), None) => t,
                _ => return Err(Error::Rewrite(format!("left side of {rel:?} is not a word"))),
            };
            if m.word.len() != 2 || !c.is_one() {
                return Err(Error::Rewrite(format!(
                    "left side of {rel:?} must be a two-letter word"
                )));
            }
            rules.push(((m.word[0], m.word[1]), bare.parse(rhs)?));
        }
        RewriteSystem::new(&gens, rules, file.matrix)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text).map_err(|e| Error::Format {
            path: "<rewrite system>".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        RewriteSystem::from_file(&file)
    }

    pub fn to_file(&self) -> SystemFile {
        let mut keys: Vec<&(u16, u16)> = self.rules.keys().collect();
        keys.sort();
        SystemFile {
            generators: self
                .generators()
                .map(|(n, p)| GeneratorDecl { name: n.into(), parity: p })
                .collect(),
            relations: keys
                .into_iter()
                .map(|k| format!("{} -> {}", self.render_word(&[k.0, k.1]), self.render(&self.rules[k])))
                .collect(),
            matrix: self.matrix,
        }
    }
}

struct NcParser<'a> {
    sys: &'a RewriteSystem,
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl NcParser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::PolyParse {
            input: self.text.to_string(),
            reason: format!("{reason} at {}", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = NcPoly::zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') | Some('−') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        while self.peek().is_some_and(|c| c == '*' || c == '·' || c == '(') || self.at_atom() {
            if matches!(self.peek(), Some('*') | Some('·')) {
                self.pos += 1;
            }
            let f = self.factor()?;
            acc = self.sys.mul_raw(&acc, &f);
        }
        Ok(acc)
    }

    fn at_atom(&self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit()) || self.atom_at().is_some()
    }

    fn atom_at(&self) -> Option<(Monomial, usize)> {
        let rest: String = self.chars[self.pos..].iter().collect();
        let gen = self
            .sys
            .names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.chars().count())
            .map(|(i, n)| (Monomial { word: vec![i as u16], unit: None }, n.chars().count()));
        let unit = self.sys.matrix.and_then(|_| {
            let c: Vec<char> = rest.chars().take(3).collect();
            if c.len() == 3 && c[0] == 'e' && c[1].is_ascii_digit() && c[2].is_ascii_digit() {
                let (i, j) = (c[1] as u8 - b'1', c[2] as u8 - b'1');
                let n = self.sys.rows() as u8;
                (i < n && j < n).then_some((Monomial { word: vec![], unit: Some((i, j)) }, 3))
            } else {
                None
            }
        });
        match (gen, unit) {
            (Some(g), Some(u)) => Some(if g.1 > u.1 { g } else { u }),
            (g, u) => g.or(u),
        }
    }

    fn factor(&mut self) -> Result<NcPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let r: Rational = lit.parse().map_err(|_| self.err("bad number"))?;
                Ok(NcPoly::scalar(r))
            }
            _ => match self.atom_at() {
                Some((m, len)) => {
                    self.pos += len;
                    Ok(NcPoly::monomial(m, Rational::one()))
                }
                None => Err(self.err("expected a generator, matrix unit or number")),
            },
        }
    }
}

/// Built-in systems.
pub mod systems {
    use super::*;

    fn word(w: &[u16]) -> Monomial {
        Monomial { word: w.to_vec(), unit: None }
    }

    /// Weyl algebra W1 on even `eta < xi` with `xi·eta = eta·xi + 1`.
    pub fn weyl() -> RewriteSystem {
        let rhs = NcPoly::monomial(word(&[0, 1]), rational(1)).add(&NcPoly::scalar(rational(1)));
        RewriteSystem::new(&[("eta", 0), ("xi", 0)], vec![((1, 0), rhs)], None).expect("weyl")
    }

    /// Clifford superalgebra on odd `e1..en` with `ei² = 1`, `ej·ei = −ei·ej`.
    pub fn clifford(n: usize) -> RewriteSystem {
        let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let gens: Vec<(&str, u8)> = names.iter().map(|s| (s.as_str(), 1)).collect();
        let mut rules = Vec::new();
        for i in 0..n as u16 {
            rules.push(((i, i), NcPoly::scalar(rational(1))));
            for j in i + 1..n as u16 {
                rules.push(((j, i), NcPoly::monomial(word(&[i, j]), rational(-1))));
            }
        }
        RewriteSystem::new(&gens, rules, None).expect("clifford")
    }

    /// Odd `x, y` with the supercommutator `xy + yx = 1` and `x² = y² = 0`;
    /// a four-dimensional carrier.
    pub fn odd_weyl_supercommutator() -> RewriteSystem {
        let rhs = NcPoly::monomial(word(&[0, 1]), rational(-1)).add(&NcPoly::scalar(rational(1)));
        RewriteSystem::new(
            &[("x", 1), ("y", 1)],
            vec![((1, 0), rhs), ((0, 0), NcPoly::zero()), ((1, 1), NcPoly::zero())],
            None,
        )
        .expect("odd weyl")
    }

    /// Odd `x, y` with the commutator `xy − yx = 1`.
    pub fn odd_weyl() -> RewriteSystem {
        let rhs = NcPoly::monomial(word(&[0, 1]), rational(1)).sub(&NcPoly::scalar(rational(1)));
        RewriteSystem::new(&[("x", 1), ("y", 1)], vec![((1, 0), rhs)], None).expect("odd weyl")
    }

    /// Scalar matrices with `p` even and `q` odd rows.
    pub fn matrices(p: usize, q: usize) -> RewriteSystem {
        RewriteSystem::new(&[], vec![], Some((p, q))).expect("matrix layer")
    }

    pub fn by_name(name: &str) -> Result<RewriteSystem> {
        let lower = name.to_ascii_lowercase();
        if let Some(n) = lower.strip_prefix("clifford") {
            let n = n.parse().map_err(|_| Error::Rewrite(format!("bad Clifford size in {name}")))?;
            return Ok(clifford(n));
        }
        match lower.as_str() {
            "weyl" => Ok(weyl()),
            "m11weyl" => weyl().with_matrix(1, 1),
            "oddweyl" => Ok(odd_weyl()),
            "oddweylsupercommutator" => Ok(odd_weyl_supercommutator()),
            "m12" => Ok(matrices(1, 2)),
            _ => Err(Error::Rewrite(format!("unknown built-in system {name:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub holds: bool,
    /// Basis pairs `(i, j)` with `φ(bᵢbⱼ) − φ(bᵢ)⊙φ(bⱼ)` nonzero.
    pub violations: Vec<(usize, usize, NcPoly)>,
    pub injective: bool,
}

impl EmbeddingReport {
    pub fn render(&self, j: &SuperAlgebra, sys: &RewriteSystem) -> String {
        let mut s = String::new();
        for (a, b, d) in &self.violations {
            let _ = writeln!(s, "  ({}, {}): defect {}", j.label(*a), j.label(*b), sys.render(d));
        }
        if !self.injective {
            s.push_str("  images are linearly dependent\n");
        }
        s
    }
}

fn image_of(j: &SuperAlgebra, coords: &[Scalar], images: &[NcPoly]) -> NcPoly {
    let mut r = NcPoly::zero();
    for (c, im) in coords.iter().zip(images) {
        if let Some(q) = c.as_rational() {
            r = r.add(&im.scale(q));
        }
    }
    let _ = j;
    r
}

fn independent(images: &[NcPoly]) -> bool {
    let monos: BTreeSet<&Monomial> = images.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
    let monos: Vec<&Monomial> = monos.into_iter().collect();
    let rows: Vec<Vec<Scalar>> = images
        .iter()
        .map(|p| monos.iter().map(|m| Scalar::Rational(p.coefficient(m))).collect())
        .collect();
    linalg::rank(&rows) == images.len()
}

/// Checks `φ(x·y) = φ(x)⊙φ(y)` on basis pairs and injectivity.
pub fn verify_special_embedding(
    j: &SuperAlgebra,
    images: &[NcPoly],
    sys: &RewriteSystem,
) -> Result<EmbeddingReport> {
    if *j.field() != Field::Rational {
        return Err(Error::InvalidField("embeddings are checked over the rationals".into()));
    }
    if images.len() != j.dim() {
        return Err(Error::InvalidMap(format!(
            "{} images for a {}-dimensional algebra",
            images.len(),
            j.dim()
        )));
    }
    let images: Vec<NcPoly> = images.iter().map(|p| sys.normal_form(p)).collect();
    for (i, im) in images.iter().enumerate() {
        if let Some(p) = sys.parity(im)? {
            if p != j.parity(i) {
                return Err(Error::Parity(format!(
                    "image of {} has parity {p}",
                    j.label(i)
                )));
            }
        }
    }
    let mut violations = Vec::new();
    for a in 0..j.dim() {
        for b in 0..j.dim() {
            let lhs = image_of(j, &j.mul_coords(&j.basis(a).coords, &j.basis(b).coords), &images);
            let rhs = sys.super_jordan_product(&images[a], &images[b])?;
            let d = lhs.sub(&rhs);
            if !d.is_zero() {
                violations.push((a, b, d));
            }
        }
    }
    let injective = independent(&images);
    Ok(EmbeddingReport {
        holds: violations.is_empty() && injective,
        violations,
        injective,
    })
}

#[derive(Clone, Debug)]
pub struct EnvelopeReport {
    pub associativity: IdentityReport,
    pub homomorphism: IdentityReport,
    pub injective: bool,
}

impl EnvelopeReport {
    pub fn holds(&self) -> bool {
        self.associativity.holds && self.homomorphism.holds && self.injective
    }
}

/// Checks that `a` is associative and that `inclusion` (images of the basis
/// of `j`, as elements of `a`) is a homomorphism `j → a⁽⁺⁾`.
pub fn verify_associative_envelope_table(
    a: &SuperAlgebra,
    j: &SuperAlgebra,
    inclusion: &[&str],
) -> Result<EnvelopeReport> {
    if inclusion.len() != j.dim() {
        return Err(Error::InvalidMap("one image per basis vector required".into()));
    }
    let images = inclusion
        .iter()
        .map(|t| a.parse_element(t))
        .collect::<Result<Vec<_>>>()?;
    for (i, im) in images.iter().enumerate() {
        match a.element_parity(im) {
            Some(p) if p == j.parity(i) => {}
            None if im.coords.iter().all(Scalar::is_zero) => {}
            _ => return Err(Error::Parity(format!("image of {} has the wrong parity", j.label(i)))),
        }
    }
    let f = a.field();
    let half = a.half();
    let mut hom = IdentityReport::ok();
    for x in 0..j.dim() {
        for y in 0..j.dim() {
            let xy = j.mul_coords(&j.basis(x).coords, &j.basis(y).coords);
            let mut lhs = vec![f.zero(); a.dim()];
            for (c, im) in xy.iter().zip(&images) {
                for (l, v) in lhs.iter_mut().zip(&im.coords) {
                    *l += &(c * v);
                }
            }
            let ab = a.mul_coords(&images[x].coords, &images[y].coords);
            let ba = a.mul_coords(&images[y].coords, &images[x].coords);
            let odd = j.parity(x) * j.parity(y) == 1;
            let defect: Vec<Scalar> = (0..a.dim())
                .map(|k| {
                    let s = if odd { &ab[k] - &ba[k] } else { &ab[k] + &ba[k] };
                    &lhs[k] - &(&half * &s)
                })
                .collect();
            if defect.iter().any(|c| !c.is_zero()) {
                hom.push(Violation {
                    indices: vec![x, y],
                    defect: a.element(defect)?,
                });
            }
        }
    }
    let rows: Vec<Vec<Scalar>> = images.iter().map(|e| e.coords.clone()).collect();
    Ok(EnvelopeReport {
        associativity: a.associator_report(),
        homomorphism: hom,
        injective: linalg::rank(&rows) == j.dim(),
    })
}

#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub degree: usize,
    pub coefficients: Vec<Rational>,
    /// Largest number of monomials in a brute-forced image.
    pub max_terms: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        SearchBounds {
            degree: 2,
            coefficients: vec![r(0, 1), r(1, 1), r(-1, 1), r(2, 1), r(-2, 1), r(1, 2), r(-1, 2)],
            max_terms: 2,
        }
    }
}

fn candidates(monos: &[Monomial], coeffs: &[Rational], max_terms: usize) -> Vec<NcPoly> {
    let nonzero: Vec<&Rational> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    let mut out = Vec::new();
    fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    for k in 1..=max_terms.min(monos.len()) {
        let mut sets = Vec::new();
        subsets(monos.len(), k, 0, &mut Vec::new(), &mut sets);
        for set in sets {
            let total = nonzero.len().pow(k as u32);
            for mut idx in 0..total {
                let mut p = NcPoly::zero();
                for &m in &set {
                    p.add_term(monos[m].clone(), nonzero[idx % nonzero.len()].clone());
                    idx /= nonzero.len();
                }
                out.push(p);
            }
        }
    }
    out
}

struct Searcher<'a> {
    j: &'a SuperAlgebra,
    sys: &'a RewriteSystem,
    cands: [Vec<NcPoly>; 2],
    odd_monos: Vec<Monomial>,
    /// pairs whose constraint becomes checkable once basis `k` is placed
    checks: Vec<Vec<(usize, usize)>>,
}

impl Searcher<'_> {
    fn pair_ok(&self, imgs: &[NcPoly], i: usize, k: usize) -> bool {
        let lhs = image_of(self.j, &self.j.mul_coords(&self.j.basis(i).coords, &self.j.basis(k).coords), imgs);
        match self.sys.super_jordan_product(&imgs[i], &imgs[k]) {
            Ok(r) => r == lhs,
            Err(_) => false,
        }
    }

    fn consistent(&self, imgs: &[NcPoly], k: usize) -> bool {
        self.checks[k].iter().all(|&(a, b)| self.pair_ok(imgs, a, b))
    }

    /// Solves exactly for the last, odd image: every constraint involving
    /// it is linear because odd self-products vanish under ⊙.
    fn solve_last(&self, imgs: &[NcPoly]) -> Option<NcPoly> {
        let j = self.j;
        let last = j.dim() - 1;
        let cols = &self.odd_monos;
        // constraints: for each pair touching `last`, Σ t_s F_s = G
        let mut lin: Vec<(Vec<NcPoly>, NcPoly)> = Vec::new();
        let unit = |m: &Monomial| NcPoly::monomial(m.clone(), Rational::one());
        for a in 0..=last {
            for b in 0..=last {
                if a == last && b == last {
                    continue;
                }
                let prod = j.mul_coords(&j.basis(a).coords, &j.basis(b).coords);
                let c_last = prod[last].as_rational().cloned().unwrap_or_default();
                let touches = a == last || b == last || !c_last.is_zero();
                if !touches {
                    continue;
                }
                let mut known = prod.clone();
                known[last] = j.field().zero();
                let g = image_of(j, &known, imgs);
                let mut f = Vec::with_capacity(cols.len());
                for m in cols {
                    let u = unit(m);
                    let col = if a == last || b == last {
                        let p = if a == last {
                            self.sys.super_jordan_product(&u, &imgs[b]).ok()?
                        } else {
                            self.sys.super_jordan_product(&imgs[a], &u).ok()?
                        };
                        p.sub(&u.scale(&c_last))
                    } else {
                        // only the left side mentions the unknown
                        u.scale(&c_last)
                    };
                    f.push(col);
                }
                let rhs = if a == last || b == last {
                    g
                } else {
                    self.sys.super_jordan_product(&imgs[a], &imgs[b]).ok()?.sub(&g)
                };
                lin.push((f, rhs));
            }
        }
        // rows indexed by (constraint, monomial)
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (f, g) in &lin {
            let monos: BTreeSet<&Monomial> = f
                .iter()
                .flat_map(|p| p.terms().map(|(m, _)| m))
                .chain(g.terms().map(|(m, _)| m))
                .collect();
            for m in monos {
                rows.push(f.iter().map(|p| Scalar::Rational(p.coefficient(m))).collect::<Vec<_>>());
                rhs.push(Scalar::Rational(g.coefficient(m)));
            }
        }
        let x = if rows.is_empty() {
            vec![Scalar::Rational(Rational::zero()); cols.len()]
        } else {
            linalg::solve(&Field::Rational, &rows, &rhs)?
        };
        let mut y = NcPoly::zero();
        for (m, t) in cols.iter().zip(&x) {
            if let Some(q) = t.as_rational() {
                y.add_term(m.clone(), q.clone());
            }
        }
        Some(y)
    }

    fn dfs(&self, imgs: &mut Vec<NcPoly>) -> bool {
        let k = imgs.len();
        let d = self.j.dim();
        if k == d {
            return verify_special_embedding(self.j, imgs, self.sys).is_ok_and(|r| r.holds);
        }
        if k == d - 1 && self.j.parity(k) == 1 {
            return match self.solve_last(imgs) {
                Some(y) => {
                    imgs.push(y);
                    if self.dfs(imgs) {
                        return true;
                    }
                    imgs.pop();
                    false
                }
                None => false,
            };
        }
        for c in &self.cands[self.j.parity(k) as usize] {
            imgs.push(c.clone());
            if self.consistent(imgs, k) && self.dfs(imgs) {
                return true;
            }
            imgs.pop();
        }
        false
    }
}

/// Bounded search for an embedding `J → R⁽⁺⁾`. Images of all basis vectors
/// but an odd last one are enumerated in canonical order with at most
/// `max_terms` monomials; the last odd image is solved for exactly over
/// the whole degree-bounded span.
pub fn search_embedding(
    j: &SuperAlgebra,
    sys: &RewriteSystem,
    bounds: &SearchBounds,
) -> Result<Option<Vec<NcPoly>>> {
    if j.dim() > 3 {
        return Err(Error::TooLarge("embedding search is limited to dimension 3".into()));
    }
    if *j.field() != Field::Rational {
        return Err(Error::InvalidField("embeddings are searched over the rationals".into()));
    }
    let even = sys.monomials(bounds.degree, 0);
    let odd = sys.monomials(bounds.degree, 1);
    let d = j.dim();
    let mut checks = vec![Vec::new(); d];
    for a in 0..d {
        for b in 0..d {
            let prod = j.basis_product(a, b);
            let top = prod.iter().map(|(k, _)| *k).fold(a.max(b), usize::max);
            checks[top].push((a, b));
        }
    }
    let s = Searcher {
        j,
        sys,
        cands: [
            candidates(&even, &bounds.coefficients, bounds.max_terms),
            candidates(&odd, &bounds.coefficients, bounds.max_terms),
        ],
        odd_monos: odd,
        checks,
    };
    if d == 1 && j.parity(0) == 1 {
        let mut imgs = Vec::new();
        return Ok(s.dfs(&mut imgs).then_some(imgs));
    }
    let first = &s.cands[j.parity(0) as usize];
    Ok(first.par_iter().find_map_first(|c| {
        let mut imgs = vec![c.clone()];
        (s.consistent(&imgs, 0) && s.dfs(&mut imgs)).then_some(imgs)
    }))
}

#[cfg(test)]
mod tests {
    use super::systems::*;
    use super::*;

    #[test]
    fn weyl_commutator() {
        let w = weyl();
        let p = w.parse("xi*eta - eta*xi").unwrap();
        assert_eq!(w.render(&w.normal_form(&p)), "1");
        assert_eq!(w.render(&w.normal_form(&w.parse("xi*eta").unwrap())), "1 + eta*xi");
        let empty = NcPoly::scalar(Rational::one());
        assert_eq!(w.normal_form(&empty), empty);
    }

    #[test]
    fn clifford_anticommutes() {
        let c = clifford(2);
        let p = c.normal_form(&c.parse("e2*e1").unwrap());
        assert_eq!(c.render(&p), "-e1*e2");
        assert_eq!(c.render(&c.normal_form(&c.parse("e1*e2*e1").unwrap())), "-e2");
    }

    #[test]
    fn k3_plus_product() {
        let m = weyl().with_matrix(1, 1).unwrap();
        let a = m.parse("2*e12 + 2*xi*e21").unwrap();
        let b = m.parse("eta*e12 + xi*eta*e21").unwrap();
        let p = m.super_jordan_product(&a, &b).unwrap();
        assert_eq!(m.render(&p), "e11");
        let e = m.parse("e11").unwrap();
        assert_eq!(m.super_jordan_product(&e, &e).unwrap(), e);
        let ba = m.super_jordan_product(&b, &a).unwrap();
        assert_eq!(ba, p.scale(&-Rational::one()));
    }

    #[test]
    fn mixed_parity_rejected() {
        let m = matrices(1, 1);
        let mixed = m.parse("e11 + e12").unwrap();
        assert!(m.super_jordan_product(&mixed, &mixed).is_err());
    }

    #[test]
    fn bad_systems_rejected() {
        // x·x → x·x·x grows
        let grow = NcPoly::monomial(Monomial { word: vec![0, 0, 0], unit: None }, Rational::one());
        assert!(RewriteSystem::new(&[("x", 0)], vec![((0, 0), grow)], None).is_err());
        // parity change
        let one = NcPoly::scalar(Rational::one());
        assert!(RewriteSystem::new(&[("a", 0), ("b", 1)], vec![((1, 0), one)], None).is_err());
    }

    #[test]
    fn non_confluent_rejected() {
        // b·a → a, a·a → b: overlap b·a·a
        let r1 = NcPoly::monomial(Monomial { word: vec![0], unit: None }, Rational::one());
        let r2 = NcPoly::monomial(Monomial { word: vec![1], unit: None }, Rational::one());
        let res = RewriteSystem::new(&[("a", 0), ("b", 0)], vec![((1, 0), r1), ((0, 0), r2)], None);
        assert!(res.is_err());
    }

    #[test]
    fn odd_weyl_carrier() {
        let w = odd_weyl_supercommutator();
        assert_eq!(w.monomials(4, 0).len() + w.monomials(4, 1).len(), 4);
        let p = w.normal_form(&w.parse("x*y + y*x").unwrap());
        assert_eq!(w.render(&p), "1");
    }

    #[test]
    fn file_round_trip() {
        let w = weyl().with_matrix(1, 1).unwrap();
        let text = serde_json::to_string(&w.to_file()).unwrap();
        let back = RewriteSystem::from_json(&text).unwrap();
        let p = w.parse("xi*eta*e21").unwrap();
        assert_eq!(w.render(&w.normal_form(&p)), back.render(&back.normal_form(&back.parse("xi*eta*e21").unwrap())));
    }

    #[test]
    fn tensor_signs() {
        let t = clifford(1).tensor(&odd_weyl_supercommutator()).unwrap();
        let p = t.normal_form(&t.parse("x*e1").unwrap());
        assert_eq!(t.render(&p), "-e1*x");
    }

    #[test]
    fn search_finds_small_witnesses() {
        let b = SearchBounds::default();
        for (name, sys) in [("S3_8", odd_weyl()), ("S3_1", matrices(1, 2)), ("K3", weyl().with_matrix(1, 1).unwrap())] {
            let j = crate::catalog::get(name).unwrap().algebra;
            let imgs = search_embedding(&j, &sys, &b).unwrap().unwrap_or_else(|| panic!("{name}"));
            assert!(verify_special_embedding(&j, &imgs, &sys).unwrap().holds);
        }
    }

    #[test]
    fn search_respects_obstructions() {
        let j = crate::catalog::get("S3_8").unwrap().algebra;
        assert!(search_embedding(&j, &odd_weyl_supercommutator(), &SearchBounds::default()).unwrap().is_none());
        let big = crate::catalog::get("T1").unwrap().algebra.direct_sum(&crate::catalog::get("U1").unwrap().algebra).unwrap();
        assert!(matches!(search_embedding(&big, &weyl(), &SearchBounds::default()), Err(Error::TooLarge(_))));
    }
}
