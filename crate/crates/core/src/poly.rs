//! Sparse commutative multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Gf, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Monomial order used for normalization and printing: total degree,
    /// then lexicographic on exponents.
    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                da.cmp(&db).then_with(|| a.cmp(b))
            })
    }

    /// Scalar multiple with leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn same_up_to_scalar(&self, o: &Poly) -> bool {
        self.monic() == o.monic()
    }

    pub fn eval(&self, field: &Field, values: &[Scalar]) -> Result<Scalar> {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = field.from_rational(c)?;
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    t = &t * &v.pow(k as u64);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn reduce(&self, gf: &Gf) -> Result<ModPoly> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let s = gf.field().from_rational(c)?;
            let i = gf.index(&s);
            if i != 0 {
                terms.push((e.clone(), i));
            }
        }
        Ok(ModPoly { terms })
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut s = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| {
                    if *k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{k}", names[i])
                    }
                })
                .collect();
            if mono.is_empty() {
                let _ = write!(s, "{abs}");
            } else if abs.is_one() {
                s.push_str(&mono.join("*"));
            } else {
                let _ = write!(s, "{abs}*{}", mono.join("*"));
            }
        }
        s
    }

    pub fn parse(names: &[String], text: &str) -> Result<Poly> {
        let mut p = Parser {
            names,
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
}

/// A polynomial with coefficients reduced into a finite field.
#[derive(Clone, Debug)]
pub struct ModPoly {
    terms: Vec<(Vec<u32>, u16)>,
}

impl ModPoly {
    pub fn eval(&self, gf: &Gf, values: &[u16]) -> u16 {
        let mut acc = 0u16;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (&v, &k) in values.iter().zip(e) {
                for _ in 0..k {
                    t = gf.mul(t, v);
                }
            }
            acc = gf.add(acc, t);
        }
        acc
    }
}

struct Parser<'a> {
    names: &'a [String],
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::PolyParse {
            input: self.text.to_string(),
            reason: format!("{reason} at {}", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let mut acc = Poly::zero(n);
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

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') | Some('·') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == '(' || c.is_ascii_digit() || self.name_at().is_some() => {
                    let _ = c;
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn name_at(&self) -> Option<(usize, usize)> {
        let rest: String = self.chars[self.pos..].iter().collect();
        self.names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.chars().count())
            .map(|(i, n)| (i, n.chars().count()))
    }

    fn factor(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_digit() || c == '/')
                {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let r: Rational = lit.parse().map_err(|_| self.err("bad number"))?;
                Poly::constant(n, r)
            }
            _ => match self.name_at() {
                Some((i, len)) => {
                    self.pos += len;
                    Poly::var(n, i)
                }
                None => return Err(self.err("expected a term")),
            },
        };
        let exp = match self.peek() {
            Some('^') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                lit.parse().map_err(|_| self.err("bad exponent"))?
            }
            Some(c) if superscript(c).is_some() => {
                let mut k = 0;
                while let Some(d) = self.peek().and_then(superscript) {
                    k = k * 10 + d;
                    self.pos += 1;
                }
                k
            }
            _ => 1,
        };
        Ok(base.pow(exp))
    }
}

fn superscript(c: char) -> Option<u32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c).map(|p| p as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_render_round_trip() {
        let n = names(&["a", "b"]);
        let p = Poly::parse(&n, "2a^3 - 3*a^2*b + (a-1)(a+1)").unwrap();
        let q = Poly::parse(&n, &p.render(&n)).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn scalar_multiples() {
        let n = names(&["β"]);
        let p = Poly::parse(&n, "(β−1)β(2β−1)").unwrap();
        let q = Poly::parse(&n, "2β³−3β²+β").unwrap();
        assert_eq!(p, q);
        assert!(p.same_up_to_scalar(&q.scale(&Rational::new(5.into(), 3.into()))));
    }

    #[test]
    fn modular_evaluation() {
        let n = names(&["b"]);
        let p = Poly::parse(&n, "2b^3 - 3b^2 + b").unwrap();
        let f = Field::prime(5).unwrap();
        let gf = Gf::new(&f).unwrap();
        let m = p.reduce(&gf).unwrap();
        let roots: Vec<u16> = (0..5).filter(|&x| m.eval(&gf, &[x]) == 0).collect();
        assert_eq!(roots, vec![0, 1, 3]);
        assert!(p.eval(&f, &[f.from_int(3)]).unwrap().is_zero());
    }
}
