//! Table-driven arithmetic for small finite fields, used by the exhaustive
//! searches. Elements are indices `a + b·p` into the canonical order.

use super::{Field, PrimeFieldElement, QuadExtElement, Scalar};
use crate::error::{Error, Result};

/// Largest field order the table kernel accepts.
pub const MAX_ORDER: u64 = 1024;

#[derive(Clone, Debug)]
pub struct Gf {
    field: Field,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl Gf {
    pub fn new(field: &Field) -> Result<Gf> {
        let q = field
            .order()
            .ok_or_else(|| Error::NeedsFiniteField(field.to_string()))?;
        if q > MAX_ORDER {
            return Err(Error::TooLarge(format!("field of order {q}")));
        }
        let els = field.elements()?;
        let q = q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        let gf = Gf {
            field: field.clone(),
            q,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
        };
        for (i, x) in els.iter().enumerate() {
            neg[i] = gf.index(&-x);
            inv[i] = x.inv().map(|y| gf.index(&y)).unwrap_or(0);
            for (j, y) in els.iter().enumerate() {
                add[i * q + j] = gf.index(&(x + y));
                mul[i * q + j] = gf.index(&(x * y));
            }
        }
        Ok(Gf {
            add,
            mul,
            neg,
            inv,
            ..gf
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// Index of a scalar already in this field.
    pub fn index(&self, s: &Scalar) -> u16 {
        match s {
            Scalar::Prime(x) => x.value as u16,
            Scalar::Ext(x) => (x.a + x.b * x.p) as u16,
            Scalar::Rational(_) => panic!("rational scalar in a finite-field kernel"),
        }
    }

    /// Index of any scalar reducible into this field.
    pub fn reduce_index(&self, s: &Scalar) -> Result<u16> {
        Ok(self.index(&s.reduce(&self.field)?))
    }

    pub fn scalar(&self, i: u16) -> Scalar {
        let i = i as u64;
        match self.field {
            Field::Prime { p } => Scalar::Prime(PrimeFieldElement { p, value: i }),
            Field::Ext { p, nonresidue } => Scalar::Ext(QuadExtElement {
                p,
                d: nonresidue,
                a: i % p,
                b: i / p,
            }),
            Field::Rational => unreachable!(),
        }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    /// Inverse of a nonzero element; 0 maps to 0.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    /// Rank of a matrix given as rows, by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<u16>]) -> usize {
        let mut m: Vec<Vec<u16>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = self.inv(m[rank][c]);
            for x in m[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c];
                    for k in 0..cols {
                        let t = self.mul(f, m[rank][k]);
                        m[r][k] = self.sub(m[r][k], t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_agree_with_scalars() {
        for f in [Field::prime(5).unwrap(), Field::ext(3).unwrap()] {
            let gf = Gf::new(&f).unwrap();
            let els = f.elements().unwrap();
            for (i, x) in els.iter().enumerate() {
                assert_eq!(gf.scalar(i as u16), *x);
                for (j, y) in els.iter().enumerate() {
                    assert_eq!(gf.scalar(gf.mul(i as u16, j as u16)), x * y);
                    assert_eq!(gf.scalar(gf.sub(i as u16, j as u16)), x - y);
                }
                if i != 0 {
                    assert_eq!(gf.mul(i as u16, gf.inv(i as u16)), 1);
                }
            }
        }
    }

    #[test]
    fn refuses_rationals_and_big_fields() {
        assert!(Gf::new(&Field::Rational).is_err());
        assert!(Gf::new(&Field::ext(37).unwrap()).is_err());
    }

    #[test]
    fn rank_small() {
        let gf = Gf::new(&Field::prime(5).unwrap()).unwrap();
        assert_eq!(gf.rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(gf.rank(&[vec![1, 2], vec![0, 4]]), 2);
    }
}
