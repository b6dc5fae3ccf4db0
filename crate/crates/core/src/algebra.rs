//! Exact arithmetic in GF(p^n).
//!
//! Elements are stored as dense indices `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! of their coefficient vector over the prime field, so the prime subfield is
//! exactly the indices `0..p`. All arithmetic goes through lookup tables built
//! once at construction.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_FIELD_CAP: usize = 256;

/// Hard limit imposed by the table representation.
pub const MAX_FIELD_ORDER: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub(crate) u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct FiniteField {
    p: u32,
    n: u32,
    order: usize,
    /// Monic modulus, lowest coefficient first, length `n + 1`.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// `frob[i][x] = x^(p^i)`.
    frob: Vec<Vec<u16>>,
    generator: FieldElem,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf({})", self.order)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Builds GF(p^n) with the default size cap.
pub fn make_field(p: u32, n: u32) -> Result<Arc<FiniteField>> {
    make_field_with_cap(p, n, DEFAULT_FIELD_CAP)
}

pub fn make_field_with_cap(p: u32, n: u32, cap: usize) -> Result<Arc<FiniteField>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let order = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
    let cap = cap.min(MAX_FIELD_ORDER);
    if order > cap as u64 {
        return Err(Error::CapExceeded { what: "field order", limit: cap, requested: order as usize });
    }
    let modulus = least_irreducible(p, n as usize);
    FiniteField::with_modulus(p, modulus)
}

impl FiniteField {
    /// Builds the field `GF(p)[x] / (modulus)`. The modulus must be monic and
    /// irreducible; both are checked.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<FiniteField>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = modulus.len().saturating_sub(1);
        if n == 0 || modulus[n] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument("modulus must be a monic polynomial of degree >= 1".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidArgument(format!("modulus {modulus:?} is reducible over GF({p})")));
        }
        let order = (p as usize).pow(n as u32);
        if order > MAX_FIELD_ORDER {
            return Err(Error::CapExceeded { what: "field order", limit: MAX_FIELD_ORDER, requested: order });
        }

        let coeffs_of = |mut e: usize| -> Vec<u32> {
            let mut c = vec![0; n];
            for slot in c.iter_mut() {
                *slot = (e % p as usize) as u32;
                e /= p as usize;
            }
            c
        };
        let index_of = |c: &[u32]| -> u16 {
            c.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize) as u16
        };
        let all: Vec<Vec<u32>> = (0..order).map(coeffs_of).collect();

        let mut add = vec![0u16; order * order];
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * order + b] = index_of(&s);
                let prod = poly::rem(&poly::mul(&all[a], &all[b], p), &modulus, p);
                let mut padded = prod;
                padded.resize(n, 0);
                mul[a * order + b] = index_of(&padded);
            }
        }
        let neg: Vec<u16> = (0..order)
            .map(|a| index_of(&all[a].iter().map(|&x| (p - x) % p).collect::<Vec<_>>()))
            .collect();
        let mut inv = vec![0u16; order];
        for a in 1..order {
            inv[a] = (1..order).find(|&b| mul[a * order + b] == 1).expect("field has no zero divisors") as u16;
        }

        let mut field = FiniteField {
            p,
            n: n as u32,
            order,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob: Vec::new(),
            generator: FieldElem::ONE,
        };
        let mut frob = Vec::with_capacity(n);
        let mut current: Vec<u16> = (0..order as u16).collect();
        for _ in 0..n {
            frob.push(current.clone());
            current = current.iter().map(|&x| field.pow(FieldElem(x), p as u64).0).collect();
        }
        field.frob = frob;
        field.generator = (1..order)
            .map(|i| FieldElem(i as u16))
            .find(|&g| field.multiplicative_order(g) == order - 1)
            .ok_or_else(|| Error::Internal("multiplicative group is not cyclic".into()))?;
        Ok(Arc::new(field))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        self.generator
    }

    /// An element generating the field as a ring over its prime field:
    /// the class of `x` when `n > 1`, else `1`.
    pub fn ring_generator(&self) -> FieldElem {
        if self.n > 1 {
            FieldElem(self.p as u16)
        } else {
            FieldElem::ONE
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.order as u16).map(FieldElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.order as u16).map(FieldElem)
    }

    pub fn elem(&self, index: usize) -> FieldElem {
        assert!(index < self.order, "element index {index} out of range for {self}");
        FieldElem(index as u16)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        assert!(coeffs.len() <= self.n as usize);
        let idx = coeffs.iter().rev().fold(0usize, |acc, &c| acc * self.p as usize + (c % self.p) as usize);
        FieldElem(idx as u16)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut e = a.index();
        (0..self.n)
            .map(|_| {
                let c = (e % self.p as usize) as u32;
                e /= self.p as usize;
                c
            })
            .collect()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.p as i64) as u16)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.index()])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem(self.inv[a.index()]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of `a` in the multiplicative group; 0 for `a = 0`.
    pub fn multiplicative_order(&self, a: FieldElem) -> usize {
        if a.is_zero() {
            return 0;
        }
        let mut x = a;
        let mut k = 1;
        while x != FieldElem::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `x ↦ x^(p^i)`.
    pub fn frobenius(&self, a: FieldElem, i: u32) -> FieldElem {
        FieldElem(self.frob[(i % self.n) as usize][a.index()])
    }

    pub fn automorphisms(&self) -> Vec<FieldAut> {
        (0..self.n).map(|power| FieldAut { power, degree: self.n }).collect()
    }

    pub fn identity_aut(&self) -> FieldAut {
        FieldAut { power: 0, degree: self.n }
    }

    pub fn aut(&self, power: u32) -> FieldAut {
        FieldAut { power: power % self.n, degree: self.n }
    }

    /// Evaluates a polynomial with prime-field coefficients at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: FieldElem) -> FieldElem {
        coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| self.add(self.mul(acc, x), self.from_int(c as i64)))
    }
}

/// The automorphism `x ↦ x^(p^power)`. Antiautomorphisms of a finite field are
/// automorphisms, so this type covers both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldAut {
    power: u32,
    degree: u32,
}

impl FieldAut {
    pub fn power(self) -> u32 {
        self.power
    }

    pub fn is_identity(self) -> bool {
        self.power == 0
    }

    pub fn apply(self, field: &FiniteField, a: FieldElem) -> FieldElem {
        debug_assert_eq!(field.degree(), self.degree);
        field.frobenius(a, self.power)
    }

    /// `self` followed by `other`.
    pub fn then(self, other: FieldAut) -> FieldAut {
        assert_eq!(self.degree, other.degree, "automorphisms of different fields");
        FieldAut { power: (self.power + other.power) % self.degree, degree: self.degree }
    }

    pub fn inverse(self) -> FieldAut {
        FieldAut { power: (self.degree - self.power) % self.degree, degree: self.degree }
    }
}

impl fmt::Display for FieldAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frob^{}", self.power)
    }
}

/// A unital ring homomorphism between finite fields, stored as a full table.
#[derive(Clone, Debug)]
pub struct FieldHom {
    source: Arc<FiniteField>,
    target: Arc<FiniteField>,
    images: Vec<FieldElem>,
}

impl PartialEq for FieldHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.images == other.images
    }
}

impl Eq for FieldHom {}

impl FieldHom {
    /// Builds a homomorphism from an explicit table, checking additivity,
    /// multiplicativity and `1 ↦ 1`.
    pub fn from_table(source: Arc<FiniteField>, target: Arc<FiniteField>, images: Vec<FieldElem>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::InvalidArgument("homomorphism table has wrong length".into()));
        }
        if images[1] != FieldElem::ONE {
            return Err(Error::NotHomomorphism("1 is not mapped to 1".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                let ok_add = images[source.add(a, b).index()] == target.add(images[a.index()], images[b.index()]);
                let ok_mul = images[source.mul(a, b).index()] == target.mul(images[a.index()], images[b.index()]);
                if !ok_add || !ok_mul {
                    return Err(Error::NotHomomorphism(format!("fails at ({a}, {b})")));
                }
            }
        }
        Ok(FieldHom { source, target, images })
    }

    pub fn from_aut(field: &Arc<FiniteField>, aut: FieldAut) -> Self {
        let images = field.elements().map(|x| aut.apply(field, x)).collect();
        FieldHom { source: field.clone(), target: field.clone(), images }
    }

    pub fn identity(field: &Arc<FiniteField>) -> Self {
        Self::from_aut(field, field.identity_aut())
    }

    pub fn source(&self) -> &Arc<FiniteField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteField> {
        &self.target
    }

    pub fn apply(&self, a: FieldElem) -> FieldElem {
        self.images[a.index()]
    }

    pub fn table(&self) -> &[FieldElem] {
        &self.images
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.images.iter().all(|y| !std::mem::replace(&mut seen[y.index()], true))
    }

    /// Injectivity is automatic for field homomorphisms, so this reduces to
    /// comparing orders.
    pub fn is_surjective(&self) -> bool {
        self.source.order() == self.target.order()
    }

    /// When source and target coincide, the Frobenius power realizing this map.
    pub fn as_frobenius_power(&self) -> Option<u32> {
        if self.source != self.target {
            return None;
        }
        (0..self.source.degree()).find(|&i| self.source.elements().all(|x| self.source.frobenius(x, i) == self.apply(x)))
    }

    pub fn compose(&self, then: &FieldHom) -> Result<FieldHom> {
        if *self.target != *then.source {
            return Err(Error::IncompatibleFields("composition of mismatched homomorphisms".into()));
        }
        let images = self.images.iter().map(|&y| then.apply(y)).collect();
        Ok(FieldHom { source: self.source.clone(), target: then.target.clone(), images })
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<FieldHom> {
        if !self.is_surjective() {
            return None;
        }
        let mut images = vec![FieldElem::ZERO; self.source.order()];
        for x in self.source.elements() {
            images[self.apply(x).index()] = x;
        }
        Some(FieldHom { source: self.target.clone(), target: self.source.clone(), images })
    }

    /// Short descriptor: `frob^i` for automorphisms, else the image of the
    /// ring generator.
    pub fn describe(&self) -> String {
        match self.as_frobenius_power() {
            Some(i) => format!("frob^{i}"),
            None => format!("{}->{}:x|->{}", self.source, self.target, self.apply(self.source.ring_generator())),
        }
    }
}

/// All unital ring homomorphisms `source → target`, ordered by the image of
/// the ring generator of `source`.
pub fn homomorphisms(source: &Arc<FiniteField>, target: &Arc<FiniteField>) -> Vec<FieldHom> {
    if source.characteristic() != target.characteristic() {
        return Vec::new();
    }
    let p = source.characteristic() as usize;
    target
        .elements()
        .filter(|&r| target.eval_prime_poly(source.modulus(), r).is_zero())
        .filter_map(|root| {
            let images = source
                .elements()
                .map(|x| {
                    let mut e = x.index();
                    let mut acc = FieldElem::ZERO;
                    let mut power = FieldElem::ONE;
                    while e > 0 {
                        let c = target.from_int((e % p) as i64);
                        acc = target.add(acc, target.mul(c, power));
                        power = target.mul(power, root);
                        e /= p;
                    }
                    acc
                })
                .collect();
            FieldHom::from_table(source.clone(), target.clone(), images).ok()
        })
        .collect()
}

pub fn is_surjective(h: &FieldHom) -> bool {
    h.is_surjective()
}

/// Lexicographically least irreducible monic of degree `n` over GF(p), where
/// the coefficients are compared from `x^{n-1}` down to the constant term.
pub fn least_irreducible(p: u32, n: usize) -> Vec<u32> {
    let count = (p as usize).pow(n as u32);
    (0..count)
        .map(|mut e| {
            let mut c = vec![0u32; n + 1];
            for slot in c.iter_mut().take(n) {
                *slot = (e % p as usize) as u32;
                e /= p as usize;
            }
            c[n] = 1;
            c
        })
        .find(|c| poly::is_irreducible(c, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Dense polynomials over GF(p), lowest coefficient first.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        (1..p).find(|&b| a * b % p == 1).expect("nonzero residue mod a prime")
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = inv_mod(*m.last().expect("nonzero modulus"), p);
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let factor = r.last().copied().unwrap_or(0) * lead_inv % p;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - factor * c % p) % p;
            }
            r = trim(r);
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..deg`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let n = f.len().saturating_sub(1);
        if n == 0 {
            return false;
        }
        for d in 1..n {
            let count = (p as usize).pow(d as u32);
            for mut e in 0..count {
                let mut g = vec![0u32; d + 1];
                for slot in g.iter_mut().take(d) {
                    *slot = (e % p as usize) as u32;
                    e /= p as usize;
                }
                g[d] = 1;
                if rem(&f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}
