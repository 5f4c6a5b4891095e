//! Exact coefficient arithmetic: multivariate polynomials over the rationals
//! in a fixed list of named parameters, and their fraction field.
//!
//! Every quantity the engine manipulates is a [`RingElement`]: an exact
//! fraction of two polynomials. There is no floating point anywhere.
//! Fractions are kept reduced by joint integer content and by exact division
//! when one side divides the other; equality is decided by cross
//! multiplication, so a full multivariate gcd is not required.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// A named formal parameter, e.g. `a` or `lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
}

impl Param {
    pub fn new(name: impl Into<String>) -> Self {
        Param { name: name.into() }
    }
}

/// The declared parameter list of an algebra. Declaration order fixes the
/// variable order used by the monomial ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    names: Vec<String>,
}

impl ParamSet {
    pub fn new(names: Vec<String>) -> Result<Arc<Self>> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::mismatch(format!("duplicate parameter `{n}`")));
            }
        }
        Ok(Arc::new(ParamSet { names }))
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(ParamSet { names: vec![] })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New set with one extra parameter appended.
    pub fn extended(&self, name: &str) -> Result<Arc<Self>> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::mismatch(format!("parameter `{name}` already declared")));
        }
        let mut names = self.names.clone();
        names.push(name.to_string());
        Ok(Arc::new(ParamSet { names }))
    }
}

/// Exponent vector of a monomial, one entry per declared parameter.
/// Ordered graded-lexicographically (total degree first, then the
/// exponent vector itself), ascending; the leading monomial is the maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    pub fn zero(nvars: usize) -> Self {
        Expo(vec![0; nvars])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Expo) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn sub(&self, other: &Expo) -> Expo {
        Expo(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn add(&self, other: &Expo) -> Expo {
        Expo(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), &self.0).cmp(&(other.total(), &other.0))
    }
}

/// A multivariate polynomial with rational coefficients.
/// No zero coefficients are stored; the term map is canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Expo, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Expo::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut e = Expo::zero(nvars);
        e.0[idx] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| e.total() == 0 && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.leading().unwrap().0.total() == 0)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Expo, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.0.len(), self.nvars);
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Expo, &Rat)> {
        self.terms.last_key_value()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact multivariate division: `Some(q)` with `self = q * d` or `None`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, d.nvars, "polynomial arity mismatch");
        if d.is_zero() {
            return None;
        }
        let (de, dc) = d.leading().unwrap();
        let (de, dc) = (de.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Polynomial::zero(self.nvars);
        while !r.is_zero() {
            let (re, rc) = r.leading().unwrap();
            if !de.divides(re) {
                return None;
            }
            let qe = re.sub(&de);
            let qc = rc / &dc;
            let mut mono = Polynomial::zero(self.nvars);
            mono.add_term(qe.clone(), qc.clone());
            q.add_term(qe, qc);
            r = r.sub(&mono.mul(d));
        }
        Some(q)
    }

    /// Exact rational evaluation; `vals` covers every declared parameter.
    pub fn eval(&self, vals: &[Rat]) -> Rat {
        assert_eq!(vals.len(), self.nvars, "evaluation point arity mismatch");
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-express over a larger parameter set; `map[i]` is the position of
    /// old variable `i` in the new set.
    pub fn remap(&self, map: &[usize], new_nvars: usize) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut ne = Expo::zero(new_nvars);
            for (i, &k) in e.0.iter().enumerate() {
                ne.0[map[i]] = k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Canonical text: monomials in graded-lex order, leading term first.
    pub fn render(&self, ps: &ParamSet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (e, c) in self.terms.iter().rev() {
            let t = monomial_string(e, c, ps);
            if s.is_empty() {
                s = t;
            } else if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&t);
            }
        }
        s
    }
}

fn monomial_string(e: &Expo, c: &Rat, ps: &ParamSet) -> String {
    let mut factors: Vec<String> = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        if k == 1 {
            factors.push(ps.names()[i].clone());
        } else if k > 1 {
            factors.push(format!("{}^{}", ps.names()[i], k));
        }
    }
    if factors.is_empty() {
        return format!("{c}");
    }
    let vars = factors.join("*");
    if c.is_one() {
        vars
    } else if (-c.clone()).is_one() {
        format!("-{vars}")
    } else {
        format!("{c}*{vars}")
    }
}

/// An exact fraction of polynomials: the universal coefficient type.
///
/// The denominator is never zero. The representation is normalised so that
/// numerator and denominator are jointly integer-primitive and the leading
/// coefficient of the denominator is positive. Values are immutable and
/// operations are pure.
#[derive(Debug, Clone)]
pub struct RingElement {
    params: Arc<ParamSet>,
    num: Polynomial,
    den: Polynomial,
}

impl RingElement {
    pub fn from_parts(params: Arc<ParamSet>, num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = RingElement { params, num, den };
        x.normalize();
        Ok(x)
    }

    pub fn from_poly(params: Arc<ParamSet>, num: Polynomial) -> Self {
        let den = Polynomial::one(num.nvars());
        let mut x = RingElement { params, num, den };
        x.normalize();
        x
    }

    pub fn constant(params: &Arc<ParamSet>, c: Rat) -> Self {
        Self::from_poly(params.clone(), Polynomial::constant(params.len(), c))
    }

    pub fn zero(params: &Arc<ParamSet>) -> Self {
        Self::constant(params, Rat::zero())
    }

    pub fn one(params: &Arc<ParamSet>) -> Self {
        Self::constant(params, Rat::one())
    }

    pub fn int(params: &Arc<ParamSet>, n: i64) -> Self {
        Self::constant(params, rat_int(n))
    }

    pub fn var(params: &Arc<ParamSet>, name: &str) -> Result<Self> {
        let idx = params
            .index_of(name)
            .ok_or_else(|| Error::mismatch(format!("undeclared parameter `{name}`")))?;
        Ok(Self::from_poly(params.clone(), Polynomial::var(params.len(), idx)))
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Constant value if the element is a rational constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) if !d.is_zero() => Some(n / d),
            _ => None,
        }
    }

    fn same_params(&self, other: &RingElement) {
        assert!(
            self.params == other.params,
            "ring elements over different parameter sets"
        );
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Polynomial::one(self.num.nvars());
            return;
        }
        self.reduce_content();
        if self.den.is_one() {
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Polynomial::one(self.num.nvars());
            self.reduce_content();
            return;
        }
        if let Some(q) = self.den.div_exact(&self.num) {
            // num/den = 1/q
            self.num = Polynomial::one(self.num.nvars());
            self.den = q;
            self.reduce_content();
        }
    }

    /// Scale numerator and denominator by the same rational so that both are
    /// integer polynomials, jointly primitive, denominator leading
    /// coefficient positive.
    fn reduce_content(&mut self) {
        let mut lcm = BigInt::one();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            let n = (c * Rat::from(lcm.clone())).numer().abs();
            gcd = gcd.gcd(&n);
        }
        if gcd.is_zero() {
            gcd = BigInt::one();
        }
        let mut scale = Rat::new(lcm, gcd);
        if self.den.leading().is_some_and(|(_, c)| c.is_negative()) {
            scale = -scale;
        }
        self.num = self.num.scale(&scale);
        self.den = self.den.scale(&scale);
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.same_params(other);
        let (num, den) = if self.den == other.den {
            (self.num.add(&other.num), self.den.clone())
        } else {
            (
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            )
        };
        let mut x = RingElement { params: self.params.clone(), num, den };
        x.normalize();
        x
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            params: self.params.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.same_params(other);
        let mut x = RingElement {
            params: self.params.clone(),
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        };
        x.normalize();
        x
    }

    pub fn div(&self, other: &RingElement) -> Result<RingElement> {
        self.same_params(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = RingElement {
            params: self.params.clone(),
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        };
        x.normalize();
        Ok(x)
    }

    pub fn inv(&self) -> Result<RingElement> {
        RingElement::one(&self.params).div(self)
    }

    pub fn scale(&self, c: &Rat) -> RingElement {
        let mut x = RingElement {
            params: self.params.clone(),
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        x.normalize();
        x
    }

    pub fn pow(&self, k: i64) -> Result<RingElement> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut x = RingElement {
            params: self.params.clone(),
            num: self.num.pow(k as u32),
            den: self.den.pow(k as u32),
        };
        x.normalize();
        Ok(x)
    }

    /// Exact rational value at a point covering all declared parameters.
    pub fn eval(&self, vals: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(vals) / d)
    }

    /// Evaluation from a name-keyed assignment.
    pub fn eval_named(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat> {
        let mut vals = Vec::with_capacity(self.params.len());
        for name in self.params.names() {
            let v = assignment
                .get(name)
                .ok_or_else(|| Error::mismatch(format!("assignment misses parameter `{name}`")))?;
            vals.push(v.clone());
        }
        self.eval(&vals)
    }

    /// Re-express over an extended parameter set (old set must embed).
    pub fn extend_params(&self, new: &Arc<ParamSet>) -> Result<RingElement> {
        let mut map = Vec::with_capacity(self.params.len());
        for name in self.params.names() {
            let idx = new
                .index_of(name)
                .ok_or_else(|| Error::mismatch(format!("parameter `{name}` missing from target set")))?;
            map.push(idx);
        }
        Ok(RingElement {
            params: new.clone(),
            num: self.num.remap(&map, new.len()),
            den: self.den.remap(&map, new.len()),
        })
    }

    /// Canonical text rendering: `"(num)/(den)"`.
    pub fn render(&self) -> String {
        format!("({})/({})", self.num.render(&self.params), self.den.render(&self.params))
    }

    /// Compact rendering for form coefficients: bare monomials stay bare
    /// (with constant denominators folded into the coefficient), sums are
    /// parenthesised, true fractions use the canonical `(..)/(..)`.
    pub fn render_compact(&self) -> String {
        if self.num.terms().count() <= 1 {
            if let Some(d) = self.den.as_constant() {
                return self.num.scale(&d.recip()).render(&self.params);
            }
        }
        if self.den.is_one() {
            format!("({})", self.num.render(&self.params))
        } else {
            self.render()
        }
    }
}

/// Equality by cross-multiplication: representations may differ.
impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_params(other);
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

/// Elementwise field operation used by the operation dispatcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Dispatch a binary field operation; division by zero is an error.
pub fn ring_arith(x: &RingElement, y: &RingElement, op: RingOp) -> Result<RingElement> {
    match op {
        RingOp::Add => Ok(x.add(y)),
        RingOp::Sub => Ok(x.sub(y)),
        RingOp::Mul => Ok(x.mul(y)),
        RingOp::Div => x.div(y),
    }
}
