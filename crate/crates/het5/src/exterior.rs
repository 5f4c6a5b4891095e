//! Alternating forms and dense tensors on an orthonormal coframe.
//!
//! The metric is always the identity in the working coframe, so indices are
//! never raised or lowered. A k-form stores coefficients on strictly
//! increasing multi-indices; the component convention is
//! `u_{i1..ik} = u(E_{i1},..,E_{ik})` with `u = sum_{i1<..<ik} u_I e^I`,
//! and wedges follow the determinant convention (no 1/k! factors).
//! Orientations are fixed as `e^{1234}` on the horizontal distribution and
//! `e^{1..n}` on the full coframe.

use crate::error::{Error, Result};
use crate::ring::{ParamSet, Rat, RingElement};
use std::collections::BTreeMap;
use std::sync::Arc;

/// An orthonormal coframe `e^1..e^n`, optionally with a distinguished
/// (Reeb) direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coframe {
    pub dim: usize,
    pub reeb_index: Option<usize>,
}

impl Coframe {
    pub fn new(dim: usize, reeb_index: Option<usize>) -> Result<Self> {
        if dim == 0 || dim > 9 {
            return Err(Error::mismatch(format!("unsupported coframe dimension {dim}")));
        }
        if let Some(r) = reeb_index {
            if r == 0 || r > dim {
                return Err(Error::mismatch(format!("reeb index {r} out of range 1..={dim}")));
            }
        }
        Ok(Coframe { dim, reeb_index })
    }

    /// Horizontal indices, in increasing order.
    pub fn horizontal(&self) -> Vec<u8> {
        let reeb = self.reeb_index.unwrap_or(usize::MAX);
        (1..=self.dim).filter(|&i| i != reeb).map(|i| i as u8).collect()
    }
}

/// Sort indices, returning the permutation sign; `None` if an index repeats.
pub fn sort_with_sign(idxs: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut v = idxs.to_vec();
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// An alternating k-form with exact coefficients. Zero coefficients are
/// never stored; keys are strictly increasing multi-indices (1-based).
#[derive(Debug, Clone)]
pub struct KForm {
    params: Arc<ParamSet>,
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<u8>, RingElement>,
}

impl KForm {
    pub fn zero(params: &Arc<ParamSet>, dim: usize, degree: usize) -> Self {
        KForm { params: params.clone(), dim, degree, coeffs: BTreeMap::new() }
    }

    /// The basis form `e^{i1..ik}` for strictly increasing indices.
    pub fn basis(params: &Arc<ParamSet>, dim: usize, idxs: &[u8]) -> Self {
        let mut f = Self::zero(params, dim, idxs.len());
        f.add_term(idxs, RingElement::one(params));
        f
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &RingElement)> {
        self.coeffs.iter()
    }

    /// Add `c * e^{idxs}` (indices in any order; repeated indices contribute
    /// nothing).
    pub fn add_term(&mut self, idxs: &[u8], c: RingElement) {
        assert_eq!(idxs.len(), self.degree, "term degree mismatch");
        assert!(
            idxs.iter().all(|&i| i >= 1 && (i as usize) <= self.dim),
            "coframe index out of range"
        );
        if c.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_with_sign(idxs) else {
            return;
        };
        let c = if sign < 0 { c.neg() } else { c };
        match self.coeffs.entry(sorted) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Component `u(E_{i1},..,E_{ik})` for arbitrary index order.
    pub fn get(&self, idxs: &[u8]) -> RingElement {
        assert_eq!(idxs.len(), self.degree, "component degree mismatch");
        match sort_with_sign(idxs) {
            None => RingElement::zero(&self.params),
            Some((sorted, sign)) => match self.coeffs.get(&sorted) {
                None => RingElement::zero(&self.params),
                Some(c) => {
                    if sign < 0 {
                        c.neg()
                    } else {
                        c.clone()
                    }
                }
            },
        }
    }

    fn check_compatible(&self, other: &KForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::mismatch(format!(
                "mismatched coframes: dim {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::mismatch(format!(
                "cannot add a {}-form and a {}-form",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &RingElement) -> KForm {
        let mut out = KForm::zero(&self.params, self.dim, self.degree);
        for (i, v) in &self.coeffs {
            out.add_term(i, v.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> KForm {
        self.scale(&RingElement::constant(&self.params, c.clone()))
    }

    /// Graded-anticommutative wedge product.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        self.check_compatible(other)?;
        let deg = self.degree + other.degree;
        let mut out = KForm::zero(&self.params, self.dim, deg);
        if deg > self.dim {
            return Ok(out); // zero form of that degree
        }
        let mut idxs = Vec::with_capacity(deg);
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                idxs.clear();
                idxs.extend_from_slice(ia);
                idxs.extend_from_slice(ib);
                out.add_term(&idxs, ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Interior product with the coframe vector `E_i`.
    pub fn interior(&self, i: u8) -> KForm {
        assert!(self.degree >= 1, "interior product needs degree >= 1");
        let mut out = KForm::zero(&self.params, self.dim, self.degree - 1);
        for (idxs, c) in &self.coeffs {
            if let Some(pos) = idxs.iter().position(|&j| j == i) {
                let mut rest = idxs.clone();
                rest.remove(pos);
                let c = if pos % 2 == 1 { c.neg() } else { c.clone() };
                out.add_term(&rest, c);
            }
        }
        out
    }

    /// True when no term involves `e^reeb`.
    pub fn is_horizontal(&self, reeb: usize) -> bool {
        self.coeffs.keys().all(|i| !i.contains(&(reeb as u8)))
    }

    /// Hodge star on the horizontal distribution (complement of the Reeb
    /// direction), orientation `e^{1234}` for the standard 5-dim coframe.
    pub fn hodge_h(&self, reeb: usize) -> Result<KForm> {
        if !self.is_horizontal(reeb) {
            return Err(Error::NonHorizontal(format!("contains e^{reeb}")));
        }
        let horizontal: Vec<u8> = (1..=self.dim as u8).filter(|&i| i as usize != reeb).collect();
        self.hodge_on(&horizontal)
    }

    /// Hodge star on the full coframe, orientation `e^{1..n}`.
    pub fn hodge_full(&self) -> Result<KForm> {
        let all: Vec<u8> = (1..=self.dim as u8).collect();
        self.hodge_on(&all)
    }

    fn hodge_on(&self, space: &[u8]) -> Result<KForm> {
        if self.degree > space.len() {
            return Err(Error::mismatch("degree exceeds hodge space dimension"));
        }
        let out_deg = space.len() - self.degree;
        let mut out = KForm::zero(&self.params, self.dim, out_deg);
        for (idxs, c) in &self.coeffs {
            if idxs.iter().any(|i| !space.contains(i)) {
                return Err(Error::NonHorizontal("index outside hodge space".into()));
            }
            let comp: Vec<u8> = space.iter().copied().filter(|i| !idxs.contains(i)).collect();
            let mut arranged = idxs.clone();
            arranged.extend_from_slice(&comp);
            let (_, sign) = sort_with_sign(&arranged).expect("distinct indices");
            let c = if sign < 0 { c.neg() } else { c.clone() };
            out.add_term(&comp, c);
        }
        Ok(out)
    }

    /// Fully antisymmetric dense tensor with the same components.
    pub fn to_tensor(&self) -> DenseTensor {
        let mut t = DenseTensor::zero(&self.params, self.dim, self.degree);
        let mut idx = vec![0usize; self.degree];
        t.fill_from(&mut idx, 0, &mut |ix| {
            let bytes: Vec<u8> = ix.iter().map(|&i| i as u8).collect();
            self.get(&bytes)
        });
        t
    }

    /// Interpret an antisymmetric tensor as a k-form. Errors when the tensor
    /// is not fully antisymmetric.
    pub fn from_tensor(t: &DenseTensor) -> Result<KForm> {
        let mut out = KForm::zero(&t.params, t.dim, t.rank);
        let mut idx = vec![1usize; t.rank];
        loop {
            if idx.windows(2).all(|w| w[0] < w[1]) {
                let c = t.get(&idx);
                if !c.is_zero() {
                    let bytes: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
                    out.add_term(&bytes, c.clone());
                }
            }
            if !next_index(&mut idx, t.dim) {
                break;
            }
        }
        // antisymmetry check against the stored increasing components
        let form = out.clone();
        let mut idx = vec![1usize; t.rank];
        loop {
            let bytes: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
            if form.get(&bytes) != *t.get(&idx) {
                return Err(Error::mismatch(format!(
                    "tensor is not antisymmetric at {idx:?}"
                )));
            }
            if !next_index(&mut idx, t.dim) {
                break;
            }
        }
        Ok(out)
    }

    /// Same form on a larger coframe (indices unchanged).
    pub fn lift_to_dim(&self, dim: usize) -> KForm {
        assert!(dim >= self.dim);
        let mut out = KForm::zero(&self.params, dim, self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn extend_params(&self, new: &Arc<ParamSet>) -> Result<KForm> {
        let mut out = KForm::zero(new, self.dim, self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(i, c.extend_params(new)?);
        }
        Ok(out)
    }

    /// Canonical rendering: terms sorted by multi-index,
    /// e.g. `a*e125 + b*e135 - c*e235`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        if self.degree == 0 {
            return self.coeffs.values().next().unwrap().render_compact();
        }
        let mut s = String::new();
        for (idxs, c) in &self.coeffs {
            let e: String = format!("e{}", idxs.iter().map(|i| i.to_string()).collect::<String>());
            let cs = c.render_compact();
            let term = if cs == "1" {
                e
            } else if cs == "-1" {
                format!("-{e}")
            } else {
                format!("{cs}*{e}")
            };
            if s.is_empty() {
                s = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&term);
            }
        }
        s
    }
}

impl PartialEq for KForm {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

fn next_index(idx: &mut [usize], dim: usize) -> bool {
    for i in (0..idx.len()).rev() {
        if idx[i] < dim {
            idx[i] += 1;
            for j in i + 1..idx.len() {
                idx[j] = 1;
            }
            return true;
        }
    }
    false
}

/// A dense rank-k tensor on the coframe, `dim^k` exact entries.
/// Indices are 1-based throughout the public interface.
#[derive(Debug, Clone)]
pub struct DenseTensor {
    params: Arc<ParamSet>,
    dim: usize,
    rank: usize,
    entries: Vec<RingElement>,
}

impl DenseTensor {
    pub fn zero(params: &Arc<ParamSet>, dim: usize, rank: usize) -> Self {
        let n = dim.pow(rank as u32);
        DenseTensor {
            params: params.clone(),
            dim,
            rank,
            entries: vec![RingElement::zero(params); n],
        }
    }

    /// Rank-2 identity (the metric in an orthonormal coframe).
    pub fn identity(params: &Arc<ParamSet>, dim: usize) -> Self {
        let mut t = Self::zero(params, dim, 2);
        for i in 1..=dim {
            t.set(&[i, i], RingElement::one(params));
        }
        t
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank, "tensor index rank mismatch");
        let mut o = 0usize;
        for &i in idx {
            assert!(i >= 1 && i <= self.dim, "tensor index out of range");
            o = o * self.dim + (i - 1);
        }
        o
    }

    pub fn get(&self, idx: &[usize]) -> &RingElement {
        &self.entries[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: RingElement) {
        let o = self.offset(idx);
        self.entries[o] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &RingElement) {
        let o = self.offset(idx);
        self.entries[o] = self.entries[o].add(v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.dim != other.dim || self.rank != other.rank {
            return Err(Error::mismatch("tensor shape mismatch"));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DenseTensor {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn scale(&self, c: &RingElement) -> DenseTensor {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.mul(c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> DenseTensor {
        self.scale(&RingElement::constant(&self.params, c.clone()))
    }

    fn fill_from(
        &mut self,
        idx: &mut Vec<usize>,
        slot: usize,
        f: &mut impl FnMut(&[usize]) -> RingElement,
    ) {
        if slot == self.rank {
            let o = self.offset(idx);
            self.entries[o] = f(idx);
            return;
        }
        for i in 1..=self.dim {
            idx[slot] = i;
            self.fill_from(idx, slot + 1, f);
        }
    }

    pub fn from_fn(
        params: &Arc<ParamSet>,
        dim: usize,
        rank: usize,
        mut f: impl FnMut(&[usize]) -> RingElement,
    ) -> Self {
        let mut t = Self::zero(params, dim, rank);
        let mut idx = vec![0usize; rank];
        t.fill_from(&mut idx, 0, &mut f);
        t
    }

    /// Tensor product, slots of `self` first.
    pub fn outer(&self, other: &DenseTensor) -> DenseTensor {
        let rank = self.rank + other.rank;
        DenseTensor::from_fn(&self.params, self.dim, rank, |idx| {
            self.get(&idx[..self.rank]).mul(other.get(&idx[self.rank..]))
        })
    }

    /// Full Euclidean trace over each listed pair of slots (1-based slots).
    pub fn contract(&self, pairs: &[(usize, usize)]) -> Result<DenseTensor> {
        let mut seen = vec![false; self.rank];
        for &(a, b) in pairs {
            for s in [a, b] {
                if s == 0 || s > self.rank {
                    return Err(Error::mismatch(format!("contraction slot {s} out of range")));
                }
                if seen[s - 1] {
                    return Err(Error::mismatch(format!("contraction slot {s} used twice")));
                }
                seen[s - 1] = true;
            }
            if a == b {
                return Err(Error::mismatch("contraction pair with equal slots"));
            }
        }
        let free: Vec<usize> = (1..=self.rank).filter(|s| !seen[s - 1]).collect();
        let out_rank = free.len();
        let mut out = DenseTensor::zero(&self.params, self.dim, out_rank);
        let mut free_idx = vec![1usize; out_rank];
        let mut sum_idx = vec![1usize; pairs.len()];
        loop {
            let mut acc = RingElement::zero(&self.params);
            loop {
                let mut full = vec![0usize; self.rank];
                for (fi, &slot) in free_idx.iter().zip(&free) {
                    full[slot - 1] = *fi;
                }
                for (si, &(a, b)) in sum_idx.iter().zip(pairs) {
                    full[a - 1] = *si;
                    full[b - 1] = *si;
                }
                acc = acc.add(self.get(&full));
                if !next_index(&mut sum_idx, self.dim) {
                    break;
                }
            }
            if out_rank == 0 {
                out.entries[0] = acc;
                break;
            }
            out.set(&free_idx.clone(), acc);
            sum_idx.iter_mut().for_each(|i| *i = 1);
            if !next_index(&mut free_idx, self.dim) {
                break;
            }
        }
        Ok(out)
    }

    /// Matrix product of two rank-2 tensors: `(a b)^i_j = a^i_s b^s_j`.
    pub fn matmul(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.rank != 2 || other.rank != 2 || self.dim != other.dim {
            return Err(Error::mismatch("matmul needs two rank-2 tensors"));
        }
        Ok(DenseTensor::from_fn(&self.params, self.dim, 2, |idx| {
            let (i, j) = (idx[0], idx[1]);
            let mut acc = RingElement::zero(&self.params);
            for s in 1..=self.dim {
                acc = acc.add(&self.get(&[i, s]).mul(other.get(&[s, j])));
            }
            acc
        }))
    }

    /// Nonzero components as `t[i,j,..] = coeff` lines, for witnesses.
    pub fn render_nonzero(&self) -> String {
        let mut lines = Vec::new();
        let mut idx = vec![1usize; self.rank];
        loop {
            let v = self.get(&idx);
            if !v.is_zero() {
                let pos = idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                lines.push(format!("[{pos}] = {}", v.render_compact()));
            }
            if self.rank == 0 || !next_index(&mut idx, self.dim) {
                break;
            }
        }
        if lines.is_empty() {
            "0".to_string()
        } else {
            lines.join("; ")
        }
    }

    pub fn first_nonzero(&self) -> Option<(Vec<usize>, RingElement)> {
        let mut idx = vec![1usize; self.rank];
        loop {
            let v = self.get(&idx);
            if !v.is_zero() {
                return Some((idx.clone(), v.clone()));
            }
            if self.rank == 0 || !next_index(&mut idx, self.dim) {
                return None;
            }
        }
    }
}

impl PartialEq for DenseTensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.rank == other.rank
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a == b)
    }
}
