//! Lie algebras presented by invariant structure equations `de^i`, the
//! exterior derivative on invariant forms, the Jacobi test, and the
//! cylinder extension to dimension six.
//!
//! Sign convention: `de^k(E_i, E_j) = -e^k([E_i, E_j])`, so the structure
//! constants are `c^k_{ij} = -(de^k)_{ij}`.

use crate::error::{Error, Result};
use crate::exterior::{Coframe, KForm};
use crate::ring::{ParamSet, RingElement};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub name: String,
    pub coframe: Coframe,
    /// `de^1 .. de^n`, each a 2-form.
    pub d_coframe: Vec<KForm>,
    pub params: Arc<ParamSet>,
}

impl LieAlgebra {
    pub fn new(
        name: impl Into<String>,
        coframe: Coframe,
        d_coframe: Vec<KForm>,
        params: Arc<ParamSet>,
    ) -> Result<Self> {
        if d_coframe.len() != coframe.dim {
            return Err(Error::mismatch(format!(
                "expected {} structure equations, got {}",
                coframe.dim,
                d_coframe.len()
            )));
        }
        for (i, f) in d_coframe.iter().enumerate() {
            if f.degree() != 2 || f.dim() != coframe.dim {
                return Err(Error::mismatch(format!("de^{} is not a 2-form on the coframe", i + 1)));
            }
        }
        Ok(LieAlgebra { name: name.into(), coframe, d_coframe, params })
    }

    /// The abelian algebra in dimension `dim` (all `de^i = 0`).
    pub fn abelian(dim: usize, params: Arc<ParamSet>, reeb: Option<usize>) -> Self {
        let coframe = Coframe::new(dim, reeb).expect("valid dimension");
        let d_coframe = (0..dim).map(|_| KForm::zero(&params, dim, 2)).collect();
        LieAlgebra { name: "abelian".into(), coframe, d_coframe, params }
    }

    pub fn dim(&self) -> usize {
        self.coframe.dim
    }

    pub fn d_of_coframe(&self, i: usize) -> &KForm {
        &self.d_coframe[i - 1]
    }

    /// Structure constant `c^k_{ij}` of `[E_i, E_j] = c^k_{ij} E_k`.
    pub fn structure_const(&self, k: usize, i: usize, j: usize) -> RingElement {
        self.d_coframe[k - 1].get(&[i as u8, j as u8]).neg()
    }

    /// Components of `[E_i, E_j]` in the coframe basis.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<RingElement> {
        (1..=self.dim()).map(|k| self.structure_const(k, i, j)).collect()
    }

    /// Chevalley-Eilenberg differential on an invariant form: extends the
    /// declared `de^i` by the graded Leibniz rule,
    /// `d e^{i1..ik} = sum_j (-1)^{j-1} e^{i1} ^ .. ^ de^{ij} ^ .. ^ e^{ik}`.
    pub fn exterior_derivative(&self, u: &KForm) -> KForm {
        let n = self.dim();
        let mut out = KForm::zero(&self.params, n, u.degree() + 1);
        for (idxs, c) in u.terms() {
            for (pos, &ij) in idxs.iter().enumerate() {
                let prefix = KForm::basis(&self.params, n, &idxs[..pos]);
                let suffix = KForm::basis(&self.params, n, &idxs[pos + 1..]);
                let mut term = prefix
                    .wedge(self.d_of_coframe(ij as usize))
                    .and_then(|w| w.wedge(&suffix))
                    .expect("same coframe");
                term = term.scale(c);
                if pos % 2 == 1 {
                    term = term.neg();
                }
                out = out.add(&term).expect("same degree");
            }
        }
        out
    }

    /// `d(de^i) = 0` for every i, or the first failing witness.
    pub fn jacobi_check(&self) -> JacobiReport {
        for i in 1..=self.dim() {
            let dd = self.exterior_derivative(self.d_of_coframe(i));
            if !dd.is_zero() {
                return JacobiReport { witness: Some((i, dd)) };
            }
        }
        JacobiReport { witness: None }
    }

    /// Component of `[[E_i,E_j],E_k] + [[E_j,E_k],E_i] + [[E_k,E_i],E_j]`
    /// along `E_l`: an independent route to the Jacobi obstruction.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize, l: usize) -> RingElement {
        let mut acc = RingElement::zero(&self.params);
        for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
            for s in 1..=self.dim() {
                acc = acc.add(&self.structure_const(s, x, y).mul(&self.structure_const(l, s, z)));
            }
        }
        acc
    }

    pub fn extend_params(&self, new: &Arc<ParamSet>) -> Result<LieAlgebra> {
        let d_coframe = self
            .d_coframe
            .iter()
            .map(|f| f.extend_params(new))
            .collect::<Result<Vec<_>>>()?;
        Ok(LieAlgebra {
            name: self.name.clone(),
            coframe: self.coframe.clone(),
            d_coframe,
            params: new.clone(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct JacobiReport {
    /// First `i` with `d(de^i) != 0`, and that 3-form.
    pub witness: Option<(usize, KForm)>,
}

impl JacobiReport {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }

    pub fn render_witness(&self) -> Option<String> {
        self.witness
            .as_ref()
            .map(|(i, f)| format!("d(de^{i}) = {}", f.render()))
    }
}

/// The cylinder `M x R` of a 5-dimensional algebra carrying the structure
/// forms, with the induced Kaehler form and complex volume form.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub algebra: LieAlgebra,
    pub omega: KForm,
    pub psi_plus: KForm,
    pub psi_minus: KForm,
}

/// Append a closed direction `e^{n+1} = dt` and the forms
/// `Omega = -F1 - eta ^ dt`, `Psi+ = F2 ^ eta - F3 ^ dt`,
/// `Psi- = F3 ^ eta + F2 ^ dt`.
pub fn cylinder_extend(
    alg: &LieAlgebra,
    eta: &KForm,
    f1: &KForm,
    f2: &KForm,
    f3: &KForm,
) -> Result<Cylinder> {
    let n = alg.dim();
    if eta.degree() != 1 || [f1, f2, f3].iter().any(|f| f.degree() != 2) {
        return Err(Error::mismatch("structure forms have wrong degrees"));
    }
    let n6 = n + 1;
    let mut d_coframe: Vec<KForm> =
        alg.d_coframe.iter().map(|f| f.lift_to_dim(n6)).collect();
    d_coframe.push(KForm::zero(&alg.params, n6, 2));
    let algebra = LieAlgebra::new(
        format!("{}_cyl", alg.name),
        Coframe::new(n6, None)?,
        d_coframe,
        alg.params.clone(),
    )?;

    let dt = KForm::basis(&alg.params, n6, &[n6 as u8]);
    let eta6 = eta.lift_to_dim(n6);
    let (f1, f2, f3) = (f1.lift_to_dim(n6), f2.lift_to_dim(n6), f3.lift_to_dim(n6));

    let omega = f1.neg().sub(&eta6.wedge(&dt)?)?;
    let psi_plus = f2.wedge(&eta6)?.sub(&f3.wedge(&dt)?)?;
    let psi_minus = f3.wedge(&eta6)?.add(&f2.wedge(&dt)?)?;
    Ok(Cylinder { algebra, omega, psi_plus, psi_minus })
}

/// The generalized Heisenberg algebra h(2,1) over parameters `a, b, c`:
/// `de^i = 0` for i <= 4 and the anti-self-dual `de^5`.
pub fn heisenberg_h21(params: &Arc<ParamSet>) -> Result<LieAlgebra> {
    let n = 5;
    let a = RingElement::var(params, "a")?;
    let b = RingElement::var(params, "b")?;
    let c = RingElement::var(params, "c")?;
    let mut de5 = KForm::zero(params, n, 2);
    de5.add_term(&[1, 2], a.clone());
    de5.add_term(&[3, 4], a.neg());
    de5.add_term(&[1, 3], b.clone());
    de5.add_term(&[2, 4], b);
    de5.add_term(&[1, 4], c.clone());
    de5.add_term(&[2, 3], c.neg());
    let mut d_coframe: Vec<KForm> = (0..4).map(|_| KForm::zero(params, n, 2)).collect();
    d_coframe.push(de5);
    LieAlgebra::new("h21", Coframe::new(n, Some(5))?, d_coframe, params.clone())
}
