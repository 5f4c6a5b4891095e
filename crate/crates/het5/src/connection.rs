//! Metric connections on an invariant orthonormal coframe: Levi-Civita,
//! the torsion connections, the instanton family, curvature in both the
//! form and tensor pictures, covariant derivatives, torsion extraction and
//! the normalised first Pontrjagin form `P = 8 pi^2 p_1`.
//!
//! Conventions: `omega_{ji}(E_k) = g(nabla_{E_k} E_j, E_i)` with
//! `omega^i_j = omega_{ji}`; curvature `Omega^i_j = d omega^i_j +
//! omega^i_k ^ omega^k_j`; tensor `R_{ijkl} = Omega^l_k(E_i, E_j)`;
//! Ricci trace `Ric_{mn} = R_{imni}` summed over i.

use crate::error::{Error, Result};
use crate::exterior::{DenseTensor, KForm};
use crate::liealg::LieAlgebra;
use crate::ring::{rat, RingElement};

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionLabel {
    LeviCivita,
    Plus,
    Minus,
    Instanton(RingElement, RingElement, RingElement),
    Custom,
}

/// An n x n matrix of connection 1-forms for a metric connection.
#[derive(Debug, Clone)]
pub struct ConnectionForms {
    dim: usize,
    /// `omega[i-1][j-1] = omega^i_j = omega_{ji}`.
    omega: Vec<Vec<KForm>>,
    pub label: ConnectionLabel,
}

impl ConnectionForms {
    pub fn new(omega: Vec<Vec<KForm>>, label: ConnectionLabel) -> Self {
        let dim = omega.len();
        ConnectionForms { dim, omega, label }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `omega^i_j` as a 1-form (indices 1-based).
    pub fn omega(&self, i: usize, j: usize) -> &KForm {
        &self.omega[i - 1][j - 1]
    }

    /// `omega_{ji}(E_k) = g(nabla_{E_k} E_j, E_i)`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> RingElement {
        self.omega(i, j).get(&[k as u8])
    }

    /// Metric compatibility `omega_{ji} = -omega_{ij}`, entrywise.
    pub fn is_metric(&self) -> bool {
        for i in 1..=self.dim {
            for j in 1..=i {
                if *self.omega(i, j) != self.omega(j, i).neg() {
                    return false;
                }
            }
        }
        true
    }
}

/// The Levi-Civita connection of the invariant orthonormal metric, by the
/// Koszul formula on coframe vectors:
/// `2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(alg: &LieAlgebra) -> ConnectionForms {
    let n = alg.dim();
    let half = rat(1, 2);
    let c = |i: usize, j: usize, k: usize| alg.structure_const(k, i, j);
    let mut omega = vec![vec![KForm::zero(&alg.params, n, 1); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let mut form = KForm::zero(&alg.params, n, 1);
            for k in 1..=n {
                // omega_{ji}(E_k) = 1/2 (c_{kji} - c_{jik} + c_{ikj})
                let v = c(k, j, i).sub(&c(j, i, k)).add(&c(i, k, j)).scale(&half);
                form.add_term(&[k as u8], v);
            }
            omega[i - 1][j - 1] = form;
        }
    }
    ConnectionForms::new(omega, ConnectionLabel::LeviCivita)
}

/// Add totally skew torsion: `omega_{ji}(E_k) += sign/2 * T(E_k, E_j, E_i)`.
pub fn with_torsion(base: &ConnectionForms, torsion: &KForm, sign: i8) -> Result<ConnectionForms> {
    if torsion.degree() != 3 {
        return Err(Error::mismatch(format!(
            "torsion must be a 3-form, got degree {}",
            torsion.degree()
        )));
    }
    if torsion.dim() != base.dim() {
        return Err(Error::mismatch("torsion on a different coframe"));
    }
    let n = base.dim();
    let half = if sign >= 0 { rat(1, 2) } else { rat(-1, 2) };
    let t = torsion.to_tensor();
    let mut omega = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let mut form = base.omega(i, j).clone();
            for k in 1..=n {
                form.add_term(&[k as u8], t.get(&[k, j, i]).scale(&half));
            }
            row.push(form);
        }
        omega.push(row);
    }
    let label = match (&base.label, sign >= 0) {
        (ConnectionLabel::LeviCivita, true) => ConnectionLabel::Plus,
        (ConnectionLabel::LeviCivita, false) => ConnectionLabel::Minus,
        _ => ConnectionLabel::Custom,
    };
    Ok(ConnectionForms::new(omega, label))
}

/// The instanton family `A_{lambda,mu,tau}`: the only nonzero connection
/// forms are multiples of `e^reeb` in the anti-self-dual index pattern.
pub fn instanton_connection(
    alg: &LieAlgebra,
    lambda: &RingElement,
    mu: &RingElement,
    tau: &RingElement,
) -> Result<ConnectionForms> {
    let n = alg.dim();
    let reeb = alg
        .coframe
        .reeb_index
        .ok_or_else(|| Error::Unsupported("instanton connection needs a distinguished e^5".into()))?;
    let mut omega = vec![vec![KForm::zero(&alg.params, n, 1); n]; n];
    // sigma^1_2 = -sigma^3_4 = -lambda e^5, sigma^1_3 = sigma^2_4 = -mu e^5,
    // sigma^1_4 = -sigma^2_3 = -tau e^5, extended antisymmetrically.
    let entries: [(usize, usize, RingElement); 6] = [
        (1, 2, lambda.neg()),
        (3, 4, lambda.clone()),
        (1, 3, mu.neg()),
        (2, 4, mu.neg()),
        (1, 4, tau.neg()),
        (2, 3, tau.clone()),
    ];
    for (i, j, v) in entries {
        let mut f = KForm::zero(&alg.params, n, 1);
        f.add_term(&[reeb as u8], v.clone());
        omega[i - 1][j - 1] = f;
        let mut g = KForm::zero(&alg.params, n, 1);
        g.add_term(&[reeb as u8], v.neg());
        omega[j - 1][i - 1] = g;
    }
    Ok(ConnectionForms::new(
        omega,
        ConnectionLabel::Instanton(lambda.clone(), mu.clone(), tau.clone()),
    ))
}

/// An n x n matrix of curvature 2-forms.
#[derive(Debug, Clone)]
pub struct CurvatureForms {
    dim: usize,
    /// `omega2[i-1][j-1] = Omega^i_j`.
    omega2: Vec<Vec<KForm>>,
}

impl CurvatureForms {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self, i: usize, j: usize) -> &KForm {
        &self.omega2[i - 1][j - 1]
    }

    /// `R_{ijkl} = Omega^l_k(E_i, E_j)` as a rank-4 tensor.
    pub fn tensor(&self, alg: &LieAlgebra) -> DenseTensor {
        let n = self.dim;
        let comps: Vec<Vec<DenseTensor>> = (1..=n)
            .map(|i| (1..=n).map(|j| self.omega(i, j).to_tensor()).collect())
            .collect();
        DenseTensor::from_fn(&alg.params, n, 4, |idx| {
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            comps[l - 1][k - 1].get(&[i, j]).clone()
        })
    }
}

/// Curvature forms `Omega^i_j = d omega^i_j + omega^i_k ^ omega^k_j`.
pub fn curvature(alg: &LieAlgebra, conn: &ConnectionForms) -> CurvatureForms {
    let n = alg.dim();
    let mut omega2 = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let mut f = alg.exterior_derivative(conn.omega(i, j));
            for k in 1..=n {
                let w = conn.omega(i, k).wedge(conn.omega(k, j)).expect("same coframe");
                f = f.add(&w).expect("2-forms");
            }
            row.push(f);
        }
        omega2.push(row);
    }
    CurvatureForms { dim: n, omega2 }
}

/// Curvature through the bracket definition
/// `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z`,
/// an independent code path used to cross-check `curvature`.
pub fn curvature_via_brackets(alg: &LieAlgebra, conn: &ConnectionForms) -> DenseTensor {
    let n = alg.dim();
    // gamma[s][i][j]: nabla_{E_i} E_j = gamma^s_{ij} E_s
    let gamma = |s: usize, i: usize, j: usize| conn.coeff(s, j, i);
    DenseTensor::from_fn(&alg.params, n, 4, |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = RingElement::zero(&alg.params);
        for s in 1..=n {
            acc = acc.add(&gamma(s, j, k).mul(&gamma(l, i, s)));
            acc = acc.sub(&gamma(s, i, k).mul(&gamma(l, j, s)));
            acc = acc.sub(&alg.structure_const(s, i, j).mul(&gamma(l, s, k)));
        }
        acc
    })
}

/// `Ric_{mn} = sum_i R_{imni}`.
pub fn ricci(alg: &LieAlgebra, conn: &ConnectionForms) -> DenseTensor {
    let r = curvature(alg, conn).tensor(alg);
    ricci_from_tensor(alg, &r)
}

pub fn ricci_from_tensor(alg: &LieAlgebra, r: &DenseTensor) -> DenseTensor {
    let n = alg.dim();
    DenseTensor::from_fn(&alg.params, n, 2, |idx| {
        let (m, nn) = (idx[0], idx[1]);
        let mut acc = RingElement::zero(&alg.params);
        for i in 1..=n {
            acc = acc.add(r.get(&[i, m, nn, i]));
        }
        acc
    })
}

/// Covariant derivative of an invariant tensor; the derivative index comes
/// first: `(nabla t)[k, j1..jr] = -sum_alpha omega_{j_alpha s}(E_k) t[.. s ..]`.
pub fn covariant_derivative(alg: &LieAlgebra, conn: &ConnectionForms, t: &DenseTensor) -> DenseTensor {
    let n = alg.dim();
    let rank = t.rank();
    DenseTensor::from_fn(&alg.params, n, rank + 1, |idx| {
        let k = idx[0];
        let j = &idx[1..];
        let mut acc = RingElement::zero(&alg.params);
        let mut slot_idx = j.to_vec();
        for alpha in 0..rank {
            let j_alpha = j[alpha];
            for s in 1..=n {
                // omega_{j_alpha s}(E_k) = omega^s_{j_alpha}(E_k)
                let w = conn.coeff(s, j_alpha, k);
                if w.is_zero() {
                    continue;
                }
                slot_idx[alpha] = s;
                acc = acc.sub(&w.mul(t.get(&slot_idx)));
            }
            slot_idx[alpha] = j_alpha;
        }
        acc
    })
}

/// Torsion tensor `T(X,Y,Z) = g(nabla_X Y - nabla_Y X - [X,Y], Z)`.
pub fn torsion_of(alg: &LieAlgebra, conn: &ConnectionForms) -> DenseTensor {
    let n = alg.dim();
    DenseTensor::from_fn(&alg.params, n, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        conn.coeff(k, j, i)
            .sub(&conn.coeff(k, i, j))
            .sub(&alg.structure_const(k, i, j))
    })
}

/// Normalised Pontrjagin 4-form `P = sum_{i<j} Omega^i_j ^ Omega^i_j`,
/// equal to `8 pi^2 p_1`; purely rational coefficients.
pub fn pontrjagin_p(alg: &LieAlgebra, conn: &ConnectionForms) -> KForm {
    let n = alg.dim();
    let curv = curvature(alg, conn);
    let mut p = KForm::zero(&alg.params, n, 4);
    for i in 1..=n {
        for j in i + 1..=n {
            let o = curv.omega(i, j);
            p = p.add(&o.wedge(o).expect("same coframe")).expect("4-forms");
        }
    }
    p
}
