//! Almost-contact and SU(2)-structure machinery in dimension five:
//! defining-relation checks, the endomorphisms `psi_p`, the Nijenhuis
//! tensor, the Lee form, the characteristic torsion, the instanton test
//! and constant-factor conformal scaling.

use crate::connection::CurvatureForms;
use crate::error::{Error, Result};
use crate::exterior::{Coframe, DenseTensor, KForm};
use crate::liealg::{cylinder_extend, Cylinder, LieAlgebra};
use crate::ring::{rat, Rat, RingElement};

/// An SU(2)-structure `(eta, F1, F2, F3)` with the derived endomorphisms
/// `psi_p` defined by `g(X, psi_p Y) = F_p(X, Y)`; in the orthonormal
/// coframe `(psi_p)^i_j = (F_p)_{ij}`.
#[derive(Debug, Clone)]
pub struct SU2Structure {
    pub eta: KForm,
    pub f: [KForm; 3],
    pub psi: [DenseTensor; 3],
    pub reeb: usize,
}

impl SU2Structure {
    pub fn new(alg: &LieAlgebra, eta: KForm, f: [KForm; 3]) -> Result<Self> {
        if eta.degree() != 1 || f.iter().any(|x| x.degree() != 2) {
            return Err(Error::mismatch("structure forms have wrong degrees"));
        }
        let reeb = crate::dsl::single_coframe_index(&eta).ok_or_else(|| {
            Error::Unsupported("eta must be a single coframe element with coefficient 1".into())
        })?;
        let eta = eta.extend_params(&alg.params)?;
        let f = [
            f[0].extend_params(&alg.params)?,
            f[1].extend_params(&alg.params)?,
            f[2].extend_params(&alg.params)?,
        ];
        let psi = [f[0].to_tensor(), f[1].to_tensor(), f[2].to_tensor()];
        Ok(SU2Structure { eta, f, psi, reeb })
    }

    /// The standard structure `eta = e^5`, `F1 = e^{12}+e^{34}`,
    /// `F2 = e^{13}+e^{42}`, `F3 = e^{14}+e^{23}`.
    pub fn standard(alg: &LieAlgebra) -> Result<Self> {
        let n = alg.dim();
        if n != 5 {
            return Err(Error::mismatch("the standard structure lives in dimension 5"));
        }
        let ps = &alg.params;
        let e = |i: &[u8]| KForm::basis(ps, n, i);
        let eta = e(&[5]);
        let f1 = e(&[1, 2]).add(&e(&[3, 4]))?;
        let f2 = e(&[1, 3]).add(&e(&[4, 2]))?;
        let f3 = e(&[1, 4]).add(&e(&[2, 3]))?;
        Self::new(alg, eta, [f1, f2, f3])
    }

    pub fn psi1(&self) -> &DenseTensor {
        &self.psi[0]
    }
}

/// A constant-dilaton heterotic background: algebra, structure and the NS
/// flux `H = T`, the torsion of the characteristic connection.
#[derive(Debug, Clone)]
pub struct HeteroticBackground {
    pub alg: LieAlgebra,
    pub structure: SU2Structure,
    pub dilaton: Rat,
    pub flux: KForm,
}

impl HeteroticBackground {
    pub fn new(alg: LieAlgebra, structure: SU2Structure) -> Result<Self> {
        let flux = characteristic_torsion(&alg, &structure)?;
        Ok(HeteroticBackground { alg, structure, dilaton: Rat::from_integer(0.into()), flux })
    }
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub defsu2_ok: bool,
    pub contact_ok: bool,
    pub quaternion_ok: bool,
    pub witness: Option<String>,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        self.defsu2_ok && self.contact_ok && self.quaternion_ok
    }
}

/// Verify the defining relations: `F_p ^ F_q = delta_{pq} v` with
/// `v ^ eta != 0`, the almost-contact relations for each `psi_p`, and the
/// quaternionic relation (`psi_1` followed by `psi_2` equals `psi_3`).
pub fn structure_check(alg: &LieAlgebra, s: &SU2Structure) -> StructureReport {
    let n = alg.dim();
    let mut witness = None;

    let v = s.f[0].wedge(&s.f[0]).expect("same coframe");
    let mut defsu2_ok = !v.wedge(&s.eta).expect("same coframe").is_zero();
    if !defsu2_ok {
        witness.get_or_insert_with(|| "v ^ eta = 0".to_string());
    }
    for p in 0..3 {
        for q in 0..3 {
            let w = s.f[p].wedge(&s.f[q]).expect("same coframe");
            let expect = if p == q { v.clone() } else { KForm::zero(&alg.params, n, 4) };
            if w != expect {
                defsu2_ok = false;
                witness.get_or_insert_with(|| {
                    format!("F{} ^ F{} = {}", p + 1, q + 1, w.render())
                });
            }
        }
    }

    // acont1: psi(xi) = 0, psi^2 = -id + eta (x) xi, g(psi., psi.) = g - eta (x) eta
    let mut contact_ok = true;
    let id = DenseTensor::identity(&alg.params, n);
    for (p, psi) in s.psi.iter().enumerate() {
        for i in 1..=n {
            if !psi.get(&[i, s.reeb]).is_zero() {
                contact_ok = false;
                witness.get_or_insert_with(|| format!("psi{}(xi) != 0", p + 1));
            }
        }
        let sq = psi.matmul(psi).expect("rank 2");
        let mut expect = id.neg();
        expect.add_at(&[s.reeb, s.reeb], &RingElement::one(&alg.params));
        if sq != expect {
            contact_ok = false;
            witness.get_or_insert_with(|| format!("psi{}^2 != -id + eta(x)xi", p + 1));
        }
        // sum_s psi^s_i psi^s_j = delta_ij - eta_i eta_j
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = RingElement::zero(&alg.params);
                for t in 1..=n {
                    acc = acc.add(&psi.get(&[t, i]).mul(psi.get(&[t, j])));
                }
                let mut expect = RingElement::zero(&alg.params);
                if i == j {
                    expect = RingElement::one(&alg.params);
                }
                if i == s.reeb && j == s.reeb {
                    expect = expect.sub(&RingElement::one(&alg.params));
                }
                if acc != expect {
                    contact_ok = false;
                    witness.get_or_insert_with(|| format!("psi{} not metric-compatible", p + 1));
                }
            }
        }
    }

    // orientation surrogate: applying psi_1 then psi_2 equals psi_3
    let composed = s.psi[1].matmul(&s.psi[0]).expect("rank 2");
    let quaternion_ok = composed == s.psi[2];
    if !quaternion_ok {
        witness.get_or_insert_with(|| "psi1 psi2 != psi3".to_string());
    }

    StructureReport { defsu2_ok, contact_ok, quaternion_ok, witness }
}

/// Nijenhuis tensor of the almost contact structure `psi = psi_1`, lowered:
/// `N = [psi., psi.] + psi^2 [.,.] - psi[psi., .] - psi[., psi.]
///  + d eta (x) xi`.
pub fn nijenhuis(alg: &LieAlgebra, s: &SU2Structure) -> DenseTensor {
    let n = alg.dim();
    let psi = s.psi1();
    let d_eta = alg.exterior_derivative(&s.eta).to_tensor();

    // brackets of frame fields as component vectors
    let bracket = |i: usize, j: usize| alg.bracket(i, j);
    // psi applied to a component vector
    let apply_psi = |v: &[RingElement]| -> Vec<RingElement> {
        (1..=n)
            .map(|i| {
                let mut acc = RingElement::zero(&alg.params);
                for j in 1..=n {
                    acc = acc.add(&psi.get(&[i, j]).mul(&v[j - 1]));
                }
                acc
            })
            .collect()
    };

    DenseTensor::from_fn(&alg.params, n, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        // [psi E_i, psi E_j] = sum_{s,t} psi^s_i psi^t_j [E_s, E_t]
        let mut acc = RingElement::zero(&alg.params);
        for ss in 1..=n {
            for t in 1..=n {
                let w = psi.get(&[ss, i]).mul(psi.get(&[t, j]));
                if w.is_zero() {
                    continue;
                }
                acc = acc.add(&w.mul(&alg.structure_const(k, ss, t)));
            }
        }
        // psi^2 [E_i, E_j]
        let bij = bracket(i, j);
        let psib = apply_psi(&bij);
        let psi2b = apply_psi(&psib);
        acc = acc.add(&psi2b[k - 1]);
        // -psi [psi E_i, E_j] - psi [E_i, psi E_j]
        for ss in 1..=n {
            let w = psi.get(&[ss, i]);
            if !w.is_zero() {
                let b = bracket(ss, j);
                let pb = apply_psi(&b);
                acc = acc.sub(&w.mul(&pb[k - 1]));
            }
            let w = psi.get(&[ss, j]);
            if !w.is_zero() {
                let b = bracket(i, ss);
                let pb = apply_psi(&b);
                acc = acc.sub(&w.mul(&pb[k - 1]));
            }
        }
        // + d eta (x) xi
        if k == s.reeb {
            acc = acc.add(d_eta.get(&[i, j]));
        }
        acc
    })
}

/// Totally skew-symmetric test for a rank-3 tensor already antisymmetric in
/// the first two slots.
pub fn is_totally_skew(t: &DenseTensor) -> bool {
    let n = t.dim();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if *t.get(&[i, j, k]) != t.get(&[i, k, j]).neg() {
                    return false;
                }
            }
        }
    }
    true
}

/// Lee form `theta_i = 1/2 (dF1)_{ikl} (F1)_{kl}` (full repeated-index sum);
/// `theta(xi) = 0` holds automatically.
pub fn lee_form(alg: &LieAlgebra, s: &SU2Structure) -> KForm {
    let n = alg.dim();
    let df = alg.exterior_derivative(&s.f[0]).to_tensor();
    let f = s.f[0].to_tensor();
    let half = rat(1, 2);
    let mut theta = KForm::zero(&alg.params, n, 1);
    for i in 1..=n {
        let mut acc = RingElement::zero(&alg.params);
        for k in 1..=n {
            for l in 1..=n {
                acc = acc.add(&df.get(&[i, k, l]).mul(f.get(&[k, l])));
            }
        }
        theta.add_term(&[i as u8], acc.scale(&half));
    }
    theta
}

/// Torsion 3-form of the characteristic connection,
/// `T = eta ^ d eta + d^psi F + N` with
/// `(d^psi F)_{ijk} = -(dF)_{str} psi^s_i psi^t_j psi^r_k`.
/// Errors when the Nijenhuis tensor is not totally skew-symmetric.
pub fn characteristic_torsion(alg: &LieAlgebra, s: &SU2Structure) -> Result<KForm> {
    let nij = nijenhuis(alg, s);
    if !is_totally_skew(&nij) {
        return Err(Error::NonSkewNijenhuis(nij.render_nonzero()));
    }
    let n_form = KForm::from_tensor(&nij)?;

    let n = alg.dim();
    let psi = s.psi1();
    let df = alg.exterior_derivative(&s.f[0]).to_tensor();
    let dpsi_f = DenseTensor::from_fn(&alg.params, n, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = RingElement::zero(&alg.params);
        for ss in 1..=n {
            let pi = psi.get(&[ss, i]);
            if pi.is_zero() {
                continue;
            }
            for t in 1..=n {
                let pj = psi.get(&[t, j]);
                if pj.is_zero() {
                    continue;
                }
                for r in 1..=n {
                    let pk = psi.get(&[r, k]);
                    if pk.is_zero() {
                        continue;
                    }
                    acc = acc.sub(&df.get(&[ss, t, r]).mul(pi).mul(pj).mul(pk));
                }
            }
        }
        acc
    });
    let dpsi_form = KForm::from_tensor(&dpsi_f)?;

    let d_eta = alg.exterior_derivative(&s.eta);
    s.eta.wedge(&d_eta)?.add(&dpsi_form)?.add(&n_form)
}

#[derive(Debug, Clone)]
pub struct SusyReport {
    pub df_closed: [bool; 3],
    pub d_eta_asd: bool,
    pub quasi_sasaki: bool,
    /// Degenerate marker: `d eta = 0` means the background has zero flux.
    pub flux_zero: bool,
    pub witness: Option<String>,
}

impl SusyReport {
    pub fn pass(&self) -> bool {
        self.df_closed.iter().all(|&b| b) && self.d_eta_asd && self.quasi_sasaki
    }
}

/// Gravitino + dilatino test with constant dilaton: `dF_p = 0`,
/// `*_H d eta = -d eta`, and vanishing Nijenhuis tensor.
pub fn susy_check(alg: &LieAlgebra, s: &SU2Structure) -> SusyReport {
    let mut witness = None;
    let mut df_closed = [true; 3];
    for p in 0..3 {
        let df = alg.exterior_derivative(&s.f[p]);
        if !df.is_zero() {
            df_closed[p] = false;
            witness.get_or_insert_with(|| format!("dF{} = {}", p + 1, df.render()));
        }
    }
    let d_eta = alg.exterior_derivative(&s.eta);
    let d_eta_asd = match d_eta.hodge_h(s.reeb) {
        Ok(star) => {
            let ok = star == d_eta.neg();
            if !ok {
                witness.get_or_insert_with(|| format!("*_H d eta = {}", star.render()));
            }
            ok
        }
        Err(_) => {
            witness.get_or_insert_with(|| "d eta is not horizontal".to_string());
            false
        }
    };
    let nij = nijenhuis(alg, s);
    let quasi_sasaki = nij.is_zero();
    if !quasi_sasaki {
        witness.get_or_insert_with(|| format!("N = {}", nij.render_nonzero()));
    }
    SusyReport { df_closed, d_eta_asd, quasi_sasaki, flux_zero: d_eta.is_zero(), witness }
}

#[derive(Debug, Clone)]
pub struct InstantonReport {
    pub pass: bool,
    pub witness: Option<String>,
}

/// SU(2)-instanton test for curvature forms: for every bundle pair (m,n)
/// the 2-form is psi-invariant, `Omega(psi E_k, psi E_l) = Omega(E_k, E_l)`,
/// and trace-free against psi, `sum_k Omega(E_k, psi E_k) = 0`.
pub fn instanton_check(alg: &LieAlgebra, s: &SU2Structure, curv: &CurvatureForms) -> InstantonReport {
    let n = alg.dim();
    let psi = s.psi1();
    for m in 1..=n {
        for nn in 1..=n {
            let w = curv.omega(m, nn).to_tensor();
            for k in 1..=n {
                for l in 1..=n {
                    let mut acc = RingElement::zero(&alg.params);
                    for ss in 1..=n {
                        for t in 1..=n {
                            let p = psi.get(&[ss, k]).mul(psi.get(&[t, l]));
                            if p.is_zero() {
                                continue;
                            }
                            acc = acc.add(&p.mul(w.get(&[ss, t])));
                        }
                    }
                    if acc != *w.get(&[k, l]) {
                        return InstantonReport {
                            pass: false,
                            witness: Some(format!(
                                "Omega^{m}_{nn}(psi E_{k}, psi E_{l}) - Omega^{m}_{nn}(E_{k}, E_{l}) = {}",
                                acc.sub(w.get(&[k, l])).render_compact()
                            )),
                        };
                    }
                }
            }
            let mut tr = RingElement::zero(&alg.params);
            for k in 1..=n {
                for t in 1..=n {
                    tr = tr.add(&w.get(&[k, t]).mul(psi.get(&[t, k])));
                }
            }
            if !tr.is_zero() {
                return InstantonReport {
                    pass: false,
                    witness: Some(format!(
                        "sum_k Omega^{m}_{nn}(E_k, psi E_k) = {}",
                        tr.render_compact()
                    )),
                };
            }
        }
    }
    InstantonReport { pass: true, witness: None }
}

/// Constant-factor special conformal transformation: the horizontal coframe
/// is rescaled `e^i -> t e^i` while `eta, xi, psi` are unchanged. Returns
/// the algebra in the rescaled orthonormal coframe together with the
/// structure re-expressed there.
pub fn conformal_scale(
    alg: &LieAlgebra,
    s: &SU2Structure,
    t_name: &str,
) -> Result<(LieAlgebra, SU2Structure)> {
    let new_params = alg.params.extended(t_name)?;
    let t = RingElement::var(&new_params, t_name)?;
    let t_inv = t.inv()?;
    let n = alg.dim();
    let scale_of = |i: usize| -> RingElement {
        if i == s.reeb {
            RingElement::one(&new_params)
        } else {
            t.clone()
        }
    };
    let mut d_coframe = Vec::with_capacity(n);
    for i in 1..=n {
        let de = alg.d_of_coframe(i).extend_params(&new_params)?;
        let mut out = KForm::zero(&new_params, n, 2);
        for (idxs, c) in de.terms() {
            // e^j = t^{-1} ehat^j on horizontal directions
            let mut coeff = c.mul(&scale_of(i));
            for &j in idxs {
                if j as usize != s.reeb {
                    coeff = coeff.mul(&t_inv);
                }
            }
            out.add_term(idxs, coeff);
        }
        d_coframe.push(out);
    }
    let scaled = LieAlgebra::new(
        format!("{}_scaled", alg.name),
        Coframe::new(n, Some(s.reeb))?,
        d_coframe,
        new_params.clone(),
    )?;
    let eta = s.eta.extend_params(&new_params)?;
    let f = [
        s.f[0].extend_params(&new_params)?,
        s.f[1].extend_params(&new_params)?,
        s.f[2].extend_params(&new_params)?,
    ];
    let structure = SU2Structure::new(&scaled, eta, f)?;
    Ok((scaled, structure))
}

/// Cylinder lift carrying the structure forms of `s`.
pub fn cylinder_of(alg: &LieAlgebra, s: &SU2Structure) -> Result<Cylinder> {
    cylinder_extend(alg, &s.eta, &s.f[0], &s.f[1], &s.f[2])
}

/// Cylinder lift straight from a parsed source; errors when the file has
/// no structure block.
pub fn cylinder_from_source(src: &crate::dsl::AlgebraSource) -> Result<Cylinder> {
    let block = src.structure.as_ref().ok_or(Error::MissingStructure)?;
    let alg = src.algebra()?;
    let s = SU2Structure::new(
        &alg,
        block.eta.clone(),
        [block.f[0].clone(), block.f[1].clone(), block.f[2].clone()],
    )?;
    cylinder_of(&alg, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{curvature, instanton_connection, levi_civita, with_torsion};
    use crate::liealg::heisenberg_h21;
    use crate::ring::{rat_int, ParamSet};
    use std::sync::Arc;

    fn abc() -> Arc<ParamSet> {
        ParamSet::new(vec!["a".into(), "b".into(), "c".into()]).unwrap()
    }

    fn setup() -> (LieAlgebra, SU2Structure) {
        let alg = heisenberg_h21(&abc()).unwrap();
        let s = SU2Structure::standard(&alg).unwrap();
        (alg, s)
    }

    #[test]
    fn psi_convention_matches_worked_example() {
        // with F1 = e12 + e34: psi(E_1) = -E_2, psi(E_3) = -E_4
        let (_, s) = setup();
        let psi = s.psi1();
        assert_eq!(*psi.get(&[2, 1]), RingElement::int(s.eta.params(), -1));
        assert_eq!(*psi.get(&[4, 3]), RingElement::int(s.eta.params(), -1));
        assert!(psi.get(&[1, 1]).is_zero());
    }

    #[test]
    fn standard_structure_passes_all_checks() {
        let (alg, s) = setup();
        let rep = structure_check(&alg, &s);
        assert!(rep.pass(), "witness: {:?}", rep.witness);
        // v = 2 e^{1234}
        let v = s.f[0].wedge(&s.f[0]).unwrap();
        assert_eq!(v, KForm::basis(&alg.params, 5, &[1, 2, 3, 4]).scale_rat(&rat_int(2)));
    }

    #[test]
    fn swapped_f2_f3_fails_quaternion_check() {
        let (alg, _) = setup();
        let e = |i: &[u8]| KForm::basis(&alg.params, 5, i);
        let eta = e(&[5]);
        let f1 = e(&[1, 2]).add(&e(&[3, 4])).unwrap();
        let f2 = e(&[1, 3]).add(&e(&[4, 2])).unwrap();
        let f3 = e(&[1, 4]).add(&e(&[2, 3])).unwrap();
        let swapped = SU2Structure::new(&alg, eta, [f1, f3.clone(), f2.clone()]).unwrap();
        let rep = structure_check(&alg, &swapped);
        assert!(rep.defsu2_ok);
        assert!(!rep.quaternion_ok);
        // oracle: explicit matrix product shows psi1 psi3 = -psi2
        let composed = swapped.psi[1].matmul(&swapped.psi[0]).unwrap();
        assert_eq!(composed, f2.to_tensor().neg());
    }

    #[test]
    fn anti_self_dual_f1_fails_defsu2() {
        let (alg, _) = setup();
        let e = |i: &[u8]| KForm::basis(&alg.params, 5, i);
        let eta = e(&[5]);
        let f1 = e(&[1, 2]).sub(&e(&[3, 4])).unwrap();
        let f2 = e(&[1, 3]).add(&e(&[4, 2])).unwrap();
        let f3 = e(&[1, 4]).add(&e(&[2, 3])).unwrap();
        let s = SU2Structure::new(&alg, eta, [f1.clone(), f2, f3]).unwrap();
        let rep = structure_check(&alg, &s);
        assert!(!rep.defsu2_ok);
        // oracle: F1 ^ F1 = -2 e^{1234} differs from F2 ^ F2 = 2 e^{1234}
        assert_eq!(
            f1.wedge(&f1).unwrap(),
            KForm::basis(&alg.params, 5, &[1, 2, 3, 4]).scale_rat(&rat_int(-2))
        );
    }

    #[test]
    fn nijenhuis_vanishes_on_h21_and_abelian() {
        let (alg, s) = setup();
        assert!(nijenhuis(&alg, &s).is_zero());

        let ab = LieAlgebra::abelian(5, abc(), Some(5));
        let s = SU2Structure::standard(&ab).unwrap();
        assert!(nijenhuis(&ab, &s).is_zero());
    }

    #[test]
    fn lee_form_cases() {
        let (alg, s) = setup();
        // dF1 = 0 so theta = 0
        assert!(lee_form(&alg, &s).is_zero());

        // an algebra with dF1 = beta ^ F1 for beta = q e^1: direct
        // contraction gives theta = beta
        let ps = ParamSet::new(vec!["q".into()]).unwrap();
        let q = RingElement::var(&ps, "q").unwrap();
        let q_half = q.scale(&rat(1, 2));
        // want d(e12 + e34) = q e^1 ^ (e12 + e34) = q e^{134}:
        // take de^3 = q/2 e^{13}, de^4 = q/2 e^{14}, others 0
        let mut d_coframe = vec![KForm::zero(&ps, 5, 2); 5];
        let mut de3 = KForm::zero(&ps, 5, 2);
        de3.add_term(&[1, 3], q_half.clone());
        let mut de4 = KForm::zero(&ps, 5, 2);
        de4.add_term(&[1, 4], q_half.clone());
        d_coframe[2] = de3;
        d_coframe[3] = de4;
        let alg2 = LieAlgebra::new("lee", Coframe::new(5, Some(5)).unwrap(), d_coframe, ps.clone())
            .unwrap();
        let s2 = SU2Structure::standard(&alg2).unwrap();
        let df1 = alg2.exterior_derivative(&s2.f[0]);
        let mut beta = KForm::zero(&ps, 5, 1);
        beta.add_term(&[1], q.clone());
        assert_eq!(df1, beta.wedge(&s2.f[0]).unwrap());
        let theta = lee_form(&alg2, &s2);
        // oracle: theta_1 = 1/2 [(dF)_{134} F_{34} + (dF)_{143} F_{43}] = q
        let df_t = df1.to_tensor();
        let f_t = s2.f[0].to_tensor();
        let mut acc = RingElement::zero(&ps);
        for k in 1..=5 {
            for l in 1..=5 {
                acc = acc.add(&df_t.get(&[1, k, l]).mul(f_t.get(&[k, l])));
            }
        }
        assert_eq!(acc.scale(&rat(1, 2)), q);
        assert_eq!(theta, beta);
        // theta(xi) = 0
        assert!(theta.get(&[5]).is_zero());
    }

    #[test]
    fn characteristic_torsion_is_eta_wedge_d_eta() {
        let (alg, s) = setup();
        let t = characteristic_torsion(&alg, &s).unwrap();
        let expected = s.eta.wedge(alg.d_of_coframe(5)).unwrap();
        assert_eq!(t, expected);
        assert_eq!(
            t.render(),
            "a*e125 + b*e135 + c*e145 - c*e235 + b*e245 - a*e345"
        );

        // contracting with xi reproduces d eta: T_{5ij} = d-eta_{ij}
        let tt = t.to_tensor();
        let de = alg.exterior_derivative(&s.eta).to_tensor();
        for i in 1..=5usize {
            for j in 1..=5usize {
                assert_eq!(tt.get(&[5, i, j]), de.get(&[i, j]));
            }
        }
        assert_eq!(t.interior(5), alg.exterior_derivative(&s.eta));

        // abelian: T = 0
        let ab = LieAlgebra::abelian(5, abc(), Some(5));
        let s = SU2Structure::standard(&ab).unwrap();
        assert!(characteristic_torsion(&ab, &s).unwrap().is_zero());
    }

    #[test]
    fn characteristic_torsion_with_lee_component() {
        // dF1 = beta ^ F1 with beta horizontal: d^psi F = -(beta o psi) ^ F1
        let ps = ParamSet::new(vec!["q".into()]).unwrap();
        let q = RingElement::var(&ps, "q").unwrap();
        let q_half = q.scale(&rat(1, 2));
        let mut d_coframe = vec![KForm::zero(&ps, 5, 2); 5];
        let mut de3 = KForm::zero(&ps, 5, 2);
        de3.add_term(&[1, 3], q_half.clone());
        let mut de4 = KForm::zero(&ps, 5, 2);
        de4.add_term(&[1, 4], q_half.clone());
        d_coframe[2] = de3;
        d_coframe[3] = de4;
        let alg = LieAlgebra::new("lee", Coframe::new(5, Some(5)).unwrap(), d_coframe, ps.clone())
            .unwrap();
        let s = SU2Structure::standard(&alg).unwrap();

        // oracle: triple psi-contraction of dF
        let df = alg.exterior_derivative(&s.f[0]).to_tensor();
        let psi = s.psi1();
        let mut oracle = DenseTensor::zero(&ps, 5, 3);
        for i in 1..=5usize {
            for j in 1..=5usize {
                for k in 1..=5usize {
                    let mut acc = RingElement::zero(&ps);
                    for a in 1..=5usize {
                        for b in 1..=5usize {
                            for c in 1..=5usize {
                                acc = acc.sub(
                                    &df.get(&[a, b, c])
                                        .mul(psi.get(&[a, i]))
                                        .mul(psi.get(&[b, j]))
                                        .mul(psi.get(&[c, k])),
                                );
                            }
                        }
                    }
                    oracle.set(&[i, j, k], acc);
                }
            }
        }
        // beta o psi: (beta o psi)(X) = beta(psi X); beta = q e^1 and
        // psi E_2 = E_1 gives beta o psi = q e^2
        let mut beta_psi = KForm::zero(&ps, 5, 1);
        beta_psi.add_term(&[2], q.clone());
        let expected = beta_psi.wedge(&s.f[0]).unwrap().neg();
        assert_eq!(KForm::from_tensor(&oracle).unwrap(), expected);

        // nijenhuis is nonzero and non-skew here, so the op must refuse
        let nij = nijenhuis(&alg, &s);
        if is_totally_skew(&nij) {
            // if it were skew the torsion assembles all three pieces
            let t = characteristic_torsion(&alg, &s).unwrap();
            let d_eta = alg.exterior_derivative(&s.eta);
            let manual = s
                .eta
                .wedge(&d_eta)
                .unwrap()
                .add(&expected)
                .unwrap()
                .add(&KForm::from_tensor(&nij).unwrap())
                .unwrap();
            assert_eq!(t, manual);
        } else {
            assert!(matches!(
                characteristic_torsion(&alg, &s),
                Err(Error::NonSkewNijenhuis(_))
            ));
        }
    }

    #[test]
    fn susy_check_on_families() {
        let (alg, s) = setup();
        let rep = susy_check(&alg, &s);
        assert!(rep.pass(), "witness: {:?}", rep.witness);
        assert!(!rep.flux_zero);

        // Sasaki-like alteration de^5 = 2 F1: d eta self-dual, must fail
        let ps = abc();
        let mut d_coframe = vec![KForm::zero(&ps, 5, 2); 5];
        let f1 = KForm::basis(&ps, 5, &[1, 2]).add(&KForm::basis(&ps, 5, &[3, 4])).unwrap();
        d_coframe[4] = f1.scale_rat(&rat_int(2));
        let sasaki =
            LieAlgebra::new("sasaki", Coframe::new(5, Some(5)).unwrap(), d_coframe, ps.clone())
                .unwrap();
        let s2 = SU2Structure::standard(&sasaki).unwrap();
        let rep2 = susy_check(&sasaki, &s2);
        assert!(!rep2.d_eta_asd);
        // oracle: hodge of a self-dual form is itself
        let d_eta = sasaki.exterior_derivative(&s2.eta);
        assert_eq!(d_eta.hodge_h(5).unwrap(), d_eta);

        // abelian: closed but flux zero
        let ab = LieAlgebra::abelian(5, abc(), Some(5));
        let s3 = SU2Structure::standard(&ab).unwrap();
        let rep3 = susy_check(&ab, &s3);
        assert!(rep3.df_closed.iter().all(|&b| b));
        assert!(rep3.flux_zero);
    }

    #[test]
    fn d_eta_psi_invariance_on_susy_background() {
        let (alg, s) = setup();
        let de = alg.exterior_derivative(&s.eta).to_tensor();
        let psi = s.psi1();
        for k in 1..=5usize {
            for l in 1..=5usize {
                let mut acc = RingElement::zero(&alg.params);
                for a in 1..=5usize {
                    for b in 1..=5usize {
                        acc = acc.add(&de.get(&[a, b]).mul(psi.get(&[a, k])).mul(psi.get(&[b, l])));
                    }
                }
                assert_eq!(acc, *de.get(&[k, l]));
            }
        }
    }

    #[test]
    fn instanton_checks() {
        let (alg, s) = setup();
        let ps6 = ParamSet::new(
            ["a", "b", "c", "lambda", "mu", "tau"].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap();
        let alg6 = alg.extend_params(&ps6).unwrap();
        let s6 = SU2Structure::standard(&alg6).unwrap();
        let l = RingElement::var(&ps6, "lambda").unwrap();
        let m = RingElement::var(&ps6, "mu").unwrap();
        let t = RingElement::var(&ps6, "tau").unwrap();

        // the gauge family passes
        let inst = instanton_connection(&alg6, &l, &m, &t).unwrap();
        let curv = curvature(&alg6, &inst);
        assert!(instanton_check(&alg6, &s6, &curv).pass);

        // R+ passes
        let lc = levi_civita(&alg);
        let flux = s.eta.wedge(alg.d_of_coframe(5)).unwrap();
        let plus = with_torsion(&lc, &flux, 1).unwrap();
        let curv_plus = curvature(&alg, &plus);
        assert!(instanton_check(&alg, &s, &curv_plus).pass);

        // R^g fails with a witness
        let curv_g = curvature(&alg, &lc);
        let rep = instanton_check(&alg, &s, &curv_g);
        assert!(!rep.pass);
        assert!(rep.witness.is_some());

        // oracle for the failing trace: sum_k Omega^1_2(E_k, psi E_k)
        // = -(1/4) r * sum_k e34(E_k, psi E_k) = r/2 != 0
        let w = curv_g.omega(1, 2).to_tensor();
        let psi = s.psi1();
        let mut tr = RingElement::zero(&alg.params);
        for k in 1..=5usize {
            for t in 1..=5usize {
                tr = tr.add(&w.get(&[k, t]).mul(psi.get(&[t, k])));
            }
        }
        let a = RingElement::var(&alg.params, "a").unwrap();
        let b = RingElement::var(&alg.params, "b").unwrap();
        let c = RingElement::var(&alg.params, "c").unwrap();
        let r = a.mul(&a).add(&b.mul(&b)).add(&c.mul(&c));
        assert_eq!(tr, r.scale(&rat(1, 2)));
    }

    #[test]
    fn conformal_scaling() {
        let (alg, s) = setup();
        let (scaled, s2) = conformal_scale(&alg, &s, "t").unwrap();

        // d ehat^5 = t^{-2} (a (ehat^12 - ehat^34) + ...): oracle by
        // substitution e^i = t^{-1} ehat^i
        let t = RingElement::var(&scaled.params, "t").unwrap();
        let t2_inv = t.mul(&t).inv().unwrap();
        let de5_old = alg.d_of_coframe(5).extend_params(&scaled.params).unwrap();
        assert_eq!(*scaled.d_of_coframe(5), de5_old.scale(&t2_inv));

        // anti-self-duality is preserved and susy still passes symbolically
        let rep = susy_check(&scaled, &s2);
        assert!(rep.pass(), "witness: {:?}", rep.witness);

        // constant scale: the Lee form stays zero (oracle: direct
        // contraction on the scaled structure)
        assert!(lee_form(&scaled, &s2).is_zero());

        // t = 1 is the identity transformation
        for i in 1..=5usize {
            let orig = alg.d_of_coframe(i);
            let new = scaled.d_of_coframe(i);
            for (idxs, c) in new.terms() {
                let mut vals = vec![rat_int(2), rat_int(3), rat_int(5)];
                vals.push(rat_int(1)); // t = 1
                let got = c.eval(&vals).unwrap();
                let want = orig.get(idxs).eval(&vals[..3]).unwrap();
                assert_eq!(got, want);
            }
        }

        // collision with an existing parameter name is an error
        assert!(conformal_scale(&alg, &s, "a").is_err());
    }

    #[test]
    fn cylinder_from_source_needs_structure() {
        let with = crate::dsl::AlgebraSource::parse(
            "algebra a\nparams\ndim 5\nde 1 = 0\nde 2 = 0\nde 3 = 0\nde 4 = 0\nde 5 = 0\nstructure\neta = e5\nF1 = e12 + e34\nF2 = e13 + e42\nF3 = e14 + e23\n",
        )
        .unwrap();
        let cyl = cylinder_from_source(&with).unwrap();
        assert_eq!(cyl.algebra.dim(), 6);

        let without = crate::dsl::AlgebraSource::parse(
            "algebra a\nparams\ndim 5\nde 1 = 0\nde 2 = 0\nde 3 = 0\nde 4 = 0\nde 5 = 0\n",
        )
        .unwrap();
        assert!(matches!(cylinder_from_source(&without), Err(Error::MissingStructure)));
    }

    #[test]
    fn quaternion_relation_on_standard_triple() {
        let (alg, s) = setup();
        // independent 5x5 matrix-product oracle
        let mut prod = vec![vec![RingElement::zero(&alg.params); 5]; 5];
        for i in 1..=5usize {
            for j in 1..=5usize {
                let mut acc = RingElement::zero(&alg.params);
                for k in 1..=5usize {
                    acc = acc.add(&s.psi[1].get(&[i, k]).mul(s.psi[0].get(&[k, j])));
                }
                prod[i - 1][j - 1] = acc;
            }
        }
        for i in 1..=5usize {
            for j in 1..=5usize {
                assert_eq!(prod[i - 1][j - 1], *s.psi[2].get(&[i, j]));
            }
        }
    }
}
