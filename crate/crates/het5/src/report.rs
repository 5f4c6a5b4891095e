//! Check reports with deterministic text and JSON renderings.

use crate::connection::{
    curvature, instanton_connection, levi_civita, pontrjagin_p, with_torsion, ConnectionForms,
};
use crate::dsl::AlgebraSource;
use crate::error::{Error, Result};
use crate::heterotic::{anomaly_solve, identity_suite, motion_check, ProbeReport};
use crate::liealg::LieAlgebra;
use crate::su2::{instanton_check, structure_check, susy_check, HeteroticBackground, SU2Structure};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            status: if pass { "pass" } else { "fail" }.into(),
            witness: if pass { None } else { witness },
        }
    }

    pub fn pass(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlphaPrime {
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub background: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_prime: Option<AlphaPrime>,
    pub domains: Vec<String>,
}

impl Report {
    /// Listing reports (curvature tables, Pontrjagin values) carry plain
    /// values in `status` instead of verdicts.
    fn is_checklist(&self) -> bool {
        self.checks.iter().any(|c| c.status == "pass" || c.status == "fail")
    }

    /// Verdict over the pass/fail checks; value rows are ignored.
    pub fn pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.status == "pass" || c.status == "fail")
            .all(|c| c.pass())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("background: {}\n", self.background);
        for c in &self.checks {
            out.push_str(&format!("{:<40} {}\n", c.name, c.status));
            if let Some(w) = &c.witness {
                out.push_str(&format!("    witness: {w}\n"));
            }
        }
        if let Some(a) = &self.alpha_prime {
            out.push_str(&format!("alpha' = ({})/({})\n", a.num, a.den));
        }
        for d in &self.domains {
            out.push_str(&format!("domain: {d}\n"));
        }
        if self.is_checklist() {
            out.push_str(&format!(
                "result: {}\n",
                if self.pass() { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

/// Which connection the curvature term of the Bianchi identity uses.
#[derive(Debug, Clone)]
pub enum ConnSelector {
    LeviCivita,
    Plus,
    Minus,
    Instanton(String, String, String),
}

/// Materialise a selector; `plus`/`minus` need the background flux.
pub fn build_connection(
    alg: &LieAlgebra,
    sel: &ConnSelector,
    bg: Option<&HeteroticBackground>,
) -> Result<ConnectionForms> {
    let lc = levi_civita(alg);
    match sel {
        ConnSelector::LeviCivita => Ok(lc),
        ConnSelector::Plus | ConnSelector::Minus => {
            let bg = bg.ok_or(Error::MissingStructure)?;
            let sign = if matches!(sel, ConnSelector::Plus) { 1 } else { -1 };
            with_torsion(&lc, &bg.flux, sign)
        }
        ConnSelector::Instanton(l, m, t) => {
            let l = crate::dsl::parse_scalar(&alg.params, l)?;
            let m = crate::dsl::parse_scalar(&alg.params, m)?;
            let t = crate::dsl::parse_scalar(&alg.params, t)?;
            instanton_connection(alg, &l, &m, &t)
        }
    }
}

pub fn conn_name(sel: &ConnSelector) -> String {
    match sel {
        ConnSelector::LeviCivita => "lc".into(),
        ConnSelector::Plus => "plus".into(),
        ConnSelector::Minus => "minus".into(),
        ConnSelector::Instanton(l, m, t) => format!("inst:{l},{m},{t}"),
    }
}

/// Extend the algebra's parameter list with any instanton parameters that
/// are symbols rather than rationals.
pub fn algebra_with_instanton_params(
    src: &AlgebraSource,
    inst: &(String, String, String),
) -> Result<LieAlgebra> {
    let mut params = src.params.clone();
    for name in [&inst.0, &inst.1, &inst.2] {
        let is_symbol = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if is_symbol && params.index_of(name).is_none() {
            params = params.extended(name)?;
        }
    }
    src.algebra()?.extend_params(&params)
}

/// The structure carried by the source file, on the given algebra.
pub fn structure_of(src: &AlgebraSource, alg: &LieAlgebra) -> Result<SU2Structure> {
    let block = src.structure.as_ref().ok_or(Error::MissingStructure)?;
    SU2Structure::new(
        alg,
        block.eta.extend_params(&alg.params)?,
        [
            block.f[0].extend_params(&alg.params)?,
            block.f[1].extend_params(&alg.params)?,
            block.f[2].extend_params(&alg.params)?,
        ],
    )
}

/// The full verification report: Jacobi, structure relations, supersymmetry,
/// the Ricci identity suite, anomaly cancellation and equations of motion
/// for the selected connection, and the instanton tests.
pub fn full_report(
    src: &AlgebraSource,
    sel: &ConnSelector,
    inst: &(String, String, String),
) -> Result<Report> {
    let alg = algebra_with_instanton_params(src, inst)?;
    let mut checks = Vec::new();
    let mut alpha_out = None;
    let mut domains = Vec::new();

    let jac = alg.jacobi_check();
    checks.push(Check::new("jacobi", jac.pass(), jac.render_witness()));

    let s = structure_of(src, &alg)?;
    let st = structure_check(&alg, &s);
    checks.push(Check::new("structure.defsu2", st.defsu2_ok, st.witness.clone()));
    checks.push(Check::new("structure.contact", st.contact_ok, st.witness.clone()));
    checks.push(Check::new("structure.quaternion", st.quaternion_ok, st.witness.clone()));

    let susy = susy_check(&alg, &s);
    for (p, ok) in susy.df_closed.iter().enumerate() {
        checks.push(Check::new(format!("susy.dF{}_closed", p + 1), *ok, susy.witness.clone()));
    }
    checks.push(Check::new("susy.d_eta_asd", susy.d_eta_asd, susy.witness.clone()));
    checks.push(Check::new("susy.quasi_sasaki", susy.quasi_sasaki, susy.witness.clone()));

    let bg = HeteroticBackground::new(alg.clone(), s.clone())?;
    for e in identity_suite(&alg, &bg).entries {
        checks.push(Check::new(format!("identity.{}", e.name), e.pass, e.witness));
    }

    let conn = build_connection(&alg, sel, Some(&bg))?;
    let inst_conn = build_connection(
        &alg,
        &ConnSelector::Instanton(inst.0.clone(), inst.1.clone(), inst.2.clone()),
        Some(&bg),
    )?;

    match anomaly_solve(&alg, &bg, &conn, &inst_conn) {
        Ok(res) => {
            checks.push(Check::new("anomaly.solvable", true, None));
            alpha_out = Some(AlphaPrime {
                num: res.alpha_prime.numerator().render(&alg.params),
                den: res.alpha_prime.denominator().render(&alg.params),
            });
            domains.push(res.positivity_domain.clone());

            let motion = motion_check(&alg, &bg, &conn, &inst_conn, &res.alpha_prime);
            checks.push(Check::new(
                "motion.einstein",
                motion.einstein_residual.is_zero(),
                Some(motion.einstein_residual.render_nonzero()),
            ));
            checks.push(Check::new(
                "motion.h_divergence",
                motion.h_divergence.is_zero(),
                Some(motion.h_divergence.render_nonzero()),
            ));
            checks.push(Check::new(
                "motion.gauge_divergence",
                motion.gauge_divergence.is_zero(),
                Some(motion.gauge_divergence.render_nonzero()),
            ));
            checks.push(Check::new(
                "motion.gauge_variants_agree",
                motion.gauge_variants_agree,
                Some(motion.gauge_divergence_uncoupled.render_nonzero()),
            ));
            checks.push(Check::new(
                "motion.quadratic_curvature",
                motion.supmot_residual.is_zero(),
                Some(motion.supmot_residual.render_nonzero()),
            ));
        }
        Err(e) => {
            checks.push(Check::new("anomaly.solvable", false, Some(e.to_string())));
        }
    }

    let inst_curv = curvature(&alg, &inst_conn);
    let rep = instanton_check(&alg, &s, &inst_curv);
    checks.push(Check::new("instanton.gauge_connection", rep.pass, rep.witness));
    let plus = with_torsion(&levi_civita(&alg), &bg.flux, 1)?;
    let plus_curv = curvature(&alg, &plus);
    let rep = instanton_check(&alg, &s, &plus_curv);
    checks.push(Check::new("instanton.r_plus", rep.pass, rep.witness));

    Ok(Report { background: src.name.clone(), checks, alpha_prime: alpha_out, domains })
}

/// Connection 1-form table as a report-friendly listing.
pub fn connection_report(alg: &LieAlgebra, conn: &ConnectionForms, label: &str) -> Report {
    let n = alg.dim();
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let f = conn.omega(i, j);
            if !f.is_zero() {
                checks.push(Check {
                    name: format!("omega^{i}_{j}"),
                    status: f.render(),
                    witness: None,
                });
            }
        }
    }
    Report { background: format!("{} [{label}]", alg.name), checks, alpha_prime: None, domains: vec![] }
}

/// Curvature table of a connection as a report-friendly listing.
pub fn curvature_report(alg: &LieAlgebra, conn: &ConnectionForms, label: &str) -> Report {
    let curv = curvature(alg, conn);
    let n = alg.dim();
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let f = curv.omega(i, j);
            if !f.is_zero() {
                checks.push(Check {
                    name: format!("Omega^{i}_{j}"),
                    status: f.render(),
                    witness: None,
                });
            }
        }
    }
    Report { background: format!("{} [{label}]", alg.name), checks, alpha_prime: None, domains: vec![] }
}

/// `P = 8 pi^2 p_1` of a connection as a one-line report.
pub fn pontrjagin_report(alg: &LieAlgebra, conn: &ConnectionForms, label: &str) -> Report {
    let p = pontrjagin_p(alg, conn);
    Report {
        background: format!("{} [{label}]", alg.name),
        checks: vec![Check { name: "P".into(), status: p.render(), witness: None }],
        alpha_prime: None,
        domains: vec![],
    }
}

pub fn probe_report(p: &ProbeReport) -> Report {
    let mut checks = vec![
        Check::new("probe.dF_constraints_force_cii_zero", p.cii_zero, None),
        Check::new("probe.dF_constraints_force_cross_relations", p.ces_ok, None),
        Check::new(
            "probe.no_counterexamples",
            p.counterexamples.is_empty(),
            Some(p.counterexamples.join("; ")),
        ),
    ];
    checks.push(Check {
        name: "probe.samples".into(),
        status: p.samples.to_string(),
        witness: None,
    });
    checks.push(Check {
        name: "probe.nullspace_dim".into(),
        status: p.nullspace_dim.to_string(),
        witness: None,
    });
    Report {
        background: format!("ansatz probe (seed {})", p.seed),
        checks,
        alpha_prime: None,
        domains: vec![],
    }
}

/// Anomaly result as a report.
pub fn anomaly_report(
    src: &AlgebraSource,
    sel: &ConnSelector,
    inst: &(String, String, String),
) -> Result<Report> {
    let alg = algebra_with_instanton_params(src, inst)?;
    let s = structure_of(src, &alg)?;
    let bg = HeteroticBackground::new(alg.clone(), s)?;
    let conn = build_connection(&alg, sel, Some(&bg))?;
    let inst_conn = build_connection(
        &alg,
        &ConnSelector::Instanton(inst.0.clone(), inst.1.clone(), inst.2.clone()),
        Some(&bg),
    )?;
    let res = anomaly_solve(&alg, &bg, &conn, &inst_conn)?;
    Ok(Report {
        background: src.name.clone(),
        checks: vec![Check::new("anomaly.solvable", true, None)],
        alpha_prime: Some(AlphaPrime {
            num: res.alpha_prime.numerator().render(&alg.params),
            den: res.alpha_prime.denominator().render(&alg.params),
        }),
        domains: vec![res.positivity_domain],
    })
}

/// Equations-of-motion residuals as a report, solving the anomaly first.
pub fn motion_report(
    src: &AlgebraSource,
    sel: &ConnSelector,
    inst: &(String, String, String),
) -> Result<Report> {
    let alg = algebra_with_instanton_params(src, inst)?;
    let s = structure_of(src, &alg)?;
    let bg = HeteroticBackground::new(alg.clone(), s)?;
    let conn = build_connection(&alg, sel, Some(&bg))?;
    let inst_conn = build_connection(
        &alg,
        &ConnSelector::Instanton(inst.0.clone(), inst.1.clone(), inst.2.clone()),
        Some(&bg),
    )?;
    let res = anomaly_solve(&alg, &bg, &conn, &inst_conn)?;
    let motion = motion_check(&alg, &bg, &conn, &inst_conn, &res.alpha_prime);
    let checks = vec![
        Check::new(
            "motion.einstein",
            motion.einstein_residual.is_zero(),
            Some(motion.einstein_residual.render_nonzero()),
        ),
        Check::new(
            "motion.h_divergence",
            motion.h_divergence.is_zero(),
            Some(motion.h_divergence.render_nonzero()),
        ),
        Check::new(
            "motion.gauge_divergence",
            motion.gauge_divergence.is_zero(),
            Some(motion.gauge_divergence.render_nonzero()),
        ),
        Check::new(
            "motion.gauge_variants_agree",
            motion.gauge_variants_agree,
            Some(motion.gauge_divergence_uncoupled.render_nonzero()),
        ),
        Check::new(
            "motion.quadratic_curvature",
            motion.supmot_residual.is_zero(),
            Some(motion.supmot_residual.render_nonzero()),
        ),
    ];
    Ok(Report {
        background: src.name.clone(),
        checks,
        alpha_prime: Some(AlphaPrime {
            num: res.alpha_prime.numerator().render(&alg.params),
            den: res.alpha_prime.denominator().render(&alg.params),
        }),
        domains: vec![res.positivity_domain],
    })
}

/// Selected checks for the `check` verb. `all` skips the structure checks
/// when the file carries no structure block; asking for them explicitly on
/// such a file is an error.
pub fn check_report(src: &AlgebraSource, what: &str) -> Result<Report> {
    let alg = src.algebra()?;
    let mut checks = Vec::new();
    if what == "jacobi" || what == "all" {
        let jac = alg.jacobi_check();
        checks.push(Check::new("jacobi", jac.pass(), jac.render_witness()));
    }
    let wants_structure = what == "structure" || what == "susy";
    if wants_structure || (what == "all" && src.structure.is_some()) {
        let s = structure_of(src, &alg)?;
        if what == "structure" || what == "all" {
            let st = structure_check(&alg, &s);
            checks.push(Check::new("structure.defsu2", st.defsu2_ok, st.witness.clone()));
            checks.push(Check::new("structure.contact", st.contact_ok, st.witness.clone()));
            checks.push(Check::new("structure.quaternion", st.quaternion_ok, st.witness));
        }
        if what == "susy" || what == "all" {
            let susy = susy_check(&alg, &s);
            for (p, ok) in susy.df_closed.iter().enumerate() {
                checks.push(Check::new(
                    format!("susy.dF{}_closed", p + 1),
                    *ok,
                    susy.witness.clone(),
                ));
            }
            checks.push(Check::new("susy.d_eta_asd", susy.d_eta_asd, susy.witness.clone()));
            checks.push(Check::new("susy.quasi_sasaki", susy.quasi_sasaki, susy.witness.clone()));
        }
    }
    Ok(Report { background: src.name.clone(), checks, alpha_prime: None, domains: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;

    const N21: &str = include_str!("../fixtures/n21.alg");

    #[test]
    fn full_report_passes_and_roundtrips() {
        let src = AlgebraSource::parse(N21).unwrap();
        let inst = ("lambda".to_string(), "mu".to_string(), "tau".to_string());
        let rep = full_report(&src, &ConnSelector::Plus, &inst).unwrap();
        assert!(rep.pass(), "{}", rep.to_text());
        let json = rep.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        assert_eq!(
            rep.alpha_prime.as_ref().unwrap().num,
            "2"
        );
        assert_eq!(
            rep.alpha_prime.as_ref().unwrap().den,
            "a^2 + b^2 + c^2 - lambda^2 - mu^2 - tau^2"
        );
    }

    #[test]
    fn connection_table_lists_nonzero_forms() {
        let src = AlgebraSource::parse(N21).unwrap();
        let alg = src.algebra().unwrap();
        let lc = crate::connection::levi_civita(&alg);
        let rep = connection_report(&alg, &lc, "lc");
        assert!(rep.checks.iter().any(|c| c.name == "omega^1_2"));
        // table rows are values, not verdicts, so the report still passes
        assert!(rep.pass());
    }

    #[test]
    fn rational_instanton_parameters() {
        let src = AlgebraSource::parse(N21).unwrap();
        let inst = ("1/2".to_string(), "0".to_string(), "0".to_string());
        let rep = anomaly_report(&src, &ConnSelector::Plus, &inst).unwrap();
        assert_eq!(rep.alpha_prime.as_ref().unwrap().num, "8");
        assert_eq!(rep.alpha_prime.as_ref().unwrap().den, "4*a^2 + 4*b^2 + 4*c^2 - 1");
    }
}
