//! Wire format of [`ConstructionCertificate`]. Integers travel as decimal
//! strings so that no JSON consumer rounds them.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    Branch, ConstructionCertificate, ConstructionError, ConstructionParams, Source, TargetIndex, Variant,
};
use crate::numtheory::Residue;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub l: String,
    pub p: String,
    pub w: String,
    pub branch: String,
    pub boundary_w: bool,
    pub q: String,
    pub rho: String,
    pub sigma: String,
    pub s: String,
    pub tau: String,
    pub r: String,
    pub u_plus: String,
    pub t_plus: String,
    pub k_plus: String,
    pub u_minus: String,
    pub t_minus: String,
    pub k_minus: String,
    pub a_plus: String,
    pub a_minus: String,
    pub set_min: String,
    pub set_max: String,
    pub delta: String,
    pub full_scan: bool,
    pub verified: bool,
    pub variant: String,
    pub source: String,
    #[serde(default)]
    pub failures: Vec<String>,
}

impl From<&ConstructionCertificate> for CertificateJson {
    fn from(c: &ConstructionCertificate) -> Self {
        let p = &c.params;
        CertificateJson {
            l: p.l.to_string(),
            p: p.p.to_string(),
            w: p.w.value().to_string(),
            branch: p.branch.number().to_string(),
            boundary_w: p.boundary_w,
            q: p.q.to_string(),
            rho: p.rho.to_string(),
            sigma: p.sigma.to_string(),
            s: p.s.to_string(),
            tau: p.tau.to_string(),
            r: p.r.to_string(),
            u_plus: c.k_plus.u.to_string(),
            t_plus: c.k_plus.t.to_string(),
            k_plus: c.k_plus.k.to_string(),
            u_minus: c.k_minus.u.to_string(),
            t_minus: c.k_minus.t.to_string(),
            k_minus: c.k_minus.k.to_string(),
            a_plus: c.a_plus.to_string(),
            a_minus: c.a_minus.to_string(),
            set_min: c.set_min.to_string(),
            set_max: c.set_max.to_string(),
            delta: c.delta.to_string(),
            full_scan: c.full_scan,
            verified: c.verified,
            variant: c.variant.as_str().to_string(),
            source: c.source.as_str().to_string(),
            failures: c.failures.clone(),
        }
    }
}

fn num<T: FromStr>(field: &str, s: &str) -> Result<T, ConstructionError> {
    s.parse()
        .map_err(|_| ConstructionError::Malformed(format!("{field} = {s:?} is not an integer in range")))
}

impl TryFrom<CertificateJson> for ConstructionCertificate {
    type Error = ConstructionError;

    fn try_from(j: CertificateJson) -> Result<Self, Self::Error> {
        let p: u64 = num("p", &j.p)?;
        let branch = match j.branch.as_str() {
            "1" => Branch::One,
            "2" => Branch::Two,
            other => return Err(ConstructionError::Malformed(format!("branch = {other:?}"))),
        };
        let variant = match j.variant.as_str() {
            "delta_plus" => Variant::DeltaPlus,
            "delta_minus" => Variant::DeltaMinus,
            other => return Err(ConstructionError::Malformed(format!("variant = {other:?}"))),
        };
        let source = match j.source.as_str() {
            "construction" => Source::Construction,
            "flip" => Source::Flip,
            other => return Err(ConstructionError::Malformed(format!("source = {other:?}"))),
        };
        let params = ConstructionParams {
            l: num("l", &j.l)?,
            p,
            w: Residue::new(num("w", &j.w)?, p).map_err(|e| ConstructionError::Malformed(e.to_string()))?,
            branch,
            boundary_w: j.boundary_w,
            q: num("q", &j.q)?,
            rho: num("rho", &j.rho)?,
            sigma: num("sigma", &j.sigma)?,
            s: num("s", &j.s)?,
            tau: num("tau", &j.tau)?,
            r: num("r", &j.r)?,
        };
        match source {
            Source::Construction => params.validate()?,
            Source::Flip => {
                params.validate_structure()?;
                if !crate::numtheory::is_prime(params.r) || params.r <= params.pq() {
                    return Err(ConstructionError::Malformed(format!(
                        "r = {} is not a prime > pq",
                        params.r
                    )));
                }
            }
        }
        let pq = params.pq();
        let index = |u: &str, t: &str, k: &str, name: &str| -> Result<TargetIndex, ConstructionError> {
            let k: u128 = num(name, k)?;
            let idx = TargetIndex {
                u: num("u", u)?,
                t: num("t", t)?,
                k,
                alpha: TargetIndex::alpha_for(k, params.r),
            };
            match source {
                Source::Construction => idx.check(params.r, pq)?,
                Source::Flip => idx.check_decomposition(params.r, pq)?,
            }
            Ok(idx)
        };
        Ok(ConstructionCertificate {
            params,
            variant,
            source,
            k_plus: index(&j.u_plus, &j.t_plus, &j.k_plus, "k_plus")?,
            k_minus: index(&j.u_minus, &j.t_minus, &j.k_minus, "k_minus")?,
            a_plus: num("a_plus", &j.a_plus)?,
            a_minus: num("a_minus", &j.a_minus)?,
            set_min: num("set_min", &j.set_min)?,
            set_max: num("set_max", &j.set_max)?,
            delta: num("delta", &j.delta)?,
            full_scan: j.full_scan,
            verified: j.verified,
            failures: j.failures,
        })
    }
}
