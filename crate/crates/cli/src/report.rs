//! Serializable views of library results. Integers are decimal strings so
//! that consumers with 64-bit numbers do not silently truncate.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use k3corr::criteria_x::{H1Report, SeriesWitness};
use k3corr::divisorial::{Catalogue, Provenance, Route};
use k3corr::pell::{FundamentalUnit, PellSolution};
use k3corr::{LatticeVector, Verdict};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
pub struct Pair {
    pub x: String,
    pub y: String,
}

impl From<&LatticeVector> for Pair {
    fn from(v: &LatticeVector) -> Self {
        Pair { x: v.x.to_string(), y: v.y.to_string() }
    }
}

#[derive(Serialize, Deserialize)]
pub struct WitnessDoc {
    pub series: String,
    pub alpha: String,
    pub p: String,
    pub q: String,
    pub x: String,
    pub y: String,
    pub ii_sign: String,
    pub h1: Pair,
    pub h1_square: String,
    pub h1_conditions_hold: bool,
}

impl WitnessDoc {
    pub fn new(w: &SeriesWitness, h1: &LatticeVector, rep: &H1Report) -> Self {
        WitnessDoc {
            series: w.series.to_string(),
            alpha: w.alpha.to_string(),
            p: w.p.to_string(),
            q: w.q.to_string(),
            x: w.associated.x.to_string(),
            y: w.associated.y.to_string(),
            ii_sign: w.ii_sign.to_string(),
            h1: h1.into(),
            h1_square: rep.square.to_string(),
            h1_conditions_hold: rep.passes(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct CheckDoc {
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    /// `YES`, `NO_WITHIN_BOUND` or `NO`.
    pub verdict: String,
    /// Bound used by the search; a `NO_WITHIN_BOUND` is only as strong as this.
    pub q_bound: String,
    pub reason: Option<String>,
    pub witnesses: Vec<WitnessDoc>,
}

impl CheckDoc {
    pub fn new<W>(
        command: &str,
        params: Vec<(&str, String)>,
        verdict: &Verdict<W>,
        q_bound: u64,
        witnesses: Vec<WitnessDoc>,
    ) -> Self {
        let (tag, reason) = match verdict {
            Verdict::Yes(_) => ("YES", None),
            Verdict::NoWithinBound { .. } => ("NO_WITHIN_BOUND", None),
            Verdict::No { reason } => ("NO", Some(reason.clone())),
        };
        CheckDoc {
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            verdict: tag.into(),
            q_bound: q_bound.to_string(),
            reason,
            witnesses,
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct WitnessPq {
    pub p: String,
    pub q: String,
}

#[derive(Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub series: String,
    pub alpha: String,
    pub q: String,
    pub t: Option<String>,
    pub witness: WitnessPq,
}

impl From<&Provenance> for ProvenanceDoc {
    fn from(p: &Provenance) -> Self {
        ProvenanceDoc {
            series: p.series.to_string(),
            alpha: p.alpha.to_string(),
            q: p.q.to_string(),
            t: p.t.as_ref().map(|t| t.to_string()),
            witness: WitnessPq { p: p.p.to_string(), q: p.qwit.to_string() },
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct RowDoc {
    pub d: String,
    pub mu_bar: [String; 2],
    pub series: String,
    pub alpha: String,
    pub q: String,
    pub t: Option<String>,
    pub witness: WitnessPq,
    /// Every generator slot that produced this `(d, mu_bar)`, first one repeated above.
    pub provenance: Vec<ProvenanceDoc>,
}

#[derive(Serialize, Deserialize)]
pub struct CertificateDoc {
    pub route: String,
    pub series: String,
    pub alpha: String,
    pub theta: String,
    pub mu: String,
    pub t: String,
    pub d: String,
    pub witness: WitnessPq,
}

#[derive(Serialize, Deserialize)]
pub struct HeaderDoc {
    pub r: String,
    pub s: String,
    pub c: String,
    pub a: String,
    pub b: String,
    pub nonempty_certificate: CertificateDoc,
}

#[derive(Serialize, Deserialize)]
pub struct CatalogueDoc {
    pub tool_version: String,
    pub params: BTreeMap<String, String>,
    pub header: HeaderDoc,
    pub rows: Vec<RowDoc>,
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::EvenA => "ac-even",
        Route::EvenB => "bc-even",
        Route::Odd => "abc-odd",
    }
}

impl CatalogueDoc {
    pub fn new(cat: &Catalogue) -> Self {
        let sh = &cat.shape;
        let cert = &cat.certificate;
        let rows = cat
            .records
            .iter()
            .map(|rec| {
                let first = ProvenanceDoc::from(&rec.provenance[0]);
                RowDoc {
                    d: rec.d.to_string(),
                    mu_bar: [rec.mu_bar.0.to_string(), rec.mu_bar.1.to_string()],
                    series: first.series.clone(),
                    alpha: first.alpha.clone(),
                    q: first.q.clone(),
                    t: first.t.clone(),
                    witness: WitnessPq { p: first.witness.p.clone(), q: first.witness.q.clone() },
                    provenance: rec.provenance.iter().map(ProvenanceDoc::from).collect(),
                }
            })
            .collect();
        CatalogueDoc {
            tool_version: TOOL_VERSION.into(),
            params: BTreeMap::from([
                ("r".into(), sh.r().to_string()),
                ("s".into(), sh.s().to_string()),
                ("q_max".into(), cat.q_max.to_string()),
                ("d_max".into(), cat.d_max.to_string()),
            ]),
            header: HeaderDoc {
                r: sh.r().to_string(),
                s: sh.s().to_string(),
                c: sh.c().to_string(),
                a: sh.a().to_string(),
                b: sh.b().to_string(),
                nonempty_certificate: CertificateDoc {
                    route: route_name(cert.route).into(),
                    series: cert.witness.series.to_string(),
                    alpha: cert.witness.alpha.to_string(),
                    theta: cert.witness.theta.to_string(),
                    mu: cert.witness.mu.to_string(),
                    t: cert.witness.t.to_string(),
                    d: cert.member.d.to_string(),
                    witness: WitnessPq { p: cert.member.p.to_string(), q: cert.member.q.to_string() },
                },
            },
            rows,
        }
    }

    /// Fixed columns `d,mu1,mu2,series,alpha,q,t,p,qwit`; one row per `(d, mu_bar)`.
    pub fn write_csv(&self, sink: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["d", "mu1", "mu2", "series", "alpha", "q", "t", "p", "qwit"])?;
        for r in &self.rows {
            w.write_record([
                r.d.as_str(),
                &r.mu_bar[0],
                &r.mu_bar[1],
                &r.series,
                &r.alpha,
                &r.q,
                r.t.as_deref().unwrap_or(""),
                &r.witness.p,
                &r.witness.q,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
pub struct PellDoc {
    pub tool_version: String,
    pub params: BTreeMap<String, String>,
    pub unit: Option<WitnessPq>,
    pub solutions: Vec<WitnessPq>,
    pub orbit: Vec<WitnessPq>,
}

fn pq(s: &PellSolution) -> WitnessPq {
    WitnessPq { p: s.p.to_string(), q: s.q.to_string() }
}

impl PellDoc {
    pub fn new(
        d: &BigInt,
        n: &BigInt,
        q_bound: u64,
        unit: Option<&FundamentalUnit>,
        sols: &[PellSolution],
        walk: &[PellSolution],
    ) -> Self {
        PellDoc {
            tool_version: TOOL_VERSION.into(),
            params: BTreeMap::from([
                ("d".into(), d.to_string()),
                ("n".into(), n.to_string()),
                ("q_bound".into(), q_bound.to_string()),
            ]),
            unit: unit.map(|u| WitnessPq { p: u.u.to_string(), q: u.v.to_string() }),
            solutions: sols.iter().map(pq).collect(),
            orbit: walk.iter().map(pq).collect(),
        }
    }

    pub fn write_text(&self, out: &mut impl Write) -> std::io::Result<()> {
        match &self.unit {
            Some(u) => writeln!(out, "fundamental unit ({}, {})", u.p, u.q)?,
            None => writeln!(out, "d is a square: finitely many solutions, no orbit")?,
        }
        writeln!(out, "{} solutions", self.solutions.len())?;
        for s in &self.solutions {
            writeln!(out, "  ({}, {})", s.p, s.q)?;
        }
        if !self.orbit.is_empty() {
            writeln!(out, "orbit of the first solution")?;
            for s in &self.orbit {
                writeln!(out, "  ({}, {})", s.p, s.q)?;
            }
        }
        Ok(())
    }
}
