//! Batch front-end: one job in, one deterministic JSON report out.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::thread;

use serde_json::{json, Value};

use crate::cellular::{check_gram_factorization, product_datum, rank_two_hecke_datum, verify_cell_axioms, CellReport};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::qcoord::{fmt_mono, DualAlgebra, QuotientBasis};
use crate::report::{Check, Status};
use crate::reptype::{classify_detailed, condition_report, n4_boundary_note, FieldParams, Kind, ORDER_BOUND};
use crate::scalars::{parse_rational, Field, GaussRational, Params, ScalarField};
use crate::schur::{
    centralizer_basis, centralizer_of, check_closure, dim_blocks, dim_formula, rank_two_matching, verify_dj, IsoPhi,
    SchurType,
};
use crate::tensor::TensorSpace;

pub const SCHEMA: u32 = 1;
/// Jobs with `n^d` above this need `force`.
pub const MAX_WORDS: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Dim,
    Centralizer,
    VerifyIso,
    VerifyDj,
    QcoordCheck,
    CellCheck,
    Reptype,
    Conditions,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Dim,
        Task::Centralizer,
        Task::VerifyIso,
        Task::VerifyDj,
        Task::QcoordCheck,
        Task::CellCheck,
        Task::Reptype,
        Task::Conditions,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Dim => "dim",
            Task::Centralizer => "centralizer",
            Task::VerifyIso => "verify-iso",
            Task::VerifyDj => "verify-dj",
            Task::QcoordCheck => "qcoord-check",
            Task::CellCheck => "cell-check",
            Task::Reptype => "reptype",
            Task::Conditions => "conditions",
        }
    }

    fn builds_tensor_space(self) -> bool {
        !matches!(self, Task::Dim | Task::Reptype | Task::Conditions)
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown task {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub task: Task,
    pub n: usize,
    pub d: usize,
    pub field: ScalarField,
    /// Characteristic, for `reptype` only.
    pub p: u32,
    /// Order of `q^2`; `None` means read it off `q` (generic when symbolic).
    pub l: Option<Option<u32>>,
    pub kind: Kind,
    pub parallel: usize,
    pub force: bool,
}

impl JobConfig {
    pub fn new(task: Task, n: usize, d: usize, field: ScalarField) -> Self {
        JobConfig {
            task,
            n,
            d,
            field,
            p: 0,
            l: None,
            kind: Kind::B,
            parallel: 1,
            force: false,
        }
    }

    fn params_json(&self) -> Value {
        let mut v = json!({ "n": self.n, "d": self.d });
        match self.task {
            Task::Dim => {}
            Task::Reptype => {
                v["kind"] = json!(match self.kind {
                    Kind::A => "A",
                    Kind::B => "B",
                });
                v["p"] = json!(self.p);
                if let Some(l) = self.l {
                    v["l"] = l.map_or(json!("generic"), |l| json!(l));
                } else {
                    merge(&mut v, self.field.describe());
                }
            }
            _ => merge(&mut v, self.field.describe()),
        }
        v
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

/// `field` is one of `rational`, `gaussian`, `symbolic`; when absent it is
/// inferred from the parameter strings.
pub fn parse_field(field: Option<&str>, q: &str, big_q: &str) -> Result<ScalarField> {
    let field = match field {
        Some(f) => f.to_string(),
        None if q == "symbolic" || big_q == "symbolic" => "symbolic".into(),
        None if q.contains('i') || big_q.contains('i') => "gaussian".into(),
        None => "rational".into(),
    };
    match field.as_str() {
        "symbolic" => Ok(ScalarField::Symbolic),
        "rational" => Ok(ScalarField::Rational {
            q: parse_rational(q)?,
            big_q: parse_rational(big_q)?,
        }),
        "gaussian" => Ok(ScalarField::Gaussian {
            q: q.parse()?,
            big_q: big_q.parse()?,
        }),
        other => Err(Error::Parse(format!("unknown field {other:?}"))),
    }
}

/// `"generic"` or a positive integer.
pub fn parse_order(s: &str) -> Result<Option<u32>> {
    if s == "generic" {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::Parse(format!("bad order {s:?}")))
}

pub struct Report {
    pub json: Value,
    pub passed: bool,
}

impl Report {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("serialisable");
        s.push('\n');
        s
    }

    pub fn check_ids(&self) -> Vec<String> {
        self.json["checks"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|c| c["check_id"].as_str().map(String::from))
                    .collect()
            })
            .unwrap_or_default()
    }
}

type Tagged = Vec<(Value, Check)>;

pub fn run(cfg: &JobConfig) -> Result<Report> {
    if cfg.task.builds_tensor_space() && !cfg.force {
        let words = (cfg.n as u128).checked_pow(cfg.d as u32).unwrap_or(u128::MAX);
        if words > MAX_WORDS {
            return Err(Error::SizeGuard(format!(
                "n^d = {words} exceeds {MAX_WORDS}; pass --force to run anyway"
            )));
        }
    }
    let params = cfg.params_json();
    let (details, checks) = match &cfg.field {
        ScalarField::Symbolic => run_in(cfg, &Params::symbolic(), &params)?,
        ScalarField::Rational { q, big_q } => run_in(cfg, &Params::rational(q.clone(), big_q.clone())?, &params)?,
        ScalarField::Gaussian { q, big_q } => {
            run_in::<GaussRational>(cfg, &Params::new(q.clone(), big_q.clone())?, &params)?
        }
    };
    let failed = checks.iter().any(|(_, c)| c.status == Status::Fail);
    let status = if failed {
        "fail"
    } else if !checks.is_empty() && checks.iter().all(|(_, c)| c.status == Status::Skipped) {
        "skipped"
    } else {
        "pass"
    };
    let json = json!({
        "schema": SCHEMA,
        "task": cfg.task.as_str(),
        "params": params,
        "status": status,
        "details": details,
        "checks": checks.iter().map(|(p, c)| c.to_json(p)).collect::<Vec<_>>(),
    });
    Ok(Report { json, passed: !failed })
}

/// A JSON number when it fits in `u64`, a decimal string otherwise.
fn big(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v))
}

fn tag_all(params: &Value, checks: Vec<Check>) -> Tagged {
    checks.into_iter().map(|c| (params.clone(), c)).collect()
}

fn mat_strings<F: Field>(m: &Mat<F>) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn cell_json<F: Field>(cells: &[String], report: &CellReport<F>) -> Value {
    json!({
        "cells": cells,
        "gram_forms": report.grams.iter().map(|g| json!({
            "cell": g.cell,
            "matrix": mat_strings(&g.matrix),
            "nonzero": g.is_nonzero(),
        })).collect::<Vec<_>>(),
        "quasi_hereditary": report.quasi_hereditary,
    })
}

fn run_in<F: Field>(cfg: &JobConfig, p: &Params<F>, params: &Value) -> Result<(Value, Tagged)> {
    let (n, d) = (cfg.n, cfg.d);
    match cfg.task {
        Task::Dim => {
            let dim_b = dim_formula(n, d, SchurType::B);
            let blocks = dim_blocks(n, d);
            let sum: u128 = blocks.iter().sum();
            let details = json!({
                "dimB": big(dim_b),
                "dimA_sum": big(sum),
                "blocks": blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            });
            let c = Check::new("dim.block_sum", dim_b == sum, vec![n, d]);
            Ok((details, tag_all(params, vec![c])))
        }
        Task::Centralizer => {
            let basis = centralizer_basis(n, d, SchurType::B, p)?;
            let formula = dim_formula(n, d, SchurType::B);
            let dims = vec![basis.len(), formula as usize];
            let checks = vec![
                Check::new("schur.centralizer_dimension", basis.len() as u128 == formula, dims),
                check_closure(&basis)?,
            ];
            Ok((
                json!({ "dim": basis.len(), "formula": big(formula) }),
                tag_all(params, checks),
            ))
        }
        Task::VerifyIso => {
            let space = TensorSpace::new(n, d, p.clone())?;
            let iso = IsoPhi::new(&space)?;
            let basis = centralizer_of(&space, SchurType::B)?;
            let mut checks = iso.check(&basis)?;
            let mut details = json!({
                "blocks": iso.blocks().iter().map(|b| json!({ "a": b.a, "domain_dim": b.domain.len() })).collect::<Vec<_>>(),
                "dim": basis.len(),
            });
            if (n, d) == (2, 1) {
                let m = rank_two_matching(p)?;
                details["matching"] = m.to_json();
                checks.push(m.check());
            }
            Ok((details, tag_all(params, checks)))
        }
        Task::VerifyDj => {
            let mut out = verify_dj(1, d, p)?;
            let ranks: Vec<usize> = (2..=n).collect();
            let threads = cfg.parallel.max(1);
            let mut per_rank: Vec<Result<Tagged>> = Vec::new();
            for chunk in ranks.chunks(threads) {
                let results: Vec<Result<Tagged>> = thread::scope(|s| {
                    let handles: Vec<_> = chunk
                        .iter()
                        .map(|&k| {
                            s.spawn(move || -> Result<Tagged> {
                                let space = TensorSpace::new(k, d, p.clone())?;
                                Ok(tag_all(&json!({ "n": k, "d": d }), space.run_checks()?))
                            })
                        })
                        .collect();
                    handles
                        .into_iter()
                        .map(|h| h.join().expect("worker panicked"))
                        .collect()
                });
                per_rank.extend(results);
            }
            for r in per_rank {
                out.extend(r?);
            }
            let failing: BTreeSet<&str> = out
                .iter()
                .filter(|(_, c)| !c.passed())
                .map(|(_, c)| c.id.as_str())
                .collect();
            let tagged = out
                .iter()
                .map(|(t, c)| {
                    let mut t2 = params.clone();
                    merge(&mut t2, t.clone());
                    (t2, c.clone())
                })
                .collect();
            Ok((json!({ "ranks": ranks, "failing": failing }), tagged))
        }
        Task::QcoordCheck => {
            let quotient = QuotientBasis::new(n, d, p.clone())?;
            let space = TensorSpace::new(n, d, p.clone())?;
            let formula = dim_formula(n, d, SchurType::B);
            let mut checks = vec![
                Check::new(
                    "qcoord.quotient_dimension",
                    quotient.dim() as u128 == formula,
                    vec![quotient.dim()],
                ),
                quotient.check_coideal(),
                quotient.check_generators_match_definition(&space)?,
                quotient.check_tcomm(&space)?,
            ];
            let mut details = json!({
                "dim": quotient.dim(),
                "formula": big(formula),
                "j_dim": quotient.j_dim(),
                "basis": quotient.basis().iter().map(|m| fmt_mono(m)).collect::<Vec<_>>(),
                "degenerate": quotient.is_degenerate(),
            });
            let dual = DualAlgebra::new(quotient);
            checks.push(dual.check_algebra_axioms());
            let centralizer = centralizer_of(&space, SchurType::B)?;
            checks.extend(dual.check_against_centralizer(&space, &centralizer)?);
            if dual.dim() <= 6 {
                let mut table = serde_json::Map::new();
                for i in 0..dual.dim() {
                    for j in 0..dual.dim() {
                        let prod = dual.product(&dual.basis_elt(i), &dual.basis_elt(j));
                        let key = format!(
                            "{}* {}*",
                            fmt_mono(&dual.quotient().basis()[i]),
                            fmt_mono(&dual.quotient().basis()[j])
                        );
                        table.insert(key, json!(prod.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
                    }
                }
                details["dual_products"] = Value::Object(table);
            }
            Ok((details, tag_all(params, checks)))
        }
        Task::CellCheck => {
            let (mut details, mut tagged) = match product_datum(n, d, p) {
                Ok(pd) => {
                    let report = verify_cell_axioms(&pd.datum, &pd.algebra)?;
                    let mut checks = report.checks.clone();
                    checks.push(check_gram_factorization(&pd)?);
                    (cell_json(&pd.datum.cells, &report), tag_all(params, checks))
                }
                Err(Error::InvertibilityFailure) => {
                    let why = "f^B_d vanishes, so the block decomposition is unavailable";
                    (
                        json!({ "product_datum": why }),
                        tag_all(params, vec![Check::skipped("cell.c1_basis", why)]),
                    )
                }
                Err(e) => return Err(e),
            };
            if (n, d) == (2, 1) {
                let (alg, datum) = rank_two_hecke_datum(p)?;
                let r = verify_cell_axioms(&datum, &alg)?;
                details["rank_two_hecke"] = cell_json(&datum.cells, &r);
                let mut t = params.clone();
                t["datum"] = json!("rank_two_hecke");
                tagged.extend(tag_all(&t, r.checks));
            }
            Ok((details, tagged))
        }
        Task::Reptype => {
            let fp = match cfg.l {
                Some(l) => FieldParams { p: cfg.p, l },
                None if F::SYMBOLIC => FieldParams::generic(cfg.p),
                None => FieldParams::from_q(cfg.p, &p.q, ORDER_BOUND),
            };
            let c = classify_detailed(cfg.kind, n, d, fp)?;
            let mut details = json!({ "type": c.kind.as_str(), "clause": c.clause, "l": fp.l });
            if cfg.kind == Kind::B {
                if let Some(note) = n4_boundary_note(n, d, fp) {
                    details["note"] = json!(note);
                }
            }
            Ok((details, Vec::new()))
        }
        Task::Conditions => Ok((condition_report(n, d, p)?.to_json(), Vec::new())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::describe;

    fn rational(task: Task, n: usize, d: usize) -> JobConfig {
        JobConfig::new(task, n, d, parse_field(None, "2", "3").unwrap())
    }

    #[test]
    fn dim_task() {
        let r = run(&rational(Task::Dim, 4, 2)).unwrap();
        assert_eq!(r.json["details"]["dimB"], 36);
        assert_eq!(r.json["details"]["dimA_sum"], 36);
        assert_eq!(r.json["status"], "pass");
        assert_eq!(r.json["schema"], 1);
        assert!(r.passed);
    }

    #[test]
    fn iso_task_records_matching() {
        let r = run(&rational(Task::VerifyIso, 2, 1)).unwrap();
        assert_eq!(r.json["status"], "pass", "{}", r.render());
        assert_eq!(r.json["details"]["matching"]["variant"], "standard");
        assert_eq!(r.json["details"]["matching"]["b_star"]["x"], "-1/3");
        assert_eq!(r.json["details"]["matching"]["b_star"]["y"], "3");
    }

    #[test]
    fn reptype_task() {
        let mut c = rational(Task::Reptype, 3, 6);
        c.p = 3;
        c.l = Some(Some(2));
        let r = run(&c).unwrap();
        assert_eq!(r.json["details"]["type"], "tame");
        // l read off q = i: q^2 = -1 has order 2
        let mut c = JobConfig::new(Task::Reptype, 3, 6, parse_field(None, "i", "2").unwrap());
        c.p = 3;
        assert_eq!(run(&c).unwrap().json["details"]["l"], 2);
    }

    #[test]
    fn parsing() {
        assert_eq!(
            parse_field(None, "symbolic", "symbolic").unwrap(),
            ScalarField::Symbolic
        );
        assert_eq!(parse_field(None, "2", "1+i").unwrap().name(), "gaussian");
        assert_eq!(parse_field(Some("rational"), "1/2", "3").unwrap().name(), "rational");
        assert!(parse_field(Some("p-adic"), "2", "3").is_err());
        assert!(parse_field(None, "2/0", "3").is_err());
        assert_eq!(parse_order("generic").unwrap(), None);
        assert_eq!(parse_order("3").unwrap(), Some(3));
        assert_eq!("cell-check".parse::<Task>().unwrap(), Task::CellCheck);
        assert!("cells".parse::<Task>().is_err());
    }

    #[test]
    fn size_guard() {
        let c = rational(Task::Centralizer, 5, 6);
        assert!(matches!(run(&c), Err(Error::SizeGuard(_))));
        // dim never builds the tensor space
        assert!(run(&rational(Task::Dim, 5, 6)).unwrap().passed);
    }

    #[test]
    fn deterministic_reports() {
        for task in [Task::Centralizer, Task::QcoordCheck, Task::CellCheck] {
            let a = run(&rational(task, 2, 2)).unwrap().render();
            let b = run(&rational(task, 2, 2)).unwrap().render();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gaussian_cell_check_is_not_quasi_hereditary() {
        let c = JobConfig::new(Task::CellCheck, 2, 1, parse_field(None, "2", "i").unwrap());
        let r = run(&c).unwrap();
        assert_eq!(r.json["details"]["rank_two_hecke"]["quasi_hereditary"], false);
        assert_eq!(
            r.json["details"]["rank_two_hecke"]["gram_forms"][0]["matrix"][0][0],
            "0"
        );
        assert_eq!(r.json["checks"][0]["status"], "skipped");
        assert_eq!(r.json["status"], "pass");
    }

    #[test]
    fn conditions_task() {
        let r = run(&rational(Task::Conditions, 4, 2)).unwrap();
        assert_eq!(r.json["details"]["fB_invertible"], true);
        let s = JobConfig::new(Task::Conditions, 4, 2, ScalarField::Symbolic);
        assert!(run(&s).is_err());
    }

    #[test]
    fn every_check_id_is_catalogued() {
        let mut configs: Vec<JobConfig> = [
            Task::Dim,
            Task::Centralizer,
            Task::VerifyIso,
            Task::QcoordCheck,
            Task::CellCheck,
        ]
        .into_iter()
        .map(|t| rational(t, 2, 1))
        .collect();
        let mut dj = rational(Task::VerifyDj, 3, 2);
        dj.parallel = 2;
        configs.push(dj);
        configs.push(rational(Task::CellCheck, 2, 2));
        for c in &configs {
            let r = run(c).unwrap();
            for id in r.check_ids() {
                assert!(describe(&id).is_some(), "{id} missing from the catalog");
            }
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let mut a = rational(Task::VerifyDj, 4, 1);
        let serial = run(&a).unwrap().render();
        a.parallel = 3;
        assert_eq!(run(&a).unwrap().render(), serial);
    }
}
