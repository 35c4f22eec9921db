//! Corpus files: germs, curves and families with expected values, each
//! tagged with where the expectation comes from, and the runner that checks
//! them.
//!
//! A corpus is a JSON array of [`CorpusEntry`]. Every expectation is an
//! object `{"value": ..., "provenance": ...}` where the provenance is
//! `"trivial"`, `"derived:<oracle>"` or `"literature:<citation>"`.

use serde::{Deserialize, Serialize};

use crate::equising::{
    coordinate_invariance_test, family_zariski_equisingular, multiplicity_sequence, semicontinuity_sample,
    theorem1_harness, Options, SurfaceGerm, GEO,
};
use crate::error::{Error, Result};
use crate::isolated::{
    check_formula_43, check_formula_a, discriminant_curve, milnor_plane_curve, mu2_mu1, prop44_check, LiteratureData,
    PlaneCurveGerm, SectionNumbers, MILNOR_TRIALS,
};
use crate::par::map_bounded;
use crate::parse::parse_poly;
use crate::poly::{ratio, Rat};

/// The corpus shipped with the crate.
pub const BUNDLED_CORPUS: &str = include_str!("../corpus/corpus.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect<T> {
    pub value: T,
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[default]
    Surface,
    Curve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
}

impl Decision {
    pub fn as_bool(self) -> bool {
        self == Decision::Yes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sections {
    pub mu2: u32,
    pub mu1: u32,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteratureEntry {
    pub mu3: u32,
    pub k: u32,
    pub phi: u32,
    pub source: String,
    pub provenance: String,
    /// Unverified data is reported but never counted as a failure.
    #[serde(default = "yes")]
    pub verified: bool,
}

impl LiteratureEntry {
    pub fn data(&self) -> LiteratureData {
        LiteratureData { mu3: self.mu3, k: self.k, phi: self.phi, source: self.source.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub expression: String,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub kind: Kind,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_mu_seq: Option<Expect<[u32; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_family_decision: Option<Expect<Decision>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_section_numbers: Option<Expect<Sections>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_milnor: Option<Expect<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literature: Option<LiteratureEntry>,
    /// Parameter values for the semicontinuity check, as rational strings.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Vec<String>>,
}

fn check_provenance(name: &str, p: &str) -> Result<()> {
    let ok = p == "trivial"
        || p.strip_prefix("derived:").is_some_and(|r| !r.trim().is_empty())
        || p.strip_prefix("literature:").is_some_and(|r| !r.trim().is_empty());
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("entry `{name}`: bad provenance `{p}`")))
    }
}

impl CorpusEntry {
    pub fn has_tag(&self, t: &str) -> bool {
        self.tags.iter().any(|s| s == t)
    }

    fn provenances(&self) -> Vec<&str> {
        let mut v = Vec::new();
        v.extend(self.expected_mu_seq.as_ref().map(|e| e.provenance.as_str()));
        v.extend(self.expected_family_decision.as_ref().map(|e| e.provenance.as_str()));
        v.extend(self.expected_section_numbers.as_ref().map(|e| e.provenance.as_str()));
        v.extend(self.expected_milnor.as_ref().map(|e| e.provenance.as_str()));
        v.extend(self.literature.as_ref().map(|e| e.provenance.as_str()));
        v
    }

    /// Schema rules that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        let prov = self.provenances();
        if prov.is_empty() {
            return Err(Error::Invalid(format!("entry `{}` has no expectation", self.name)));
        }
        for p in prov {
            check_provenance(&self.name, p)?;
        }
        if self.kind == Kind::Curve && !self.params.is_empty() {
            return Err(Error::Invalid(format!("curve entry `{}` cannot have parameters", self.name)));
        }
        if self.expected_family_decision.is_some() && self.params.is_empty() {
            return Err(Error::Invalid(format!("family entry `{}` declares no parameters", self.name)));
        }
        for s in &self.samples {
            if s.len() != self.params.len() {
                return Err(Error::Invalid(format!("entry `{}`: sample arity differs from parameters", self.name)));
            }
        }
        Ok(())
    }

    fn params(&self) -> Vec<&str> {
        self.params.iter().map(String::as_str).collect()
    }

    pub fn surface(&self) -> Result<SurfaceGerm> {
        let params = self.params();
        SurfaceGerm::new(parse_poly(&self.expression, &GEO, &params)?, &params)
    }

    pub fn curve(&self) -> Result<PlaneCurveGerm> {
        PlaneCurveGerm::new(parse_poly(&self.expression, &["x", "y"], &[])?)
    }

    /// Samples from the entry, or three small rationals per parameter.
    pub fn sample_points(&self) -> Result<Vec<Vec<Rat>>> {
        if !self.samples.is_empty() {
            return self.samples.iter().map(|s| s.iter().map(|v| parse_rat(v)).collect::<Result<Vec<_>>>()).collect();
        }
        let base = [ratio(1, 2), ratio(-1, 3), ratio(2, 5)];
        Ok((0..3).map(|i| (0..self.params.len()).map(|k| base[(i + k) % 3].clone()).collect()).collect())
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let p = parse_poly(s, &[], &[])?;
    if !p.is_constant() {
        return Err(Error::Invalid(format!("`{s}` is not a rational number")));
    }
    Ok(p.constant_term())
}

/// Parse and validate a corpus file.
pub fn load_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let entries: Vec<CorpusEntry> = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("corpus: {e}")))?;
    for e in &entries {
        e.validate()?;
    }
    Ok(entries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    /// Ran against unverified expectations; informational only.
    Unverified,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
    pub seed: u64,
    pub reports: Vec<EntryReport>,
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn push(&mut self, check: &str, r: Result<(bool, String)>) {
        let (status, detail) = match r {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Error, e.to_string()),
        };
        self.0.push(CheckResult { check: check.into(), status, detail });
    }

    fn push_informational(&mut self, check: &str, r: Result<(bool, String)>) {
        let detail = match r {
            Ok((ok, d)) => format!("{} ({d})", if ok { "consistent" } else { "inconsistent" }),
            Err(e) => e.to_string(),
        };
        self.0.push(CheckResult { check: check.into(), status: Status::Unverified, detail });
    }
}

fn seeds(seed: u64) -> [u64; 3] {
    [seed, seed.wrapping_add(1), seed.wrapping_add(2)]
}

fn run_curve(e: &CorpusEntry, opts: &Options, out: &mut Checks) {
    let c = match e.curve() {
        Ok(c) => c,
        Err(err) => return out.push("parse", Err(err)),
    };
    if let Some(exp) = &e.expected_milnor {
        out.push(
            "milnor",
            milnor_plane_curve(&c, opts.seed, MILNOR_TRIALS, opts)
                .map(|mu| (mu == exp.value, format!("computed {mu}, expected {}", exp.value))),
        );
    }
    out.push(
        "milnor_invariance",
        (|| {
            let [a, b, _] = seeds(opts.seed);
            let m1 = milnor_plane_curve(&c, a, MILNOR_TRIALS, opts)?;
            let m2 = milnor_plane_curve(&c, b, MILNOR_TRIALS, opts)?;
            Ok((m1 == m2, format!("seed {a}: {m1}, seed {b}: {m2}")))
        })(),
    );
    out.push(
        "formula_43",
        check_formula_43(&c, opts.seed, opts)
            .map(|r| (r.holds, format!("disc order {} vs mu {} + mult {} - 1", r.disc_order, r.mu, r.mult))),
    );
}

fn run_germ(e: &CorpusEntry, g: &SurfaceGerm, opts: &Options, out: &mut Checks) {
    let musq = multiplicity_sequence(g, opts);
    if let Some(exp) = &e.expected_mu_seq {
        out.push(
            "mu_seq",
            musq.clone().map(|r| (r.mu_seq == exp.value, format!("computed {:?}, expected {:?}", r.mu_seq, exp.value))),
        );
    }
    out.push(
        "coordinate_invariance",
        coordinate_invariance_test(g, &seeds(opts.seed), opts).map(|(same, reps)| {
            let seqs: Vec<[u32; 4]> = reps.iter().map(|r| r.mu_seq).collect();
            (same, format!("seeds {:?}: {seqs:?}", seeds(opts.seed)))
        }),
    );
    if let Some(exp) = &e.expected_section_numbers {
        out.push(
            "section_numbers",
            mu2_mu1(g, opts.seed, opts).map(|SectionNumbers { mu2, mu1 }| {
                let v = exp.value;
                (
                    (mu2, mu1) == (v.mu2, v.mu1),
                    format!("computed (mu2, mu1) = ({mu2}, {mu1}), expected ({}, {})", v.mu2, v.mu1),
                )
            }),
        );
    }
    if e.has_tag("isolated") {
        out.push("i0_is_one", musq.map(|r| (r.mu_seq[2] == 1, format!("mu_seq {:?}", r.mu_seq))));
        out.push(
            "formula_a",
            check_formula_a(g, opts.seed, opts)
                .map(|r| (r.holds, format!("m_delta {} vs mu2 {} + mu1 {}", r.m_delta, r.mu2, r.mu1))),
        );
        let f43 = discriminant_curve(g, opts).and_then(|d| match d {
            None => Ok((true, "discriminant is a unit".to_string())),
            Some(c) => check_formula_43(&c, opts.seed, opts).map(|r| {
                (
                    r.holds,
                    format!("discriminant curve: disc order {} vs mu {} + mult {} - 1", r.disc_order, r.mu, r.mult),
                )
            }),
        });
        out.push("formula_43", f43);
    }
    if let Some(lit) = &e.literature {
        let r = prop44_check(g, &lit.data(), opts.seed, opts)
            .map(|p| (p.holds, format!("computed {:?}, predicted {:?}", p.computed, p.predicted)));
        if lit.verified {
            out.push("prop44", r);
        } else {
            out.push_informational("prop44", r);
        }
    }
}

fn run_family(e: &CorpusEntry, g: &SurfaceGerm, opts: &Options, out: &mut Checks) {
    if let Some(exp) = &e.expected_family_decision {
        let want = exp.value.as_bool();
        out.push(
            "harness",
            theorem1_harness(g, &seeds(opts.seed)[..2], opts).map(|h| {
                let ok = h.consistent && h.decision == Some(want);
                (
                    ok,
                    format!(
                        "consistent {}, decision {:?}, expected {:?}",
                        h.consistent,
                        h.decision.map(yes_no),
                        exp.value
                    ),
                )
            }),
        );
        if e.has_tag("linear-family") {
            out.push(
                "zariski_equisingular",
                family_zariski_equisingular(g, opts).map(|r| {
                    (r.decision == want, format!("decision {}, expected {:?}", yes_no(r.decision), exp.value))
                }),
            );
        }
    }
    out.push(
        "semicontinuity",
        e.sample_points().and_then(|s| semicontinuity_sample(g, &s, opts)).map(|r| {
            let detail = r
                .points
                .iter()
                .map(|p| format!("({}) {}", p.sample.join(", "), if p.holds { "<=" } else { ">" }))
                .collect::<Vec<_>>()
                .join("; ");
            (r.holds, detail)
        }),
    );
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Run every applicable check of one entry. Failures are recorded, never
/// raised.
pub fn run_entry(e: &CorpusEntry, opts: &Options) -> EntryReport {
    let mut out = Checks(Vec::new());
    match e.kind {
        Kind::Curve => run_curve(e, opts, &mut out),
        Kind::Surface => match e.surface() {
            Err(err) => out.push("parse", Err(err)),
            Ok(g) if g.params().is_empty() => run_germ(e, &g, opts, &mut out),
            Ok(g) => run_family(e, &g, opts, &mut out),
        },
    }
    let passed = out.0.iter().all(|c| matches!(c.status, Status::Pass | Status::Unverified));
    EntryReport { name: e.name.clone(), passed, checks: out.0 }
}

/// Run a corpus on at most `parallel` worker threads. Reports keep the
/// corpus order.
pub fn run_corpus(entries: &[CorpusEntry], opts: &Options, parallel: usize) -> CorpusReport {
    let reports = map_bounded(entries.iter().collect(), parallel, |e| run_entry(e, opts));
    let passed = reports.iter().filter(|r| r.passed).count();
    CorpusReport { entries: reports.len(), passed, failed: reports.len() - passed, seed: opts.seed, reports }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_loads() {
        let c = load_corpus(BUNDLED_CORPUS).unwrap();
        assert!(c.len() >= 20);
        assert!(c.iter().all(|e| e.kind == Kind::Curve || e.surface().is_ok()));
    }

    #[test]
    fn schema_rules() {
        let bad = r#"[{"name": "n", "expression": "z"}]"#;
        assert!(load_corpus(bad).is_err());
        let bad =
            r#"[{"name": "n", "expression": "z", "expected_mu_seq": {"value": [1,0,1,0], "provenance": "guess"}}]"#;
        assert!(load_corpus(bad).is_err());
        let bad = r#"[{"name": "n", "expression": "z", "extra": 1, "expected_mu_seq": {"value": [1,0,1,0], "provenance": "trivial"}}]"#;
        assert!(load_corpus(bad).is_err());
        assert!(load_corpus("[]").unwrap().is_empty());
    }

    #[test]
    fn wrong_expectation_fails_and_right_one_passes() {
        let text = r#"[
            {"name": "ok", "expression": "z^2 - x*y", "expected_mu_seq": {"value": [2,2,1,2], "provenance": "trivial"}},
            {"name": "bad", "expression": "z^2 - x*y", "expected_mu_seq": {"value": [2,3,1,2], "provenance": "trivial"}}
        ]"#;
        let r = run_corpus(&load_corpus(text).unwrap(), &Options::default(), 2);
        assert_eq!((r.entries, r.passed, r.failed), (2, 1, 1));
        assert!(r.reports[0].passed && !r.reports[1].passed);
    }

    #[test]
    fn default_samples_have_parameter_arity() {
        let e: CorpusEntry = serde_json::from_str(
            r#"{"name": "f", "expression": "z^2 - x*y - t*x^2 + u*y^3", "params": ["t", "u"],
                "expected_family_decision": {"value": "yes", "provenance": "trivial"}}"#,
        )
        .unwrap();
        let s = e.sample_points().unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|p| p.len() == 2 && p.iter().all(|v| *v != ratio(0, 1))));
    }
}
