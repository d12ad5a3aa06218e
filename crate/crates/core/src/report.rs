//! Machine-readable verification reports: one case per checked identity
//! instance, with a deterministic layout so that identical configs and
//! seeds produce byte-identical serialized output. Wall time is kept out
//! of the serialized body for that reason and only shown in text form.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub id: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl Case {
    pub fn pass(id: impl Into<String>, inputs: impl Into<String>, value: impl Into<String>) -> Self {
        let value = value.into();
        Case {
            id: id.into(),
            inputs: inputs.into(),
            expected: value.clone(),
            got: value,
            status: Status::Pass,
            residual: None,
        }
    }

    pub fn check(
        id: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        ok: bool,
    ) -> Self {
        Case {
            id: id.into(),
            inputs: inputs.into(),
            expected: expected.into(),
            got: got.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
        }
    }

    pub fn numeric(
        id: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        residual: f64,
        tol: f64,
    ) -> Self {
        Case {
            id: id.into(),
            inputs: inputs.into(),
            expected: expected.into(),
            got: got.into(),
            status: if residual.is_finite() && residual <= tol {
                Status::Pass
            } else {
                Status::Fail
            },
            residual: Some(residual),
        }
    }

    pub fn skip(id: impl Into<String>, reason: impl Into<String>) -> Self {
        Case {
            id: id.into(),
            inputs: reason.into(),
            expected: String::new(),
            got: String::new(),
            status: Status::Skip,
            residual: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub config: String,
    pub seed: u64,
    pub cases: Vec<Case>,
    pub summary: Summary,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: impl Into<String>, seed: u64) -> Self {
        Report {
            schema: 1,
            suite: suite.into(),
            config: config.into(),
            seed,
            cases: Vec::new(),
            summary: Summary::default(),
            wall_ms: 0,
        }
    }

    pub fn push(&mut self, case: Case) {
        match case.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skip => self.summary.skipped += 1,
        }
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = Case>) {
        for c in cases {
            self.push(c);
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.extend(other.cases);
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Human summary; failing cases are listed in full, passing ones
    /// only counted per prefix.
    pub fn render_text(&self) -> String {
        use std::collections::BTreeMap;
        let mut out = String::new();
        out.push_str(&format!("suite: {}\n", self.suite));
        out.push_str(&format!("config: {}\n", self.config));
        out.push_str(&format!("seed: {}\n", self.seed));
        let mut groups: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
        for c in &self.cases {
            let prefix = c.id.split('.').take(2).collect::<Vec<_>>().join(".");
            let e = groups.entry(prefix).or_default();
            match c.status {
                Status::Pass => e.0 += 1,
                Status::Fail => e.1 += 1,
                Status::Skip => e.2 += 1,
            }
        }
        for (prefix, (p, f, s)) in &groups {
            let verdict = if *f == 0 { "ok" } else { "FAIL" };
            out.push_str(&format!(
                "  [{verdict}] {prefix}: {p} pass, {f} fail, {s} skipped\n"
            ));
        }
        for c in &self.cases {
            if c.status == Status::Fail {
                out.push_str(&format!(
                    "  FAIL {} inputs={} expected={} got={}{}\n",
                    c.id,
                    c.inputs,
                    c.expected,
                    c.got,
                    c.residual
                        .map(|r| format!(" residual={r:.3e}"))
                        .unwrap_or_default()
                ));
            }
        }
        out.push_str(&format!(
            "total: {} pass, {} fail, {} skipped ({} ms)\n",
            self.summary.pass, self.summary.fail, self.summary.skipped, self.wall_ms
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_statuses() {
        let mut r = Report::new("demo", "p=3", 7);
        r.push(Case::pass("a.b", "x", "1"));
        r.push(Case::check("a.c", "x", "1", "2", false));
        r.push(Case::skip("a.d", "unsupported"));
        assert_eq!(r.summary.pass, 1);
        assert_eq!(r.summary.fail, 1);
        assert_eq!(r.summary.skipped, 1);
        assert!(!r.all_passed());
        let text = r.render_text();
        assert!(text.contains("FAIL a.c"));
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("empty", "", 0);
        assert!(r.all_passed());
        assert_eq!(r.summary.pass + r.summary.fail + r.summary.skipped, 0);
    }
}
