use std::collections::BTreeMap;

use serde::Serialize;

/// One checked property on one trial.
///
/// `slack` follows the [`crate::order::OrderVerdict`] convention: negative
/// values measure a violation, and the record passes iff
/// `slack ≥ −tolerance`. Evaluation errors carry no slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub case: String,
    pub property: String,
    pub input_digest: String,
    pub slack: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PropertySummary {
    pub records: usize,
    pub failures: usize,
    /// Records with strictly negative slack, failing or within tolerance.
    pub negative_slack: usize,
    pub min_slack: Option<f64>,
}

impl PropertySummary {
    fn absorb(&mut self, r: &TrialRecord) {
        self.records += 1;
        self.failures += usize::from(!r.pass);
        if let Some(s) = r.slack {
            self.negative_slack += usize::from(s < 0.0);
            self.min_slack = Some(self.min_slack.map_or(s, |m| m.min(s)));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub cases: usize,
    pub trials: usize,
    pub records: usize,
    pub failures: usize,
    pub min_slack: Option<f64>,
    pub properties: BTreeMap<String, PropertySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// All records of one check, for one mean kind where applicable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub check_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_kind: Option<String>,
    pub exploratory: bool,
    pub config_digest: String,
    pub summary: ReportSummary,
    /// Every record in memory; only failing ones are serialized.
    #[serde(rename = "failed_records", serialize_with = "serialize_failed")]
    pub records: Vec<TrialRecord>,
}

fn serialize_failed<S: serde::Serializer>(
    records: &[TrialRecord],
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(records.iter().filter(|r| !r.pass))
}

impl TrialReport {
    pub(crate) fn new(
        check_id: &str,
        mean_kind: Option<String>,
        exploratory: bool,
        config_digest: String,
        cases: usize,
        trials: usize,
        records: Vec<TrialRecord>,
    ) -> Self {
        let mut total = PropertySummary::default();
        let mut properties = BTreeMap::<String, PropertySummary>::new();
        for r in &records {
            total.absorb(r);
            properties.entry(r.property.clone()).or_default().absorb(r);
        }
        Self {
            check_id: check_id.to_owned(),
            mean_kind,
            exploratory,
            config_digest,
            summary: ReportSummary {
                cases,
                trials,
                records: total.records,
                failures: total.failures,
                min_slack: total.min_slack,
                properties,
                wall_time_ms: None,
            },
            records,
        }
    }

    pub fn failures(&self) -> usize {
        self.summary.failures
    }

    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    /// Display label, e.g. `thm-2.4[karcher]`.
    pub fn label(&self) -> String {
        match &self.mean_kind {
            Some(k) => format!("{}[{k}]", self.check_id),
            None => self.check_id.clone(),
        }
    }

    /// Copy with the timing field cleared, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.summary.wall_time_ms = None;
        r
    }

    pub fn failed_records(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Pretty JSON array of reports. `with_timing = false` drops wall times so
/// that two runs of one config produce identical bytes.
pub fn reports_to_json(reports: &[TrialReport], with_timing: bool) -> String {
    let stripped: Vec<TrialReport>;
    let view = if with_timing {
        reports
    } else {
        stripped = reports.iter().map(TrialReport::without_timing).collect();
        &stripped
    };
    serde_json::to_string_pretty(view).expect("reports contain only serializable data")
}

/// CSV summary with one line per report.
pub fn reports_to_csv(reports: &[TrialReport]) -> String {
    let mut out = String::from("check_id,mean_kind,exploratory,cases,records,failures,min_slack\n");
    for r in reports {
        let min = r
            .summary
            .min_slack
            .map_or_else(String::new, |s| format!("{s:e}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.check_id,
            r.mean_kind.as_deref().unwrap_or(""),
            r.exploratory,
            r.summary.cases,
            r.summary.records,
            r.summary.failures,
            min
        ));
    }
    out
}
