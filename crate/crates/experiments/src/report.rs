//! Per-run scores, run means and degradation tables.

use rstkit::metrics::{ParsevalCounts, ScoreTriple};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub seed: u64,
    pub target: String,
    pub counts: ParsevalCounts,
    pub scores: ScoreTriple,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScoreReport {
    pub name: String,
    /// Ordered by run, then by target.
    pub rows: Vec<RunRow>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

impl ScoreReport {
    /// Targets in first-seen order.
    pub fn targets(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.target.as_str()) {
                out.push(&r.target);
            }
        }
        out
    }

    pub fn seeds(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.seed) {
                out.push(r.seed);
            }
        }
        out
    }

    /// Mean over runs of the per-run scores of `target`.
    pub fn mean(&self, target: &str) -> Option<ScoreTriple> {
        ScoreTriple::mean(self.rows.iter().filter(|r| r.target == target).map(|r| &r.scores))
    }

    pub fn means(&self) -> Vec<(String, ScoreTriple)> {
        self.targets()
            .into_iter()
            .map(|t| (t.to_owned(), self.mean(t).expect("target has rows")))
            .collect()
    }

    /// Read the per-run rows back from [`ScoreReport::to_csv`] output; mean
    /// rows are recomputed, not read.
    pub fn from_csv(name: &str, content: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(content.as_bytes());
        let mut rows = Vec::new();
        let bad = |what: &str| Error::Config(format!("report `{name}`: bad {what}"));
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            if rec.get(0) == Some("mean") {
                continue;
            }
            let num =
                |i: usize| -> Result<usize> { rec.get(i).and_then(|x| x.parse().ok()).ok_or_else(|| bad("count")) };
            let counts = ParsevalCounts {
                matched_s: num(5)?,
                matched_n: num(6)?,
                matched_r: num(7)?,
                gold_units: num(8)?,
                pred_units: num(9)?,
            };
            rows.push(RunRow {
                seed: rec.get(0).and_then(|x| x.parse().ok()).ok_or_else(|| bad("run"))?,
                target: rec.get(1).ok_or_else(|| bad("target"))?.to_owned(),
                counts,
                scores: counts.scores(),
            });
        }
        Ok(ScoreReport {
            name: name.to_owned(),
            rows,
        })
    }

    /// Per-run rows followed by one `mean` row per target.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "run",
            "target",
            "S",
            "N",
            "R",
            "matched_s",
            "matched_n",
            "matched_r",
            "gold_units",
            "pred_units",
        ])
        .map_err(csv_err)?;
        for r in &self.rows {
            let c = &r.counts;
            w.write_record([
                r.seed.to_string(),
                r.target.clone(),
                format!("{}", r.scores.s),
                format!("{}", r.scores.n),
                format!("{}", r.scores.r),
                c.matched_s.to_string(),
                c.matched_n.to_string(),
                c.matched_r.to_string(),
                c.gold_units.to_string(),
                c.pred_units.to_string(),
            ])
            .map_err(csv_err)?;
        }
        for (t, m) in self.means() {
            w.write_record(
                [
                    "mean".to_owned(),
                    t,
                    format!("{}", m.s),
                    format!("{}", m.n),
                    format!("{}", m.r),
                ]
                .into_iter()
                .chain(std::iter::repeat_n(String::new(), 5)),
            )
            .map_err(csv_err)?;
        }
        Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
    }
}

/// One target's mean scores under two conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegradationRow {
    pub target: String,
    pub baseline: ScoreTriple,
    pub other: ScoreTriple,
    /// `baseline - other`: positive when the other condition scores lower.
    pub delta: ScoreTriple,
}

/// Rows for the targets of `other` that the baseline also scored.
pub fn degradation(baseline: &ScoreReport, other: &ScoreReport) -> Vec<DegradationRow> {
    other
        .targets()
        .into_iter()
        .filter_map(|t| {
            let b = baseline.mean(t)?;
            let o = other.mean(t)?;
            Some(DegradationRow {
                target: t.to_owned(),
                baseline: b,
                other: o,
                delta: b.minus(&o),
            })
        })
        .collect()
}

pub fn degradation_csv(rows: &[DegradationRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "target", "base_S", "base_N", "base_R", "S", "N", "R", "deg_S", "deg_N", "deg_R",
    ])
    .map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.target.clone()];
        for t in [&r.baseline, &r.other, &r.delta] {
            rec.extend([t.s, t.n, t.r].map(|x| format!("{x}")));
        }
        w.write_record(rec).map_err(csv_err)?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}
