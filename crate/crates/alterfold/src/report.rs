//! Machine-readable run reports.

use serde::Serialize;
use sha2::{Digest, Sha256};

use alterfold_core::center::{Center, ModularData};
use alterfold_core::{FusionCategory, C64};

use crate::formats::serialize_category;

/// One line of a report: a computed value, a pass/fail check, or both.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultEntry {
    pub name: String,
    /// `(re, im)`.
    pub value: Option<[f64; 2]>,
    pub pass: Option<bool>,
    pub defect: Option<f64>,
}

impl ResultEntry {
    pub fn value(name: impl Into<String>, z: C64) -> ResultEntry {
        ResultEntry { name: name.into(), value: Some([z.re, z.im]), pass: None, defect: None }
    }

    /// A check that passes iff `defect < tol`.
    pub fn check(name: impl Into<String>, defect: f64, tol: f64) -> ResultEntry {
        ResultEntry { name: name.into(), value: None, pass: Some(defect < tol), defect: Some(defect) }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> ResultEntry {
        ResultEntry { name: name.into(), value: None, pass: Some(pass), defect: None }
    }
}

/// Modular data of a center in emitted form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterTable {
    /// The normalization convention of `s_tilde`.
    pub normalization: String,
    pub rank: usize,
    pub labels: Vec<String>,
    /// Underlying object of each center simple as a list of simple labels.
    pub underlying: Vec<Vec<String>>,
    pub dims: Vec<[f64; 2]>,
    pub twists: Vec<[f64; 2]>,
    /// Row-major entries of `S̃`.
    pub s_tilde: Vec<[f64; 2]>,
}

impl CenterTable {
    pub fn new(center: &Center, md: &ModularData) -> CenterTable {
        let cat = center.category();
        let n = md.rank_z;
        let pair = |z: C64| [z.re, z.im];
        CenterTable {
            normalization: "unnormalized S-tilde: S-tilde[0][0] = 1, S-tilde * conj(S-tilde) = mu_z * I with mu_z = sum of dims squared; S = S-tilde / sqrt(mu_z); T = diag(twists)".into(),
            rank: n,
            labels: (0..n).map(|a| format!("Z{a}")).collect(),
            underlying: center.objects().iter().map(|o| o.slots.iter().map(|&i| cat.label(i).to_string()).collect()).collect(),
            dims: md.dims.iter().copied().map(pair).collect(),
            twists: md.twists.iter().copied().map(pair).collect(),
            s_tilde: (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| pair(md.s_tilde[(a, b)])).collect(),
        }
    }
}

/// Report of one CLI invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of the canonical category serialization.
    pub fingerprint: String,
    pub results: Vec<ResultEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<CenterTable>,
    pub wall_time_s: f64,
}

/// Hex SHA-256 of the canonical serialization of `cat`.
pub fn fingerprint(cat: &FusionCategory) -> String {
    format!("{:x}", Sha256::digest(serialize_category(cat).as_bytes()))
}

fn fmt_complex(v: [f64; 2]) -> String {
    if v[1] < 0.0 {
        format!("{:?} - {:?}i", v[0], -v[1])
    } else {
        format!("{:?} + {:?}i", v[0], v[1])
    }
}

impl RunReport {
    /// `false` iff some check failed.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass != Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One CSV row per result, followed by the center table when present.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
        w.write_record(["name", "re", "im", "pass", "defect"]).expect("in-memory write");
        let mut rows: Vec<[String; 5]> = self
            .results
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    opt(r.value.map(|v| v[0])),
                    opt(r.value.map(|v| v[1])),
                    r.pass.map(|p| p.to_string()).unwrap_or_default(),
                    opt(r.defect),
                ]
            })
            .collect();
        if let Some(c) = &self.center {
            let mut push = |name: String, v: [f64; 2]| rows.push([name, format!("{:?}", v[0]), format!("{:?}", v[1]), String::new(), String::new()]);
            for a in 0..c.rank {
                push(format!("dim[{}]", c.labels[a]), c.dims[a]);
                push(format!("twist[{}]", c.labels[a]), c.twists[a]);
            }
            for a in 0..c.rank {
                for b in 0..c.rank {
                    push(format!("s_tilde[{}][{}]", c.labels[a], c.labels[b]), c.s_tilde[a * c.rank + b]);
                }
            }
        }
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&r.name);
            out.push_str(": ");
            let mut parts = Vec::new();
            if let Some(v) = r.value {
                parts.push(fmt_complex(v));
            }
            if let Some(p) = r.pass {
                parts.push(if p { "PASS".into() } else { "FAIL".into() });
            }
            if let Some(d) = r.defect {
                parts.push(format!("(defect {d:e})"));
            }
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        if let Some(c) = &self.center {
            for a in 0..c.rank {
                out.push_str(&format!(
                    "{} = [{}]: dim {}, twist {}\n",
                    c.labels[a],
                    c.underlying[a].join(" + "),
                    fmt_complex(c.dims[a]),
                    fmt_complex(c.twists[a])
                ));
            }
        }
        out
    }
}
