//! Serialized forms of every command's output. Field order is fixed by the
//! struct definitions, so repeated runs produce identical bytes.

use std::io;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::ser::Formatter;
use twistor_core::consistency::CheckResult;
use twistor_core::curvature::ModelName;
use twistor_core::gh::{Residuals, W1W3Reading, W2W3Reading};
use twistor_core::theorems::{Bound, Evidence};
use twistor_core::{ClassReport, Condition, SamplingConfig, TheoremOutcome};

use crate::document::CurvatureDoc;

#[derive(Debug, Serialize)]
pub struct ConfigDoc {
    pub seed: u64,
    pub samples: usize,
    pub triples: usize,
    pub tol: f64,
    pub w1w3: &'static str,
    pub w2w3: &'static str,
}

impl From<&SamplingConfig> for ConfigDoc {
    fn from(c: &SamplingConfig) -> Self {
        Self {
            seed: c.seed,
            samples: c.num_points,
            triples: c.num_arg_triples,
            tol: c.tol,
            w1w3: match c.w1w3 {
                W1W3Reading::Minus => "minus",
                W1W3Reading::Plus => "plus",
            },
            w2w3: match c.w2w3 {
                W2W3Reading::ThreeArgument => "three-argument",
                W2W3Reading::Repeated => "repeated",
            },
        }
    }
}

/// Condition residuals keyed by condition name, in the canonical order.
#[derive(Debug)]
pub struct ResidualsDoc(pub Residuals);

impl Serialize for ResidualsDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(Condition::ALL.len()))?;
        for (c, v) in self.0.iter() {
            map.serialize_entry(c.name(), &v)?;
        }
        map.end()
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationDoc {
    pub source: String,
    pub curvature: CurvatureDoc,
    pub component: String,
    pub n: u8,
    pub t1: f64,
    pub t2: f64,
    pub config: ConfigDoc,
    pub residuals: ResidualsDoc,
    pub passing: Vec<&'static str>,
    pub detected: &'static str,
    pub strict: bool,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

impl ClassificationDoc {
    pub fn new(source: String, curvature: CurvatureDoc, r: &ClassReport) -> Self {
        Self {
            source,
            curvature,
            component: r.component.to_string(),
            n: r.params.n.get(),
            t1: r.params.t1,
            t2: r.params.t2,
            config: ConfigDoc::from(&r.config),
            residuals: ResidualsDoc(r.residuals),
            passing: r.passing.iter().map(|c| c.as_str()).collect(),
            detected: r.detected.as_str(),
            strict: r.strict,
            flags: r.flags.clone(),
            notes: vec![r.nijenhuis.note()],
        }
    }
}

pub fn classification_csv(docs: &[ClassificationDoc]) -> Vec<u8> {
    let mut header: Vec<String> = [
        "source",
        "component",
        "n",
        "t1",
        "t2",
        "seed",
        "samples",
        "triples",
        "tol",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(Condition::ALL.iter().map(|c| c.name().to_string()));
    header.extend(
        ["detected", "strict", "flags"]
            .iter()
            .map(|s| s.to_string()),
    );
    let rows = docs.iter().map(|d| {
        let mut row = vec![
            d.source.clone(),
            d.component.clone(),
            d.n.to_string(),
            number(d.t1),
            number(d.t2),
            d.config.seed.to_string(),
            d.config.samples.to_string(),
            d.config.triples.to_string(),
            number(d.config.tol),
        ];
        row.extend(d.residuals.0.iter().map(|(_, v)| number(v)));
        row.push(d.detected.to_string());
        row.push(d.strict.to_string());
        row.push(d.flags.join("; "));
        row
    });
    csv_bytes(&header, rows)
}

#[derive(Debug, Serialize)]
pub struct EvidenceDoc {
    pub label: String,
    pub value: f64,
    pub bound: &'static str,
    pub threshold: f64,
    pub holds: bool,
    pub diagnostic: bool,
}

impl From<&Evidence> for EvidenceDoc {
    fn from(e: &Evidence) -> Self {
        Self {
            label: e.label.clone(),
            value: e.value,
            bound: bound_symbol(e.bound),
            threshold: e.threshold,
            holds: e.holds(),
            diagnostic: e.diagnostic,
        }
    }
}

fn bound_symbol(b: Bound) -> &'static str {
    match b {
        Bound::AtMost => "<=",
        Bound::Above => ">",
    }
}

#[derive(Debug, Serialize)]
pub struct TheoremDoc {
    pub id: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub evidence: Vec<EvidenceDoc>,
}

#[derive(Debug, Serialize)]
pub struct SuiteDoc {
    pub config: ConfigDoc,
    pub passed: usize,
    pub total: usize,
    pub failed: Vec<&'static str>,
    pub theorems: Vec<TheoremDoc>,
}

impl SuiteDoc {
    pub fn new(cfg: &SamplingConfig, outcomes: &[TheoremOutcome]) -> Self {
        Self {
            config: ConfigDoc::from(cfg),
            passed: outcomes.iter().filter(|o| o.passed).count(),
            total: outcomes.len(),
            failed: outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.id.as_str())
                .collect(),
            theorems: outcomes
                .iter()
                .map(|o| TheoremDoc {
                    id: o.id.as_str(),
                    statement: o.id.statement(),
                    passed: o.passed,
                    evidence: o.evidence.iter().map(EvidenceDoc::from).collect(),
                })
                .collect(),
        }
    }

    pub fn csv(&self) -> Vec<u8> {
        let header = [
            "id",
            "passed",
            "label",
            "value",
            "bound",
            "threshold",
            "holds",
            "diagnostic",
        ];
        let rows = self.theorems.iter().flat_map(|t| {
            t.evidence.iter().map(move |e| {
                vec![
                    t.id.to_string(),
                    t.passed.to_string(),
                    e.label.clone(),
                    number(e.value),
                    e.bound.to_string(),
                    number(e.threshold),
                    e.holds.to_string(),
                    e.diagnostic.to_string(),
                ]
            })
        });
        csv_bytes(&header, rows)
    }
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub name: &'static str,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
    pub witness: String,
}

impl From<&CheckResult> for CheckDoc {
    fn from(c: &CheckResult) -> Self {
        Self {
            name: c.name,
            max_residual: c.max_residual,
            tol: c.tol,
            passed: c.passed(),
            witness: c.witness.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SelftestDoc {
    pub seed: u64,
    pub trials: usize,
    pub fibre_trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
}

impl SelftestDoc {
    pub fn csv(&self) -> Vec<u8> {
        let header = ["name", "max_residual", "tol", "passed", "witness"];
        let rows = self.checks.iter().map(|c| {
            vec![
                c.name.to_string(),
                number(c.max_residual),
                number(c.tol),
                c.passed.to_string(),
                c.witness.clone(),
            ]
        });
        csv_bytes(&header, rows)
    }
}

#[derive(Debug, Serialize)]
pub struct ModelDoc {
    pub name: &'static str,
    pub parameters: Vec<&'static str>,
    pub description: &'static str,
}

impl From<ModelName> for ModelDoc {
    fn from(m: ModelName) -> Self {
        let (s, b, w) = m.uses();
        let parameters = [(s, "s"), (b, "B"), (w, "Wminus")]
            .into_iter()
            .filter_map(|(used, name)| used.then_some(name))
            .collect();
        Self {
            name: m.as_str(),
            parameters,
            description: m.description(),
        }
    }
}

pub fn models_csv(models: &[ModelDoc]) -> Vec<u8> {
    let rows = models.iter().map(|m| {
        vec![
            m.name.to_string(),
            m.parameters.join(" "),
            m.description.to_string(),
        ]
    });
    csv_bytes(&["name", "parameters", "description"], rows)
}

fn csv_bytes<H, R>(header: &[H], rows: impl Iterator<Item = Vec<R>>) -> Vec<u8>
where
    H: AsRef<[u8]>,
    R: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RowFormatter::default());
    value.serialize(&mut ser).expect("report types serialize");
    out.push(b'\n');
    out
}

/// Two-space indentation, except that arrays nested in arrays (matrix rows)
/// stay on one line.
#[derive(Default)]
struct RowFormatter {
    indent: usize,
    /// For each open container: is it an array, and is it printed inline.
    stack: Vec<(bool, bool)>,
    has_value: bool,
}

impl RowFormatter {
    fn inline(&self) -> bool {
        self.stack.last().is_some_and(|&(_, inline)| inline)
    }

    fn newline<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for RowFormatter {
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let inline = self.inline() || self.stack.last().is_some_and(|&(array, _)| array);
        self.stack.push((true, inline));
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let (_, inline) = self.stack.pop().unwrap_or_default();
        self.indent -= 1;
        if self.has_value && !inline {
            self.newline(w)?;
        }
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if self.inline() {
            w.write_all(if first { b"" } else { b", " })
        } else {
            w.write_all(if first { b"" } else { b"," })?;
            self.newline(w)
        }
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let inline = self.inline();
        self.stack.push((false, inline));
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let (_, inline) = self.stack.pop().unwrap_or_default();
        self.indent -= 1;
        if self.has_value && !inline {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if self.inline() {
            w.write_all(if first { b"" } else { b", " })
        } else {
            w.write_all(if first { b"" } else { b"," })?;
            self.newline(w)
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Plain decimals for moderate magnitudes, scientific notation otherwise.
pub fn number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}
