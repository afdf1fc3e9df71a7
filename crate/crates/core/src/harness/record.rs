use std::collections::BTreeSet;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HEADER: &str = "experiment,model,problem,param,metric,value,seconds";

/// One measured value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub model: String,
    pub problem: String,
    /// Parameter point, e.g. `dk=5`, `grid=32` or `seed=3`.
    pub param: String,
    pub metric: String,
    pub value: f64,
    pub seconds: f64,
}

/// Append-only result table with at most one row per
/// (model, problem, parameter point, metric).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    rows: Vec<ResultRecord>,
    keys: BTreeSet<(String, String, String, String)>,
}

impl ResultTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: ResultRecord) -> Result<()> {
        let key = (r.model.clone(), r.problem.clone(), r.param.clone(), r.metric.clone());
        if !self.keys.insert(key) {
            return Err(Error::InvalidArgument(format!(
                "duplicate result {}/{}/{}/{}",
                r.model, r.problem, r.param, r.metric
            )));
        }
        self.rows.push(r);
        Ok(())
    }

    pub fn extend(&mut self, other: ResultTable) -> Result<()> {
        other.rows.into_iter().try_for_each(|r| self.push(r))
    }

    pub fn rows(&self) -> &[ResultRecord] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// First value matching the given coordinates.
    pub fn value(&self, model: &str, problem: &str, param: &str, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.problem == problem && r.param == param && r.metric == metric)
            .map(|r| r.value)
    }

    /// All rows of one model and metric, in insertion order.
    pub fn series(&self, model: &str, metric: &str) -> Vec<&ResultRecord> {
        self.rows
            .iter()
            .filter(|r| r.model == model && r.metric == metric)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        wr.write_record(HEADER.split(','))
            .map_err(|e| Error::Format(format!("csv: {e}")))?;
        for r in &self.rows {
            wr.serialize(r).map_err(|e| Error::Format(format!("csv: {e}")))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        self.write_csv(File::create(path)?)
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers().map_err(|e| Error::Format(format!("csv: {e}")))?;
        if header.iter().collect::<Vec<_>>().join(",") != HEADER {
            return Err(Error::Format("unexpected result header".into()));
        }
        let mut table = Self::new();
        for row in rd.deserialize() {
            table.push(row.map_err(|e| Error::Format(format!("csv: {e}")))?)?;
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(param: &str, value: f64) -> ResultRecord {
        ResultRecord {
            experiment: "superres".into(),
            model: "fno".into(),
            problem: "derivative".into(),
            param: param.into(),
            metric: "test_rel_l2".into(),
            value,
            seconds: 0.0,
        }
    }

    #[test]
    fn csv_roundtrip() {
        let mut t = ResultTable::new();
        t.push(rec("dk=0", 0.125)).unwrap();
        t.push(rec("dk=5", f64::NAN)).unwrap();
        let text = t.to_csv_string().unwrap();
        assert!(text.starts_with(&format!("{HEADER}\n")));
        let back = ResultTable::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.rows()[0], t.rows()[0]);
        assert!(back.rows()[1].value.is_nan());
    }

    #[test]
    fn duplicates_are_rejected() {
        let mut t = ResultTable::new();
        t.push(rec("dk=0", 1.0)).unwrap();
        assert!(t.push(rec("dk=0", 2.0)).is_err());
    }
}
