use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::init::PairScore;
use crate::model::{Partition, Record, RecordId, RecordPair};
use crate::oracle::{parse_verdict, Verdict};

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))
}

pub(crate) fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(format!("cannot create {}: {e}", path.display())))
}

pub(crate) fn write_err(e: impl std::fmt::Display) -> Error {
    Error::Io(format!("write failed: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::MalformedInput(format!("line {}: {e}", pos.line())),
        None => Error::MalformedInput(e.to_string()),
    }
}

pub fn load_records(path: &Path) -> Result<Vec<Record>> {
    read_records(open(path)?)
}

/// Parses a records CSV: a header row with an `id` column, one record per
/// row, the remaining columns as attributes in header order.
pub fn read_records(reader: impl Read) -> Result<Vec<Record>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::MalformedInput("empty input: no header row".into()));
    }
    let id_col = header.iter().position(|h| h == "id").ok_or(Error::MissingIdColumn)?;
    let names: Vec<(usize, String)> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != id_col)
        .map(|(i, h)| (i, h.to_string()))
        .collect();

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        let id = RecordId::new(&row[id_col])
            .map_err(|_| Error::MalformedInput(format!("line {line}: empty id")))?;
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateRecordId(id));
        }
        let attributes = names.iter().map(|(i, n)| (n.clone(), row[*i].to_string())).collect();
        out.push(Record::new(id, attributes)?);
    }
    Ok(out)
}

/// Writes records with an `id` column followed by every attribute name in
/// first-seen order; absent attributes are written empty.
pub fn write_records(records: &[Record], out: impl Write) -> Result<()> {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        for (n, _) in r.attributes() {
            if !names.contains(&n.as_str()) {
                names.push(n);
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id"];
    header.extend(&names);
    w.write_record(&header).map_err(write_err)?;
    for r in records {
        let mut row = vec![r.id().as_str()];
        row.extend(names.iter().map(|n| r.get(n).unwrap_or("")));
        w.write_record(&row).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

#[derive(Deserialize)]
struct ScoreRow {
    id_a: String,
    id_b: String,
    probability: f64,
}

fn pair_from(a: &str, b: &str, line: u64) -> Result<RecordPair> {
    let id = |s: &str| RecordId::new(s).map_err(|_| Error::MalformedInput(format!("line {line}: empty id")));
    RecordPair::new(id(a)?, id(b)?).map_err(|e| Error::MalformedInput(format!("line {line}: {e}")))
}

/// Reads an external tool's `id_a,id_b,probability` CSV.
pub fn read_pair_scores(reader: impl Read, source: &str) -> Result<Vec<PairScore>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<ScoreRow>() {
        let row = row.map_err(csv_err)?;
        out.push(PairScore::new(pair_from(&row.id_a, &row.id_b, 0)?, row.probability, source)?);
    }
    Ok(out)
}

pub fn load_pair_scores(path: &Path) -> Result<Vec<PairScore>> {
    let source = path.file_stem().map_or_else(|| "external".into(), |s| s.to_string_lossy().into_owned());
    read_pair_scores(open(path)?, &source)
}

#[derive(Deserialize)]
struct TruthRow {
    id: String,
    entity: String,
}

/// Reads ground truth as `id,entity` rows; records sharing an entity label
/// form one cluster.
pub fn read_truth(reader: impl Read) -> Result<Partition> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut groups: BTreeMap<String, Vec<RecordId>> = BTreeMap::new();
    for row in rdr.deserialize::<TruthRow>() {
        let row = row.map_err(csv_err)?;
        let id = RecordId::new(row.id).map_err(|_| Error::MalformedInput("empty id in truth file".into()))?;
        groups.entry(row.entity).or_default().push(id);
    }
    Partition::new(groups.into_values().collect())
}

pub fn write_truth(truth: &Partition, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "entity"]).map_err(write_err)?;
    for (i, cluster) in truth.clusters().iter().enumerate() {
        for id in cluster {
            w.write_record([id.as_str(), &format!("e{i}")]).map_err(write_err)?;
        }
    }
    w.flush().map_err(write_err)
}

#[derive(Deserialize)]
struct LabelRow {
    id_a: String,
    id_b: String,
    verdict: String,
}

/// Reads labeled pairs (`id_a,id_b,verdict`) for accuracy estimation.
pub fn read_labeled_pairs(reader: impl Read) -> Result<Vec<(RecordPair, Verdict)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<LabelRow>() {
        let row = row.map_err(csv_err)?;
        let verdict = parse_verdict(&row.verdict)
            .ok_or_else(|| Error::MalformedInput(format!("bad verdict {:?}", row.verdict)))?;
        out.push((pair_from(&row.id_a, &row.id_b, 0)?, verdict));
    }
    Ok(out)
}

/// Tab-separated ranking: rank, probability, clusters.
pub fn write_top_k(entries: &[(Partition, f64)], mut out: impl Write) -> Result<()> {
    writeln!(out, "rank\tprobability\tpartition").map_err(write_err)?;
    for (i, (p, prob)) in entries.iter().enumerate() {
        writeln!(out, "{}\t{:.12}\t{}", i + 1, prob, p).map_err(write_err)?;
    }
    Ok(())
}
