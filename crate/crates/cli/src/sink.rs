use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use rieszcheck::{Instance, Tolerances64};
use sha2::{Digest, Sha256};

/// Columns shared by every row.
const PREFIX: [&str; 6] = [
    "instance_hash",
    "subcommand",
    "tol_prop",
    "tol_eval",
    "tol_chain_1d",
    "tol_chain_c",
];

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

pub fn flag(b: bool) -> String {
    b.to_string()
}

/// SHA-256 of the canonical instance text.
pub fn instance_hash(inst: &Instance<f64>) -> String {
    text_hash(&inst.to_text())
}

pub fn text_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// CSV writer that prefixes every row with the instance hash, the subcommand
/// and the tolerances in force.
pub struct Sink {
    out: csv::Writer<Box<dyn Write>>,
    subcommand: String,
    tolerances: [String; 4],
    header_written: bool,
}

impl Sink {
    pub fn new(path: Option<&Path>, subcommand: &str, tol: &Tolerances64) -> Result<Self> {
        let target: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Self {
            out: csv::Writer::from_writer(target),
            subcommand: subcommand.to_string(),
            tolerances: [
                num(tol.prop),
                num(tol.eval),
                num(tol.chain_1d),
                tol.chain_c.map_or_else(|| "calibrated".to_string(), num),
            ],
            header_written: false,
        })
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        let mut row: Vec<&str> = PREFIX.to_vec();
        row.extend_from_slice(columns);
        self.out.write_record(&row)?;
        self.header_written = true;
        Ok(())
    }

    pub fn row(&mut self, hash: &str, fields: &[String]) -> Result<()> {
        debug_assert!(self.header_written);
        let mut row = vec![hash.to_string(), self.subcommand.clone()];
        row.extend(self.tolerances.iter().cloned());
        row.extend(fields.iter().cloned());
        self.out.write_record(&row)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
