//! Archive snapshots as CSV.
//!
//! One row per occupied cell, row-major cell order. Floats are written with
//! Rust's shortest round-trip formatting, so importing a snapshot restores
//! the exact bit pattern of every value and re-exporting reproduces the file
//! byte for byte.

use crate::archive::{ArchiveConfig, GridArchive, Solution, SolutionMeta};
use crate::error::{Error, Result};
use crate::genome::{Genome, GENOME_LEN};
use std::io::{BufRead, Write};

pub const HEADER: &str = "xi,yi,measure_x,measure_y,fitness,threshold,\
genome_0,genome_1,genome_2,genome_3,genome_4,genome_5,genome_6,genome_7,genome_8,genome_9,genome_10,\
nose_type,stability,alt_1,alt_2,alt_3";

const FIELDS: usize = 22;

pub fn write_archive<W: Write>(archive: &GridArchive, out: &mut W) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    for (xi, yi, s) in archive.occupants() {
        write!(
            out,
            "{xi},{yi},{},{},{},{}",
            s.measure_x,
            s.measure_y,
            s.fitness,
            archive.threshold(xi, yi)
        )?;
        for g in s.genome.as_slice() {
            write!(out, ",{g}")?;
        }
        writeln!(
            out,
            ",{},{},{},{},{}",
            s.meta.nose_type,
            s.meta.stability,
            s.meta.altitudes[0],
            s.meta.altitudes[1],
            s.meta.altitudes[2]
        )?;
    }
    Ok(())
}

pub fn archive_to_string(archive: &GridArchive) -> String {
    let mut buf = Vec::new();
    write_archive(archive, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("csv is ascii")
}

/// Reads a snapshot produced by [`write_archive`]. The grid geometry comes
/// from `config`; cell coordinates and thresholds are restored verbatim after
/// validation, so annealed snapshots keep their threshold state.
pub fn read_archive<R: BufRead>(input: R, config: ArchiveConfig) -> Result<GridArchive> {
    let mut archive = GridArchive::new(config)?;
    let mut lines = input.lines().enumerate();
    match lines.next() {
        Some((_, Ok(line))) if line.trim_end() == HEADER => {}
        Some((_, Ok(line))) => {
            return Err(Error::ArchiveCsv {
                line: 1,
                msg: format!(
                    "unexpected header {:?}",
                    line.chars().take(40).collect::<String>()
                ),
            })
        }
        Some((_, Err(e))) => return Err(e.into()),
        None => {
            return Err(Error::ArchiveCsv {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }
    for (idx, line) in lines {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let row = idx + 1;
        let (xi, yi, solution, threshold) = parse_row(line, row)?;
        let expected = archive.index_of(solution.measure_x, solution.measure_y);
        if expected != (xi, yi) {
            return Err(Error::ArchiveCsv {
                line: row,
                msg: format!("measures bin to {expected:?}, row claims ({xi},{yi})"),
            });
        }
        archive
            .restore_cell(xi, yi, solution, threshold)
            .map_err(|e| Error::ArchiveCsv {
                line: row,
                msg: e.to_string(),
            })?;
    }
    Ok(archive)
}

fn parse_row(line: &str, row: usize) -> Result<(usize, usize, Solution, f64)> {
    let bad = |msg: String| Error::ArchiveCsv { line: row, msg };
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != FIELDS {
        return Err(bad(format!(
            "expected {FIELDS} fields, got {}",
            fields.len()
        )));
    }
    let index = |i: usize| -> Result<usize> {
        fields[i]
            .parse::<usize>()
            .map_err(|_| bad(format!("field {i} is not a cell index: {:?}", fields[i])))
    };
    let real = |i: usize| -> Result<f64> {
        let v: f64 = fields[i]
            .parse()
            .map_err(|_| bad(format!("field {i} is not a number: {:?}", fields[i])))?;
        if !v.is_finite() {
            return Err(bad(format!("field {i} is not finite")));
        }
        Ok(v)
    };

    let xi = index(0)?;
    let yi = index(1)?;
    let measure_x = real(2)?;
    let measure_y = real(3)?;
    let fitness = real(4)?;
    let threshold = real(5)?;
    let mut genome = [0.0; GENOME_LEN];
    for (k, g) in genome.iter_mut().enumerate() {
        *g = real(6 + k)?;
    }
    let nose_type = index(17)?;
    if nose_type > 5 {
        return Err(bad(format!("nose_type {nose_type} out of range")));
    }
    let stability = real(18)?;
    let altitudes = [real(19)?, real(20)?, real(21)?];
    Ok((
        xi,
        yi,
        Solution {
            genome: Genome(genome),
            fitness,
            measure_x,
            measure_y,
            meta: SolutionMeta {
                nose_type,
                stability,
                altitudes,
            },
        },
        threshold,
    ))
}
