use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible archive grids: {0}")]
    ConfigMismatch(String),
    #[error("cannot insert solution with non-finite fitness {0}")]
    NonFiniteFitness(f64),
    #[error("archive csv, line {line}: {msg}")]
    ArchiveCsv { line: usize, msg: String },
    #[error("motor file, line {line}: {msg}")]
    MotorFile { line: usize, msg: String },
    #[error("bad genome string: {0}")]
    GenomeParse(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
