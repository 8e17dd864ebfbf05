use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rsl_core::ci::GaussianDataset;
use rsl_core::io::{parse_graph, read_dataset, GraphFile, IoError};
use serde::{de::DeserializeOwned, Serialize};

use crate::error::CliError;

pub fn read_graph(path: &Path) -> Result<GraphFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_graph(&text).map_err(|e| CliError::input(path, e))
}

pub fn read_csv(path: &Path) -> Result<(Vec<String>, GaussianDataset), CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_dataset(BufReader::new(file)).map_err(|e| CliError::input(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, IoError::Json(e)))
}

/// Destination file, or stdout when none is given.
pub struct Output {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Output {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::io(p, e))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Output {
            path: path.map(Path::to_path_buf),
            inner,
        })
    }

    fn label(&self) -> PathBuf {
        self.path
            .clone()
            .unwrap_or_else(|| PathBuf::from("<stdout>"))
    }

    pub fn io_error(&self, e: std::io::Error) -> CliError {
        CliError::io(&self.label(), e)
    }

    pub fn write_str(&mut self, s: &str) -> Result<(), CliError> {
        self.inner
            .write_all(s.as_bytes())
            .and_then(|_| self.inner.flush())
            .map_err(|e| CliError::io(&self.label(), e))
    }

    pub fn write_json<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        self.write_str(&text)
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        &mut self.inner
    }
}
