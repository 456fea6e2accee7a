//! Where input tables come from. The default path reads local files; a
//! remote source exists behind an injectable transport so it can be mocked
//! and is never used unless explicitly configured.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Cursor, Read};
use std::path::{Path, PathBuf};

/// The input tables of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dataset {
    Tweets,
    KeywordTweets,
    Sales,
    Gas,
    Fx,
    Lexicon,
}

impl Dataset {
    pub const ALL: [Dataset; 6] = [
        Dataset::Tweets,
        Dataset::KeywordTweets,
        Dataset::Sales,
        Dataset::Gas,
        Dataset::Fx,
        Dataset::Lexicon,
    ];

    /// Config key and default file stem.
    pub fn key(self) -> &'static str {
        match self {
            Dataset::Tweets => "tweets",
            Dataset::KeywordTweets => "keyword_tweets",
            Dataset::Sales => "sales",
            Dataset::Gas => "gas",
            Dataset::Fx => "fx",
            Dataset::Lexicon => "lexicon",
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Opens a readable stream for a dataset.
pub trait DataSource {
    fn open(&self, dataset: Dataset) -> io::Result<Box<dyn Read>>;
    /// Human-readable origin used in error messages.
    fn describe(&self, dataset: Dataset) -> String;
    /// Whether the dataset is configured at all. Optional inputs that are
    /// not provided are skipped or replaced by defaults.
    fn provides(&self, _dataset: Dataset) -> bool {
        true
    }
}

/// Local files, one path per dataset.
#[derive(Debug, Clone, Default)]
pub struct FileSource {
    paths: Vec<(Dataset, PathBuf)>,
}

impl FileSource {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, dataset: Dataset, path: impl Into<PathBuf>) -> Self {
        self.set(dataset, path);
        self
    }

    pub fn set(&mut self, dataset: Dataset, path: impl Into<PathBuf>) {
        let path = path.into();
        match self.paths.iter_mut().find(|(d, _)| *d == dataset) {
            Some(slot) => slot.1 = path,
            None => self.paths.push((dataset, path)),
        }
    }

    pub fn path(&self, dataset: Dataset) -> Option<&Path> {
        self.paths
            .iter()
            .find(|(d, _)| *d == dataset)
            .map(|(_, p)| p.as_path())
    }
}

impl DataSource for FileSource {
    fn open(&self, dataset: Dataset) -> io::Result<Box<dyn Read>> {
        let path = self.path(dataset).ok_or_else(|| {
            io::Error::new(io::ErrorKind::NotFound, format!("no path configured for `{dataset}`"))
        })?;
        Ok(Box::new(BufReader::new(File::open(path)?)))
    }

    fn describe(&self, dataset: Dataset) -> String {
        match self.path(dataset) {
            Some(p) => p.display().to_string(),
            None => format!("<{dataset}: unset>"),
        }
    }

    fn provides(&self, dataset: Dataset) -> bool {
        self.path(dataset).is_some()
    }
}

/// Fetches raw bytes for a URL.
pub trait Transport {
    fn fetch(&self, url: &str) -> io::Result<Vec<u8>>;
}

/// The default transport: refuses every request. Network access is out of
/// scope for the offline pipeline.
#[derive(Debug, Clone, Copy, Default)]
pub struct DisabledTransport;

impl Transport for DisabledTransport {
    fn fetch(&self, url: &str) -> io::Result<Vec<u8>> {
        Err(io::Error::new(
            io::ErrorKind::Unsupported,
            format!("remote fetch disabled (requested {url})"),
        ))
    }
}

/// Datasets at `{base_url}/{key}.csv`, fetched through `transport`.
pub struct RemoteSource<T: Transport> {
    base_url: String,
    transport: T,
}

impl<T: Transport> RemoteSource<T> {
    pub fn new(base_url: impl Into<String>, transport: T) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            transport,
        }
    }

    pub fn url(&self, dataset: Dataset) -> String {
        format!("{}/{}.csv", self.base_url, dataset.key())
    }
}

impl<T: Transport> DataSource for RemoteSource<T> {
    fn open(&self, dataset: Dataset) -> io::Result<Box<dyn Read>> {
        let bytes = self.transport.fetch(&self.url(dataset))?;
        Ok(Box::new(Cursor::new(bytes)))
    }

    fn describe(&self, dataset: Dataset) -> String {
        self.url(dataset)
    }

    /// The bundled lexicon is used instead of a remote one.
    fn provides(&self, dataset: Dataset) -> bool {
        dataset != Dataset::Lexicon
    }
}
