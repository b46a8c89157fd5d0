//! Readers for the UCI Iris CSV and the MNIST IDX files.

use std::fs;
use std::path::{Path, PathBuf};

use rda_core::data::RawRecord;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("row {row}: expected 5 columns, found {found}")]
    Schema { row: usize, found: usize },
    #[error("{}: no records", path.display())]
    EmptyDataset { path: PathBuf },
    #[error("{}: magic number {found:#010x}, expected {expected:#010x}", path.display())]
    MagicMismatch { path: PathBuf, expected: u32, found: u32 },
    #[error("{images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },
}

impl LoadError {
    /// True when the failure is a file that does not exist.
    pub fn is_missing_file(&self) -> bool {
        matches!(self, LoadError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound)
    }
}

fn read(path: &Path) -> Result<Vec<u8>, LoadError> {
    fs::read(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Reads `sepal_len,sepal_wid,petal_len,petal_wid,class` rows. Blank lines
/// are skipped; row numbers in errors are 1-based line numbers.
pub fn load_iris_csv(path: &Path) -> Result<Vec<RawRecord>, LoadError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| LoadError::Io {
        path: path.to_owned(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })?;
    parse_iris(&text).map_err(|e| match e {
        LoadError::EmptyDataset { .. } => LoadError::EmptyDataset { path: path.to_owned() },
        other => other,
    })
}

pub fn parse_iris(text: &str) -> Result<Vec<RawRecord>, LoadError> {
    let mut records = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let row = k + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 5 {
            return Err(LoadError::Schema { row, found: cols.len() });
        }
        let features = cols[..4]
            .iter()
            .map(|c| {
                c.parse::<f64>().map_err(|e| LoadError::Parse {
                    row,
                    msg: format!("`{c}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        records.push(RawRecord {
            features,
            label: cols[4].to_owned(),
        });
    }
    if records.is_empty() {
        return Err(LoadError::EmptyDataset { path: PathBuf::new() });
    }
    Ok(records)
}

/// Images and labels of one MNIST split, kept as raw bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnistSet {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
    pub labels: Vec<u8>,
}

impl MnistSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn image(&self, i: usize) -> &[u8] {
        let n = self.rows * self.cols;
        &self.pixels[i * n..(i + 1) * n]
    }

    /// Records for the images whose digit is in `keep`, in file order,
    /// stopping after `limit` of them.
    pub fn records(&self, keep: &[u8], limit: Option<usize>) -> Vec<RawRecord> {
        (0..self.len())
            .filter(|&i| keep.contains(&self.labels[i]))
            .take(limit.unwrap_or(usize::MAX))
            .map(|i| RawRecord {
                features: self.image(i).iter().map(|&p| f64::from(p)).collect(),
                label: self.labels[i].to_string(),
            })
            .collect()
    }
}

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

struct Cursor<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], LoadError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(LoadError::Io {
                path: self.path.to_owned(),
                source: std::io::Error::new(
                    std::io::ErrorKind::UnexpectedEof,
                    format!("truncated at byte {} (needed {n} more)", self.bytes.len()),
                ),
            });
        };
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, LoadError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn magic(&mut self, expected: u32) -> Result<(), LoadError> {
        let found = self.u32()?;
        if found != expected {
            return Err(LoadError::MagicMismatch {
                path: self.path.to_owned(),
                expected,
                found,
            });
        }
        Ok(())
    }
}

pub fn parse_idx_images(path: &Path, bytes: &[u8]) -> Result<(usize, usize, usize, Vec<u8>), LoadError> {
    let mut cur = Cursor { path, bytes, pos: 0 };
    cur.magic(IMAGES_MAGIC)?;
    let count = cur.u32()? as usize;
    let rows = cur.u32()? as usize;
    let cols = cur.u32()? as usize;
    let pixels = cur.take(count * rows * cols)?.to_vec();
    Ok((count, rows, cols, pixels))
}

pub fn parse_idx_labels(path: &Path, bytes: &[u8]) -> Result<Vec<u8>, LoadError> {
    let mut cur = Cursor { path, bytes, pos: 0 };
    cur.magic(LABELS_MAGIC)?;
    let count = cur.u32()? as usize;
    Ok(cur.take(count)?.to_vec())
}

pub fn load_mnist_idx(images_path: &Path, labels_path: &Path) -> Result<MnistSet, LoadError> {
    let (count, rows, cols, pixels) = parse_idx_images(images_path, &read(images_path)?)?;
    let labels = parse_idx_labels(labels_path, &read(labels_path)?)?;
    if labels.len() != count {
        return Err(LoadError::CountMismatch {
            images: count,
            labels: labels.len(),
        });
    }
    Ok(MnistSet {
        rows,
        cols,
        pixels,
        labels,
    })
}

/// The standard file names inside an MNIST directory, train then test.
pub fn mnist_paths(dir: &Path) -> [(PathBuf, PathBuf); 2] {
    [
        (dir.join("train-images-idx3-ubyte"), dir.join("train-labels-idx1-ubyte")),
        (dir.join("t10k-images-idx3-ubyte"), dir.join("t10k-labels-idx1-ubyte")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iris_rows() {
        let recs = parse_iris("5.1,3.5,1.4,0.2,Iris-setosa\n\n6.3,3.3,6.0,2.5,Iris-virginica\n").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].features, vec![6.3, 3.3, 6.0, 2.5]);
        assert_eq!(recs[1].label, "Iris-virginica");
        assert!(matches!(parse_iris(""), Err(LoadError::EmptyDataset { .. })));
        assert!(matches!(
            parse_iris("5.1,3.5,1.4,0.2,a\n5.1,3.5,Iris-setosa\n"),
            Err(LoadError::Schema { row: 2, found: 3 })
        ));
        assert!(matches!(
            parse_iris("5.1,x,1.4,0.2,a\n"),
            Err(LoadError::Parse { row: 1, .. })
        ));
    }

    fn idx_images(count: u32, rows: u32, cols: u32, pixels: &[u8]) -> Vec<u8> {
        let mut v = Vec::new();
        for w in [IMAGES_MAGIC, count, rows, cols] {
            v.extend_from_slice(&w.to_be_bytes());
        }
        v.extend_from_slice(pixels);
        v
    }

    #[test]
    fn idx_parsing() {
        let p = Path::new("mem");
        let bytes = idx_images(2, 1, 2, &[0, 255, 128, 127]);
        let (count, rows, cols, pixels) = parse_idx_images(p, &bytes).unwrap();
        assert_eq!((count, rows, cols), (2, 1, 2));
        assert_eq!(pixels, vec![0, 255, 128, 127]);

        let err = parse_idx_images(p, &bytes[..bytes.len() - 1]).unwrap_err();
        assert!(matches!(err, LoadError::Io { ref source, .. } if source.kind() == std::io::ErrorKind::UnexpectedEof));

        let mut labels = LABELS_MAGIC.to_be_bytes().to_vec();
        labels.extend_from_slice(&3u32.to_be_bytes());
        labels.extend_from_slice(&[1, 0, 7]);
        assert_eq!(parse_idx_labels(p, &labels).unwrap(), vec![1, 0, 7]);
        assert!(matches!(
            parse_idx_images(p, &labels),
            Err(LoadError::MagicMismatch { found: 0x801, .. })
        ));
    }

    #[test]
    fn mnist_records_filter_in_order() {
        let set = MnistSet {
            rows: 1,
            cols: 2,
            pixels: vec![1, 2, 3, 4, 5, 6],
            labels: vec![1, 7, 0],
        };
        let recs = set.records(&[0, 1], None);
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].features, vec![1.0, 2.0]);
        assert_eq!(recs[1].label, "0");
        assert_eq!(set.records(&[0, 1], Some(1)).len(), 1);
    }
}
