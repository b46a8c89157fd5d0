//! Turning labelled real-valued records into bit-vector datasets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub features: Vec<f64>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelEncoding {
    /// Class index as a big-endian number of `ceil(log2 n)` bits.
    Binary,
    /// One bit per class.
    OneHot,
}

impl LabelEncoding {
    pub fn width(self, classes: usize) -> usize {
        match self {
            LabelEncoding::OneHot => classes,
            LabelEncoding::Binary => {
                if classes <= 1 {
                    0
                } else {
                    (usize::BITS - (classes - 1).leading_zeros()) as usize
                }
            }
        }
    }

    pub fn encode(self, class: usize, classes: usize) -> BitVec {
        assert!(class < classes, "class {class} out of {classes}");
        match self {
            LabelEncoding::OneHot => BitVec::unit(classes, class),
            LabelEncoding::Binary => BitVec::from_uint(class as u64, self.width(classes)),
        }
    }

    /// The class whose encoding is `bits`, if any.
    pub fn decode(self, bits: &BitVec, classes: usize) -> Option<usize> {
        if bits.width() != self.width(classes) {
            return None;
        }
        match self {
            LabelEncoding::OneHot => {
                let mut ones = bits.iter_ones();
                let class = ones.next()?;
                ones.next().is_none().then_some(class)
            }
            LabelEncoding::Binary => {
                let class = bits.to_uint()? as usize;
                (class < classes).then_some(class)
            }
        }
    }
}

impl fmt::Display for LabelEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelEncoding::Binary => "binary",
            LabelEncoding::OneHot => "one-hot",
        })
    }
}

impl FromStr for LabelEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(LabelEncoding::Binary),
            "one-hot" | "onehot" => Ok(LabelEncoding::OneHot),
            other => Err(Error::InvalidArgument(format!("unknown encoding `{other}`"))),
        }
    }
}

/// Binary examples `(x, y)` with `x` of width `a` and `y` of width `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub a: usize,
    pub b: usize,
    pub examples: Vec<(BitVec, BitVec)>,
    pub encoding: LabelEncoding,
}

impl Dataset {
    pub fn new(a: usize, b: usize, examples: Vec<(BitVec, BitVec)>, encoding: LabelEncoding) -> Result<Self> {
        for (x, y) in &examples {
            x.check_width(a)?;
            y.check_width(b)?;
            if encoding == LabelEncoding::OneHot && y.count_ones() != 1 {
                return Err(Error::InvalidArgument(format!("label {y} is not one-hot")));
            }
        }
        Ok(Dataset {
            a,
            b,
            examples,
            encoding,
        })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Stratified split on the label bits. See [`split_indices`].
    pub fn split(&self, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        let (train, test) = split_indices(self.examples.iter().map(|(_, y)| y), test_fraction, seed)?;
        let subset = |idx: Vec<usize>| Dataset {
            examples: idx.into_iter().map(|i| self.examples[i].clone()).collect(),
            ..*self
        };
        Ok((subset(train), subset(test)))
    }
}

/// Per-feature arithmetic means.
pub fn feature_means(records: &[RawRecord]) -> Result<Vec<f64>> {
    let first = records.first().ok_or(Error::EmptyDataset)?;
    let n = first.features.len();
    let mut sums = alloc::vec![0.0; n];
    for r in records {
        if r.features.len() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: r.features.len(),
            });
        }
        for (s, v) in sums.iter_mut().zip(&r.features) {
            *s += v;
        }
    }
    Ok(sums.into_iter().map(|s| s / records.len() as f64).collect())
}

/// Bit `i` is set iff feature `i` is at least `thresholds[i]`.
pub fn binarize_features(records: &[RawRecord], thresholds: &[f64]) -> Result<Vec<BitVec>> {
    records
        .iter()
        .map(|r| {
            if r.features.len() != thresholds.len() {
                return Err(Error::WidthMismatch {
                    expected: thresholds.len(),
                    found: r.features.len(),
                });
            }
            Ok(r.features.iter().zip(thresholds).map(|(v, t)| v >= t).collect())
        })
        .collect()
}

/// Pixel intensities in `[0, 255]` rounded to a bit: set iff `pixel >= 128`.
pub fn binarize_pixels(records: &[RawRecord]) -> Result<Vec<BitVec>> {
    records
        .iter()
        .map(|r| {
            r.features
                .iter()
                .map(|&v| {
                    if (0.0..=255.0).contains(&v) {
                        Ok(v / 255.0 >= 0.5)
                    } else {
                        Err(Error::Range {
                            value: v,
                            min: 0.0,
                            max: 255.0,
                        })
                    }
                })
                .collect()
        })
        .collect()
}

pub fn encode_labels(records: &[RawRecord], encoding: LabelEncoding, class_order: &[&str]) -> Result<Vec<BitVec>> {
    records
        .iter()
        .map(|r| {
            let class = class_order
                .iter()
                .position(|c| *c == r.label)
                .ok_or_else(|| Error::UnknownLabel(r.label.clone()))?;
            Ok(encoding.encode(class, class_order.len()))
        })
        .collect()
}

pub fn filter_classes(records: &[RawRecord], keep: &[&str]) -> Vec<RawRecord> {
    records
        .iter()
        .filter(|r| keep.contains(&r.label.as_str()))
        .cloned()
        .collect()
}

/// Stratified train/test split of raw records on their labels.
pub fn split_records(records: &[RawRecord], test_fraction: f64, seed: u64) -> Result<(Vec<RawRecord>, Vec<RawRecord>)> {
    let (train, test) = split_indices(records.iter().map(|r| &r.label), test_fraction, seed)?;
    let pick = |idx: Vec<usize>| idx.into_iter().map(|i| records[i].clone()).collect();
    Ok((pick(train), pick(test)))
}

/// Stratified split of `0..n` by class key. Each class contributes
/// `round(test_fraction * class_size)` members, chosen by a seeded shuffle,
/// to the test side. Both sides keep the original order.
pub fn split_indices<K: Ord>(
    keys: impl IntoIterator<Item = K>,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Range {
            value: test_fraction,
            min: 0.0,
            max: 1.0,
        });
    }
    let mut classes: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    let mut n = 0;
    for (i, k) in keys.into_iter().enumerate() {
        classes.entry(k).or_default().push(i);
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut is_test = alloc::vec![false; n];
    for members in classes.values_mut() {
        let take = round_half_up(test_fraction * members.len() as f64);
        members.shuffle(&mut rng);
        for &i in &members[..take.min(members.len())] {
            is_test[i] = true;
        }
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| is_test[i]);
    Ok((train, test))
}

// f64::round is not available without std.
fn round_half_up(v: f64) -> usize {
    (v + 0.5) as usize
}

/// Builds a dataset from already binarized inputs and raw labels.
pub fn assemble(
    inputs: Vec<BitVec>,
    records: &[RawRecord],
    encoding: LabelEncoding,
    class_order: &[&str],
) -> Result<Dataset> {
    if inputs.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let labels = encode_labels(records, encoding, class_order)?;
    let a = inputs[0].width();
    let b = encoding.width(class_order.len());
    Dataset::new(a, b, inputs.into_iter().zip(labels).collect(), encoding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn rec(features: &[f64], label: &str) -> RawRecord {
        RawRecord {
            features: features.to_vec(),
            label: label.into(),
        }
    }

    #[test]
    fn encodings() {
        use LabelEncoding::*;
        assert_eq!(OneHot.encode(2, 3), BitVec::from_bits(&[0, 0, 1]));
        assert_eq!(Binary.encode(2, 3), BitVec::from_bits(&[1, 0]));
        assert_eq!(Binary.width(2), 1);
        assert_eq!(Binary.width(3), 2);
        assert_eq!(Binary.width(4), 2);
        assert_eq!(Binary.width(5), 3);
        for enc in [OneHot, Binary] {
            for n in 1..9 {
                for c in 0..n {
                    assert_eq!(enc.decode(&enc.encode(c, n), n), Some(c));
                }
            }
        }
        assert_eq!(OneHot.decode(&BitVec::from_bits(&[1, 1, 0]), 3), None);
        assert_eq!(Binary.decode(&BitVec::from_bits(&[1, 1]), 3), None);
        assert_eq!("one-hot".parse::<LabelEncoding>(), Ok(OneHot));
        assert_eq!(OneHot.to_string(), "one-hot");
    }

    #[test]
    fn thresholding() {
        let records = [rec(&[1.0, 2.0], "a"), rec(&[0.0, 5.0], "b")];
        assert_eq!(feature_means(&records).unwrap(), vec![0.5, 3.5]);
        let bits = binarize_features(&records, &[1.0, 3.5]).unwrap();
        assert_eq!(bits, vec![BitVec::from_bits(&[1, 0]), BitVec::from_bits(&[0, 1])]);
        assert_eq!(
            binarize_features(&records, &[0.0]),
            Err(Error::WidthMismatch { expected: 1, found: 2 })
        );
        assert_eq!(feature_means(&[]), Err(Error::EmptyDataset));
    }

    #[test]
    fn pixels() {
        let px = binarize_pixels(&[rec(&[0.0, 127.0, 128.0, 255.0], "0")]).unwrap();
        assert_eq!(px[0], BitVec::from_bits(&[0, 0, 1, 1]));
        assert!(matches!(
            binarize_pixels(&[rec(&[256.0], "0")]),
            Err(Error::Range { .. })
        ));
        // rescaled bits round-trip
        let again = binarize_pixels(&[rec(&[0.0, 0.0, 255.0, 255.0], "0")]).unwrap();
        assert_eq!(again, px);
    }

    #[test]
    fn labels_and_filters() {
        let records = [rec(&[], "x"), rec(&[], "y"), rec(&[], "z"), rec(&[], "x")];
        assert_eq!(filter_classes(&records, &["x"]).len(), 2);
        assert_eq!(filter_classes(&records, &["x", "y", "z"]), records.to_vec());
        assert!(filter_classes(&records, &["w"]).is_empty());
        let enc = encode_labels(&records, LabelEncoding::OneHot, &["x", "y", "z"]).unwrap();
        assert_eq!(enc[2], BitVec::from_bits(&[0, 0, 1]));
        assert_eq!(
            encode_labels(&records, LabelEncoding::OneHot, &["x", "y"]),
            Err(Error::UnknownLabel("z".into()))
        );
    }

    #[test]
    fn stratified_split() {
        let labels: Vec<u8> = (0..150).map(|i| (i / 50) as u8).collect();
        let (train, test) = split_indices(labels.iter(), 0.2, 9).unwrap();
        assert_eq!((train.len(), test.len()), (120, 30));
        for c in 0..3u8 {
            assert_eq!(test.iter().filter(|&&i| labels[i] == c).count(), 10);
        }
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..150).collect::<Vec<_>>());
        assert_eq!(split_indices(labels.iter(), 0.2, 9).unwrap(), (train, test));
        assert_ne!(
            split_indices(labels.iter(), 0.2, 10).unwrap().1,
            split_indices(labels.iter(), 0.2, 9).unwrap().1
        );
        assert!(split_indices(labels.iter(), 0.0, 9).is_err());
        assert!(split_indices(labels.iter(), 1.0, 9).is_err());
        assert_eq!(split_indices(Vec::<u8>::new(), 0.5, 9), Err(Error::EmptyDataset));
    }

    #[test]
    fn dataset_split_keeps_widths() {
        let examples = (0..10u64)
            .map(|i| {
                (
                    BitVec::from_uint(i, 4),
                    LabelEncoding::Binary.encode((i % 2) as usize, 2),
                )
            })
            .collect();
        let ds = Dataset::new(4, 1, examples, LabelEncoding::Binary).unwrap();
        let (train, test) = ds.split(0.2, 1).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
        assert_eq!((test.a, test.b), (4, 1));
    }
}
