use serde::{Deserialize, Serialize};

use super::dataset::ClassificationRecord;
use super::MetricError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn tally<'a>(records: impl IntoIterator<Item = &'a ClassificationRecord>) -> Self {
        let mut c = ConfusionCounts::default();
        for r in records {
            match (r.y_true, r.y_pred) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (false, false) => c.tn += 1,
                (true, false) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.tn + self.fp
    }

    pub fn predicted_positive(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn predicted_negative(&self) -> u64 {
        self.tn + self.fn_
    }
}

/// Exact confusion counts over the whole dataset or over one group.
pub fn confusion_counts(
    data: &[ClassificationRecord],
    group: Option<&str>,
) -> Result<ConfusionCounts, MetricError> {
    let slice: Vec<&ClassificationRecord> = match group {
        Some(g) => data.iter().filter(|r| r.group == g).collect(),
        None => data.iter().collect(),
    };
    if slice.is_empty() {
        return Err(MetricError::EmptySlice(
            group.map_or_else(|| "<all records>".to_owned(), str::to_owned),
        ));
    }
    Ok(ConfusionCounts::tally(slice))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(y: bool, p: bool) -> ClassificationRecord {
        ClassificationRecord::new("a", y, p, None)
    }

    #[test]
    fn one_of_each() {
        let data = [
            rec(true, true),
            rec(false, true),
            rec(false, false),
            rec(true, false),
        ];
        let c = confusion_counts(&data, None).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                tp: 1,
                fp: 1,
                tn: 1,
                fn_: 1
            }
        );
        assert_eq!(c.total(), 4);
    }

    #[test]
    fn all_correct_has_no_errors() {
        let data = [rec(true, true), rec(false, false), rec(true, true)];
        let c = confusion_counts(&data, None).unwrap();
        assert_eq!((c.fp, c.fn_), (0, 0));
    }

    #[test]
    fn empty_group_is_an_error() {
        let data = [rec(true, true)];
        assert_eq!(
            confusion_counts(&data, Some("b")),
            Err(MetricError::EmptySlice("b".into()))
        );
        assert!(confusion_counts(&[], None).is_err());
    }
}
