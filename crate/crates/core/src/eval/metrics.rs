use serde::Serialize;

use crate::{Error, Result};

/// Gold-by-predicted counts over a fixed, ordered class list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix<L> {
    pub classes: Vec<L>,
    /// `counts[gold][predicted]`
    pub counts: Vec<Vec<usize>>,
}

impl<L: PartialEq> ConfusionMatrix<L> {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn index_of(&self, class: &L) -> Option<usize> {
        self.classes.iter().position(|c| c == class)
    }

    pub fn get(&self, gold: &L, predicted: &L) -> usize {
        match (self.index_of(gold), self.index_of(predicted)) {
            (Some(g), Some(p)) => self.counts[g][p],
            _ => 0,
        }
    }

    pub fn accuracy(&self) -> f64 {
        let correct: usize = (0..self.classes.len()).map(|i| self.counts[i][i]).sum();
        ratio(correct, self.total())
    }
}

pub fn confusion<L: PartialEq + Clone + std::fmt::Debug>(
    gold: &[L],
    pred: &[L],
    classes: &[L],
) -> Result<ConfusionMatrix<L>> {
    if gold.len() != pred.len() {
        return Err(Error::invalid(format!(
            "{} gold labels but {} predictions",
            gold.len(),
            pred.len()
        )));
    }
    let k = classes.len();
    let mut counts = vec![vec![0; k]; k];
    let index = |l: &L| {
        classes
            .iter()
            .position(|c| c == l)
            .ok_or_else(|| Error::invalid(format!("label {l:?} is not one of {classes:?}")))
    };
    for (g, p) in gold.iter().zip(pred) {
        counts[index(g)?][index(p)?] += 1;
    }
    Ok(ConfusionMatrix {
        classes: classes.to_vec(),
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassScore<L> {
    pub class: L,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold instances of the class.
    pub support: usize,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics<L> {
    pub per_class: Vec<ClassScore<L>>,
}

impl<L: PartialEq> ClassMetrics<L> {
    pub fn get(&self, class: &L) -> Option<&ClassScore<L>> {
        self.per_class.iter().find(|s| &s.class == class)
    }

    /// Pooled recall over all classes; equals accuracy for single-label data.
    pub fn micro_recall(&self) -> f64 {
        let tp: usize = self.per_class.iter().map(|s| s.true_positives).sum();
        let support: usize = self.per_class.iter().map(|s| s.support).sum();
        ratio(tp, support)
    }

    pub fn macro_f1(&self) -> f64 {
        if self.per_class.is_empty() {
            return 0.0;
        }
        self.per_class.iter().map(|s| s.f1).sum::<f64>() / self.per_class.len() as f64
    }
}

pub(crate) fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// One-vs-rest precision, recall and F1 per class; 0/0 is 0.
pub fn prf_per_class<L: Clone>(cm: &ConfusionMatrix<L>) -> ClassMetrics<L> {
    let k = cm.classes.len();
    let per_class = (0..k)
        .map(|c| {
            let tp = cm.counts[c][c];
            let support: usize = cm.counts[c].iter().sum();
            let predicted: usize = (0..k).map(|g| cm.counts[g][c]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            ClassScore {
                class: cm.classes[c].clone(),
                precision,
                recall,
                f1: f1_score(precision, recall),
                support,
                true_positives: tp,
                false_positives: predicted - tp,
                false_negatives: support - tp,
            }
        })
        .collect();
    ClassMetrics { per_class }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn counts_cells() {
        let cm = confusion(&["c", "c", "n"], &["c", "n", "n"], &["c", "n"]).unwrap();
        assert_eq!(cm.get(&"c", &"c"), 1);
        assert_eq!(cm.get(&"c", &"n"), 1);
        assert_eq!(cm.get(&"n", &"n"), 1);
        assert_eq!(cm.get(&"n", &"c"), 0);
        assert_eq!(cm.total(), 3);
    }

    #[test]
    fn identity_is_diagonal_and_empty_is_zero() {
        let g = [0, 1, 2, 2, 1];
        let cm = confusion(&g, &g, &[0, 1, 2]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(cm.counts[i][j] > 0, i == j);
            }
        }
        let m = prf_per_class(&cm);
        assert!(m
            .per_class
            .iter()
            .all(|s| s.precision == 1.0 && s.recall == 1.0 && s.f1 == 1.0));
        let empty = confusion::<u8>(&[], &[], &[0, 1]).unwrap();
        assert_eq!(empty.counts, vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn errors() {
        assert!(confusion(&[1], &[1, 2], &[1, 2]).is_err());
        assert!(confusion(&[3], &[1], &[1, 2]).is_err());
    }

    #[test]
    fn hand_formula() {
        // class 0: TP 3, FP 1, FN 2
        let gold = [0, 0, 0, 0, 0, 1, 1];
        let pred = [0, 0, 0, 1, 1, 0, 1];
        let m = prf_per_class(&confusion(&gold, &pred, &[0, 1]).unwrap());
        let s = m.get(&0).unwrap();
        assert_eq!(
            (s.true_positives, s.false_positives, s.false_negatives),
            (3, 1, 2)
        );
        assert_relative_eq!(s.precision, 0.75);
        assert_relative_eq!(s.recall, 0.6);
        assert_relative_eq!(s.f1, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn absent_class_is_all_zero() {
        let m = prf_per_class(&confusion(&[0, 0], &[0, 0], &[0, 1]).unwrap());
        let s = m.get(&1).unwrap();
        assert_eq!((s.precision, s.recall, s.f1, s.support), (0.0, 0.0, 0.0, 0));
    }

    proptest! {
        #[test]
        fn micro_recall_is_accuracy(pairs in prop::collection::vec((0usize..3, 0usize..3), 0..50)) {
            let (g, p): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            let cm = confusion(&g, &p, &[0, 1, 2]).unwrap();
            let m = prf_per_class(&cm);
            prop_assert!((m.micro_recall() - cm.accuracy()).abs() < 1e-12);
            for s in &m.per_class {
                prop_assert!((0.0..=1.0).contains(&s.f1));
            }
        }
    }
}
