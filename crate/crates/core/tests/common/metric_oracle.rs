//! Brute-force reference implementations of every metric. They work from
//! raw record predicates and pair enumeration and share no code with the
//! engine. `None` means the metric is undefined on the input.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use trustcat::metrics::{ClassificationRecord, RegressionRecord};

pub fn random_classification(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<ClassificationRecord> {
    let n = rng.gen_range(1..=max_len);
    let groups = ["a", "b", "c"];
    let group_count = rng.gen_range(1..=3);
    let coarse = rng.gen_bool(0.5);
    (0..n)
        .map(|i| {
            let score = if coarse {
                rng.gen_range(0..=10) as f64 / 10.0
            } else {
                rng.gen::<f64>()
            };
            let mut r = ClassificationRecord::new(
                groups[rng.gen_range(0..group_count)],
                rng.gen_bool(0.5),
                rng.gen_bool(0.5),
                Some(score),
            );
            r.row = i + 2;
            r
        })
        .collect()
}

pub fn random_regression(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<RegressionRecord> {
    let n = rng.gen_range(1..=max_len);
    (0..n)
        .map(|i| RegressionRecord {
            y_true: rng.gen_range(-50.0..50.0),
            y_pred: rng.gen_range(-50.0..50.0),
            row: i + 2,
        })
        .collect()
}

fn count(d: &[&ClassificationRecord], f: impl Fn(&ClassificationRecord) -> bool) -> usize {
    d.iter().filter(|r| f(r)).count()
}

fn frac(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn all(d: &[ClassificationRecord]) -> Vec<&ClassificationRecord> {
    d.iter().collect()
}

fn group<'a>(d: &'a [ClassificationRecord], g: &str) -> Vec<&'a ClassificationRecord> {
    d.iter().filter(|r| r.group == g).collect()
}

fn tpr(d: &[&ClassificationRecord]) -> Option<f64> {
    frac(count(d, |r| r.y_true && r.y_pred), count(d, |r| r.y_true))
}

fn fpr(d: &[&ClassificationRecord]) -> Option<f64> {
    frac(count(d, |r| !r.y_true && r.y_pred), count(d, |r| !r.y_true))
}

fn tnr(d: &[&ClassificationRecord]) -> Option<f64> {
    frac(
        count(d, |r| !r.y_true && !r.y_pred),
        count(d, |r| !r.y_true),
    )
}

fn ppv(d: &[&ClassificationRecord]) -> Option<f64> {
    frac(count(d, |r| r.y_true && r.y_pred), count(d, |r| r.y_pred))
}

fn npv(d: &[&ClassificationRecord]) -> Option<f64> {
    frac(
        count(d, |r| !r.y_true && !r.y_pred),
        count(d, |r| !r.y_pred),
    )
}

fn acc(d: &[&ClassificationRecord]) -> Option<f64> {
    frac(count(d, |r| r.y_true == r.y_pred), d.len())
}

pub fn performance(name: &str, d: &[ClassificationRecord]) -> Option<f64> {
    let d = all(d);
    match name {
        "accuracy" => acc(&d),
        "precision" => ppv(&d),
        "recall" | "sensitivity" => tpr(&d),
        "specificity" => tnr(&d),
        "balanced_accuracy" => Some((tpr(&d)? + tnr(&d)?) / 2.0),
        "f1" => {
            let (p, r) = (ppv(&d)?, tpr(&d)?);
            Some(if p + r == 0.0 {
                0.0
            } else {
                2.0 * p * r / (p + r)
            })
        }
        "auc" => {
            let pos: Vec<f64> = d
                .iter()
                .filter(|r| r.y_true)
                .map(|r| r.score.unwrap())
                .collect();
            let neg: Vec<f64> = d
                .iter()
                .filter(|r| !r.y_true)
                .map(|r| r.score.unwrap())
                .collect();
            if pos.is_empty() || neg.is_empty() {
                return None;
            }
            let mut wins = 0.0;
            for p in &pos {
                for n in &neg {
                    wins += if p > n {
                        1.0
                    } else if p == n {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
            Some(wins / (pos.len() * neg.len()) as f64)
        }
        other => panic!("no oracle for {other}"),
    }
}

pub fn regression(name: &str, d: &[RegressionRecord]) -> f64 {
    let n = d.len() as f64;
    match name {
        "mse" => {
            d.iter()
                .map(|r| (r.y_true - r.y_pred) * (r.y_true - r.y_pred))
                .sum::<f64>()
                / n
        }
        "mae" => d.iter().map(|r| (r.y_true - r.y_pred).abs()).sum::<f64>() / n,
        other => panic!("no oracle for {other}"),
    }
}

pub fn fairness(name: &str, d: &[ClassificationRecord], a: &str, b: &str) -> Option<f64> {
    let (ga, gb) = (group(d, a), group(d, b));
    if ga.is_empty() || gb.is_empty() {
        return None;
    }
    let diff = |f: fn(&[&ClassificationRecord]) -> Option<f64>| Some((f(&ga)? - f(&gb)?).abs());
    match name {
        "statistical_parity_difference" => diff(|g| frac(count(g, |r| r.y_pred), g.len())),
        "equal_opportunity_difference" => diff(tpr),
        "predictive_equality_difference" => diff(fpr),
        "equalized_odds" => Some(diff(tpr)?.max(diff(fpr)?)),
        "predictive_parity_difference" => diff(ppv),
        "conditional_use_accuracy_difference" => Some(diff(ppv)?.max(diff(npv)?)),
        "overall_accuracy_difference" => diff(acc),
        "treatment_equality_difference" => diff(|g| {
            frac(
                count(g, |r| r.y_true && !r.y_pred),
                count(g, |r| !r.y_true && r.y_pred),
            )
        }),
        other => panic!("no oracle for {other}"),
    }
}

pub fn calibration(name: &str, d: &[ClassificationRecord], bins: usize) -> f64 {
    let n = d.len() as f64;
    let y = |r: &ClassificationRecord| if r.y_true { 1.0 } else { 0.0 };
    match name {
        "brier" => {
            d.iter()
                .map(|r| (r.score.unwrap() - y(r)).powi(2))
                .sum::<f64>()
                / n
        }
        "nll" => {
            let eps = 1e-12;
            d.iter()
                .map(|r| {
                    let s = r.score.unwrap().max(eps).min(1.0 - eps);
                    if r.y_true {
                        -s.ln()
                    } else {
                        -(1.0 - s).ln()
                    }
                })
                .sum::<f64>()
                / n
        }
        "ece" => {
            let b = bins as f64;
            let mut total = 0.0;
            for k in 0..bins {
                let lo = k as f64 / b;
                let hi = (k + 1) as f64 / b;
                let last = k + 1 == bins;
                let members: Vec<&ClassificationRecord> = d
                    .iter()
                    .filter(|r| {
                        let s = r.score.unwrap();
                        s >= lo && (s < hi || (last && s <= hi))
                    })
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let m = members.len() as f64;
                let conf = members.iter().map(|r| r.score.unwrap()).sum::<f64>() / m;
                let rate = members.iter().map(|r| y(r)).sum::<f64>() / m;
                total += m / n * (conf - rate).abs();
            }
            total
        }
        other => panic!("no oracle for {other}"),
    }
}

const TOLERANCE: f64 = 1e-12;

fn agree(
    label: &str,
    engine: Result<trustcat::metrics::MetricResult, trustcat::metrics::MetricError>,
    oracle: Option<f64>,
) -> Result<(), String> {
    use trustcat::metrics::MetricError;
    match (engine, oracle) {
        (Ok(r), Some(v)) if (r.value - v).abs() <= TOLERANCE => Ok(()),
        (Err(MetricError::UndefinedMetric { .. }), None) => Ok(()),
        (e, o) => Err(format!("{label}: engine {e:?}, oracle {o:?}")),
    }
}

/// Compare every computable metric with its oracle on `datasets` random
/// classification and regression datasets of at most `max_len` records.
/// Returns the number of comparisons made.
pub fn sweep(seed: u64, datasets: usize, max_len: usize) -> Result<usize, String> {
    use rand::SeedableRng;
    use trustcat::metrics::{self, Metric, Schema};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for i in 0..datasets {
        let d = random_classification(&mut rng, max_len);
        let reg = random_regression(&mut rng, max_len);
        let bins = rng.gen_range(1..=12);
        for m in Metric::all() {
            let name = m.name();
            let label = format!("dataset {i}, {name}");
            match m {
                Metric::Performance(_) if m.schema() == Schema::Regression => {
                    let r = metrics::performance::regression_metric(
                        match m {
                            Metric::Performance(p) => p,
                            _ => unreachable!(),
                        },
                        &reg,
                    );
                    agree(&label, r, Some(regression(name, &reg)))?;
                }
                Metric::Performance(p) => {
                    agree(
                        &label,
                        metrics::performance::classification_metric(p, &d),
                        performance(name, &d),
                    )?;
                }
                Metric::Fairness(_) => {
                    for (a, b) in [("a", "b"), ("b", "a"), ("a", "c"), ("b", "c")] {
                        let oracle = fairness(name, &d, a, b);
                        match metrics::fairness_metric(name, &d, a, b) {
                            Err(metrics::MetricError::EmptySlice(_))
                                if !d.iter().any(|r| r.group == a)
                                    || !d.iter().any(|r| r.group == b) => {}
                            r => agree(&format!("{label} ({a},{b})"), r, oracle)?,
                        }
                        checks += 1;
                    }
                    continue;
                }
                Metric::Calibration(_) => {
                    let r =
                        metrics::calibration_metric(name, &d, metrics::CalibrationParams { bins });
                    agree(&label, r, Some(calibration(name, &d, bins)))?;
                }
            }
            checks += 1;
        }
    }
    Ok(checks)
}
