//! Decision table for the cross-dimensional verdict, written out case by
//! case over counts rather than as a procedure.

use trustcat::assessment::document::ResidualClass;
use trustcat::catalog::ProtectionLevel;
use trustcat::verdict::Outcome;

/// `covered`: every non-negligible acceptable dimension has a trade-off.
pub fn expected(
    dims: &[(ProtectionLevel, ResidualClass)],
    covered: bool,
    signoff: bool,
) -> Outcome {
    let examined = dims.iter().filter(|(l, _)| *l != ProtectionLevel::Low);
    let (mut acc, mut unacc) = (0, 0);
    for (_, c) in examined {
        match c {
            ResidualClass::Negligible => {}
            ResidualClass::NonNegligibleAcceptable => acc += 1,
            ResidualClass::Unacceptable => unacc += 1,
        }
    }
    match (unacc, acc, covered, signoff) {
        (u, _, _, _) if u > 0 => Outcome::NotTrustworthy,
        (0, 0, _, _) => Outcome::Trustworthy,
        (0, _, true, true) => Outcome::TrustworthyWithResiduals,
        (0, _, _, _) => Outcome::NotTrustworthy,
        _ => unreachable!(),
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trustcat::assessment::document::TradeoffRecord;
use trustcat::id::Dimension;
use trustcat::verdict::{decide, DimensionInput};

pub const CLASSES: [ResidualClass; 3] = [
    ResidualClass::Negligible,
    ResidualClass::NonNegligibleAcceptable,
    ResidualClass::Unacceptable,
];

/// The `index`-th of the 729 class assignments, in base 3.
pub fn assignment(mut index: usize) -> [ResidualClass; 6] {
    let mut out = [ResidualClass::Negligible; 6];
    for slot in &mut out {
        *slot = CLASSES[index % 3];
        index /= 3;
    }
    out
}

pub fn inputs(levels: &[ProtectionLevel; 6], classes: &[ResidualClass; 6]) -> Vec<DimensionInput> {
    Dimension::ASSESSED
        .iter()
        .zip(levels.iter().zip(classes))
        .map(|(d, (l, c))| DimensionInput {
            dimension: *d,
            level: *l,
            class: Some(*c),
        })
        .collect()
}

/// One trade-off per selected dimension, paired with its neighbour.
pub fn tradeoffs_for(selected: &[Dimension]) -> Vec<TradeoffRecord> {
    selected
        .iter()
        .map(|d| {
            let i = Dimension::ASSESSED.iter().position(|x| x == d).unwrap();
            let other = Dimension::ASSESSED[(i + 1) % 6];
            TradeoffRecord {
                dimension_a: *d,
                dimension_b: other,
                prioritized: other,
                justification: format!("{d} yields to {other}"),
            }
        })
        .collect()
}

pub fn residual_dims(
    levels: &[ProtectionLevel; 6],
    classes: &[ResidualClass; 6],
) -> Vec<Dimension> {
    (0..6)
        .filter(|i| {
            levels[*i] != ProtectionLevel::Low
                && classes[*i] == ResidualClass::NonNegligibleAcceptable
        })
        .map(|i| Dimension::ASSESSED[i])
        .collect()
}

/// All 729 assignments with and without full trade-off coverage and
/// signoff. Returns the number of cases.
pub fn truth_table() -> Result<usize, String> {
    let levels = [ProtectionLevel::High; 6];
    let mut cases = 0;
    for index in 0..729 {
        let classes = assignment(index);
        let pairs: Vec<_> = levels.iter().copied().zip(classes).collect();
        let residual = residual_dims(&levels, &classes);
        for covered in [false, true] {
            let tradeoffs = if covered {
                tradeoffs_for(&residual)
            } else {
                Vec::new()
            };
            for signoff in [false, true] {
                let got = decide(&inputs(&levels, &classes), &tradeoffs, signoff);
                let want = expected(&pairs, covered || residual.is_empty(), signoff);
                if got.outcome != want {
                    return Err(format!(
                        "{classes:?} covered={covered} signoff={signoff}: engine {:?}, oracle {want:?}",
                        got.outcome
                    ));
                }
                let accepted = if want == Outcome::TrustworthyWithResiduals {
                    residual.len()
                } else {
                    0
                };
                if got.accepted_residuals.len() != accepted {
                    return Err(format!(
                        "{classes:?}: accepted residuals {:?}",
                        got.accepted_residuals
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// Negligible to unacceptable in one dimension never improves the outcome.
pub fn monotonicity() -> Result<usize, String> {
    let levels = [ProtectionLevel::High; 6];
    let mut checks = 0;
    for index in 0..729 {
        let classes = assignment(index);
        for covered in [false, true] {
            for signoff in [false, true] {
                let t = if covered {
                    tradeoffs_for(&Dimension::ASSESSED)
                } else {
                    Vec::new()
                };
                let before = decide(&inputs(&levels, &classes), &t, signoff).outcome;
                for i in (0..6).filter(|i| classes[*i] == ResidualClass::Negligible) {
                    let mut worse = classes;
                    worse[i] = ResidualClass::Unacceptable;
                    let after = decide(&inputs(&levels, &worse), &t, signoff).outcome;
                    if after.compare(before) == Some(std::cmp::Ordering::Greater)
                        || after.rank().is_none()
                    {
                        return Err(format!(
                            "{classes:?} -> {worse:?}: {before:?} became {after:?}"
                        ));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

/// Classes of low dimensions never change the outcome.
pub fn low_irrelevance(seed: u64, rounds: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for _ in 0..rounds {
        let levels: [ProtectionLevel; 6] = std::array::from_fn(|i| {
            if i != 3 && rng.gen_bool(0.4) {
                ProtectionLevel::Low
            } else if rng.gen_bool(0.5) {
                ProtectionLevel::Medium
            } else {
                ProtectionLevel::High
            }
        });
        let classes = assignment(rng.gen_range(0..729));
        let t = tradeoffs_for(&residual_dims(&levels, &classes));
        let signoff = rng.gen_bool(0.5);
        let base = decide(&inputs(&levels, &classes), &t, signoff).outcome;
        for i in (0..6).filter(|i| levels[*i] == ProtectionLevel::Low) {
            for c in CLASSES {
                let mut toggled = classes;
                toggled[i] = c;
                let got = decide(&inputs(&levels, &toggled), &t, signoff).outcome;
                if got != base {
                    return Err(format!(
                        "{levels:?} {classes:?}: toggling slot {i} gave {got:?}"
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}
