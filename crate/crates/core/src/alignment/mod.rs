//! Maximum alignment between two sets of transitions (or state pairs).
//!
//! Elements are flattened into token lists; the weight of aligning two
//! elements is the number of positions at which they agree, and the
//! similarity of two sets is the weight of a maximum one-to-one alignment.

pub mod hungarian;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::lts::{FlatList, Flatten, LtsError, PairSet, Set, Token, TransitionSet, VarOrder};

pub use hungarian::max_weight_assignment;

/// Default size above which both unmatched remainders are refused.
pub const DEFAULT_THRESHOLD: usize = 5_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlignError {
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(
        "alignment too large: {left} x {right} unmatched elements (threshold {threshold}); \
         raise --similarity-threshold to attempt it"
    )]
    TooLarge {
        left: usize,
        right: usize,
        threshold: usize,
    },
}

/// Number of positions at which `a` and `b` agree.
pub fn agreement(a: &FlatList, b: &FlatList) -> Result<u32, AlignError> {
    if a.len() != b.len() {
        return Err(LtsError::LengthMismatch(a.len(), b.len()).into());
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x == y).count() as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match<T> {
    pub left: T,
    pub right: T,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentOutcome<T> {
    pub total_agreement: u64,
    /// Positive-weight alignments, identical elements first, each group in
    /// canonical order of the left element.
    pub matching: Vec<Match<T>>,
}

/// Flattened elements with every token replaced by a per-position id, so
/// agreement is a comparison of small integers.
struct Interned {
    width: usize,
    ids: Vec<u32>,
}

impl Interned {
    fn build<T: Flatten>(left: &[T], right: &[T], vars: &VarOrder) -> Result<(Self, Self), AlignError> {
        let mut tables: Vec<FxHashMap<Token, u32>> = Vec::new();
        let mut width = None;
        let mut encode = |items: &[T]| -> Result<Vec<u32>, AlignError> {
            let mut ids = Vec::new();
            for item in items {
                let flat = item.flatten(vars)?;
                match width {
                    None => {
                        width = Some(flat.len());
                        tables.resize_with(flat.len(), FxHashMap::default);
                    }
                    Some(w) if w != flat.len() => {
                        return Err(LtsError::LengthMismatch(w, flat.len()).into())
                    }
                    Some(_) => {}
                }
                for (pos, tok) in flat.0.into_iter().enumerate() {
                    let table = &mut tables[pos];
                    let next = table.len() as u32;
                    ids.push(*table.entry(tok).or_insert(next));
                }
            }
            Ok(ids)
        };
        let l = encode(left)?;
        let r = encode(right)?;
        let width = width.unwrap_or(0);
        Ok((Interned { width, ids: l }, Interned { width, ids: r }))
    }

    fn row(&self, i: usize) -> &[u32] {
        &self.ids[i * self.width..(i + 1) * self.width]
    }
}

/// Maximum alignment of `t1` against `t2`.
///
/// Identical elements are aligned with each other first. This never loses
/// optimality: for lists of length `L`, agreement satisfies
/// `agr(x, a) + agr(a, y) <= L + agr(x, y)`, so exchanging any alignment of
/// `a` for the identity alignment cannot lower the total. The remainders are
/// then solved exactly with the Hungarian method.
pub fn similarity<T: Flatten>(
    t1: &Set<T>,
    t2: &Set<T>,
    vars: &VarOrder,
    threshold: usize,
) -> Result<AlignmentOutcome<T>, AlignError> {
    align(t1, t2, vars, threshold, true)
}

/// The similarity value alone, without materialising the matching.
pub fn similarity_total<T: Flatten>(
    t1: &Set<T>,
    t2: &Set<T>,
    vars: &VarOrder,
    threshold: usize,
) -> Result<u64, AlignError> {
    Ok(align(t1, t2, vars, threshold, false)?.total_agreement)
}

fn align<T: Flatten>(
    t1: &Set<T>,
    t2: &Set<T>,
    vars: &VarOrder,
    threshold: usize,
    keep_matching: bool,
) -> Result<AlignmentOutcome<T>, AlignError> {
    let mut rest1: Vec<T> = t1.iter().filter(|x| !t2.contains(x)).cloned().collect();
    let mut rest2: Vec<T> = t2.iter().filter(|x| !t1.contains(x)).cloned().collect();
    if rest1.len() > threshold && rest2.len() > threshold {
        return Err(AlignError::TooLarge {
            left: rest1.len(),
            right: rest2.len(),
            threshold,
        });
    }
    rest1.sort_unstable();
    rest2.sort_unstable();

    let mut common = t1.iter().filter(|x| t2.contains(x)).peekable();
    let width = match common.peek().copied().or(rest1.first()).or(rest2.first()) {
        Some(x) => x.flat_len(vars)?,
        None => 0,
    };
    let mut n_common = 0u64;
    let mut matching: Vec<Match<T>> = Vec::new();
    for x in common {
        let n = x.flat_len(vars)?;
        if n != width {
            return Err(LtsError::LengthMismatch(width, n).into());
        }
        n_common += 1;
        if keep_matching {
            matching.push(Match {
                left: x.clone(),
                right: x.clone(),
                weight: width as u32,
            });
        }
    }
    matching.sort_by(|x, y| x.left.cmp(&y.left));
    let mut total = n_common * width as u64;
    if rest1.is_empty() || rest2.is_empty() {
        for x in rest1.iter().chain(&rest2) {
            let n = x.flat_len(vars)?;
            if n != width {
                return Err(LtsError::LengthMismatch(width, n).into());
            }
        }
        return Ok(AlignmentOutcome {
            total_agreement: total,
            matching,
        });
    }

    let (a, b) = Interned::build(&rest1, &rest2, vars)?;
    if a.width != 0 && b.width != 0 && a.width != width {
        return Err(LtsError::LengthMismatch(width, a.width).into());
    }
    let agree = |x: &[u32], y: &[u32]| x.iter().zip(y).filter(|(p, q)| p == q).count() as u32;
    let swapped = rest1.len() > rest2.len();
    let (rows, cols) = if swapped {
        (rest2.len(), rest1.len())
    } else {
        (rest1.len(), rest2.len())
    };
    let weight = |i: usize, j: usize| {
        if swapped {
            agree(b.row(i), a.row(j))
        } else {
            agree(a.row(i), b.row(j))
        }
    };
    let (sub_total, assignment) = max_weight_assignment(rows, cols, width as u32, weight);
    total += sub_total;
    if !keep_matching {
        return Ok(AlignmentOutcome {
            total_agreement: total,
            matching,
        });
    }
    let mut extra: Vec<Match<T>> = assignment
        .into_iter()
        .enumerate()
        .filter_map(|(i, j)| {
            let w = weight(i, j);
            if w == 0 {
                return None;
            }
            let (l, r) = if swapped { (j, i) } else { (i, j) };
            Some(Match {
                left: rest1[l].clone(),
                right: rest2[r].clone(),
                weight: w,
            })
        })
        .collect();
    extra.sort_by(|x, y| x.left.cmp(&y.left));
    matching.extend(extra);
    Ok(AlignmentOutcome {
        total_agreement: total,
        matching,
    })
}

/// Either kind of alignable set, for callers that receive both kinds.
#[derive(Debug, Clone)]
pub enum ElementSet {
    Transitions(TransitionSet),
    Pairs(PairSet),
}

/// Similarity value of two sets that must be of the same kind.
pub fn similarity_value(
    t1: &ElementSet,
    t2: &ElementSet,
    vars: &VarOrder,
    threshold: usize,
) -> Result<u64, AlignError> {
    match (t1, t2) {
        (ElementSet::Transitions(a), ElementSet::Transitions(b)) => similarity_total(a, b, vars, threshold),
        (ElementSet::Pairs(a), ElementSet::Pairs(b)) => similarity_total(a, b, vars, threshold),
        _ => Err(LtsError::KindMismatch.into()),
    }
}
