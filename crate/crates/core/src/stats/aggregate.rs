use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::model::MIN_COUNT;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AggregationError {
    #[error("vote stream is empty")]
    Empty,
    #[error("no label reached {MIN_COUNT} votes within {consumed} votes")]
    Unresolved { consumed: usize },
    #[error("count {0} is below the minimum of {MIN_COUNT}")]
    CountTooSmall(u32),
}

/// Outcome of replaying a vote stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregated<T> {
    pub label: T,
    /// Number of workers consulted, i.e. the length of the consumed prefix.
    pub count: u32,
}

/// Replays the collection protocol: workers are asked in order until some
/// label has been given twice. Returns that label and the number of workers
/// asked so far.
pub fn aggregate_votes<T: Eq + Hash + Clone>(
    votes: &[T],
) -> Result<Aggregated<T>, AggregationError> {
    if votes.is_empty() {
        return Err(AggregationError::Empty);
    }
    let mut seen: HashMap<&T, u32> = HashMap::new();
    for (i, vote) in votes.iter().enumerate() {
        let n = seen.entry(vote).or_insert(0);
        *n += 1;
        if *n == MIN_COUNT {
            return Ok(Aggregated {
                label: vote.clone(),
                count: (i + 1) as u32,
            });
        }
    }
    Err(AggregationError::Unresolved {
        consumed: votes.len(),
    })
}

/// Confidence weight of an annotation: `2 / count`.
pub fn weight_from_count(count: u32) -> Result<f64, AggregationError> {
    if count < MIN_COUNT {
        return Err(AggregationError::CountTooSmall(count));
    }
    Ok(f64::from(MIN_COUNT) / f64::from(count))
}
