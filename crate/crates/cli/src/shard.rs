//! Class counting split over threads by contiguous point ranges.

use std::sync::Arc;
use std::thread;

use quivercell_core::enumerate::field_size;
use quivercell_core::kac::{count_range, finish, point_count, shard_ranges, KacSample, PartialCount};
use quivercell_core::{Budget, DimVector, Field, Quiver, Result};

/// Same result for every shard count: partial sums are exact integers merged
/// in range order.
pub fn count_classes_sharded<F: Field>(quiver: Arc<Quiver>, field: &F, alpha: &DimVector, shards: usize, budget: Budget) -> Result<KacSample> {
    let q = field_size(field)?;
    let total = point_count(&quiver, field, alpha, budget)?;
    let ranges = shard_ranges(total, shards);
    let parts: Vec<Result<PartialCount>> = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let quiver = quiver.clone();
                s.spawn(move || count_range(quiver, field, alpha, r, budget))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("counting thread panicked")).collect()
    });
    let mut acc = PartialCount::default();
    for p in parts {
        acc = acc.merge(&p?);
    }
    finish(q, alpha, &acc, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use quivercell_core::PrimeField;

    #[test]
    fn shard_count_does_not_matter() {
        let q = Arc::new(Quiver::kronecker(2));
        let f = PrimeField::new(2).unwrap();
        let a = DimVector(vec![2, 2]);
        let one = count_classes_sharded(q.clone(), &f, &a, 1, Budget::default()).unwrap();
        for k in [2, 3, 7] {
            assert_eq!(count_classes_sharded(q.clone(), &f, &a, k, Budget::default()).unwrap(), one);
        }
        assert_eq!(one.abs_indec_classes, 3);
    }
}
