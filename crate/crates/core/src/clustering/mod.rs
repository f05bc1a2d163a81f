//! Forming virtual cells.
//!
//! BSs are grouped either by cutting a minimax-linkage dendrogram or by
//! enumerating every partition with a fixed number of blocks; users then
//! follow their nearest BS into its block.

mod affiliation;
mod linkage;
mod partitions;

pub use affiliation::{affiliate_users, nearest_bs, Clustering};
pub use linkage::{
    cut_dendrogram, hierarchical_cluster, minimax_linkage, minimax_radius, set_radius, Dendrogram, Merge,
};
pub use partitions::{enumerate_partitions, stirling2, PartitionIter};

use crate::{Error, Result};

/// Checks that `blocks` is a partition of `0..n` into non-empty, disjoint,
/// covering blocks.
pub fn validate_partition(blocks: &[Vec<usize>], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for block in blocks {
        if block.is_empty() {
            return Err(Error::InvalidArgument("partition contains an empty block".into()));
        }
        for &i in block {
            if i >= n {
                return Err(Error::InvalidArgument(format!("index {i} out of range for {n} elements")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("index {i} appears in two blocks")));
            }
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidArgument(format!("index {missing} is not covered")));
    }
    Ok(())
}

/// Sorts each block and orders blocks by their smallest element.
pub fn canonicalize(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| b.first().copied());
    blocks
}
