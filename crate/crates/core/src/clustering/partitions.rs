//! Set partitions with a fixed number of blocks, in restricted-growth-string
//! order.

/// Stirling number of the second kind, S(n, k).
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Iterator over all partitions of `{0..n}` into exactly `k` non-empty
/// blocks. Each partition is yielded once, blocks ordered by smallest element.
#[derive(Debug, Clone)]
pub struct PartitionIter {
    rgs: Vec<usize>,
    k: usize,
    done: bool,
}

pub fn enumerate_partitions(n: usize, k: usize) -> PartitionIter {
    let done = k == 0 || k > n;
    let mut rgs = vec![0; n];
    if !done {
        // Lexicographically first string: zeros, then 1..k-1 at the tail.
        for (i, slot) in rgs[n - k + 1..].iter_mut().enumerate() {
            *slot = i + 1;
        }
    }
    PartitionIter { rgs, k, done }
}

impl PartitionIter {
    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        let k = self.k;
        // prefix_max[i] = max(rgs[0..i]), i.e. the largest block label before i.
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        for i in (1..n).rev() {
            let next = self.rgs[i] + 1;
            if next > prefix_max[i] + 1 || next >= k {
                continue;
            }
            let used = prefix_max[i].max(next) + 1;
            let tail = n - 1 - i;
            if k - used > tail {
                continue;
            }
            self.rgs[i] = next;
            let zeros = tail - (k - used);
            for j in 0..tail {
                self.rgs[i + 1 + j] = if j < zeros { 0 } else { used + (j - zeros) };
            }
            return;
        }
        self.done = true;
    }
}

impl Iterator for PartitionIter {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.blocks();
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Reference count from the recurrence S(n,k) = k·S(n-1,k) + S(n-1,k-1).
    fn stirling_recursive(n: usize, k: usize) -> u128 {
        match (n, k) {
            (0, 0) => 1,
            (_, 0) | (0, _) => 0,
            _ => k as u128 * stirling_recursive(n - 1, k) + stirling_recursive(n - 1, k - 1),
        }
    }

    #[test]
    fn stirling_values() {
        let row: Vec<u128> = (1..=6).map(|k| stirling2(6, k)).collect();
        assert_eq!(row, vec![1, 31, 90, 65, 15, 1]);
        for n in 0..10 {
            for k in 0..=n {
                assert_eq!(stirling2(n, k), stirling_recursive(n, k), "S({n},{k})");
            }
        }
    }

    #[test]
    fn counts_match_stirling_and_bell() {
        let mut bell = 0;
        for k in 1..=6 {
            let c = enumerate_partitions(6, k).count() as u128;
            assert_eq!(c, stirling_recursive(6, k));
            bell += c;
        }
        assert_eq!(bell, 203);
        assert_eq!(enumerate_partitions(6, 2).count(), 31);
        assert_eq!(enumerate_partitions(6, 3).count(), 90);
        assert_eq!(enumerate_partitions(4, 4).collect::<Vec<_>>(), vec![vec![vec![0], vec![1], vec![2], vec![3]]]);
        assert_eq!(enumerate_partitions(3, 0).count(), 0);
        assert_eq!(enumerate_partitions(3, 4).count(), 0);
    }

    #[test]
    fn partitions_are_distinct_and_proper() {
        for n in 1..=7 {
            for k in 1..=n {
                let all: Vec<_> = enumerate_partitions(n, k).collect();
                let unique: HashSet<_> = all.iter().cloned().collect();
                assert_eq!(unique.len(), all.len());
                for p in &all {
                    assert_eq!(p.len(), k);
                    crate::clustering::validate_partition(p, n).unwrap();
                    assert_eq!(&crate::clustering::canonicalize(p.clone()), p);
                }
            }
        }
    }
}
