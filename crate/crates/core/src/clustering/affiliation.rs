use crate::network::NetworkInstance;
use crate::Result;

/// A proper clustering: BS blocks plus each user's cell index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clustering {
    pub bs_blocks: Vec<Vec<usize>>,
    pub user_cell: Vec<usize>,
}

impl Clustering {
    pub fn n_cells(&self) -> usize {
        self.bs_blocks.len()
    }

    /// Users of `cell`, ascending.
    pub fn users_of(&self, cell: usize) -> Vec<usize> {
        self.user_cell.iter().enumerate().filter_map(|(u, &c)| (c == cell).then_some(u)).collect()
    }

    /// Checks the proper-clustering conditions against an instance: the BS
    /// blocks partition all BSs, every user has one valid cell, and that cell
    /// holds the user's nearest BS.
    pub fn validate(&self, instance: &NetworkInstance) -> Result<()> {
        super::validate_partition(&self.bs_blocks, instance.n_bs())?;
        if self.user_cell.len() != instance.n_users() {
            return Err(crate::Error::InvalidArgument(format!(
                "clustering covers {} users, instance has {}",
                self.user_cell.len(),
                instance.n_users()
            )));
        }
        for (u, &c) in self.user_cell.iter().enumerate() {
            let nearest = nearest_bs(instance, u);
            if c >= self.n_cells() || !self.bs_blocks[c].contains(&nearest) {
                return Err(crate::Error::InvalidArgument(format!(
                    "user {u} is in cell {c} but its nearest BS {nearest} is elsewhere"
                )));
            }
        }
        Ok(())
    }
}

/// Index of the BS closest to `user`; ties go to the lowest index.
pub fn nearest_bs(instance: &NetworkInstance, user: usize) -> usize {
    let up = instance.user_positions[user];
    let mut best = (0, f64::INFINITY);
    for (b, bp) in instance.bs_positions.iter().enumerate() {
        let d = up.distance(bp);
        if d < best.1 {
            best = (b, d);
        }
    }
    best.0
}

/// Attaches every user to the block holding its nearest BS.
pub fn affiliate_users(bs_blocks: &[Vec<usize>], instance: &NetworkInstance) -> Result<Clustering> {
    super::validate_partition(bs_blocks, instance.n_bs())?;
    let mut block_of = vec![0; instance.n_bs()];
    for (c, block) in bs_blocks.iter().enumerate() {
        for &b in block {
            block_of[b] = c;
        }
    }
    let user_cell = (0..instance.n_users()).map(|u| block_of[nearest_bs(instance, u)]).collect();
    let clustering = Clustering { bs_blocks: bs_blocks.to_vec(), user_cell };
    clustering.validate(instance)?;
    Ok(clustering)
}
