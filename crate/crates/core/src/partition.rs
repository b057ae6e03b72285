//! Set partitions of `0..n`, used as kernels of surjective maps.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("element {0} is outside the carrier")]
    OutOfRange(usize),
    #[error("element {0} appears in more than one block")]
    Overlap(usize),
    #[error("element {0} is not covered by any block")]
    Uncovered(usize),
    #[error("blocks must be nonempty")]
    EmptyBlock,
}

/// A partition in canonical form: elements sorted within blocks, blocks
/// ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            for &x in block {
                if x >= n {
                    return Err(PartitionError::OutOfRange(x));
                }
                if labels[x] != usize::MAX {
                    return Err(PartitionError::Overlap(x));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(PartitionError::Uncovered(x));
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Kernel of a labelling: `i` and `j` share a block iff their labels agree.
    pub fn from_labels<L: PartialEq>(labels: &[L]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            match blocks.iter().position(|b| labels[b[0]] == *label) {
                Some(b) => {
                    blocks[b].push(i);
                    block_of.push(b);
                }
                None => {
                    block_of.push(blocks.len());
                    blocks.push(vec![i]);
                }
            }
        }
        Partition { blocks, block_of }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(|i| vec![i]).collect(), block_of: (0..n).collect() }
    }

    pub fn one_block(n: usize) -> Self {
        Partition::from_labels(&vec![0u8; n])
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// Block index of every element.
    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn carrier_len(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.same_block(x, b[0])))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let items: Vec<String> = block.iter().map(usize::to_string).collect();
            f.write_str(&items.join(" "))?;
        }
        Ok(())
    }
}

/// Iterator over all partitions of `0..n` via restricted growth strings.
pub struct SetPartitions {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

/// All set partitions of `0..n` (Bell-number many).
pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions { rgs: vec![0; n], maxes: vec![0; n], done: false }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_labels(&self.rgs);
        // maxes[i] = max(rgs[0..i]); rgs[i] may go up to maxes[i] + 1
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.maxes[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.rgs[j - 1]);
                }
                break;
            }
        }
        Some(current)
    }
}
