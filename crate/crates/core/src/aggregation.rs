//! Node-to-aggregate partitions and the three partitioners that produce
//! them: AMG-style strong-coupling aggregation, round-robin BFS region
//! growing, and seeded balanced random chunking.
//!
//! All aggregate ids are 0-based. Every partitioner guarantees a total
//! `part` map with no empty aggregate and is deterministic for a fixed
//! seed; ties always break toward the smallest node index.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::rng::{rng_from_seed, shuffle};

/// Total map from fine node to aggregate id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    part: Vec<usize>,
    n_aggregates: usize,
}

impl Partition {
    /// Validating constructor: every id in range, every aggregate nonempty.
    pub fn new(part: Vec<usize>, n_aggregates: usize) -> Result<Self> {
        if n_aggregates == 0 || n_aggregates > part.len() {
            return Err(Error::InvalidAggregateCount {
                got: n_aggregates,
                max: part.len(),
            });
        }
        let mut seen = vec![false; n_aggregates];
        for &p in &part {
            if p >= n_aggregates {
                return Err(Error::InvalidArgument(format!(
                    "aggregate id {p} out of range [0, {n_aggregates})"
                )));
            }
            seen[p] = true;
        }
        if let Some(empty) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidArgument(format!("aggregate {empty} is empty")));
        }
        Ok(Partition { part, n_aggregates })
    }

    pub fn part(&self) -> &[usize] {
        &self.part
    }

    pub fn len(&self) -> usize {
        self.part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.part.is_empty()
    }

    pub fn n_aggregates(&self) -> usize {
        self.n_aggregates
    }

    /// Invert the part map into aggregates G_i, each sorted ascending.
    pub fn inverse_part(&self) -> Vec<Vec<usize>> {
        let mut aggregates = vec![Vec::new(); self.n_aggregates];
        for (node, &agg) in self.part.iter().enumerate() {
            aggregates[agg].push(node);
        }
        aggregates
    }

    pub fn aggregate_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_aggregates];
        for &p in &self.part {
            sizes[p] += 1;
        }
        sizes
    }

    /// One `node_index aggregate_id` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (node, &agg) in self.part.iter().enumerate() {
            out.push_str(&format!("{node} {agg}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut tok = trimmed.split_whitespace();
            let parse = |t: Option<&str>| -> Result<usize> {
                t.ok_or_else(|| Error::InvalidArgument(format!("line {}: missing field", line_no + 1)))?
                    .parse()
                    .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", line_no + 1)))
            };
            let node = parse(tok.next())?;
            let agg = parse(tok.next())?;
            pairs.push((node, agg));
        }
        pairs.sort_by_key(|&(node, _)| node);
        for (expect, &(node, _)) in pairs.iter().enumerate() {
            if node != expect {
                return Err(Error::InvalidArgument(format!(
                    "node indices must cover 0..{} exactly, saw {node}",
                    pairs.len()
                )));
            }
        }
        let part: Vec<usize> = pairs.into_iter().map(|(_, agg)| agg).collect();
        let n_aggregates = part.iter().copied().max().map_or(0, |m| m + 1);
        Partition::new(part, n_aggregates)
    }
}

/// Repair step shared by the partitioners: an aggregate that would come out
/// empty steals one node from the largest aggregate, preserving full column
/// rank of the interpolation built on top.
fn repair_empty_aggregates(part: &mut [usize], n_aggregates: usize) {
    loop {
        let mut sizes = vec![0usize; n_aggregates];
        for &p in part.iter() {
            sizes[p] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let largest = sizes
            .iter()
            .enumerate()
            .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .expect("nonempty sizes");
        let donor = part
            .iter()
            .position(|&p| p == largest)
            .expect("largest aggregate has members");
        part[donor] = empty;
    }
}

/// AMG-style aggregation by strong negative coupling.
///
/// S_i collects the neighbors j with a_ij < -beta * max_k |a_ik| (k != i).
/// Unmarked nodes are picked by minimal count of unmarked strongly coupled
/// neighbors (then smallest index); each pick aggregates the node with its
/// unmarked strong neighbors. Nodes with no strong couplings end up as
/// singletons.
pub fn strong_coupling_aggregation(a: &SparseMatrix, beta: f64) -> Result<Partition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!(
            "beta must lie in [0, 1], got {beta}"
        )));
    }
    let n = a.nrows();
    let mut strong: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let (cols, vals) = a.row(i);
        let max_mag = cols
            .iter()
            .zip(vals)
            .filter(|&(&j, _)| j != i)
            .map(|(_, &v)| v.abs())
            .fold(0.0, f64::max);
        let threshold = -beta * max_mag;
        strong.push(
            cols.iter()
                .zip(vals)
                .filter(|&(&j, &v)| j != i && v < threshold)
                .map(|(&j, _)| j)
                .collect(),
        );
    }

    let mut part = vec![usize::MAX; n];
    let mut marked = vec![false; n];
    let mut n_aggregates = 0;
    let mut remaining = n;
    while remaining > 0 {
        // unmarked node with the fewest unmarked strong neighbors, then
        // smallest index
        let mut pick = usize::MAX;
        let mut pick_m = usize::MAX;
        for i in 0..n {
            if marked[i] {
                continue;
            }
            let m_i = strong[i].iter().filter(|&&j| !marked[j]).count();
            if m_i < pick_m {
                pick = i;
                pick_m = m_i;
            }
        }
        let agg = n_aggregates;
        n_aggregates += 1;
        part[pick] = agg;
        marked[pick] = true;
        remaining -= 1;
        for &j in &strong[pick] {
            if !marked[j] {
                part[j] = agg;
                marked[j] = true;
                remaining -= 1;
            }
        }
    }
    Partition::new(part, n_aggregates)
}

/// Round-robin BFS region growing from seeded random distinct roots over the
/// symmetrized adjacency graph. Each region claims at most one node per
/// turn, so region sizes stay balanced; disconnected leftovers go to the
/// currently smallest region.
pub fn bfs_graph_partition(a: &SparseMatrix, n_aggregates: usize, seed: u64) -> Result<Partition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    let n = a.nrows();
    if n_aggregates == 0 || n_aggregates > n {
        return Err(Error::InvalidAggregateCount {
            got: n_aggregates,
            max: n,
        });
    }

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in a.iter() {
        if i != j {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }
    for neighbors in &mut adjacency {
        neighbors.sort_unstable();
        neighbors.dedup();
    }

    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut rng_from_seed(seed), &mut order);

    let mut part = vec![usize::MAX; n];
    let mut sizes = vec![0usize; n_aggregates];
    let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); n_aggregates];
    for (region, &root) in order[..n_aggregates].iter().enumerate() {
        part[root] = region;
        sizes[region] = 1;
        queues[region].push_back(root);
    }
    let mut remaining = n - n_aggregates;

    while remaining > 0 {
        let mut progressed = false;
        for region in 0..n_aggregates {
            // claim the first unclaimed neighbor reachable from this
            // region's frontier
            'grow: while let Some(&front) = queues[region].front() {
                for &next in &adjacency[front] {
                    if part[next] == usize::MAX {
                        part[next] = region;
                        sizes[region] += 1;
                        queues[region].push_back(next);
                        remaining -= 1;
                        progressed = true;
                        break 'grow;
                    }
                }
                queues[region].pop_front();
            }
            if remaining == 0 {
                break;
            }
        }
        if !progressed && remaining > 0 {
            // disconnected leftover: hand the smallest-index unclaimed node
            // to the smallest region
            let node = part.iter().position(|&p| p == usize::MAX).unwrap();
            let region = (0..n_aggregates).min_by_key(|&r| (sizes[r], r)).unwrap();
            part[node] = region;
            sizes[region] += 1;
            queues[region].push_back(node);
            remaining -= 1;
        }
    }
    repair_empty_aggregates(&mut part, n_aggregates);
    Partition::new(part, n_aggregates)
}

/// Seeded balanced random partition: a random permutation of [0, N) chopped
/// into contiguous chunks of size floor(N/k) or ceil(N/k).
pub fn random_partition(n: usize, n_aggregates: usize, seed: u64) -> Result<Partition> {
    if n_aggregates == 0 || n_aggregates > n {
        return Err(Error::InvalidAggregateCount {
            got: n_aggregates,
            max: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut rng_from_seed(seed), &mut order);

    let base = n / n_aggregates;
    let extra = n % n_aggregates;
    let mut part = vec![0usize; n];
    let mut cursor = 0;
    for agg in 0..n_aggregates {
        let size = base + usize::from(agg < extra);
        for &node in &order[cursor..cursor + size] {
            part[node] = agg;
        }
        cursor += size;
    }
    Partition::new(part, n_aggregates)
}
