use serde::{Deserialize, Serialize};

use super::binning::BinMapper;
use super::Growth;

/// One node record. Leaves have no feature, threshold or children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub feature: Option<usize>,
    /// Rows with `x[feature] < threshold` go left.
    pub threshold: Option<f64>,
    pub left: Option<usize>,
    pub right: Option<usize>,
    /// Optimal weight `−G/(H+λ)` of this node's rows (before shrinkage).
    pub weight: f64,
    /// Regularised split gain; 0 for leaves.
    pub gain: f64,
    /// Hessian sum `H` of the node's rows.
    pub cover: f64,
    /// Gradient sum `G` of the node's rows.
    pub grad: f64,
    pub depth: usize,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.left.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf_of(&self, row: &[f64]) -> usize {
        let mut id = 0;
        loop {
            let node = &self.nodes[id];
            match (node.feature, node.threshold, node.left, node.right) {
                (Some(f), Some(t), Some(l), Some(r)) => id = if row[f] < t { l } else { r },
                _ => return id,
            }
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.nodes[self.leaf_of(row)].weight
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }
}

pub(crate) struct GrowParams {
    pub lambda: f64,
    pub gamma: f64,
    pub max_depth: usize,
    pub max_leaves: usize,
    pub growth: Growth,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    /// First bin sent right.
    right_bin: usize,
    gain: f64,
    left: (f64, f64),
    right: (f64, f64),
}

pub(crate) fn split_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64, gamma: f64) -> f64 {
    let score = |g: f64, h: f64| g * g / (h + lambda);
    0.5 * (score(gl, hl) + score(gr, hr) - score(gl + gr, hl + hr)) - gamma
}

struct Grower<'a> {
    binned: &'a [Vec<u16>],
    mapper: &'a BinMapper,
    grad: &'a [f64],
    hess: &'a [f64],
    params: &'a GrowParams,
    nodes: Vec<Node>,
    rows: Vec<Vec<usize>>,
}

impl Grower<'_> {
    fn leaf(&self, g: f64, h: f64, depth: usize) -> Node {
        Node {
            feature: None,
            threshold: None,
            left: None,
            right: None,
            weight: -g / (h + self.params.lambda),
            gain: 0.0,
            cover: h,
            grad: g,
            depth,
        }
    }

    /// Best positive-gain split of node `id`; ties keep the lowest feature,
    /// then the lowest threshold.
    fn best_split(&self, id: usize) -> Option<Candidate> {
        let node = &self.nodes[id];
        if node.depth >= self.params.max_depth {
            return None;
        }
        let rows = &self.rows[id];
        let mut best: Option<Candidate> = None;
        for (f, column) in self.binned.iter().enumerate() {
            let nb = self.mapper.n_bins(f);
            if nb < 2 {
                continue;
            }
            let mut hist = vec![(0.0f64, 0.0f64, 0usize); nb];
            for &r in rows {
                let cell = &mut hist[column[r] as usize];
                cell.0 += self.grad[r];
                cell.1 += self.hess[r];
                cell.2 += 1;
            }
            let total_count = rows.len();
            let (mut gl, mut hl, mut cl) = (0.0, 0.0, 0usize);
            for b in 0..nb - 1 {
                gl += hist[b].0;
                hl += hist[b].1;
                cl += hist[b].2;
                if cl == 0 || cl == total_count || hist[b].2 == 0 {
                    continue;
                }
                let (gr, hr): (f64, f64) =
                    hist[b + 1..].iter().fold((0.0, 0.0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
                let gain = split_gain(gl, hl, gr, hr, self.params.lambda, self.params.gamma);
                if gain > 0.0 && best.is_none_or(|c| gain > c.gain) {
                    best = Some(Candidate {
                        feature: f,
                        threshold: self.mapper.cuts[f][b],
                        right_bin: b + 1,
                        gain,
                        left: (gl, hl),
                        right: (gr, hr),
                    });
                }
            }
        }
        best
    }

    fn apply(&mut self, id: usize, c: Candidate) -> (usize, usize) {
        let depth = self.nodes[id].depth + 1;
        let rows = std::mem::take(&mut self.rows[id]);
        let column = &self.binned[c.feature];
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.into_iter().partition(|&r| (column[r] as usize) < c.right_bin);
        let l = self.nodes.len();
        self.nodes.push(self.leaf(c.left.0, c.left.1, depth));
        self.nodes.push(self.leaf(c.right.0, c.right.1, depth));
        self.rows.push(left_rows);
        self.rows.push(right_rows);
        let node = &mut self.nodes[id];
        node.feature = Some(c.feature);
        node.threshold = Some(c.threshold);
        node.left = Some(l);
        node.right = Some(l + 1);
        node.gain = c.gain;
        (l, l + 1)
    }
}

pub(crate) fn grow_tree(
    binned: &[Vec<u16>],
    mapper: &BinMapper,
    grad: &[f64],
    hess: &[f64],
    rows: Vec<usize>,
    params: &GrowParams,
) -> Tree {
    let g: f64 = rows.iter().map(|&r| grad[r]).sum();
    let h: f64 = rows.iter().map(|&r| hess[r]).sum();
    let mut grower = Grower { binned, mapper, grad, hess, params, nodes: Vec::new(), rows: vec![rows] };
    grower.nodes.push(grower.leaf(g, h, 0));
    let mut leaves = 1;

    match params.growth {
        Growth::LeafWise => {
            let mut open: Vec<(usize, Option<Candidate>)> = vec![(0, grower.best_split(0))];
            while leaves < params.max_leaves {
                let mut pick: Option<(usize, Candidate)> = None;
                for (slot, (_, cand)) in open.iter().enumerate() {
                    if let Some(c) = cand {
                        if pick.is_none_or(|(_, p)| c.gain > p.gain) {
                            pick = Some((slot, *c));
                        }
                    }
                }
                let Some((slot, cand)) = pick else { break };
                let (id, _) = open.remove(slot);
                let (l, r) = grower.apply(id, cand);
                leaves += 1;
                open.push((l, grower.best_split(l)));
                open.push((r, grower.best_split(r)));
                // keep node-id order so ties resolve to the earliest node
                open.sort_by_key(|(id, _)| *id);
            }
        }
        Growth::LevelWise => {
            let mut frontier = vec![0usize];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for id in frontier {
                    if leaves >= params.max_leaves {
                        break;
                    }
                    if let Some(c) = grower.best_split(id) {
                        let (l, r) = grower.apply(id, c);
                        leaves += 1;
                        next.push(l);
                        next.push(r);
                    }
                }
                frontier = next;
            }
        }
    }
    Tree { nodes: grower.nodes }
}
