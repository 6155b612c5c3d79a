/// Per-feature cut points. A value `x` falls in bin `#{cuts ≤ x}`, so a split
/// "after bin b" sends `x < cuts[b]` to the left child.
#[derive(Debug, Clone, PartialEq)]
pub struct BinMapper {
    pub cuts: Vec<Vec<f64>>,
}

/// Point strictly above `lo` and at most `hi`, so that `lo` stays left of it.
fn boundary(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid > lo {
        mid
    } else {
        hi
    }
}

fn feature_cuts(mut values: Vec<f64>, max_bins: usize) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut distinct = values.clone();
    distinct.dedup();
    if distinct.len() <= max_bins {
        return distinct.windows(2).map(|w| boundary(w[0], w[1])).collect();
    }
    // equal-frequency: each quantile value opens a new bin
    let n = values.len();
    let mut cuts: Vec<f64> = Vec::with_capacity(max_bins - 1);
    for k in 1..max_bins {
        let q = values[k * n / max_bins];
        let pos = distinct.partition_point(|v| *v < q);
        if pos == 0 {
            continue;
        }
        let cut = boundary(distinct[pos - 1], q);
        if cuts.last().is_none_or(|last| cut > *last) {
            cuts.push(cut);
        }
    }
    cuts
}

impl BinMapper {
    pub fn fit(matrix: &[Vec<f64>], max_bins: usize) -> Self {
        let cols = matrix.first().map_or(0, Vec::len);
        let cuts = (0..cols)
            .map(|f| feature_cuts(matrix.iter().map(|r| r[f]).collect(), max_bins))
            .collect();
        BinMapper { cuts }
    }

    pub fn bin(&self, feature: usize, x: f64) -> usize {
        self.cuts[feature].partition_point(|c| *c <= x)
    }

    pub fn n_bins(&self, feature: usize) -> usize {
        self.cuts[feature].len() + 1
    }

    /// Column-major bin indices.
    pub fn transform(&self, matrix: &[Vec<f64>]) -> Vec<Vec<u16>> {
        (0..self.cuts.len())
            .map(|f| matrix.iter().map(|r| self.bin(f, r[f]) as u16).collect())
            .collect()
    }
}
