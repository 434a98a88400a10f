//! Zero-level contours of a sampled function by marching squares.

use std::collections::BTreeMap;

pub type Point = (f64, f64);

/// Grid edge carrying a contour crossing: horizontal edges join `(i, j)` and
/// `(i + 1, j)`, vertical edges join `(i, j)` and `(i, j + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKey {
    Horizontal(usize, usize),
    Vertical(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub keys: [EdgeKey; 2],
    pub points: [Point; 2],
}

/// Segments of `f = 0` for values sampled at `(xs[i], ys[j])`, stored as
/// `values[j * xs.len() + i]`. Corners with `f ≥ 0` count as inside; saddle
/// cells are resolved with the mean of the four corners.
pub fn marching_squares(xs: &[f64], ys: &[f64], values: &[f64]) -> Vec<Segment> {
    let nx = xs.len();
    let ny = ys.len();
    assert_eq!(values.len(), nx * ny);
    let f = |i: usize, j: usize| values[j * nx + i];
    let crossing = |key: EdgeKey| -> Point {
        let ((i0, j0), (i1, j1)) = match key {
            EdgeKey::Horizontal(i, j) => ((i, j), (i + 1, j)),
            EdgeKey::Vertical(i, j) => ((i, j), (i, j + 1)),
        };
        let (a, b) = (f(i0, j0), f(i1, j1));
        let w = a / (a - b);
        (
            xs[i0] + w * (xs[i1] - xs[i0]),
            ys[j0] + w * (ys[j1] - ys[j0]),
        )
    };
    let mut out = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let corners = [f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)];
            let inside = corners.map(|v| v >= 0.0);
            let edges = [
                EdgeKey::Horizontal(i, j),
                EdgeKey::Vertical(i + 1, j),
                EdgeKey::Horizontal(i, j + 1),
                EdgeKey::Vertical(i, j),
            ];
            // edge k joins corner k and corner k + 1
            let cut: Vec<usize> = (0..4).filter(|&k| inside[k] != inside[(k + 1) % 4]).collect();
            let pairs: Vec<(usize, usize)> = match cut.len() {
                2 => vec![(cut[0], cut[1])],
                4 => {
                    let center = corners.iter().sum::<f64>() / 4.0 >= 0.0;
                    if center == inside[0] {
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(3, 0), (1, 2)]
                    }
                }
                _ => vec![],
            };
            for (a, b) in pairs {
                let keys = [edges[a], edges[b]];
                out.push(Segment {
                    keys,
                    points: [crossing(keys[0]), crossing(keys[1])],
                });
            }
        }
    }
    out
}

/// Chains segments sharing grid edges into polylines. Closed loops repeat
/// their first point at the end.
pub fn join_segments(segments: &[Segment]) -> Vec<Vec<Point>> {
    let mut by_key: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (idx, seg) in segments.iter().enumerate() {
        for key in seg.keys {
            by_key.entry(key).or_default().push(idx);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    let extend = |start_key: EdgeKey, from: usize, used: &mut Vec<bool>| -> Vec<Point> {
        let mut pts = Vec::new();
        let mut key = start_key;
        let mut current = from;
        loop {
            let next = by_key[&key].iter().copied().find(|&s| s != current && !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let seg = &segments[s];
            let far = if seg.keys[0] == key { 1 } else { 0 };
            pts.push(seg.points[far]);
            key = seg.keys[far];
            current = s;
        }
        pts
    };

    for idx in 0..segments.len() {
        if used[idx] {
            continue;
        }
        used[idx] = true;
        let seg = &segments[idx];
        let forward = extend(seg.keys[1], idx, &mut used);
        let backward = extend(seg.keys[0], idx, &mut used);
        let mut line: Vec<Point> = backward.into_iter().rev().collect();
        line.push(seg.points[0]);
        line.push(seg.points[1]);
        line.extend(forward);
        lines.push(line);
    }
    lines
}
