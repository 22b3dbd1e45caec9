//! Marching-squares level sets on rectilinear grids.
//!
//! Vertices are placed on cell edges by linear interpolation. Ambiguous
//! (saddle) cells are resolved with the center-value rule: the mean of the
//! four corners decides whether the two high corners are joined. Cells with
//! a non-finite corner produce no segments.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourSet {
    pub level: f64,
    /// Open polylines end on the grid boundary; closed ones repeat their first vertex.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

impl ContourSet {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }
}

/// A cell edge: horizontal from `(ix, iy)` to `(ix + 1, iy)` or vertical from
/// `(ix, iy)` to `(ix, iy + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Contours of `z` at `level`; `z` is stored row-major in `y`
/// (`z[iy * xs.len() + ix]`). "Inside" means `z >= level`.
pub fn contour(xs: &[f64], ys: &[f64], z: &[f64], level: f64) -> ContourSet {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(z.len(), nx * ny, "grid shape mismatch");
    let at = |ix: usize, iy: usize| z[iy * nx + ix];
    let vertex = |e: Edge| -> [f64; 2] {
        let ((x0, y0, z0), (x1, y1, z1)) = match e {
            Edge::H(ix, iy) => ((xs[ix], ys[iy], at(ix, iy)), (xs[ix + 1], ys[iy], at(ix + 1, iy))),
            Edge::V(ix, iy) => ((xs[ix], ys[iy], at(ix, iy)), (xs[ix], ys[iy + 1], at(ix, iy + 1))),
        };
        let t = if z1 == z0 { 0.5 } else { ((level - z0) / (z1 - z0)).clamp(0.0, 1.0) };
        [x0 + t * (x1 - x0), y0 + t * (y1 - y0)]
    };

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for iy in 0..ny.saturating_sub(1) {
        for ix in 0..nx.saturating_sub(1) {
            let c = [at(ix, iy), at(ix + 1, iy), at(ix + 1, iy + 1), at(ix, iy + 1)];
            if c.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let case = c
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &v)| acc | (u8::from(v >= level) << i));
            let bottom = Edge::H(ix, iy);
            let top = Edge::H(ix, iy + 1);
            let left = Edge::V(ix, iy);
            let right = Edge::V(ix + 1, iy);
            let center_in = 0.25 * (c[0] + c[1] + c[2] + c[3]) >= level;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    // bottom-left and top-right high
                    if center_in {
                        segments.push((bottom, right));
                        segments.push((left, top));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    // bottom-right and top-left high
                    if center_in {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((bottom, right));
                        segments.push((left, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    ContourSet {
        level,
        polylines: link(&segments).into_iter().map(|p| p.into_iter().map(vertex).collect()).collect(),
    }
}

/// Chains segments that share an edge into polylines, open chains first.
fn link(segments: &[(Edge, Edge)]) -> Vec<Vec<Edge>> {
    let mut by_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (i, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(i);
        by_edge.entry(*b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start_seg: usize, start_edge: Edge, used: &mut Vec<bool>| {
        let mut chain = vec![start_edge];
        let (mut seg, mut at) = (start_seg, start_edge);
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            at = next;
            match by_edge[&at].iter().copied().find(|&s| !used[s]) {
                Some(s) => seg = s,
                None => break,
            }
        }
        chain
    };
    for (edge, segs) in &by_edge {
        if segs.len() == 1 && !used[segs[0]] {
            out.push(walk(segs[0], *edge, &mut used));
        }
    }
    for i in 0..segments.len() {
        if !used[i] {
            out.push(walk(i, segments[i].0, &mut used));
        }
    }
    out
}
