//! 2D slices of the region for plotting.

use serde::Serialize;
use tin_gdof::region::HalfSpaceRegion;
use tin_gdof::{extreme_points, Result, TOL};

#[derive(Debug, Serialize)]
pub struct Raster {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `inside[j][i]` is the membership of `(x[i], y[j])`.
    pub inside: Vec<Vec<bool>>,
}

#[derive(Debug, Serialize)]
pub struct SliceData {
    /// Slice polygon, counter-clockwise, starting at the vertex nearest the
    /// origin.
    pub polygon: Vec<[f64; 2]>,
    /// Outer boundary from the topmost vertex clockwise to the rightmost one.
    pub frontier: Vec<[f64; 2]>,
    pub raster: Raster,
    pub empty: bool,
}

pub fn slice_data(slice: &HalfSpaceRegion, resolution: usize) -> Result<SliceData> {
    let polygon = ccw_polygon(
        extreme_points(slice)?
            .iter()
            .map(|v| [v.as_slice()[0], v.as_slice()[1]])
            .collect(),
    );
    let frontier = frontier(&polygon);
    let (x_hi, y_hi) = polygon
        .iter()
        .fold((0.0f64, 0.0f64), |(x, y), p| (x.max(p[0]), y.max(p[1])));
    let axis = |hi: f64| -> Vec<f64> {
        let top = if hi > 0.0 { hi * 1.1 } else { 1.0 };
        (0..resolution)
            .map(|i| top * i as f64 / (resolution - 1) as f64)
            .collect()
    };
    let (xs, ys) = (axis(x_hi), axis(y_hi));
    let inside = ys
        .iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| slice.rows().iter().all(|r| r.lhs(&[x, y]) <= r.rhs + TOL))
                .collect()
        })
        .collect();
    Ok(SliceData {
        empty: polygon.is_empty(),
        polygon,
        frontier,
        raster: Raster {
            x: xs,
            y: ys,
            inside,
        },
    })
}

fn ccw_polygon(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if pts.len() < 3 {
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return pts;
    }
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let start = (0..pts.len())
        .min_by(|&i, &j| {
            let (a, b) = (pts[i], pts[j]);
            (a[0] + a[1], a[0])
                .partial_cmp(&(b[0] + b[1], b[0]))
                .unwrap()
        })
        .unwrap_or(0);
    pts.rotate_left(start);
    pts
}

fn frontier(polygon: &[[f64; 2]]) -> Vec<[f64; 2]> {
    if polygon.is_empty() {
        return Vec::new();
    }
    let pick = |better: &dyn Fn(&[f64; 2], &[f64; 2]) -> bool| {
        (0..polygon.len())
            .reduce(|best, i| {
                if better(&polygon[i], &polygon[best]) {
                    i
                } else {
                    best
                }
            })
            .unwrap()
    };
    let top = pick(&|a, b| a[1] > b[1] || (a[1] == b[1] && a[0] < b[0]));
    let right = pick(&|a, b| a[0] > b[0] || (a[0] == b[0] && a[1] < b[1]));
    // clockwise is backwards through the counter-clockwise list
    let mut out = vec![polygon[top]];
    let mut i = top;
    while i != right {
        i = (i + polygon.len() - 1) % polygon.len();
        out.push(polygon[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_frontier() {
        let square = vec![[1.0, 1.0], [0.0, 0.0], [0.0, 2.0], [1.0, 0.0]];
        let poly = ccw_polygon(square);
        assert_eq!(poly, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 2.0]]);
        assert_eq!(frontier(&poly), vec![[0.0, 2.0], [1.0, 1.0], [1.0, 0.0]]);
    }

    #[test]
    fn degenerate_slices() {
        assert!(frontier(&[]).is_empty());
        assert_eq!(frontier(&[[0.0, 0.0]]), vec![[0.0, 0.0]]);
        let seg = ccw_polygon(vec![[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(frontier(&seg), vec![[0.0, 1.0], [0.0, 0.0]]);
    }
}
