//! Convex polygon clipping and areas.

pub type Pt = [f64; 2];

/// Signed shoelace area (positive for counter-clockwise order).
pub fn signed_area(poly: &[Pt]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

pub fn area(poly: &[Pt]) -> f64 {
    signed_area(poly).abs()
}

fn ccw(poly: &[Pt]) -> Vec<Pt> {
    let mut v = poly.to_vec();
    if signed_area(&v) < 0.0 {
        v.reverse();
    }
    v
}

/// Intersection of two convex polygons (Sutherland-Hodgman).
pub fn clip_convex(subject: &[Pt], clip: &[Pt]) -> Vec<Pt> {
    let clip = ccw(clip);
    let mut out = ccw(subject);
    let m = clip.len();
    for i in 0..m {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % m];
        let side = |p: Pt| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        let input = std::mem::take(&mut out);
        let n = input.len();
        for j in 0..n {
            let p = input[j];
            let q = input[(j + 1) % n];
            let sp = side(p);
            let sq = side(q);
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

pub fn intersection_area(a: &[Pt], b: &[Pt]) -> f64 {
    area(&clip_convex(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        let a = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let b = [[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0]];
        assert!((intersection_area(&a, &b) - 1.0).abs() < 1e-15);
        let c = [[5.0, 5.0], [6.0, 5.0], [6.0, 6.0], [5.0, 6.0]];
        assert_eq!(intersection_area(&a, &c), 0.0);
        let mut rev = b;
        rev.reverse();
        assert!((intersection_area(&a, &rev) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diamond_in_square() {
        let sq = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let dia = [[0.0, -1.5], [1.5, 0.0], [0.0, 1.5], [-1.5, 0.0]];
        // square minus four corner triangles of legs 0.5
        assert!((intersection_area(&sq, &dia) - (4.0 - 4.0 * 0.125)).abs() < 1e-14);
    }
}
