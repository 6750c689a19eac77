//! Power-diagram geometry in three dimensions.
//!
//! Lifting a mixed state `rho` to the sphere centred at `grad F(rho)` makes
//! the power diagram of the lifted spheres coincide with the Bregman Voronoi
//! diagram of the states under `x -> D(x || rho)`. Regular triangulations are
//! the lower hull of the points `(p, |p|^2 - w)` in four dimensions; the hull
//! is built incrementally together with a symbolic vertex at vertical
//! infinity, so the facets through that vertex are exactly the vertical walls
//! over the three-dimensional convex hull.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::divergence::{bregman_generator, generator_gradient};
use crate::error::{Error, Result};
use crate::state::BlochVector;

/// Relative guard applied to every orientation determinant.
pub const PREDICATE_EPS: f64 = 1e-10;

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedSite {
    pub point: Point3,
    pub weight: f64,
}

impl WeightedSite {
    pub fn new(point: Point3, weight: f64) -> Result<Self> {
        if !(point.iter().all(|c| c.is_finite()) && weight.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(WeightedSite { point, weight })
    }
}

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &Point3) -> f64 {
    dot3(a, a).sqrt()
}

/// `|x - p|^2 - w`.
pub fn laguerre_distance(x: &Point3, s: &WeightedSite) -> f64 {
    let d = sub(x, &s.point);
    dot3(&d, &d) - s.weight
}

/// The plane `normal . x = offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    pub normal: Point3,
    pub offset: f64,
}

impl Plane {
    pub fn signed_value(&self, x: &Point3) -> f64 {
        dot3(&self.normal, x) - self.offset
    }

    /// Orthogonal projection of `x` onto the plane.
    pub fn project(&self, x: &Point3) -> Point3 {
        let t = self.signed_value(x) / dot3(&self.normal, &self.normal);
        [
            x[0] - t * self.normal[0],
            x[1] - t * self.normal[1],
            x[2] - t * self.normal[2],
        ]
    }
}

/// Points of equal power to both sites:
/// `2 <x, q - p> = |q|^2 - |p|^2 + w_p - w_q`.
pub fn laguerre_bisector(b1: &WeightedSite, b2: &WeightedSite) -> Result<Plane> {
    let d = sub(&b2.point, &b1.point);
    if norm3(&d) == 0.0 {
        return Err(Error::DegenerateBisector);
    }
    Ok(Plane {
        normal: [2.0 * d[0], 2.0 * d[1], 2.0 * d[2]],
        offset: dot3(&b2.point, &b2.point) - dot3(&b1.point, &b1.point) + b1.weight - b2.weight,
    })
}

/// Sphere centred at `rho' = grad F(rho)` with weight
/// `|rho'|^2 + 2 (F(rho) - <rho, rho'>)`, so that
/// `laguerre_distance(x, lift) = 2 D(x || rho) - 2 F(x) + |x|^2`.
pub fn lift_site(rho: &BlochVector) -> Result<WeightedSite> {
    let g = generator_gradient(rho)?.to_array();
    let r = rho.to_array();
    let weight = dot3(&g, &g) + 2.0 * (bregman_generator(rho) - dot3(&r, &g));
    WeightedSite::new(g, weight)
}

/// Index of the site of least power at `x`, lowest index on ties.
pub fn nearest_power_site(x: &Point3, sites: &[WeightedSite]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in sites.iter().enumerate() {
        let d = laguerre_distance(x, s);
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Marker for the symbolic vertex at vertical infinity.
const INF: usize = usize::MAX;

/// Determinant of a small square matrix by partial-pivot elimination.
fn det<const D: usize>(mut m: [[f64; D]; D]) -> f64 {
    let mut result = 1.0;
    for col in 0..D {
        let pivot = (col..D)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("non-empty column");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            result = -result;
        }
        result *= m[col][col];
        for row in col + 1..D {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (k, v) in m[row].iter_mut().enumerate().skip(col) {
                *v -= f * pivot_row[k];
            }
        }
    }
    result
}

/// Orientation of `q` against the hyperplane through `verts`: the determinant
/// with rows `v - q` (or the vertical unit vector for the infinite vertex),
/// together with the Hadamard bound of those rows.
fn orient<const D: usize>(pts: &[[f64; D]], verts: &[usize; D], q: &[f64; D]) -> (f64, f64) {
    let mut m = [[0.0; D]; D];
    let mut scale = 1.0;
    for (row, &v) in m.iter_mut().zip(verts) {
        if v == INF {
            row[D - 1] = 1.0;
        } else {
            for k in 0..D {
                row[k] = pts[v][k] - q[k];
            }
            scale *= row.iter().map(|c| c * c).sum::<f64>().sqrt();
        }
    }
    (det(m), scale)
}

#[derive(Debug, Clone, Copy)]
struct Facet<const D: usize> {
    verts: [usize; D],
    /// Sign of the orientation of the interior reference point.
    inside: f64,
}

/// Beneath-beyond hull. `simplex` seeds the hull (it may contain [`INF`]);
/// `interior` lies strictly inside it and therefore inside every later hull.
/// A point on a facet's hyperplane does not see that facet.
fn incremental_hull<const D: usize>(
    pts: &[[f64; D]],
    simplex: &[usize],
    interior: [f64; D],
) -> Vec<Facet<D>> {
    let make = |verts: [usize; D]| {
        let (d, _) = orient(pts, &verts, &interior);
        Facet {
            verts,
            inside: d.signum(),
        }
    };
    let mut facets: Vec<Facet<D>> = (0..simplex.len())
        .map(|skip| {
            let mut verts = [0; D];
            for (slot, &v) in verts.iter_mut().zip(
                simplex
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| v),
            ) {
                *slot = v;
            }
            make(verts)
        })
        .collect();

    for q in 0..pts.len() {
        if simplex.contains(&q) {
            continue;
        }
        let visible: Vec<bool> = facets
            .iter()
            .map(|f| {
                let (d, scale) = orient(pts, &f.verts, &pts[q]);
                d * f.inside < -PREDICATE_EPS * scale
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: BTreeMap<Vec<usize>, (usize, Vec<usize>)> = BTreeMap::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..D {
                let ridge: Vec<usize> = f
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let mut key = ridge.clone();
                key.sort_unstable();
                ridges.entry(key).or_insert((0, ridge)).0 += 1;
            }
        }
        let mut kept: Vec<Facet<D>> = facets
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        for (_, (count, ridge)) in ridges {
            if count != 1 {
                continue;
            }
            let mut verts = [q; D];
            verts[..D - 1].copy_from_slice(&ridge);
            kept.push(make(verts));
        }
        facets = kept;
    }
    facets
}

/// Four points spanning space, chosen for spread, or the affine dimension
/// reached before the search failed.
fn spanning_tetrahedron(pts: &[Point3]) -> std::result::Result<[usize; 4], usize> {
    if pts.is_empty() {
        return Err(0);
    }
    let extent = pts
        .iter()
        .flat_map(|p| pts.iter().map(move |q| norm3(&sub(p, q))))
        .fold(0.0, f64::max);
    if extent == 0.0 {
        return Err(0);
    }
    let tol = PREDICATE_EPS * extent;
    let a = 0;
    let argmax = |f: &dyn Fn(&Point3) -> f64| {
        (0..pts.len())
            .max_by(|&i, &j| f(&pts[i]).total_cmp(&f(&pts[j])))
            .expect("non-empty")
    };
    let b = argmax(&|p| norm3(&sub(p, &pts[a])));
    let ab = sub(&pts[b], &pts[a]);
    let line_dist = |p: &Point3| norm3(&cross(&ab, &sub(p, &pts[a]))) / norm3(&ab);
    let c = argmax(&line_dist);
    if line_dist(&pts[c]) <= tol {
        return Err(1);
    }
    let n = cross(&ab, &sub(&pts[c], &pts[a]));
    let plane_dist = |p: &Point3| (dot3(&n, &sub(p, &pts[a])) / norm3(&n)).abs();
    let d = argmax(&plane_dist);
    if plane_dist(&pts[d]) <= tol {
        return Err(2);
    }
    Ok([a, b, c, d])
}

fn signed_volume(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    dot3(&sub(b, a), &cross(&sub(c, a), &sub(d, a))) / 6.0
}

/// Facets of a 3D convex hull, counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexHull {
    pub facets: Vec<[usize; 3]>,
    /// Affine dimension of the input; below 3 the facet list is empty.
    pub dimension: usize,
}

impl ConvexHull {
    pub fn is_degenerate(&self) -> bool {
        self.dimension < 3
    }

    pub fn volume(&self, pts: &[Point3]) -> f64 {
        hull_volume(pts, &self.facets)
    }

    /// Largest signed distance of any point beyond a facet plane.
    pub fn max_violation(&self, pts: &[Point3]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for f in &self.facets {
            let n = cross(&sub(&pts[f[1]], &pts[f[0]]), &sub(&pts[f[2]], &pts[f[0]]));
            let len = norm3(&n);
            for p in pts {
                worst = worst.max(dot3(&n, &sub(p, &pts[f[0]])) / len);
            }
        }
        worst
    }
}

fn hull_volume(pts: &[Point3], facets: &[[usize; 3]]) -> f64 {
    let Some(first) = facets.first() else {
        return 0.0;
    };
    let o = pts[first[0]];
    facets
        .iter()
        .map(|f| signed_volume(&o, &pts[f[0]], &pts[f[1]], &pts[f[2]]))
        .sum()
}

fn centroid(pts: &[Point3], idx: &[usize]) -> Point3 {
    let mut c = [0.0; 3];
    for &i in idx {
        for k in 0..3 {
            c[k] += pts[i][k] / idx.len() as f64;
        }
    }
    c
}

fn outward(pts: &[Point3], mut f: [usize; 3], interior: &Point3) -> [usize; 3] {
    if signed_volume(interior, &pts[f[0]], &pts[f[1]], &pts[f[2]]) < 0.0 {
        f.swap(1, 2);
    }
    f
}

pub fn convex_hull_3d(points: &[Point3]) -> ConvexHull {
    let simplex = match spanning_tetrahedron(points) {
        Ok(s) if points.len() >= 4 => s,
        Ok(_) => {
            return ConvexHull {
                facets: vec![],
                dimension: 3,
            }
        }
        Err(dimension) => {
            return ConvexHull {
                facets: vec![],
                dimension,
            }
        }
    };
    let interior = centroid(points, &simplex);
    let facets = incremental_hull(points, &simplex, interior);
    let facets = facets
        .into_iter()
        .map(|f| outward(points, f.verts, &interior))
        .collect();
    ConvexHull {
        facets,
        dimension: 3,
    }
}

/// Weighted Delaunay triangulation of a site set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangulation {
    pub vertices: Vec<WeightedSite>,
    /// Positively oriented tetrahedra.
    pub tetrahedra: Vec<[usize; 4]>,
    /// Convex-hull triangles, counter-clockwise seen from outside.
    pub hull_facets: Vec<[usize; 3]>,
}

/// Regular triangulation as the lower hull of `(p, |p|^2 - w)`.
///
/// Ties in the lifted orientation test count as "not visible", so a site
/// exactly on the power sphere of a tetrahedron is treated as lifted
/// slightly above it and does not split it. Redundant sites, whose lifted
/// point lies above the lower hull, appear in no tetrahedron.
pub fn regular_triangulation(sites: &[WeightedSite]) -> Result<Triangulation> {
    let pts3: Vec<Point3> = sites.iter().map(|s| s.point).collect();
    let simplex = match spanning_tetrahedron(&pts3) {
        Ok(s) => s,
        Err(dim) => {
            return Err(Error::Degenerate(format!(
                "sites span only {dim} dimensions, need 3"
            )));
        }
    };
    let lifted: Vec<[f64; 4]> = sites
        .iter()
        .map(|s| {
            [
                s.point[0],
                s.point[1],
                s.point[2],
                dot3(&s.point, &s.point) - s.weight,
            ]
        })
        .collect();
    let base = centroid(&pts3, &simplex);
    let base_height: f64 = simplex.iter().map(|&i| lifted[i][3]).sum::<f64>() / 4.0;
    let spread = lifted
        .iter()
        .map(|p| (p[3] - base_height).abs())
        .fold(1.0, f64::max);
    let interior = [base[0], base[1], base[2], base_height + spread];

    let seed = [simplex[0], simplex[1], simplex[2], simplex[3], INF];
    let facets = incremental_hull(&lifted, &seed, interior);

    let mut tetrahedra = Vec::new();
    let mut hull_facets = Vec::new();
    for f in facets {
        if let Some(pos) = f.verts.iter().position(|&v| v == INF) {
            let tri: Vec<usize> = f
                .verts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != pos)
                .map(|(_, &v)| v)
                .collect();
            hull_facets.push(outward(&pts3, [tri[0], tri[1], tri[2]], &base));
        } else {
            let mut t = f.verts;
            if signed_volume(&pts3[t[0]], &pts3[t[1]], &pts3[t[2]], &pts3[t[3]]) < 0.0 {
                t.swap(2, 3);
            }
            tetrahedra.push(t);
        }
    }
    Ok(Triangulation {
        vertices: sites.to_vec(),
        tetrahedra,
        hull_facets,
    })
}

impl Triangulation {
    fn point(&self, i: usize) -> &Point3 {
        &self.vertices[i].point
    }

    pub fn tetrahedron_volume(&self, t: &[usize; 4]) -> f64 {
        signed_volume(
            self.point(t[0]),
            self.point(t[1]),
            self.point(t[2]),
            self.point(t[3]),
        )
    }

    pub fn total_volume(&self) -> f64 {
        self.tetrahedra
            .iter()
            .map(|t| self.tetrahedron_volume(t))
            .sum()
    }

    pub fn hull_volume(&self) -> f64 {
        let pts: Vec<Point3> = self.vertices.iter().map(|s| s.point).collect();
        hull_volume(&pts, &self.hull_facets)
    }

    /// Sites that appear in at least one tetrahedron.
    pub fn used_vertices(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self.tetrahedra.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        used
    }

    /// Center `z` and power `W` of the sphere orthogonal to the four weighted
    /// vertices: `|p_i - z|^2 - w_i = W` for each of them.
    pub fn power_sphere(&self, t: &[usize; 4]) -> Result<(Point3, f64)> {
        let a = &self.vertices[t[0]];
        let mut m = [[0.0; 3]; 3];
        let mut rhs = [0.0; 3];
        for (k, &i) in t[1..].iter().enumerate() {
            let b = &self.vertices[i];
            let d = sub(&b.point, &a.point);
            m[k] = [2.0 * d[0], 2.0 * d[1], 2.0 * d[2]];
            rhs[k] = dot3(&b.point, &b.point) - b.weight - dot3(&a.point, &a.point) + a.weight;
        }
        let dm = det(m);
        if dm.abs() < 1e-300 {
            return Err(Error::Degenerate("flat tetrahedron".into()));
        }
        let mut z = [0.0; 3];
        for (col, slot) in z.iter_mut().enumerate() {
            let mut mc = m;
            for row in 0..3 {
                mc[row][col] = rhs[row];
            }
            *slot = det(mc) / dm;
        }
        Ok((z, laguerre_distance(&z, a)))
    }

    /// Smallest power, relative to the orthogonal sphere of a tetrahedron, of
    /// any site outside that tetrahedron; negative values signal a violation.
    pub fn min_sphere_clearance(&self) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for t in &self.tetrahedra {
            let (z, power) = self.power_sphere(t)?;
            for (i, s) in self.vertices.iter().enumerate() {
                if t.contains(&i) {
                    continue;
                }
                worst = worst.min(laguerre_distance(&z, s) - power);
            }
        }
        Ok(worst)
    }

    /// Unique edges of all tetrahedra, each as an ordered pair.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut edges: Vec<[usize; 2]> = self
            .tetrahedra
            .iter()
            .flat_map(|t| {
                let mut e = Vec::with_capacity(6);
                for i in 0..4 {
                    for j in i + 1..4 {
                        e.push([t[i].min(t[j]), t[i].max(t[j])]);
                    }
                }
                e
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges(),
            "tetrahedra": self.tetrahedra,
            "hull_facets": self.hull_facets,
        })
    }

    /// Hull surface as an OFF mesh.
    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} 0", self.vertices.len(), self.hull_facets.len());
        for v in &self.vertices {
            let _ = writeln!(out, "{} {} {}", v.point[0], v.point[1], v.point[2]);
        }
        for f in &self.hull_facets {
            let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
        }
        out
    }
}
