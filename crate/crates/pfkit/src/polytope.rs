//! Bounded polytopes with paired representations.
//!
//! A `Polytope` always carries the canonical H-representation (irredundant
//! facet inequalities plus an rref equation basis of the affine hull), the
//! canonical V-representation (lexicographically sorted vertices), and the
//! vertex-facet incidence. Conversion in both directions goes through the
//! double description cone engine; redundancy removal is the round trip
//! itself, never linear programming.

use std::sync::{Arc, OnceLock};

use crate::bitset::BitSet;
use crate::caps;
use crate::dd::cone_extreme_rays;
use crate::linalg::{canonicalize_equations, LinearConstraint, QVector};
use crate::num::Rational;
use crate::{Error, Result};

/// Inequality system `normal . z <= rhs` per row, plus equations `normal . z = rhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HRep {
    pub inequalities: Vec<LinearConstraint>,
    pub equations: Vec<LinearConstraint>,
    pub ambient_dim: usize,
}

impl HRep {
    pub fn new(
        inequalities: Vec<LinearConstraint>,
        equations: Vec<LinearConstraint>,
        ambient_dim: usize,
    ) -> Self {
        for c in inequalities.iter().chain(&equations) {
            assert_eq!(c.normal.dim(), ambient_dim, "constraint dimension mismatch");
        }
        HRep {
            inequalities,
            equations,
            ambient_dim,
        }
    }

    pub fn contains(&self, point: &QVector) -> bool {
        self.inequalities.iter().all(|c| c.satisfied_le(point))
            && self.equations.iter().all(|c| c.satisfied_eq(point))
    }
}

/// Point list; canonical form holds exactly the vertices, sorted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VRep {
    pub points: Vec<QVector>,
    pub ambient_dim: usize,
}

impl VRep {
    pub fn new(points: Vec<QVector>, ambient_dim: usize) -> Self {
        for p in &points {
            assert_eq!(p.dim(), ambient_dim, "point dimension mismatch");
        }
        VRep {
            points,
            ambient_dim,
        }
    }
}

/// A face identified by its tight facet set and its vertex set; the two index
/// sets are closed under the incidence Galois connection and the vertex set is
/// never empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Face {
    pub facet_indices: Vec<usize>,
    pub vertex_indices: Vec<usize>,
}

#[derive(Debug)]
pub struct Polytope {
    hrep: HRep,
    vrep: VRep,
    /// incidence[i] = facets tight at vertex i.
    vertex_facets: Vec<BitSet>,
    /// facet_vertices[j] = vertices on facet j.
    facet_vertices: Vec<BitSet>,
    dim: usize,
    /// Face lattice with dimensions, computed on first use.
    face_cache: OnceLock<Arc<FaceData>>,
}

#[derive(Debug)]
struct FaceData {
    faces: Vec<Face>,
    dims: Vec<usize>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        let face_cache = OnceLock::new();
        if let Some(data) = self.face_cache.get() {
            let _ = face_cache.set(data.clone());
        }
        Polytope {
            hrep: self.hrep.clone(),
            vrep: self.vrep.clone(),
            vertex_facets: self.vertex_facets.clone(),
            facet_vertices: self.facet_vertices.clone(),
            dim: self.dim,
            face_cache,
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.vrep == other.vrep
    }
}
impl Eq for Polytope {}

/// Vertex enumeration: canonical V-representation of a bounded H-system.
/// An empty polytope yields zero points; an unbounded system is an error.
pub fn dd(h: &HRep) -> Result<VRep> {
    let caps = caps::get();
    let n = h.ambient_dim;

    // Homogenize: y = (t, x); t >= 0, b t - a.x >= 0, d t - c.x = 0.
    let mut ineq_rows = Vec::with_capacity(h.inequalities.len() + 1);
    ineq_rows.push(QVector::unit(n + 1, 0));
    for c in &h.inequalities {
        ineq_rows.push(homogenize(c));
    }
    let eq_rows: Vec<QVector> = h.equations.iter().map(homogenize).collect();

    let cone = cone_extreme_rays(&ineq_rows, &eq_rows, n + 1, caps.max_rays)?;

    let mut points = Vec::new();
    let mut has_recession_ray = !cone.lineality.is_empty();
    for ray in &cone.rays {
        let t = &ray[0];
        if t.is_positive() {
            let inv = t.recip();
            points.push(QVector::new(
                ray.entries()[1..].iter().map(|e| e * &inv).collect(),
            ));
        } else {
            debug_assert!(t.is_zero());
            has_recession_ray = true;
        }
    }
    if points.is_empty() {
        // Nothing satisfies t > 0: the polytope is empty, not unbounded.
        return Ok(VRep::new(Vec::new(), n));
    }
    if has_recession_ray {
        return Err(Error::Unbounded);
    }
    if points.len() > caps.max_vertices {
        return Err(Error::VertexCapExceeded(caps.max_vertices));
    }
    points.sort();
    points.dedup();
    Ok(VRep::new(points, n))
}

fn homogenize(c: &LinearConstraint) -> QVector {
    let mut e = Vec::with_capacity(c.normal.dim() + 1);
    e.push(c.rhs.clone());
    for a in c.normal.iter() {
        e.push(-a);
    }
    QVector::new(e)
}

/// Facet enumeration: canonical irredundant H-representation of the convex
/// hull of a nonempty point list. The equation part is the affine hull.
pub fn hull(v: &VRep) -> Result<HRep> {
    if v.points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let caps = caps::get();
    let n = v.ambient_dim;

    // Dual cone of cone{(1, v_i)}: rays are valid inequalities, lineality is
    // the affine hull.
    let rows: Vec<QVector> = v
        .points
        .iter()
        .map(|p| {
            let mut e = Vec::with_capacity(n + 1);
            e.push(Rational::one());
            e.extend(p.entries().iter().cloned());
            QVector::new(e)
        })
        .collect();
    let cone = cone_extreme_rays(&rows, &[], n + 1, caps.max_rays)?;

    let equations: Vec<LinearConstraint> = cone
        .lineality
        .iter()
        .map(|l| LinearConstraint::new(QVector::new(l.entries()[1..].to_vec()), -&l[0]))
        .collect();
    let equations = canonicalize_equations(&equations, n);

    let mut inequalities = Vec::new();
    for ray in &cone.rays {
        // Ray (c0, c) certifies c0 + c.x >= 0, i.e. -c.x <= c0.
        let normal = QVector::new(ray.entries()[1..].iter().map(|e| -e).collect());
        let c = reduce_modulo_equations(LinearConstraint::new(normal, ray[0].clone()), &equations);
        if c.normal.is_zero() {
            // Constant on the affine hull: the trivial inequality, not a facet.
            debug_assert!(!c.rhs.is_negative());
            continue;
        }
        inequalities.push(canonical_inequality_scale(c));
    }
    inequalities.sort();
    inequalities.dedup();
    Ok(HRep::new(inequalities, equations, n))
}

/// Zero out the equation pivot columns of an inequality; the halfspace cut out
/// of the affine hull is unchanged and the representative becomes unique.
fn reduce_modulo_equations(
    mut c: LinearConstraint,
    equations: &[LinearConstraint],
) -> LinearConstraint {
    for eq in equations {
        let pivot = eq
            .normal
            .first_nonzero()
            .expect("canonical equation has a pivot");
        let f = c.normal[pivot].clone();
        if !f.is_zero() {
            c.normal = c.normal.sub(&eq.normal.scale(&f));
            c.rhs = &c.rhs - &(&f * &eq.rhs);
        }
    }
    c
}

/// Scale by the positive constant making the first nonzero coefficient ±1.
fn canonical_inequality_scale(c: LinearConstraint) -> LinearConstraint {
    let i = c.normal.first_nonzero().expect("nonzero normal");
    let s = c.normal[i].abs().recip();
    LinearConstraint::new(c.normal.scale(&s), &c.rhs * &s)
}

impl Polytope {
    /// Build from an H-representation; errors on unbounded or empty input.
    pub fn from_hrep(h: &HRep) -> Result<Polytope> {
        let vrep = dd(h)?;
        if vrep.points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Self::assemble(vrep)
    }

    /// Build from any nonempty point list; non-extreme points are dropped by
    /// the hull/dd round trip.
    pub fn from_points(points: Vec<QVector>) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let n = points[0].dim();
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch);
            }
        }
        Self::assemble(VRep::new(points, n))
    }

    fn assemble(raw: VRep) -> Result<Polytope> {
        let hrep = hull(&raw)?;
        let vrep = dd(&hrep)?;
        debug_assert!(!vrep.points.is_empty());

        let nv = vrep.points.len();
        let nf = hrep.inequalities.len();
        let mut vertex_facets = vec![BitSet::new(nf); nv];
        let mut facet_vertices = vec![BitSet::new(nv); nf];
        for (i, p) in vrep.points.iter().enumerate() {
            debug_assert!(hrep.contains(p));
            for (j, c) in hrep.inequalities.iter().enumerate() {
                if c.satisfied_eq(p) {
                    vertex_facets[i].insert(j);
                    facet_vertices[j].insert(i);
                }
            }
        }
        let dim = hrep.ambient_dim - hrep.equations.len();
        Ok(Polytope {
            hrep,
            vrep,
            vertex_facets,
            facet_vertices,
            dim,
            face_cache: OnceLock::new(),
        })
    }

    pub fn hrep(&self) -> &HRep {
        &self.hrep
    }

    pub fn vrep(&self) -> &VRep {
        &self.vrep
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vrep.points
    }

    pub fn vertex_count(&self) -> usize {
        self.vrep.points.len()
    }

    pub fn facet_count(&self) -> usize {
        self.hrep.inequalities.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.hrep.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, point: &QVector) -> bool {
        self.hrep.contains(point)
    }

    /// Index of a point within the canonical vertex list, if it is a vertex.
    pub fn vertex_index(&self, point: &QVector) -> Option<usize> {
        self.vrep.points.binary_search(point).ok()
    }

    pub fn facet_vertex_set(&self, facet: usize) -> &BitSet {
        &self.facet_vertices[facet]
    }

    pub fn vertex_facet_set(&self, vertex: usize) -> &BitSet {
        &self.vertex_facets[vertex]
    }

    /// True iff vertex i lies on facet j.
    pub fn incident(&self, vertex: usize, facet: usize) -> bool {
        self.vertex_facets[vertex].contains(facet)
    }

    /// All nonempty faces, including the polytope itself and every vertex:
    /// the closure of the facet vertex sets under intersection. Sorted by
    /// vertex index list; computed once and cached.
    pub fn faces(&self) -> &[Face] {
        &self.face_data().faces
    }

    /// Dimension of each face of `faces()`, in the same order.
    pub fn face_dims(&self) -> &[usize] {
        &self.face_data().dims
    }

    fn face_data(&self) -> &FaceData {
        self.face_cache.get_or_init(|| {
            let faces = self.enumerate_faces();
            let dims = faces.iter().map(|f| self.face_dim(f)).collect();
            Arc::new(FaceData { faces, dims })
        })
    }

    fn enumerate_faces(&self) -> Vec<Face> {
        let nv = self.vertex_count();
        let full = BitSet::full(nv);
        let mut seen = vec![full.clone()];
        let mut queue = vec![full];
        let mut out = Vec::new();
        while let Some(w) = queue.pop() {
            out.push(self.face_from_vertex_set(&w));
            for fv in &self.facet_vertices {
                let mut next = w.intersect(fv);
                if next.is_empty() || seen.contains(&next) {
                    continue;
                }
                // Close under the Galois connection so the key is canonical.
                let tight = self.tight_facets_of(&next);
                next = self.vertices_on_all(&tight);
                if !seen.contains(&next) {
                    seen.push(next.clone());
                    queue.push(next);
                }
            }
        }
        out.sort_by(|a, b| a.vertex_indices.cmp(&b.vertex_indices));
        out
    }

    fn tight_facets_of(&self, vertices: &BitSet) -> Vec<usize> {
        (0..self.facet_count())
            .filter(|&j| vertices.is_subset(&self.facet_vertices[j]))
            .collect()
    }

    fn vertices_on_all(&self, facets: &[usize]) -> BitSet {
        let mut v = BitSet::full(self.vertex_count());
        for &j in facets {
            v.intersect_in_place(&self.facet_vertices[j]);
        }
        v
    }

    fn face_from_vertex_set(&self, vertices: &BitSet) -> Face {
        Face {
            facet_indices: self.tight_facets_of(vertices),
            vertex_indices: vertices.to_vec(),
        }
    }

    /// Dimension of a face (affine dimension of its vertex set).
    pub fn face_dim(&self, face: &Face) -> usize {
        let pts: Vec<QVector> = face
            .vertex_indices
            .iter()
            .map(|&i| self.vrep.points[i].clone())
            .collect();
        crate::linalg::affine_dim(&pts)
    }

    /// The inclusion-minimal face containing all given points: close the set
    /// of facets tight at every point. Errors if a point lies outside.
    pub fn smallest_face(&self, pts: &[QVector]) -> Result<Face> {
        for p in pts {
            if p.dim() != self.ambient_dim() {
                return Err(Error::DimensionMismatch);
            }
            if !self.contains(p) {
                return Err(Error::PointNotInPolytope);
            }
        }
        let tight: Vec<usize> = (0..self.facet_count())
            .filter(|&j| {
                pts.iter()
                    .all(|p| self.hrep.inequalities[j].satisfied_eq(p))
            })
            .collect();
        let vertices = self.vertices_on_all(&tight);
        debug_assert!(!vertices.is_empty());
        Ok(self.face_from_vertex_set(&vertices))
    }

    /// Exact projection onto the listed coordinates, computed through the
    /// vertex representation.
    pub fn project(&self, coords: &[usize]) -> Result<Polytope> {
        validate_coords(coords, self.ambient_dim())?;
        let points: Vec<QVector> = self.vrep.points.iter().map(|p| p.select(coords)).collect();
        Polytope::from_points(points)
    }

    /// `P ∩ {z : z_coords = x}`, rebuilt from the augmented system.
    pub fn fiber(&self, coords: &[usize], x: &QVector) -> Result<Polytope> {
        validate_coords(coords, self.ambient_dim())?;
        if x.dim() != coords.len() {
            return Err(Error::DimensionMismatch);
        }
        let mut h = self.hrep.clone();
        for (k, &c) in coords.iter().enumerate() {
            h.equations.push(LinearConstraint::new(
                QVector::unit(self.ambient_dim(), c),
                x[k].clone(),
            ));
        }
        Polytope::from_hrep(&h).map_err(|e| match e {
            Error::EmptyPolytope => Error::EmptyFiber,
            other => other,
        })
    }

    /// Cartesian product with concatenated coordinates.
    pub fn product(&self, other: &Polytope) -> Result<Polytope> {
        let mut points = Vec::with_capacity(self.vertex_count() * other.vertex_count());
        for a in self.vertices() {
            for b in other.vertices() {
                points.push(a.concat(b));
            }
        }
        Polytope::from_points(points)
    }

    /// `P ∩ p⁻¹(conv S)` for a subset `s` of projection vertices: the hull of
    /// `s` is lifted onto `coords` and appended to the H-system.
    pub fn intersect_preimage(&self, coords: &[usize], s: &[QVector]) -> Result<Polytope> {
        validate_coords(coords, self.ambient_dim())?;
        let proj = self.project(coords)?;
        for p in s {
            if proj.vertex_index(p).is_none() {
                return Err(Error::NotProjectionVertices);
            }
        }
        let sub = hull(&VRep::new(s.to_vec(), coords.len()))?;
        let mut h = self.hrep.clone();
        for c in &sub.inequalities {
            h.inequalities
                .push(lift_constraint(c, coords, self.ambient_dim()));
        }
        for c in &sub.equations {
            h.equations
                .push(lift_constraint(c, coords, self.ambient_dim()));
        }
        Polytope::from_hrep(&h)
    }

    /// Rebuild with coordinates reordered as `new[i] = old[perm[i]]`.
    pub fn permute_coords(&self, perm: &[usize]) -> Result<Polytope> {
        if perm.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch);
        }
        validate_coords_as_permutation(perm, self.ambient_dim())?;
        let points: Vec<QVector> = self.vrep.points.iter().map(|p| p.select(perm)).collect();
        // Permuting coordinates preserves vertices and facets; reassemble to
        // restore canonical sort order and equation pivots.
        Polytope::from_points(points)
    }
}

fn lift_constraint(c: &LinearConstraint, coords: &[usize], ambient: usize) -> LinearConstraint {
    let mut normal = QVector::zeros(ambient);
    for (k, &target) in coords.iter().enumerate() {
        normal.set(target, c.normal[k].clone());
    }
    LinearConstraint::new(normal, c.rhs.clone())
}

fn validate_coords(coords: &[usize], ambient: usize) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::CoordOutOfRange);
    }
    for w in coords.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::CoordOutOfRange);
        }
    }
    if *coords.last().unwrap() >= ambient {
        return Err(Error::CoordOutOfRange);
    }
    Ok(())
}

fn validate_coords_as_permutation(perm: &[usize], ambient: usize) -> Result<()> {
    let mut seen = vec![false; ambient];
    for &i in perm {
        if i >= ambient || seen[i] {
            return Err(Error::CoordOutOfRange);
        }
        seen[i] = true;
    }
    Ok(())
}

/// Exact equality: identical canonical vertex lists.
pub fn equal(p1: &Polytope, p2: &Polytope) -> Result<bool> {
    if p1.ambient_dim() != p2.ambient_dim() {
        return Err(Error::DimensionMismatch);
    }
    Ok(p1.vrep == p2.vrep)
}
