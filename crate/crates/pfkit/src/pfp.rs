//! The projected-faces property and affinely generated polyhedral relations.
//!
//! A pair `(P, coords)` has the PF-property when every face of `P` projects
//! onto a face of the projection. `check_pf` decides this directly over the
//! face lattice; `check_pf_oracle` decides it independently by enumerating
//! every vertex subset `S` of the projection and comparing
//! `conv{v in vert(P) : p(v) in S}` with `P ∩ p⁻¹(conv S)`. When the property
//! fails, a Radon partition of suitably chosen projection points yields an
//! explicit subset `S` violating the subset characterization.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::caps;
use crate::linalg::{
    affine_dependence, affinely_independent_spanning_subset, solve_particular, QMatrix, QVector,
};
use crate::num::Rational;
use crate::polytope::{equal, Face, Polytope};
use crate::{Error, Result};

/// Outcome of a PF check. `witness_face` is present exactly when the property
/// fails and is then an inclusion-maximal failing face.
#[derive(Clone, Debug)]
pub struct PfReport {
    pub holds: bool,
    pub witness_face: Option<Face>,
    pub checked_faces: usize,
}

/// Decide the PF-property for `(p, coords)`.
///
/// Faces are visited in order of decreasing dimension (ties broken by vertex
/// index list), short-circuiting on the first failure, so a reported witness
/// is inclusion-maximal among failing faces.
pub fn check_pf(p: &Polytope, coords: &[usize]) -> Result<PfReport> {
    let proj = p.project(coords)?;
    let ctx = ProjectionContext::new(p, coords, &proj);

    let faces = p.faces();
    let dims = p.face_dims();
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| {
        dims[b]
            .cmp(&dims[a])
            .then_with(|| faces[a].vertex_indices.cmp(&faces[b].vertex_indices))
    });

    let mut checked = 0;
    for idx in order {
        checked += 1;
        if !ctx.face_projects_to_face(&faces[idx]) {
            return Ok(PfReport {
                holds: false,
                witness_face: Some(faces[idx].clone()),
                checked_faces: checked,
            });
        }
    }
    Ok(PfReport {
        holds: true,
        witness_face: None,
        checked_faces: checked,
    })
}

/// Per-instance tables shared by every face test: where each vertex of `p`
/// projects, and which projection facets are tight there.
struct ProjectionContext<'a> {
    proj: &'a Polytope,
    /// Index of each projected vertex within the projection's vertex list,
    /// when the projection is itself a vertex.
    proj_vertex_of: Vec<Option<usize>>,
    /// Projection facets tight at each projected vertex (whether or not the
    /// image is extreme).
    tight_at: Vec<BitSet>,
}

impl<'a> ProjectionContext<'a> {
    fn new(p: &Polytope, coords: &[usize], proj: &'a Polytope) -> Self {
        let nf = proj.facet_count();
        let mut proj_vertex_of = Vec::with_capacity(p.vertex_count());
        let mut tight_at = Vec::with_capacity(p.vertex_count());
        for v in p.vertices() {
            let image = v.select(coords);
            proj_vertex_of.push(proj.vertex_index(&image));
            let mut tight = BitSet::new(nf);
            for (j, c) in proj.hrep().inequalities.iter().enumerate() {
                if c.satisfied_eq(&image) {
                    tight.insert(j);
                }
            }
            tight_at.push(tight);
        }
        ProjectionContext {
            proj,
            proj_vertex_of,
            tight_at,
        }
    }

    /// conv of the projected vertices of `face` equals the smallest face of
    /// the projection containing them iff every vertex of that smallest face
    /// is itself one of the projected points. (Vertices of the candidate face
    /// are extreme in the whole projection, so they lie in the convex hull of
    /// the projected points only by membership.)
    fn face_projects_to_face(&self, face: &Face) -> bool {
        let nf = self.proj.facet_count();
        let mut tight = BitSet::full(nf);
        for &vi in &face.vertex_indices {
            tight.intersect_in_place(&self.tight_at[vi]);
        }
        let mut candidate = BitSet::full(self.proj.vertex_count());
        for j in tight.iter_ones() {
            candidate.intersect_in_place(self.proj.facet_vertex_set(j));
        }
        let image: BTreeSet<usize> = face
            .vertex_indices
            .iter()
            .filter_map(|&vi| self.proj_vertex_of[vi])
            .collect();
        let ok = candidate.iter_ones().all(|g| image.contains(&g));
        ok
    }
}

/// Subset-enumeration oracle for the PF-property: true iff for every subset S
/// of projection vertices, the vertices of `P ∩ p⁻¹(conv S)` are exactly the
/// vertices of `P` projecting into `S`.
pub fn check_pf_oracle(p: &Polytope, coords: &[usize]) -> Result<bool> {
    let cap = caps::get().oracle_vertices;
    let proj = p.project(coords)?;
    let k = proj.vertex_count();
    if k > cap {
        return Err(Error::OracleCapExceeded(k, cap));
    }
    let images: Vec<Option<usize>> = p
        .vertices()
        .iter()
        .map(|v| proj.vertex_index(&v.select(coords)))
        .collect();

    for mask in 1u64..(1u64 << k) {
        let s: Vec<QVector> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| proj.vertices()[i].clone())
            .collect();
        let lhs: BTreeSet<&QVector> = p
            .vertices()
            .iter()
            .zip(&images)
            .filter(|(_, img)| img.is_some_and(|i| mask >> i & 1 == 1))
            .map(|(v, _)| v)
            .collect();
        let rhs = p.intersect_preimage(coords, &s)?;
        // rhs always contains conv(lhs); equality holds iff every rhs vertex
        // is one of the lhs points.
        if !rhs.vertices().iter().all(|v| lhs.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A subset `S` of projection vertices violating the subset characterization,
/// produced from a Radon partition: `u` lies in `conv(s) ∩ conv(w1)` with `s`
/// and `w1` disjoint.
#[derive(Clone, Debug)]
pub struct RadonCertificate {
    pub s: Vec<QVector>,
    pub u: QVector,
    pub w1: Vec<QVector>,
}

/// Build a counterexample certificate from a failing face.
///
/// The witness is first ascended to an inclusion-maximal failing face F; the
/// projection of F then spans the projection's affine hull, an affinely
/// independent spanning subset W of its vertices is completed with the
/// lexicographically smallest projection vertex w outside, and the unique
/// affine dependence of W ∪ {w} yields the Radon partition (W₁, W₂ ∋ w) and
/// the common point u. When some vertex of `p` projects to a non-vertex and
/// the partition would leave the projection's vertex set, the certificate
/// falls back to S = all projection vertices with u the offending image.
pub fn radon_certificate(
    p: &Polytope,
    coords: &[usize],
    witness: &Face,
) -> Result<RadonCertificate> {
    let proj = p.project(coords)?;

    // Ascend to an inclusion-maximal failing face.
    let ctx_proj = proj.clone();
    let ctx = ProjectionContext::new(p, coords, &ctx_proj);
    let faces = p.faces();
    if !faces.iter().any(|f| f == witness) {
        return Err(Error::InvalidComposition("witness is not a face".into()));
    }
    let failing: Vec<&Face> = faces
        .iter()
        .filter(|f| !ctx.face_projects_to_face(f))
        .collect();
    if failing.is_empty() {
        return Err(Error::PfHolds);
    }
    let witness_verts: BTreeSet<usize> = witness.vertex_indices.iter().copied().collect();
    let mut containing: Vec<&&Face> = failing
        .iter()
        .filter(|f| witness_verts.iter().all(|v| f.vertex_indices.contains(v)))
        .collect();
    if containing.is_empty() {
        return Err(Error::InvalidComposition(
            "witness face does not fail the projection test".into(),
        ));
    }
    containing.sort_by(|a, b| {
        p.face_dim(a)
            .cmp(&p.face_dim(b))
            .reverse()
            .then_with(|| a.vertex_indices.cmp(&b.vertex_indices))
    });
    let maximal = *containing[0];

    // Projected vertex points of the maximal face, deduplicated and sorted.
    let mut projected: Vec<QVector> = maximal
        .vertex_indices
        .iter()
        .map(|&i| p.vertices()[i].select(coords))
        .collect();
    projected.sort();
    projected.dedup();

    let k = proj.dim();
    if crate::linalg::affine_dim(&projected) != k {
        // The maximal-face derivation guarantees this never fires; kept as a
        // checked error rather than an assert.
        return Err(Error::DegenerateWitness);
    }

    // W: affinely independent spanning subset, scanned in lexicographic order.
    let span_idx = affinely_independent_spanning_subset(&projected);
    let w_points: Vec<QVector> = span_idx.iter().map(|&i| projected[i].clone()).collect();
    debug_assert_eq!(w_points.len(), k + 1);

    // w: lexicographically smallest projection vertex not among the projected
    // points of F (extreme points lie in conv(projected) only by membership).
    let w_extra = proj
        .vertices()
        .iter()
        .find(|v| projected.binary_search(v).is_err());
    let Some(w_extra) = w_extra else {
        return Err(Error::InvalidComposition(
            "failing face projects onto every projection vertex".into(),
        ));
    };

    let mut points = w_points.clone();
    points.push(w_extra.clone());
    let mut lambda = affine_dependence(&points)?;
    // Orient so the extra vertex lands in W₂ (λ_w < 0): the dependence is
    // unique up to scale and λ_w ≠ 0 since W is affinely independent.
    let last = points.len() - 1;
    debug_assert!(!lambda[last].is_zero());
    if lambda[last].is_positive() {
        lambda = lambda.scale(&Rational::from_int(-1));
    }

    let mut w1 = Vec::new();
    let mut w2 = Vec::new();
    let mut pos_sum = Rational::zero();
    let mut u = QVector::zeros(coords.len());
    for (i, pt) in points.iter().enumerate() {
        if lambda[i].is_positive() {
            pos_sum += &lambda[i];
            u = u.add(&pt.scale(&lambda[i]));
            w1.push(pt.clone());
        } else if lambda[i].is_negative() {
            w2.push(pt.clone());
        }
    }
    let u = u.scale(&pos_sum.recip());

    // The subset S must consist of projection vertices; if the partition
    // includes a non-vertex (possible only when some vertex of p projects to
    // a non-vertex), certify with S = vert(projection) instead.
    if w2.iter().all(|q| proj.vertex_index(q).is_some()) {
        return Ok(RadonCertificate { s: w2, u, w1 });
    }
    let bad = p
        .vertices()
        .iter()
        .map(|v| v.select(coords))
        .find(|img| proj.vertex_index(img).is_none())
        .expect("a non-vertex image exists on this path");
    Ok(RadonCertificate {
        s: proj.vertices().to_vec(),
        u: bad.clone(),
        w1: vec![bad],
    })
}

/// An affine map x ↦ Lx + t from the projection space into the fiber space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: QMatrix,
    pub offset: QVector,
}

impl AffineMap {
    pub fn eval(&self, x: &QVector) -> QVector {
        self.linear.mul_vec(x).add(&self.offset)
    }
}

/// The maps ρ₁, …, ρ_t exhibiting `p` as an affinely generated polyhedral
/// relation: every fiber over the projection is conv{(x, ρ_j(x))}.
#[derive(Clone, Debug)]
pub struct AffineGeneratorSet {
    pub maps: Vec<AffineMap>,
    pub n: usize,
    pub d: usize,
}

/// Extract the generator maps of a PF pair: one per face of `p` that projects
/// affinely isomorphically onto the whole projection. Maps agreeing on the
/// projection's affine hull are deduplicated.
pub fn affine_generators(p: &Polytope, coords: &[usize]) -> Result<AffineGeneratorSet> {
    let report = check_pf(p, coords)?;
    if !report.holds {
        return Err(Error::PfFails(Box::new(report)));
    }
    let proj = p.project(coords)?;
    let k = proj.dim();
    let n = coords.len();
    let other: Vec<usize> = (0..p.ambient_dim())
        .filter(|i| !coords.contains(i))
        .collect();
    let d = other.len();

    // Affine basis of the projection, fixed across faces so map agreement on
    // the affine hull is literal equality of interpolated values.
    let basis_idx = affinely_independent_spanning_subset(proj.vertices());
    let basis: Vec<QVector> = basis_idx
        .iter()
        .map(|&i| proj.vertices()[i].clone())
        .collect();
    debug_assert_eq!(basis.len(), k + 1);

    let mut maps: Vec<AffineMap> = Vec::new();
    let mut seen_values: Vec<Vec<QVector>> = Vec::new();
    for (face_idx, face) in p.faces().iter().enumerate() {
        if p.face_dims()[face_idx] != k {
            continue;
        }
        // The face must project onto the whole projection: every projection
        // vertex is the image of one of its vertices.
        let images: Vec<QVector> = face
            .vertex_indices
            .iter()
            .map(|&i| p.vertices()[i].select(coords))
            .collect();
        if !proj.vertices().iter().all(|v| images.contains(v)) {
            continue;
        }
        // For each basis point, its unique preimage vertex in the face.
        let mut values = Vec::with_capacity(basis.len());
        let mut ok = true;
        for b in &basis {
            let mut fiber_points = face
                .vertex_indices
                .iter()
                .filter(|&&i| &p.vertices()[i].select(coords) == b)
                .map(|&i| p.vertices()[i].select(&other));
            match fiber_points.next() {
                Some(y) => {
                    if fiber_points.next().is_some() {
                        ok = false; // projection not injective on the face
                    }
                    values.push(y);
                }
                None => ok = false,
            }
            if !ok {
                break;
            }
        }
        if !ok {
            continue;
        }
        if seen_values.contains(&values) {
            continue;
        }
        maps.push(interpolate_affine_map(&basis, &values, n, d));
        seen_values.push(values);
    }
    Ok(AffineGeneratorSet { maps, n, d })
}

/// Affine map through the given (basis point, value) pairs; free directions
/// off the affine hull take the rref particular solution.
fn interpolate_affine_map(basis: &[QVector], values: &[QVector], n: usize, d: usize) -> AffineMap {
    let rows: Vec<QVector> = basis
        .iter()
        .map(|x| {
            let mut e = x.entries().to_vec();
            e.push(Rational::one());
            QVector::new(e)
        })
        .collect();
    let a = QMatrix::new(rows, n + 1);
    let mut linear_rows = Vec::with_capacity(d);
    let mut offset = Vec::with_capacity(d);
    for out in 0..d {
        let b = QVector::new(values.iter().map(|y| y[out].clone()).collect());
        let sol = solve_particular(&a, &b).expect("interpolation system is consistent");
        linear_rows.push(QVector::new(sol.entries()[..n].to_vec()));
        offset.push(sol[n].clone());
    }
    AffineMap {
        linear: QMatrix::new(linear_rows, n),
        offset: QVector::new(offset),
    }
}

/// Result of verifying a generator set against a polytope; `ok` is the
/// verdict and `failure` locates the first violated condition.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub ok: bool,
    pub failure: Option<String>,
}

impl RelationReport {
    fn fail(msg: String) -> Self {
        RelationReport {
            ok: false,
            failure: Some(msg),
        }
    }
    fn pass() -> Self {
        RelationReport {
            ok: true,
            failure: None,
        }
    }
}

/// Verify that `gens` affinely generates `p` over `coords`: fibers over every
/// projection vertex match, every generated point lies in `p`, the PF
/// property holds with every isomorphic face represented, and the fiber
/// identity spot-checks at the barycenter of every face of the projection.
pub fn verify_relation(
    p: &Polytope,
    coords: &[usize],
    gens: &AffineGeneratorSet,
) -> Result<RelationReport> {
    if gens.n != coords.len() || gens.d != p.ambient_dim() - coords.len() {
        return Ok(RelationReport::fail("generator dimensions mismatch".into()));
    }
    let proj = p.project(coords)?;
    let other: Vec<usize> = (0..p.ambient_dim())
        .filter(|i| !coords.contains(i))
        .collect();

    // (ii) every generated point lies in p.
    for (j, map) in gens.maps.iter().enumerate() {
        for x in proj.vertices() {
            let point = assemble_point(x, &map.eval(x), coords, &other, p.ambient_dim());
            if !p.contains(&point) {
                return Ok(RelationReport::fail(format!(
                    "map {j} leaves the polytope at projection vertex {x:?}"
                )));
            }
        }
    }

    // (i) fibers over projection vertices.
    for x in proj.vertices() {
        if !fiber_matches(p, coords, &other, gens, x)? {
            return Ok(RelationReport::fail(format!(
                "fiber mismatch at projection vertex {x:?}"
            )));
        }
    }

    // (iii) PF holds and every isomorphic face is represented among gens.
    let report = check_pf(p, coords)?;
    if !report.holds {
        return Ok(RelationReport::fail("PF-property fails".into()));
    }
    let expected = affine_generators(p, coords)?;
    for (j, map) in expected.maps.iter().enumerate() {
        let represented = gens
            .maps
            .iter()
            .any(|g| proj.vertices().iter().all(|x| g.eval(x) == map.eval(x)));
        if !represented {
            return Ok(RelationReport::fail(format!(
                "isomorphic face {j} is not represented by any generator"
            )));
        }
    }

    // Spot-check the fiber identity at the barycenter of every projection face.
    for face in proj.faces() {
        let count = Rational::from_int(face.vertex_indices.len() as i64);
        let mut bc = QVector::zeros(coords.len());
        for &i in &face.vertex_indices {
            bc = bc.add(&proj.vertices()[i]);
        }
        let bc = bc.scale(&count.recip());
        if !fiber_matches(p, coords, &other, gens, &bc)? {
            return Ok(RelationReport::fail(format!(
                "fiber mismatch at barycenter {bc:?}"
            )));
        }
    }
    Ok(RelationReport::pass())
}

fn fiber_matches(
    p: &Polytope,
    coords: &[usize],
    other: &[usize],
    gens: &AffineGeneratorSet,
    x: &QVector,
) -> Result<bool> {
    if gens.maps.is_empty() {
        return Ok(false);
    }
    let fiber = p.fiber(coords, x)?;
    let generated: Vec<QVector> = gens
        .maps
        .iter()
        .map(|m| assemble_point(x, &m.eval(x), coords, other, p.ambient_dim()))
        .collect();
    let hulled = Polytope::from_points(generated)?;
    equal(&fiber, &hulled)
}

fn assemble_point(
    x: &QVector,
    y: &QVector,
    coords: &[usize],
    other: &[usize],
    ambient: usize,
) -> QVector {
    let mut point = QVector::zeros(ambient);
    for (k, &c) in coords.iter().enumerate() {
        point.set(c, x[k].clone());
    }
    for (k, &c) in other.iter().enumerate() {
        point.set(c, y[k].clone());
    }
    point
}

/// Facet counts of the polytope and of its projection; for a PF pair the
/// projection never has more facets.
pub fn facet_count_observation(p: &Polytope, coords: &[usize]) -> Result<(usize, usize)> {
    let report = check_pf(p, coords)?;
    if !report.holds {
        return Err(Error::PfFails(Box::new(report)));
    }
    let proj = p.project(coords)?;
    Ok((p.facet_count(), proj.facet_count()))
}
