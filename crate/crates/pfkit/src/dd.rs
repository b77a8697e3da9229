//! Double description method on polyhedral cones over exact rationals.
//!
//! The single entry point enumerates the extreme rays and the lineality space
//! of a cone `{y : H y >= 0, E y = 0}`. Both vertex enumeration and facet
//! enumeration of bounded polytopes reduce to this after homogenization.

use crate::bitset::BitSet;
use crate::linalg::{QMatrix, QVector};
use crate::num::Rational;
use crate::Error;

pub struct ConeRays {
    /// Extreme rays of the pointed part, canonically scaled and sorted.
    pub rays: Vec<QVector>,
    /// Basis of the lineality space, empty iff the cone is pointed.
    pub lineality: Vec<QVector>,
}

/// Extreme rays of `{y in R^ambient : h . y >= 0 for h in ineqs, e . y = 0 for e in eqs}`.
///
/// The cone is split as `L + (C ∩ L⊥)` with `L` the lineality space; rays of
/// the pointed part are returned together with a basis of `L`. `max_rays`
/// bounds the intermediate ray count.
pub fn cone_extreme_rays(
    ineqs: &[QVector],
    eqs: &[QVector],
    ambient: usize,
    max_rays: usize,
) -> Result<ConeRays, Error> {
    for v in ineqs.iter().chain(eqs) {
        assert_eq!(v.dim(), ambient, "constraint dimension mismatch");
    }

    // Lineality: everything annihilated by every constraint.
    let mut all_rows: Vec<QVector> = ineqs.to_vec();
    all_rows.extend(eqs.iter().cloned());
    let lineality = QMatrix::new(all_rows, ambient).null_space();

    // Working subspace W = null(eqs) ∩ lineality⊥; the cone restricted to W is pointed.
    let mut w_rows: Vec<QVector> = eqs.to_vec();
    w_rows.extend(lineality.iter().cloned());
    let basis = QMatrix::new(w_rows, ambient).null_space();
    if basis.is_empty() {
        return Ok(ConeRays {
            rays: Vec::new(),
            lineality,
        });
    }
    let dim = basis.len();

    // Express each inequality in W coordinates; drop rows that vanish there
    // (they hold identically on the cone), normalize, sort, dedup.
    let mut reduced: Vec<QVector> = ineqs
        .iter()
        .map(|h| QVector::new(basis.iter().map(|b| h.dot(b)).collect()))
        .filter(|r| !r.is_zero())
        .map(canonical_ray_scale)
        .collect();
    reduced.sort();
    reduced.dedup();

    let rays_reduced = pointed_extreme_rays(&reduced, dim, max_rays)?;
    let mut rays: Vec<QVector> = rays_reduced
        .iter()
        .map(|z| {
            let mut y = QVector::zeros(ambient);
            for (coef, b) in z.iter().zip(&basis) {
                if !coef.is_zero() {
                    y = y.add(&b.scale(coef));
                }
            }
            canonical_ray_scale(y)
        })
        .collect();
    rays.sort();
    Ok(ConeRays { rays, lineality })
}

/// Scale a ray by a positive constant so its first nonzero entry is ±1.
fn canonical_ray_scale(v: QVector) -> QVector {
    match v.first_nonzero() {
        Some(i) => {
            let s = v[i].abs().recip();
            v.scale(&s)
        }
        None => v,
    }
}

struct Ray {
    vec: QVector,
    /// Rows (among those processed so far) satisfied with equality.
    tight: BitSet,
}

/// Double description on a pointed cone `{z : rows . z >= 0}` with
/// `rank(rows) = dim`. Rows must be deduplicated; insertion order is the
/// given row order.
fn pointed_extreme_rays(
    rows: &[QVector],
    dim: usize,
    max_rays: usize,
) -> Result<Vec<QVector>, Error> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    let m = rows.len();

    // Initial simplicial cone from the first `dim` independent rows.
    let mut basis_rows: Vec<usize> = Vec::with_capacity(dim);
    {
        let mut picked: Vec<QVector> = Vec::with_capacity(dim);
        for (i, row) in rows.iter().enumerate() {
            let mut candidate = picked.clone();
            candidate.push(row.clone());
            if QMatrix::new(candidate, dim).rank() > picked.len() {
                picked.push(row.clone());
                basis_rows.push(i);
                if picked.len() == dim {
                    break;
                }
            }
        }
        assert_eq!(basis_rows.len(), dim, "cone is not pointed");
    }

    // Rays of the initial cone are the columns of the inverse basis matrix.
    let inverse = invert(&QMatrix::new(
        basis_rows.iter().map(|&i| rows[i].clone()).collect(),
        dim,
    ));
    let mut processed = BitSet::from_indices(m, &basis_rows);
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col = QVector::new((0..dim).map(|i| inverse.row(i)[j].clone()).collect());
            let vec = canonical_ray_scale(col);
            let tight = tight_set(&vec, rows, &processed);
            Ray { vec, tight }
        })
        .collect();

    for h in 0..m {
        if processed.contains(h) {
            continue;
        }
        let row = &rows[h];
        let vals: Vec<Rational> = rays.iter().map(|r| row.dot(&r.vec)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        processed.insert(h);

        let mut new_rays: Vec<Ray> = Vec::new();
        if !neg.is_empty() {
            for &p in &pos {
                for &n in &neg {
                    let common = rays[p].tight.intersect(&rays[n].tight);
                    // A 2-face carries at least dim - 2 tight rows.
                    if common.count() + 2 < dim || !adjacent(&rays, p, n, &common) {
                        continue;
                    }
                    // vals[p] > 0, -vals[n] > 0: a positive combination tight at h.
                    let vec = canonical_ray_scale(
                        rays[n]
                            .vec
                            .scale(&vals[p])
                            .sub(&rays[p].vec.scale(&vals[n])),
                    );
                    let tight = tight_set(&vec, rows, &processed);
                    new_rays.push(Ray { vec, tight });
                }
            }
        }

        // Surviving rays keep their tight sets, gaining h when on the hyperplane.
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut ray) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                ray.tight.insert(h);
            }
            kept.push(ray);
        }
        kept.extend(new_rays);
        rays = kept;
        if rays.len() > max_rays {
            return Err(Error::RayCapExceeded(max_rays));
        }
    }

    Ok(rays.into_iter().map(|r| r.vec).collect())
}

fn tight_set(vec: &QVector, rows: &[QVector], processed: &BitSet) -> BitSet {
    let mut t = BitSet::new(rows.len());
    for i in processed.iter_ones() {
        if rows[i].dot(vec).is_zero() {
            t.insert(i);
        }
    }
    t
}

/// Combinatorial adjacency test: rays p and n are adjacent iff no other
/// current extreme ray is tight on every row both are tight on.
fn adjacent(rays: &[Ray], p: usize, n: usize, common: &BitSet) -> bool {
    rays.iter()
        .enumerate()
        .all(|(i, r)| i == p || i == n || !common.is_subset(&r.tight))
}

fn invert(m: &QMatrix) -> QMatrix {
    let n = m.row_count();
    assert_eq!(n, m.col_count());
    let aug_rows: Vec<QVector> = (0..n)
        .map(|i| {
            let mut e = m.row(i).entries().to_vec();
            e.extend(QVector::unit(n, i).entries().iter().cloned());
            QVector::new(e)
        })
        .collect();
    let r = QMatrix::new(aug_rows, 2 * n).rref();
    assert_eq!(r.rank, n, "matrix not invertible");
    QMatrix::new(
        (0..n)
            .map(|i| QVector::new(r.reduced.row(i).entries()[n..].to_vec()))
            .collect(),
        n,
    )
}
