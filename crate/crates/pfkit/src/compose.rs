//! Composition of two polytopes through a finite gluing function.
//!
//! Given `P1 ⊆ R^{n1}×R^{d1}`, `P2 ⊆ R^{n2}×R^{d2}` and a finite partial map
//! `f` on pairs of projection vertices, the composed polytope `P` is the hull
//! of the points `(f(α,β), x, y)` over matched vertex pairs. The extended
//! system `Q` concatenates the three describing systems on the coordinate
//! order `(γ, α, x, β, y)`; when both input pairs have the PF-property and
//! every vertex of the gluing polytope `P3` projects onto a vertex of its
//! γ-projection, `Q` projects exactly onto `P` and `(Q, p_{γ,α,β})` has the
//! PF-property again. Composition steps can be chained, re-splitting the
//! composed object between steps.

use crate::linalg::{LinearConstraint, QVector};
use crate::pfp::check_pf;
use crate::polytope::{equal, HRep, Polytope};
use crate::{Error, Result};

/// Finite partial gluing map given extensionally on projection vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTable {
    entries: Vec<((QVector, QVector), QVector)>,
}

impl FTable {
    pub fn new(mut entries: Vec<((QVector, QVector), QVector)>) -> Result<FTable> {
        if entries.is_empty() {
            return Err(Error::EmptyFTable);
        }
        entries.sort();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidComposition(format!(
                    "duplicate f entry for {:?}",
                    w[0].0
                )));
            }
        }
        Ok(FTable { entries })
    }

    /// f(v, v) = v on the common projection vertices of the two inputs.
    pub fn diagonal(p1: &Polytope, n1: usize, p2: &Polytope, n2: usize) -> Result<FTable> {
        if n1 != n2 {
            return Err(Error::InvalidComposition(
                "diagonal gluing needs equal projection dimensions".into(),
            ));
        }
        let alpha_coords: Vec<usize> = (0..n1).collect();
        let proj1 = p1.project(&alpha_coords)?;
        let proj2 = p2.project(&alpha_coords)?;
        let entries: Vec<((QVector, QVector), QVector)> = proj1
            .vertices()
            .iter()
            .filter(|v| proj2.vertex_index(v).is_some())
            .map(|v| ((v.clone(), v.clone()), v.clone()))
            .collect();
        FTable::new(entries)
    }

    pub fn get(&self, alpha: &QVector, beta: &QVector) -> Option<&QVector> {
        self.entries
            .binary_search_by(|(key, _)| key.cmp(&(alpha.clone(), beta.clone())))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn entries(&self) -> &[((QVector, QVector), QVector)] {
        &self.entries
    }
}

/// The triple (P1, P2, f) with its coordinate splits.
#[derive(Clone, Debug)]
pub struct CompositionInput {
    pub p1: Polytope,
    pub n1: usize,
    pub d1: usize,
    pub p2: Polytope,
    pub n2: usize,
    pub d2: usize,
    pub f: FTable,
    pub n: usize,
}

impl CompositionInput {
    pub fn new(
        p1: Polytope,
        n1: usize,
        p2: Polytope,
        n2: usize,
        f: FTable,
        n: usize,
    ) -> Result<CompositionInput> {
        if n1 == 0 || n2 == 0 || n == 0 {
            return Err(Error::InvalidComposition(
                "projection blocks must be nonempty".into(),
            ));
        }
        if p1.ambient_dim() < n1 || p2.ambient_dim() < n2 {
            return Err(Error::InvalidComposition("split exceeds ambient".into()));
        }
        let d1 = p1.ambient_dim() - n1;
        let d2 = p2.ambient_dim() - n2;
        let proj1 = p1.project(&block(0, n1))?;
        let proj2 = p2.project(&block(0, n2))?;
        for ((alpha, beta), gamma) in f.entries() {
            if alpha.dim() != n1 || beta.dim() != n2 || gamma.dim() != n {
                return Err(Error::InvalidComposition("f entry has wrong arity".into()));
            }
            if proj1.vertex_index(alpha).is_none() {
                return Err(Error::InvalidComposition(format!(
                    "α {alpha:?} is not a projection vertex of P1"
                )));
            }
            if proj2.vertex_index(beta).is_none() {
                return Err(Error::InvalidComposition(format!(
                    "β {beta:?} is not a projection vertex of P2"
                )));
            }
        }
        Ok(CompositionInput {
            p1,
            n1,
            d1,
            p2,
            n2,
            d2,
            f,
            n,
        })
    }

    fn q_ambient(&self) -> usize {
        self.n + self.n1 + self.d1 + self.n2 + self.d2
    }

    /// Coordinate blocks of Q in the fixed order (γ, α, x, β, y).
    pub fn gamma_coords(&self) -> Vec<usize> {
        block(0, self.n)
    }
    pub fn alpha_coords(&self) -> Vec<usize> {
        block(self.n, self.n1)
    }
    pub fn x_coords(&self) -> Vec<usize> {
        block(self.n + self.n1, self.d1)
    }
    pub fn beta_coords(&self) -> Vec<usize> {
        block(self.n + self.n1 + self.d1, self.n2)
    }
    pub fn y_coords(&self) -> Vec<usize> {
        block(self.n + self.n1 + self.d1 + self.n2, self.d2)
    }
    pub fn gamma_x_y_coords(&self) -> Vec<usize> {
        let mut c = self.gamma_coords();
        c.extend(self.x_coords());
        c.extend(self.y_coords());
        c
    }
    pub fn gamma_alpha_beta_coords(&self) -> Vec<usize> {
        let mut c = self.gamma_coords();
        c.extend(self.alpha_coords());
        c.extend(self.beta_coords());
        c
    }
}

fn block(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

/// Embed a constraint living on `coords` of a larger space.
fn lift(c: &LinearConstraint, coords: &[usize], ambient: usize) -> LinearConstraint {
    let mut normal = QVector::zeros(ambient);
    for (k, &target) in coords.iter().enumerate() {
        normal.set(target, c.normal[k].clone());
    }
    LinearConstraint::new(normal, c.rhs.clone())
}

fn lift_system(h: &HRep, coords: &[usize], ambient: usize, into: &mut HRep) {
    for c in &h.inequalities {
        into.inequalities.push(lift(c, coords, ambient));
    }
    for c in &h.equations {
        into.equations.push(lift(c, coords, ambient));
    }
}

/// The gluing polytope: hull of the points (f(α,β), α, β).
pub fn build_p3(input: &CompositionInput) -> Result<Polytope> {
    let points: Vec<QVector> = input
        .f
        .entries()
        .iter()
        .map(|((alpha, beta), gamma)| gamma.concat(alpha).concat(beta))
        .collect();
    Polytope::from_points(points)
}

/// The raw concatenated system for Q on (γ, α, x, β, y): P1's system on
/// (α, x), P2's on (β, y), and P3's on (γ, α, β). Row counts add up exactly.
pub fn build_q_system(input: &CompositionInput) -> Result<HRep> {
    let ambient = input.q_ambient();
    let mut h = HRep::new(vec![], vec![], ambient);

    let mut ax = input.alpha_coords();
    ax.extend(input.x_coords());
    lift_system(input.p1.hrep(), &ax, ambient, &mut h);

    let mut by = input.beta_coords();
    by.extend(input.y_coords());
    lift_system(input.p2.hrep(), &by, ambient, &mut h);

    let p3 = build_p3(input)?;
    let mut gab = input.gamma_coords();
    gab.extend(input.alpha_coords());
    gab.extend(input.beta_coords());
    lift_system(p3.hrep(), &gab, ambient, &mut h);
    Ok(h)
}

/// Canonical polytope of the concatenated system.
pub fn build_q(input: &CompositionInput) -> Result<Polytope> {
    Polytope::from_hrep(&build_q_system(input)?)
}

/// Brute-force composed polytope: hull of (f(α,β), x, y) over all vertex
/// pairs of P1 and P2 whose projections are matched by f.
pub fn target_polytope(input: &CompositionInput) -> Result<Polytope> {
    let alpha_sel = block(0, input.n1);
    let x_sel = block(input.n1, input.d1);
    let beta_sel = block(0, input.n2);
    let y_sel = block(input.n2, input.d2);
    let mut points = Vec::new();
    for v1 in input.p1.vertices() {
        let alpha = v1.select(&alpha_sel);
        for v2 in input.p2.vertices() {
            let beta = v2.select(&beta_sel);
            if let Some(gamma) = input.f.get(&alpha, &beta) {
                points.push(gamma.concat(&v1.select(&x_sel)).concat(&v2.select(&y_sel)));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyFTable);
    }
    Polytope::from_points(points)
}

#[derive(Clone, Copy, Debug)]
pub struct Hypotheses {
    pub pf_p1: bool,
    pub pf_p2: bool,
    pub p3_vertex_projection: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.pf_p1 && self.pf_p2 && self.p3_vertex_projection
    }
}

#[derive(Clone, Debug)]
pub struct CompositionReport {
    pub hypotheses: Hypotheses,
    pub conclusion_a: bool,
    pub conclusion_b: bool,
    pub q: Polytope,
    pub p3: Polytope,
    pub p_target: Polytope,
    /// p_{γ,x,y}(Q), the polytope compared against `p_target`.
    pub p_projected: Polytope,
}

/// Check the hypotheses and both conclusions of the composition theorem.
/// Conclusions are computed even when hypotheses fail (the interesting
/// counterexamples live there); if all hypotheses hold and a conclusion
/// fails, that falsifies the theorem and is reported as an internal bug.
pub fn verify_composition(input: &CompositionInput) -> Result<CompositionReport> {
    let pf_p1 = check_pf(&input.p1, &block(0, input.n1))?.holds;
    let pf_p2 = check_pf(&input.p2, &block(0, input.n2))?.holds;

    let p3 = build_p3(input)?;
    let p3_proj = p3.project(&block(0, input.n))?;
    let p3_vertex_projection = p3.vertices().iter().all(|v| {
        p3_proj
            .vertex_index(&v.select(&block(0, input.n)))
            .is_some()
    });

    let hypotheses = Hypotheses {
        pf_p1,
        pf_p2,
        p3_vertex_projection,
    };

    let q = build_q(input)?;
    let p_target = target_polytope(input)?;
    let p_projected = q.project(&input.gamma_x_y_coords())?;
    let conclusion_a = equal(&p_projected, &p_target)?;
    let conclusion_b = check_pf(&q, &input.gamma_alpha_beta_coords())?.holds;

    if hypotheses.all() && !(conclusion_a && conclusion_b) {
        return Err(Error::TheoremViolated(format!(
            "hypotheses hold but conclusion_a = {conclusion_a}, conclusion_b = {conclusion_b}"
        )));
    }
    Ok(CompositionReport {
        hypotheses,
        conclusion_a,
        conclusion_b,
        q,
        p3,
        p_target,
        p_projected,
    })
}

/// One chaining step: optionally reorder the running polytope's coordinates
/// (the glue block must come first), then compose with `p2` through `f`.
#[derive(Clone, Debug)]
pub struct ChainStep {
    /// Permutation of the running polytope's coordinates applied first;
    /// `new[i] = old[reorder[i]]`.
    pub reorder: Option<Vec<usize>>,
    /// Size of the α-block of the (reordered) running polytope.
    pub n1: usize,
    pub p2: Polytope,
    pub n2: usize,
    pub f: FTable,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    /// Canonical polytope of the accumulated extended system.
    pub extension: Polytope,
    /// The accumulated system itself; its inequality count is the size of
    /// the extended formulation.
    pub system: HRep,
    /// The final composed object p_{γ,x,y}(Q).
    pub composed: Polytope,
    /// Extension variable carrying each coordinate of `composed`, in the
    /// composed order (γ, x, y).
    pub composed_coords: Vec<usize>,
    /// Per-step verification reports (empty when verification is off).
    pub reports: Vec<CompositionReport>,
}

/// Run composition steps left to right, accumulating an extended system.
///
/// Each step appends fresh variables for its γ- and (β, y)-blocks, lifts
/// P2's system onto the new variables and P3's system onto (γ, α-carrier, β),
/// and drops P3 inequalities already implied by the rest (checked exactly on
/// the vertices of the remaining system). After a step the running polytope
/// becomes p_{γ,x,y}(Q) with layout: γ at 0..n, then the previous non-α
/// coordinates in order, then the fresh y-block.
pub fn chain(start: &Polytope, steps: &[ChainStep], verify: bool) -> Result<ChainResult> {
    let mut system = start.hrep().clone();
    let mut cur = start.clone();
    let mut cur_coords: Vec<usize> = (0..start.ambient_dim()).collect();
    let mut reports = Vec::new();

    for (step_idx, step) in steps.iter().enumerate() {
        let fail = |e: Error| Error::ChainStep(step_idx, e.to_string());

        if let Some(perm) = &step.reorder {
            cur = cur.permute_coords(perm).map_err(fail)?;
            cur_coords = perm.iter().map(|&i| cur_coords[i]).collect();
        }
        let input = CompositionInput::new(
            cur.clone(),
            step.n1,
            step.p2.clone(),
            step.n2,
            step.f.clone(),
            step.n,
        )
        .map_err(fail)?;

        let (next, p3) = if verify {
            let report = verify_composition(&input).map_err(fail)?;
            if !report.hypotheses.all() {
                return Err(Error::ChainStep(
                    step_idx,
                    "composition hypotheses unmet".into(),
                ));
            }
            let next = report.p_projected.clone();
            let p3 = report.p3.clone();
            reports.push(report);
            (next, p3)
        } else {
            let q = build_q(&input).map_err(fail)?;
            let next = q.project(&input.gamma_x_y_coords()).map_err(fail)?;
            (next, build_p3(&input).map_err(fail)?)
        };

        // Fresh extension variables: γ-block, then (β, y).
        let base = system.ambient_dim;
        let gamma_vars = block(base, step.n);
        let beta_vars = block(base + step.n, step.n2);
        let y_vars = block(base + step.n + step.n2, input.d2);
        let ambient = base + step.n + step.n2 + input.d2;

        let mut grown = HRep::new(vec![], vec![], ambient);
        for c in &system.inequalities {
            grown.inequalities.push(widen(c, ambient));
        }
        for c in &system.equations {
            grown.equations.push(widen(c, ambient));
        }
        let mut by = beta_vars.clone();
        by.extend(&y_vars);
        lift_system(step.p2.hrep(), &by, ambient, &mut grown);

        let mut gab = gamma_vars.clone();
        gab.extend(cur_coords.iter().take(step.n1));
        gab.extend(&beta_vars);
        let p3_ineqs: Vec<LinearConstraint> = p3
            .hrep()
            .inequalities
            .iter()
            .map(|c| lift(c, &gab, ambient))
            .collect();
        for c in &p3.hrep().equations {
            grown.equations.push(lift(c, &gab, ambient));
        }
        // Greedily drop gluing inequalities implied by everything else.
        let mut kept: Vec<LinearConstraint> = p3_ineqs;
        let mut i = 0;
        while i < kept.len() {
            let mut trial = grown.clone();
            for (j, c) in kept.iter().enumerate() {
                if j != i {
                    trial.inequalities.push(c.clone());
                }
            }
            if implied_by(&trial, &kept[i]) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        grown.inequalities.extend(kept);

        system = grown;
        cur_coords = {
            let mut c = gamma_vars;
            c.extend(cur_coords.iter().skip(step.n1));
            c.extend(&y_vars);
            c
        };
        cur = next;
    }

    let extension = Polytope::from_hrep(&system)?;
    Ok(ChainResult {
        extension,
        system,
        composed: cur,
        composed_coords: cur_coords,
        reports,
    })
}

fn widen(c: &LinearConstraint, ambient: usize) -> LinearConstraint {
    let mut normal = QVector::zeros(ambient);
    for (i, e) in c.normal.iter().enumerate() {
        normal.set(i, e.clone());
    }
    LinearConstraint::new(normal, c.rhs.clone())
}

/// Exact implication test: every vertex of the system's polytope satisfies
/// the row. An unbounded or failed build means the row is load-bearing.
fn implied_by(system: &HRep, row: &LinearConstraint) -> bool {
    match Polytope::from_hrep(system) {
        Ok(p) => p.vertices().iter().all(|v| row.satisfied_le(v)),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::polytope::Polytope;

    fn qv(e: &[i64]) -> QVector {
        QVector::from_ints(e)
    }

    /// The parity composition step: P1 = Q_k (first coordinate split off),
    /// P2 = the simplex T, f the diagonal on {0, 1}.
    fn parity_input(k: usize) -> CompositionInput {
        let q = models::parity_polytope(k).unwrap();
        let t = models::simplex_t();
        let f = FTable::diagonal(&q, 1, &t, 1).unwrap();
        CompositionInput::new(q, 1, t, 1, f, 1).unwrap()
    }

    #[test]
    fn p3_of_parity_step_is_the_diagonal_segment() {
        let input = parity_input(2);
        let p3 = build_p3(&input).unwrap();
        assert_eq!(p3.vertices(), &[qv(&[0, 0, 0]), qv(&[1, 1, 1])]);
    }

    #[test]
    fn p3_single_pair_is_a_point() {
        let q = models::parity_polytope(2).unwrap();
        let t = models::simplex_t();
        let f = FTable::new(vec![((qv(&[0]), qv(&[0])), qv(&[0]))]).unwrap();
        let input = CompositionInput::new(q, 1, t, 1, f, 1).unwrap();
        let p3 = build_p3(&input).unwrap();
        assert_eq!(p3.vertex_count(), 1);
        // Degenerate composition: Q is the product of the two β = α = 0
        // fibers, a single fixed point in the (γ, α, β) coordinates.
        let report = verify_composition(&input).unwrap();
        assert!(report.hypotheses.all());
        assert!(report.conclusion_a && report.conclusion_b);
        // Q is the product of the two α = β = 0 fibers over a fixed gluing
        // point: one vertex from Q2's fiber times two from T's.
        assert_eq!(target_polytope(&input).unwrap().vertex_count(), 2);

        // With singleton fibers on both sides the target degenerates to a point.
        let q2 = models::parity_polytope(2).unwrap();
        let f = FTable::new(vec![((qv(&[0]), qv(&[0])), qv(&[0]))]).unwrap();
        let input = CompositionInput::new(q2.clone(), 1, q2, 1, f, 1).unwrap();
        assert_eq!(target_polytope(&input).unwrap().vertex_count(), 1);
    }

    #[test]
    fn single_vertex_cutset_has_the_diagonal_gluing_shape() {
        // Two edges glued on a shared endpoint: each side is stab of a single
        // edge with the shared vertex first, and the gluing polytope has the
        // same diagonal structure as the parity step.
        let edge = models::Graph::new(2, &[(0, 1)]).unwrap();
        let stab = models::stable_set_polytope(&edge).unwrap();
        let f = FTable::diagonal(&stab, 1, &stab, 1).unwrap();
        let input = CompositionInput::new(stab.clone(), 1, stab, 1, f, 1).unwrap();
        let p3 = build_p3(&input).unwrap();
        assert_eq!(p3.vertices(), &[qv(&[0, 0, 0]), qv(&[1, 1, 1])]);
        let report = verify_composition(&input).unwrap();
        assert!(report.hypotheses.all());
        assert!(report.conclusion_a && report.conclusion_b);
        // The composed object is stab of the path through the shared vertex,
        // coordinates (shared, private1, private2).
        let path = models::Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let stab_path = models::stable_set_polytope(&path).unwrap();
        assert!(equal(&report.p_projected, &stab_path).unwrap());
    }

    #[test]
    fn q_system_row_count_is_the_sum_of_components() {
        let input = parity_input(2);
        let sys = build_q_system(&input).unwrap();
        let p3 = build_p3(&input).unwrap();
        assert_eq!(
            sys.inequalities.len(),
            input.p1.hrep().inequalities.len()
                + input.p2.hrep().inequalities.len()
                + p3.hrep().inequalities.len()
        );
        assert_eq!(
            sys.equations.len(),
            input.p1.hrep().equations.len()
                + input.p2.hrep().equations.len()
                + p3.hrep().equations.len()
        );
    }

    #[test]
    fn parity_step_projects_to_next_parity_polytope() {
        let input = parity_input(2);
        let q = build_q(&input).unwrap();
        // Dropping γ from the composed object gives the next parity polytope.
        let mut xy = input.x_coords();
        xy.extend(input.y_coords());
        let proj = q.project(&xy).unwrap();
        assert!(equal(&proj, &models::parity_polytope(3).unwrap()).unwrap());
    }

    #[test]
    fn target_of_parity_step_carries_the_parity_bit() {
        let input = parity_input(2);
        let target = target_polytope(&input).unwrap();
        let mut expected = [
            qv(&[0, 0, 0, 0]),
            qv(&[0, 0, 1, 1]),
            qv(&[1, 1, 0, 1]),
            qv(&[1, 1, 1, 0]),
        ];
        expected.sort();
        assert_eq!(target.vertices(), &expected[..]);
    }

    #[test]
    fn verify_parity_step_all_conditions_hold() {
        let report = verify_composition(&parity_input(2)).unwrap();
        assert!(report.hypotheses.all());
        assert!(report.conclusion_a);
        assert!(report.conclusion_b);
    }

    #[test]
    fn stable_set_clique_cutset_composes() {
        // Two triangles glued along an edge: G1 = K3 on {a, b, c}, G2 = K3 on
        // {a, b, d}, cutset U = {a, b} (a clique). Vertex order puts U first.
        let k3 = models::Graph::complete(3);
        // stab coordinates: (0, 1, 2) with U = {0, 1}.
        let stab = models::stable_set_polytope(&k3).unwrap();
        let f = FTable::diagonal(&stab, 2, &stab, 2).unwrap();
        let input = CompositionInput::new(stab.clone(), 2, stab, 2, f, 2).unwrap();
        let report = verify_composition(&input).unwrap();
        assert!(report.hypotheses.all());
        assert!(report.conclusion_a && report.conclusion_b);

        // The composed object, with γ duplicating the cutset coordinates,
        // matches the glued graph's stable set polytope: K4 minus the edge
        // between the two private vertices, coordinates (a, b, c, d).
        let glued = models::Graph::new(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        let stab_glued = models::stable_set_polytope(&glued).unwrap();
        let composed = report.p_projected;
        assert!(equal(&composed, &stab_glued).unwrap());
    }

    #[test]
    fn non_clique_cutset_reports_unmet_hypotheses() {
        // Path a–b–c with V' = {a, c}: the PF-property fails for P1.
        // Reorder stab(path) so the cutset coordinates come first.
        let path = models::Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let stab = models::stable_set_polytope(&path).unwrap();
        let reordered = stab.permute_coords(&[0, 2, 1]).unwrap();
        let f = FTable::diagonal(&reordered, 2, &reordered, 2).unwrap();
        let input = CompositionInput::new(reordered.clone(), 2, reordered, 2, f, 2).unwrap();
        let report = verify_composition(&input).unwrap();
        assert!(!report.hypotheses.pf_p1);
        assert!(!report.hypotheses.all());
    }

    #[test]
    fn malformed_f_entries_are_rejected() {
        let q = models::parity_polytope(2).unwrap();
        let t = models::simplex_t();
        // (1/2) is not a projection vertex of Q2.
        let f = FTable::new(vec![(
            (
                QVector::new(vec![crate::num::Rational::new(1, 2)]),
                qv(&[0]),
            ),
            qv(&[0]),
        )])
        .unwrap();
        assert!(CompositionInput::new(q, 1, t, 1, f, 1).is_err());
        assert!(FTable::new(vec![]).is_err());
    }

    /// Parity chain: start at Q1 = {(0)} and glue a simplex T per step, each
    /// time splitting off the first fresh output coordinate of the previous
    /// step as the new α. Also returns the extension variables carrying the
    /// parity polytope: a glued coordinate leaves the payload when consumed
    /// as α, and each step contributes its fresh y-pair.
    pub(crate) fn parity_chain_steps(n: usize) -> (Polytope, Vec<ChainStep>, Vec<usize>) {
        let start = models::parity_polytope(1).unwrap();
        let mut steps = Vec::new();
        let mut cur = start.clone();
        // Extension variable of each coordinate of `cur`, mirroring chain().
        let mut cur_vars: Vec<usize> = vec![0];
        let mut payload: Vec<usize> = vec![0];
        let mut next_var = 1;
        for k in 1..n {
            let m = cur.ambient_dim();
            let reorder = if k == 1 {
                None
            } else {
                // Previous layout (γ, x…, y1, y2): glue on y1 = index m - 2.
                let mut perm = vec![m - 2];
                perm.extend((0..m).filter(|&i| i != m - 2));
                Some(perm)
            };
            if let Some(p) = &reorder {
                cur = cur.permute_coords(p).unwrap();
                cur_vars = p.iter().map(|&i| cur_vars[i]).collect();
            }
            let t = models::simplex_t();
            let f = FTable::diagonal(&cur, 1, &t, 1).unwrap();
            let input = CompositionInput::new(cur.clone(), 1, t.clone(), 1, f.clone(), 1).unwrap();
            let q = build_q(&input).unwrap();
            cur = q.project(&input.gamma_x_y_coords()).unwrap();

            let gamma_var = next_var;
            let y_vars = [next_var + 2, next_var + 3];
            payload.retain(|&v| v != cur_vars[0]);
            payload.extend(y_vars);
            cur_vars = {
                let mut vars = vec![gamma_var];
                vars.extend(cur_vars.iter().skip(1));
                vars.extend(y_vars);
                vars
            };
            next_var += 4; // γ + β + two y coordinates

            steps.push(ChainStep {
                reorder,
                n1: 1,
                p2: t,
                n2: 1,
                f,
                n: 1,
            });
        }
        payload.sort();
        (start, steps, payload)
    }

    #[test]
    fn parity_chain_to_n3() {
        let (start, steps, payload) = parity_chain_steps(3);
        let result = chain(&start, &steps, true).unwrap();
        assert_eq!(result.system.inequalities.len(), 8);
        let proj = result.extension.project(&payload).unwrap();
        assert!(equal(&proj, &models::parity_polytope(3).unwrap()).unwrap());
    }

    #[test]
    fn parity_chain_sizes_up_to_n6() {
        for n in [4usize, 5, 6] {
            let (start, steps, payload) = parity_chain_steps(n);
            let result = chain(&start, &steps, false).unwrap();
            assert_eq!(result.system.inequalities.len(), 4 * (n - 1), "n = {n}");
            let proj = result.extension.project(&payload).unwrap();
            assert!(
                equal(&proj, &models::parity_polytope(n).unwrap()).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn chain_of_length_one_matches_build_q() {
        let input = parity_input(2);
        let q = build_q(&input).unwrap();
        let step = ChainStep {
            reorder: None,
            n1: 1,
            p2: input.p2.clone(),
            n2: 1,
            f: input.f.clone(),
            n: 1,
        };
        let result = chain(&input.p1, &[step], true).unwrap();
        // Chain variables are ordered (α, x, γ, β, y); build_q uses
        // (γ, α, x, β, y). Same polytope up to that permutation.
        let m = input.p1.ambient_dim();
        let mut perm: Vec<usize> = vec![m]; // γ
        perm.extend(0..m); // α, x
        perm.extend(m + 1..result.extension.ambient_dim()); // β, y
        let aligned = result.extension.permute_coords(&perm).unwrap();
        assert!(equal(&aligned, &q).unwrap());
    }

    #[test]
    fn chain_reports_failing_step() {
        // Glue on a non-clique cutset: hypotheses fail at step 0.
        let path = models::Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let stab = models::stable_set_polytope(&path).unwrap();
        let reordered = stab.permute_coords(&[0, 2, 1]).unwrap();
        let f = FTable::diagonal(&reordered, 2, &reordered, 2).unwrap();
        let step = ChainStep {
            reorder: None,
            n1: 2,
            p2: reordered.clone(),
            n2: 2,
            f,
            n: 2,
        };
        match chain(&reordered, &[step], true) {
            Err(Error::ChainStep(0, _)) => {}
            other => panic!("expected a step failure, got {other:?}"),
        }
    }
}
