//! Generators for the concrete polytopes used throughout: parity polytopes
//! and their compact extensions, the P* relation, stable set and travelling
//! salesman polytopes, and generic fixtures.

use crate::linalg::{LinearConstraint, QMatrix, QVector};
use crate::num::Rational;
use crate::pfp::AffineMap;
use crate::polytope::{HRep, Polytope};
use crate::{Error, Result};

pub const PARITY_CAP: usize = 8;
pub const PARITY_EF_CAP: usize = 10;
pub const STABLE_SET_CAP: usize = 16;
pub const TSP_CAP: usize = 10;

/// Simple undirected graph on `0..vertex_count`; edges are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort();
        let before = normalized.len();
        normalized.dedup();
        if normalized.len() != before {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(Graph {
            vertex_count,
            edges: normalized,
        })
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph {
            vertex_count: n,
            edges,
        }
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle is simple for n >= 3")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sorted edge list; this order indexes TSP coordinates.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == u {
                    Some(b)
                } else if b == u {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn zero_one_point(n: usize, mask: u64) -> QVector {
    QVector::new(
        (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    )
}

/// Convex hull of the 0/1 points of even parity in R^n.
pub fn parity_polytope(n: usize) -> Result<Polytope> {
    if !(1..=PARITY_CAP).contains(&n) {
        return Err(Error::ModelCap(format!(
            "parity polytope needs 1 <= n <= {PARITY_CAP}"
        )));
    }
    let points: Vec<QVector> = (0..1u64 << n)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| zero_one_point(n, m))
        .collect();
    Polytope::from_points(points)
}

/// The odd-subset inequality description of the parity polytope, valid for
/// n >= 4: for each odd S, sum_{i in S} x_i - sum_{i not in S} x_i <= |S|-1,
/// plus 0 <= x <= 1.
pub fn parity_odd_subset_hrep(n: usize) -> Result<HRep> {
    if !(4..=PARITY_CAP).contains(&n) {
        return Err(Error::ModelCap(format!(
            "odd-subset description needs 4 <= n <= {PARITY_CAP}"
        )));
    }
    let mut inequalities = Vec::new();
    for mask in 0..1u64 << n {
        if mask.count_ones() % 2 != 1 {
            continue;
        }
        let normal = QVector::new(
            (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    }
                })
                .collect(),
        );
        inequalities.push(LinearConstraint::new(
            normal,
            Rational::from_int(mask.count_ones() as i64 - 1),
        ));
    }
    for i in 0..n {
        inequalities.push(LinearConstraint::new(QVector::unit(n, i), Rational::one()));
        inequalities.push(LinearConstraint::new(
            QVector::unit(n, i).scale(&Rational::from_int(-1)),
            Rational::zero(),
        ));
    }
    Ok(HRep::new(inequalities, vec![], n))
}

/// A compact extension of the parity polytope built from a chain of P*
/// relation blocks. `system` is the defining 4(n-1)-inequality formulation
/// (plus one anchoring equation); `polytope` is its canonical build;
/// projecting onto `proj_coords` recovers the parity polytope.
#[derive(Clone, Debug)]
pub struct ParityExtension {
    pub system: HRep,
    pub polytope: Polytope,
    pub proj_coords: Vec<usize>,
}

/// Extended formulation of the parity polytope with exactly 4(n-1)
/// inequalities: variables (v0, a_1, b_1, ..., a_{n-1}, b_{n-1}) with v0 = 0
/// and a P* block tying each a_k to the pair (a_{k+1}, b_{k+1}).
pub fn parity_ef(n: usize) -> Result<ParityExtension> {
    if !(2..=PARITY_EF_CAP).contains(&n) {
        return Err(Error::ModelCap(format!(
            "parity extension needs 2 <= n <= {PARITY_EF_CAP}"
        )));
    }
    let vars = 1 + 2 * (n - 1);
    let a_var = |k: usize| if k == 0 { 0 } else { 2 * k - 1 };
    let b_var = |k: usize| 2 * k;

    let mut inequalities = Vec::new();
    for k in 0..n - 1 {
        // P*(x; y1, y2) on x = a_k, y = (a_{k+1}, b_{k+1}).
        let x = a_var(k);
        let y1 = a_var(k + 1);
        let y2 = b_var(k + 1);
        for (cx, c1, c2, rhs) in [
            (1i64, -1i64, -1i64, 0i64),
            (1, 1, 1, 2),
            (-1, 1, -1, 0),
            (-1, -1, 1, 0),
        ] {
            let mut normal = QVector::zeros(vars);
            normal.set(x, Rational::from_int(cx));
            normal.set(y1, Rational::from_int(c1));
            normal.set(y2, Rational::from_int(c2));
            inequalities.push(LinearConstraint::new(normal, Rational::from_int(rhs)));
        }
    }
    let equations = vec![LinearConstraint::new(
        QVector::unit(vars, 0),
        Rational::zero(),
    )];
    let system = HRep::new(inequalities, equations, vars);
    let polytope = Polytope::from_hrep(&system)?;

    // Output coordinates: the top pair, then the b-legs downward.
    let mut proj_coords = vec![a_var(n - 1), b_var(n - 1)];
    for k in (1..n - 1).rev() {
        proj_coords.push(b_var(k));
    }
    proj_coords.sort();
    Ok(ParityExtension {
        system,
        polytope,
        proj_coords,
    })
}

/// The four-inequality relation in R^3 whose fibers over x are generated by
/// four affine maps.
pub fn pstar() -> Polytope {
    let rows = [
        ([1i64, -1, -1], 0i64),
        ([1, 1, 1], 2),
        ([-1, 1, -1], 0),
        ([-1, -1, 1], 0),
    ];
    let inequalities = rows
        .iter()
        .map(|(normal, rhs)| {
            LinearConstraint::new(QVector::from_ints(normal), Rational::from_int(*rhs))
        })
        .collect();
    Polytope::from_hrep(&HRep::new(inequalities, vec![], 3))
        .expect("the P* system is bounded and nonempty")
}

/// The generator maps of `pstar` over its first coordinate:
/// x ↦ (x,0), (0,x), (1-x,1), (1,1-x).
pub fn pstar_generator_maps() -> Vec<AffineMap> {
    let m = |l1: i64, l2: i64, t1: i64, t2: i64| AffineMap {
        linear: QMatrix::new(
            vec![QVector::from_ints(&[l1]), QVector::from_ints(&[l2])],
            1,
        ),
        offset: QVector::from_ints(&[t1, t2]),
    };
    vec![m(1, 0, 0, 0), m(0, 1, 0, 0), m(-1, 0, 1, 1), m(0, -1, 1, 1)]
}

/// The simplex with vertex set {(0,0,0), (0,1,1), (1,0,1), (1,1,0)}.
pub fn simplex_t() -> Polytope {
    Polytope::from_points(vec![
        QVector::from_ints(&[0, 0, 0]),
        QVector::from_ints(&[0, 1, 1]),
        QVector::from_ints(&[1, 0, 1]),
        QVector::from_ints(&[1, 1, 0]),
    ])
    .expect("simplex vertices are affinely independent")
}

/// Convex hull of the incidence vectors of all independent sets of `g`.
pub fn stable_set_polytope(g: &Graph) -> Result<Polytope> {
    let n = g.vertex_count();
    if n > STABLE_SET_CAP {
        return Err(Error::ModelCap(format!(
            "stable set enumeration capped at {STABLE_SET_CAP} vertices"
        )));
    }
    let mut points = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    enumerate_independent(g, 0, &mut chosen, &mut points);
    Polytope::from_points(points)
}

fn enumerate_independent(g: &Graph, next: usize, chosen: &mut Vec<usize>, out: &mut Vec<QVector>) {
    if next == g.vertex_count() {
        let mut mask = 0u64;
        for &v in chosen.iter() {
            mask |= 1 << v;
        }
        out.push(zero_one_point(g.vertex_count(), mask));
        return;
    }
    enumerate_independent(g, next + 1, chosen, out);
    if chosen.iter().all(|&u| !g.has_edge(u, next)) {
        chosen.push(next);
        enumerate_independent(g, next + 1, chosen, out);
        chosen.pop();
    }
}

/// Graph condition equivalent to the PF-property of the stable set polytope
/// projected onto `vprime`: any two of its vertices joined by a path whose
/// inner vertices avoid `vprime` must be adjacent.
pub fn stab_pf_condition(g: &Graph, vprime: &[usize]) -> bool {
    let in_vprime: Vec<bool> = {
        let mut v = vec![false; g.vertex_count()];
        for &i in vprime {
            v[i] = true;
        }
        v
    };
    for (a, &u) in vprime.iter().enumerate() {
        for &w in vprime.iter().skip(a + 1) {
            if g.has_edge(u, w) {
                continue;
            }
            // BFS from u through V \ V' looking for w.
            let mut seen = vec![false; g.vertex_count()];
            let mut queue = vec![u];
            seen[u] = true;
            let mut reached = false;
            while let Some(x) = queue.pop() {
                for y in g.neighbors(x) {
                    if y == w {
                        reached = true;
                        break;
                    }
                    if !seen[y] && !in_vprime[y] {
                        seen[y] = true;
                        queue.push(y);
                    }
                }
                if reached {
                    break;
                }
            }
            if reached {
                return false;
            }
        }
    }
    true
}

/// Convex hull of the edge-incidence vectors of all Hamiltonian cycles,
/// coordinates indexed by the sorted edge list.
pub fn tsp_polytope(g: &Graph) -> Result<Polytope> {
    let tours = hamiltonian_cycles(g)?;
    if tours.is_empty() {
        return Err(Error::EmptyTspPolytope);
    }
    let m = g.edges().len();
    let points: Vec<QVector> = tours
        .iter()
        .map(|tour| {
            let mut mask = 0u64;
            for w in tour.windows(2) {
                mask |= 1 << g.edge_index(w[0], w[1]).expect("tour edge exists");
            }
            mask |= 1
                << g.edge_index(tour[0], *tour.last().unwrap())
                    .expect("closing edge");
            zero_one_point(m, mask)
        })
        .collect();
    Polytope::from_points(points)
}

/// All Hamiltonian cycles as vertex sequences starting at 0, each cycle
/// listed once (reflections deduplicated).
pub fn hamiltonian_cycles(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if n > TSP_CAP {
        return Err(Error::ModelCap(format!(
            "tour enumeration capped at {TSP_CAP} vertices"
        )));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("graph is not connected".into()));
    }
    if n < 3 {
        return Err(Error::EmptyTspPolytope);
    }
    let mut tours = Vec::new();
    let mut path = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    backtrack_tours(g, &mut path, &mut used, &mut tours);
    Ok(tours)
}

fn backtrack_tours(
    g: &Graph,
    path: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = g.vertex_count();
    if path.len() == n {
        // Close the cycle; keep one orientation by requiring the second
        // vertex to be smaller than the last.
        if g.has_edge(*path.last().unwrap(), 0) && path[1] < path[n - 1] {
            out.push(path.clone());
        }
        return;
    }
    let cur = *path.last().unwrap();
    for v in g.neighbors(cur) {
        if !used[v] {
            used[v] = true;
            path.push(v);
            backtrack_tours(g, path, used, out);
            path.pop();
            used[v] = false;
        }
    }
}

/// True iff the projection of the TSP polytope onto the cutset's edge
/// coordinates is a simplex; guaranteed for edge cutsets of size <= 3, where
/// every tour crosses the cut exactly twice.
pub fn tsp_cutset_projection_is_simplex(g: &Graph, cut_edges: &[(usize, usize)]) -> Result<bool> {
    if cut_edges.len() > 3 {
        return Err(Error::ModelCap("cutset check limited to 3 edges".into()));
    }
    let mut coords = Vec::with_capacity(cut_edges.len());
    for &(u, v) in cut_edges {
        match g.edge_index(u, v) {
            Some(i) => coords.push(i),
            None => return Err(Error::InvalidGraph(format!("({u},{v}) is not an edge"))),
        }
    }
    coords.sort();
    coords.dedup();
    if coords.len() != cut_edges.len() {
        return Err(Error::InvalidGraph("duplicate cut edge".into()));
    }
    if !is_edge_cutset(g, &coords) {
        return Err(Error::NotACutset);
    }
    let ts = tsp_polytope(g)?;
    let proj = ts.project(&coords)?;
    Ok(proj.dim() + 1 == proj.vertex_count())
}

fn is_edge_cutset(g: &Graph, edge_indices: &[usize]) -> bool {
    let kept: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !edge_indices.contains(i))
        .map(|(_, &e)| e)
        .collect();
    let reduced = Graph::new(g.vertex_count(), &kept).expect("subgraph is simple");
    !reduced.is_connected()
}

pub fn hypercube(n: usize) -> Result<Polytope> {
    if n == 0 || n > PARITY_EF_CAP {
        return Err(Error::ModelCap(format!(
            "hypercube needs 1 <= n <= {PARITY_EF_CAP}"
        )));
    }
    let points: Vec<QVector> = (0..1u64 << n).map(|m| zero_one_point(n, m)).collect();
    Polytope::from_points(points)
}

/// conv{0, e_1, ..., e_n}.
pub fn standard_simplex(n: usize) -> Result<Polytope> {
    if n == 0 || n > STABLE_SET_CAP {
        return Err(Error::ModelCap(format!(
            "standard simplex needs 1 <= n <= {STABLE_SET_CAP}"
        )));
    }
    let mut points = vec![QVector::zeros(n)];
    for i in 0..n {
        points.push(QVector::unit(n, i));
    }
    Polytope::from_points(points)
}

/// conv{(±1, ±1, 0), (0, 0, 1)}: its projection onto the base square sends
/// the apex to an interior point.
pub fn square_pyramid() -> Polytope {
    Polytope::from_points(vec![
        QVector::from_ints(&[-1, -1, 0]),
        QVector::from_ints(&[-1, 1, 0]),
        QVector::from_ints(&[1, -1, 0]),
        QVector::from_ints(&[1, 1, 0]),
        QVector::from_ints(&[0, 0, 1]),
    ])
    .expect("pyramid points are valid")
}

/// base × the unit segment.
pub fn prism(base: &Polytope) -> Result<Polytope> {
    let seg = Polytope::from_points(vec![QVector::from_ints(&[0]), QVector::from_ints(&[1])])?;
    base.product(&seg)
}

pub fn segment() -> Polytope {
    Polytope::from_points(vec![QVector::from_ints(&[0]), QVector::from_ints(&[1])])
        .expect("segment is valid")
}
