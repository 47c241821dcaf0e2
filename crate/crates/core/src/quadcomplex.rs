//! Quad-graphs and their combinatorics: doubles of planar cell complexes,
//! strips and Cauchy paths, rhombic embeddability, quasicrystallic lifts
//! into Z^d, hulls and elementary flips.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

pub type VertexId = usize;
pub type FaceId = usize;
pub type EdgeId = usize;
pub type StripId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadComplexError {
    /// Input cell complex is not a strongly regular decomposition with faces.
    NonRegularComplex,
    /// Cauchy path is not edge-connected in the quad-graph.
    InvalidPath,
    /// Directed-edge slopes do not define a consistent lift to Z^d.
    InconsistentLift,
    /// The requested cube flip is not applicable to the surface.
    FlipNotApplicable,
}

impl core::fmt::Display for QuadComplexError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::NonRegularComplex => write!(f, "not a strongly regular complex"),
            Self::InvalidPath => write!(f, "path is not edge-connected"),
            Self::InconsistentLift => write!(f, "edge slopes do not lift consistently to Z^d"),
            Self::FlipNotApplicable => write!(f, "cube flip not applicable"),
        }
    }
}

/// A polytopal cell decomposition given by counterclockwise vertex cycles.
#[derive(Debug, Clone)]
pub struct CellComplex {
    pub n_vertices: usize,
    pub faces: Vec<Vec<VertexId>>,
    pub positions: Option<Vec<Complex64>>,
}

impl CellComplex {
    /// Grid decomposition with `fw` x `fh` quadrilateral cells and unit
    /// lattice positions.
    pub fn grid(fw: usize, fh: usize) -> CellComplex {
        let (nw, nh) = (fw + 1, fh + 1);
        let idx = |i: usize, j: usize| j * nw + i;
        let mut faces = Vec::new();
        for j in 0..fh {
            for i in 0..fw {
                faces.push(alloc::vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        let mut positions = Vec::with_capacity(nw * nh);
        for j in 0..nh {
            for i in 0..nw {
                positions.push(Complex64::new(i as f64, j as f64));
            }
        }
        CellComplex { n_vertices: nw * nh, faces, positions: Some(positions) }
    }
}

/// Strongly regular quad-face complex with bipartite coloring.
///
/// Faces are stored as positively oriented cycles `(x0, y0, x1, y1)`
/// starting at a black vertex. Doubles of complexes with boundary carry
/// degenerate "slit" faces `(x0, y0, x1, y0)` along the boundary; these are
/// flagged and skipped by strip and equation machinery.
#[derive(Debug, Clone)]
pub struct QuadGraph {
    colors: Vec<Color>,
    positions: Vec<Option<Complex64>>,
    faces: Vec<[VertexId; 4]>,
    edges: Vec<(VertexId, VertexId)>,
    edge_ids: BTreeMap<(VertexId, VertexId), EdgeId>,
    edge_faces: Vec<Vec<FaceId>>,
}

fn ekey(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl QuadGraph {
    pub fn new(
        colors: Vec<Color>,
        positions: Vec<Option<Complex64>>,
        raw_faces: Vec<[VertexId; 4]>,
    ) -> Result<Self, QuadComplexError> {
        let n = colors.len();
        let mut faces = Vec::with_capacity(raw_faces.len());
        for f in &raw_faces {
            if f.iter().any(|&v| v >= n) {
                return Err(QuadComplexError::NonRegularComplex);
            }
            for k in 0..4 {
                if colors[f[k]] == colors[f[(k + 1) % 4]] {
                    return Err(QuadComplexError::NonRegularComplex);
                }
            }
            // rotate to start at a black vertex
            let mut f = *f;
            if colors[f[0]] == Color::White {
                f = [f[1], f[2], f[3], f[0]];
            }
            // the black diagonal must be nondegenerate; slit faces may
            // repeat the white vertex
            if f[0] == f[2] {
                return Err(QuadComplexError::NonRegularComplex);
            }
            faces.push(f);
        }
        let mut edge_ids = BTreeMap::new();
        let mut edges = Vec::new();
        let mut edge_faces: Vec<Vec<FaceId>> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..4 {
                let key = ekey(f[k], f[(k + 1) % 4]);
                if key.0 == key.1 {
                    return Err(QuadComplexError::NonRegularComplex);
                }
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_faces.push(Vec::new());
                    edges.len() - 1
                });
                if !edge_faces[id].contains(&fi) {
                    edge_faces[id].push(fi);
                }
            }
        }
        if edge_faces.iter().any(|fs| fs.len() > 2) {
            return Err(QuadComplexError::NonRegularComplex);
        }
        // strong regularity: two faces share at most one edge
        let mut shared: BTreeMap<(FaceId, FaceId), usize> = BTreeMap::new();
        for fs in &edge_faces {
            if fs.len() == 2 {
                let k = (fs[0].min(fs[1]), fs[0].max(fs[1]));
                *shared.entry(k).or_insert(0) += 1;
            }
        }
        if shared.values().any(|&c| c > 1) {
            return Err(QuadComplexError::NonRegularComplex);
        }
        Ok(QuadGraph { colors, positions, faces, edges, edge_ids, edge_faces })
    }

    pub fn n_vertices(&self) -> usize {
        self.colors.len()
    }
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn color(&self, v: VertexId) -> Color {
        self.colors[v]
    }
    pub fn position(&self, v: VertexId) -> Option<Complex64> {
        self.positions[v]
    }
    pub fn face(&self, f: FaceId) -> [VertexId; 4] {
        self.faces[f]
    }
    pub fn faces(&self) -> &[[VertexId; 4]] {
        &self.faces
    }
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }
    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.edge_ids.get(&ekey(a, b)).copied()
    }
    pub fn faces_of_edge(&self, e: EdgeId) -> &[FaceId] {
        &self.edge_faces[e]
    }

    /// A slit face repeats its white vertex: `(x0, y0, x1, y0)`.
    pub fn face_is_degenerate(&self, f: FaceId) -> bool {
        let q = self.faces[f];
        q[0] == q[2] || q[1] == q[3]
    }

    /// Faces with four distinct vertices.
    pub fn proper_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(|&f| !self.face_is_degenerate(f))
    }

    pub fn vertices_of_color(&self, c: Color) -> Vec<VertexId> {
        (0..self.colors.len()).filter(|&v| self.colors[v] == c).collect()
    }

    /// Neighbors in the quad-graph (along edges of D).
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    /// Faces around a vertex in cyclic order, or `None` when the vertex is
    /// on the boundary or touches a slit face. The walk enters each face
    /// through one of its two v-edges and leaves through the other, so
    /// valence-two boundary vertices cannot spuriously close up.
    pub fn flower(&self, v: VertexId) -> Option<Vec<FaceId>> {
        let incident: Vec<FaceId> = (0..self.faces.len())
            .filter(|&f| self.faces[f].contains(&v))
            .collect();
        if incident.is_empty() || incident.iter().any(|&f| self.face_is_degenerate(f)) {
            return None;
        }
        let edges_at = |f: FaceId| -> Option<[EdgeId; 2]> {
            let q = self.faces[f];
            let s = q.iter().position(|&w| w == v).unwrap();
            Some([
                self.edge_id(q[(s + 3) % 4], v)?,
                self.edge_id(v, q[(s + 1) % 4])?,
            ])
        };
        let mut order = vec![incident[0]];
        let [stop_edge, mut cur_edge] = edges_at(incident[0])?;
        loop {
            let cur = *order.last().unwrap();
            let next = self
                .faces_of_edge(cur_edge)
                .iter()
                .copied()
                .find(|&f| f != cur)?;
            if next == order[0] {
                return if cur_edge == stop_edge && order.len() == incident.len() {
                    Some(order)
                } else {
                    None
                };
            }
            if order.contains(&next) {
                return None;
            }
            let [a, b] = edges_at(next)?;
            cur_edge = if a == cur_edge { b } else { a };
            order.push(next);
        }
    }

    /// Interior vertices: full counterclockwise flower exists.
    pub fn interior_vertices(&self) -> Vec<VertexId> {
        (0..self.colors.len()).filter(|&v| self.flower(v).is_some()).collect()
    }

    /// The double of a strongly regular cell decomposition: black vertices
    /// are the vertices of G, white vertices its bounded faces, and every
    /// edge of G contributes one quadrilateral. Edges with a single
    /// adjacent face yield slit faces that reuse the white vertex.
    pub fn double(g: &CellComplex) -> Result<QuadGraph, QuadComplexError> {
        if g.faces.is_empty() {
            return Err(QuadComplexError::NonRegularComplex);
        }
        for f in &g.faces {
            if f.len() < 3 || f.iter().any(|&v| v >= g.n_vertices) {
                return Err(QuadComplexError::NonRegularComplex);
            }
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() {
                return Err(QuadComplexError::NonRegularComplex);
            }
        }
        // directed edge -> face on its left
        let mut left_face: BTreeMap<(VertexId, VertexId), FaceId> = BTreeMap::new();
        for (fi, f) in g.faces.iter().enumerate() {
            for k in 0..f.len() {
                let d = (f[k], f[(k + 1) % f.len()]);
                if left_face.insert(d, fi).is_some() {
                    return Err(QuadComplexError::NonRegularComplex);
                }
            }
        }
        // strong regularity of G: two faces share at most one edge
        let mut shared: BTreeMap<(FaceId, FaceId), usize> = BTreeMap::new();
        for (&(a, b), &fl) in &left_face {
            if a < b {
                if let Some(&fr) = left_face.get(&(b, a)) {
                    let k = (fl.min(fr), fl.max(fr));
                    *shared.entry(k).or_insert(0) += 1;
                }
            }
        }
        if shared.values().any(|&c| c > 1) {
            return Err(QuadComplexError::NonRegularComplex);
        }

        let nb = g.n_vertices;
        let mut colors = vec![Color::Black; nb];
        colors.extend(vec![Color::White; g.faces.len()]);
        let mut positions: Vec<Option<Complex64>> = match &g.positions {
            Some(p) => p.iter().map(|&z| Some(z)).collect(),
            None => vec![None; nb],
        };
        for f in &g.faces {
            let pos = g.positions.as_ref().map(|p| {
                f.iter().map(|&v| p[v]).sum::<Complex64>() / f.len() as f64
            });
            positions.push(pos);
        }

        let mut faces = Vec::new();
        let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for (&(a, b), &fl) in &left_face {
            if !seen.insert(ekey(a, b)) {
                continue;
            }
            let wl = nb + fl;
            match left_face.get(&(b, a)) {
                Some(&fr) => faces.push([a, nb + fr, b, wl]),
                None => faces.push([a, wl, b, wl]),
            }
        }
        QuadGraph::new(colors, positions, faces)
    }

    /// Square-grid patch with `fw` x `fh` faces, positions in the unit
    /// lattice, colored by coordinate parity (origin black).
    pub fn grid(fw: usize, fh: usize) -> QuadGraph {
        Self::grid_with_parity(fw, fh, true)
    }

    /// Square-grid patch with a chosen color at even parity.
    pub fn grid_with_parity(fw: usize, fh: usize, black_at_even: bool) -> QuadGraph {
        let (nw, nh) = (fw + 1, fh + 1);
        let idx = |i: usize, j: usize| j * nw + i;
        let mut colors = Vec::with_capacity(nw * nh);
        let mut positions = Vec::with_capacity(nw * nh);
        for j in 0..nh {
            for i in 0..nw {
                let even = (i + j) % 2 == 0;
                colors.push(if even == black_at_even { Color::Black } else { Color::White });
                positions.push(Some(Complex64::new(i as f64, j as f64)));
            }
        }
        let mut faces = Vec::new();
        for j in 0..fh {
            for i in 0..fw {
                faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        QuadGraph::new(colors, positions, faces).expect("grid is regular")
    }

    /// Flower of `k` rhombi around a center vertex (rhombille-style patch):
    /// center c, inner ring u_1..u_k, outer ring w_1..w_k, faces
    /// (c, u_i, w_i, u_{i+1}).
    pub fn rhombic_flower(k: usize) -> QuadGraph {
        assert!(k >= 3);
        let n = 1 + 2 * k;
        let mut colors = vec![Color::Black; n];
        let mut positions = vec![None; n];
        positions[0] = Some(Complex64::new(0.0, 0.0));
        for i in 0..k {
            colors[1 + i] = Color::White;
            colors[1 + k + i] = Color::Black;
            let ang = 2.0 * core::f64::consts::PI * i as f64 / k as f64;
            let ang2 = 2.0 * core::f64::consts::PI * (i as f64 + 0.5) / k as f64;
            positions[1 + i] = Some(Complex64::from_polar(1.0, ang));
            positions[1 + k + i] = Some(Complex64::from_polar(2.0 * (core::f64::consts::PI / k as f64).cos(), ang2));
        }
        let mut faces = Vec::new();
        for i in 0..k {
            let u = 1 + i;
            let w = 1 + k + i;
            let un = 1 + (i + 1) % k;
            faces.push([0, u, w, un]);
        }
        QuadGraph::new(colors, positions, faces).expect("flower is regular")
    }
}

/// A strip: maximal sequence of faces glued along opposite edges.
#[derive(Debug, Clone)]
pub struct Strip {
    pub faces: Vec<FaceId>,
    pub traverse: Vec<EdgeId>,
    pub closed: bool,
}

impl QuadGraph {
    fn face_slot_of_edge(&self, f: FaceId, e: EdgeId) -> Option<usize> {
        let q = self.faces[f];
        (0..4).find(|&k| self.edge_id(q[k], q[(k + 1) % 4]) == Some(e))
    }

    /// All strips. Every proper face belongs to exactly two strips; the
    /// traverse edges of the strips partition the edges of the complex.
    /// Slit faces are skipped.
    pub fn enumerate_strips(&self) -> Vec<Strip> {
        let mut strips = Vec::new();
        // (face, axis) axis in {0,1}: axis 0 crosses edges at slots 0 and 2.
        let mut visited: BTreeSet<(FaceId, usize)> = BTreeSet::new();
        for f0 in 0..self.faces.len() {
            if self.face_is_degenerate(f0) {
                continue;
            }
            for axis in 0..2 {
                if visited.contains(&(f0, axis)) {
                    continue;
                }
                // walk in slot direction `axis`, then extend backwards
                let q = self.faces[f0];
                let start_exit = self.edge_id(q[axis], q[(axis + 1) % 4]).unwrap();
                let (mut faces_fwd, trav_fwd, closed) = self.walk_strip(f0, start_exit);
                let mut faces_all;
                let mut trav_all;
                if closed {
                    faces_all = faces_fwd;
                    trav_all = trav_fwd;
                } else {
                    let back_exit = self.edge_id(q[(axis + 2) % 4], q[(axis + 3) % 4]).unwrap();
                    let (faces_bwd, mut trav_bwd, _) = self.walk_strip(f0, back_exit);
                    // reverse the backwards walk (it starts at f0 too); its
                    // first two traverse edges are `exit`, `back_exit`, which
                    // the forward list already carries
                    faces_all = faces_bwd[1..].to_vec();
                    faces_all.reverse();
                    trav_bwd.reverse();
                    trav_all = trav_bwd;
                    trav_all.extend_from_slice(&trav_fwd[2..]);
                    faces_all.append(&mut faces_fwd);
                }
                for &f in &faces_all {
                    for a in 0..2 {
                        let qq = self.faces[f];
                        let e = self.edge_id(qq[a], qq[(a + 1) % 4]).unwrap();
                        if trav_all.contains(&e) {
                            visited.insert((f, a));
                        }
                    }
                }
                strips.push(Strip { faces: faces_all, traverse: trav_all, closed });
            }
        }
        strips
    }

    /// Walk from `f0` exiting through edge `exit`; returns faces visited
    /// (starting with f0), traverse edges crossed (starting with the edge
    /// opposite `exit` in f0), and whether the strip closed up.
    fn walk_strip(&self, f0: FaceId, exit: EdgeId) -> (Vec<FaceId>, Vec<EdgeId>, bool) {
        let mut faces = vec![f0];
        let slot = self.face_slot_of_edge(f0, exit).unwrap();
        let q = self.faces[f0];
        let opposite = self.edge_id(q[(slot + 2) % 4], q[(slot + 3) % 4]).unwrap();
        let mut trav = vec![opposite, exit];
        let mut cur = f0;
        let mut e = exit;
        loop {
            let fs = self.faces_of_edge(e);
            let next = fs.iter().copied().find(|&f| f != cur);
            let Some(next) = next else {
                return (faces, trav, false);
            };
            if self.face_is_degenerate(next) {
                return (faces, trav, false);
            }
            let s = self.face_slot_of_edge(next, e).unwrap();
            let qn = self.faces[next];
            let out = self.edge_id(qn[(s + 2) % 4], qn[(s + 3) % 4]).unwrap();
            if next == f0 && out == exit {
                // periodic strip: drop the duplicated seed edge
                trav.pop();
                return (faces, trav, true);
            }
            if faces.len() > 4 * self.faces.len() {
                // self-crossing runaway guard
                return (faces, trav, true);
            }
            faces.push(next);
            trav.push(out);
            cur = next;
            e = out;
        }
    }
}

/// Classification of a Cauchy path against the strip structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CauchyClass {
    WellPosed,
    /// Some strip is crossed more than once (witness strip index).
    Overdetermined(StripId),
    /// Some strip is never crossed (witness strip index).
    Underdetermined(StripId),
}

impl QuadGraph {
    /// Well-posedness of the Cauchy problem along a vertex path: the path
    /// must cross every strip exactly once.
    pub fn check_cauchy_path(&self, path: &[VertexId]) -> Result<CauchyClass, QuadComplexError> {
        if path.len() < 2 {
            return Err(QuadComplexError::InvalidPath);
        }
        let mut path_edges = Vec::new();
        for w in path.windows(2) {
            let e = self.edge_id(w[0], w[1]).ok_or(QuadComplexError::InvalidPath)?;
            path_edges.push(e);
        }
        let strips = self.enumerate_strips();
        for (si, s) in strips.iter().enumerate() {
            let crossings = path_edges.iter().filter(|e| s.traverse.contains(e)).count();
            if crossings > 1 {
                return Ok(CauchyClass::Overdetermined(si));
            }
        }
        for (si, s) in strips.iter().enumerate() {
            let crossings = path_edges.iter().filter(|e| s.traverse.contains(e)).count();
            if crossings == 0 {
                return Ok(CauchyClass::Underdetermined(si));
            }
        }
        Ok(CauchyClass::WellPosed)
    }
}

/// Witness for failed rhombic embeddability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhombicObstruction {
    PeriodicStrip(StripId),
    SelfCrossingStrip(StripId),
    DoubleCrossing(StripId, StripId),
}

impl QuadGraph {
    /// Kenyon-Schlenker criterion: embeddable with rhombic faces iff no
    /// strip is periodic or self-crossing and two strips cross at most once.
    pub fn check_rhombic_embeddable(&self) -> (bool, Option<RhombicObstruction>) {
        let strips = self.enumerate_strips();
        for (si, s) in strips.iter().enumerate() {
            if s.closed {
                return (false, Some(RhombicObstruction::PeriodicStrip(si)));
            }
            let mut f = s.faces.clone();
            f.sort_unstable();
            f.dedup();
            if f.len() != s.faces.len() {
                return (false, Some(RhombicObstruction::SelfCrossingStrip(si)));
            }
        }
        for i in 0..strips.len() {
            for j in (i + 1)..strips.len() {
                let common = strips[i]
                    .faces
                    .iter()
                    .filter(|f| strips[j].faces.contains(f))
                    .count();
                if common > 1 {
                    return (false, Some(RhombicObstruction::DoubleCrossing(i, j)));
                }
            }
        }
        (true, None)
    }
}

/// Labelling of directed edges by slopes; the square of a slope is the
/// undirected edge label, constant along strips.
#[derive(Debug, Clone)]
pub struct EdgeLabelling {
    values: BTreeMap<(VertexId, VertexId), Complex64>,
}

impl EdgeLabelling {
    /// Build from values on one orientation per edge; the opposite
    /// orientation gets the negated slope. Validates that opposite,
    /// equally directed edges of every face carry equal slopes.
    pub fn new(
        graph: &QuadGraph,
        mut theta: BTreeMap<(VertexId, VertexId), Complex64>,
    ) -> Result<Self, QuadComplexError> {
        let keys: Vec<_> = theta.keys().copied().collect();
        for (a, b) in keys {
            let v = theta[&(a, b)];
            theta.insert((b, a), -v);
        }
        for f in 0..graph.n_faces() {
            let q = graph.face(f);
            for k in 0..2 {
                let d1 = (q[k], q[(k + 1) % 4]);
                let d2 = (q[(k + 3) % 4], q[(k + 2) % 4]);
                let (Some(&t1), Some(&t2)) = (theta.get(&d1), theta.get(&d2)) else {
                    return Err(QuadComplexError::InconsistentLift);
                };
                if (t1 - t2).norm() > 1e-12 {
                    return Err(QuadComplexError::InconsistentLift);
                }
            }
        }
        Ok(EdgeLabelling { values: theta })
    }

    /// Positions of a planar realization induce a labelling by increments.
    pub fn from_positions(graph: &QuadGraph) -> Result<Self, QuadComplexError> {
        let mut theta = BTreeMap::new();
        for &(a, b) in graph.edges() {
            let (Some(pa), Some(pb)) = (graph.position(a), graph.position(b)) else {
                return Err(QuadComplexError::InconsistentLift);
            };
            theta.insert((a, b), pb - pa);
        }
        Self::new(graph, theta)
    }

    pub fn slope(&self, a: VertexId, b: VertexId) -> Option<Complex64> {
        self.values.get(&(a, b)).copied()
    }

    /// Undirected label alpha = theta^2.
    pub fn alpha(&self, a: VertexId, b: VertexId) -> Option<Complex64> {
        self.slope(a, b).map(|t| t * t)
    }

    /// Distinct slope values up to sign, matched with tolerance 1e-12.
    pub fn alphabet(&self) -> Vec<Complex64> {
        let mut reps: Vec<Complex64> = Vec::new();
        for (&(a, b), &t) in &self.values {
            if a > b {
                continue;
            }
            let matched = reps
                .iter()
                .any(|&r| (r - t).norm() <= 1e-12 || (r + t).norm() <= 1e-12);
            if !matched {
                reps.push(t);
            }
        }
        reps
    }
}

/// Axis-aligned brick in Z^d; `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brick {
    pub lo: Vec<Option<i64>>,
    pub hi: Vec<Option<i64>>,
}

impl Brick {
    pub fn finite(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b));
        Brick { lo: lo.into_iter().map(Some).collect(), hi: hi.into_iter().map(Some).collect() }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter().enumerate().all(|(k, &v)| {
            self.lo[k].map_or(true, |a| a <= v) && self.hi[k].map_or(true, |b| v <= b)
        })
    }

    /// All lattice points of a finite brick.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = self.lo.iter().map(|v| v.expect("finite brick")).collect();
        let hi: Vec<i64> = self.hi.iter().map(|v| v.expect("finite brick")).collect();
        let mut out = vec![lo.clone()];
        for k in 0..lo.len() {
            let mut next = Vec::new();
            for p in out {
                for v in lo[k]..=hi[k] {
                    let mut q = p.clone();
                    q[k] = v;
                    next.push(q);
                }
            }
            out = next;
        }
        let mut set: BTreeSet<Vec<i64>> = out.into_iter().collect();
        let out: Vec<_> = core::mem::take(&mut set).into_iter().collect();
        out
    }
}

/// Hull of a nonempty point set: the minimal brick containing it.
pub fn hull(points: &[Vec<i64>]) -> Brick {
    assert!(!points.is_empty());
    let d = points[0].len();
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in points {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    Brick::finite(lo, hi)
}

/// Fixpoint of elementary-square completion: whenever three vertices of an
/// elementary square are present, the fourth is added. Test oracle for
/// `hull` on connected subcomplexes.
pub fn square_completion_fixpoint(points: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut set: BTreeSet<Vec<i64>> = points.iter().cloned().collect();
    let d = points.first().map_or(0, |p| p.len());
    loop {
        let mut added = Vec::new();
        let snapshot: Vec<Vec<i64>> = set.iter().cloned().collect();
        for p in &snapshot {
            for i in 0..d {
                for j in (i + 1)..d {
                    // treat p as the low corner of the square in axes (i, j)
                    let mut pi = p.clone();
                    pi[i] += 1;
                    let mut pj = p.clone();
                    pj[j] += 1;
                    let mut pij = p.clone();
                    pij[i] += 1;
                    pij[j] += 1;
                    let have = [set.contains(p), set.contains(&pi), set.contains(&pj), set.contains(&pij)];
                    let count = have.iter().filter(|&&b| b).count();
                    if count == 3 {
                        let corners = [p.clone(), pi, pj, pij];
                        for (k, c) in corners.into_iter().enumerate() {
                            if !have[k] {
                                added.push(c);
                            }
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            return set;
        }
        set.extend(added);
    }
}

/// Two-dimensional subcomplex of Z^d: faces are unit squares given by a
/// base point and an axis pair.
#[derive(Debug, Clone)]
pub struct ZdSurface {
    pub dim: usize,
    pub slopes: Vec<Complex64>,
    /// lift of quad-graph vertices, when constructed from one
    pub vertex_lift: Option<Vec<Vec<i64>>>,
    pub faces: BTreeSet<(Vec<i64>, usize, usize)>,
}

impl ZdSurface {
    pub fn from_faces(dim: usize, faces: impl IntoIterator<Item = (Vec<i64>, usize, usize)>) -> Self {
        let faces = faces
            .into_iter()
            .map(|(p, i, j)| if i <= j { (p, i, j) } else { (p, j, i) })
            .collect();
        ZdSurface { dim, slopes: Vec::new(), vertex_lift: None, faces }
    }

    pub fn vertices(&self) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        for (p, i, j) in &self.faces {
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let mut q = p.clone();
                q[*i] += di;
                q[*j] += dj;
                out.insert(q);
            }
        }
        out
    }

    /// Elementary flip on the cube at `corner` spanned by `axes`: the three
    /// faces of the cube incident to `corner` are replaced by the opposite
    /// three, or conversely when the far triple is present.
    pub fn flip(&self, corner: &[i64], axes: (usize, usize, usize)) -> Result<ZdSurface, QuadComplexError> {
        let (i, j, k) = axes;
        if i == j || j == k || i == k || *[i, j, k].iter().max().unwrap() >= self.dim {
            return Err(QuadComplexError::FlipNotApplicable);
        }
        let near = |p: &[i64]| -> [(Vec<i64>, usize, usize); 3] {
            let base = p.to_vec();
            [
                (base.clone(), i.min(j), i.max(j)),
                (base.clone(), j.min(k), j.max(k)),
                (base, i.min(k), i.max(k)),
            ]
        };
        let shift = |p: &[i64], ax: usize| {
            let mut q = p.to_vec();
            q[ax] += 1;
            q
        };
        let near_faces = near(corner);
        let far_faces = [
            (shift(corner, k), i.min(j), i.max(j)),
            (shift(corner, i), j.min(k), j.max(k)),
            (shift(corner, j), i.min(k), i.max(k)),
        ];
        let has = |fs: &[(Vec<i64>, usize, usize)]| fs.iter().all(|f| self.faces.contains(f));
        let (remove, insert) = if has(&near_faces) {
            (near_faces, far_faces)
        } else if has(&far_faces) {
            (far_faces, near_faces)
        } else {
            return Err(QuadComplexError::FlipNotApplicable);
        };
        let mut faces = self.faces.clone();
        for f in &remove {
            faces.remove(f);
        }
        for f in insert {
            if !faces.insert(f) {
                return Err(QuadComplexError::FlipNotApplicable);
            }
        }
        Ok(ZdSurface { dim: self.dim, slopes: self.slopes.clone(), vertex_lift: None, faces })
    }
}

impl QuadGraph {
    /// Lift a quasicrystallic labelled quad-graph into Z^d: adjacent
    /// vertices differ by the unit vector of their slope's class.
    pub fn lift_to_zd(&self, labelling: &EdgeLabelling, base: VertexId) -> Result<ZdSurface, QuadComplexError> {
        let alphabet = labelling.alphabet();
        let d = alphabet.len();
        let class_of = |t: Complex64| -> Result<(usize, i64), QuadComplexError> {
            for (k, &rep) in alphabet.iter().enumerate() {
                if (t - rep).norm() <= 1e-12 {
                    return Ok((k, 1));
                }
                if (t + rep).norm() <= 1e-12 {
                    return Ok((k, -1));
                }
            }
            Err(QuadComplexError::InconsistentLift)
        };
        let mut lift: Vec<Option<Vec<i64>>> = vec![None; self.n_vertices()];
        lift[base] = Some(vec![0; d]);
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            let pv = lift[v].clone().unwrap();
            for w in self.neighbors(v) {
                let t = labelling.slope(v, w).ok_or(QuadComplexError::InconsistentLift)?;
                let (cls, sign) = class_of(t)?;
                let mut pw = pv.clone();
                pw[cls] += sign;
                match &lift[w] {
                    Some(existing) => {
                        if *existing != pw {
                            return Err(QuadComplexError::InconsistentLift);
                        }
                    }
                    None => {
                        lift[w] = Some(pw);
                        queue.push_back(w);
                    }
                }
            }
        }
        if lift.iter().any(|p| p.is_none()) {
            return Err(QuadComplexError::InconsistentLift);
        }
        let lift: Vec<Vec<i64>> = lift.into_iter().map(|p| p.unwrap()).collect();
        // faces must map to unit squares
        let mut faces = BTreeSet::new();
        for f in 0..self.n_faces() {
            let q = self.face(f);
            let ps: Vec<&Vec<i64>> = q.iter().map(|&v| &lift[v]).collect();
            let mut lo = ps[0].clone();
            for p in &ps {
                for k in 0..d {
                    lo[k] = lo[k].min(p[k]);
                }
            }
            let mut axes = Vec::new();
            for k in 0..d {
                let mx = ps.iter().map(|p| p[k]).max().unwrap();
                if mx > lo[k] + 1 {
                    return Err(QuadComplexError::InconsistentLift);
                }
                if mx == lo[k] + 1 {
                    axes.push(k);
                }
            }
            if axes.len() != 2 {
                return Err(QuadComplexError::InconsistentLift);
            }
            faces.insert((lo, axes[0], axes[1]));
        }
        Ok(ZdSurface { dim: d, slopes: alphabet, vertex_lift: Some(lift), faces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_cell_complex(n: usize, m: usize) -> CellComplex {
        // (n+1) x (m+1) vertices, n x m quadrilateral cells
        let idx = |i: usize, j: usize| j * (n + 1) + i;
        let mut faces = Vec::new();
        for j in 0..m {
            for i in 0..n {
                faces.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        CellComplex { n_vertices: (n + 1) * (m + 1), faces, positions: None }
    }

    #[test]
    fn double_of_3x3_grid_graph() {
        // 3x3 vertex grid: 9 vertices, 12 edges, 4 bounded faces
        let g = grid_cell_complex(2, 2);
        let d = QuadGraph::double(&g).unwrap();
        assert_eq!(d.n_vertices(), 9 + 4);
        assert_eq!(d.n_faces(), 12);
    }

    #[test]
    fn double_of_single_quadrilateral() {
        let g = CellComplex { n_vertices: 4, faces: vec![vec![0, 1, 2, 3]], positions: None };
        let d = QuadGraph::double(&g).unwrap();
        assert_eq!(d.n_vertices(), 5);
        assert_eq!(d.n_faces(), 4);
    }

    #[test]
    fn double_of_single_edge_fails() {
        let g = CellComplex { n_vertices: 2, faces: vec![], positions: None };
        assert!(matches!(
            QuadGraph::double(&g),
            Err(QuadComplexError::NonRegularComplex)
        ));
    }

    #[test]
    fn double_counts_and_grid_euler() {
        for (n, m) in [(2, 2), (3, 2), (4, 3)] {
            let g = grid_cell_complex(n, m);
            let d = QuadGraph::double(&g).unwrap();
            // |F(D)| = |E(G)|, V(D) = V(G) + bounded faces
            assert_eq!(d.n_faces(), n * (m + 1) + m * (n + 1));
            assert_eq!(d.n_vertices(), (n + 1) * (m + 1) + n * m);
        }
        // Euler relation of the underlying disk for proper quad-graphs
        for (n, m) in [(1, 1), (3, 2), (4, 4)] {
            let d = QuadGraph::grid(n, m);
            let euler = d.n_vertices() as i64 - d.n_edges() as i64 + d.n_faces() as i64;
            assert_eq!(euler, 1);
        }
    }

    #[test]
    fn strips_of_grid() {
        for (n, m) in [(3, 2), (4, 4), (1, 1)] {
            let d = QuadGraph::grid(n, m);
            let strips = d.enumerate_strips();
            assert_eq!(strips.len(), n + m, "{n}x{m}");
            // every face in exactly two strips
            for f in 0..d.n_faces() {
                let c = strips.iter().filter(|s| s.faces.contains(&f)).count();
                assert_eq!(c, 2);
            }
            // traverse edges partition E(D)
            let mut seen = BTreeSet::new();
            for s in &strips {
                for &e in &s.traverse {
                    assert!(seen.insert(e), "edge {e} in two strips");
                }
            }
            assert_eq!(seen.len(), d.n_edges());
        }
    }

    #[test]
    fn strips_of_rhombic_flower() {
        let d = QuadGraph::rhombic_flower(6);
        let strips = d.enumerate_strips();
        assert_eq!(strips.len(), 6);
        for f in 0..d.n_faces() {
            let c = strips.iter().filter(|s| s.faces.contains(&f)).count();
            assert_eq!(c, 2);
        }
        let mut seen = BTreeSet::new();
        for s in &strips {
            for &e in &s.traverse {
                assert!(seen.insert(e));
            }
        }
        assert_eq!(seen.len(), d.n_edges());
    }

    #[test]
    fn cauchy_paths_on_grid() {
        let n = 4;
        let d = QuadGraph::grid(n, n);
        let idx = |i: usize, j: usize| j * (n + 1) + i;
        // staircase corner to corner
        let mut stair = vec![idx(0, 0)];
        for k in 0..n {
            stair.push(idx(k + 1, k));
            stair.push(idx(k + 1, k + 1));
        }
        assert_eq!(d.check_cauchy_path(&stair).unwrap(), CauchyClass::WellPosed);
        // bottom boundary row: column strips each crossed once, row strips missed
        let row: Vec<_> = (0..=n).map(|i| idx(i, 0)).collect();
        assert!(matches!(d.check_cauchy_path(&row).unwrap(), CauchyClass::Underdetermined(_)));
        // path with two edges in the same column strip
        let zigzag = vec![idx(0, 0), idx(1, 0), idx(1, 1), idx(0, 1), idx(0, 2)];
        // edges (0,0)-(1,0) and (1,1)-(0,1) both cross the first column strip
        assert!(matches!(d.check_cauchy_path(&zigzag).unwrap(), CauchyClass::Overdetermined(_)));
        // disconnected path rejected
        assert_eq!(
            d.check_cauchy_path(&[idx(0, 0), idx(2, 2)]).unwrap_err(),
            QuadComplexError::InvalidPath
        );
    }

    #[test]
    fn rhombic_embeddability() {
        let (ok, w) = QuadGraph::grid(3, 3).check_rhombic_embeddable();
        assert!(ok && w.is_none());
        let (ok, _) = QuadGraph::grid(1, 1).check_rhombic_embeddable();
        assert!(ok);
        // folded complex: two strips crossing twice
        let colors = vec![
            Color::Black, // 1 -> 0
            Color::White, // 2 -> 1
            Color::Black, // 3 -> 2
            Color::White, // 4 -> 3
            Color::Black, // 5 -> 4
            Color::White, // 6 -> 5
            Color::Black, // 7 -> 6
            Color::White, // 8 -> 7
        ];
        let faces = vec![[0, 1, 2, 3], [2, 3, 4, 5], [1, 2, 5, 6], [4, 5, 6, 7]];
        let d = QuadGraph::new(colors, vec![None; 8], faces).unwrap();
        let (ok, witness) = d.check_rhombic_embeddable();
        assert!(!ok);
        assert!(matches!(witness, Some(RhombicObstruction::DoubleCrossing(_, _))));
    }

    #[test]
    fn lift_square_grid_to_z2() {
        let d = QuadGraph::grid(3, 3);
        let lab = EdgeLabelling::from_positions(&d).unwrap();
        let surf = d.lift_to_zd(&lab, 0).unwrap();
        assert_eq!(surf.dim, 2);
        let lift = surf.vertex_lift.as_ref().unwrap();
        for v in 0..d.n_vertices() {
            let p = d.position(v).unwrap();
            // identity lift up to axis permutation/sign fixed by the alphabet
            let expect: Vec<i64> = alloc::vec![p.re as i64, p.im as i64];
            let got = &lift[v];
            assert_eq!(
                got.iter().map(|v| v.abs()).sum::<i64>(),
                expect.iter().sum::<i64>()
            );
        }
        assert_eq!(surf.faces.len(), d.n_faces());
    }

    #[test]
    fn lift_rhombic_flower_to_z3() {
        let d = QuadGraph::rhombic_flower(6);
        // slopes of the flower edges: 3 directions for k = 6
        let lab = EdgeLabelling::from_positions(&d).unwrap();
        let surf = d.lift_to_zd(&lab, 0).unwrap();
        assert_eq!(surf.dim, 3);
        assert_eq!(surf.faces.len(), 6);
    }

    #[test]
    fn lift_rejects_random_slopes() {
        let d = QuadGraph::grid(2, 2);
        let mut theta = BTreeMap::new();
        let mut x = 1.0f64;
        for &(a, b) in d.edges() {
            x += 0.37;
            theta.insert((a, b), Complex64::new(x.sin(), x.cos()));
        }
        // random slopes violate the labelling property already
        assert!(EdgeLabelling::new(&d, theta).is_err());
    }

    #[test]
    fn hull_of_axes_and_point() {
        let mut pts = Vec::new();
        for x in 0..=3 {
            pts.push(vec![x, 0]);
        }
        for y in 0..=2 {
            pts.push(vec![0, y]);
        }
        let b = hull(&pts);
        assert_eq!(b, Brick::finite(vec![0, 0], vec![3, 2]));
        assert_eq!(hull(&[vec![5, -1, 2]]), Brick::finite(vec![5, -1, 2], vec![5, -1, 2]));
        // completion oracle agrees on this connected subcomplex
        let fix = square_completion_fixpoint(&pts);
        let brick_pts: BTreeSet<Vec<i64>> = b.points().into_iter().collect();
        assert_eq!(fix, brick_pts);
    }

    #[test]
    fn hull_completion_oracle_random_walks() {
        use rand::Rng;
        let mut rng = crate::scalar::seeded_rng(11);
        for _ in 0..60 {
            let d = 3;
            let mut p = vec![0i64; d];
            let mut pts = vec![p.clone()];
            for _ in 0..6 {
                let ax = rng.gen_range(0..d);
                let sign = if rng.gen::<bool>() { 1 } else { -1 };
                p[ax] = (p[ax] + sign).clamp(0, 2);
                pts.push(p.clone());
            }
            let fix = square_completion_fixpoint(&pts);
            let brick_pts: BTreeSet<Vec<i64>> = hull(&pts).points().into_iter().collect();
            assert_eq!(fix, brick_pts, "walk {pts:?}");
        }
    }

    fn octant_surface() -> ZdSurface {
        // three coordinate-plane patches of the [0,2]^3 brick
        let mut faces = Vec::new();
        for a in 0..2i64 {
            for b in 0..2i64 {
                faces.push((vec![a, b, 0], 0, 1));
                faces.push((vec![a, 0, b], 0, 2));
                faces.push((vec![0, a, b], 1, 2));
            }
        }
        ZdSurface::from_faces(3, faces)
    }

    #[test]
    fn flip_at_origin_and_involution() {
        let s = octant_surface();
        let t = s.flip(&[0, 0, 0], (0, 1, 2)).unwrap();
        assert!(t.vertices().contains(&vec![1, 1, 1]));
        assert!(!t.faces.contains(&(vec![0, 0, 0], 0, 1)));
        let back = t.flip(&[0, 0, 0], (0, 1, 2)).unwrap();
        assert_eq!(back.faces, s.faces);
        // not applicable away from the corner
        assert!(s.flip(&[1, 1, 1], (0, 1, 2)).is_err());
    }

    #[test]
    fn flips_reach_every_hull_point() {
        // BFS over flip moves from the octant surface of the 3x3x3 brick
        let start = octant_surface();
        let mut seen_surfaces: BTreeSet<Vec<(Vec<i64>, usize, usize)>> = BTreeSet::new();
        let mut all_points: BTreeSet<Vec<i64>> = start.vertices();
        let key = |s: &ZdSurface| s.faces.iter().cloned().collect::<Vec<_>>();
        let mut queue = VecDeque::from([start.clone()]);
        seen_surfaces.insert(key(&start));
        while let Some(s) = queue.pop_front() {
            for corner in s.vertices() {
                let t = match s.flip(&corner, (0, 1, 2)) {
                    Ok(t) => t,
                    Err(_) => continue,
                };
                all_points.extend(t.vertices());
                if seen_surfaces.insert(key(&t)) {
                    queue.push_back(t);
                }
            }
        }
        // hull of the octant surface is the full 3x3x3 brick
        assert_eq!(all_points.len(), 27);
        // number of monotone surfaces in the 2x2x2 box of cells: 20
        assert_eq!(seen_surfaces.len(), 20);
    }

    #[test]
    fn flower_and_interior_vertices_of_grid() {
        let d = QuadGraph::grid(2, 2);
        let idx = |i: usize, j: usize| j * 3 + i;
        let interior = d.interior_vertices();
        assert_eq!(interior, alloc::vec![idx(1, 1)]);
        let fl = d.flower(idx(1, 1)).unwrap();
        assert_eq!(fl.len(), 4);
    }
}
