//! Van Kampen diagrams as combinatorial maps: validation, `t`-bands,
//! `t`-cables and the dual graph with its Euler count.
//!
//! A diagram is a set of darts with a fixed-point-free reversal and a face
//! successor `next`. Vertices are the orbits of `d -> next(rev(d))`. Cell
//! faces read their relator along `next`; the boundary face reads the inverse
//! of the boundary word.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tietze::Presentation;
use crate::word::{Gen, Letter, RawWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dart {
    pub rev: usize,
    pub next: usize,
    pub label: Letter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FaceKind {
    Boundary,
    /// Reads `rotate_left(relator^sign, rotation)` from `dart0`.
    Cell { relator: usize, rotation: usize, sign: i8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub kind: FaceKind,
    pub dart0: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub darts: Vec<Dart>,
    pub faces: Vec<Face>,
}

/// Role of a face in the band analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellClass {
    Boundary,
    /// Conjugate of `t^-1 x t y^-1` or its inverse.
    TCell,
    /// Conjugate of `y^-1 x y x^-2` or its inverse.
    BaseCell,
    RCell,
}

/// Builds a diagram from edges and faces given as signed edge references:
/// `+e` (encoded `e + 1`) reads the label of edge `e`, `-(e + 1)` its inverse.
/// Each edge must occur once with each sign. Cell rotation and sign are found
/// by matching the face word against the relator.
pub fn from_edges(
    p: &Presentation,
    labels: &[Letter],
    faces: &[(Option<usize>, Vec<i64>)],
) -> Result<Diagram> {
    let n = labels.len();
    let dart_of = |r: i64| -> Result<usize> {
        let e = usize::try_from(r.unsigned_abs() - 1).map_err(|_| Error::Diagram("edge".into()))?;
        if r == 0 || e >= n {
            return Err(Error::Diagram(format!("edge reference {r} out of range")));
        }
        Ok(if r > 0 { 2 * e } else { 2 * e + 1 })
    };
    let mut darts: Vec<Option<Dart>> = vec![None; 2 * n];
    let mut out_faces = Vec::new();
    for (relator, cycle) in faces {
        let ids: Vec<usize> = cycle.iter().map(|&r| dart_of(r)).collect::<Result<_>>()?;
        for (i, &d) in ids.iter().enumerate() {
            if darts[d].is_some() {
                return Err(Error::Diagram(format!("edge reference {} used twice", cycle[i])));
            }
            let e = d / 2;
            let label = if d % 2 == 0 { labels[e] } else { labels[e].inverse() };
            darts[d] = Some(Dart {
                rev: d ^ 1,
                next: ids[(i + 1) % ids.len()],
                label,
            });
        }
        let kind = match relator {
            None => FaceKind::Boundary,
            Some(r) => {
                let word = RawWord(ids.iter().map(|&d| darts[d].expect("set").label).collect());
                let rel = p
                    .relators
                    .get(*r)
                    .ok_or_else(|| Error::Diagram(format!("no relator {r}")))?;
                let (rotation, sign) = match_relator(&word, rel)
                    .ok_or_else(|| Error::Diagram(format!("face `{word}` does not read relator {r}")))?;
                FaceKind::Cell {
                    relator: *r,
                    rotation,
                    sign,
                }
            }
        };
        out_faces.push(Face {
            kind,
            dart0: ids.first().copied(),
        });
    }
    let darts = darts
        .into_iter()
        .enumerate()
        .map(|(d, x)| x.ok_or_else(|| Error::Diagram(format!("dart {d} belongs to no face"))))
        .collect::<Result<_>>()?;
    Ok(Diagram {
        darts,
        faces: out_faces,
    })
}

fn match_relator(word: &RawWord, rel: &RawWord) -> Option<(usize, i8)> {
    if word.len() != rel.len() {
        return None;
    }
    for sign in [1i8, -1] {
        let r = if sign > 0 { rel.clone() } else { rel.inverse() };
        for k in 0..r.len().max(1) {
            if r.rotate_left(k) == *word {
                return Some((k, sign));
            }
        }
    }
    None
}

fn classify_relator(rel: &RawWord) -> CellClass {
    let t_cell: RawWord = "T x t Y".parse().expect("literal");
    let base: RawWord = "Y x y X^2".parse().expect("literal");
    if match_relator(rel, &t_cell).is_some() {
        CellClass::TCell
    } else if match_relator(rel, &base).is_some() {
        CellClass::BaseCell
    } else {
        CellClass::RCell
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "V = {}, E = {}, F = {}", self.vertices, self.edges, self.faces)?;
        if self.is_valid() {
            writeln!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

/// Checks every structural invariant and reports all violations found.
pub fn validate(d: &Diagram, p: &Presentation) -> ValidationReport {
    let mut v = Vec::new();
    let n = d.darts.len();
    let mut report = ValidationReport {
        edges: n / 2,
        faces: d.faces.len(),
        ..Default::default()
    };
    for (i, dart) in d.darts.iter().enumerate() {
        if dart.rev >= n || dart.next >= n {
            v.push(format!("dart {i} points outside the dart table"));
        }
    }
    if !v.is_empty() {
        report.violations = v;
        return report;
    }
    for (i, dart) in d.darts.iter().enumerate() {
        if dart.rev == i || d.darts[dart.rev].rev != i {
            v.push(format!("reversal is not a fixed-point-free involution at dart {i}"));
        } else if d.darts[dart.rev].label != dart.label.inverse() {
            v.push(format!("dart {i} and its reverse carry non-inverse labels"));
        }
    }
    let mut seen_next = vec![false; n];
    for dart in &d.darts {
        if std::mem::replace(&mut seen_next[dart.next], true) {
            v.push(format!("dart {} is the successor of two darts", dart.next));
        }
    }
    if !v.is_empty() {
        report.violations = v;
        return report;
    }

    let boundaries = d.faces.iter().filter(|f| f.kind == FaceKind::Boundary).count();
    if boundaries != 1 {
        v.push(format!("expected one boundary face, found {boundaries}"));
    }
    let mut owner = vec![None; n];
    for (fi, face) in d.faces.iter().enumerate() {
        let Some(d0) = face.dart0 else {
            if n > 0 || face.kind != FaceKind::Boundary {
                v.push(format!("face {fi} has no darts"));
            }
            continue;
        };
        if d0 >= n {
            v.push(format!("face {fi} starts at missing dart {d0}"));
            continue;
        }
        let cycle = face_cycle(d, d0);
        let mut clash = false;
        for &x in &cycle {
            if let Some(other) = owner[x].replace(fi) {
                v.push(format!("dart {x} lies on faces {other} and {fi}"));
                clash = true;
            }
        }
        if clash {
            continue;
        }
        if let FaceKind::Cell { relator, rotation, sign } = face.kind {
            let word = RawWord(cycle.iter().map(|&x| d.darts[x].label).collect());
            match p.relators.get(relator) {
                None => v.push(format!("face {fi} names missing relator {relator}")),
                Some(r) => {
                    let r = if sign > 0 { r.clone() } else { r.inverse() };
                    if r.len() != word.len() || r.rotate_left(rotation) != word {
                        v.push(format!(
                            "face {fi} reads `{word}`, not relator {relator} (rotation {rotation}, sign {sign})"
                        ));
                    }
                }
            }
        }
    }
    if let Some(x) = owner.iter().position(Option::is_none) {
        v.push(format!("dart {x} lies on no declared face"));
    }

    let vertices = vertex_ids(d);
    report.vertices = if n == 0 { 1 } else { vertices.iter().max().map_or(0, |m| m + 1) };
    if !is_connected(d) {
        v.push("diagram is not connected".into());
    }
    let euler = report.vertices as i64 - report.edges as i64 + report.faces as i64;
    if euler != 2 {
        v.push(format!("V - E + F = {euler}, expected 2 for a disc"));
    }
    report.violations = v;
    report
}

fn face_cycle(d: &Diagram, d0: usize) -> Vec<usize> {
    let mut out = vec![d0];
    let mut x = d.darts[d0].next;
    while x != d0 && out.len() <= d.darts.len() {
        out.push(x);
        x = d.darts[x].next;
    }
    out
}

/// Vertex id of each dart's tail.
fn vertex_ids(d: &Diagram) -> Vec<usize> {
    let n = d.darts.len();
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if id[s] != usize::MAX {
            continue;
        }
        let mut x = s;
        while id[x] == usize::MAX {
            id[x] = count;
            x = d.darts[d.darts[x].rev].next;
        }
        count += 1;
    }
    id
}

fn is_connected(d: &Diagram) -> bool {
    let n = d.darts.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for y in [d.darts[x].rev, d.darts[x].next] {
            if !std::mem::replace(&mut seen[y], true) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Face index, cycle and position of every dart of a valid diagram.
struct Layout {
    face_of: Vec<usize>,
    pos: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    class: Vec<CellClass>,
    boundary: usize,
}

impl Layout {
    fn new(d: &Diagram, p: &Presentation) -> Result<Self> {
        let report = validate(d, p);
        if !report.is_valid() {
            return Err(Error::Diagram(format!(
                "invalid diagram: {}",
                report.violations.join("; ")
            )));
        }
        let n = d.darts.len();
        let mut face_of = vec![0; n];
        let mut pos = vec![0; n];
        let mut cycles = Vec::new();
        let mut class = Vec::new();
        let mut boundary = 0;
        for (fi, face) in d.faces.iter().enumerate() {
            let cycle = face.dart0.map(|d0| face_cycle(d, d0)).unwrap_or_default();
            for (i, &x) in cycle.iter().enumerate() {
                face_of[x] = fi;
                pos[x] = i;
            }
            cycles.push(cycle);
            class.push(match face.kind {
                FaceKind::Boundary => {
                    boundary = fi;
                    CellClass::Boundary
                }
                FaceKind::Cell { relator, .. } => classify_relator(&p.relators[relator]),
            });
        }
        Ok(Layout {
            face_of,
            pos,
            cycles,
            class,
            boundary,
        })
    }

    fn t_darts(&self, d: &Diagram, face: usize) -> Vec<usize> {
        self.cycles[face]
            .iter()
            .copied()
            .filter(|&x| d.darts[x].label.gen == Gen::T)
            .collect()
    }

    /// Index of dart `x` among the `t`-darts of its face.
    fn t_index(&self, d: &Diagram, x: usize) -> usize {
        let face = self.face_of[x];
        self.cycles[face][..self.pos[x]]
            .iter()
            .filter(|&&y| d.darts[y].label.gen == Gen::T)
            .count()
    }
}

/// Boundary word read counterclockwise, without free reduction.
pub fn boundary_word(d: &Diagram, p: &Presentation) -> Result<RawWord> {
    let l = Layout::new(d, p)?;
    let cycle = &l.cycles[l.boundary];
    Ok(RawWord(cycle.iter().map(|&x| d.darts[x].label).collect()).inverse())
}

/// Where a band leaves the `t`-cells: a `t`-dart on an r-cell or the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BandEnd {
    pub face: usize,
    pub dart: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TBand {
    /// `t`-cells in order from `ends[0]` to `ends[1]`.
    pub cells: Vec<usize>,
    pub is_ring: bool,
    /// Absent for rings.
    pub ends: Option<[BandEnd; 2]>,
}

impl TBand {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Every `t`-edge lies on exactly one band. A `t`-edge between two
/// non-`t`-cells is a band with no cells.
pub fn trace_bands(d: &Diagram, p: &Presentation) -> Result<Vec<TBand>> {
    let l = Layout::new(d, p)?;
    trace_with(d, &l)
}

fn trace_with(d: &Diagram, l: &Layout) -> Result<Vec<TBand>> {
    let mut bands = Vec::new();
    let mut done = vec![false; d.faces.len()];
    for (fi, class) in l.class.iter().enumerate() {
        if *class != CellClass::TCell || done[fi] {
            continue;
        }
        let td = l.t_darts(d, fi);
        if td.len() != 2 {
            return Err(Error::Diagram(format!("t-cell {fi} has {} t-edges", td.len())));
        }
        done[fi] = true;
        // walk out through each t-edge
        let mut halves = Vec::new();
        let mut ring = false;
        for &start in &td {
            let mut cells = Vec::new();
            let mut x = start;
            let end = loop {
                let y = d.darts[x].rev;
                let g = l.face_of[y];
                if g == fi {
                    ring = true;
                    break None;
                }
                if l.class[g] != CellClass::TCell {
                    break Some(BandEnd { face: g, dart: y });
                }
                if done[g] {
                    return Err(Error::Diagram(format!("t-cell {g} is reached by two bands")));
                }
                let other = l.t_darts(d, g);
                if other.len() != 2 {
                    return Err(Error::Diagram(format!("t-cell {g} has {} t-edges", other.len())));
                }
                done[g] = true;
                cells.push(g);
                x = if other[0] == y { other[1] } else { other[0] };
            };
            halves.push((cells, end));
            if ring {
                break;
            }
        }
        if ring {
            let (mut cells, _) = halves.remove(0);
            cells.insert(0, fi);
            bands.push(TBand {
                cells,
                is_ring: true,
                ends: None,
            });
        } else {
            let (b, e1) = halves.pop().expect("two halves");
            let (a, e0) = halves.pop().expect("two halves");
            let mut cells: Vec<usize> = a.into_iter().rev().collect();
            cells.push(fi);
            cells.extend(b);
            bands.push(TBand {
                cells,
                is_ring: false,
                ends: Some([e0.expect("open band"), e1.expect("open band")]),
            });
        }
    }
    // bare t-edges
    for (x, dart) in d.darts.iter().enumerate() {
        if dart.label.gen != Gen::T || x > dart.rev {
            continue;
        }
        let (f, g) = (l.face_of[x], l.face_of[dart.rev]);
        if l.class[f] != CellClass::TCell && l.class[g] != CellClass::TCell {
            bands.push(TBand {
                cells: Vec::new(),
                is_ring: false,
                ends: Some([BandEnd { face: f, dart: x }, BandEnd { face: g, dart: dart.rev }]),
            });
        }
    }
    Ok(bands)
}

/// One end of a cable: the face and its anchor darts in face order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CableEnd {
    pub face: usize,
    pub darts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TCable {
    /// Indices into the band list, ordered along `ends[0]`.
    pub bands: Vec<usize>,
    pub ends: [CableEnd; 2],
}

/// Groups open bands into maximal cables. Two bands are consecutive when
/// they join consecutive `t`-letters of the same two r-cells and the region
/// between them, entered from either r-cell, holds only `t`-cells and
/// base-group cells.
pub fn group_cables(d: &Diagram, p: &Presentation, bands: &[TBand]) -> Result<Vec<TCable>> {
    let l = Layout::new(d, p)?;
    Ok(group_with(d, &l, bands))
}

fn group_with(d: &Diagram, l: &Layout, bands: &[TBand]) -> Vec<TCable> {
    let open: Vec<usize> = (0..bands.len()).filter(|&i| !bands[i].is_ring).collect();
    let mut parent: Vec<usize> = (0..bands.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    // orientation of each band inside its cable: whether ends are swapped
    let mut flip = vec![false; bands.len()];
    for &a in &open {
        for &b in &open {
            if a == b {
                continue;
            }
            let (ea, eb) = (bands[a].ends.expect("open"), bands[b].ends.expect("open"));
            for (sa, sb) in [(false, false), (false, true), (true, false), (true, true)] {
                let (a0, a1) = if sa { (ea[1], ea[0]) } else { (ea[0], ea[1]) };
                let (b0, b1) = if sb { (eb[1], eb[0]) } else { (eb[0], eb[1]) };
                if consecutive(d, l, bands, (a, a0, a1), (b, b0, b1)) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[rb] = ra;
                        flip[b] = sa ^ sb ^ flip[a];
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &a in &open {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(a);
    }
    groups
        .into_values()
        .map(|members| {
            let end = |i: usize, side: usize| {
                let e = bands[i].ends.expect("open");
                if flip[i] {
                    e[1 - side]
                } else {
                    e[side]
                }
            };
            let mut ordered = members.clone();
            ordered.sort_by_key(|&i| l.pos[end(i, 0).dart]);
            let make = |side: usize| {
                let face = end(ordered[0], side).face;
                let mut darts: Vec<usize> = ordered.iter().map(|&i| end(i, side).dart).collect();
                darts.sort_by_key(|&x| l.pos[x]);
                CableEnd {
                    face,
                    darts: cyclic_run(l, darts),
                }
            };
            TCable {
                ends: [make(0), make(1)],
                bands: ordered,
            }
        })
        .collect()
}

/// Reorders darts of one face so that they form a contiguous cyclic run.
fn cyclic_run(l: &Layout, darts: Vec<usize>) -> Vec<usize> {
    if darts.len() < 2 {
        return darts;
    }
    let len = l.cycles[l.face_of[darts[0]]].len();
    let k = darts.len();
    let start = (0..k)
        .max_by_key(|&i| {
            let prev = l.pos[darts[(i + k - 1) % k]];
            (l.pos[darts[i]] + len - prev) % len
        })
        .expect("nonempty");
    (0..k).map(|i| darts[(start + i) % k]).collect()
}

fn consecutive(
    d: &Diagram,
    l: &Layout,
    bands: &[TBand],
    (a, a0, a1): (usize, BandEnd, BandEnd),
    (b, b0, b1): (usize, BandEnd, BandEnd),
) -> bool {
    let rcell = |f: usize| l.class[f] == CellClass::RCell;
    if a0.face != b0.face || a1.face != b1.face || !rcell(a0.face) || !rcell(a1.face) {
        return false;
    }
    let t0 = l.t_darts(d, a0.face).len();
    let t1 = l.t_darts(d, a1.face).len();
    if l.t_index(d, b0.dart) != (l.t_index(d, a0.dart) + 1) % t0
        || (l.t_index(d, b1.dart) + 1) % t1 != l.t_index(d, a1.dart)
    {
        return false;
    }
    let mut walls: BTreeSet<usize> = bands[a].cells.iter().chain(&bands[b].cells).copied().collect();
    walls.insert(a0.face);
    walls.insert(a1.face);
    let mut seeds = segment_faces(d, l, a0.dart, b0.dart);
    seeds.extend(segment_faces(d, l, b1.dart, a1.dart));
    let region = flood(d, l, &walls, seeds);
    region
        .iter()
        .all(|&f| matches!(l.class[f], CellClass::TCell | CellClass::BaseCell))
}

/// Faces touching the part of a face's boundary strictly after dart `from`
/// and up to dart `to`: faces across its darts and around its vertices.
fn segment_faces(d: &Diagram, l: &Layout, from: usize, to: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut x = d.darts[from].next;
    loop {
        // faces around the tail of x
        let mut y = x;
        loop {
            out.push(l.face_of[y]);
            y = d.darts[d.darts[y].rev].next;
            if y == x {
                break;
            }
        }
        if x == to {
            break;
        }
        out.push(l.face_of[d.darts[x].rev]);
        x = d.darts[x].next;
        if x == from {
            break;
        }
    }
    out
}

fn flood(d: &Diagram, l: &Layout, walls: &BTreeSet<usize>, seeds: Vec<usize>) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<usize> = seeds.into_iter().filter(|f| !walls.contains(f)).collect();
    while let Some(f) = queue.pop_front() {
        if !seen.insert(f) {
            continue;
        }
        for &x in &l.cycles[f] {
            let g = l.face_of[d.darts[x].rev];
            if !walls.contains(&g) && !seen.contains(&g) {
                queue.push_back(g);
            }
        }
    }
    seen
}

/// Dual graph: r-cells joined by cables whose both ends are r-cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<usize>,
    /// `(cable, face at end 0, face at end 1)`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl DualGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  f{v};");
        }
        for (c, a, b) in &self.edges {
            let _ = writeln!(s, "  f{a} -- f{b} [label=\"c{c}\"];");
        }
        s.push_str("}\n");
        s
    }
}

pub fn dual_graph(d: &Diagram, p: &Presentation, cables: &[TCable]) -> Result<DualGraph> {
    let l = Layout::new(d, p)?;
    Ok(dual_with(&l, cables))
}

fn dual_with(l: &Layout, cables: &[TCable]) -> DualGraph {
    let vertices = (0..l.class.len()).filter(|&f| l.class[f] == CellClass::RCell).collect();
    let edges = cables
        .iter()
        .enumerate()
        .filter(|(_, c)| c.ends.iter().all(|e| l.class[e.face] == CellClass::RCell))
        .map(|(i, c)| (i, c.ends[0].face, c.ends[1].face))
        .collect();
    DualGraph { vertices, edges }
}

/// Euler count of one connected component of the dual graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentAudit {
    pub cells: Vec<usize>,
    pub v: usize,
    pub e: usize,
    /// Bounded faces.
    pub f: usize,
    /// Sizes of the bounded faces.
    pub face_sizes: Vec<usize>,
    pub min_face: Option<usize>,
    /// Loops count twice.
    pub min_degree: Option<usize>,
    pub one_edge_faces: usize,
    pub two_edge_faces: usize,
    /// No r-cell of another component lies in a bounded face.
    pub innermost: bool,
    /// Faces of size at least 3 and degrees at least 6 make `1 <= V - E/3 <= 0`.
    pub chain_fires: bool,
}

impl ComponentAudit {
    pub fn euler(&self) -> i64 {
        self.v as i64 - self.e as i64 + self.f as i64
    }
}

impl fmt::Display for ComponentAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        write!(
            f,
            "cells {:?}: V = {}, E = {}, F = {}, V - E + F = {}, face sizes {:?}, min degree {}, \
             1-edge faces {}, 2-edge faces {}, innermost {}, chain {}",
            self.cells,
            self.v,
            self.e,
            self.f,
            self.euler(),
            self.face_sizes,
            opt(self.min_degree),
            self.one_edge_faces,
            self.two_edge_faces,
            self.innermost,
            if self.chain_fires { "fires" } else { "does not fire" }
        )
    }
}

/// Audits every dual component of a diagram whose boundary has no `t`.
pub fn euler_audit(d: &Diagram, p: &Presentation) -> Result<Vec<ComponentAudit>> {
    let l = Layout::new(d, p)?;
    if l.cycles[l.boundary].iter().any(|&x| d.darts[x].label.gen == Gen::T) {
        return Err(Error::Diagram("the boundary word contains t".into()));
    }
    let bands = trace_with(d, &l)?;
    let cables = group_with(d, &l, &bands);
    let dual = dual_with(&l, &cables);

    // components by union-find over dual edges
    let mut comp: BTreeMap<usize, usize> = dual.vertices.iter().map(|&v| (v, v)).collect();
    fn root(c: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = c[&x];
        if p == x {
            return x;
        }
        let r = root(c, p);
        c.insert(x, r);
        r
    }
    for &(_, a, b) in &dual.edges {
        let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
        comp.insert(rb, ra);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &dual.vertices {
        let r = root(&mut comp, v);
        groups.entry(r).or_default().push(v);
    }

    let mut out = Vec::new();
    for cells in groups.into_values() {
        let edges: Vec<usize> = dual
            .edges
            .iter()
            .filter(|(_, a, _)| cells.contains(a))
            .map(|(c, _, _)| *c)
            .collect();
        let mut walls: BTreeSet<usize> = cells.iter().copied().collect();
        for &c in &edges {
            for &b in &cables[c].bands {
                walls.extend(&bands[b].cells);
            }
        }
        // regions outside the walls
        let mut region = vec![usize::MAX; d.faces.len()];
        let mut nregions = 0;
        for f in 0..d.faces.len() {
            if walls.contains(&f) || region[f] != usize::MAX {
                continue;
            }
            for g in flood(d, &l, &walls, vec![f]) {
                region[g] = nregions;
            }
            nregions += 1;
        }
        let outer = region[l.boundary];
        let innermost = (0..d.faces.len())
            .all(|f| l.class[f] != CellClass::RCell || walls.contains(&f) || region[f] == outer);

        // dual darts: (cable, side); rotation at each cell by anchor position
        let darts: Vec<(usize, usize)> = edges.iter().flat_map(|&c| [(c, 0), (c, 1)]).collect();
        let at = |dd: (usize, usize)| &cables[dd.0].ends[dd.1];
        let mut rotation: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &dd) in darts.iter().enumerate() {
            rotation.entry(at(dd).face).or_default().push(i);
        }
        for list in rotation.values_mut() {
            list.sort_by_key(|&i| l.pos[at(darts[i]).darts[0]]);
        }
        let sigma = |i: usize| {
            let list = &rotation[&at(darts[i]).face];
            let k = list.iter().position(|&j| j == i).expect("listed");
            list[(k + 1) % list.len()]
        };
        let alpha = |i: usize| i ^ 1;
        let mut visited = vec![false; darts.len()];
        let mut faces: Vec<(usize, bool)> = Vec::new();
        for s in 0..darts.len() {
            if visited[s] {
                continue;
            }
            let mut size = 0;
            let mut touches_outer = false;
            let mut i = s;
            while !visited[i] {
                visited[i] = true;
                size += 1;
                // corner at the far end of dart i, between its cable and the next
                let from_end = at(darts[alpha(i)]);
                let j = sigma(alpha(i));
                let to_end = at(darts[j]);
                let last = *from_end.darts.last().expect("anchored");
                let first = to_end.darts[0];
                touches_outer |= segment_faces(d, &l, last, first)
                    .into_iter()
                    .any(|f| !walls.contains(&f) && region[f] == outer);
                i = j;
            }
            faces.push((size, touches_outer));
        }
        // drop exactly one outer face
        let mut face_sizes: Vec<usize> = Vec::new();
        let mut dropped = faces.is_empty();
        for (size, outer_face) in faces {
            if outer_face && !dropped {
                dropped = true;
            } else {
                face_sizes.push(size);
            }
        }
        if !dropped {
            face_sizes.pop();
        }
        let degree = |v: usize| rotation.get(&v).map_or(0, Vec::len);
        let min_degree = cells.iter().map(|&v| degree(v)).min();
        let min_face = face_sizes.iter().copied().min();
        let v = cells.len();
        out.push(ComponentAudit {
            v,
            e: edges.len(),
            f: face_sizes.len(),
            one_edge_faces: face_sizes.iter().filter(|&&s| s == 1).count(),
            two_edge_faces: face_sizes.iter().filter(|&&s| s == 2).count(),
            chain_fires: innermost && min_face.is_none_or(|m| m >= 3) && min_degree.is_some_and(|m| m >= 6),
            min_face,
            min_degree,
            innermost,
            face_sizes,
            cells,
        });
    }
    Ok(out)
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.darts.iter().enumerate() {
            writeln!(f, "dart {i} {} {} {}", d.rev, d.next, d.label)?;
        }
        for (i, face) in self.faces.iter().enumerate() {
            let d0 = face.dart0.map_or("-".to_string(), |x| x.to_string());
            match face.kind {
                FaceKind::Boundary => writeln!(f, "face {i} boundary - - - {d0}")?,
                FaceKind::Cell { relator, rotation, sign } => {
                    writeln!(f, "face {i} cell {relator} {rotation} {sign} {d0}")?
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = Error;

    /// Reads the dart and face tables; ids must be `0, 1, 2, ...` in order.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |n: usize, what: &str| Error::Parse(format!("diagram line {}: {what}", n + 1));
        let mut d = Diagram::default();
        for (n, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |k: usize| -> Result<usize> {
                f.get(k)
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| bad(n, "expected a number"))
            };
            match f[0] {
                "dart" if f.len() == 5 => {
                    if num(1)? != d.darts.len() {
                        return Err(bad(n, "dart ids must be consecutive"));
                    }
                    let w: RawWord = f[4].parse()?;
                    let [label] = w.0[..] else {
                        return Err(bad(n, "dart label must be one letter"));
                    };
                    d.darts.push(Dart {
                        rev: num(2)?,
                        next: num(3)?,
                        label,
                    });
                }
                "face" if f.len() == 7 => {
                    if num(1)? != d.faces.len() {
                        return Err(bad(n, "face ids must be consecutive"));
                    }
                    let dart0 = if f[6] == "-" { None } else { Some(num(6)?) };
                    let kind = match f[2] {
                        "boundary" => FaceKind::Boundary,
                        "cell" => FaceKind::Cell {
                            relator: num(3)?,
                            rotation: num(4)?,
                            sign: match f[5] {
                                "1" | "+1" => 1,
                                "-1" => -1,
                                _ => return Err(bad(n, "sign must be 1 or -1")),
                            },
                        },
                        _ => return Err(bad(n, "face kind must be boundary or cell")),
                    };
                    d.faces.push(Face { kind, dart0 });
                }
                _ => return Err(bad(n, "expected `dart id reverse next label` or `face id kind relator rotation sign dart0`")),
            }
        }
        Ok(d)
    }
}

/// Small hand-built diagrams with their presentations.
pub mod fixtures {
    use super::*;

    fn letters(s: &str) -> Vec<Letter> {
        s.parse::<RawWord>().expect("literal").0
    }

    fn pres(s: &str) -> Presentation {
        s.parse().expect("literal")
    }

    /// The single vertex.
    pub fn empty() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\n");
        let d = Diagram {
            darts: Vec::new(),
            faces: vec![Face {
                kind: FaceKind::Boundary,
                dart0: None,
            }],
        };
        (d, p)
    }

    /// One cell bounded by `y^-1 x y x^-2`.
    pub fn single_cell() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: Y x y X^2\n");
        let l = letters("Y x y X X");
        let d = from_edges(&p, &l, &[(Some(0), vec![1, 2, 3, 4, 5]), (None, vec![-5, -4, -3, -2, -1])])
            .expect("fixture");
        (d, p)
    }

    /// Two copies of `y^-1 x y x^-2` glued along their first `x^-1` edge.
    pub fn two_cells() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: Y x y X^2\n");
        // the last edge of the first cell is the x-edge of the second
        let l = letters("Y x y X X Y y X X");
        let d = from_edges(
            &p,
            &l,
            &[
                (Some(0), vec![1, 2, 3, 4, 5]),
                (Some(0), vec![6, -5, 7, 8, 9]),
                (None, vec![-4, -3, -2, -1, -6, -9, -8, -7]),
            ],
        )
        .expect("fixture");
        (d, p)
    }

    /// A band of three `t`-cells between the boundary letters of
    /// `t^-1 x^3 t y^-3`.
    pub fn band() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: T x t Y\n");
        // edges: T0..T3 (t), X0..X2 (x), Y0..Y2 (y)
        let l = letters("t t t t x x x y y y");
        let (t, x, y) = (|i: i64| i + 1, |i: i64| i + 5, |i: i64| i + 8);
        let mut faces: Vec<(Option<usize>, Vec<i64>)> =
            (0..3).map(|i| (Some(0), vec![-t(i), x(i), t(i + 1), -y(i)])).collect();
        faces.push((None, vec![y(0), y(1), y(2), -t(3), -x(2), -x(1), -x(0), t(0)]));
        (from_edges(&p, &l, &faces).expect("fixture"), p)
    }

    /// Two `t`-cells forming an annulus around a single `x`-edge.
    pub fn ring() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: T x t Y\n");
        // edges: i (x), s1 (t), s2 (t), o1 (y), o2 (y)
        let l = letters("x t t y y");
        let d = from_edges(
            &p,
            &l,
            &[
                (Some(0), vec![-2, 1, 3, -4]),
                (Some(0), vec![-3, -1, 2, 5]),
                (None, vec![4, -5]),
            ],
        )
        .expect("fixture");
        (d, p)
    }

    /// Three r-cells around a vertex; two `t`-edges join the first pair and
    /// one joins each other pair: four bands in three cables.
    pub fn cables() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: t t X T\nrel: t X T T\nrel: t X T\n");
        // edges: e1 e2 e3 e4 (t), a b c (x)
        let l = letters("t t t t x x x");
        let d = from_edges(
            &p,
            &l,
            &[
                (Some(0), vec![1, 2, -7, -4]),
                (Some(1), vec![3, -5, -2, -1]),
                (Some(2), vec![4, -6, -3]),
                (None, vec![5, 6, 7]),
            ],
        )
        .expect("fixture");
        (d, p)
    }

    /// One r-cell whose two `t`-letters are glued to each other.
    pub fn loop_cable() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: t T y\n");
        let l = letters("t y");
        let d = from_edges(&p, &l, &[(Some(0), vec![1, -1, 2]), (None, vec![-2])]).expect("fixture");
        (d, p)
    }

    /// Two r-cells joined by two bare `t`-edges around a third cell without
    /// `t`, so the two bands stay separate cables.
    pub fn parallel_cables() -> (Diagram, Presentation) {
        let p = pres("gens: x y t\nrel: y t x t\nrel: y T Y T\nrel: x Y\n");
        // edges: s1 s2 (t), pa (x), pb (y), la rb (y)
        let l = letters("t t x y y y");
        let d = from_edges(
            &p,
            &l,
            &[
                (Some(0), vec![5, 1, 3, 2]),
                (Some(1), vec![6, -2, -4, -1]),
                (Some(2), vec![4, -3]),
                (None, vec![-5, -6]),
            ],
        )
        .expect("fixture");
        (d, p)
    }
}
