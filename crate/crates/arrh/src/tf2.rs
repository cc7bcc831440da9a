//! TF2 arrangements: totally formal with scalar complex vanishing above
//! level two. Freeness and free multiplicities of these admit complete
//! combinatorial classifications through the codimension-two incidence
//! graph and the rank-two exponent data.

use crate::arrangement::MultiArrangement;
use crate::complexes::ComplexBundle;
use crate::derivations::{rank2_exponents, Derivation};
use crate::field::Scalar;
use crate::poly::Poly;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Tf2Error {
    #[error("arrangement is not TF2")]
    NotTf2,
    #[error("arrangement is not irreducible")]
    NotIrreducible,
    #[error("rank must be at least 3")]
    RankTooSmall,
    #[error("arrangement is not a free TF2 arrangement")]
    NotFreeTf2,
    #[error("arrangement is totally non-free: rank {rank} < {trips} triple flats")]
    TotallyNonFree { rank: usize, trips: usize },
    #[error("classifier requires characteristic zero")]
    CharacteristicNotZero,
    #[error("count identity |A| = sum(|A_X| - 1) fails; classifier does not apply")]
    CountMismatch,
    #[error("{0}")]
    Arrangement(#[from] crate::arrangement::ArrangementError),
}

/// Lattice ids of the rank-2 flats on at least three hyperplanes.
pub fn triple_flats(bundle: &ComplexBundle) -> Vec<usize> {
    bundle.lattice.triple_flats()
}

/// TF2: totally formal and the scalar complex vanishes above level 2.
pub fn is_tf2(bundle: &ComplexBundle) -> bool {
    let (tf, _) = crate::complexes::is_totally_formal(&bundle.arr, &bundle.lattice);
    tf && bundle.scalar.dims.iter().skip(3).all(|&d| d == 0)
}

/// The Euler-characteristic count data of an irreducible TF2 arrangement.
#[derive(Clone, Debug, Serialize)]
pub struct Tf2Combinatorics {
    pub size: usize,
    pub rank: usize,
    pub trip_count: usize,
    /// sum over triple flats of (|A_X| - 1).
    pub flat_sum: usize,
    /// |A| = r - #trip + sum(|A_X| - 1) (always true for irreducible TF2).
    pub identity_holds: bool,
    /// |A| <= 1 + sum(|A_X| - 1).
    pub bound_holds: bool,
    /// free <=> |A| = 1 + sum <=> #trip = r - 1 <=> supersolvable.
    pub free: bool,
    pub supersolvable: bool,
}

pub fn tf2_freeness_combinatorial(bundle: &ComplexBundle) -> Result<Tf2Combinatorics, Tf2Error> {
    if !bundle.arr.is_irreducible() {
        return Err(Tf2Error::NotIrreducible);
    }
    if !is_tf2(bundle) {
        return Err(Tf2Error::NotTf2);
    }
    let r = bundle.lattice.rank;
    let trips = triple_flats(bundle);
    let flat_sum: usize = trips
        .iter()
        .map(|&fi| bundle.lattice.flats[fi].size() - 1)
        .sum();
    let size = bundle.arr.size();
    let identity_holds = size == r - trips.len() + flat_sum;
    let bound_holds = size <= 1 + flat_sum;
    let free = size == 1 + flat_sum;
    Ok(Tf2Combinatorics {
        size,
        rank: r,
        trip_count: trips.len(),
        flat_sum,
        identity_holds,
        bound_holds,
        free,
        supersolvable: free,
    })
}

/// A supersolvable filtration A_1 in A_2 in ... in A_r with the flats that
/// produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Filtration {
    /// Triple-flat lattice ids X_1..X_(r-1), in build order.
    pub flats: Vec<usize>,
    /// Hyperplane index sets A_1..A_r.
    pub levels: Vec<Vec<usize>>,
}

pub fn supersolvable_filtration(bundle: &ComplexBundle) -> Result<Filtration, Tf2Error> {
    let comb = tf2_freeness_combinatorial(bundle)?;
    if !comb.free {
        return Err(Tf2Error::NotFreeTf2);
    }
    let trips = triple_flats(bundle);
    let arr = &bundle.arr;
    for &start in &trips {
        let mut order = vec![start];
        let mut current: BTreeSet<usize> =
            bundle.lattice.flats[start].hyperplanes.iter().copied().collect();
        let mut used: BTreeSet<usize> = [start].into_iter().collect();
        let mut levels: Vec<Vec<usize>> = vec![
            vec![*current.iter().next().unwrap()],
            current.iter().copied().collect(),
        ];
        loop {
            let next = trips.iter().copied().find(|x| {
                !used.contains(x)
                    && bundle.lattice.flats[*x]
                        .hyperplanes
                        .iter()
                        .any(|h| current.contains(h))
            });
            let Some(x) = next else { break };
            used.insert(x);
            order.push(x);
            current.extend(bundle.lattice.flats[x].hyperplanes.iter().copied());
            levels.push(current.iter().copied().collect());
        }
        if used.len() != trips.len() || current.len() != arr.size() {
            continue;
        }
        if verify_filtration(arr, &levels) {
            return Ok(Filtration {
                flats: order,
                levels,
            });
        }
    }
    Err(Tf2Error::NotFreeTf2)
}

/// Direct check of the rank property and intersection property.
fn verify_filtration(arr: &MultiArrangement, levels: &[Vec<usize>]) -> bool {
    for (i, level) in levels.iter().enumerate() {
        if arr.subset_rank(level) != i + 1 {
            return false;
        }
    }
    for i in 1..levels.len() {
        let prev = &levels[i - 1];
        let cur = &levels[i];
        for (ai, &a) in cur.iter().enumerate() {
            for &b in &cur[ai + 1..] {
                // some H'' in the previous level with alpha'' in span(a, b)
                let ok = prev.iter().any(|&c| {
                    c == a || c == b || arr.subset_rank(&[a, b, c]) == 2
                });
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// The codimension-two incidence graph: bipartite on triple flats and
/// hyperplanes, edge [X, H] when H < X.
#[derive(Clone, Debug, Serialize)]
pub struct IncidenceGraph {
    /// Lattice flat ids of the flat vertices.
    pub flats: Vec<usize>,
    /// Hyperplane indices of the hyperplane vertices.
    pub hyperplanes: Vec<usize>,
    /// (position in flats, hyperplane index).
    pub edges: Vec<(usize, usize)>,
    pub reduced: bool,
    pub is_tree: bool,
    pub connected: bool,
    pub has_unique_cycle: bool,
}

pub fn incidence_graph(bundle: &ComplexBundle, reduced: bool) -> IncidenceGraph {
    let trips = triple_flats(bundle);
    let mut valence = vec![0usize; bundle.arr.size()];
    let mut edges_all = Vec::new();
    for (fpos, &fi) in trips.iter().enumerate() {
        for &h in &bundle.lattice.flats[fi].hyperplanes {
            valence[h] += 1;
            edges_all.push((fpos, h));
        }
    }
    let keep = |h: usize| !reduced || valence[h] >= 2;
    let hyperplanes: Vec<usize> = (0..bundle.arr.size())
        .filter(|&h| valence[h] >= 1 && keep(h))
        .collect();
    let edges: Vec<(usize, usize)> = edges_all
        .into_iter()
        .filter(|&(_, h)| keep(h))
        .collect();
    // connectivity / cycle structure over the kept vertices
    let nv = trips.len() + hyperplanes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let hpos = |h: usize| trips.len() + hyperplanes.iter().position(|&x| x == h).unwrap();
    for &(f, h) in &edges {
        adj[f].push(hpos(h));
        adj[hpos(h)].push(f);
    }
    let mut seen = vec![false; nv];
    let mut stack = vec![0usize];
    if nv > 0 {
        seen[0] = true;
    }
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let connected = nv == 0 || count == nv;
    let is_tree = connected && edges.len() + 1 == nv;
    let has_unique_cycle = connected && edges.len() == nv;
    IncidenceGraph {
        flats: trips,
        hyperplanes,
        edges,
        reduced,
        is_tree,
        connected,
        has_unique_cycle,
    }
}

/// The two essential rank-two generators of D(A_X, m_X) for each triple
/// flat, lifted to ambient coordinates, with their degrees ascending.
pub fn rank2_generator_pairs(
    bundle: &ComplexBundle,
) -> Result<Vec<(usize, Vec<Derivation>, (u32, u32))>, Tf2Error> {
    let mut out = Vec::new();
    for &fi in &triple_flats(bundle) {
        let sub = bundle.arr.subarrangement(&bundle.lattice.flats[fi]);
        let (exps, gens) = rank2_exponents(&sub)?;
        out.push((fi, gens, exps));
    }
    Ok(out)
}

/// Presentation data for H^2(J^.) of an irreducible TF2 arrangement of rank
/// at least three: the matrix whose columns are the inclusion of
/// hyperplane generators and the rank-two generator pairs.
#[derive(Clone, Debug)]
pub struct Tf2Presentation {
    pub kappa: usize,
    /// Row labels: (flat lattice id, hyperplane index), with row degree
    /// m(H).
    pub rows: Vec<(usize, usize)>,
    /// Column labels.
    pub cols: Vec<PresentationColumn>,
    pub matrix: Vec<Vec<Poly>>,
    /// (flat, degrees of the two generators).
    pub generator_degrees: Vec<(usize, (u32, u32))>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PresentationColumn {
    Hyperplane(usize),
    /// (flat lattice id, which generator: 0 = lower degree, 1 = higher).
    Generator(usize, usize),
}

pub fn h2_presentation(bundle: &ComplexBundle) -> Result<Tf2Presentation, Tf2Error> {
    if bundle.lattice.rank < 3 {
        return Err(Tf2Error::RankTooSmall);
    }
    if !bundle.arr.is_irreducible() {
        return Err(Tf2Error::NotIrreducible);
    }
    if !is_tf2(bundle) {
        return Err(Tf2Error::NotTf2);
    }
    let arr = &bundle.arr;
    let field = arr.field;
    let trips = triple_flats(bundle);
    let mut rows = Vec::new();
    for &fi in &trips {
        for &h in &bundle.lattice.flats[fi].hyperplanes {
            rows.push((fi, h));
        }
    }
    let kappa = rows.len() - arr.size();
    let pairs = rank2_generator_pairs(bundle)?;
    let mut cols = Vec::new();
    let mut matrix: Vec<Vec<Poly>> = vec![Vec::new(); rows.len()];
    for h in 0..arr.size() {
        cols.push(PresentationColumn::Hyperplane(h));
        for (ri, &(_, rh)) in rows.iter().enumerate() {
            let v = if rh == h {
                Poly::constant(field, arr.num_vars, field.one())
            } else {
                Poly::zero(field, arr.num_vars)
            };
            matrix[ri].push(v);
        }
    }
    let mut generator_degrees = Vec::new();
    for (fi, gens, exps) in &pairs {
        generator_degrees.push((*fi, *exps));
        for (gi, g) in gens.iter().enumerate() {
            cols.push(PresentationColumn::Generator(*fi, gi));
            for (ri, &(rf, rh)) in rows.iter().enumerate() {
                let v = if rf == *fi {
                    let alpha = arr.form_poly(rh);
                    g.apply(&alpha).exact_div_power(&alpha, arr.mult(rh))
                } else {
                    Poly::zero(field, arr.num_vars)
                };
                matrix[ri].push(v);
            }
        }
    }
    Ok(Tf2Presentation {
        kappa,
        rows,
        cols,
        matrix,
        generator_degrees,
    })
}

impl Tf2Presentation {
    /// dim of coker(M)_d: the degree-d part of the target module
    /// (basis element [X,H] has degree m(H)) modulo the column span.
    pub fn coker_dim(&self, arr: &MultiArrangement, d: u32) -> usize {
        use crate::matrix::RowSpan;
        use crate::poly::monomials;
        let field = arr.field;
        let nvars = arr.num_vars;
        let monos: Vec<Vec<crate::poly::Mono>> = self
            .rows
            .iter()
            .map(|&(_, h)| {
                let m = arr.mult(h);
                if d >= m {
                    monomials(nvars, d - m)
                } else {
                    Vec::new()
                }
            })
            .collect();
        let offsets: Vec<usize> = monos
            .iter()
            .scan(0usize, |acc, m| {
                let o = *acc;
                *acc += m.len();
                Some(o)
            })
            .collect();
        let total: usize = monos.iter().map(|m| m.len()).sum();
        if total == 0 {
            return 0;
        }
        let mut span = RowSpan::new(field, total);
        // column degrees: hyperplane columns have degree m(H'); generator
        // columns have the generator degree
        for (ci, col) in self.cols.iter().enumerate() {
            let cdeg = match col {
                PresentationColumn::Hyperplane(h) => arr.mult(*h),
                PresentationColumn::Generator(fi, gi) => {
                    let (_, exps) = self
                        .generator_degrees
                        .iter()
                        .find(|(f, _)| f == fi)
                        .map(|(f, e)| (*f, *e))
                        .unwrap();
                    if *gi == 0 {
                        exps.1
                    } else {
                        exps.0
                    }
                }
            };
            if cdeg > d {
                continue;
            }
            for nu in monomials(nvars, d - cdeg) {
                let mut vec = vec![field.zero(); total];
                for (ri, &(_, _rh)) in self.rows.iter().enumerate() {
                    let entry = &self.matrix[ri][ci];
                    if entry.is_zero() {
                        continue;
                    }
                    let p = entry.mul_mono(&nu);
                    // p is homogeneous of degree d - m(rh)
                    let coeffs = p.coeff_vector(&monos[ri]);
                    for (k, c) in coeffs.into_iter().enumerate() {
                        vec[offsets[ri] + k] = c;
                    }
                }
                span.insert(vec);
            }
        }
        total - span.dim()
    }
}

/// Outcome of a TF2 free-multiplicity classification.
#[derive(Clone, Debug, Serialize)]
pub enum Tf2Classification {
    Free(Tf2Witness),
    NotFree { reason: String },
}

/// The witness backing a Free verdict.
#[derive(Clone, Debug, Serialize)]
pub enum Tf2Witness {
    /// Root flat (lattice id) and the directed hyperplane-to-flat edges
    /// (H, X) whose exponent conditions were verified.
    Orientation {
        root: usize,
        checked_edges: Vec<(usize, usize)>,
    },
    /// Cycle data: hyperplane/flat vertices in cycle order, the constant n,
    /// per-flat constants B_i (as exact strings) whose product differs
    /// from 1.
    Cycle {
        hyperplanes: Vec<usize>,
        flats: Vec<usize>,
        n: u32,
        b_values: Vec<String>,
        product: String,
    },
}

/// Free multiplicities on free TF2 arrangements: some rooting of the
/// reduced incidence tree orients every edge away from a triple flat so
/// that each directed edge H -> X has m(H) among the exponents of
/// (A_X, m_X).
pub fn classify_free_tf2(bundle: &ComplexBundle) -> Result<Tf2Classification, Tf2Error> {
    let comb = tf2_freeness_combinatorial(bundle)?;
    if !comb.free {
        return Err(Tf2Error::NotFreeTf2);
    }
    let g = incidence_graph(bundle, true);
    debug_assert!(g.is_tree);
    // adjacency over (flat position | hyperplane position)
    let nf = g.flats.len();
    let nh = g.hyperplanes.len();
    let hpos = |h: usize| nf + g.hyperplanes.iter().position(|&x| x == h).unwrap();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf + nh];
    for &(f, h) in &g.edges {
        adj[f].push(hpos(h));
        adj[hpos(h)].push(f);
    }
    // exponents per flat
    let mut exps = Vec::new();
    for &fi in &g.flats {
        let sub = bundle.arr.subarrangement(&bundle.lattice.flats[fi]);
        let (e, _) = rank2_exponents(&sub)?;
        exps.push(e);
    }
    let mut last_reason = String::new();
    for root in 0..nf {
        // BFS orientation away from the root; for each flat child X of a
        // hyperplane vertex H, require m(H) in exponents of (A_X, m_X)
        let mut parent = vec![usize::MAX; nf + nh];
        let mut seen = vec![false; nf + nh];
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        let mut checked = Vec::new();
        let mut ok = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
                if w < nf {
                    // directed edge H -> X with H = vertex v
                    let h = g.hyperplanes[v - nf];
                    let m = bundle.arr.mult(h);
                    let (d1, d2) = exps[w];
                    if m == d1 || m == d2 {
                        checked.push((h, g.flats[w]));
                    } else {
                        ok = false;
                        last_reason = format!(
                            "edge H{} -> flat {} needs exponent {} in ({}, {})",
                            h, g.flats[w], m, d1, d2
                        );
                    }
                }
            }
        }
        if ok {
            return Ok(Tf2Classification::Free(Tf2Witness::Orientation {
                root: g.flats[root],
                checked_edges: checked,
            }));
        }
    }
    Ok(Tf2Classification::NotFree {
        reason: format!("no admissible root orientation; last failure: {last_reason}"),
    })
}

/// Free multiplicities on non-free TF2 arrangements over characteristic
/// zero: the unique cycle of the reduced graph must carry a constant
/// multiplicity n, everything off the cycle must be simple, and the
/// per-flat root constants must be consistent with product different
/// from 1.
///
/// The constant for a flat X between cycle hyperplanes H_i, H_(i+1) is
/// a^(n-1) where each extra form factors as alpha_H ~ alpha_i - a
/// alpha_(i+1); this is the coefficient of the degree-n derivation
/// x^n d/dx + a^(n-1) y^n d/dy realizing the exponent n on (A_X, m_X).
pub fn classify_nonfree_tf2(bundle: &ComplexBundle) -> Result<Tf2Classification, Tf2Error> {
    if bundle.arr.field.characteristic() != 0 {
        return Err(Tf2Error::CharacteristicNotZero);
    }
    let comb = tf2_freeness_combinatorial(bundle)?;
    if comb.free {
        return Err(Tf2Error::NotFreeTf2);
    }
    if comb.rank < comb.trip_count {
        return Err(Tf2Error::TotallyNonFree {
            rank: comb.rank,
            trips: comb.trip_count,
        });
    }
    if comb.size != comb.flat_sum {
        return Err(Tf2Error::CountMismatch);
    }
    let g = incidence_graph(bundle, true);
    debug_assert!(g.has_unique_cycle);
    let (cycle_flats, cycle_hypers) = unique_cycle(bundle, &g);
    let k = cycle_flats.len();
    let arr = &bundle.arr;
    // (1) multiplicity one off the cycle
    for h in 0..arr.size() {
        if !cycle_hypers.contains(&h) && arr.mult(h) != 1 {
            return Ok(Tf2Classification::NotFree {
                reason: format!("hyperplane {h} off the cycle has multiplicity {}", arr.mult(h)),
            });
        }
    }
    // (2) constant multiplicity on the cycle
    let n = arr.mult(cycle_hypers[0]);
    if cycle_hypers.iter().any(|&h| arr.mult(h) != n) {
        return Ok(Tf2Classification::NotFree {
            reason: "cycle hyperplanes do not share one multiplicity".to_string(),
        });
    }
    // (3) per-flat root constants
    let field = arr.field;
    let mut b_values = Vec::new();
    let mut product = field.one();
    for i in 0..k {
        let fi = cycle_flats[i];
        let h_in = cycle_hypers[i];
        let h_out = cycle_hypers[(i + 1) % k];
        let flat = &bundle.lattice.flats[fi];
        let pair = crate::matrix::Mat::from_rows(
            field,
            vec![arr.form(h_in).to_vec(), arr.form(h_out).to_vec()],
        )
        .unwrap()
        .transpose();
        let mut b_flat: Option<Scalar> = None;
        for &h in &flat.hyperplanes {
            if h == h_in || h == h_out {
                continue;
            }
            let uv = pair.solve(arr.form(h)).expect("flat forms span rank 2");
            let (u, v) = (&uv[0], &uv[1]);
            if u.is_zero() || v.is_zero() {
                return Ok(Tf2Classification::NotFree {
                    reason: format!("form {h} is proportional to a cycle form"),
                });
            }
            // alpha_H ~ alpha_in - a alpha_out with a = -v/u
            let a = v.div(u).neg();
            let b = a.pow(n - 1);
            match &b_flat {
                None => b_flat = Some(b),
                Some(prev) if *prev == b => {}
                Some(prev) => {
                    return Ok(Tf2Classification::NotFree {
                        reason: format!(
                            "flat {fi}: root constants disagree ({prev} vs {b})"
                        ),
                    });
                }
            }
        }
        let b = b_flat.expect("triple flat has an extra hyperplane");
        product = product.mul(&b);
        b_values.push(b.to_string());
    }
    if product.is_one() {
        return Ok(Tf2Classification::NotFree {
            reason: "cycle product of root constants equals 1".to_string(),
        });
    }
    Ok(Tf2Classification::Free(Tf2Witness::Cycle {
        hyperplanes: cycle_hypers,
        flats: cycle_flats,
        n,
        b_values,
        product: product.to_string(),
    }))
}

/// The unique cycle of the reduced graph as alternating flat/hyperplane
/// sequences: flats[i] sits between hyperplanes[i] and hyperplanes[i+1 mod k].
fn unique_cycle(_bundle: &ComplexBundle, g: &IncidenceGraph) -> (Vec<usize>, Vec<usize>) {
    let nf = g.flats.len();
    let nh = g.hyperplanes.len();
    let hpos = |h: usize| nf + g.hyperplanes.iter().position(|&x| x == h).unwrap();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf + nh];
    for &(f, h) in &g.edges {
        adj[f].push(hpos(h));
        adj[hpos(h)].push(f);
    }
    // iteratively strip leaves; what remains is the cycle
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; nf + nh];
    let mut stack: Vec<usize> = (0..nf + nh).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for &w in &adj[v] {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] <= 1 {
                    stack.push(w);
                }
            }
        }
    }
    // walk the cycle starting from any remaining flat
    let start = (0..nf).find(|&v| !removed[v]).expect("cycle contains a flat");
    let mut flats = Vec::new();
    let mut hypers = Vec::new();
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        if cur < nf {
            flats.push(g.flats[cur]);
        } else {
            hypers.push(g.hyperplanes[cur - nf]);
        }
        let next = adj[cur]
            .iter()
            .copied()
            .find(|&w| !removed[w] && w != prev)
            .expect("cycle is 2-regular");
        prev = cur;
        cur = next;
        if cur == start {
            break;
        }
    }
    // rotate so hyperplanes[i] precedes flats[i]
    // walk order alternates flat, hyper, flat, hyper...; flats[i] sits
    // between hypers[i-1] and hypers[i] in walk order. Reindex: flat i is
    // between hyper (i-1) and hyper i; shift hypers by one so that
    // flats[i] is between hypers[i] and hypers[i+1].
    hypers.rotate_right(1);
    (flats, hypers)
}

/// Scans a rank-4 arrangement for rank-3 interval obstructions: intervals
/// [X, Y] of length 3 whose arrangement (B_Y)^X is TF2 with more triple
/// flats than its rank. Any hit certifies non-freeness of B.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalObstruction {
    /// Lattice ids (lower flat X, upper flat Y).
    pub lower: usize,
    pub upper: usize,
    pub trips: usize,
    pub rank: usize,
}

pub fn interval_obstruction_scan(
    bundle: &ComplexBundle,
) -> Result<Vec<IntervalObstruction>, Tf2Error> {
    if bundle.lattice.rank != 4 {
        return Err(Tf2Error::RankTooSmall);
    }
    let mut out = Vec::new();
    for (xi, x) in bundle.lattice.flats.iter().enumerate() {
        for (yi, y) in bundle.lattice.flats.iter().enumerate() {
            if y.rank != x.rank + 3 || !x.leq(y) {
                continue;
            }
            let sub = bundle.arr.subarrangement(y);
            // X as a flat of the subarrangement
            let positions: Vec<usize> = y.hyperplanes.iter().copied().collect();
            let x_in_sub: BTreeSet<usize> = x
                .hyperplanes
                .iter()
                .map(|h| positions.iter().position(|p| p == h).unwrap())
                .collect();
            let sub_lat = crate::arrangement::IntersectionLattice::build(&sub);
            let Some(fid) = sub_lat.find(&x_in_sub) else { continue };
            let restricted = sub.restriction(&sub_lat.flats[fid]);
            let rb = ComplexBundle::build(&restricted);
            if !is_tf2(&rb) {
                continue;
            }
            let trips = triple_flats(&rb).len();
            let rank = rb.lattice.rank;
            if rank < trips {
                out.push(IntervalObstruction {
                    lower: xi,
                    upper: yi,
                    trips,
                    rank,
                });
            }
        }
    }
    Ok(out)
}

/// The family A_(r,t) in r+1 variables:
/// x0 prod(x_i^2 - x0^2) (x1-x2)...(x_(r-1)-x_r)(x_r - t x1).
pub fn xrt_family(
    field: crate::field::Field,
    r: usize,
    t: &Scalar,
) -> Result<MultiArrangement, Tf2Error> {
    assert!(r >= 3, "family requires r >= 3");
    assert!(!t.is_zero(), "family requires t != 0");
    let n = r + 1;
    let mut forms: Vec<Vec<Scalar>> = Vec::new();
    let e = |i: usize, c: i64| {
        let mut v = vec![field.zero(); n];
        v[i] = field.from_i64(c);
        v
    };
    forms.push(e(0, 1));
    for i in 1..=r {
        let mut minus = e(i, 1);
        minus[0] = field.from_i64(-1);
        forms.push(minus);
        let mut plus = e(i, 1);
        plus[0] = field.from_i64(1);
        forms.push(plus);
    }
    for i in 1..r {
        let mut v = e(i, 1);
        v[i + 1] = field.from_i64(-1);
        forms.push(v);
    }
    let mut last = e(r, 1);
    last[1] = t.neg();
    forms.push(last);
    let mults = vec![1; forms.len()];
    Ok(MultiArrangement::new(field, forms, mults)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::graphic_arrangement;
    use crate::field::Field;

    fn q() -> Field {
        Field::Q
    }

    fn x3_bundle(t: i64, n: u32) -> ComplexBundle {
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, -t, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
            ],
            &[n, n, n, 1, 1, 1],
        )
        .unwrap();
        ComplexBundle::build(&arr)
    }

    fn cycle4_chord(mults: &[u32; 5]) -> ComplexBundle {
        // xyz(x-y)(y-z): graphic 4-cycle with a chord on a path
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, -1, 0],
                vec![0, 1, -1],
            ],
            mults,
        )
        .unwrap();
        ComplexBundle::build(&arr)
    }

    #[test]
    fn tf2_detection() {
        assert!(is_tf2(&x3_bundle(2, 1)));
        assert!(is_tf2(&cycle4_chord(&[1, 1, 1, 1, 1])));
        // A3 braid is not TF2: its clique complex is 3-dimensional
        let braid = graphic_arrangement(
            q(),
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            &[1; 6],
        )
        .unwrap();
        let b = ComplexBundle::build(&braid);
        assert!(!is_tf2(&b));
    }

    #[test]
    fn combinatorial_freeness() {
        // 4-cycle + chord: r = 3, two triple flats -> free, supersolvable
        let c = tf2_freeness_combinatorial(&cycle4_chord(&[1; 5])).unwrap();
        assert!(c.identity_holds && c.bound_holds);
        assert_eq!(c.trip_count, 2);
        assert!(c.free && c.supersolvable);
        // X3: three triple flats > r - 1 = 2 -> not free
        let c = tf2_freeness_combinatorial(&x3_bundle(2, 1)).unwrap();
        assert!(c.identity_holds && c.bound_holds);
        assert!(!c.free);
        assert_eq!(c.trip_count, 3);
    }

    #[test]
    fn filtration_for_free_tf2() {
        let f = supersolvable_filtration(&cycle4_chord(&[1; 5])).unwrap();
        assert_eq!(f.flats.len(), 2);
        assert_eq!(f.levels.len(), 3);
        assert_eq!(f.levels[2].len(), 5);
        // path of three triangles: xyzw(x-y)(y-z)(z-w)
        let arr = MultiArrangement::simple_from_int_forms(
            q(),
            &[
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, -1, 0, 0],
                vec![0, 1, -1, 0],
                vec![0, 0, 1, -1],
            ],
        )
        .unwrap();
        let b = ComplexBundle::build(&arr);
        let f = supersolvable_filtration(&b).unwrap();
        assert_eq!(f.flats.len(), 3);
        assert_eq!(f.levels.len(), 4);
        // non-free input refused
        assert!(matches!(
            supersolvable_filtration(&x3_bundle(2, 1)),
            Err(Tf2Error::NotFreeTf2)
        ));
    }

    #[test]
    fn incidence_graph_shapes() {
        // free TF2: reduced graph is a tree
        let g = incidence_graph(&cycle4_chord(&[1; 5]), true);
        assert!(g.is_tree);
        assert_eq!(g.flats.len(), 2);
        assert_eq!(g.hyperplanes.len(), 1); // only y is shared
        // X3: unique 6-cycle
        let g = incidence_graph(&x3_bundle(2, 1), true);
        assert!(g.has_unique_cycle && !g.is_tree);
        assert_eq!(g.hyperplanes.len(), 3);
        // full graph keeps the valence-one hyperplanes
        let g = incidence_graph(&x3_bundle(2, 1), false);
        assert_eq!(g.hyperplanes.len(), 6);
    }

    #[test]
    fn free_classifier_on_example_1_1_pattern() {
        // x^3 y^3 z^3 (x - 2z)(x + 2z)(y - z)^3: X2-flat x z (x-2z)(x+2z)
        // has exponents (5,3) since 2 = -(-2); m(z) = 3 is an exponent
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 0, -2],
                vec![1, 0, 2],
                vec![0, 1, -1],
            ],
            &[3, 3, 3, 1, 1, 3],
        )
        .unwrap();
        let b = ComplexBundle::build(&arr);
        match classify_free_tf2(&b).unwrap() {
            Tf2Classification::Free(Tf2Witness::Orientation { .. }) => {}
            other => panic!("expected free, got {other:?}"),
        }
        // with (x-2z)(x-3z) instead: exponents (4,4), X1 has (4,5); m(z)=3
        // is an exponent of neither
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 0, -2],
                vec![1, 0, -3],
                vec![0, 1, -1],
            ],
            &[3, 3, 3, 1, 1, 3],
        )
        .unwrap();
        let b = ComplexBundle::build(&arr);
        assert!(matches!(
            classify_free_tf2(&b).unwrap(),
            Tf2Classification::NotFree { .. }
        ));
    }

    #[test]
    fn free_classifier_cycle4_chord_condition() {
        // free iff m(y) >= m(x) + m(x-y) - 1 or m(y) >= m(z) + m(y-z) - 1
        // (characteristic zero). mults order: (x, y, z, x-y, y-z)
        let cases = [
            ([2, 3, 1, 2, 1], true),  // m(y)=3 >= 2+2-1
            ([2, 2, 1, 2, 1], false), // 2 < 3 and 2 < 1+1... 2 >= 1+1-1 = 1 -> true!
        ];
        // recompute the second case honestly: m(y)=2 >= m(z)+m(y-z)-1 = 1
        // so it is free; pick a genuinely non-free one
        let b = cycle4_chord(&cases[0].0);
        assert!(matches!(
            classify_free_tf2(&b).unwrap(),
            Tf2Classification::Free(_)
        ));
        let b = cycle4_chord(&[3, 2, 3, 3, 3]);
        // m(y)=2: 2 >= 3+3-1? no. 2 >= 3+3-1? no -> not free
        assert!(matches!(
            classify_free_tf2(&b).unwrap(),
            Tf2Classification::NotFree { .. }
        ));
        let b = cycle4_chord(&cases[1].0);
        assert!(matches!(
            classify_free_tf2(&b).unwrap(),
            Tf2Classification::Free(_)
        ));
    }

    #[test]
    fn nonfree_classifier_x3_law() {
        // free iff t^(n-1) != 1 (Saito-adjudicated)
        for (t, n, expect_free) in [
            (2, 2, true),
            (2, 3, true),
            (-1, 3, false),
            (-1, 2, true),
            (2, 1, false),
        ] {
            let b = x3_bundle(t, n);
            match classify_nonfree_tf2(&b).unwrap() {
                Tf2Classification::Free(Tf2Witness::Cycle { n: got_n, .. }) => {
                    assert!(expect_free, "t={t} n={n} should not be free");
                    assert_eq!(got_n, n);
                }
                Tf2Classification::Free(_) => unreachable!(),
                Tf2Classification::NotFree { .. } => {
                    assert!(!expect_free, "t={t} n={n} should be free");
                }
            }
        }
        // non-constant cycle multiplicity
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, -2, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
            ],
            &[2, 2, 3, 1, 1, 1],
        )
        .unwrap();
        let b = ComplexBundle::build(&arr);
        assert!(matches!(
            classify_nonfree_tf2(&b).unwrap(),
            Tf2Classification::NotFree { .. }
        ));
        // off-cycle multiplicity > 1
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, -2, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
            ],
            &[2, 2, 2, 2, 1, 1],
        )
        .unwrap();
        let b = ComplexBundle::build(&arr);
        assert!(matches!(
            classify_nonfree_tf2(&b).unwrap(),
            Tf2Classification::NotFree { .. }
        ));
    }

    #[test]
    fn nonfree_classifier_example_1_2() {
        // x^n y^n z^n (x - ay)(x - by)(y - z)(x - z): free iff
        // a^(n-1) = b^(n-1) != 1
        let build = |n: u32, a: i64, b: i64| {
            let arr = MultiArrangement::from_int_forms(
                q(),
                &[
                    vec![1, 0, 0],
                    vec![0, 1, 0],
                    vec![0, 0, 1],
                    vec![1, -a, 0],
                    vec![1, -b, 0],
                    vec![0, 1, -1],
                    vec![1, 0, -1],
                ],
                &[n, n, n, 1, 1, 1, 1],
            )
            .unwrap();
            ComplexBundle::build(&arr)
        };
        assert!(matches!(
            classify_nonfree_tf2(&build(3, 2, -2)).unwrap(),
            Tf2Classification::Free(_)
        ));
        assert!(matches!(
            classify_nonfree_tf2(&build(3, 2, 3)).unwrap(),
            Tf2Classification::NotFree { .. }
        ));
        assert!(matches!(
            classify_nonfree_tf2(&build(2, 2, -2)).unwrap(),
            Tf2Classification::NotFree { .. }
        ));
    }

    #[test]
    fn presentation_kappa_and_coker() {
        let b = x3_bundle(2, 1);
        let pres = h2_presentation(&b).unwrap();
        assert_eq!(pres.kappa, 3); // 9 - 6
        assert!(pres.kappa > 0);
        // coker dims match the J-complex homology in low degrees
        let table = crate::homology::homology_table(&b, 4);
        for d in 0..=4u32 {
            assert_eq!(pres.coker_dim(&b.arr, d), table.dim(2, d), "degree {d}");
        }
        // rank-2 input refused
        let r2 = MultiArrangement::simple_from_int_forms(q(), &[vec![1, 0], vec![0, 1]]).unwrap();
        let rb = ComplexBundle::build(&r2);
        assert!(matches!(h2_presentation(&rb), Err(Tf2Error::RankTooSmall)));
    }

    #[test]
    fn presentation_coker_matches_on_multiarrangement() {
        let b = x3_bundle(2, 2);
        let pres = h2_presentation(&b).unwrap();
        let table = crate::homology::homology_table(&b, 5);
        for d in 0..=5u32 {
            assert_eq!(pres.coker_dim(&b.arr, d), table.dim(2, d), "degree {d}");
        }
    }

    #[test]
    fn euler_identity_h2_degree_one() {
        // dim H^2(J)_1 = sum(|A_X| - 1) - |A| + 1 on simple TF2 inputs
        for bundle in [x3_bundle(2, 1), x3_bundle(3, 1), cycle4_chord(&[1; 5])] {
            let comb = tf2_freeness_combinatorial(&bundle).unwrap();
            let expected = comb.flat_sum as i64 - comb.size as i64 + 1;
            let table = crate::homology::homology_table(&bundle, 1);
            assert_eq!(table.dim(2, 1) as i64, expected);
        }
    }

    #[test]
    fn xrt_family_shape() {
        let t = q().from_i64(2);
        let arr = xrt_family(q(), 3, &t).unwrap();
        assert_eq!(arr.size(), 10);
        assert_eq!(arr.num_vars, 4);
        assert_eq!(arr.rank(), 4);
        let arr4 = xrt_family(q(), 4, &t).unwrap();
        assert_eq!(arr4.size(), 13);
        assert_eq!(arr4.rank(), 5);
        // X_(4,t) restriction is essential of rank 5... the arrangement
        // itself is essential in 5 vars
        assert!(arr4.is_essential());
    }

    #[test]
    fn ziegler_restriction_of_xrt_is_free_by_cycle() {
        // (X_(r,t), m^(H0)) with t generic: multiplicity 2 on the cycle,
        // 1 elsewhere; product of root constants is t != 1
        let t = q().from_i64(2);
        let arr = xrt_family(q(), 3, &t).unwrap();
        let zr = arr.ziegler_restriction(0).unwrap();
        assert_eq!(zr.total_multiplicity() as usize, arr.size() - 1);
        let b = ComplexBundle::build(&zr);
        match classify_nonfree_tf2(&b).unwrap() {
            Tf2Classification::Free(Tf2Witness::Cycle { n, product, .. }) => {
                assert_eq!(n, 2);
                // the walk direction of the cycle is deterministic but not
                // pinned; the product inverts under reversal
                assert!(product == "2" || product == "1/2");
            }
            other => panic!("expected free with cycle witness, got {other:?}"),
        }
        // t = -1 also free: product -1... for r = 3 the cycle has odd
        // length; verify it is still free
        let tm = q().from_i64(-1);
        let arrm = xrt_family(q(), 3, &tm).unwrap();
        let zrm = arrm.ziegler_restriction(0).unwrap();
        let bm = ComplexBundle::build(&zrm);
        assert!(matches!(
            classify_nonfree_tf2(&bm).unwrap(),
            Tf2Classification::Free(_)
        ));
    }

    #[test]
    fn interval_scan_finds_ziegler_style_obstruction() {
        // boolean rank 4: no obstruction
        let b4 = MultiArrangement::simple_from_int_forms(
            q(),
            &[
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        )
        .unwrap();
        let bundle = ComplexBundle::build(&b4);
        assert!(interval_obstruction_scan(&bundle).unwrap().is_empty());
        // cone over the Example-1.2-style arrangement: contains a closed
        // rank-3 interval copy with 3 triple flats > rank 3... that
        // arrangement has #trip = 3 = rank, not an obstruction;
        // the scan keys on #trip > rank, exercised by the Ziegler pair in
        // the acceptance suite. Here: rank-4 input required.
        let r3 = x3_bundle(2, 1);
        assert!(matches!(
            interval_obstruction_scan(&r3),
            Err(Tf2Error::RankTooSmall)
        ));
    }
}
